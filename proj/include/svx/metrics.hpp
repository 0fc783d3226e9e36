#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "svx/errors.hpp"

namespace svx {

inline double rmse(const Eigen::VectorXd& pred, const Eigen::VectorXd& ref) {
    if (pred.size() != ref.size() || pred.size() == 0)
        throw ArgumentError("rmse: length mismatch or empty");
    return std::sqrt((pred - ref).squaredNorm() / static_cast<double>(pred.size()));
}

struct FidelityReport {
    double rmse_mlr = 0.0;
    double rmse_tree = 0.0;
    double rmse_lime = 0.0;
};

// Explainers scored against the black-box outputs on a shared test set.
inline FidelityReport global_fidelity(const Eigen::VectorXd& svr_preds,
                                      const Eigen::VectorXd& tree_preds,
                                      const Eigen::VectorXd& lin_preds,
                                      const Eigen::VectorXd& lime_preds) {
    return {rmse(lin_preds, svr_preds), rmse(tree_preds, svr_preds), rmse(lime_preds, svr_preds)};
}

struct LocalWinCounts {
    int x1 = 0;  // records where the tree's squared error beats LIME's
    int x2 = 0;  // records where MLR's squared error beats LIME's
    int T = 0;
    double pct1() const { return 100.0 * x1 / T; }
    double pct2() const { return 100.0 * x2 / T; }
};

// Ties count as wins by default (<=); strict mode available behind the flag.
inline LocalWinCounts local_win_counts(const Eigen::VectorXd& tree_preds,
                                       const Eigen::VectorXd& lin_preds,
                                       const Eigen::VectorXd& lime_preds,
                                       const Eigen::VectorXd& svr_preds,
                                       bool include_ties = true) {
    const Eigen::Index T = svr_preds.size();
    if (tree_preds.size() != T || lin_preds.size() != T || lime_preds.size() != T || T < 1)
        throw ArgumentError("local_win_counts: length mismatch");
    LocalWinCounts c;
    c.T = static_cast<int>(T);
    for (Eigen::Index i = 0; i < T; ++i) {
        const double et = std::pow(tree_preds(i) - svr_preds(i), 2);
        const double el = std::pow(lin_preds(i) - svr_preds(i), 2);
        const double em = std::pow(lime_preds(i) - svr_preds(i), 2);
        if (include_ties ? et <= em : et < em) ++c.x1;
        if (include_ties ? el <= em : el < em) ++c.x2;
    }
    return c;
}

struct WinRates {
    double pct_tree_lt_lime = 0.0;
    double pct_mlr_lt_lime = 0.0;
    double pct_tree_lt_mlr = 0.0;
    int n_tree_lt_lime = 0;
    int n_mlr_lt_lime = 0;
    int n_tree_lt_mlr = 0;
    int n_rows = 0;
};

// Strict-inequality counts over runs, percentages rounded to nearest integer.
inline WinRates win_rate(const std::vector<FidelityReport>& rows) {
    if (rows.empty()) throw ArgumentError("win_rate: empty input");
    WinRates w;
    w.n_rows = static_cast<int>(rows.size());
    for (const auto& r : rows) {
        if (r.rmse_tree < r.rmse_lime) ++w.n_tree_lt_lime;
        if (r.rmse_mlr < r.rmse_lime) ++w.n_mlr_lt_lime;
        if (r.rmse_tree < r.rmse_mlr) ++w.n_tree_lt_mlr;
    }
    const double n = static_cast<double>(w.n_rows);
    w.pct_tree_lt_lime = std::round(100.0 * w.n_tree_lt_lime / n);
    w.pct_mlr_lt_lime = std::round(100.0 * w.n_mlr_lt_lime / n);
    w.pct_tree_lt_mlr = std::round(100.0 * w.n_tree_lt_mlr / n);
    return w;
}

}  // namespace svx
