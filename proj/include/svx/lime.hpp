#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "svx/dataset.hpp"
#include "svx/errors.hpp"
#include "svx/linear.hpp"
#include "svx/rng.hpp"
#include "svx/svr.hpp"

namespace svx {

struct LimeParams {
    int n_samples = 5000;
    double kernel_width = 0.0;  // <= 0: default 0.75 * sqrt(d)
    int n_features_used = 0;    // <= 0: all features
    double ridge_lambda = 1e-3;
    std::uint64_t seed = 0;
};

struct Explanation {
    Eigen::VectorXd instance;
    std::vector<Eigen::Index> selected_features;
    Eigen::VectorXd weights;  // over selected features
    double intercept = 0.0;
    double local_prediction = 0.0;
    double blackbox_prediction = 0.0;
};

// Gaussian sampling from the training marginals; row 0 is the instance itself.
inline Eigen::MatrixXd perturb(const Eigen::VectorXd& instance, const ScalingParams& stats,
                               int n, std::uint64_t seed) {
    if (instance.size() != stats.mean.size()) throw ArgumentError("perturb: dimension mismatch");
    Eigen::MatrixXd S(n, instance.size());
    S.row(0) = instance.transpose();
    Rng rng(seed);
    for (Eigen::Index i = 1; i < n; ++i)
        for (Eigen::Index j = 0; j < instance.size(); ++j) {
            const bool frozen = stats.degenerate[static_cast<std::size_t>(j)];
            const double draw = stats.mean(j) + stats.sd(j) * rng.next_normal();
            S(i, j) = frozen ? stats.mean(j) : draw;
        }
    return S;
}

// w_i = exp(-||z(instance) - z(sample_i)||^2 / width^2) in standardized coords.
inline Eigen::VectorXd proximity_weights(const Eigen::VectorXd& instance,
                                         const Eigen::MatrixXd& samples,
                                         const ScalingParams& stats, double width) {
    if (width <= 0.0) throw ArgumentError("proximity_weights: width must be positive");
    if (samples.cols() != instance.size()) throw ArgumentError("proximity_weights: dimension mismatch");
    Eigen::RowVectorXd zi = stats.transform(instance.transpose());
    Eigen::MatrixXd zs = stats.transform(samples);
    Eigen::VectorXd d2 = (zs.rowwise() - zi).rowwise().squaredNorm();
    return (-d2.array() / (width * width)).exp();
}

struct LocalFit {
    std::vector<Eigen::Index> selected;
    Eigen::VectorXd weights;
    double intercept = 0.0;
};

// Full weighted ridge first; keep the top-k features by |standardized
// coefficient|, then refit on those alone.
inline LocalFit fit_local_model(const Eigen::MatrixXd& samples, const Eigen::VectorXd& targets,
                                const Eigen::VectorXd& weights, const LimeParams& p) {
    const Eigen::Index d = samples.cols();
    if (weights.maxCoeff() <= 0.0) throw DegenerateDataError("fit_local_model: all weights zero");
    const Eigen::Index k = p.n_features_used <= 0
                               ? d
                               : std::min<Eigen::Index>(p.n_features_used, d);

    LinModel full = fit_weighted_ridge(samples, targets, weights, p.ridge_lambda);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    if (k < d) {
        Eigen::VectorXd sd(d);
        for (Eigen::Index j = 0; j < d; ++j) {
            const double mu = samples.col(j).mean();
            sd(j) = std::sqrt((samples.col(j).array() - mu).square().sum() /
                              std::max<double>(1.0, static_cast<double>(samples.rows()) - 1.0));
        }
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return std::abs(full.coefficients(a)) * sd(a) > std::abs(full.coefficients(b)) * sd(b);
        });
        order.resize(static_cast<std::size_t>(k));
        std::sort(order.begin(), order.end());
    }

    LocalFit fit;
    fit.selected = order;
    if (k == d) {
        fit.weights = full.coefficients;
        fit.intercept = full.intercept;
        return fit;
    }
    Eigen::MatrixXd sub(samples.rows(), k);
    for (Eigen::Index j = 0; j < k; ++j) sub.col(j) = samples.col(order[static_cast<std::size_t>(j)]);
    LinModel reduced = fit_weighted_ridge(sub, targets, weights, p.ridge_lambda);
    fit.weights = reduced.coefficients;
    fit.intercept = reduced.intercept;
    return fit;
}

inline double lime_default_width(Eigen::Index d) {
    return 0.75 * std::sqrt(static_cast<double>(d));
}

// perturb -> black box -> proximity weights -> weighted ridge
inline Explanation explain_instance(const Eigen::VectorXd& instance, const SvrModel& model,
                                    const ScalingParams& stats, const LimeParams& p) {
    const double width = p.kernel_width > 0.0 ? p.kernel_width : lime_default_width(instance.size());
    Eigen::MatrixXd samples = perturb(instance, stats, p.n_samples, p.seed);
    Eigen::VectorXd targets = predict_svr(model, samples);
    Eigen::VectorXd w = proximity_weights(instance, samples, stats, width);
    LocalFit fit = fit_local_model(samples, targets, w, p);

    Explanation e;
    e.instance = instance;
    e.selected_features = fit.selected;
    e.weights = fit.weights;
    e.intercept = fit.intercept;
    double pred = fit.intercept;
    for (Eigen::Index j = 0; j < fit.weights.size(); ++j)
        pred += fit.weights(j) * instance(fit.selected[static_cast<std::size_t>(j)]);
    e.local_prediction = pred;
    e.blackbox_prediction = targets(0);
    return e;
}

}  // namespace svx
