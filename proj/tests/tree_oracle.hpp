#pragma once

// Exhaustive-search reference for CART splits: tries every (feature, midpoint
// threshold) pair directly and returns the minimum total child SSE. Used only
// to verify fit_tree's greedy choice.

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <vector>

namespace svx::testing {

inline double node_sse(const Eigen::VectorXd& y, const std::vector<Eigen::Index>& idx) {
    if (idx.empty()) return 0.0;
    double s = 0.0;
    for (auto i : idx) s += y(i);
    const double mean = s / static_cast<double>(idx.size());
    double sse = 0.0;
    for (auto i : idx) sse += (y(i) - mean) * (y(i) - mean);
    return sse;
}

// Minimum achievable total child SSE at a node, or +inf when no legal split.
inline double best_split_sse_oracle(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                    const std::vector<Eigen::Index>& idx, int min_bucket) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index f = 0; f < X.cols(); ++f) {
        std::vector<double> vals;
        for (auto i : idx) vals.push_back(X(i, f));
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        for (std::size_t v = 0; v + 1 < vals.size(); ++v) {
            const double thr = 0.5 * (vals[v] + vals[v + 1]);
            std::vector<Eigen::Index> left, right;
            for (auto i : idx) (X(i, f) < thr ? left : right).push_back(i);
            if (static_cast<int>(left.size()) < min_bucket ||
                static_cast<int>(right.size()) < min_bucket)
                continue;
            best = std::min(best, node_sse(y, left) + node_sse(y, right));
        }
    }
    return best;
}

}  // namespace svx::testing
