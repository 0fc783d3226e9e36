#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "svx/errors.hpp"

namespace svx {

// rpart-style stopping controls
struct TreeParams {
    int min_split = 20;
    int min_bucket = 7;
    int max_depth = 30;
    double cp = 0.01;  // minimum SSE improvement relative to the root SSE
};

struct TreeNode {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double prediction = 0.0;  // leaf mean; also stored for internal nodes
    int n_samples = 0;
    double sse = 0.0;          // node SSE around its mean
    double improvement = 0.0;  // SSE reduction achieved by the split (internal only)

    bool is_leaf() const { return feature < 0; }
};

struct TreeModel {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    TreeParams params;
    Eigen::Index n_features = 0;
};

namespace detail {

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double child_sse = 0.0;
    bool found = false;
};

// Best split by total child SSE over midpoint candidates; ties resolved to the
// lowest feature index then lowest threshold by scan order with strict compare.
inline SplitChoice best_split(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                              const std::vector<Eigen::Index>& idx, int min_bucket) {
    SplitChoice best;
    double best_sse = std::numeric_limits<double>::infinity();
    const auto m = static_cast<Eigen::Index>(idx.size());
    std::vector<Eigen::Index> order(idx);
    for (Eigen::Index f = 0; f < X.cols(); ++f) {
        std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return X(a, f) < X(b, f);
        });
        // left stats accumulate as the boundary sweeps right
        double ls = 0.0, ls2 = 0.0;
        double ts = 0.0, ts2 = 0.0;
        for (auto r : order) {
            ts += y(r);
            ts2 += y(r) * y(r);
        }
        for (Eigen::Index b = 0; b + 1 < m; ++b) {
            const double v = X(order[static_cast<std::size_t>(b)], f);
            ls += y(order[static_cast<std::size_t>(b)]);
            ls2 += y(order[static_cast<std::size_t>(b)]) * y(order[static_cast<std::size_t>(b)]);
            const double vn = X(order[static_cast<std::size_t>(b + 1)], f);
            if (vn <= v) continue;  // only split between distinct values
            const auto nl = static_cast<double>(b + 1);
            const auto nr = static_cast<double>(m - b - 1);
            if (nl < min_bucket || nr < min_bucket) continue;
            const double rs = ts - ls, rs2 = ts2 - ls2;
            const double sse = (ls2 - ls * ls / nl) + (rs2 - rs * rs / nr);
            if (sse < best_sse) {  // first hit wins ties: lowest feature, lowest threshold
                best_sse = sse;
                best.feature = static_cast<int>(f);
                best.threshold = 0.5 * (v + vn);
                best.child_sse = sse;
                best.found = true;
            }
        }
    }
    return best;
}

inline int grow(TreeModel& tree, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                std::vector<Eigen::Index>& idx, int depth, double root_sse) {
    const auto m = static_cast<double>(idx.size());
    double sum = 0.0, sum2 = 0.0;
    for (auto r : idx) {
        sum += y(r);
        sum2 += y(r) * y(r);
    }
    TreeNode node;
    node.prediction = sum / m;
    node.n_samples = static_cast<int>(idx.size());
    node.sse = std::max(0.0, sum2 - sum * sum / m);

    const TreeParams& p = tree.params;
    bool stop = static_cast<int>(idx.size()) < p.min_split || depth >= p.max_depth ||
                node.sse <= 0.0;
    SplitChoice sp;
    if (!stop) {
        sp = best_split(X, y, idx, p.min_bucket);
        if (!sp.found) stop = true;
        else if (root_sse > 0.0 && (node.sse - sp.child_sse) < p.cp * root_sse) stop = true;
    }
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(node);
    if (stop) return id;

    std::vector<Eigen::Index> left_idx, right_idx;
    for (auto r : idx)
        (X(r, sp.feature) < sp.threshold ? left_idx : right_idx).push_back(r);
    idx.clear();
    idx.shrink_to_fit();

    tree.nodes[static_cast<std::size_t>(id)].feature = sp.feature;
    tree.nodes[static_cast<std::size_t>(id)].threshold = sp.threshold;
    tree.nodes[static_cast<std::size_t>(id)].improvement = node.sse - sp.child_sse;
    const int l = grow(tree, X, y, left_idx, depth + 1, root_sse);
    tree.nodes[static_cast<std::size_t>(id)].left = l;
    const int r = grow(tree, X, y, right_idx, depth + 1, root_sse);
    tree.nodes[static_cast<std::size_t>(id)].right = r;
    return id;
}

}  // namespace detail

inline TreeModel fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const TreeParams& p = {}) {
    if (X.rows() != y.size() || X.rows() < 1) throw ArgumentError("fit_tree: bad training shape");
    if (p.min_bucket < 1 || p.min_bucket > p.min_split || p.cp < 0.0)
        throw ArgumentError("fit_tree: bad params");
    TreeModel tree;
    tree.params = p;
    tree.n_features = X.cols();
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(X.rows()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});

    const double mean = y.mean();
    const double root_sse = (y.array() - mean).square().sum();
    detail::grow(tree, X, y, idx, 0, root_sse);
    return tree;
}

inline double predict_tree_one(const TreeModel& m, const Eigen::RowVectorXd& x) {
    int id = 0;
    while (!m.nodes[static_cast<std::size_t>(id)].is_leaf()) {
        const auto& nd = m.nodes[static_cast<std::size_t>(id)];
        id = x(nd.feature) < nd.threshold ? nd.left : nd.right;
    }
    return m.nodes[static_cast<std::size_t>(id)].prediction;
}

inline Eigen::VectorXd predict_tree(const TreeModel& m, const Eigen::MatrixXd& X) {
    if (X.cols() != m.n_features) throw ArgumentError("predict_tree: dimension mismatch");
    Eigen::VectorXd out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) out(i) = predict_tree_one(m, X.row(i));
    return out;
}

struct RuleConjunct {
    std::string feature;
    int feature_index = 0;
    bool geq = false;  // false: value < threshold, true: value >= threshold
    double threshold = 0.0;
};

struct Rule {
    std::vector<RuleConjunct> conjuncts;  // root-to-leaf order
    double prediction = 0.0;
    int n_samples = 0;
};

namespace detail {

inline void collect_rules(const TreeModel& m, int id, std::vector<RuleConjunct>& path,
                          const std::vector<std::string>& names, std::vector<Rule>& out) {
    const auto& nd = m.nodes[static_cast<std::size_t>(id)];
    if (nd.is_leaf()) {
        out.push_back({path, nd.prediction, nd.n_samples});
        return;
    }
    const std::string& fname = names[static_cast<std::size_t>(nd.feature)];
    path.push_back({fname, nd.feature, false, nd.threshold});
    collect_rules(m, nd.left, path, names, out);
    path.back().geq = true;
    collect_rules(m, nd.right, path, names, out);
    path.pop_back();
}

}  // namespace detail

// One rule per leaf; evaluating the rule set reproduces predict_tree exactly.
inline std::vector<Rule> extract_rules(const TreeModel& m, const std::vector<std::string>& names) {
    std::vector<Rule> out;
    std::vector<RuleConjunct> path;
    detail::collect_rules(m, 0, path, names, out);
    return out;
}

inline bool rule_matches(const Rule& r, const Eigen::RowVectorXd& x) {
    for (const auto& c : r.conjuncts) {
        const bool ge = x(c.feature_index) >= c.threshold;
        if (ge != c.geq) return false;
    }
    return true;
}

inline std::string format_rule(const Rule& r) {
    std::string s = "IF ";
    if (r.conjuncts.empty()) s += "TRUE";
    for (std::size_t i = 0; i < r.conjuncts.size(); ++i) {
        if (i) s += " AND ";
        const auto& c = r.conjuncts[i];
        s += c.feature + (c.geq ? " >= " : " < ") + std::to_string(c.threshold);
    }
    s += " THEN predict = " + std::to_string(r.prediction);
    return s;
}

// Per-feature SSE reduction summed over internal nodes, normalized to sum 1.
inline Eigen::VectorXd feature_importance(const TreeModel& m) {
    Eigen::VectorXd imp = Eigen::VectorXd::Zero(m.n_features);
    for (const auto& nd : m.nodes)
        if (!nd.is_leaf()) imp(nd.feature) += nd.improvement;
    const double total = imp.sum();
    if (total > 0.0) imp /= total;
    return imp;
}

inline double training_sse(const TreeModel& m, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    return (predict_tree(m, X) - y).squaredNorm();
}

}  // namespace svx
