#pragma once

#include <json.hpp>
#include <ostream>
#include <vector>

#include "svx/lime.hpp"
#include "svx/svr.hpp"

namespace svx {

// Audit dump of a fitted SVR model; format is documented, not wire-stable.
inline void dump_svr(const SvrModel& m, std::ostream& os) {
    nlohmann::json j;
    j["kernel"] = m.kernel.kind == KernelKind::rbf ? "rbf" : "linear";
    if (m.kernel.kind == KernelKind::rbf) j["gamma"] = m.kernel.gamma;
    j["bias"] = m.bias;
    j["dual_objective"] = m.dual_objective;
    j["beta"] = std::vector<double>(m.beta.begin(), m.beta.end());
    auto& sv = j["support_vectors"] = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.support_vectors.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(m.support_vectors.cols()));
        for (Eigen::Index c = 0; c < m.support_vectors.cols(); ++c)
            row[static_cast<std::size_t>(c)] = m.support_vectors(i, c);
        sv.push_back(row);
    }
    os << j.dump(2) << '\n';
}

// One CSV row per explained instance: index, blackbox and local predictions,
// squared error, then (feature, weight) pairs.
inline void dump_explanations(const std::vector<Explanation>& es,
                              const std::vector<std::string>& feature_names, std::ostream& os) {
    os << "instance,blackbox_prediction,local_prediction,squared_error,features\n";
    for (std::size_t i = 0; i < es.size(); ++i) {
        const auto& e = es[i];
        const double err = (e.local_prediction - e.blackbox_prediction) *
                           (e.local_prediction - e.blackbox_prediction);
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g", i, e.blackbox_prediction,
                      e.local_prediction, err);
        os << buf;
        for (Eigen::Index j = 0; j < e.weights.size(); ++j) {
            const auto f = static_cast<std::size_t>(e.selected_features[static_cast<std::size_t>(j)]);
            std::snprintf(buf, sizeof(buf), ",%s,%.17g", feature_names[f].c_str(), e.weights(j));
            os << buf;
        }
        os << '\n';
    }
}

}  // namespace svx
