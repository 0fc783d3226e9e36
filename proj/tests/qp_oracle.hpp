#pragma once

// Independent reference solver for the epsilon-SVR dual: accelerated projected
// gradient on min 1/2 t'Qt + p't over {0 <= t <= C, sum(z*t) = 0}, with the
// hyperplane-and-box projection found by bisection on its multiplier. Used
// only to check fit_svr's dual objective; shares no code with the SMO path.

#include <Eigen/Dense>
#include <cmath>

#include "svx/svr.hpp"

namespace svx::testing {

inline Eigen::VectorXd project_box_hyperplane(const Eigen::VectorXd& v, const Eigen::VectorXd& z,
                                              double C) {
    auto violation = [&](double lam) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i)
            s += z(i) * std::clamp(v(i) - lam * z(i), 0.0, C);
        return s;
    };
    double lo = -(v.cwiseAbs().maxCoeff() + C + 1.0);
    double hi = -lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (violation(mid) > 0.0 ? lo : hi) = mid;
    }
    const double lam = 0.5 * (lo + hi);
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = std::clamp(v(i) - lam * z(i), 0.0, C);
    return out;
}

// Returns the converged dual objective (minimization form, matching
// SvrModel::dual_objective).
inline double svr_dual_objective_oracle(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                        const svx::SvrParams& p) {
    const Eigen::Index n = X.rows();
    const Eigen::MatrixXd K = svx::kernel_matrix(p.kernel, X, X);
    Eigen::MatrixXd Q(2 * n, 2 * n);
    Q << K, -K, -K, K;
    Eigen::VectorXd pv(2 * n), z(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        pv(i) = p.epsilon - y(i);
        pv(i + n) = p.epsilon + y(i);
        z(i) = 1.0;
        z(i + n) = -1.0;
    }
    auto f = [&](const Eigen::VectorXd& t) { return 0.5 * t.dot(Q * t) + pv.dot(t); };

    // Lipschitz constant of the gradient
    double L = Q.operatorNorm();
    if (L <= 0.0) L = 1.0;
    const double step = 1.0 / L;

    Eigen::VectorXd t = Eigen::VectorXd::Zero(2 * n);
    Eigen::VectorXd t_prev = t, yk = t;
    double theta = 1.0;
    double best = f(t);
    for (int it = 0; it < 200000; ++it) {
        Eigen::VectorXd g = Q * yk + pv;
        Eigen::VectorXd t_next = project_box_hyperplane(yk - step * g, z, p.C);
        const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
        Eigen::VectorXd y_next = t_next + ((theta - 1.0) / theta_next) * (t_next - t_prev);
        const double fv = f(t_next);
        if (fv > f(t_prev)) {  // restart momentum
            y_next = t_next;
            theta = 1.0;
        } else {
            theta = theta_next;
        }
        const double move = (t_next - t_prev).lpNorm<Eigen::Infinity>();
        t_prev = t_next;
        yk = y_next;
        best = std::min(best, fv);
        if (move < 1e-14 && it > 100) break;
    }
    return best;
}

}  // namespace svx::testing
