#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "svx/errors.hpp"

namespace svx {

enum class KernelKind { rbf, linear };

struct KernelSpec {
    KernelKind kind = KernelKind::rbf;
    double gamma = 1.0;  // rbf only
};

inline double kernel_eval(const KernelSpec& k, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    if (u.size() != v.size()) throw ArgumentError("kernel_eval: dimension mismatch");
    if (k.kind == KernelKind::linear) return u.dot(v);
    return std::exp(-k.gamma * (u - v).squaredNorm());
}

// Kernel matrix between row sets A (m x d) and B (n x d).
inline Eigen::MatrixXd kernel_matrix(const KernelSpec& k, const Eigen::MatrixXd& A,
                                     const Eigen::MatrixXd& B) {
    if (A.cols() != B.cols()) throw ArgumentError("kernel_matrix: dimension mismatch");
    if (k.kind == KernelKind::linear) return A * B.transpose();
    Eigen::VectorXd a2 = A.rowwise().squaredNorm();
    Eigen::VectorXd b2 = B.rowwise().squaredNorm();
    Eigen::MatrixXd d2 = (-2.0 * A * B.transpose());
    d2.colwise() += a2;
    d2.rowwise() += b2.transpose();
    return (-k.gamma * d2.array()).cwiseMax(-700.0).exp();
}

struct SvrParams {
    double C = 1.0;
    double epsilon = 0.1;
    KernelSpec kernel{};
    double tol = 1e-3;
    std::uint64_t max_iter = 1'000'000;
};

struct SvrModel {
    Eigen::MatrixXd support_vectors;
    Eigen::VectorXd beta;  // signed dual coefficients alpha_i - alpha_i*
    double bias = 0.0;
    KernelSpec kernel{};
    double dual_objective = 0.0;  // minimization form: 1/2 t'Qt + p't over (alpha, alpha*)
    std::uint64_t iterations = 0;
};

inline Eigen::VectorXd predict_svr(const SvrModel& m, const Eigen::MatrixXd& X) {
    if (m.support_vectors.rows() == 0)
        return Eigen::VectorXd::Constant(X.rows(), m.bias);
    if (X.cols() != m.support_vectors.cols())
        throw ArgumentError("predict_svr: dimension mismatch");
    return (kernel_matrix(m.kernel, X, m.support_vectors) * m.beta).array() + m.bias;
}

// Epsilon-SVR dual, solved SMO-style over the 2n variables t = (alpha, alpha*):
//   min 1/2 t'Qt + p't,  Q = [[K,-K],[-K,K]],  p = (eps - y, eps + y),
//   s.t. sum(alpha) - sum(alpha*) = 0,  0 <= t <= C.
// Working set is the maximal violating pair; stops when m - M < tol.
inline SvrModel fit_svr(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const SvrParams& p) {
    if (X.rows() != y.size() || X.rows() < 1) throw ArgumentError("fit_svr: bad training shape");
    if (p.C <= 0.0 || p.epsilon < 0.0 || p.tol <= 0.0) throw ArgumentError("fit_svr: bad params");
    const Eigen::Index n = X.rows();

    const Eigen::MatrixXd K = kernel_matrix(p.kernel, X, X);

    // sign of variable a: +1 for alpha block, -1 for alpha* block
    auto sgn = [n](Eigen::Index a) { return a < n ? 1.0 : -1.0; };
    auto row = [n](Eigen::Index a) { return a < n ? a : a - n; };

    Eigen::VectorXd t = Eigen::VectorXd::Zero(2 * n);
    Eigen::VectorXd grad(2 * n);  // grad = Qt + p; Qt = 0 at start
    for (Eigen::Index a = 0; a < 2 * n; ++a)
        grad(a) = p.epsilon - sgn(a) * y(row(a));

    const double C = p.C;
    std::uint64_t iter = 0;
    double gap = std::numeric_limits<double>::infinity();
    while (iter < p.max_iter) {
        // maximal violating pair over -z*g
        double up_best = -std::numeric_limits<double>::infinity();
        double low_best = std::numeric_limits<double>::infinity();
        Eigen::Index i = -1, j = -1;
        for (Eigen::Index a = 0; a < 2 * n; ++a) {
            const double z = sgn(a);
            const double v = -z * grad(a);
            const bool in_up = (z > 0 ? t(a) < C : t(a) > 0);
            const bool in_low = (z > 0 ? t(a) > 0 : t(a) < C);
            if (in_up && v > up_best) {
                up_best = v;
                i = a;
            }
            if (in_low && v < low_best) {
                low_best = v;
                j = a;
            }
        }
        gap = up_best - low_best;
        if (gap < p.tol || i < 0 || j < 0 || i == j) break;

        // step delta along u: u_i = z_i, u_j = -z_j (keeps sum(z*t) = 0 exactly)
        const double zi = sgn(i), zj = sgn(j);
        const Eigen::Index ri = row(i), rj = row(j);
        double H = K(ri, ri) + K(rj, rj) - 2.0 * K(ri, rj);
        if (H <= 1e-12) H = 1e-12;
        double delta = (up_best - low_best) / H;  // = -u'g / H

        // box clipping
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        if (zi > 0) { lo = std::max(lo, -t(i)); hi = std::min(hi, C - t(i)); }
        else        { lo = std::max(lo, t(i) - C); hi = std::min(hi, t(i)); }
        if (zj > 0) { lo = std::max(lo, t(j) - C); hi = std::min(hi, t(j)); }
        else        { lo = std::max(lo, -t(j)); hi = std::min(hi, C - t(j)); }
        delta = std::clamp(delta, lo, hi);
        if (delta == 0.0) break;

        t(i) += zi * delta;
        t(j) -= zj * delta;
        // exact box snap to keep the up/low sets crisp
        t(i) = std::clamp(t(i), 0.0, C);
        t(j) = std::clamp(t(j), 0.0, C);

        // grad update: dg_a = Q(a,i) dt_i + Q(a,j) dt_j, Q(a,b) = z_a z_b K(ra, rb)
        const double di = zi * delta, dj = -zj * delta;
        for (Eigen::Index a = 0; a < 2 * n; ++a) {
            const double za = sgn(a);
            const Eigen::Index ra = row(a);
            grad(a) += za * (zi * K(ra, ri) * di + zj * K(ra, rj) * dj);
        }
        ++iter;
    }
    if (gap >= p.tol && iter >= p.max_iter)
        throw ConvergenceError("fit_svr: max_iter exhausted", gap);

    // objective: f = 1/2 t'(g + p) since g = Qt + p
    double obj = 0.0;
    for (Eigen::Index a = 0; a < 2 * n; ++a)
        obj += 0.5 * t(a) * (grad(a) + (p.epsilon - sgn(a) * y(row(a))));

    Eigen::VectorXd beta_full(n);
    for (Eigen::Index r = 0; r < n; ++r) beta_full(r) = t(r) - t(r + n);

    // bias from free support vectors; midpoint of the feasible interval otherwise
    Eigen::VectorXd f = K * beta_full;  // prediction sans bias on training rows
    double b_sum = 0.0;
    int b_count = 0;
    double b_lo = -std::numeric_limits<double>::infinity();
    double b_hi = std::numeric_limits<double>::infinity();
    const double edge = 1e-8 * C;
    for (Eigen::Index r = 0; r < n; ++r) {
        const double E = y(r) - f(r);
        const double a_pos = t(r), a_neg = t(r + n);
        if (a_pos > edge && a_pos < C - edge) { b_sum += E - p.epsilon; ++b_count; }
        if (a_neg > edge && a_neg < C - edge) { b_sum += E + p.epsilon; ++b_count; }
        if (a_pos <= edge) b_lo = std::max(b_lo, E - p.epsilon);
        else if (a_pos >= C - edge) b_hi = std::min(b_hi, E - p.epsilon);
        if (a_neg <= edge) b_hi = std::min(b_hi, E + p.epsilon);
        else if (a_neg >= C - edge) b_lo = std::max(b_lo, E + p.epsilon);
    }
    double bias;
    if (b_count > 0) bias = b_sum / b_count;
    else if (std::isfinite(b_lo) && std::isfinite(b_hi)) bias = 0.5 * (b_lo + b_hi);
    else if (std::isfinite(b_lo)) bias = b_lo;
    else if (std::isfinite(b_hi)) bias = b_hi;
    else bias = y.mean();

    SvrModel m;
    m.kernel = p.kernel;
    m.bias = bias;
    m.dual_objective = obj;
    m.iterations = iter;
    std::vector<Eigen::Index> sv;
    for (Eigen::Index r = 0; r < n; ++r)
        if (beta_full(r) != 0.0) sv.push_back(r);
    m.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), X.cols());
    m.beta.resize(static_cast<Eigen::Index>(sv.size()));
    for (std::size_t s = 0; s < sv.size(); ++s) {
        m.support_vectors.row(static_cast<Eigen::Index>(s)) = X.row(sv[s]);
        m.beta(static_cast<Eigen::Index>(s)) = beta_full(sv[s]);
    }
    return m;
}

// libsvm-style default: gamma = 1/d
inline SvrParams default_svr_params(Eigen::Index n_features) {
    SvrParams p;
    p.kernel.gamma = n_features > 0 ? 1.0 / static_cast<double>(n_features) : 1.0;
    return p;
}

}  // namespace svx
