#pragma once

#include <Eigen/Dense>

#include "svx/errors.hpp"

namespace svx {

struct LinModel {
    Eigen::VectorXd coefficients;
    double intercept = 0.0;
    bool rank_deficient = false;
};

// Least squares via complete orthogonal decomposition; minimum-norm solution
// when the augmented design is rank-deficient.
inline LinModel fit_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.rows() != y.size() || X.rows() < 1) throw ArgumentError("fit_ols: bad shape");
    Eigen::MatrixXd A(X.rows(), X.cols() + 1);
    A.col(0).setOnes();
    A.rightCols(X.cols()) = X;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    Eigen::VectorXd sol = cod.solve(y);
    LinModel m;
    m.intercept = sol(0);
    m.coefficients = sol.tail(X.cols());
    m.rank_deficient = cod.rank() < A.cols();
    return m;
}

inline Eigen::VectorXd predict_lin(const LinModel& m, const Eigen::MatrixXd& X) {
    if (X.cols() != m.coefficients.size()) throw ArgumentError("predict_lin: dimension mismatch");
    return (X * m.coefficients).array() + m.intercept;
}

// Weighted ridge with unpenalized intercept, solved on weighted-centered data:
//   min sum_i w_i (y_i - c - x_i b)^2 + lambda |b|^2
inline LinModel fit_weighted_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                   const Eigen::VectorXd& w, double lambda) {
    if (X.rows() != y.size() || X.rows() != w.size() || X.rows() < 1)
        throw ArgumentError("fit_weighted_ridge: bad shape");
    if (lambda < 0.0) throw ArgumentError("fit_weighted_ridge: negative lambda");
    const double wsum = w.sum();
    if (!(wsum > 0.0)) throw DegenerateDataError("fit_weighted_ridge: all weights zero");

    Eigen::RowVectorXd xm = (w.transpose() * X) / wsum;
    const double ym = w.dot(y) / wsum;
    Eigen::MatrixXd Xc = X.rowwise() - xm;
    Eigen::VectorXd yc = y.array() - ym;

    Eigen::MatrixXd XtW = Xc.transpose() * w.asDiagonal();
    Eigen::MatrixXd G = XtW * Xc;
    G.diagonal().array() += lambda;
    // tiny jitter keeps the unregularized degenerate case solvable
    if (lambda == 0.0) G.diagonal().array() += 1e-12 * (1.0 + G.diagonal().maxCoeff());
    LinModel m;
    m.coefficients = G.ldlt().solve(XtW * yc);
    m.intercept = ym - xm.dot(m.coefficients);
    return m;
}

}  // namespace svx
