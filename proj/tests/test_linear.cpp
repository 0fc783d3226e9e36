#include <catch2/catch_amalgamated.hpp>

#include "svx/linear.hpp"
#include "svx/rng.hpp"

using namespace svx;

TEST_CASE("fit_ols recovers an exact linear relationship") {
    Eigen::MatrixXd X(3, 1);
    X << 1, 2, 3;
    Eigen::VectorXd y(3);
    y << 2, 4, 6;
    LinModel m = fit_ols(X, y);
    CHECK_THAT(m.coefficients(0), Catch::Matchers::WithinAbs(2.0, 1e-10));
    CHECK_THAT(m.intercept, Catch::Matchers::WithinAbs(0.0, 1e-10));
    CHECK((predict_lin(m, X) - y).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("constant target gives zero coefficients and mean intercept") {
    Eigen::MatrixXd X(4, 2);
    X << 1, 0, 2, 1, 3, -1, 4, 2;
    Eigen::VectorXd y = Eigen::VectorXd::Constant(4, 7.5);
    LinModel m = fit_ols(X, y);
    CHECK(m.coefficients.cwiseAbs().maxCoeff() < 1e-10);
    CHECK_THAT(m.intercept, Catch::Matchers::WithinAbs(7.5, 1e-10));
}

TEST_CASE("rank-deficient design is flagged and solved by minimum norm") {
    Eigen::MatrixXd X(4, 2);
    X.col(0) << 1, 2, 3, 4;
    X.col(1) = 2.0 * X.col(0);  // collinear
    Eigen::VectorXd y = 3.0 * X.col(0);
    LinModel m = fit_ols(X, y);
    CHECK(m.rank_deficient);
    CHECK((predict_lin(m, X) - y).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("residuals are orthogonal to the design", "[property]") {
    Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = 5 + static_cast<Eigen::Index>(rng.next_below(40));
        const auto d = 1 + static_cast<Eigen::Index>(rng.next_below(5));
        Eigen::MatrixXd X(n, d);
        Eigen::VectorXd y(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) X(i, j) = 3.0 * rng.next_normal();
            y(i) = rng.next_normal() * 5.0;
        }
        LinModel m = fit_ols(X, y);
        Eigen::VectorXd r = y - predict_lin(m, X);
        const double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
        CHECK(std::abs(r.sum()) <= 1e-8 * static_cast<double>(n) * scale);
        CHECK((X.transpose() * r).cwiseAbs().maxCoeff() <= 1e-8 * static_cast<double>(n) * scale);
    }
}

TEST_CASE("predict_lin basics") {
    LinModel m;
    m.coefficients = Eigen::VectorXd::Zero(2);
    m.intercept = 1.5;
    Eigen::MatrixXd X(3, 2);
    X.setRandom();
    CHECK((predict_lin(m, X).array() == 1.5).all());

    LinModel m2;
    m2.coefficients = Eigen::VectorXd::Constant(1, 2.0);
    m2.intercept = 0.0;
    Eigen::MatrixXd Q(2, 1);
    Q << 5, 5;
    Eigen::VectorXd pred = predict_lin(m2, Q);
    CHECK(pred(0) == 10.0);
    CHECK(pred(0) == pred(1));

    Eigen::MatrixXd bad(2, 3);
    bad.setRandom();
    CHECK_THROWS_AS(predict_lin(m2, bad), ArgumentError);
}

TEST_CASE("weighted ridge with uniform weights and zero lambda matches OLS") {
    Rng rng(9);
    Eigen::MatrixXd X(25, 3);
    Eigen::VectorXd y(25);
    for (Eigen::Index i = 0; i < 25; ++i) {
        for (int j = 0; j < 3; ++j) X(i, j) = rng.next_normal();
        y(i) = 1.0 + 2.0 * X(i, 0) - X(i, 2) + 0.2 * rng.next_normal();
    }
    LinModel ols = fit_ols(X, y);
    LinModel wr = fit_weighted_ridge(X, y, Eigen::VectorXd::Ones(25), 0.0);
    CHECK((ols.coefficients - wr.coefficients).cwiseAbs().maxCoeff() < 1e-8);
    CHECK_THAT(wr.intercept, Catch::Matchers::WithinAbs(ols.intercept, 1e-8));
}

TEST_CASE("huge lambda shrinks coefficients to the weighted mean model") {
    Rng rng(10);
    Eigen::MatrixXd X(30, 2);
    Eigen::VectorXd y(30), w(30);
    for (Eigen::Index i = 0; i < 30; ++i) {
        X(i, 0) = rng.next_normal();
        X(i, 1) = rng.next_normal();
        y(i) = 3.0 * X(i, 0) + rng.next_normal();
        w(i) = 0.1 + rng.next_double();
    }
    LinModel m = fit_weighted_ridge(X, y, w, 1e12);
    CHECK(m.coefficients.cwiseAbs().maxCoeff() < 1e-6);
    CHECK_THAT(m.intercept, Catch::Matchers::WithinAbs(w.dot(y) / w.sum(), 1e-6));
}

TEST_CASE("weighted ridge rejects degenerate inputs") {
    Eigen::MatrixXd X(3, 1);
    X << 1, 2, 3;
    Eigen::VectorXd y(3);
    y << 1, 2, 3;
    CHECK_THROWS_AS(fit_weighted_ridge(X, y, Eigen::VectorXd::Zero(3), 1.0), DegenerateDataError);
    CHECK_THROWS_AS(fit_weighted_ridge(X, y, Eigen::VectorXd::Ones(3), -1.0), ArgumentError);
}
