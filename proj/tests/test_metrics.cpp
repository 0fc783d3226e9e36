#include <catch2/catch_amalgamated.hpp>

#include "svx/experiment.hpp"
#include "svx/metrics.hpp"
#include "svx/rng.hpp"

using namespace svx;

TEST_CASE("rmse hand examples") {
    Eigen::VectorXd a(3), b(3);
    a << 1, 2, 3;
    b << 1, 2, 5;
    CHECK(rmse(a, a) == 0.0);
    CHECK_THAT(rmse(a, b), Catch::Matchers::WithinAbs(std::sqrt(4.0 / 3.0), 1e-12));
    CHECK(rmse(a, b) == rmse(b, a));

    Eigen::VectorXd c(2);
    CHECK_THROWS_AS(rmse(a, c), ArgumentError);
    Eigen::VectorXd e0, e1;
    CHECK_THROWS_AS(rmse(e0, e1), ArgumentError);
}

TEST_CASE("rmse properties on random vectors", "[property]") {
    Rng rng(55);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = 1 + static_cast<Eigen::Index>(rng.next_below(30));
        Eigen::VectorXd a(n), b(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            a(i) = 10.0 * rng.next_normal();
            b(i) = 10.0 * rng.next_normal();
        }
        CHECK(rmse(a, b) >= 0.0);
        CHECK(rmse(a, b) == rmse(b, a));
        CHECK(rmse(a, a) == 0.0);
        if (rmse(a, b) == 0.0) CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("global fidelity scores explainers against the black box") {
    const Eigen::Index n = 16;
    Eigen::VectorXd svr = Eigen::VectorXd::LinSpaced(n, 0.0, 3.0);
    FidelityReport zero = global_fidelity(svr, svr, svr, svr);
    CHECK(zero.rmse_mlr == 0.0);
    CHECK(zero.rmse_tree == 0.0);
    CHECK(zero.rmse_lime == 0.0);

    Eigen::VectorXd off = svr.array() + 1.0;
    FidelityReport r = global_fidelity(svr, svr, off, off);
    CHECK_THAT(r.rmse_mlr, Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK(r.rmse_tree == 0.0);
    CHECK_THAT(r.rmse_lime, Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("local win counts and the published percentage cells") {
    // tree identical to SVR, LIME offset: all records are tree wins
    Eigen::VectorXd svr = Eigen::VectorXd::LinSpaced(10, 0.0, 9.0);
    Eigen::VectorXd lime = svr.array() + 0.5;
    LocalWinCounts c = local_win_counts(svr, lime, lime, svr);
    CHECK(c.x1 == 10);
    CHECK(c.pct1() == 100.0);

    LocalWinCounts wine{.x1 = 236, .x2 = 260, .T = 272};
    CHECK_THAT(wine.pct1(), Catch::Matchers::WithinAbs(86.76, 0.005));
    CHECK_THAT(wine.pct2(), Catch::Matchers::WithinAbs(95.59, 0.005));

    LocalWinCounts hw{.x1 = 37, .x2 = 42, .T = 42};
    CHECK_THAT(hw.pct1(), Catch::Matchers::WithinAbs(88.10, 0.005));
    CHECK(hw.pct2() == 100.0);
}

TEST_CASE("tie handling in local win counts") {
    Eigen::VectorXd svr(3), tree(3), lin(3), lime(3);
    svr << 0, 0, 0;
    tree << 1, 1, 1;  // squared error 1 everywhere
    lin << 2, 2, 2;
    lime << 1, 1, -1;  // ties tree on every record
    LocalWinCounts incl = local_win_counts(tree, lin, lime, svr, true);
    CHECK(incl.x1 == 3);
    CHECK(incl.x2 == 0);
    LocalWinCounts strict = local_win_counts(tree, lin, lime, svr, false);
    CHECK(strict.x1 == 0);

    // tie rule bookkeeping: wins + strict losses + ties partition T
    int strict_losses = 0, ties = 0;
    for (int i = 0; i < 3; ++i) {
        const double et = std::pow(tree(i) - svr(i), 2);
        const double em = std::pow(lime(i) - svr(i), 2);
        if (et > em) ++strict_losses;
        if (et == em) ++ties;
    }
    CHECK(strict.x1 + strict_losses + ties == incl.T);
    CHECK(incl.x1 == strict.x1 + ties);
}

TEST_CASE("win rates over the published fidelity table") {
    auto rows = load_table2(SVX_SOURCE_DIR "/data/table2.csv");
    REQUIRE(rows.size() == 15);
    std::vector<FidelityReport> fid;
    for (auto& r : rows) fid.push_back(r.fidelity);
    WinRates w = win_rate(fid);
    CHECK(w.n_tree_lt_lime == 13);
    CHECK(w.pct_tree_lt_lime == 87.0);
    CHECK(w.n_mlr_lt_lime == 11);
    CHECK(w.pct_mlr_lt_lime == 73.0);
    CHECK(w.n_tree_lt_mlr == 9);
    CHECK(w.pct_tree_lt_mlr == 60.0);
}

TEST_CASE("win_rate rejects empty input") {
    CHECK_THROWS_AS(win_rate({}), ArgumentError);
}
