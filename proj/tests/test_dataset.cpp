#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <set>

#include "svx/dataset.hpp"
#include "svx/rng.hpp"

using namespace svx;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream os(path);
    os << content;
    return path.string();
}

}  // namespace

TEST_CASE("load_dataset parses comma CSV with header") {
    auto p = write_temp("svx_basic.csv", "a,b,target\n1,2,3\n4,5,6\n7,8,9\n");
    Dataset d = load_dataset(p, {.name = "basic"});
    REQUIRE(d.n_rows() == 3);
    REQUIRE(d.n_features() == 2);
    CHECK(d.columns == std::vector<std::string>{"a", "b"});
    CHECK(d.target_name == "target");
    CHECK(d.y(1) == 6.0);
    CHECK(d.X(2, 0) == 7.0);
}

TEST_CASE("load_dataset handles whitespace files without header") {
    auto p = write_temp("svx_ws.csv", "1 2 3\n4 5 6\n");
    Dataset d = load_dataset(p, {.name = "ws"});
    REQUIRE(d.n_rows() == 2);
    CHECK(d.columns == std::vector<std::string>{"v0", "v1"});
    CHECK(d.y(0) == 3.0);
}

TEST_CASE("rows with missing or unparsable cells are dropped and counted") {
    auto p = write_temp("svx_missing.csv", "a,b,t\n1,2,3\n1,?,5\n2,3,4\n,1,2\n");
    Dataset d = load_dataset(p, {.name = "m"});
    CHECK(d.n_rows() == 2);
    CHECK(d.dropped_rows == 2);
}

TEST_CASE("empty file raises empty-dataset error") {
    auto p = write_temp("svx_empty.csv", "");
    CHECK_THROWS_AS(load_dataset(p, {.name = "e"}), EmptyDatasetError);
    auto p2 = write_temp("svx_header_only.csv", "a,b,t\n");
    CHECK_THROWS_AS(load_dataset(p2, {.name = "e"}), EmptyDatasetError);
}

TEST_CASE("unreadable file raises io error") {
    CHECK_THROWS_AS(load_dataset("/nonexistent/nope.csv", {.name = "x"}), IoError);
}

TEST_CASE("missing target column raises schema error") {
    auto p = write_temp("svx_tgt.csv", "a,b,t\n1,2,3\n");
    CHECK_THROWS_AS(load_dataset(p, {.name = "x", .target = "quality"}), SchemaError);
}

TEST_CASE("named target column is excluded from features") {
    auto p = write_temp("svx_tgt2.csv", "a,quality,b\n1,9,2\n3,8,4\n");
    Dataset d = load_dataset(p, {.name = "x", .target = "quality"});
    CHECK(d.target_name == "quality");
    CHECK(d.columns == std::vector<std::string>{"a", "b"});
    CHECK(d.y(0) == 9.0);
    CHECK(d.X(0, 1) == 2.0);
}

TEST_CASE("dedup schema removes exact duplicate rows") {
    auto p = write_temp("svx_dup.csv", "1,2,3\n1,2,3\n4,5,6\n1,2,3\n");
    Dataset d = load_dataset(p, {.name = "d", .dedup = true});
    CHECK(d.n_rows() == 2);
    CHECK(d.deduped_rows == 2);
}

TEST_CASE("schema count mismatch attaches a warning but loads") {
    auto p = write_temp("svx_warn.csv", "1,2,3\n4,5,6\n");
    Dataset d = load_dataset(p, {.name = "w", .expected_columns = 5, .expected_rows = 99});
    CHECK(d.warnings.size() == 2);
    CHECK(d.n_rows() == 2);
}

TEST_CASE("bundled synthetic datasets match the registered shapes") {
    const std::string base = SVX_SOURCE_DIR "/data/synthetic/";
    struct Expect {
        const char* file;
        const char* name;
        int cols;
        int rows;
    };
    for (auto [file, name, cols, rows] : {Expect{"wine.csv", "wine", 12, 1359},
                                          Expect{"boston.csv", "boston", 14, 506},
                                          Expect{"yacht.csv", "yacht", 7, 308},
                                          Expect{"machine.csv", "machine", 10, 209},
                                          Expect{"auto.csv", "auto", 7, 398}}) {
        Dataset d = load_dataset(base + file, *find_schema(name));
        INFO(name);
        CHECK(d.warnings.empty());
        CHECK(d.n_features() + 1 == cols);
        CHECK(d.n_rows() == rows);
    }
}

namespace {

Dataset make_dataset(Eigen::Index n, Eigen::Index p, std::uint64_t seed = 7) {
    Dataset d;
    d.name = "synthetic";
    Rng rng(seed);
    d.X.resize(n, p);
    d.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) d.X(i, j) = rng.next_normal();
        d.y(i) = rng.next_normal();
    }
    for (Eigen::Index j = 0; j < p; ++j) d.columns.push_back("f" + std::to_string(j));
    d.target_name = "t";
    return d;
}

}  // namespace

TEST_CASE("split sizes follow round-half-up of the fraction") {
    CHECK(split(make_dataset(1359, 3), 0.2, 1).test.n_rows() == 272);
    // 506 * 0.2 = 101.2 rounds to 101 under round-half-up
    CHECK(split(make_dataset(506, 3), 0.2, 1).test.n_rows() == 101);
    CHECK(split(make_dataset(308, 3), 0.2, 1).test.n_rows() == 62);
    CHECK(split(make_dataset(209, 3), 0.2, 1).test.n_rows() == 42);
}

TEST_CASE("split is deterministic and partitions the rows") {
    Dataset d = make_dataset(40, 2);
    SplitPair a = split(d, 0.25, 99);
    SplitPair b = split(d, 0.25, 99);
    CHECK((a.test.X.array() == b.test.X.array()).all());
    CHECK((a.train.X.array() == b.train.X.array()).all());
    CHECK(a.train.n_rows() + a.test.n_rows() == 40);

    // disjoint and covering: every y value accounted for exactly once
    std::multiset<double> all(d.y.begin(), d.y.end());
    std::multiset<double> got(a.train.y.begin(), a.train.y.end());
    got.insert(a.test.y.begin(), a.test.y.end());
    CHECK(all == got);

    SplitPair c = split(d, 0.25, 100);
    CHECK_FALSE((a.test.y.array() == c.test.y.array()).all());  // different seed moves the split
}

TEST_CASE("split rejects bad fractions") {
    Dataset d = make_dataset(10, 2);
    CHECK_THROWS_AS(split(d, 0.0, 1), ArgumentError);
    CHECK_THROWS_AS(split(d, 1.0, 1), ArgumentError);
    CHECK_THROWS_AS(split(make_dataset(1, 2), 0.5, 1), ArgumentError);
}

TEST_CASE("select_features keeps target and is deterministic") {
    Dataset d = make_dataset(20, 8);
    Dataset s = select_features(d, 3, 5);
    REQUIRE(s.n_features() == 3);
    CHECK((s.y.array() == d.y.array()).all());
    Dataset s2 = select_features(d, 3, 5);
    CHECK((s.X.array() == s2.X.array()).all());
    CHECK(s.columns == s2.columns);

    Dataset full = select_features(d, 8, 123);
    CHECK(full.columns == d.columns);  // identity projection keeps column order
    CHECK((full.X.array() == d.X.array()).all());

    CHECK_THROWS_AS(select_features(d, 0, 1), ArgumentError);
    CHECK_THROWS_AS(select_features(d, 9, 1), ArgumentError);
}

TEST_CASE("select_features picks distinct in-range indices", "[property]") {
    Dataset d = make_dataset(10, 12);
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const auto k = 1 + rng.next_below(12);
        auto fs = choose_features(d, k, rng.next_u64());
        REQUIRE(fs.indices.size() == k);
        std::set<Eigen::Index> uniq(fs.indices.begin(), fs.indices.end());
        CHECK(uniq.size() == k);
        CHECK(*uniq.begin() >= 0);
        CHECK(*uniq.rbegin() < 12);
    }
}

TEST_CASE("standardize centers and scales train columns") {
    Dataset train = make_dataset(3, 1);
    train.X << 1, 2, 3;
    Dataset test = make_dataset(1, 1);
    test.X << 2;
    auto [tr, te, params] = standardize(train, test);
    CHECK_THAT(tr.X(0, 0), Catch::Matchers::WithinAbs(-1.0, 1e-12));
    CHECK_THAT(tr.X(1, 0), Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(tr.X(2, 0), Catch::Matchers::WithinAbs(1.0, 1e-12));
    // test value equal to the train mean lands at zero
    CHECK_THAT(te.X(0, 0), Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("zero-variance features pass through flagged") {
    Dataset train = make_dataset(3, 2);
    train.X.col(0) << 5, 5, 5;
    train.X.col(1) << 1, 2, 3;
    Dataset test = train;
    auto [tr, te, params] = standardize(train, test);
    CHECK(params.degenerate[0]);
    CHECK_FALSE(params.degenerate[1]);
    CHECK((tr.X.col(0).array() == train.X.col(0).array()).all());
}

TEST_CASE("standardize round-trips within 1e-10", "[property]") {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        Dataset d = make_dataset(30, 4, rng.next_u64());
        d.X.array() *= 13.7;
        d.X.array() += 5.0;
        ScalingParams p = fit_scaling(d.X);
        Eigen::MatrixXd back = p.inverse_transform(p.transform(d.X));
        CHECK((back - d.X).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("train statistics reach mean 0 sd 1 within 1e-10") {
    Dataset d = make_dataset(100, 3);
    d.X.array() *= 4.2;
    auto [tr, te, p] = standardize(d, d);
    for (Eigen::Index j = 0; j < 3; ++j) {
        CHECK(std::abs(tr.X.col(j).mean()) < 1e-10);
        const double sd = std::sqrt(
            (tr.X.col(j).array() - tr.X.col(j).mean()).square().sum() / (tr.X.rows() - 1));
        CHECK(std::abs(sd - 1.0) < 1e-10);
    }
}
