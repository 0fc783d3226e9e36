#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "svx/errors.hpp"
#include "svx/rng.hpp"

namespace svx {

struct Dataset {
    std::string name;
    std::vector<std::string> columns;  // feature names, target excluded
    Eigen::MatrixXd X;                 // n_rows x n_features
    Eigen::VectorXd y;
    std::string target_name;
    int dropped_rows = 0;                // rows removed for missing/unparsable cells
    int deduped_rows = 0;                // exact duplicates removed
    std::vector<std::string> warnings;   // schema mismatches etc.

    Eigen::Index n_rows() const { return X.rows(); }
    Eigen::Index n_features() const { return X.cols(); }
};

struct DatasetSchema {
    std::string name;
    std::string target = "last";  // column name, numeric index, or "last"
    int expected_columns = -1;    // features + target; -1 = unchecked
    int expected_rows = -1;
    bool dedup = false;  // drop exact duplicate rows after parsing
};

// The five registered dataset shapes (columns include the target).
inline std::vector<DatasetSchema> registered_schemas() {
    return {
        {.name = "wine", .expected_columns = 12, .expected_rows = 1359, .dedup = true},
        {.name = "boston", .expected_columns = 14, .expected_rows = 506},
        {.name = "yacht", .expected_columns = 7, .expected_rows = 308},
        {.name = "machine", .expected_columns = 10, .expected_rows = 209},
        {.name = "auto", .expected_columns = 7, .expected_rows = 398},
    };
}

inline std::optional<DatasetSchema> find_schema(const std::string& name) {
    for (auto& s : registered_schemas())
        if (s.name == name) return s;
    return std::nullopt;
}

namespace detail {

inline std::optional<double> parse_cell(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"'))
        s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end) return std::nullopt;
    return v;
}

inline std::vector<std::string> tokenize(const std::string& line, char delim) {
    std::vector<std::string> out;
    if (delim == ',' || delim == ';') {
        std::string cur;
        std::stringstream ss(line);
        while (std::getline(ss, cur, delim)) out.push_back(cur);
    } else {
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) out.push_back(tok);
    }
    for (auto& t : out) {
        while (!t.empty() && (t.back() == '\r' || t.back() == ' ' || t.back() == '\t')) t.pop_back();
        while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.erase(t.begin());
    }
    return out;
}

inline char detect_delimiter(const std::string& line) {
    if (line.find(',') != std::string::npos) return ',';
    if (line.find(';') != std::string::npos) return ';';
    return ' ';
}

}  // namespace detail

// Loads a comma- or whitespace-delimited numeric table. Header row is
// auto-detected (any non-numeric token in row 0). Rows with missing or
// unparsable cells are dropped and counted.
inline Dataset load_dataset(const std::string& path, const DatasetSchema& schema) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset file: " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r\n") != std::string::npos) lines.push_back(line);
    }
    if (lines.empty()) throw EmptyDatasetError("no rows in " + path);

    const char delim = detail::detect_delimiter(lines.front());
    auto first = detail::tokenize(lines.front(), delim);
    bool has_header = false;
    for (auto& tok : first)
        if (!detail::parse_cell(tok)) has_header = true;

    const std::size_t n_cols = first.size();
    std::vector<std::string> col_names;
    if (has_header) {
        col_names = first;
    } else {
        for (std::size_t c = 0; c < n_cols; ++c) col_names.push_back("v" + std::to_string(c));
    }

    std::vector<std::vector<double>> rows;
    int dropped = 0;
    for (std::size_t li = has_header ? 1 : 0; li < lines.size(); ++li) {
        auto toks = detail::tokenize(lines[li], delim);
        if (toks.size() != n_cols) {
            ++dropped;
            continue;
        }
        std::vector<double> row;
        row.reserve(n_cols);
        bool ok = true;
        for (auto& t : toks) {
            auto v = detail::parse_cell(t);
            if (!v) {
                ok = false;
                break;
            }
            row.push_back(*v);
        }
        if (ok)
            rows.push_back(std::move(row));
        else
            ++dropped;
    }
    if (rows.empty()) throw EmptyDatasetError("zero parsable rows in " + path);

    int deduped = 0;
    if (schema.dedup) {
        std::set<std::vector<double>> seen;
        std::vector<std::vector<double>> unique;
        for (auto& r : rows) {
            if (seen.insert(r).second)
                unique.push_back(std::move(r));
            else
                ++deduped;
        }
        rows = std::move(unique);
    }

    // Resolve target column.
    int target_idx = static_cast<int>(n_cols) - 1;
    if (schema.target != "last" && !schema.target.empty()) {
        auto it = std::find(col_names.begin(), col_names.end(), schema.target);
        if (it != col_names.end()) {
            target_idx = static_cast<int>(it - col_names.begin());
        } else {
            int idx = 0;
            auto [p, ec] = std::from_chars(schema.target.data(),
                                           schema.target.data() + schema.target.size(), idx);
            if (ec != std::errc{} || p != schema.target.data() + schema.target.size())
                throw SchemaError("target column '" + schema.target + "' not found in " + path);
            if (idx < 0) idx += static_cast<int>(n_cols);
            if (idx < 0 || idx >= static_cast<int>(n_cols))
                throw SchemaError("target index out of range for " + path);
            target_idx = idx;
        }
    }

    Dataset d;
    d.name = schema.name;
    d.target_name = col_names[static_cast<std::size_t>(target_idx)];
    for (std::size_t c = 0; c < n_cols; ++c)
        if (static_cast<int>(c) != target_idx) d.columns.push_back(col_names[c]);

    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto p = static_cast<Eigen::Index>(n_cols) - 1;
    d.X.resize(n, p);
    d.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index fc = 0;
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (static_cast<int>(c) == target_idx)
                d.y(i) = rows[static_cast<std::size_t>(i)][c];
            else
                d.X(i, fc++) = rows[static_cast<std::size_t>(i)][c];
        }
    }
    d.dropped_rows = dropped;
    d.deduped_rows = deduped;

    if (schema.expected_columns >= 0 && static_cast<int>(n_cols) != schema.expected_columns)
        d.warnings.push_back("schema mismatch: expected " + std::to_string(schema.expected_columns) +
                             " columns, found " + std::to_string(n_cols));
    if (schema.expected_rows >= 0 && static_cast<int>(n) != schema.expected_rows)
        d.warnings.push_back("schema mismatch: expected " + std::to_string(schema.expected_rows) +
                             " rows, found " + std::to_string(n));
    return d;
}

struct SplitPair {
    Dataset train;
    Dataset test;
    std::uint64_t seed = 0;
    double test_fraction = 0.2;
};

namespace detail {

inline Dataset take_rows(const Dataset& d, const std::vector<Eigen::Index>& idx) {
    Dataset out = d;
    out.X.resize(static_cast<Eigen::Index>(idx.size()), d.X.cols());
    out.y.resize(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out.X.row(static_cast<Eigen::Index>(i)) = d.X.row(idx[i]);
        out.y(static_cast<Eigen::Index>(i)) = d.y(idx[i]);
    }
    return out;
}

}  // namespace detail

// Deterministic shuffle split; |test| = round-half-up(test_fraction * n).
inline SplitPair split(const Dataset& d, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ArgumentError("test_fraction must lie in (0,1)");
    const Eigen::Index n = d.n_rows();
    if (n < 2) throw ArgumentError("need at least 2 rows to split");

    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    Rng rng(seed);
    for (std::size_t i = perm.size() - 1; i > 0; --i)
        std::swap(perm[i], perm[rng.next_below(i + 1)]);

    auto n_test = static_cast<std::size_t>(std::floor(test_fraction * static_cast<double>(n) + 0.5));
    n_test = std::clamp<std::size_t>(n_test, 1, static_cast<std::size_t>(n) - 1);

    std::vector<Eigen::Index> test_idx(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
    std::vector<Eigen::Index> train_idx(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
    std::sort(test_idx.begin(), test_idx.end());
    std::sort(train_idx.begin(), train_idx.end());

    SplitPair out;
    out.train = detail::take_rows(d, train_idx);
    out.test = detail::take_rows(d, test_idx);
    out.seed = seed;
    out.test_fraction = test_fraction;
    return out;
}

struct FeatureSubset {
    std::string parent;
    std::vector<Eigen::Index> indices;  // distinct, sorted, target excluded by construction
    std::size_t k = 0;
};

inline FeatureSubset choose_features(const Dataset& d, std::size_t k, std::uint64_t seed) {
    if (k < 1 || k > static_cast<std::size_t>(d.n_features()))
        throw ArgumentError("feature count k out of range");
    std::vector<Eigen::Index> pool(static_cast<std::size_t>(d.n_features()));
    std::iota(pool.begin(), pool.end(), Eigen::Index{0});
    Rng rng(seed);
    for (std::size_t i = 0; i < k; ++i)
        std::swap(pool[i], pool[i + rng.next_below(pool.size() - i)]);
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return {d.name, std::move(pool), k};
}

inline Dataset project(const Dataset& d, const FeatureSubset& fs) {
    Dataset out = d;
    out.columns.clear();
    out.X.resize(d.n_rows(), static_cast<Eigen::Index>(fs.indices.size()));
    for (std::size_t j = 0; j < fs.indices.size(); ++j) {
        out.columns.push_back(d.columns[static_cast<std::size_t>(fs.indices[j])]);
        out.X.col(static_cast<Eigen::Index>(j)) = d.X.col(fs.indices[j]);
    }
    return out;
}

// Uniform without replacement, target untouched, deterministic per seed.
inline Dataset select_features(const Dataset& d, std::size_t k, std::uint64_t seed) {
    return project(d, choose_features(d, k, seed));
}

struct ScalingParams {
    Eigen::VectorXd mean;
    Eigen::VectorXd sd;                 // sample sd; 1.0 substituted for degenerate features
    std::vector<bool> degenerate;       // zero-variance features passed through unscaled

    Eigen::MatrixXd transform(const Eigen::MatrixXd& X) const {
        return (X.rowwise() - mean.transpose()).array().rowwise() / sd.transpose().array();
    }
    Eigen::MatrixXd inverse_transform(const Eigen::MatrixXd& Z) const {
        return (Z.array().rowwise() * sd.transpose().array()).matrix().rowwise() + mean.transpose();
    }
};

inline ScalingParams fit_scaling(const Eigen::MatrixXd& X) {
    ScalingParams p;
    const auto n = static_cast<double>(X.rows());
    p.mean = X.colwise().mean();
    p.sd.resize(X.cols());
    p.degenerate.assign(static_cast<std::size_t>(X.cols()), false);
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double ss = (X.col(j).array() - p.mean(j)).square().sum();
        const double var = n > 1 ? ss / (n - 1.0) : 0.0;
        if (var <= 0.0) {
            p.degenerate[static_cast<std::size_t>(j)] = true;
            p.mean(j) = 0.0;  // pass degenerate features through unchanged
            p.sd(j) = 1.0;
        } else {
            p.sd(j) = std::sqrt(var);
        }
    }
    return p;
}

// Train statistics applied to both splits; features only, target untouched.
inline std::tuple<Dataset, Dataset, ScalingParams> standardize(const Dataset& train,
                                                               const Dataset& test) {
    ScalingParams p = fit_scaling(train.X);
    Dataset tr = train, te = test;
    tr.X = p.transform(train.X);
    te.X = p.transform(test.X);
    return {std::move(tr), std::move(te), std::move(p)};
}

}  // namespace svx
