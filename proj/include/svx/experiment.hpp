#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "svx/dataset.hpp"
#include "svx/errors.hpp"
#include "svx/lime.hpp"
#include "svx/linear.hpp"
#include "svx/metrics.hpp"
#include "svx/rng.hpp"
#include "svx/svr.hpp"
#include "svx/tree.hpp"
#include "svx/wilcoxon.hpp"

namespace svx {

enum class FidelityReference { blackbox, ground_truth };

struct RunConfig {
    std::string dataset;
    std::size_t n_features = 0;
    std::uint64_t seed = 0;
    SvrParams svr{};
    bool svr_gamma_auto = true;  // gamma = 1/d after feature selection
    TreeParams tree{};
    LimeParams lime{};
    double test_fraction = 0.2;
    FidelityReference fidelity_reference = FidelityReference::blackbox;
    bool standardize_features = true;
    bool include_ties = true;
    std::string path;                       // dataset file
    DatasetSchema schema{};
};

struct RunRecord {
    RunConfig config;
    double direct_rmse_mlr = 0.0;  // ground-truth test RMSE of the direct linear model
    double direct_rmse_svr = 0.0;
    bool gate_passed = false;      // direct_rmse_mlr > direct_rmse_svr
    FidelityReport fidelity{};
    LocalWinCounts local{};
    std::vector<std::string> warnings;
};

struct Comparison {
    std::string label;
    std::optional<WilcoxonResult> result;
    std::string error;  // set when the test degenerates
};

struct SuiteSummary {
    std::vector<RunRecord> records;          // empty in replay mode
    std::vector<std::string> labels;         // per-row dataset names for the tables
    std::vector<int> n_vars;                 // per-row feature counts for table 2
    std::vector<FidelityReport> fidelity_rows;
    std::vector<LocalWinCounts> local_rows;
    WinRates rates{};
    std::vector<Comparison> comparisons;     // tree/lime, mlr/lime, tree/mlr, pct1/pct2
    int n_pct1_ge_pct2 = 0;                  // tie-inclusive count over local rows
    double alpha = 0.05;
};

// ---------------------------------------------------------------------------
// single run of the benchmark pipeline
// ---------------------------------------------------------------------------

inline RunRecord run_one(const RunConfig& c) {
    std::string stage = "load";
    try {
        Dataset full = load_dataset(c.path, c.schema);

        stage = "select_features";
        Dataset selected = select_features(full, c.n_features, derive_seed(c.seed, 1));

        stage = "split";
        SplitPair sp = split(selected, c.test_fraction, derive_seed(c.seed, 2));

        stage = "standardize";
        Dataset train = sp.train, test = sp.test;
        if (c.standardize_features) {
            ScalingParams raw;
            std::tie(train, test, raw) = standardize(sp.train, sp.test);
        }
        // LIME samples and weights via the marginals of the space the black box
        // actually sees, so refit the stats after any standardization
        ScalingParams stats = fit_scaling(train.X);

        stage = "fit_direct_models";
        SvrParams svr_params = c.svr;
        if (c.svr_gamma_auto && svr_params.kernel.kind == KernelKind::rbf)
            svr_params.kernel.gamma = 1.0 / static_cast<double>(train.n_features());
        LinModel direct_lin = fit_ols(train.X, train.y);
        SvrModel svr = fit_svr(train.X, train.y, svr_params);

        RunRecord rec;
        rec.config = c;
        rec.config.svr = svr_params;
        rec.direct_rmse_mlr = rmse(predict_lin(direct_lin, test.X), test.y);
        rec.direct_rmse_svr = rmse(predict_svr(svr, test.X), test.y);
        rec.gate_passed = rec.direct_rmse_mlr > rec.direct_rmse_svr;
        if (!rec.gate_passed)
            rec.warnings.push_back("validity gate failed: direct MLR RMSE <= direct SVR RMSE");
        for (auto& w : full.warnings) rec.warnings.push_back(w);

        stage = "fit_surrogates";
        Eigen::VectorXd svr_train = predict_svr(svr, train.X);
        Eigen::VectorXd svr_test = predict_svr(svr, test.X);
        TreeModel tree = fit_tree(train.X, svr_train, c.tree);
        LinModel lin = fit_ols(train.X, svr_train);
        Eigen::VectorXd tree_preds = predict_tree(tree, test.X);
        Eigen::VectorXd lin_preds = predict_lin(lin, test.X);

        stage = "lime";
        Eigen::VectorXd lime_preds(test.n_rows());
        for (Eigen::Index i = 0; i < test.n_rows(); ++i) {
            LimeParams lp = c.lime;
            lp.seed = derive_seed(c.seed, 1000 + static_cast<std::uint64_t>(i));
            Explanation e = explain_instance(test.X.row(i).transpose(), svr, stats, lp);
            lime_preds(i) = e.local_prediction;
        }

        stage = "fidelity";
        const Eigen::VectorXd& ref =
            c.fidelity_reference == FidelityReference::blackbox ? svr_test : test.y;
        rec.fidelity = global_fidelity(ref, tree_preds, lin_preds, lime_preds);
        rec.local = local_win_counts(tree_preds, lin_preds, lime_preds, svr_test, c.include_ties);
        return rec;
    } catch (const std::exception& e) {
        throw std::runtime_error("run_one failed at stage '" + stage + "': " + e.what());
    }
}

// ---------------------------------------------------------------------------
// aggregation
// ---------------------------------------------------------------------------

namespace detail {

inline Comparison compare(const std::string& label, const Eigen::VectorXd& a,
                          const Eigen::VectorXd& b) {
    Comparison c;
    c.label = label;
    try {
        c.result = wilcoxon_signed_rank(a, b);
    } catch (const std::exception& e) {
        c.error = e.what();
    }
    return c;
}

}  // namespace detail

inline SuiteSummary summarize_rows(std::vector<FidelityReport> fidelity,
                                   std::vector<LocalWinCounts> local, double alpha = 0.05) {
    if (fidelity.size() < 2) throw ArgumentError("summarize_rows: need at least 2 runs");
    SuiteSummary s;
    s.alpha = alpha;
    s.fidelity_rows = std::move(fidelity);
    s.local_rows = std::move(local);
    s.rates = win_rate(s.fidelity_rows);

    const auto n = static_cast<Eigen::Index>(s.fidelity_rows.size());
    Eigen::VectorXd tree(n), mlr(n), lime(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        tree(i) = s.fidelity_rows[static_cast<std::size_t>(i)].rmse_tree;
        mlr(i) = s.fidelity_rows[static_cast<std::size_t>(i)].rmse_mlr;
        lime(i) = s.fidelity_rows[static_cast<std::size_t>(i)].rmse_lime;
    }
    s.comparisons.push_back(detail::compare("tree vs lime (fidelity RMSE)", tree, lime));
    s.comparisons.push_back(detail::compare("mlr vs lime (fidelity RMSE)", mlr, lime));
    s.comparisons.push_back(detail::compare("tree vs mlr (fidelity RMSE)", tree, mlr));

    if (!s.local_rows.empty()) {
        const auto m = static_cast<Eigen::Index>(s.local_rows.size());
        Eigen::VectorXd p1(m), p2(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            p1(i) = s.local_rows[static_cast<std::size_t>(i)].pct1();
            p2(i) = s.local_rows[static_cast<std::size_t>(i)].pct2();
            if (p1(i) >= p2(i)) ++s.n_pct1_ge_pct2;
        }
        s.comparisons.push_back(detail::compare("pct1 vs pct2 (local wins)", p1, p2));
    }
    return s;
}

inline SuiteSummary run_suite(const std::vector<RunConfig>& configs) {
    if (configs.size() < 2) throw ArgumentError("run_suite: need at least 2 runs");
    std::vector<RunRecord> records;
    records.reserve(configs.size());
    for (const auto& c : configs) records.push_back(run_one(c));

    std::vector<FidelityReport> fid;
    std::vector<LocalWinCounts> loc;
    for (const auto& r : records) {
        fid.push_back(r.fidelity);
        loc.push_back(r.local);
    }
    SuiteSummary s = summarize_rows(std::move(fid), std::move(loc));
    for (const auto& r : records) {
        s.labels.push_back(r.config.dataset);
        s.n_vars.push_back(static_cast<int>(r.config.n_features));
    }
    s.records = std::move(records);
    return s;
}

// ---------------------------------------------------------------------------
// table CSV replay (the primary acceptance path)
// ---------------------------------------------------------------------------

struct Table2Row {
    std::string dataset;
    int n_vars = 0;
    FidelityReport fidelity{};
};

struct Table3Row {
    std::string dataset;
    LocalWinCounts counts{};
};

inline std::vector<Table2Row> load_table2(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open table file: " + path);
    std::vector<Table2Row> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto toks = detail::tokenize(line, ',');
        if (toks.size() != 5) throw SchemaError("table2: expected 5 columns in: " + line);
        if (!detail::parse_cell(toks[1])) continue;  // header
        Table2Row r;
        r.dataset = toks[0];
        r.n_vars = static_cast<int>(*detail::parse_cell(toks[1]));
        r.fidelity.rmse_mlr = *detail::parse_cell(toks[2]);
        r.fidelity.rmse_tree = *detail::parse_cell(toks[3]);
        r.fidelity.rmse_lime = *detail::parse_cell(toks[4]);
        rows.push_back(r);
    }
    if (rows.empty()) throw SchemaError("table2: no data rows in " + path);
    return rows;
}

inline std::vector<Table3Row> load_table3(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open table file: " + path);
    std::vector<Table3Row> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto toks = detail::tokenize(line, ',');
        // derived percentage columns may trail the counts; ignore them
        if (toks.size() < 4) throw SchemaError("table3: expected 4+ columns in: " + line);
        if (!detail::parse_cell(toks[1])) continue;
        Table3Row r;
        r.dataset = toks[0];
        r.counts.x1 = static_cast<int>(*detail::parse_cell(toks[1]));
        r.counts.x2 = static_cast<int>(*detail::parse_cell(toks[2]));
        r.counts.T = static_cast<int>(*detail::parse_cell(toks[3]));
        rows.push_back(r);
    }
    if (rows.empty()) throw SchemaError("table3: no data rows in " + path);
    return rows;
}

// All cross-technique statistics recomputed from published numbers, no fitting.
inline SuiteSummary replay_tables(const std::string& table2_csv, const std::string& table3_csv) {
    auto t2 = load_table2(table2_csv);
    auto t3 = load_table3(table3_csv);
    std::vector<FidelityReport> fid;
    std::vector<LocalWinCounts> loc;
    for (auto& r : t2) fid.push_back(r.fidelity);
    for (auto& r : t3) loc.push_back(r.counts);
    SuiteSummary s = summarize_rows(std::move(fid), std::move(loc));
    for (auto& r : t2) {
        s.labels.push_back(r.dataset);
        s.n_vars.push_back(r.n_vars);
    }
    return s;
}

// ---------------------------------------------------------------------------
// manifest: plain key=value, one run per "run = <dataset> <n_features>" line
// ---------------------------------------------------------------------------

struct Manifest {
    std::uint64_t seed = 42;
    double test_fraction = 0.2;
    FidelityReference fidelity_reference = FidelityReference::blackbox;
    bool include_ties = true;
    bool standardize = true;
    std::map<std::string, DatasetSchema> schemas;
    std::map<std::string, std::string> paths;
    std::vector<std::pair<std::string, std::size_t>> runs;  // (dataset, n_features)
};

inline Manifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path);
    Manifest m;
    std::string line;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) continue;

        if (key == "seed") m.seed = std::stoull(val);
        else if (key == "test_fraction") m.test_fraction = std::stod(val);
        else if (key == "fidelity_reference")
            m.fidelity_reference =
                val == "truth" ? FidelityReference::ground_truth : FidelityReference::blackbox;
        else if (key == "ties") m.include_ties = (val != "strict");
        else if (key == "standardize") m.standardize = (val != "false" && val != "0");
        else if (key == "run") {
            std::istringstream ss(val);
            std::string ds;
            std::size_t k = 0;
            ss >> ds >> k;
            if (ds.empty() || k == 0) throw SchemaError("manifest: bad run line: " + val);
            m.runs.emplace_back(ds, k);
        } else if (key.rfind("dataset.", 0) == 0) {
            const auto rest = key.substr(8);
            const auto dot = rest.find('.');
            if (dot == std::string::npos) throw SchemaError("manifest: bad key: " + key);
            const std::string name = rest.substr(0, dot);
            const std::string field = rest.substr(dot + 1);
            auto& schema = m.schemas[name];
            if (schema.name.empty()) {
                if (auto reg = find_schema(name)) schema = *reg;
                schema.name = name;
            }
            if (field == "path") m.paths[name] = val;
            else if (field == "target") schema.target = val;
            else if (field == "columns") schema.expected_columns = std::stoi(val);
            else if (field == "rows") schema.expected_rows = std::stoi(val);
            else if (field == "dedup") schema.dedup = (val == "true" || val == "1");
            else throw SchemaError("manifest: unknown dataset field: " + field);
        }
    }
    if (m.runs.empty()) throw SchemaError("manifest: no run lines in " + path);
    return m;
}

inline std::vector<RunConfig> manifest_configs(const Manifest& m, const std::string& base_dir = "") {
    std::vector<RunConfig> out;
    for (std::size_t i = 0; i < m.runs.size(); ++i) {
        const auto& [ds, k] = m.runs[i];
        auto pit = m.paths.find(ds);
        if (pit == m.paths.end()) throw SchemaError("manifest: no path for dataset " + ds);
        auto sit = m.schemas.find(ds);

        RunConfig c;
        c.dataset = ds;
        c.n_features = k;
        c.seed = derive_seed(m.seed, i);
        c.test_fraction = m.test_fraction;
        c.fidelity_reference = m.fidelity_reference;
        c.include_ties = m.include_ties;
        c.standardize_features = m.standardize;
        c.path = pit->second;
        if (!base_dir.empty() && !std::filesystem::path(c.path).is_absolute())
            c.path = (std::filesystem::path(base_dir) / c.path).string();
        c.schema = sit != m.schemas.end() ? sit->second : DatasetSchema{.name = ds};
        out.push_back(std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// output files
// ---------------------------------------------------------------------------

namespace detail {

inline std::string full(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fixed(double v, int prec) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
    return buf;
}

inline std::string row_label(const SuiteSummary& s, std::size_t i) {
    return i < s.labels.size() ? s.labels[i] : "run" + std::to_string(i);
}

inline int row_vars(const SuiteSummary& s, std::size_t i) {
    return i < s.n_vars.size() ? s.n_vars[i] : 0;
}

}  // namespace detail

inline void write_table2_csv(std::ostream& os, const SuiteSummary& s) {
    os << "Dataset,Number of variables used,RMSE using multi-linear regression,"
          "RMSE using Decision trees,RMSE using LIME\n";
    for (std::size_t i = 0; i < s.fidelity_rows.size(); ++i) {
        const auto& f = s.fidelity_rows[i];
        os << detail::row_label(s, i) << ',' << detail::row_vars(s, i) << ','
           << detail::full(f.rmse_mlr) << ',' << detail::full(f.rmse_tree) << ','
           << detail::full(f.rmse_lime) << '\n';
    }
}

inline void write_table3_csv(std::ostream& os, const SuiteSummary& s) {
    os << "Dataset,x1,x2,T,x1/T*100,x2/T*100\n";
    for (std::size_t i = 0; i < s.local_rows.size(); ++i) {
        const auto& c = s.local_rows[i];
        os << detail::row_label(s, i) << ',' << c.x1 << ',' << c.x2 << ',' << c.T << ','
           << detail::fixed(c.pct1(), 2) << ',' << detail::fixed(c.pct2(), 2) << '\n';
    }
}

inline void write_table2_markdown(std::ostream& os, const SuiteSummary& s) {
    os << "| Dataset | Variables | RMSE MLR | RMSE tree | RMSE LIME |\n";
    os << "|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < s.fidelity_rows.size(); ++i) {
        const auto& f = s.fidelity_rows[i];
        os << "| " << detail::row_label(s, i) << " | " << detail::row_vars(s, i) << " | "
           << detail::fixed(f.rmse_mlr, 3) << " | " << detail::fixed(f.rmse_tree, 3) << " | "
           << detail::fixed(f.rmse_lime, 3) << " |\n";
    }
}

inline void write_table3_markdown(std::ostream& os, const SuiteSummary& s) {
    os << "| Dataset | x1 | x2 | T | x1/T*100 | x2/T*100 |\n";
    os << "|---|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < s.local_rows.size(); ++i) {
        const auto& c = s.local_rows[i];
        os << "| " << detail::row_label(s, i) << " | " << c.x1 << " | " << c.x2 << " | " << c.T
           << " | " << detail::fixed(c.pct1(), 2) << " | " << detail::fixed(c.pct2(), 2)
           << " |\n";
    }
}

inline void write_summary(std::ostream& os, const SuiteSummary& s) {
    os << "runs: " << s.fidelity_rows.size() << '\n';
    os << "tree RMSE < LIME RMSE: " << s.rates.n_tree_lt_lime << '/' << s.rates.n_rows << " ("
       << s.rates.pct_tree_lt_lime << "%)\n";
    os << "MLR RMSE < LIME RMSE: " << s.rates.n_mlr_lt_lime << '/' << s.rates.n_rows << " ("
       << s.rates.pct_mlr_lt_lime << "%)\n";
    os << "tree RMSE < MLR RMSE: " << s.rates.n_tree_lt_mlr << '/' << s.rates.n_rows << " ("
       << s.rates.pct_tree_lt_mlr << "%)\n";
    if (!s.local_rows.empty())
        os << "pct1 >= pct2 (tie-inclusive): " << s.n_pct1_ge_pct2 << '/' << s.local_rows.size()
           << '\n';
    for (const auto& c : s.comparisons) {
        os << c.label << ": ";
        if (c.result) os << summarize(*c.result, s.alpha) << '\n';
        else os << "degenerate (" << c.error << ")\n";
    }
    for (std::size_t i = 0; i < s.records.size(); ++i) {
        const auto& r = s.records[i];
        os << "run " << i << " [" << r.config.dataset << " k=" << r.config.n_features
           << "]: direct MLR RMSE=" << detail::full(r.direct_rmse_mlr)
           << " direct SVR RMSE=" << detail::full(r.direct_rmse_svr)
           << " gate=" << (r.gate_passed ? "pass" : "FLAGGED") << '\n';
        for (const auto& w : r.warnings) os << "  warning: " << w << '\n';
    }
}

inline void write_outputs(const std::string& out_dir, const SuiteSummary& s) {
    std::filesystem::create_directories(out_dir);
    const auto dir = std::filesystem::path(out_dir);
    {
        std::ofstream f(dir / "table2.csv");
        write_table2_csv(f, s);
    }
    {
        std::ofstream f(dir / "table2.md");
        write_table2_markdown(f, s);
    }
    {
        std::ofstream f(dir / "table3.csv");
        write_table3_csv(f, s);
    }
    {
        std::ofstream f(dir / "table3.md");
        write_table3_markdown(f, s);
    }
    {
        std::ofstream f(dir / "summary.txt");
        write_summary(f, s);
    }
}

}  // namespace svx
