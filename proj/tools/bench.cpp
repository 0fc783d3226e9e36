#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "svx/dump.hpp"
#include "svx/experiment.hpp"

namespace {

int cmd_run(const std::string& manifest_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed, const std::string& fidelity_ref,
            const std::string& ties) {
    svx::Manifest m = svx::load_manifest(manifest_path);
    if (seed) m.seed = *seed;
    if (fidelity_ref == "truth") m.fidelity_reference = svx::FidelityReference::ground_truth;
    else if (fidelity_ref == "blackbox") m.fidelity_reference = svx::FidelityReference::blackbox;
    if (ties == "strict") m.include_ties = false;

    const auto base = std::filesystem::path(manifest_path).parent_path().string();
    auto configs = svx::manifest_configs(m, base);
    std::cout << "running " << configs.size() << " runs...\n";
    svx::SuiteSummary s = svx::run_suite(configs);
    svx::write_outputs(out_dir, s);
    svx::write_summary(std::cout, s);
    std::cout << "outputs written to " << out_dir << '\n';
    return 0;
}

int cmd_replay(const std::string& table2, const std::string& table3) {
    svx::SuiteSummary s = svx::replay_tables(table2, table3);
    svx::write_summary(std::cout, s);
    return 0;
}

int cmd_explain(const std::string& manifest_path, const std::string& dataset, int row,
                std::size_t n_features, std::uint64_t seed, const std::string& dump_model) {
    svx::Manifest m = svx::load_manifest(manifest_path);
    const auto base = std::filesystem::path(manifest_path).parent_path().string();
    auto pit = m.paths.find(dataset);
    if (pit == m.paths.end()) {
        std::cerr << "dataset '" << dataset << "' not in manifest\n";
        return 1;
    }
    auto path = pit->second;
    if (!std::filesystem::path(path).is_absolute())
        path = (std::filesystem::path(base) / path).string();
    auto sit = m.schemas.find(dataset);
    svx::DatasetSchema schema = sit != m.schemas.end() ? sit->second
                                                       : svx::DatasetSchema{.name = dataset};

    svx::Dataset full = svx::load_dataset(path, schema);
    if (row < 0 || row >= full.n_rows()) {
        std::cerr << "row " << row << " out of range (dataset has " << full.n_rows() << " rows)\n";
        return 1;
    }
    if (n_features == 0) n_features = static_cast<std::size_t>(full.n_features());
    svx::Dataset selected = svx::select_features(full, n_features, svx::derive_seed(seed, 1));
    svx::SplitPair sp = svx::split(selected, m.test_fraction, svx::derive_seed(seed, 2));
    auto [train, test, stats] = svx::standardize(sp.train, sp.test);

    svx::SvrParams sv = svx::default_svr_params(train.n_features());
    svx::SvrModel svr = svx::fit_svr(train.X, train.y, sv);
    Eigen::VectorXd svr_train = svx::predict_svr(svr, train.X);
    svx::TreeModel tree = svx::fit_tree(train.X, svr_train);
    svx::LinModel lin = svx::fit_ols(train.X, svr_train);

    Eigen::RowVectorXd zrow = stats.transform(selected.X.row(row));
    Eigen::VectorXd x = zrow.transpose();

    const double bb = svx::predict_svr(svr, zrow)(0);
    std::cout << "dataset " << dataset << ", row " << row << " (" << n_features
              << " features, seed " << seed << ")\n";
    std::cout << "blackbox (SVR) prediction: " << bb << "\n\n";

    std::cout << "decision-tree path:\n";
    auto rules = svx::extract_rules(tree, train.columns);
    for (const auto& r : rules)
        if (svx::rule_matches(r, zrow)) {
            std::cout << "  " << svx::format_rule(r) << '\n';
            break;
        }
    std::cout << "  tree prediction: " << svx::predict_tree_one(tree, zrow) << "\n\n";

    std::cout << "multi-linear regression contributions:\n";
    std::cout << "  intercept: " << lin.intercept << '\n';
    for (Eigen::Index j = 0; j < x.size(); ++j)
        std::cout << "  " << train.columns[static_cast<std::size_t>(j)] << ": "
                  << lin.coefficients(j) << " * " << x(j) << " = " << lin.coefficients(j) * x(j)
                  << '\n';
    std::cout << "  MLR prediction: " << svx::predict_lin(lin, zrow)(0) << "\n\n";

    svx::LimeParams lp;
    lp.seed = svx::derive_seed(seed, 1000 + static_cast<std::uint64_t>(row));
    svx::Explanation e = svx::explain_instance(x, svr, stats, lp);
    std::cout << "LIME explanation:\n";
    std::cout << "  intercept: " << e.intercept << '\n';
    for (Eigen::Index j = 0; j < e.weights.size(); ++j) {
        const auto f = static_cast<std::size_t>(e.selected_features[static_cast<std::size_t>(j)]);
        std::cout << "  " << train.columns[f] << ": weight " << e.weights(j) << '\n';
    }
    std::cout << "  LIME local prediction: " << e.local_prediction << '\n';

    if (!dump_model.empty()) {
        std::ofstream os(dump_model);
        svx::dump_svr(svr, os);
        std::cout << "model dumped to " << dump_model << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surrogate-fidelity benchmark for SVR explanations"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "execute a benchmark suite from a manifest");
    std::string manifest = "data/manifest.txt", out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::string fidelity_ref, ties;
    run->add_option("--manifest", manifest, "key=value suite manifest")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_option("--seed", seed, "override the manifest seed");
    run->add_option("--fidelity-ref", fidelity_ref, "blackbox|truth")
        ->check(CLI::IsMember({"blackbox", "truth", ""}));
    run->add_option("--ties", ties, "include|strict")->check(CLI::IsMember({"include", "strict", ""}));

    auto* replay = app.add_subcommand("replay", "recompute statistics from published table CSVs");
    std::string table2, table3;
    replay->add_option("--table2", table2, "table 2 CSV")->required();
    replay->add_option("--table3", table3, "table 3 CSV")->required();

    auto* explain = app.add_subcommand("explain", "explain one dataset row three ways");
    std::string ds, dump_model;
    int row = 0;
    std::size_t n_features = 0;
    std::uint64_t eseed = 42;
    explain->add_option("--manifest", manifest, "manifest with dataset paths");
    explain->add_option("--dataset", ds, "dataset name")->required();
    explain->add_option("--row", row, "row index")->required();
    explain->add_option("--features", n_features, "feature-subset size (default: all)");
    explain->add_option("--seed", eseed, "pipeline seed");
    explain->add_option("--dump-model", dump_model, "write the fitted SVR model as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(manifest, out_dir, seed, fidelity_ref, ties);
        if (replay->parsed()) return cmd_replay(table2, table3);
        if (explain->parsed()) return cmd_explain(manifest, ds, row, n_features, eseed, dump_model);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
