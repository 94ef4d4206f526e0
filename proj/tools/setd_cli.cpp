// Pipeline driver: synth -> featurize -> evaluate, file handoff between
// stages. Exit codes: 0 ok, 2 usage, 3 data/validation, 4 internal.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "setd/experiment.hpp"
#include "setd/featurize.hpp"
#include "setd/ingest.hpp"
#include "setd/synth.hpp"

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw setd::DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw setd::DataError("cannot write " + path.string());
    out << text;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<int> parse_combos(const std::string& s) {
    std::vector<int> out;
    for (const auto& tok : split_list(s)) {
        if (tok.size() != 1 || tok[0] < '1' || tok[0] > '4')
            throw UsageError("--combos expects values in 1..4, got '" + tok + "'");
        out.push_back(tok[0] - '0');
    }
    if (out.empty()) throw UsageError("--combos is empty");
    return out;
}

std::vector<setd::Family> parse_models(const std::string& s) {
    if (s == "all") return setd::experiment_families();
    std::vector<setd::Family> out;
    for (const auto& tok : split_list(s)) {
        auto fam = setd::family_from_name(tok);
        if (!fam) throw UsageError("unknown model family '" + tok + "'");
        out.push_back(*fam);
    }
    if (out.empty()) throw UsageError("--models is empty");
    return out;
}

int parse_int(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        int out = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw UsageError("override " + key + " expects an integer, got '" + v + "'");
    }
}

double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        double out = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw UsageError("override " + key + " expects a number, got '" + v + "'");
    }
}

// --set family.param=value; unknown keys are hard usage errors.
void apply_override(setd::ModelSpec& spec, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw UsageError("--set expects family.param=value, got '" + assignment + "'");
    std::string key = assignment.substr(0, eq);
    std::string value = assignment.substr(eq + 1);
    auto dot = key.find('.');
    if (dot == std::string::npos)
        throw UsageError("--set expects family.param=value, got '" + assignment + "'");
    std::string family = key.substr(0, dot);
    std::string param = key.substr(dot + 1);

    auto unknown = [&] { throw UsageError("unknown override key '" + key + "'"); };
    if (family == "decision_tree") {
        if (param == "max_depth") spec.tree_max_depth = parse_int(value, key);
        else unknown();
    } else if (family == "random_forest") {
        if (param == "trees") spec.forest_trees = parse_int(value, key);
        else if (param == "features_per_split") spec.forest_features_per_split = parse_int(value, key);
        else if (param == "max_depth") spec.forest_max_depth = parse_int(value, key);
        else if (param == "bootstrap") spec.forest_bootstrap = parse_int(value, key) != 0;
        else unknown();
    } else if (family == "svm") {
        if (param == "kernel") {
            auto kind = setd::kernel_from_name(value);
            if (!kind) throw UsageError("unknown kernel '" + value + "'");
            spec.svm_kernel.kind = *kind;
        } else if (param == "c") spec.svm_c = parse_double(value, key);
        else if (param == "tol") spec.svm_tol = parse_double(value, key);
        else if (param == "max_passes") spec.svm_max_passes = parse_int(value, key);
        else if (param == "sigma") spec.svm_kernel.sigma = parse_double(value, key);
        else if (param == "poly_a") spec.svm_kernel.poly_a = parse_double(value, key);
        else if (param == "poly_c") spec.svm_kernel.poly_c = parse_double(value, key);
        else if (param == "poly_degree") spec.svm_kernel.poly_degree = parse_int(value, key);
        else unknown();
    } else if (family == "mlp") {
        if (param == "hidden") {
            std::vector<int> sizes;
            for (const auto& tok : split_list(value)) sizes.push_back(parse_int(tok, key));
            if (sizes.empty()) throw UsageError("override " + key + " expects sizes");
            spec.mlp_hidden = sizes;
        } else if (param == "learning_rate") spec.mlp_learning_rate = parse_double(value, key);
        else if (param == "epochs") spec.mlp_epochs = parse_int(value, key);
        else unknown();
    } else if (family == "logistic_regression") {
        if (param == "learning_rate") spec.lr_learning_rate = parse_double(value, key);
        else if (param == "epochs") spec.lr_epochs = parse_int(value, key);
        else if (param == "l2") spec.lr_l2 = parse_double(value, key);
        else unknown();
    } else if (family == "knn") {
        if (param == "k") spec.knn_k = parse_int(value, key);
        else unknown();
    } else if (family == "naive_bayes") {
        if (param == "alpha") spec.nb_alpha = parse_double(value, key);
        else unknown();
    } else if (family == "adaboost") {
        if (param == "rounds") spec.ada_rounds = parse_int(value, key);
        else unknown();
    } else {
        unknown();
    }
}

// Full hyperparameter dump for report metadata, independent of family list.
nlohmann::json spec_full_json(const setd::ModelSpec& s) {
    return {{"decision_tree", {{"max_depth", s.tree_max_depth}}},
            {"random_forest",
             {{"trees", s.forest_trees},
              {"features_per_split", s.forest_features_per_split},
              {"max_depth", s.forest_max_depth},
              {"bootstrap", s.forest_bootstrap}}},
            {"svm",
             {{"kernel", std::string(setd::kernel_name(s.svm_kernel.kind))},
              {"c", s.svm_c},
              {"tol", s.svm_tol},
              {"max_passes", s.svm_max_passes},
              {"sigma", s.svm_kernel.sigma},
              {"poly_a", s.svm_kernel.poly_a},
              {"poly_c", s.svm_kernel.poly_c},
              {"poly_degree", s.svm_kernel.poly_degree}}},
            {"mlp",
             {{"hidden", s.mlp_hidden},
              {"learning_rate", s.mlp_learning_rate},
              {"epochs", s.mlp_epochs}}},
            {"logistic_regression",
             {{"learning_rate", s.lr_learning_rate}, {"epochs", s.lr_epochs}, {"l2", s.lr_l2}}},
            {"knn", {{"k", s.knn_k}}},
            {"naive_bayes", {{"alpha", s.nb_alpha}}},
            {"adaboost", {{"rounds", s.ada_rounds}}}};
}

struct SynthOpts {
    setd::WorldConfig config;
    std::string out = ".";
    double calibrate = -1; // <0 = off
    double tolerance = 0.02;
    int attempts = 64;
};

void cmd_synth(const SynthOpts& opts) {
    setd::WorldConfig config = opts.config;
    if (opts.calibrate >= 0)
        config = setd::calibrate_positive_share(config, opts.calibrate, opts.tolerance,
                                                opts.attempts);
    setd::World world = setd::generate_world(config);
    auto labels =
        setd::plant_labels(world.registry, world.graph, setd::ThreatRule{}, config.noise,
                           config.seed);

    fs::path out(opts.out);
    write_file(out / "triples.tsv", setd::serialize_triples(world));
    write_file(out / "labels.tsv", setd::serialize_labels(labels, world.registry));
    write_file(out / "world_meta.json",
               setd::world_meta_json(config, world, labels).dump(2) + "\n");
}

struct FeaturizeOpts {
    std::string world = ".";
    std::string triples, labels;
    std::string out = ".";
    int combo = 1;
};

void cmd_featurize(const FeaturizeOpts& opts) {
    fs::path triples_path = opts.triples.empty() ? fs::path(opts.world) / "triples.tsv"
                                                 : fs::path(opts.triples);
    fs::path labels_path = opts.labels.empty() ? fs::path(opts.world) / "labels.tsv"
                                               : fs::path(opts.labels);
    std::string triples_text = read_file(triples_path);
    std::string labels_text = read_file(labels_path);

    setd::World world = setd::parse_triples(triples_text);
    auto pairs = setd::parse_labels(labels_text, world.registry);
    setd::FeatureMatrix matrix =
        setd::assemble_dataset(pairs, opts.combo, world.graph, world.registry);

    nlohmann::json meta = {{"combination", opts.combo},
                           {"triples_hash", setd::to_hex(setd::fnv1a64(triples_text))},
                           {"labels_hash", setd::to_hex(setd::fnv1a64(labels_text))},
                           {"rows", matrix.rows.size()}};

    fs::path out(opts.out);
    std::string stem = "dataset_c" + std::to_string(opts.combo);
    write_file(out / (stem + ".csv"), setd::dataset_to_csv(matrix));
    write_file(out / (stem + ".layout.json"),
               setd::layout_to_json(matrix.layout, meta).dump(2) + "\n");
}

struct EvaluateOpts {
    std::string data = ".";
    std::string out = ".";
    std::string combos = "1,2,3";
    std::string models = "all";
    int reps = 10;
    int folds = 5;
    std::uint64_t seed = 7;
    int jobs = 0; // 0 = machine parallelism
    std::string export_trees;
    std::vector<std::string> overrides;
};

void cmd_evaluate(const EvaluateOpts& opts) {
    setd::ExperimentConfig cfg;
    cfg.combinations = parse_combos(opts.combos);
    cfg.families = parse_models(opts.models);
    cfg.repetitions = opts.reps;
    cfg.k = opts.folds;
    cfg.seed = opts.seed;
    cfg.jobs = opts.jobs > 0 ? opts.jobs
                             : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    cfg.collect_trees = !opts.export_trees.empty();
    for (const auto& o : opts.overrides) apply_override(cfg.base_spec, o);

    std::map<int, setd::FeatureMatrix> datasets;
    nlohmann::json input_hashes = nlohmann::json::object();
    for (int combo : cfg.combinations) {
        std::string stem = "dataset_c" + std::to_string(combo);
        fs::path csv_path = fs::path(opts.data) / (stem + ".csv");
        fs::path layout_path = fs::path(opts.data) / (stem + ".layout.json");
        std::string csv_text = read_file(csv_path);
        std::string layout_text = read_file(layout_path);
        nlohmann::json layout_json;
        try {
            layout_json = nlohmann::json::parse(layout_text);
        } catch (const nlohmann::json::parse_error& e) {
            throw setd::DataError(layout_path.string() + ": " + e.what());
        }
        datasets[combo] = setd::read_dataset_csv(csv_text, layout_json);
        input_hashes[stem + ".csv"] = setd::to_hex(setd::fnv1a64(csv_text));
        input_hashes[stem + ".layout.json"] = setd::to_hex(setd::fnv1a64(layout_text));
    }

    setd::EvalReport report = setd::run_experiment(cfg, datasets);

    nlohmann::json families = nlohmann::json::array();
    for (auto f : cfg.families) families.push_back(std::string(setd::family_name(f)));
    nlohmann::json extra_meta = {{"families", families},
                                 {"combinations", cfg.combinations},
                                 {"hyperparameters", spec_full_json(cfg.base_spec)},
                                 {"inputs", input_hashes}};

    fs::path out(opts.out);
    write_file(out / "report.json",
               setd::report_to_json(report, extra_meta).dump(2) + "\n");
    write_file(out / "metrics.csv", setd::metrics_to_csv(report));

    if (cfg.collect_trees) {
        fs::path tree_dir(opts.export_trees);
        for (const auto& cell : report.cells) {
            for (std::size_t i = 0; i < cell.tree_dots.size(); ++i) {
                int rep = static_cast<int>(i) / cfg.k;
                int fold = static_cast<int>(i) % cfg.k;
                char name[64];
                std::snprintf(name, sizeof(name), "tree_c%d_r%d_f%d.dot", cell.combination,
                              rep, fold);
                write_file(tree_dir / name, cell.tree_dots[i]);
            }
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"social-engineering threat detection over knowledge-graph features"};
    app.require_subcommand(1);

    SynthOpts synth;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic world + labels");
    synth_cmd->add_option("--attackers", synth.config.attackers);
    synth_cmd->add_option("--victims", synth.config.victims);
    synth_cmd->add_option("--methods", synth.config.attack_methods);
    synth_cmd->add_option("--vulnerabilities", synth.config.human_vulnerabilities);
    synth_cmd->add_option("--mediums", synth.config.attack_mediums);
    synth_cmd->add_option("--mechanisms", synth.config.effect_mechanisms);
    synth_cmd->add_option("--performs-edges", synth.config.performs_edges);
    synth_cmd->add_option("--has-vulnerability-edges", synth.config.has_vulnerability_edges);
    synth_cmd->add_option("--exploits-edges", synth.config.exploits_edges);
    synth_cmd->add_option("--uses-medium-edges", synth.config.uses_medium_edges);
    synth_cmd->add_option("--exposure-density", synth.config.exposure_density);
    synth_cmd->add_option("--mechanism-fanout", synth.config.mechanism_fanout);
    synth_cmd->add_option("--vuln-focus", synth.config.vuln_focus);
    synth_cmd->add_option("--noise", synth.config.noise);
    synth_cmd->add_option("--seed", synth.config.seed);
    synth_cmd->add_option("--out", synth.out, "output directory");
    synth_cmd->add_option("--calibrate", synth.calibrate,
                          "search seeds/densities for this noiseless positive share");
    synth_cmd->add_option("--calibrate-tolerance", synth.tolerance);
    synth_cmd->add_option("--calibrate-attempts", synth.attempts);

    FeaturizeOpts feat;
    auto* feat_cmd = app.add_subcommand("featurize", "assemble a one-hot dataset");
    feat_cmd->add_option("--world", feat.world, "directory with triples.tsv + labels.tsv");
    feat_cmd->add_option("--triples", feat.triples, "explicit triple TSV path");
    feat_cmd->add_option("--labels", feat.labels, "explicit label TSV path");
    feat_cmd->add_option("--combo", feat.combo, "feature combination 1..4")
        ->check(CLI::Range(1, 4));
    feat_cmd->add_option("--out", feat.out, "output directory");

    EvaluateOpts eval;
    auto* eval_cmd = app.add_subcommand("evaluate", "cross-validate model families");
    eval_cmd->add_option("--data", eval.data, "directory with dataset_c{N}.csv files");
    eval_cmd->add_option("--combos", eval.combos, "comma list of combinations");
    eval_cmd->add_option("--models", eval.models, "comma list of families, or 'all'");
    eval_cmd->add_option("--reps", eval.reps, "repetitions");
    eval_cmd->add_option("--folds", eval.folds, "folds per repetition");
    eval_cmd->add_option("--seed", eval.seed, "base seed");
    eval_cmd->add_option("--jobs", eval.jobs, "worker threads (0 = machine parallelism)");
    eval_cmd->add_option("--out", eval.out, "output directory");
    eval_cmd->add_option("--export-trees", eval.export_trees,
                         "write decision-tree DOT files here");
    eval_cmd->add_option("--set", eval.overrides, "hyperparameter override family.param=value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(synth_cmd)) cmd_synth(synth);
        else if (app.got_subcommand(feat_cmd)) cmd_featurize(feat);
        else if (app.got_subcommand(eval_cmd)) cmd_evaluate(eval);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const setd::DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const setd::InternalError& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 4;
    }
    return 0;
}
