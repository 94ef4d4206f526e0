#pragma once

// Repeated stratified k-fold evaluation of (family, combination) cells.
// Tasks are keyed (cell, repetition) with seeds derived from the key, so the
// report is byte-identical regardless of how many worker threads run them.

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "setd/featurize.hpp"
#include "setd/folds.hpp"
#include "setd/metrics.hpp"
#include "setd/models/factory.hpp"
#include "setd/rng.hpp"

namespace setd {

using TrainerFn =
    std::function<std::unique_ptr<Model>(const ModelSpec&, const Rows&, const Labels&)>;

struct ExperimentConfig {
    std::vector<Family> families = experiment_families();
    std::vector<int> combinations = {1, 2, 3};
    int k = 5;
    int repetitions = 10;
    std::uint64_t seed = 0;
    int jobs = 1;
    bool collect_trees = false; // keep DOT text for decision_tree fold models
    ModelSpec base_spec;        // hyperparameters; family/seed overwritten per task
};

struct CellResult {
    Family family = Family::decision_tree;
    int combination = 0;
    std::vector<MetricTriple> per_rep;
    MetricTriple mean;
    BoxSummary box_precision, box_recall, box_f1;
    std::vector<std::string> tree_dots; // rep-major, fold-minor; decision_tree only
};

struct EvalReport {
    std::uint64_t seed = 0;
    int k = 0;
    int repetitions = 0;
    std::string dataset_hash;
    MetricTriple baseline;
    std::vector<CellResult> cells;
};

namespace detail {

inline MetricTriple mean_triple(const std::vector<MetricTriple>& ts) {
    MetricTriple m;
    for (const auto& t : ts) {
        m.precision += t.precision;
        m.recall += t.recall;
        m.f1 += t.f1;
    }
    double n = static_cast<double>(ts.size());
    m.precision /= n;
    m.recall /= n;
    m.f1 /= n;
    return m;
}

// One repetition of one cell: fresh fold plan, k train/predict rounds,
// fold-mean triple. Optionally renders each fold's decision tree.
struct RepOutcome {
    MetricTriple triple;
    std::vector<std::string> dots;
};

inline RepOutcome run_repetition(Family family, int combination, int rep, const Rows& x,
                                 const Labels& y, const FeatureLayout& layout,
                                 const ExperimentConfig& cfg, const TrainerFn& trainer) {
    std::uint64_t task_seed = mix_seed({cfg.seed, static_cast<std::uint64_t>(family),
                                        static_cast<std::uint64_t>(combination),
                                        static_cast<std::uint64_t>(rep)});
    FoldPlan plan = stratified_kfold(y, cfg.k, mix_seed({task_seed, 1}));

    RepOutcome out;
    std::vector<MetricTriple> fold_triples;
    for (int f = 0; f < cfg.k; ++f) {
        auto test_idx = plan.test_indices(f);
        auto train_idx = plan.train_indices(f);

        std::vector<char> in_test(y.size(), 0);
        for (std::size_t i : test_idx) in_test[i] = 1;
        for (std::size_t i : train_idx)
            if (in_test[i]) throw InternalError("fold leakage: train row in test fold");

        Rows train_x, test_x;
        Labels train_y, test_y;
        train_x.reserve(train_idx.size());
        train_y.reserve(train_idx.size());
        for (std::size_t i : train_idx) {
            train_x.push_back(x[i]);
            train_y.push_back(y[i]);
        }
        test_x.reserve(test_idx.size());
        test_y.reserve(test_idx.size());
        for (std::size_t i : test_idx) {
            test_x.push_back(x[i]);
            test_y.push_back(y[i]);
        }

        ModelSpec spec = cfg.base_spec;
        spec.family = family;
        spec.seed = mix_seed({task_seed, 2, static_cast<std::uint64_t>(f)});
        auto model = trainer(spec, train_x, train_y);
        fold_triples.push_back(compute_metrics(model->predict_all(test_x), test_y));

        if (cfg.collect_trees && family == Family::decision_tree) {
            auto* tree = dynamic_cast<const DecisionTreeModel*>(model.get());
            if (!tree) throw InternalError("decision_tree trainer returned foreign model");
            char name[64];
            std::snprintf(name, sizeof(name), "tree_c%d_r%d_f%d", combination, rep, f);
            out.dots.push_back(tree_to_dot(*tree, layout.column_names, name));
        }
    }
    out.triple = mean_triple(fold_triples);
    return out;
}

} // namespace detail

inline TrainerFn default_trainer() {
    return [](const ModelSpec& spec, const Rows& x, const Labels& y) {
        return train_model(spec, x, y);
    };
}

inline EvalReport run_experiment(const ExperimentConfig& cfg,
                                 const std::map<int, FeatureMatrix>& datasets,
                                 const TrainerFn& trainer) {
    if (cfg.families.empty()) throw DataError("experiment: no families requested");
    if (cfg.combinations.empty()) throw DataError("experiment: no combinations requested");
    if (cfg.repetitions < 1) throw DataError("experiment: repetitions must be at least 1");

    // Datasets for all combinations must exist and describe the same pairs.
    const FeatureMatrix* first = nullptr;
    for (int c : cfg.combinations) {
        auto it = datasets.find(c);
        if (it == datasets.end())
            throw DataError("experiment: no dataset for combination " + std::to_string(c));
        if (!first) first = &it->second;
        else if (it->second.labels != first->labels || it->second.pair_ids != first->pair_ids)
            throw DataError("experiment: datasets disagree on pairs/labels across combinations");
    }

    // Dense double copies, one per combination, shared read-only by workers.
    std::map<int, Rows> rows_by_combo;
    for (int c : cfg.combinations) {
        const FeatureMatrix& m = datasets.at(c);
        Rows rows(m.rows.size());
        for (std::size_t r = 0; r < m.rows.size(); ++r)
            rows[r].assign(m.rows[r].begin(), m.rows[r].end());
        rows_by_combo[c] = std::move(rows);
    }

    EvalReport report;
    report.seed = cfg.seed;
    report.k = cfg.k;
    report.repetitions = cfg.repetitions;
    {
        std::uint64_t h = 1469598103934665603ULL;
        for (int c : cfg.combinations)
            h = fnv1a64(dataset_to_csv(datasets.at(c)), h);
        report.dataset_hash = to_hex(h);
    }

    const Labels& labels = first->labels;
    std::size_t positives = 0;
    for (int v : labels) positives += (v == 1);
    double p = static_cast<double>(positives) / static_cast<double>(labels.size());
    report.baseline = {p, 1.0, (p > 0) ? 2.0 * p / (1.0 + p) : 0.0};

    struct Task {
        std::size_t cell;
        Family family;
        int combination;
        int rep;
    };
    std::vector<Task> tasks;
    std::vector<CellResult> cells;
    for (Family fam : cfg.families)
        for (int combo : cfg.combinations) {
            CellResult cell;
            cell.family = fam;
            cell.combination = combo;
            cell.per_rep.resize(static_cast<std::size_t>(cfg.repetitions));
            for (int rep = 0; rep < cfg.repetitions; ++rep)
                tasks.push_back({cells.size(), fam, combo, rep});
            cells.push_back(std::move(cell));
        }

    std::vector<std::vector<std::string>> dots_per_task(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            std::size_t t = next.fetch_add(1);
            if (t >= tasks.size()) return;
            const Task& task = tasks[t];
            try {
                auto out = detail::run_repetition(
                    task.family, task.combination, task.rep, rows_by_combo.at(task.combination),
                    labels, datasets.at(task.combination).layout, cfg, trainer);
                cells[task.cell].per_rep[static_cast<std::size_t>(task.rep)] = out.triple;
                dots_per_task[t] = std::move(out.dots);
            } catch (const std::exception& e) {
                errors[t] = e.what();
            }
        }
    };

    int jobs = cfg.jobs > 0 ? cfg.jobs : 1;
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (std::size_t t = 0; t < tasks.size(); ++t) {
        if (errors[t].empty()) continue;
        const Task& task = tasks[t];
        throw DataError("family=" + std::string(family_name(task.family)) +
                        " combination=" + std::to_string(task.combination) +
                        " repetition=" + std::to_string(task.rep) + ": " + errors[t]);
    }

    for (std::size_t t = 0; t < tasks.size(); ++t)
        for (auto& d : dots_per_task[t])
            cells[tasks[t].cell].tree_dots.push_back(std::move(d));

    for (auto& cell : cells) {
        cell.mean = detail::mean_triple(cell.per_rep);
        std::vector<double> ps, rs, fs;
        for (const auto& tr : cell.per_rep) {
            ps.push_back(tr.precision);
            rs.push_back(tr.recall);
            fs.push_back(tr.f1);
        }
        cell.box_precision = summarize_boxplot(ps);
        cell.box_recall = summarize_boxplot(rs);
        cell.box_f1 = summarize_boxplot(fs);
    }
    report.cells = std::move(cells);
    return report;
}

inline EvalReport run_experiment(const ExperimentConfig& cfg,
                                 const std::map<int, FeatureMatrix>& datasets) {
    return run_experiment(cfg, datasets, default_trainer());
}

inline nlohmann::json triple_to_json(const MetricTriple& t) {
    return {{"precision", t.precision}, {"recall", t.recall}, {"f1", t.f1}};
}

inline nlohmann::json box_to_json(const BoxSummary& b) {
    return {{"min", b.min},       {"q1", b.q1},   {"median", b.median},
            {"q3", b.q3},         {"max", b.max}, {"outliers", b.outliers}};
}

// Report document: {meta, baseline, cells}. Worker count is deliberately not
// echoed — output must not depend on it.
inline nlohmann::json report_to_json(const EvalReport& report,
                                     const nlohmann::json& extra_meta = {}) {
    nlohmann::json meta = {{"seed", report.seed},
                           {"k", report.k},
                           {"repetitions", report.repetitions},
                           {"dataset_hash", report.dataset_hash},
                           {"aggregation", "fold-mean"}};
    if (extra_meta.is_object())
        for (auto it = extra_meta.begin(); it != extra_meta.end(); ++it)
            meta[it.key()] = it.value();

    nlohmann::json cells = nlohmann::json::array();
    for (const auto& cell : report.cells) {
        nlohmann::json per_rep = nlohmann::json::array();
        for (const auto& t : cell.per_rep) per_rep.push_back(triple_to_json(t));
        cells.push_back({{"family", std::string(family_name(cell.family))},
                         {"combination", cell.combination},
                         {"per_rep", per_rep},
                         {"mean", triple_to_json(cell.mean)},
                         {"boxplot",
                          {{"precision", box_to_json(cell.box_precision)},
                           {"recall", box_to_json(cell.box_recall)},
                           {"f1", box_to_json(cell.box_f1)}}}});
    }
    return {{"meta", meta}, {"baseline", triple_to_json(report.baseline)}, {"cells", cells}};
}

// Long-format companion CSV: one row per (family, combination, repetition,
// metric, value), in report order.
inline std::string metrics_to_csv(const EvalReport& report) {
    std::string out = "family,combination,repetition,metric,value\n";
    auto emit = [&out](const std::string& fam, int combo, int rep, const char* metric,
                       double value) {
        out += fam;
        out += ',';
        out += std::to_string(combo);
        out += ',';
        out += std::to_string(rep);
        out += ',';
        out += metric;
        out += ',';
        out += nlohmann::json(value).dump(); // shortest round-trip, same as the report
        out += '\n';
    };
    for (const auto& cell : report.cells) {
        std::string fam(family_name(cell.family));
        for (std::size_t rep = 0; rep < cell.per_rep.size(); ++rep) {
            const MetricTriple& t = cell.per_rep[rep];
            emit(fam, cell.combination, static_cast<int>(rep), "precision", t.precision);
            emit(fam, cell.combination, static_cast<int>(rep), "recall", t.recall);
            emit(fam, cell.combination, static_cast<int>(rep), "f1", t.f1);
        }
    }
    return out;
}

} // namespace setd
