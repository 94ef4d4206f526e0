#pragma once

// Common model surface: family tags, hyperparameter spec, and the trained
// model interface shared by all nine classifier families.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "setd/common.hpp"

namespace setd {

using Row = std::vector<double>;
using Rows = std::vector<Row>;
using Labels = std::vector<int>;

enum class Family : int {
    decision_tree = 0,
    random_forest,
    svm,
    mlp,
    logistic_regression,
    knn,
    nearest_centroid,
    naive_bayes,
    adaboost,
    voting,
};

inline constexpr std::array<std::string_view, 10> kFamilyNames = {
    "decision_tree", "random_forest", "svm",         "mlp",      "logistic_regression",
    "knn",           "nearest_centroid", "naive_bayes", "adaboost", "voting",
};

inline std::string_view family_name(Family f) {
    return kFamilyNames[static_cast<std::size_t>(f)];
}

inline std::optional<Family> family_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kFamilyNames.size(); ++i)
        if (kFamilyNames[i] == name) return static_cast<Family>(i);
    return std::nullopt;
}

// The nine families of the experiment grid, in report order. KNN is trainable
// on request but the grid carries the nearest-centroid variant in its slot.
inline std::vector<Family> experiment_families() {
    return {Family::decision_tree, Family::random_forest,    Family::svm,
            Family::mlp,           Family::logistic_regression, Family::nearest_centroid,
            Family::naive_bayes,   Family::adaboost,          Family::voting};
}

enum class KernelKind : int { linear = 0, polynomial, gaussian };

inline std::string_view kernel_name(KernelKind k) {
    switch (k) {
        case KernelKind::linear: return "linear";
        case KernelKind::polynomial: return "polynomial";
        case KernelKind::gaussian: return "gaussian";
    }
    throw InternalError("bad kernel kind");
}

inline std::optional<KernelKind> kernel_from_name(std::string_view name) {
    if (name == "linear") return KernelKind::linear;
    if (name == "polynomial") return KernelKind::polynomial;
    if (name == "gaussian") return KernelKind::gaussian;
    return std::nullopt;
}

struct KernelParams {
    KernelKind kind = KernelKind::gaussian;
    double poly_a = 1.0;
    double poly_c = 1.0;
    int poly_degree = 2;
    double sigma = 0.0; // <= 0 requests the width-derived default at training time
};

// All hyperparameters with their recorded defaults. Only the fields of the
// selected family matter for a given training run; `seed` fully determines
// any stochastic outcome.
struct ModelSpec {
    Family family = Family::decision_tree;
    std::uint64_t seed = 0;

    int tree_max_depth = 6; // 0 = unbounded

    int forest_trees = 100;
    int forest_features_per_split = 0; // 0 = ceil(sqrt(width))
    int forest_max_depth = 0;          // 0 = unbounded
    bool forest_bootstrap = true;      // off = test hook, trains on the full set

    KernelParams svm_kernel;
    double svm_c = 1.0;
    double svm_tol = 1e-3;
    int svm_max_passes = 20;

    std::vector<int> mlp_hidden = {32};
    double mlp_learning_rate = 0.3;
    int mlp_epochs = 300;

    double lr_learning_rate = 0.1;
    int lr_epochs = 1000;
    double lr_l2 = 0.0;

    int knn_k = 5;

    double nb_alpha = 1.0;

    int ada_rounds = 50;
};

inline nlohmann::json spec_to_json(const ModelSpec& s) {
    nlohmann::json j{{"family", std::string(family_name(s.family))}, {"seed", s.seed}};
    switch (s.family) {
        case Family::decision_tree:
            j["max_depth"] = s.tree_max_depth;
            break;
        case Family::random_forest:
            j["trees"] = s.forest_trees;
            j["features_per_split"] = s.forest_features_per_split;
            j["max_depth"] = s.forest_max_depth;
            j["bootstrap"] = s.forest_bootstrap;
            break;
        case Family::svm:
            j["kernel"] = std::string(kernel_name(s.svm_kernel.kind));
            j["sigma"] = s.svm_kernel.sigma;
            j["poly_a"] = s.svm_kernel.poly_a;
            j["poly_c"] = s.svm_kernel.poly_c;
            j["poly_degree"] = s.svm_kernel.poly_degree;
            j["c"] = s.svm_c;
            j["tol"] = s.svm_tol;
            j["max_passes"] = s.svm_max_passes;
            break;
        case Family::mlp:
            j["hidden"] = s.mlp_hidden;
            j["learning_rate"] = s.mlp_learning_rate;
            j["epochs"] = s.mlp_epochs;
            break;
        case Family::logistic_regression:
            j["learning_rate"] = s.lr_learning_rate;
            j["epochs"] = s.lr_epochs;
            j["l2"] = s.lr_l2;
            break;
        case Family::knn:
            j["k"] = s.knn_k;
            break;
        case Family::nearest_centroid:
            break;
        case Family::naive_bayes:
            j["alpha"] = s.nb_alpha;
            break;
        case Family::adaboost:
            j["rounds"] = s.ada_rounds;
            break;
        case Family::voting:
            j["members"] = {"decision_tree", "nearest_centroid", "mlp", "svm", "naive_bayes"};
            break;
    }
    return j;
}

class Model {
public:
    virtual ~Model() = default;

    virtual Family family() const = 0;
    virtual std::size_t width() const = 0;
    virtual nlohmann::json params_json() const = 0;

    // Checked prediction; pure and deterministic given the trained parameters.
    int predict(const Row& row) const {
        if (row.size() != width())
            throw DataError("predict: row width " + std::to_string(row.size()) +
                            " does not match training width " + std::to_string(width()));
        return predict_unchecked(row);
    }

    std::vector<int> predict_all(const Rows& rows) const {
        std::vector<int> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(predict(r));
        return out;
    }

protected:
    virtual int predict_unchecked(const Row& row) const = 0;
};

using ModelPtr = std::unique_ptr<Model>;

namespace detail {

inline void require_nonempty(const Rows& x, const Labels& y) {
    if (x.empty()) throw DataError("training set is empty");
    if (x.size() != y.size()) throw DataError("training rows and labels differ in length");
    for (const auto& r : x)
        if (r.size() != x.front().size()) throw DataError("training rows have ragged widths");
}

inline void require_two_classes(const Labels& y) {
    bool has0 = false, has1 = false;
    for (int v : y) (v == 1 ? has1 : has0) = true;
    if (!has0 || !has1) throw DataError("training set has a single class");
}

inline bool bit_set(double cell) { return cell >= 0.5; }

} // namespace detail

} // namespace setd
