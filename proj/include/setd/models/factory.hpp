#pragma once

// Family dispatch plus the one-JSON-per-model persistence format:
// {family, spec, layout_hash, params}.

#include <memory>
#include <string>

#include "setd/models/adaboost.hpp"
#include "setd/models/base.hpp"
#include "setd/models/decision_tree.hpp"
#include "setd/models/knn.hpp"
#include "setd/models/logistic_regression.hpp"
#include "setd/models/mlp.hpp"
#include "setd/models/naive_bayes.hpp"
#include "setd/models/nearest_centroid.hpp"
#include "setd/models/random_forest.hpp"
#include "setd/models/svm.hpp"
#include "setd/models/voting.hpp"

namespace setd {

inline std::unique_ptr<Model> train_model(const ModelSpec& spec, const Rows& x,
                                          const Labels& y) {
    switch (spec.family) {
        case Family::decision_tree:
            return train_decision_tree(x, y, spec.tree_max_depth);
        case Family::random_forest:
            return train_random_forest(x, y, spec.forest_trees, spec.forest_features_per_split,
                                       spec.seed, spec.forest_max_depth, spec.forest_bootstrap);
        case Family::svm:
            return train_svm(x, y, spec.svm_kernel, spec.svm_c, spec.svm_tol,
                             spec.svm_max_passes, spec.seed);
        case Family::mlp:
            return train_mlp(x, y, spec.mlp_hidden, spec.mlp_learning_rate, spec.mlp_epochs,
                             spec.seed);
        case Family::logistic_regression:
            return train_logistic(x, y, spec.lr_learning_rate, spec.lr_epochs, spec.lr_l2);
        case Family::knn:
            return train_knn(x, y, spec.knn_k);
        case Family::nearest_centroid:
            return train_nearest_centroid(x, y);
        case Family::naive_bayes:
            return train_naive_bayes(x, y, spec.nb_alpha);
        case Family::adaboost:
            return train_adaboost(x, y, spec.ada_rounds);
        case Family::voting:
            return train_voting(x, y, spec);
    }
    throw InternalError("bad family");
}

inline nlohmann::json model_to_json(const Model& model, const ModelSpec& spec,
                                    const std::string& layout_hash) {
    return {{"family", std::string(family_name(model.family()))},
            {"spec", spec_to_json(spec)},
            {"layout_hash", layout_hash},
            {"params", model.params_json()}};
}

} // namespace setd
