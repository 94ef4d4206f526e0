#pragma once

// Hard-voting ensemble over five member families: decision tree, nearest
// centroid, MLP, SVM, naive Bayes. Five voters and two classes, so majority
// is never tied.

#include <memory>
#include <vector>

#include "setd/models/base.hpp"
#include "setd/models/decision_tree.hpp"
#include "setd/models/mlp.hpp"
#include "setd/models/naive_bayes.hpp"
#include "setd/models/nearest_centroid.hpp"
#include "setd/models/svm.hpp"
#include "setd/rng.hpp"

namespace setd {

class VotingModel : public Model {
public:
    explicit VotingModel(std::vector<std::unique_ptr<Model>> members)
        : members_(std::move(members)) {}

    Family family() const override { return Family::voting; }
    std::size_t width() const override { return members_.front()->width(); }
    const std::vector<std::unique_ptr<Model>>& members() const { return members_; }

    nlohmann::json params_json() const override {
        nlohmann::json names = nlohmann::json::array();
        for (const auto& m : members_) names.push_back(std::string(family_name(m->family())));
        return {{"members", names}};
    }

protected:
    int predict_unchecked(const Row& row) const override {
        int votes1 = 0;
        for (const auto& m : members_)
            if (m->predict(row) == 1) ++votes1;
        return 2 * votes1 >= static_cast<int>(members_.size()) ? 1 : 0;
    }

private:
    std::vector<std::unique_ptr<Model>> members_;
};

inline std::unique_ptr<VotingModel> train_voting(const Rows& x, const Labels& y,
                                                 const ModelSpec& spec) {
    std::vector<std::unique_ptr<Model>> members;
    members.push_back(train_decision_tree(x, y, spec.tree_max_depth));
    members.push_back(train_nearest_centroid(x, y));
    members.push_back(train_mlp(x, y, spec.mlp_hidden, spec.mlp_learning_rate,
                                spec.mlp_epochs, mix_seed({spec.seed, 1})));
    members.push_back(train_svm(x, y, spec.svm_kernel, spec.svm_c, spec.svm_tol,
                                spec.svm_max_passes, mix_seed({spec.seed, 2})));
    members.push_back(train_naive_bayes(x, y, spec.nb_alpha));
    return std::make_unique<VotingModel>(std::move(members));
}

} // namespace setd
