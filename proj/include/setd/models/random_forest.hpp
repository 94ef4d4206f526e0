#pragma once

// Bagged forest of decision trees: each tree sees a bootstrap sample of size
// n and a fresh random feature subset at every split; prediction is the
// majority vote across trees, ties going to the positive class.

#include <cmath>
#include <memory>
#include <vector>

#include "setd/models/base.hpp"
#include "setd/models/decision_tree.hpp"
#include "setd/rng.hpp"

namespace setd {

class RandomForestModel : public Model {
public:
    RandomForestModel(std::vector<std::unique_ptr<DecisionTreeModel>> trees, std::size_t width)
        : trees_(std::move(trees)), width_(width) {}

    Family family() const override { return Family::random_forest; }
    std::size_t width() const override { return width_; }

    const std::vector<std::unique_ptr<DecisionTreeModel>>& trees() const { return trees_; }

    nlohmann::json params_json() const override {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& t : trees_) arr.push_back(t->params_json());
        return {{"trees", arr}};
    }

protected:
    int predict_unchecked(const Row& row) const override {
        int votes1 = 0;
        for (const auto& t : trees_)
            if (t->predict(row) == 1) ++votes1;
        return 2 * votes1 >= static_cast<int>(trees_.size()) ? 1 : 0;
    }

private:
    std::vector<std::unique_ptr<DecisionTreeModel>> trees_;
    std::size_t width_;
};

inline std::unique_ptr<RandomForestModel> train_random_forest(const Rows& x, const Labels& y,
                                                              int n_trees, int features_per_split,
                                                              std::uint64_t seed,
                                                              int max_depth = 0,
                                                              bool bootstrap = true) {
    detail::require_nonempty(x, y);
    if (n_trees < 1) throw DataError("random forest: n_trees must be >= 1");

    std::size_t width = x.front().size();
    if (features_per_split <= 0)
        features_per_split =
            static_cast<int>(std::ceil(std::sqrt(static_cast<double>(width))));
    if (features_per_split > static_cast<int>(width))
        features_per_split = static_cast<int>(width);

    std::vector<double> weights(x.size(), 1.0);
    std::vector<std::unique_ptr<DecisionTreeModel>> trees;
    trees.reserve(static_cast<std::size_t>(n_trees));
    for (int t = 0; t < n_trees; ++t) {
        Rng rng(mix_seed({seed, static_cast<std::uint64_t>(t)}));
        std::vector<std::size_t> sample;
        if (bootstrap) {
            sample.resize(x.size());
            for (auto& s : sample) s = static_cast<std::size_t>(rng.below(x.size()));
        } else {
            sample.resize(x.size());
            std::iota(sample.begin(), sample.end(), std::size_t{0});
        }
        trees.push_back(train_decision_tree_weighted(x, y, weights, max_depth, features_per_split,
                                                     &rng, &sample));
    }
    return std::make_unique<RandomForestModel>(std::move(trees), width);
}

} // namespace setd
