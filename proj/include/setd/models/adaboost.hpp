#pragma once

// AdaBoost over depth-1 weighted-Gini stumps. Rounds with weighted error
// >= 0.5 end boosting; a perfect stump gets a capped weight (error floored at
// 1e-10) and also ends it. Per-round errors and weights stay visible for the
// training-error bound check.

#include <cmath>
#include <vector>

#include "setd/models/base.hpp"
#include "setd/models/decision_tree.hpp"

namespace setd {

class AdaBoostModel : public Model {
public:
    AdaBoostModel(std::vector<std::unique_ptr<DecisionTreeModel>> stumps,
                  std::vector<double> alphas, std::vector<double> epsilons, std::size_t width)
        : stumps_(std::move(stumps)),
          alphas_(std::move(alphas)),
          epsilons_(std::move(epsilons)),
          width_(width) {}

    Family family() const override { return Family::adaboost; }
    std::size_t width() const override { return width_; }

    std::size_t rounds() const { return stumps_.size(); }
    const std::vector<double>& alphas() const { return alphas_; }
    const std::vector<double>& epsilons() const { return epsilons_; }

    // sum_t alpha_t * (2 h_t(x) - 1); >= 0 means class 1.
    double score(const Row& row) const {
        double s = 0;
        for (std::size_t t = 0; t < stumps_.size(); ++t)
            s += alphas_[t] * (stumps_[t]->predict(row) == 1 ? 1.0 : -1.0);
        return s;
    }

    nlohmann::json params_json() const override {
        return {{"rounds", stumps_.size()}, {"alphas", alphas_}, {"epsilons", epsilons_}};
    }

protected:
    int predict_unchecked(const Row& row) const override { return score(row) >= 0 ? 1 : 0; }

private:
    std::vector<std::unique_ptr<DecisionTreeModel>> stumps_;
    std::vector<double> alphas_;
    std::vector<double> epsilons_;
    std::size_t width_;
};

inline std::unique_ptr<AdaBoostModel> train_adaboost(const Rows& x, const Labels& y,
                                                     int rounds) {
    detail::require_nonempty(x, y);
    detail::require_two_classes(y);
    if (rounds < 1) throw DataError("adaboost: rounds must be at least 1");

    const double eps_floor = 1e-10;
    std::size_t n = x.size();
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    std::vector<std::unique_ptr<DecisionTreeModel>> stumps;
    std::vector<double> alphas, epsilons;

    for (int t = 0; t < rounds; ++t) {
        auto stump = train_decision_tree_weighted(x, y, w, 1);
        std::vector<int> pred(n);
        double eps = 0;
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] = stump->predict(x[i]);
            if (pred[i] != y[i]) eps += w[i];
        }
        if (eps >= 0.5) break; // no better than weighted coin flip

        bool perfect = eps < eps_floor;
        double eps_eff = perfect ? eps_floor : eps;
        double alpha = 0.5 * std::log((1.0 - eps_eff) / eps_eff);
        stumps.push_back(std::move(stump));
        alphas.push_back(alpha);
        epsilons.push_back(eps);
        if (perfect) break; // reweighting would divide by zero error mass

        double total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] *= std::exp(pred[i] == y[i] ? -alpha : alpha);
            total += w[i];
        }
        for (auto& wi : w) wi /= total;
    }

    return std::make_unique<AdaBoostModel>(std::move(stumps), std::move(alphas),
                                           std::move(epsilons), x.front().size());
}

} // namespace setd
