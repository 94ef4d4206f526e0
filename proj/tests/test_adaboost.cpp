#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "setd/models/adaboost.hpp"
#include "setd/rng.hpp"

using namespace setd;

namespace {

// Noisy majority data: hard enough that stumps keep erring for many rounds.
void boost_data(Rng& rng, std::size_t n, std::size_t width, Rows& x, Labels& y) {
    x.assign(n, Row(width));
    y.assign(n, 0);
    for (std::size_t r = 0; r < n; ++r) {
        for (auto& cell : x[r]) cell = static_cast<double>(rng.below(2));
        int ones = 0;
        for (double cell : x[r]) ones += cell >= 0.5;
        y[r] = 2 * ones >= static_cast<int>(width) ? 1 : 0;
        if (rng.unit() < 0.15) y[r] = 1 - y[r];
    }
    y[0] = 0;
    y[1] = 1;
}

} // namespace

TEST_CASE("boosting replays round for round against an oracle", "[adaboost]") {
    Rng rng(1212);
    Rows x;
    Labels y;
    boost_data(rng, 40, 7, x, y);

    auto model = train_adaboost(x, y, 25);
    REQUIRE(model->rounds() >= 1);
    REQUIRE(model->alphas().size() == model->rounds());
    REQUIRE(model->epsilons().size() == model->rounds());

    // replay the loop: same deterministic stump trainer, recomputed weights
    std::size_t n = x.size();
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    for (std::size_t t = 0; t < model->rounds(); ++t) {
        double wsum = 0;
        for (double wi : w) wsum += wi;
        REQUIRE(wsum == Catch::Approx(1.0).margin(1e-12));

        auto stump = train_decision_tree_weighted(x, y, w, 1);
        double eps = 0;
        std::vector<int> pred(n);
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] = stump->predict(x[i]);
            if (pred[i] != y[i]) eps += w[i];
        }
        REQUIRE(eps < 0.5);
        REQUIRE(model->epsilons()[t] == Catch::Approx(eps).margin(1e-12));
        double eps_eff = std::max(eps, 1e-10); // perfect final round is floored
        double alpha = 0.5 * std::log((1.0 - eps_eff) / eps_eff);
        REQUIRE(model->alphas()[t] == Catch::Approx(alpha).margin(1e-12));
        if (eps < 1e-10) {
            REQUIRE(t + 1 == model->rounds()); // boosting must have stopped here
            break;
        }

        double total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] *= std::exp(pred[i] == y[i] ? -alpha : alpha);
            total += w[i];
        }
        for (auto& wi : w) wi /= total;

        // after renormalization the misclassified rows hold exactly half the mass
        double miss_mass = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (pred[i] != y[i]) miss_mass += w[i];
        REQUIRE(miss_mass == Catch::Approx(0.5).margin(1e-9));
    }
}

TEST_CASE("a quarter error rate yields the textbook alpha", "[adaboost]") {
    // uniform weights, stump errs on exactly 1 of 4 rows -> eps 0.25
    Rows x = {{1, 1}, {1, 0}, {0, 1}, {0, 0}};
    Labels y = {1, 1, 1, 0}; // the learned stump predicts 1 everywhere, erring on [0,0]
    auto model = train_adaboost(x, y, 1);
    REQUIRE(model->rounds() == 1);
    REQUIRE(model->epsilons()[0] == Catch::Approx(0.25).margin(1e-12));
    REQUIRE(model->alphas()[0] == Catch::Approx(0.5 * std::log(3.0)).margin(1e-12));
    REQUIRE(model->alphas()[0] == Catch::Approx(0.549306).margin(1e-6));

    // weight update sanity at one further round: correct rows would carry
    // exp(-alpha)/Z each; with eps=1/4 that is 1/6 per correct row
    double alpha = model->alphas()[0];
    double z = 3 * 0.25 * std::exp(-alpha) + 0.25 * std::exp(alpha);
    REQUIRE(0.25 * std::exp(-alpha) / z == Catch::Approx(1.0 / 6.0).margin(1e-12));
}

TEST_CASE("a perfect stump stops boosting after one capped round", "[adaboost]") {
    Rows x = {{1, 0}, {1, 1}, {0, 1}, {0, 0}};
    Labels y = {1, 1, 0, 0}; // feature 0 is the label
    auto model = train_adaboost(x, y, 50);
    REQUIRE(model->rounds() == 1);
    REQUIRE(model->epsilons()[0] == 0.0);
    REQUIRE(model->alphas()[0] ==
            Catch::Approx(0.5 * std::log((1.0 - 1e-10) / 1e-10)).margin(1e-9));
    // the single stump must match one trained fresh with uniform weights
    auto fresh = train_decision_tree_weighted(x, y, std::vector<double>(4, 0.25), 1);
    for (const auto& row : x) {
        REQUIRE(model->predict(row) == fresh->predict(row));
        REQUIRE(model->predict(row) == (row[0] >= 0.5 ? 1 : 0));
    }
}

TEST_CASE("training error respects the exponential bound", "[adaboost]") {
    Rng rng(40);
    for (int trial = 0; trial < 5; ++trial) {
        Rows x;
        Labels y;
        boost_data(rng, 50, 6, x, y);
        auto model = train_adaboost(x, y, 30);

        double bound = 1.0;
        for (double eps : model->epsilons()) bound *= 2.0 * std::sqrt(eps * (1.0 - eps));

        double errors = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (model->predict(x[i]) != y[i]) errors += 1;
        double train_err = errors / static_cast<double>(x.size());
        REQUIRE(train_err <= bound + 1e-12);
    }
}

TEST_CASE("boosting beats its own first stump on learnable data", "[adaboost]") {
    Rng rng(31);
    Rows x;
    Labels y;
    boost_data(rng, 60, 5, x, y);
    auto boosted = train_adaboost(x, y, 30);
    auto stump = train_decision_tree_weighted(
        x, y, std::vector<double>(x.size(), 1.0 / static_cast<double>(x.size())), 1);
    int boosted_hits = 0, stump_hits = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        boosted_hits += boosted->predict(x[i]) == y[i];
        stump_hits += stump->predict(x[i]) == y[i];
    }
    REQUIRE(boosted->rounds() > 1);
    REQUIRE(boosted_hits >= stump_hits);
}

TEST_CASE("adaboost rejects bad inputs", "[adaboost]") {
    REQUIRE_THROWS_AS(train_adaboost({{1}, {0}}, {1, 0}, 0), DataError);
    REQUIRE_THROWS_AS(train_adaboost({{1}, {0}}, {1, 1}, 10), DataError);
    REQUIRE_THROWS_AS(train_adaboost({}, {}, 10), DataError);
}
