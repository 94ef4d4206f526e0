#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "setd/models/factory.hpp"
#include "setd/rng.hpp"

using namespace setd;

namespace {

void binary_data(Rng& rng, std::size_t n, std::size_t width, Rows& x, Labels& y) {
    x.assign(n, Row(width));
    y.assign(n, 0);
    for (std::size_t r = 0; r < n; ++r) {
        for (auto& cell : x[r]) cell = static_cast<double>(rng.below(2));
        y[r] = static_cast<int>(rng.below(2));
    }
    y[0] = 0;
    y[1] = 1; // both classes always present
}

// Full-scan kNN oracle: sort (distance, index), tally first k, tie -> 1.
int knn_oracle(const Rows& x, const Labels& y, const Row& q, int k) {
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t i = 0; i < x.size(); ++i) order.emplace_back(squared_distance(x[i], q), i);
    std::sort(order.begin(), order.end());
    int votes1 = 0;
    for (int i = 0; i < k; ++i) votes1 += y[order[static_cast<std::size_t>(i)].second];
    return 2 * votes1 >= k ? 1 : 0;
}

} // namespace

TEST_CASE("knn with k=1 echoes the nearest stored row", "[simple]") {
    Rows x = {{0, 0, 0}, {1, 1, 1}};
    Labels y = {0, 1};
    auto model = train_knn(x, y, 1);
    REQUIRE(model->predict({0, 0, 1}) == 0);
    REQUIRE(model->predict({1, 1, 0}) == 1);
    REQUIRE(model->predict({1, 1, 1}) == 1);
}

TEST_CASE("knn with k=n is the global majority", "[simple]") {
    Rows x = {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {1, 1}};
    Labels y = {0, 0, 1, 1, 1};
    auto model = train_knn(x, y, 5);
    // every query sees all rows: majority class 1 regardless of position
    REQUIRE(model->predict({0, 0}) == 1);
    REQUIRE(model->predict({1, 1}) == 1);
}

TEST_CASE("knn agrees with a full-scan oracle", "[simple]") {
    Rng rng(7171);
    Rows x;
    Labels y;
    binary_data(rng, 30, 6, x, y);
    for (int k : {1, 3, 5, 7}) {
        auto model = train_knn(x, y, k);
        for (int q = 0; q < 100; ++q) {
            Row query(6);
            for (auto& cell : query) cell = static_cast<double>(rng.below(2));
            REQUIRE(model->predict(query) == knn_oracle(x, y, query, k));
        }
    }
}

TEST_CASE("knn rejects invalid k", "[simple]") {
    Rows x = {{0}, {1}};
    Labels y = {0, 1};
    REQUIRE_THROWS_AS(train_knn(x, y, 0), DataError);
    REQUIRE_THROWS_AS(train_knn(x, y, 3), DataError); // k exceeds row count
    REQUIRE_THROWS_AS(train_knn({}, {}, 1), DataError);
}

TEST_CASE("nearest centroid computes per-class means", "[simple]") {
    Rows x = {{1, 1, 0}, {1, 0, 0}, {0, 0, 1}, {0, 1, 1}};
    Labels y = {1, 1, 0, 0};
    auto model = train_nearest_centroid(x, y);
    REQUIRE(model->centroid(1) == Row{1.0, 0.5, 0.0});
    REQUIRE(model->centroid(0) == Row{0.0, 0.5, 1.0});
    REQUIRE(model->predict({1, 1, 0}) == 1);
    REQUIRE(model->predict({0, 0, 1}) == 0);
}

TEST_CASE("nearest centroid matches a mean oracle on random data", "[simple]") {
    Rng rng(88);
    Rows x;
    Labels y;
    binary_data(rng, 25, 5, x, y);
    auto model = train_nearest_centroid(x, y);
    for (int cls : {0, 1}) {
        Row mean(5, 0.0);
        double n = 0;
        for (std::size_t r = 0; r < x.size(); ++r) {
            if (y[r] != cls) continue;
            n += 1;
            for (std::size_t i = 0; i < 5; ++i) mean[i] += x[r][i];
        }
        for (std::size_t i = 0; i < 5; ++i) {
            mean[i] /= n;
            REQUIRE(model->centroid(cls)[i] == Catch::Approx(mean[i]).margin(1e-15));
        }
    }
    for (int q = 0; q < 50; ++q) {
        Row query(5);
        for (auto& cell : query) cell = static_cast<double>(rng.below(2));
        double d1 = squared_distance(query, model->centroid(1));
        double d0 = squared_distance(query, model->centroid(0));
        REQUIRE(model->predict(query) == (d1 <= d0 ? 1 : 0));
    }
}

TEST_CASE("nearest centroid breaks exact ties toward class 1", "[simple]") {
    Rows x = {{1, 0}, {0, 1}};
    Labels y = {0, 1};
    auto model = train_nearest_centroid(x, y);
    REQUIRE(model->predict({0, 0}) == 1); // equidistant corners
    REQUIRE(model->predict({1, 1}) == 1);
    REQUIRE_THROWS_AS(train_nearest_centroid({{1}, {0}}, {1, 1}), DataError);
}

TEST_CASE("naive bayes hand-worked example", "[simple]") {
    Rows x = {{1, 0}, {1, 1}, {0, 1}, {0, 0}};
    Labels y = {1, 1, 0, 0};
    auto model = train_naive_bayes(x, y, 1.0);

    REQUIRE(model->theta(1)[0] == Catch::Approx(0.75).epsilon(1e-15));  // (2+1)/(2+2)
    REQUIRE(model->theta(1)[1] == Catch::Approx(0.5).epsilon(1e-15));   // (1+1)/(2+2)
    REQUIRE(model->prior(1) == Catch::Approx(0.5).epsilon(1e-15));

    // query [1,0]: class 1 joint 0.5*0.75*0.5 = 0.1875, class 0 joint 0.0625
    REQUIRE(std::exp(model->log_joint({1, 0}, 1)) == Catch::Approx(0.1875).epsilon(1e-12));
    REQUIRE(std::exp(model->log_joint({1, 0}, 0)) == Catch::Approx(0.0625).epsilon(1e-12));
    REQUIRE(model->predict({1, 0}) == 1);
}

TEST_CASE("naive bayes log scores match the direct product", "[simple]") {
    Rng rng(3003);
    Rows x;
    Labels y;
    binary_data(rng, 20, 4, x, y);
    auto model = train_naive_bayes(x, y, 1.0);
    for (int cls : {0, 1}) {
        for (double th : model->theta(cls)) {
            REQUIRE(th > 0.0);
            REQUIRE(th < 1.0); // smoothing keeps estimates interior
        }
    }
    for (int q = 0; q < 40; ++q) {
        Row query(4);
        for (auto& cell : query) cell = static_cast<double>(rng.below(2));
        for (int cls : {0, 1}) {
            double direct = model->prior(cls);
            for (std::size_t i = 0; i < 4; ++i) {
                double th = model->theta(cls)[i];
                direct *= (query[i] >= 0.5) ? th : (1.0 - th);
            }
            REQUIRE(std::exp(model->log_joint(query, cls)) ==
                    Catch::Approx(direct).margin(1e-9));
        }
        int expect = model->log_joint(query, 1) >= model->log_joint(query, 0) ? 1 : 0;
        REQUIRE(model->predict(query) == expect);
    }
}

TEST_CASE("naive bayes rejects bad inputs", "[simple]") {
    REQUIRE_THROWS_AS(train_naive_bayes({{1}, {0}}, {1, 0}, 0.0), DataError);
    REQUIRE_THROWS_AS(train_naive_bayes({{1}, {0}}, {1, 0}, -1.0), DataError);
    REQUIRE_THROWS_AS(train_naive_bayes({{1}, {0}}, {1, 1}, 1.0), DataError);
}

TEST_CASE("voting is the recounted majority of its five members", "[simple]") {
    Rng rng(515);
    Rows x;
    Labels y;
    binary_data(rng, 24, 6, x, y);

    ModelSpec spec;
    spec.family = Family::voting;
    spec.seed = 99;
    spec.mlp_epochs = 30; // keep the embedded nets cheap
    auto model = train_voting(x, y, spec);
    REQUIRE(model->members().size() == 5);

    for (int q = 0; q < 200; ++q) {
        Row query(6);
        for (auto& cell : query) cell = static_cast<double>(rng.below(2));
        int votes1 = 0;
        for (const auto& m : model->members())
            if (m->predict(query) == 1) ++votes1;
        int expect = 2 * votes1 >= 5 ? 1 : 0;
        REQUIRE(model->predict(query) == expect);
    }
}

TEST_CASE("voting members are the documented families in order", "[simple]") {
    Rng rng(21);
    Rows x;
    Labels y;
    binary_data(rng, 16, 4, x, y);
    ModelSpec spec;
    spec.family = Family::voting;
    spec.seed = 5;
    spec.mlp_epochs = 10;
    auto model = train_voting(x, y, spec);
    REQUIRE(model->members()[0]->family() == Family::decision_tree);
    REQUIRE(model->members()[1]->family() == Family::nearest_centroid);
    REQUIRE(model->members()[2]->family() == Family::mlp);
    REQUIRE(model->members()[3]->family() == Family::svm);
    REQUIRE(model->members()[4]->family() == Family::naive_bayes);
}

TEST_CASE("model persistence carries family, spec, layout hash and params", "[simple]") {
    Rng rng(606);
    Rows x;
    Labels y;
    binary_data(rng, 18, 5, x, y);

    ModelSpec spec;
    spec.family = Family::naive_bayes;
    spec.nb_alpha = 1.0;
    auto model = train_model(spec, x, y);
    auto j = model_to_json(*model, spec, "deadbeef01234567");

    REQUIRE(j["family"] == "naive_bayes");
    REQUIRE(j["layout_hash"] == "deadbeef01234567");
    REQUIRE(j["spec"]["family"] == "naive_bayes");
    REQUIRE(j["spec"]["alpha"] == 1.0);
    REQUIRE(j["params"].contains("theta1"));

    // factory dispatch covers every family name
    for (Family f : {Family::decision_tree, Family::random_forest, Family::knn,
                     Family::nearest_centroid, Family::logistic_regression}) {
        ModelSpec s;
        s.family = f;
        s.knn_k = 5;
        auto m = train_model(s, x, y);
        REQUIRE(m->family() == f);
        auto mj = model_to_json(*m, s, "00");
        REQUIRE(mj["family"] == std::string(family_name(f)));
        REQUIRE(mj["params"].is_object());
    }
}
