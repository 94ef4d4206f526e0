#include <catch2/catch_amalgamated.hpp>

#include "setd/models/decision_tree.hpp"
#include "setd/models/random_forest.hpp"
#include "setd/rng.hpp"

using namespace setd;

namespace {

Rows random_rows(Rng& rng, std::size_t n, std::size_t width) {
    Rows x(n, Row(width));
    for (auto& row : x)
        for (auto& cell : row) cell = static_cast<double>(rng.below(2));
    return x;
}

Labels random_labels(Rng& rng, std::size_t n) {
    Labels y(n);
    for (auto& v : y) v = static_cast<int>(rng.below(2));
    return y;
}

bool same_structure(const DecisionTreeModel& a, const DecisionTreeModel& b) {
    const auto& na = a.nodes();
    const auto& nb = b.nodes();
    if (na.size() != nb.size()) return false;
    for (std::size_t i = 0; i < na.size(); ++i) {
        if (na[i].is_leaf != nb[i].is_leaf || na[i].feature != nb[i].feature ||
            na[i].left != nb[i].left || na[i].right != nb[i].right ||
            na[i].klass != nb[i].klass || na[i].count0 != nb[i].count0 ||
            na[i].count1 != nb[i].count1)
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("degenerate forest equals a plain decision tree", "[forest]") {
    Rng rng(41);
    Rows x = random_rows(rng, 50, 9);
    Labels y = random_labels(rng, 50);
    // one tree, all features considered, no bootstrap: bagging adds nothing
    auto forest = train_random_forest(x, y, 1, static_cast<int>(x.front().size()), 99, 6, false);
    auto tree = train_decision_tree(x, y, 6);
    REQUIRE(forest->trees().size() == 1);
    REQUIRE(same_structure(*forest->trees()[0], *tree));
    for (const auto& row : x) REQUIRE(forest->predict(row) == tree->predict(row));
}

TEST_CASE("uniform labels yield a forest of constant trees", "[forest]") {
    Rng rng(5);
    Rows x = random_rows(rng, 20, 7);
    Labels y(20, 0);
    auto forest = train_random_forest(x, y, 10, 0, 3);
    for (const auto& t : forest->trees()) {
        REQUIRE(t->nodes().size() == 1);
        REQUIRE(t->nodes()[0].klass == 0);
    }
    REQUIRE(forest->predict(x[0]) == 0);
}

TEST_CASE("forest training is seed deterministic", "[forest]") {
    Rng rng(77);
    Rows x = random_rows(rng, 40, 11);
    Labels y = random_labels(rng, 40);
    auto a = train_random_forest(x, y, 15, 0, 1234);
    auto b = train_random_forest(x, y, 15, 0, 1234);
    auto c = train_random_forest(x, y, 15, 0, 1235);
    REQUIRE(a->trees().size() == 15);
    for (std::size_t i = 0; i < 15; ++i) REQUIRE(same_structure(*a->trees()[i], *b->trees()[i]));
    bool identical_to_c = true;
    for (std::size_t i = 0; i < 15 && identical_to_c; ++i)
        identical_to_c = same_structure(*a->trees()[i], *c->trees()[i]);
    REQUIRE_FALSE(identical_to_c);
    for (const auto& row : x) REQUIRE(a->predict(row) == b->predict(row));
}

TEST_CASE("forest prediction is the recounted majority vote", "[forest]") {
    Rng rng(9001);
    Rows x = random_rows(rng, 35, 8);
    Labels y = random_labels(rng, 35);
    auto forest = train_random_forest(x, y, 11, 2, 7);
    for (int q = 0; q < 60; ++q) {
        Row row(8);
        for (auto& cell : row) cell = static_cast<double>(rng.below(2));
        int votes1 = 0;
        for (const auto& t : forest->trees())
            if (t->predict(row) == 1) ++votes1;
        int expected = (2 * votes1 >= static_cast<int>(forest->trees().size())) ? 1 : 0;
        REQUIRE(forest->predict(row) == expected);
    }
}

TEST_CASE("default feature subset is the square-root rule", "[forest]") {
    // width 43 -> ceil(sqrt(43)) = 7; verified indirectly: a forest built with
    // explicit 7 and one built with the 0 default agree under the same seed.
    Rng rng(2);
    Rows x = random_rows(rng, 30, 43);
    Labels y = random_labels(rng, 30);
    auto defaulted = train_random_forest(x, y, 5, 0, 55);
    auto explicit7 = train_random_forest(x, y, 5, 7, 55);
    for (std::size_t i = 0; i < 5; ++i)
        REQUIRE(same_structure(*defaulted->trees()[i], *explicit7->trees()[i]));
}

TEST_CASE("forest rejects bad inputs", "[forest]") {
    REQUIRE_THROWS_AS(train_random_forest({}, {}, 10, 0, 1), DataError);
    REQUIRE_THROWS_AS(train_random_forest({{1, 0}}, {1}, 0, 0, 1), DataError);
}
