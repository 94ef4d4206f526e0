#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "setd/metrics.hpp"
#include "setd/rng.hpp"

using namespace setd;

namespace {

// Direct-count oracle, written independently of compute_metrics.
MetricTriple count_oracle(const std::vector<int>& pred, const std::vector<int>& act) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] == 1 && act[i] == 1) tp += 1;
        if (pred[i] == 1 && act[i] == 0) fp += 1;
        if (pred[i] == 0 && act[i] == 1) fn += 1;
    }
    MetricTriple t;
    t.precision = (tp + fp) > 0 ? tp / (tp + fp) : 0.0;
    t.recall = (tp + fn) > 0 ? tp / (tp + fn) : 0.0;
    t.f1 = (t.precision + t.recall) > 0
               ? 2 * t.precision * t.recall / (t.precision + t.recall)
               : 0.0;
    return t;
}

// Sort-and-interpolate quantile oracle.
double quantile_oracle(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    double pos = q * static_cast<double>(v.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[lo + 1] - v[lo]);
}

} // namespace

TEST_CASE("hand-checked confusion counts", "[metrics]") {
    // TP=3, FP=1, FN=2
    std::vector<int> pred = {1, 1, 1, 1, 0, 0, 0};
    std::vector<int> act = {1, 1, 1, 0, 1, 1, 0};
    MetricTriple t = compute_metrics(pred, act);
    REQUIRE(t.precision == Catch::Approx(0.75).epsilon(1e-15));
    REQUIRE(t.recall == Catch::Approx(0.6).epsilon(1e-15));
    REQUIRE(t.f1 == Catch::Approx(2 * 0.45 / 1.35).epsilon(1e-12));
}

TEST_CASE("all-correct predictions score 1 across the triple", "[metrics]") {
    std::vector<int> y = {1, 0, 1, 1, 0};
    MetricTriple t = compute_metrics(y, y);
    REQUIRE(t.precision == 1.0);
    REQUIRE(t.recall == 1.0);
    REQUIRE(t.f1 == 1.0);
}

TEST_CASE("zero-denominator conventions", "[metrics]") {
    // no predicted positives -> precision 0
    MetricTriple a = compute_metrics({0, 0}, {1, 0});
    REQUIRE(a.precision == 0.0);
    REQUIRE(a.f1 == 0.0);
    // no actual positives -> recall 0
    MetricTriple b = compute_metrics({1, 0}, {0, 0});
    REQUIRE(b.recall == 0.0);
    REQUIRE(b.f1 == 0.0);
}

TEST_CASE("predict-all-positive on a 138/87 split is the baseline", "[metrics]") {
    std::vector<int> pred(225, 1), act(225, 0);
    for (int i = 0; i < 138; ++i) act[static_cast<std::size_t>(i)] = 1;
    MetricTriple t = compute_metrics(pred, act);
    REQUIRE(std::abs(t.precision - 0.613) <= 0.0005);
    REQUIRE(t.recall == 1.0);
    REQUIRE(t.f1 == Catch::Approx(2.0 * (138.0 / 225.0) / (1.0 + 138.0 / 225.0)).epsilon(1e-12));
}

TEST_CASE("metrics match a direct-count oracle on random instances", "[metrics]") {
    Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = 1 + rng.below(40);
        std::vector<int> pred(n), act(n);
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] = static_cast<int>(rng.below(2));
            act[i] = static_cast<int>(rng.below(2));
        }
        MetricTriple got = compute_metrics(pred, act);
        MetricTriple want = count_oracle(pred, act);
        REQUIRE(std::abs(got.precision - want.precision) <= 1e-12);
        REQUIRE(std::abs(got.recall - want.recall) <= 1e-12);
        REQUIRE(std::abs(got.f1 - want.f1) <= 1e-12);
        // harmonic-mean bracketing whenever both components are positive
        if (got.precision > 0 && got.recall > 0) {
            REQUIRE(got.f1 <= std::max(got.precision, got.recall) + 1e-12);
            REQUIRE(got.f1 >= std::min(got.precision, got.recall) - 1e-12);
        }
        REQUIRE((got.precision >= 0 && got.precision <= 1));
        REQUIRE((got.recall >= 0 && got.recall <= 1));
        REQUIRE((got.f1 >= 0 && got.f1 <= 1));
    }
}

TEST_CASE("metrics reject malformed inputs", "[metrics]") {
    REQUIRE_THROWS_AS(compute_metrics({1}, {1, 0}), DataError);
    REQUIRE_THROWS_AS(compute_metrics({}, {}), DataError);
}

TEST_CASE("boxplot of a single value collapses", "[metrics]") {
    BoxSummary b = summarize_boxplot({0.5});
    REQUIRE(b.min == 0.5);
    REQUIRE(b.q1 == 0.5);
    REQUIRE(b.median == 0.5);
    REQUIRE(b.q3 == 0.5);
    REQUIRE(b.max == 0.5);
    REQUIRE(b.outliers.empty());
}

TEST_CASE("boxplot of 1..5 has exact quartiles", "[metrics]") {
    BoxSummary b = summarize_boxplot({1, 2, 3, 4, 5});
    REQUIRE(b.q1 == 2.0);
    REQUIRE(b.median == 3.0);
    REQUIRE(b.q3 == 4.0);
    REQUIRE(b.min == 1.0);
    REQUIRE(b.max == 5.0);
    REQUIRE(b.outliers.empty());
}

TEST_CASE("boxplot flags values beyond the 1.5 IQR fences", "[metrics]") {
    BoxSummary b = summarize_boxplot({1, 2, 3, 4, 5, 100});
    REQUIRE(b.outliers == std::vector<double>{100.0});
    REQUIRE(b.max <= 5.0); // whisker excludes the outlier
}

TEST_CASE("boxplot matches a sort-and-interpolate oracle", "[metrics]") {
    Rng rng(555);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> values;
        std::size_t n = 1 + rng.below(100);
        for (std::size_t i = 0; i < n; ++i) values.push_back(rng.unit() * 10);

        BoxSummary b = summarize_boxplot(values);
        double q1 = quantile_oracle(values, 0.25);
        double med = quantile_oracle(values, 0.5);
        double q3 = quantile_oracle(values, 0.75);
        REQUIRE(b.q1 == Catch::Approx(q1).margin(1e-12));
        REQUIRE(b.median == Catch::Approx(med).margin(1e-12));
        REQUIRE(b.q3 == Catch::Approx(q3).margin(1e-12));

        double iqr = q3 - q1;
        double lo_fence = q1 - 1.5 * iqr, hi_fence = q3 + 1.5 * iqr;
        std::vector<double> out, in;
        for (double v : values)
            (v < lo_fence || v > hi_fence ? out : in).push_back(v);
        std::sort(out.begin(), out.end());
        std::vector<double> got_out = b.outliers;
        std::sort(got_out.begin(), got_out.end());
        REQUIRE(got_out == out);
        REQUIRE(b.min == *std::min_element(in.begin(), in.end()));
        REQUIRE(b.max == *std::max_element(in.begin(), in.end()));
    }
}

TEST_CASE("boxplot rejects empty input", "[metrics]") {
    REQUIRE_THROWS_AS(summarize_boxplot({}), DataError);
}
