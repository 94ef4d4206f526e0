#pragma once

// Precision / recall / F1 for the positive class, and five-number boxplot
// summaries with the 1.5*IQR whisker convention.

#include <algorithm>
#include <cmath>
#include <vector>

#include "setd/common.hpp"

namespace setd {

struct MetricTriple {
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

// Zero-denominator convention: precision = 0 with no predicted positives,
// recall = 0 with no actual positives, F1 = 0 when P + R = 0.
inline MetricTriple compute_metrics(const std::vector<int>& predicted,
                                    const std::vector<int>& actual) {
    if (predicted.size() != actual.size())
        throw DataError("compute_metrics: prediction/label length mismatch");
    if (predicted.empty()) throw DataError("compute_metrics: empty input");

    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] == 1 && actual[i] == 1) ++tp;
        else if (predicted[i] == 1 && actual[i] == 0) ++fp;
        else if (predicted[i] == 0 && actual[i] == 1) ++fn;
    }
    MetricTriple m;
    m.precision = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.recall = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.f1 = (m.precision + m.recall > 0) ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                        : 0.0;
    return m;
}

struct BoxSummary {
    double min = 0;      // lowest non-outlier (whisker)
    double q1 = 0;
    double median = 0;
    double q3 = 0;
    double max = 0;      // highest non-outlier (whisker)
    std::vector<double> outliers;
};

namespace detail {

// Linear-interpolation quantile over a sorted list, q in [0,1].
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    double pos = q * static_cast<double>(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

} // namespace detail

inline BoxSummary summarize_boxplot(std::vector<double> values) {
    if (values.empty()) throw DataError("summarize_boxplot: empty input");
    std::sort(values.begin(), values.end());

    BoxSummary b;
    b.q1 = detail::quantile_sorted(values, 0.25);
    b.median = detail::quantile_sorted(values, 0.5);
    b.q3 = detail::quantile_sorted(values, 0.75);
    double iqr = b.q3 - b.q1;
    double lo_fence = b.q1 - 1.5 * iqr;
    double hi_fence = b.q3 + 1.5 * iqr;

    b.min = b.max = b.median;
    bool any_inlier = false;
    for (double v : values) {
        if (v < lo_fence || v > hi_fence) {
            b.outliers.push_back(v);
        } else {
            if (!any_inlier) { b.min = b.max = v; any_inlier = true; }
            b.min = std::min(b.min, v);
            b.max = std::max(b.max, v);
        }
    }
    return b;
}

} // namespace setd
