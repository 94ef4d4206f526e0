#pragma once

// Stratified k-fold plans. Each class is shuffled with the plan seed, then
// dealt round-robin across folds with a cursor that carries over between
// classes, so per-fold class counts differ by at most one AND fold sizes
// stay balanced.

#include <cstdint>
#include <vector>

#include "setd/common.hpp"
#include "setd/rng.hpp"

namespace setd {

struct FoldPlan {
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<std::size_t>> folds; // row indices per fold

    std::vector<std::size_t> test_indices(int fold) const {
        return folds.at(static_cast<std::size_t>(fold));
    }

    std::vector<std::size_t> train_indices(int fold) const {
        std::vector<std::size_t> out;
        for (int f = 0; f < k; ++f) {
            if (f == fold) continue;
            const auto& part = folds[static_cast<std::size_t>(f)];
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
};

inline FoldPlan stratified_kfold(const std::vector<int>& labels, int k, std::uint64_t seed) {
    if (k < 2) throw DataError("stratified_kfold: k must be >= 2");

    std::vector<std::size_t> positives, negatives;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] == 1 ? positives : negatives).push_back(i);
    if (positives.size() < static_cast<std::size_t>(k) ||
        negatives.size() < static_cast<std::size_t>(k))
        throw DataError("stratified_kfold: a class has fewer members than k");

    Rng rng(seed);
    rng.shuffle(positives);
    rng.shuffle(negatives);

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.folds.assign(static_cast<std::size_t>(k), {});
    std::size_t cursor = 0;
    for (const auto* cls : {&positives, &negatives})
        for (std::size_t idx : *cls)
            plan.folds[cursor++ % static_cast<std::size_t>(k)].push_back(idx);
    return plan;
}

} // namespace setd
