#pragma once

// k-nearest-neighbour classifier. Neighbours are ordered by (squared
// euclidean distance, training index) so ties in distance resolve
// deterministically; vote ties go to class 1.

#include <algorithm>
#include <vector>

#include "setd/models/base.hpp"

namespace setd {

inline double squared_distance(const Row& a, const Row& b) {
    if (a.size() != b.size()) throw DataError("squared_distance: width mismatch");
    double d2 = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        d2 += d * d;
    }
    return d2;
}

class KnnModel : public Model {
public:
    KnnModel(Rows x, Labels y, int k) : x_(std::move(x)), y_(std::move(y)), k_(k) {}

    Family family() const override { return Family::knn; }
    std::size_t width() const override { return x_.front().size(); }
    int k() const { return k_; }

    nlohmann::json params_json() const override {
        return {{"k", k_}, {"stored_rows", x_.size()}};
    }

protected:
    int predict_unchecked(const Row& row) const override {
        std::vector<std::pair<double, std::size_t>> order(x_.size());
        for (std::size_t i = 0; i < x_.size(); ++i)
            order[i] = {squared_distance(x_[i], row), i};
        std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(k_), order.size());
        std::partial_sort(order.begin(), order.begin() + k, order.end());
        int votes1 = 0;
        for (std::size_t i = 0; i < k; ++i)
            if (y_[order[i].second] == 1) ++votes1;
        return 2 * votes1 >= static_cast<int>(k) ? 1 : 0;
    }

private:
    Rows x_;
    Labels y_;
    int k_;
};

inline std::unique_ptr<KnnModel> train_knn(const Rows& x, const Labels& y, int k) {
    detail::require_nonempty(x, y);
    if (k < 1) throw DataError("knn: k must be at least 1");
    if (static_cast<std::size_t>(k) > x.size())
        throw DataError("knn: k exceeds stored row count");
    return std::make_unique<KnnModel>(x, y, k);
}

} // namespace setd
