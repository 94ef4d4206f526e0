#pragma once

// Nearest-centroid classifier: one mean vector per class, predict the class
// whose centroid is closer; equidistant rows go to class 1.

#include <vector>

#include "setd/models/base.hpp"
#include "setd/models/knn.hpp" // squared_distance

namespace setd {

class NearestCentroidModel : public Model {
public:
    NearestCentroidModel(Row centroid0, Row centroid1)
        : c0_(std::move(centroid0)), c1_(std::move(centroid1)) {}

    Family family() const override { return Family::nearest_centroid; }
    std::size_t width() const override { return c0_.size(); }
    const Row& centroid(int cls) const { return cls == 1 ? c1_ : c0_; }

    nlohmann::json params_json() const override {
        return {{"centroid0", c0_}, {"centroid1", c1_}};
    }

protected:
    int predict_unchecked(const Row& row) const override {
        return squared_distance(c1_, row) <= squared_distance(c0_, row) ? 1 : 0;
    }

private:
    Row c0_;
    Row c1_;
};

inline std::unique_ptr<NearestCentroidModel> train_nearest_centroid(const Rows& x,
                                                                    const Labels& y) {
    detail::require_nonempty(x, y);
    detail::require_two_classes(y);
    std::size_t width = x.front().size();
    Row c0(width, 0.0), c1(width, 0.0);
    std::size_t n0 = 0, n1 = 0;
    for (std::size_t r = 0; r < x.size(); ++r) {
        Row& c = (y[r] == 1) ? c1 : c0;
        for (std::size_t i = 0; i < width; ++i) c[i] += x[r][i];
        (y[r] == 1 ? n1 : n0) += 1;
    }
    for (std::size_t i = 0; i < width; ++i) {
        c0[i] /= static_cast<double>(n0);
        c1[i] /= static_cast<double>(n1);
    }
    return std::make_unique<NearestCentroidModel>(std::move(c0), std::move(c1));
}

} // namespace setd
