#pragma once

// Logistic regression by full-batch gradient descent, zero-initialized.
// Loss/gradient are free functions so the gradient can be finite-difference
// checked.

#include <cmath>
#include <vector>

#include "setd/models/base.hpp"
#include "setd/models/mlp.hpp" // sigmoid

namespace setd {

// Mean BCE plus (l2/2)*|w|^2; the bias is not regularized.
inline double logistic_loss(const std::vector<double>& w, double b, const Rows& x,
                            const Labels& y, double l2) {
    double total = 0;
    for (std::size_t r = 0; r < x.size(); ++r) {
        double z = b;
        for (std::size_t i = 0; i < w.size(); ++i) z += w[i] * x[r][i];
        double p = std::min(1.0 - 1e-12, std::max(1e-12, sigmoid(z)));
        total += (y[r] == 1) ? -std::log(p) : -std::log(1.0 - p);
    }
    double reg = 0;
    for (double wi : w) reg += wi * wi;
    return total / static_cast<double>(x.size()) + 0.5 * l2 * reg;
}

inline void logistic_gradient(const std::vector<double>& w, double b, const Rows& x,
                              const Labels& y, double l2, std::vector<double>& gw,
                              double& gb) {
    gw.assign(w.size(), 0.0);
    gb = 0;
    double inv_n = 1.0 / static_cast<double>(x.size());
    for (std::size_t r = 0; r < x.size(); ++r) {
        double z = b;
        for (std::size_t i = 0; i < w.size(); ++i) z += w[i] * x[r][i];
        double d = (sigmoid(z) - (y[r] == 1 ? 1.0 : 0.0)) * inv_n;
        gb += d;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (x[r][i] == 0) continue;
            gw[i] += d * x[r][i];
        }
    }
    for (std::size_t i = 0; i < w.size(); ++i) gw[i] += l2 * w[i];
}

class LogisticModel : public Model {
public:
    LogisticModel(std::vector<double> w, double b) : w_(std::move(w)), b_(b) {}

    Family family() const override { return Family::logistic_regression; }
    std::size_t width() const override { return w_.size(); }
    const std::vector<double>& weights() const { return w_; }
    double bias() const { return b_; }

    double probability(const Row& row) const {
        double z = b_;
        for (std::size_t i = 0; i < w_.size(); ++i) z += w_[i] * row[i];
        return sigmoid(z);
    }

    nlohmann::json params_json() const override {
        return {{"weights", w_}, {"bias", b_}};
    }

protected:
    int predict_unchecked(const Row& row) const override {
        return probability(row) >= 0.5 ? 1 : 0;
    }

private:
    std::vector<double> w_;
    double b_;
};

inline std::unique_ptr<LogisticModel> train_logistic(const Rows& x, const Labels& y,
                                                     double learning_rate, int epochs,
                                                     double l2) {
    detail::require_nonempty(x, y);
    if (learning_rate <= 0) throw DataError("logistic: learning rate must be positive");
    if (epochs < 0) throw DataError("logistic: epochs must be non-negative");
    if (l2 < 0) throw DataError("logistic: l2 must be non-negative");

    std::vector<double> w(x.front().size(), 0.0);
    double b = 0;
    std::vector<double> gw;
    double gb;
    for (int e = 0; e < epochs; ++e) {
        logistic_gradient(w, b, x, y, l2, gw, gb);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= learning_rate * gw[i];
        b -= learning_rate * gb;
    }
    return std::make_unique<LogisticModel>(std::move(w), b);
}

} // namespace setd
