#pragma once

// Bernoulli naive Bayes with Laplace smoothing:
//   theta[c][i] = (count of feature i on in class c + alpha) / (n_c + 2 alpha)
// Scoring runs in log space; ties go to class 1.

#include <cmath>
#include <vector>

#include "setd/models/base.hpp"

namespace setd {

class NaiveBayesModel : public Model {
public:
    NaiveBayesModel(std::vector<double> theta0, std::vector<double> theta1, double prior0,
                    double prior1)
        : theta0_(std::move(theta0)),
          theta1_(std::move(theta1)),
          prior0_(prior0),
          prior1_(prior1) {}

    Family family() const override { return Family::naive_bayes; }
    std::size_t width() const override { return theta0_.size(); }

    const std::vector<double>& theta(int cls) const { return cls == 1 ? theta1_ : theta0_; }
    double prior(int cls) const { return cls == 1 ? prior1_ : prior0_; }

    // log(prior_c * prod_i theta^x (1-theta)^(1-x))
    double log_joint(const Row& row, int cls) const {
        const std::vector<double>& th = theta(cls);
        double s = std::log(prior(cls));
        for (std::size_t i = 0; i < th.size(); ++i)
            s += detail::bit_set(row[i]) ? std::log(th[i]) : std::log(1.0 - th[i]);
        return s;
    }

    nlohmann::json params_json() const override {
        return {{"theta0", theta0_},
                {"theta1", theta1_},
                {"prior0", prior0_},
                {"prior1", prior1_}};
    }

protected:
    int predict_unchecked(const Row& row) const override {
        return log_joint(row, 1) >= log_joint(row, 0) ? 1 : 0;
    }

private:
    std::vector<double> theta0_;
    std::vector<double> theta1_;
    double prior0_;
    double prior1_;
};

inline std::unique_ptr<NaiveBayesModel> train_naive_bayes(const Rows& x, const Labels& y,
                                                          double alpha) {
    detail::require_nonempty(x, y);
    detail::require_two_classes(y);
    if (alpha <= 0) throw DataError("naive_bayes: alpha must be positive");

    std::size_t width = x.front().size();
    std::vector<double> on0(width, 0.0), on1(width, 0.0);
    double n0 = 0, n1 = 0;
    for (std::size_t r = 0; r < x.size(); ++r) {
        std::vector<double>& on = (y[r] == 1) ? on1 : on0;
        (y[r] == 1 ? n1 : n0) += 1;
        for (std::size_t i = 0; i < width; ++i)
            if (detail::bit_set(x[r][i])) on[i] += 1;
    }
    std::vector<double> theta0(width), theta1(width);
    for (std::size_t i = 0; i < width; ++i) {
        theta0[i] = (on0[i] + alpha) / (n0 + 2 * alpha);
        theta1[i] = (on1[i] + alpha) / (n1 + 2 * alpha);
    }
    double n = n0 + n1;
    return std::make_unique<NaiveBayesModel>(std::move(theta0), std::move(theta1), n0 / n,
                                             n1 / n);
}

} // namespace setd
