#pragma once

// Soft-margin kernel SVM trained by sequential pairwise coordinate
// optimization over the dual (simplified SMO). Labels {0,1} are mapped to
// {-1,+1} internally; the decision sign maps back, with 0 counting as
// positive.

#include <cmath>
#include <cstdint>
#include <vector>

#include "setd/models/base.hpp"
#include "setd/rng.hpp"

namespace setd {

// Kernels: linear x.z, polynomial (a x.z + c)^d, gaussian exp(-|x-z|^2 / 2 sigma^2).
inline double kernel_eval(const KernelParams& k, const Row& x, const Row& z) {
    if (x.size() != z.size()) throw DataError("kernel_eval: width mismatch");
    switch (k.kind) {
        case KernelKind::linear: {
            double dot = 0;
            for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * z[i];
            return dot;
        }
        case KernelKind::polynomial: {
            double dot = 0;
            for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * z[i];
            return std::pow(k.poly_a * dot + k.poly_c, k.poly_degree);
        }
        case KernelKind::gaussian: {
            if (k.sigma <= 0) throw DataError("kernel_eval: gaussian kernel requires sigma > 0");
            double d2 = 0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                double d = x[i] - z[i];
                d2 += d * d;
            }
            return std::exp(-d2 / (2.0 * k.sigma * k.sigma));
        }
    }
    throw InternalError("bad kernel kind");
}

class SvmModel : public Model {
public:
    SvmModel(Rows support, std::vector<double> coeffs, double bias, KernelParams kernel,
             std::size_t width)
        : support_(std::move(support)),
          coeffs_(std::move(coeffs)),
          bias_(bias),
          kernel_(kernel),
          width_(width) {}

    Family family() const override { return Family::svm; }
    std::size_t width() const override { return width_; }

    // sum_i alpha_i y_i K(x_i, x) + b over the retained support vectors.
    double decision_value(const Row& row) const {
        double f = bias_;
        for (std::size_t i = 0; i < support_.size(); ++i)
            f += coeffs_[i] * kernel_eval(kernel_, support_[i], row);
        return f;
    }

    const KernelParams& kernel() const { return kernel_; }

    nlohmann::json params_json() const override {
        nlohmann::json sv = nlohmann::json::array();
        for (const auto& r : support_) sv.push_back(r);
        return {{"support_vectors", sv},
                {"coefficients", coeffs_},
                {"bias", bias_},
                {"kernel", std::string(kernel_name(kernel_.kind))},
                {"sigma", kernel_.sigma}};
    }

protected:
    int predict_unchecked(const Row& row) const override {
        return decision_value(row) >= 0 ? 1 : 0;
    }

private:
    Rows support_;
    std::vector<double> coeffs_; // alpha_i * y_i
    double bias_;
    KernelParams kernel_;
    std::size_t width_;
};

struct SvmTrainingResult {
    std::unique_ptr<SvmModel> model;
    std::vector<double> alphas; // full dual vector, for box-constraint checks
    double bias = 0;
};

inline SvmTrainingResult train_svm_full(const Rows& x, const Labels& y, KernelParams kernel,
                                        double c, double tol, int max_passes,
                                        std::uint64_t seed) {
    detail::require_nonempty(x, y);
    detail::require_two_classes(y);
    if (c <= 0) throw DataError("svm: C must be positive");

    std::size_t n = x.size();
    std::size_t width = x.front().size();
    if (kernel.kind == KernelKind::gaussian && kernel.sigma <= 0)
        kernel.sigma = std::sqrt(static_cast<double>(width) / 2.0); // 1/(2 sigma^2) = 1/width

    std::vector<double> ylab(n);
    for (std::size_t i = 0; i < n; ++i) ylab[i] = (y[i] == 1) ? 1.0 : -1.0;

    // Dense kernel cache; training sets here are a few hundred rows.
    std::vector<double> gram(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double v = kernel_eval(kernel, x[i], x[j]);
            gram[i * n + j] = v;
            gram[j * n + i] = v;
        }

    std::vector<double> alpha(n, 0.0);
    double b = 0.0;
    Rng rng(seed);

    auto decision = [&](std::size_t i) {
        double f = b;
        for (std::size_t j = 0; j < n; ++j)
            if (alpha[j] > 0) f += alpha[j] * ylab[j] * gram[j * n + i];
        return f;
    };

    int passes = 0;
    int sweeps = 0;
    const int sweep_cap = 200; // hard stop; keeps training time bounded
    while (passes < max_passes && sweeps < sweep_cap) {
        ++sweeps;
        int changed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double ei = decision(i) - ylab[i];
            bool violates = (ylab[i] * ei < -tol && alpha[i] < c) ||
                            (ylab[i] * ei > tol && alpha[i] > 0);
            if (!violates) continue;

            std::size_t j = static_cast<std::size_t>(rng.below(n - 1));
            if (j >= i) ++j;
            double ej = decision(j) - ylab[j];

            double ai_old = alpha[i], aj_old = alpha[j];
            double lo, hi;
            if (ylab[i] != ylab[j]) {
                lo = std::max(0.0, aj_old - ai_old);
                hi = std::min(c, c + aj_old - ai_old);
            } else {
                lo = std::max(0.0, ai_old + aj_old - c);
                hi = std::min(c, ai_old + aj_old);
            }
            if (lo >= hi) continue;

            double eta = 2.0 * gram[i * n + j] - gram[i * n + i] - gram[j * n + j];
            if (eta >= 0) continue;

            double aj = aj_old - ylab[j] * (ei - ej) / eta;
            aj = std::min(hi, std::max(lo, aj));
            if (std::abs(aj - aj_old) < 1e-7) continue;
            double ai = ai_old + ylab[i] * ylab[j] * (aj_old - aj);

            double b1 = b - ei - ylab[i] * (ai - ai_old) * gram[i * n + i] -
                        ylab[j] * (aj - aj_old) * gram[i * n + j];
            double b2 = b - ej - ylab[i] * (ai - ai_old) * gram[i * n + j] -
                        ylab[j] * (aj - aj_old) * gram[j * n + j];
            if (ai > 0 && ai < c) b = b1;
            else if (aj > 0 && aj < c) b = b2;
            else b = 0.5 * (b1 + b2);

            alpha[i] = ai;
            alpha[j] = aj;
            ++changed;
        }
        passes = (changed == 0) ? passes + 1 : 0;
    }

    Rows support;
    std::vector<double> coeffs;
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] > 0) {
            support.push_back(x[i]);
            coeffs.push_back(alpha[i] * ylab[i]);
        }
    }

    SvmTrainingResult result;
    result.alphas = std::move(alpha);
    result.bias = b;
    result.model =
        std::make_unique<SvmModel>(std::move(support), std::move(coeffs), b, kernel, width);
    return result;
}

inline std::unique_ptr<SvmModel> train_svm(const Rows& x, const Labels& y, KernelParams kernel,
                                           double c, double tol, int max_passes,
                                           std::uint64_t seed) {
    return train_svm_full(x, y, kernel, c, tol, max_passes, seed).model;
}

} // namespace setd
