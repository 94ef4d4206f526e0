#pragma once

// Feed-forward perceptron with one or more sigmoid hidden layers and a
// sigmoid output unit, trained by full-batch gradient descent on mean binary
// cross-entropy. Net and analytic gradient are exposed separately so the
// gradient can be checked against finite differences.

#include <cmath>
#include <cstdint>
#include <vector>

#include "setd/models/base.hpp"
#include "setd/rng.hpp"

namespace setd {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct MlpNet {
    std::vector<std::size_t> sizes;      // input width, hidden..., 1
    std::vector<std::vector<double>> w;  // w[l]: sizes[l+1] x sizes[l], row-major
    std::vector<std::vector<double>> b;  // b[l]: sizes[l+1]

    static MlpNet zeros(std::size_t in, const std::vector<int>& hidden) {
        if (in == 0) throw DataError("mlp: input width must be positive");
        MlpNet net;
        net.sizes.push_back(in);
        for (int h : hidden) {
            if (h < 1) throw DataError("mlp: hidden sizes must be positive");
            net.sizes.push_back(static_cast<std::size_t>(h));
        }
        net.sizes.push_back(1);
        for (std::size_t l = 0; l + 1 < net.sizes.size(); ++l) {
            net.w.emplace_back(net.sizes[l + 1] * net.sizes[l], 0.0);
            net.b.emplace_back(net.sizes[l + 1], 0.0);
        }
        return net;
    }

    std::size_t layer_count() const { return w.size(); }

    // Output probability; optionally collects the post-sigmoid activations of
    // every layer (acts[l] is the output of layer l).
    double forward(const Row& x, std::vector<std::vector<double>>* acts = nullptr) const {
        if (x.size() != sizes[0]) throw DataError("mlp: row width mismatch");
        if (acts) acts->assign(layer_count(), {});
        const double* in = x.data();
        std::size_t in_width = sizes[0];
        std::vector<double> cur, next;
        for (std::size_t l = 0; l < layer_count(); ++l) {
            std::size_t out_width = sizes[l + 1];
            next.assign(out_width, 0.0);
            for (std::size_t j = 0; j < out_width; ++j) {
                double z = b[l][j];
                const double* wrow = w[l].data() + j * in_width;
                for (std::size_t i = 0; i < in_width; ++i) {
                    if (in[i] == 0) continue; // one-hot inputs are mostly zero
                    z += wrow[i] * in[i];
                }
                next[j] = sigmoid(z);
            }
            if (acts) (*acts)[l] = next;
            cur.swap(next);
            in = cur.data();
            in_width = out_width;
        }
        return cur[0];
    }
};

// Mean binary cross-entropy; probabilities clamped away from {0,1} for the log.
inline double mlp_loss(const MlpNet& net, const Rows& x, const Labels& y) {
    double total = 0;
    for (std::size_t r = 0; r < x.size(); ++r) {
        double p = net.forward(x[r]);
        p = std::min(1.0 - 1e-12, std::max(1e-12, p));
        total += (y[r] == 1) ? -std::log(p) : -std::log(1.0 - p);
    }
    return total / static_cast<double>(x.size());
}

// Backprop gradient of mlp_loss, same shape as the net.
inline MlpNet mlp_gradient(const MlpNet& net, const Rows& x, const Labels& y) {
    MlpNet g;
    g.sizes = net.sizes;
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        g.w.emplace_back(net.w[l].size(), 0.0);
        g.b.emplace_back(net.b[l].size(), 0.0);
    }

    double inv_n = 1.0 / static_cast<double>(x.size());
    std::vector<std::vector<double>> acts;
    std::vector<double> delta, prev_delta;
    for (std::size_t r = 0; r < x.size(); ++r) {
        double p = net.forward(x[r], &acts);
        delta.assign(1, (p - (y[r] == 1 ? 1.0 : 0.0)) * inv_n); // dL/dz at output
        for (std::size_t l = net.layer_count(); l-- > 0;) {
            const double* a_in = (l == 0) ? x[r].data() : acts[l - 1].data();
            std::size_t in_width = net.sizes[l];
            for (std::size_t j = 0; j < net.sizes[l + 1]; ++j) {
                g.b[l][j] += delta[j];
                double* grow = g.w[l].data() + j * in_width;
                for (std::size_t i = 0; i < in_width; ++i) {
                    if (a_in[i] == 0) continue;
                    grow[i] += delta[j] * a_in[i];
                }
            }
            if (l == 0) break;
            prev_delta.assign(in_width, 0.0);
            for (std::size_t j = 0; j < net.sizes[l + 1]; ++j) {
                const double* wrow = net.w[l].data() + j * in_width;
                for (std::size_t i = 0; i < in_width; ++i)
                    prev_delta[i] += wrow[i] * delta[j];
            }
            for (std::size_t i = 0; i < in_width; ++i)
                prev_delta[i] *= a_in[i] * (1.0 - a_in[i]);
            delta.swap(prev_delta);
        }
    }
    return g;
}

class MlpModel : public Model {
public:
    explicit MlpModel(MlpNet net) : net_(std::move(net)) {}

    Family family() const override { return Family::mlp; }
    std::size_t width() const override { return net_.sizes.front(); }
    const MlpNet& net() const { return net_; }
    double probability(const Row& row) const { return net_.forward(row); }

    nlohmann::json params_json() const override {
        return {{"sizes", net_.sizes}, {"w", net_.w}, {"b", net_.b}};
    }

protected:
    int predict_unchecked(const Row& row) const override {
        return net_.forward(row) >= 0.5 ? 1 : 0;
    }

private:
    MlpNet net_;
};

inline std::unique_ptr<MlpModel> train_mlp(const Rows& x, const Labels& y,
                                           const std::vector<int>& hidden,
                                           double learning_rate, int epochs,
                                           std::uint64_t seed) {
    detail::require_nonempty(x, y);
    if (hidden.empty()) throw DataError("mlp: at least one hidden layer required");
    if (learning_rate <= 0) throw DataError("mlp: learning rate must be positive");
    if (epochs < 0) throw DataError("mlp: epochs must be non-negative");

    MlpNet net = MlpNet::zeros(x.front().size(), hidden);
    Rng rng(seed);
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        for (auto& v : net.w[l]) v = rng.uniform(-0.5, 0.5);
        for (auto& v : net.b[l]) v = rng.uniform(-0.5, 0.5);
    }

    for (int e = 0; e < epochs; ++e) {
        MlpNet g = mlp_gradient(net, x, y);
        for (std::size_t l = 0; l < net.layer_count(); ++l) {
            for (std::size_t i = 0; i < net.w[l].size(); ++i)
                net.w[l][i] -= learning_rate * g.w[l][i];
            for (std::size_t i = 0; i < net.b[l].size(); ++i)
                net.b[l][i] -= learning_rate * g.b[l][i];
        }
    }
    return std::make_unique<MlpModel>(std::move(net));
}

} // namespace setd
