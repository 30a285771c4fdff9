// Feedforward ReLU network structure and the exact forward pass.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfv {

struct AffineLayer {
    std::size_t rows = 0, cols = 0;
    std::vector<double> weights;  // row-major, rows x cols
    std::vector<double> bias;     // length rows

    double w(std::size_t r, std::size_t c) const { return weights[r * cols + c]; }

    void validate(std::size_t layer_index) const {
        if (rows == 0 || cols == 0)
            throw std::invalid_argument("layer " + std::to_string(layer_index) + ": empty weight matrix");
        if (weights.size() != rows * cols)
            throw std::invalid_argument("layer " + std::to_string(layer_index) + ": weight size mismatch");
        if (bias.size() != rows)
            throw std::invalid_argument("layer " + std::to_string(layer_index) +
                                        ": bias length does not match weight rows");
        for (double v : weights)
            if (!std::isfinite(v))
                throw std::invalid_argument("layer " + std::to_string(layer_index) + ": non-finite weight");
        for (double v : bias)
            if (!std::isfinite(v))
                throw std::invalid_argument("layer " + std::to_string(layer_index) + ": non-finite bias");
    }
};

// Affine layers with ReLU between all of them; the final layer stays affine.
struct Network {
    std::vector<AffineLayer> layers;

    std::size_t input_width() const { return layers.front().cols; }
    std::size_t output_width() const { return layers.back().rows; }

    void validate() const {
        if (layers.empty()) throw std::invalid_argument("network has no layers");
        for (std::size_t k = 0; k < layers.size(); ++k) {
            layers[k].validate(k);
            if (k > 0 && layers[k].cols != layers[k - 1].rows)
                throw std::invalid_argument("layer " + std::to_string(k) + ": expects width " +
                                            std::to_string(layers[k].cols) + " but layer " +
                                            std::to_string(k - 1) + " outputs " +
                                            std::to_string(layers[k - 1].rows));
        }
    }
};

inline std::vector<double> forward(const Network& net, const std::vector<double>& x) {
    if (x.size() != net.input_width())
        throw std::invalid_argument("forward: input width " + std::to_string(x.size()) +
                                    ", network expects " + std::to_string(net.input_width()));
    std::vector<double> cur = x, next;
    for (std::size_t k = 0; k < net.layers.size(); ++k) {
        const AffineLayer& L = net.layers[k];
        next.assign(L.rows, 0.0);
        for (std::size_t r = 0; r < L.rows; ++r) {
            double acc = L.bias[r];
            for (std::size_t c = 0; c < L.cols; ++c) acc += L.w(r, c) * cur[c];
            next[r] = acc;
        }
        if (k + 1 < net.layers.size())
            for (double& v : next) v = v > 0.0 ? v : 0.0;
        cur.swap(next);
    }
    return cur;
}

}  // namespace cfv
