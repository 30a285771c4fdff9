// Marginal CF propagation through affine and ReLU layers.
//
// Affine layers use the affine rule plus the independence product, so each
// output marginal is the product of its input factors at scaled arguments.
// This is exact at the input layer; deeper in the network the hidden neurons
// share ancestors and the product is an approximation whose error the oracle
// module measures. ReLU layers apply the corollary rule
//   phi_out(t) = (1 + phi_in(t))/2 + (i/2) (H(phi_in)(t) - H(phi_in)(0)).
#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cf_core.hpp"
#include "hilbert.hpp"
#include "network.hpp"
#include "parallel.hpp"

namespace cfv {

// Raised when a propagated marginal turns non-finite; the caller maps this to
// the numeric-failure exit path.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LayerMarginals {
    MarginalSet pre;   // after the affine map
    MarginalSet post;  // after ReLU; empty for the final layer
};

using LayerTrace = std::vector<LayerMarginals>;

namespace detail {

inline void check_finite(const SampledCF& cf, std::size_t layer, std::size_t component,
                         const char* phase) {
    for (const cplx& v : cf.samples)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericError("non-finite CF sample at layer " + std::to_string(layer) +
                               ", component " + std::to_string(component) + ", phase " + phase);
}

}  // namespace detail

inline SampledCF affine_marginal_row(const AffineLayer& layer, std::size_t row,
                                     const MarginalSet& in, const FrequencyGrid& grid) {
    SampledCF out{grid, std::vector<cplx>(static_cast<std::size_t>(grid.n_points))};
    const int c = grid.center();
    const double b = layer.bias[row];
    for (int j = c; j < grid.n_points; ++j) {
        const double t = grid.node(j);
        cplx v = std::exp(cplx(0.0, b * t));
        for (std::size_t i = 0; i < layer.cols; ++i) {
            const double wji = layer.w(row, i);
            if (wji != 0.0) v *= evaluate_cf(in[i], wji * t);
        }
        out.samples[j] = v;
        out.samples[2 * c - j] = std::conj(v);
    }
    return out;
}

inline MarginalSet affine_marginals(const AffineLayer& layer, const MarginalSet& in,
                                    const FrequencyGrid& grid, unsigned n_threads = 1) {
    if (in.size() != layer.cols)
        throw std::invalid_argument("affine_marginals: layer expects width " +
                                    std::to_string(layer.cols) + ", got " +
                                    std::to_string(in.size()));
    MarginalSet out(layer.rows);
    parallel_for(layer.rows, n_threads, [&](std::size_t row) {
        out[row] = affine_marginal_row(layer, row, in, grid);
    });
    return out;
}

inline SampledCF relu_marginal(const SampledCF& phi_in, const HilbertParams& params) {
    const FrequencyGrid& grid = phi_in.grid;
    const std::vector<cplx> f_nodes = sample_at_sinc_nodes(phi_in, params);

    // H(phi)(0), reused across all nodes; only odd sinc nodes contribute there
    const cplx h0 = hilbert_sinc_from_nodes(f_nodes, 0.0, params);

    SampledCF out{grid, std::vector<cplx>(static_cast<std::size_t>(grid.n_points))};
    const int c = grid.center();
    for (int j = c; j < grid.n_points; ++j) {
        const double t = grid.node(j);
        const cplx ht = hilbert_sinc_from_nodes(f_nodes, t, params);
        const cplx v = 0.5 * (1.0 + phi_in.samples[j]) + cplx(0.0, 0.5) * (ht - h0);
        out.samples[j] = v;
        out.samples[2 * c - j] = std::conj(v);
    }
    return out;
}

struct PropagationResult {
    MarginalSet output;
    LayerTrace trace;  // filled only when requested
};

inline PropagationResult propagate_network(const Network& net, const MarginalSet& inputs,
                                           const FrequencyGrid& grid, const HilbertParams& params,
                                           bool want_trace = false, unsigned n_threads = 1) {
    net.validate();
    if (inputs.size() != net.input_width())
        throw std::invalid_argument("propagate_network: input width " +
                                    std::to_string(inputs.size()) + ", network expects " +
                                    std::to_string(net.input_width()));
    PropagationResult result;
    MarginalSet cur = inputs;
    for (std::size_t k = 0; k < net.layers.size(); ++k) {
        MarginalSet pre = affine_marginals(net.layers[k], cur, grid, n_threads);
        for (std::size_t j = 0; j < pre.size(); ++j)
            detail::check_finite(std::get<SampledCF>(pre[j]), k, j, "pre");

        const bool last = k + 1 == net.layers.size();
        MarginalSet post;
        if (!last) {
            post.resize(pre.size());
            parallel_for(pre.size(), n_threads, [&](std::size_t j) {
                post[j] = relu_marginal(std::get<SampledCF>(pre[j]), params);
            });
            for (std::size_t j = 0; j < post.size(); ++j)
                detail::check_finite(std::get<SampledCF>(post[j]), k, j, "post");
        }
        if (want_trace) result.trace.push_back(LayerMarginals{pre, post});
        cur = last ? std::move(pre) : std::move(post);
    }
    result.output = std::move(cur);
    return result;
}

// Scalar form of the identity behind the ReLU rule,
//   2 e^{i t max(0,x)} = 1 + e^{itx} + e^{itx} sgn(x) - sgn(x),  sgn(0) := 0;
// returns the residual magnitude, which is zero up to rounding.
inline double relu_identity_check(double x, double t) {
    const double sgn = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    const cplx lhs = 2.0 * std::exp(cplx(0.0, t * std::max(0.0, x)));
    const cplx rhs = 1.0 + std::exp(cplx(0.0, t * x)) * (1.0 + sgn) - sgn;
    return std::abs(lhs - rhs);
}

}  // namespace cfv
