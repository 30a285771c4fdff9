// Numerical Hilbert transform by sinc expansion, the J_a operator built on it,
// and Gil-Pelaez CDF inversion.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cf_core.hpp"

namespace cfv {

// h is the sinc node spacing, M the one-sided term count; the expansion uses
// the 2M+1 absolute nodes m*h, m in [-M, M], shared across evaluation points.
struct HilbertParams {
    double step = 0.05;
    int terms = 5000;

    void validate() const {
        if (!(step > 0.0) || !std::isfinite(step))
            throw std::invalid_argument("HilbertParams: step must be positive and finite");
        if (terms < 1) throw std::invalid_argument("HilbertParams: terms must be >= 1");
    }
};

namespace detail {

// H(f)(t) ~ sum_m f(m h) (1 - cos(pi(t/h - m))) / (pi(t/h - m)).
// Writing d = t/h - m and using cos(pi d) = (-1)^m cos(pi t/h), the weight
// splits by node parity into (1 -/+ c)/(pi d) with c = cos(pi t/h) fixed per t.
// Summing f(m h)/d separately over even and odd m and applying the parity
// factors afterwards is algebraically the same but avoids the catastrophic
// cancellation the direct form suffers when t sits near a node; an exact node
// hit (d == 0) is the removable singularity of the basis function and is
// skipped (its weight tends to 0).
inline cplx sinc_ht_from_nodes(const std::vector<cplx>& f_nodes, int M, double u) {
    cplx even_sum(0.0, 0.0), odd_sum(0.0, 0.0);
    const int n = 2 * M + 1;
    // node m = idx - M; two passes keyed by parity of m, each in ascending m
    const int first_even = (M % 2 == 0) ? 0 : 1;
    for (int idx = first_even; idx < n; idx += 2) {
        const double d = u - (idx - M);
        if (d != 0.0) even_sum += f_nodes[idx] * (1.0 / d);
    }
    for (int idx = 1 - first_even; idx < n; idx += 2) {
        const double d = u - (idx - M);
        if (d != 0.0) odd_sum += f_nodes[idx] * (1.0 / d);
    }
    const double c = std::cos(std::numbers::pi * u);
    return ((1.0 - c) * even_sum + (1.0 + c) * odd_sum) / std::numbers::pi;
}

}  // namespace detail

// Cache of f at the sinc nodes, for transforming one function at many points.
template <class F>
std::vector<cplx> sample_at_sinc_nodes(const F& f, const HilbertParams& params) {
    params.validate();
    std::vector<cplx> nodes(static_cast<std::size_t>(2 * params.terms + 1));
    for (int m = -params.terms; m <= params.terms; ++m)
        nodes[static_cast<std::size_t>(m + params.terms)] = f(m * params.step);
    return nodes;
}

inline cplx hilbert_sinc_from_nodes(const std::vector<cplx>& f_nodes, double t,
                                    const HilbertParams& params) {
    return detail::sinc_ht_from_nodes(f_nodes, params.terms, t / params.step);
}

template <class F>
cplx hilbert_sinc(const F& f, double t, const HilbertParams& params) {
    return hilbert_sinc_from_nodes(sample_at_sinc_nodes(f, params), t, params);
}

// J_a: the Hilbert transform of the modulated function
// tau -> e^{-i a (tau - t)} f(tau), scaled by i/2; J_0 = (i/2) H.
template <class F>
cplx j_a(const F& phi, double a, double t, const HilbertParams& params) {
    auto modulated = [&phi, a, t](double tau) { return std::exp(cplx(0.0, -a * (tau - t))) * phi(tau); };
    return cplx(0.0, 0.5) * hilbert_sinc(modulated, t, params);
}

struct GilPelaezResult {
    double value = 0.0;          // clamped to [0, 1]
    double raw = 0.0;            // real part before clamping
    double imag_residual = 0.0;  // should vanish for Hermitian input; diagnostic
    bool clamped = false;
    bool at_discontinuity = false;  // caller-provided; the value is the jump midpoint there
};

namespace detail {

// Gil-Pelaez via the sinc HT evaluated at t = 0, where only odd nodes carry
// weight: H(g)(0) = sum_{m odd} g(m h) * (-2 / (pi m)).
template <class G>
cplx ht_at_zero_odd(const G& g, const HilbertParams& params) {
    cplx acc(0.0, 0.0);
    const int M = params.terms;
    const int start = (M % 2 == 1) ? -M : -(M - 1);
    for (int m = start; m <= M; m += 2)
        acc += g(m * params.step) * (-2.0 / (std::numbers::pi * m));
    return acc;
}

}  // namespace detail

template <class F>
GilPelaezResult gil_pelaez_cdf(const F& phi, double x, const HilbertParams& params,
                               bool at_discontinuity = false) {
    params.validate();
    auto g = [&phi, x](double t) { return std::exp(cplx(0.0, -t * x)) * phi(t); };
    const cplx raw = 0.5 - cplx(0.0, 0.5) * detail::ht_at_zero_odd(g, params);
    GilPelaezResult r;
    r.raw = raw.real();
    r.imag_residual = raw.imag();
    r.value = std::clamp(r.raw, 0.0, 1.0);
    r.clamped = r.value != r.raw;
    r.at_discontinuity = at_discontinuity;
    return r;
}

// Repeated inversion of one CF (quantile search, CDF curves): phi at the odd
// sinc nodes is cached once and only the modulation phase varies with x.
class CdfInverter {
  public:
    template <class F>
    CdfInverter(const F& phi, const HilbertParams& params) : params_(params) {
        params_.validate();
        const int M = params_.terms;
        const int start = (M % 2 == 1) ? -M : -(M - 1);
        for (int m = start; m <= M; m += 2) {
            node_t_.push_back(m * params_.step);
            weight_.push_back(-2.0 / (std::numbers::pi * m));
            phi_.push_back(phi(m * params_.step));
        }
    }

    GilPelaezResult cdf(double x, bool at_discontinuity = false) const {
        cplx acc(0.0, 0.0);
        for (std::size_t i = 0; i < node_t_.size(); ++i)
            acc += std::exp(cplx(0.0, -node_t_[i] * x)) * phi_[i] * weight_[i];
        const cplx raw = 0.5 - cplx(0.0, 0.5) * acc;
        GilPelaezResult r;
        r.raw = raw.real();
        r.imag_residual = raw.imag();
        r.value = std::clamp(r.raw, 0.0, 1.0);
        r.clamped = r.value != r.raw;
        r.at_discontinuity = at_discontinuity;
        return r;
    }

    const HilbertParams& params() const { return params_; }

  private:
    HilbertParams params_;
    std::vector<double> node_t_;
    std::vector<double> weight_;
    std::vector<cplx> phi_;
};

}  // namespace cfv
