// Characteristic functions of scalar random variables: closed-form catalog,
// grid-sampled representation with interpolation, and moment extraction.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cfv {

using cplx = std::complex<double>;

// Uniform symmetric frequency grid over [-t_max, t_max]. The node count is kept
// odd so that t = 0 is a node; node(j) is computed as (j - center)*spacing, which
// makes the grid exactly symmetric and node(center) exactly zero.
struct FrequencyGrid {
    double t_max = 50.0;
    int n_points = 10001;

    static FrequencyGrid make(double t_max, int n_points) {
        if (!(t_max > 0.0) || !std::isfinite(t_max))
            throw std::invalid_argument("FrequencyGrid: t_max must be positive and finite");
        if (n_points < 3)
            throw std::invalid_argument("FrequencyGrid: need at least 3 grid points");
        if (n_points % 2 == 0) ++n_points;  // round up so 0 is a node
        return FrequencyGrid{t_max, n_points};
    }

    int center() const { return (n_points - 1) / 2; }
    double spacing() const { return 2.0 * t_max / (n_points - 1); }
    double node(int j) const { return (j - center()) * spacing(); }
};

enum class DistKind { cauchy, gaussian, uniform, degenerate };

inline const char* dist_kind_name(DistKind k) {
    switch (k) {
        case DistKind::cauchy: return "cauchy";
        case DistKind::gaussian: return "gaussian";
        case DistKind::uniform: return "uniform";
        case DistKind::degenerate: return "degenerate";
    }
    return "?";
}

// Closed-form CF of a catalog distribution. Parameter meaning by kind:
//   cauchy:     p1 = location, p2 = scale
//   gaussian:   p1 = mean,     p2 = variance
//   uniform:    p1 = lower,    p2 = upper
//   degenerate: p1 = point,    p2 unused
struct AnalyticCF {
    DistKind kind = DistKind::degenerate;
    double p1 = 0.0;
    double p2 = 0.0;

    cplx operator()(double t) const {
        switch (kind) {
            case DistKind::cauchy:
                return std::exp(cplx(-p2 * std::abs(t), p1 * t));
            case DistKind::gaussian:
                return std::exp(cplx(-0.5 * p2 * t * t, p1 * t));
            case DistKind::uniform: {
                // e^{it(a+b)/2} * sinc(t(b-a)/2); this form keeps |phi| <= 1 exactly
                const double half_width = 0.5 * (p2 - p1);
                const double mid = 0.5 * (p1 + p2);
                const double u = t * half_width;
                const double s = std::abs(u) < 1e-8 ? 1.0 - u * u / 6.0 : std::sin(u) / u;
                return s * std::exp(cplx(0.0, mid * t));
            }
            case DistKind::degenerate:
                return std::exp(cplx(0.0, p1 * t));
        }
        return cplx(1.0, 0.0);
    }
};

inline AnalyticCF make_analytic_cf(DistKind kind, double p1, double p2) {
    switch (kind) {
        case DistKind::cauchy:
            if (!(p2 > 0.0)) throw std::invalid_argument("cauchy: scale must be positive");
            break;
        case DistKind::gaussian:
            if (!(p2 > 0.0)) throw std::invalid_argument("gaussian: variance must be positive");
            break;
        case DistKind::uniform:
            if (!(p1 < p2)) throw std::invalid_argument("uniform: need lower < upper");
            break;
        case DistKind::degenerate:
            break;
    }
    if (!std::isfinite(p1) || !std::isfinite(p2))
        throw std::invalid_argument("distribution parameters must be finite");
    return AnalyticCF{kind, p1, p2};
}

inline AnalyticCF cauchy_cf(double location, double scale) {
    return make_analytic_cf(DistKind::cauchy, location, scale);
}
inline AnalyticCF gaussian_cf(double mean, double variance) {
    return make_analytic_cf(DistKind::gaussian, mean, variance);
}
inline AnalyticCF uniform_cf(double lower, double upper) {
    return make_analytic_cf(DistKind::uniform, lower, upper);
}
inline AnalyticCF degenerate_cf(double point) {
    return make_analytic_cf(DistKind::degenerate, point, 0.0);
}

// CF known only through complex samples on a frequency grid. Evaluation is
// linear interpolation of real and imaginary parts; beyond the cutoff the
// boundary sample is returned unchanged (a post-ReLU CF tends to the atom mass
// P(x <= 0) as |t| grows, so extrapolating with zero would drop that mass).
struct SampledCF {
    FrequencyGrid grid;
    std::vector<cplx> samples;

    cplx operator()(double t) const {
        const int n = grid.n_points;
        const double lo = grid.node(0), hi = grid.node(n - 1);
        if (t <= lo) return samples.front();
        if (t >= hi) return samples.back();
        const double u = (t - lo) / grid.spacing();
        int j = static_cast<int>(u);
        if (j > n - 2) j = n - 2;
        const double w = u - j;
        return (1.0 - w) * samples[j] + w * samples[j + 1];
    }
};

using MarginalCF = std::variant<AnalyticCF, SampledCF>;
using MarginalSet = std::vector<MarginalCF>;

inline cplx evaluate_cf(const MarginalCF& cf, double t) {
    return std::visit([t](const auto& c) { return c(t); }, cf);
}

// Evaluate on the non-negative half and mirror by conjugation, so Hermitian
// symmetry holds exactly in the stored samples.
template <class CF>
SampledCF sample_on_grid(const CF& cf, const FrequencyGrid& grid) {
    SampledCF out{grid, std::vector<cplx>(static_cast<std::size_t>(grid.n_points))};
    const int c = grid.center();
    for (int j = c; j < grid.n_points; ++j) {
        const cplx v = cf(grid.node(j));
        out.samples[j] = v;
        out.samples[2 * c - j] = std::conj(v);
    }
    return out;
}

inline SampledCF sample_on_grid(const MarginalCF& cf, const FrequencyGrid& grid) {
    return std::visit([&grid](const auto& c) { return sample_on_grid(c, grid); }, cf);
}

struct MomentEstimate {
    double value = 0.0;
    bool suspect = false;  // raised when the estimate does not behave like a derivative
};

namespace detail {

template <class CF>
double stencil_d1(const CF& f, double s) {
    // 5-point central first derivative of Im(phi) at 0; phi' (0) is purely
    // imaginary for the real part by Hermitian symmetry, so Im carries E[x]
    const double f1 = std::imag(f(s)), f2 = std::imag(f(2 * s));
    return (8.0 * f1 - f2) / (6.0 * s);  // odd part doubles: (-f(-s) = f(s) on Im)
}

template <class CF>
double stencil_d2(const CF& f, double s) {
    const double f0 = std::real(f(0.0));
    const double f1 = std::real(f(s)), f2 = std::real(f(2 * s));
    return (-2.0 * f2 + 32.0 * f1 - 30.0 * f0) / (12.0 * s * s);
}

}  // namespace detail

// Moments via CF derivatives at zero, m_k = i^{-k} phi^(k)(0),
// using 5-point central stencils. Heavy-tailed inputs have no derivative at 0;
// that shows up either as instability of the estimate under stencil halving or
// as a diverging curvature estimate (the symmetric-Cauchy case, where the first
// moment estimate is identically zero at every width but phi''(0) blows up).
template <class CF>
MomentEstimate moment_from_cf(const CF& cf, int k, double spacing) {
    if (k < 1 || k > 2) throw std::invalid_argument("moment_from_cf: order must be 1 or 2");
    if (!(spacing > 0.0)) throw std::invalid_argument("moment_from_cf: spacing must be positive");
    const double s = spacing, s2 = 0.5 * spacing;

    const double d2_full = detail::stencil_d2(cf, s);
    const double d2_half = detail::stencil_d2(cf, s2);
    const bool curvature_diverges = std::abs(d2_half) > 1.8 * std::abs(d2_full) + 1e-6;

    double est_full, est_half;
    if (k == 1) {
        est_full = detail::stencil_d1(cf, s);
        est_half = detail::stencil_d1(cf, s2);
    } else {
        est_full = -d2_full;
        est_half = -d2_half;
    }
    const bool unstable =
        std::abs(est_half - est_full) > 0.10 * std::max(std::abs(est_half), 1e-9);

    return MomentEstimate{est_half, unstable || curvature_diverges};
}

inline MomentEstimate moment_from_cf(const SampledCF& cf, int k) {
    // full stencil at twice the grid spacing so the halved stencil still lands
    // on nodes; interpolated midpoints would mimic curvature divergence
    return moment_from_cf(cf, k, 2.0 * cf.grid.spacing());
}

inline MomentEstimate moment_from_cf(const MarginalCF& cf, int k, double spacing) {
    return std::visit([k, spacing](const auto& c) { return moment_from_cf(c, k, spacing); }, cf);
}

}  // namespace cfv
