// Half-space chance-constraint verification, quantiles of the output law, the
// scenario-optimization baseline, and the CF-vs-Monte-Carlo comparison.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "cf_core.hpp"
#include "hilbert.hpp"
#include "network.hpp"
#include "oracle.hpp"
#include "propagation.hpp"

namespace cfv {

enum class Direction { le, ge };

inline const char* direction_name(Direction d) { return d == Direction::le ? "le" : "ge"; }

// Event {c.y <= d} or {c.y >= d} on the network output y.
struct HalfSpace {
    std::vector<double> c;
    double d = 0.0;
    Direction direction = Direction::ge;

    void validate(std::size_t output_width) const {
        if (c.size() != output_width)
            throw std::invalid_argument("half-space: coefficient length " + std::to_string(c.size()) +
                                        ", network output width " + std::to_string(output_width));
        if (std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; }))
            throw std::invalid_argument("half-space: coefficients are all zero");
        if (!std::isfinite(d))
            throw std::invalid_argument("half-space: offset must be finite");
    }
};

struct VerificationProblem {
    Network net;
    std::vector<AnalyticCF> inputs;
    std::vector<HalfSpace> safety;
    double risk = 0.05;
    FrequencyGrid grid;
    HilbertParams ht;
    std::uint64_t seed = 0;
    int mc_samples = 10000;

    void validate() const {
        net.validate();
        if (inputs.size() != net.input_width())
            throw std::invalid_argument("problem: " + std::to_string(inputs.size()) +
                                        " input distributions for network input width " +
                                        std::to_string(net.input_width()));
        if (safety.empty()) throw std::invalid_argument("problem: no safety constraint");
        for (const HalfSpace& hs : safety) hs.validate(net.output_width());
        if (!(risk > 0.0) || !(risk <= 1.0))
            throw std::invalid_argument("problem: risk must be in (0, 1]");
        if (mc_samples < 1) throw std::invalid_argument("problem: mc_samples must be >= 1");
        ht.validate();
    }
};

struct VerificationResult {
    double p_hat = 0.0;        // estimated P(y in S)
    bool pass = false;         // p_hat >= 1 - risk
    double delta = 0.0;        // p_hat - (1 - risk)
    double raw_cdf_value = 0.0;  // Gil-Pelaez real part before clamping
    double timing_seconds = 0.0;
};

struct PolytopeResult {
    std::vector<VerificationResult> per_halfspace;
    double combined_p_bound = 0.0;  // union bound over constraint failures
    bool pass = false;
    double timing_seconds = 0.0;
};

// CF of the scalar c.y from the output marginals, as the independence product
// phi_y(t) = prod_j phi_j(c_j t).
inline SampledCF output_scalar_cf(const MarginalSet& out, const std::vector<double>& c,
                                  const FrequencyGrid& grid) {
    if (c.size() != out.size())
        throw std::invalid_argument("output_scalar_cf: coefficient length mismatch");
    if (std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; }))
        throw std::invalid_argument("output_scalar_cf: degenerate constraint (c = 0)");
    SampledCF y{grid, std::vector<cplx>(static_cast<std::size_t>(grid.n_points))};
    const int ctr = grid.center();
    for (int j = ctr; j < grid.n_points; ++j) {
        const double t = grid.node(j);
        cplx v(1.0, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i] != 0.0) v *= evaluate_cf(out[i], c[i] * t);
        y.samples[j] = v;
        y.samples[2 * ctr - j] = std::conj(v);
    }
    return y;
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline VerificationResult judge_halfspace(const MarginalSet& out, const HalfSpace& hs,
                                          const VerificationProblem& problem) {
    const SampledCF phi_y = output_scalar_cf(out, hs.c, problem.grid);
    const GilPelaezResult gp = gil_pelaez_cdf(phi_y, hs.d, problem.ht);
    VerificationResult r;
    r.p_hat = hs.direction == Direction::le ? gp.value : 1.0 - gp.value;
    r.raw_cdf_value = gp.raw;
    r.delta = r.p_hat - (1.0 - problem.risk);
    r.pass = r.p_hat >= 1.0 - problem.risk;
    return r;
}

}  // namespace detail

inline PolytopeResult verify_polytope(const VerificationProblem& problem,
                                      unsigned n_threads = 1) {
    problem.validate();
    const auto t0 = std::chrono::steady_clock::now();
    MarginalSet inputs;
    inputs.reserve(problem.inputs.size());
    for (const AnalyticCF& cf : problem.inputs) inputs.emplace_back(cf);
    const MarginalSet out =
        propagate_network(problem.net, inputs, problem.grid, problem.ht, false, n_threads).output;
    const double propagation_seconds = detail::seconds_since(t0);

    PolytopeResult result;
    double failure_sum = 0.0;
    for (const HalfSpace& hs : problem.safety) {
        const auto t1 = std::chrono::steady_clock::now();
        VerificationResult r = detail::judge_halfspace(out, hs, problem);
        r.timing_seconds = propagation_seconds + detail::seconds_since(t1);
        failure_sum += 1.0 - r.p_hat;
        result.per_halfspace.push_back(r);
    }
    result.combined_p_bound = std::max(0.0, 1.0 - failure_sum);
    result.pass = result.combined_p_bound >= 1.0 - problem.risk;
    result.timing_seconds = detail::seconds_since(t0);
    return result;
}

inline VerificationResult verify_halfspace(const VerificationProblem& problem,
                                           unsigned n_threads = 1) {
    if (problem.safety.size() != 1)
        throw std::invalid_argument("verify_halfspace: expects exactly one constraint, got " +
                                    std::to_string(problem.safety.size()));
    return verify_polytope(problem, n_threads).per_halfspace.front();
}

// Solves Phi(r) = p (direction ge, the safety-set reading: P(y > r) = 1 - p)
// or Phi(r) = 1 - p (direction le), to |r| tolerance 1e-3.
//
// The inverted CDF comes from a sum over the nodes mh, which makes it
// 2 pi / h periodic in x; outside the principal window the values are
// aliases, not tail estimates. The search therefore scans |x| <= pi / h.
// Inside the window the wrap-around shows up as a descending ramp near the
// edges (the values there mirror the opposite tail), and it sweeps through
// every level, so a genuine crossing is recognised by its sign of slope:
// only cells where the scanned CDF rises are admitted, and of those the
// steepest is kept, since ringing wobble in flat tail stretches also rises
// but barely. A level with no rising crossing in the window is not
// resolvable at this step size.
inline double quantile(const SampledCF& phi_y, double p, const HilbertParams& params,
                       Direction direction = Direction::ge) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::invalid_argument("quantile: probability must be in (0, 1)");
    const CdfInverter inv(phi_y, params);
    const double target = direction == Direction::ge ? p : 1.0 - p;

    const double window = std::numbers::pi / params.step;
    constexpr int kScanCells = 512;
    std::vector<double> xs(kScanCells + 1), vs(kScanCells + 1);
    for (int i = 0; i <= kScanCells; ++i) {
        xs[i] = -window + 2.0 * window * i / kScanCells;
        vs[i] = inv.cdf(xs[i]).value;
    }

    std::size_t cell = vs.size();
    double best_rise = 0.0;
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
        if ((vs[i] - target) * (vs[i + 1] - target) > 0.0) continue;
        const double rise = vs[i + 1] - vs[i];
        if (rise > best_rise) {
            best_rise = rise;
            cell = i;
        }
    }
    if (cell == vs.size())
        throw NumericError("quantile: level " + std::to_string(target) +
                           " has no rising crossing within |x| <= pi/h; decrease the step");

    double lo = xs[cell], hi = xs[cell + 1];
    for (int it = 0; it < 60 && hi - lo > 1e-3; ++it) {
        const double mid = 0.5 * (lo + hi);
        (inv.cdf(mid).value < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline int scenario_sample_count(double epsilon, double delta) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::invalid_argument("scenario_sample_count: epsilon must be in (0, 1)");
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::invalid_argument("scenario_sample_count: delta must be in (0, 1)");
    return static_cast<int>(std::ceil((2.0 / epsilon) * (std::log(1.0 / delta) + 1.0)));
}

inline double scenario_quantile_from_outputs(const std::vector<double>& outputs) {
    if (outputs.empty()) throw std::invalid_argument("scenario quantile: no samples");
    return *std::min_element(outputs.begin(), outputs.end());
}

// Scenario baseline: r~ = min over N sampled outputs c.y, the largest r such
// that every scenario satisfies y > r.
inline double scenario_quantile(const Network& net, const std::vector<AnalyticCF>& inputs,
                                const std::vector<double>& c, double epsilon, double delta,
                                std::uint64_t seed, unsigned n_threads = 1) {
    const int n = scenario_sample_count(epsilon, delta);
    const SampleBatch batch = sample_inputs(inputs, static_cast<std::size_t>(n), seed);
    return scenario_quantile_from_outputs(forward_batch_scalar(net, batch, c, n_threads));
}

struct ComparisonReport {
    double p_hat_cf = 0.0;
    double p_hat_mc = 0.0;
    double delta_cf = 0.0;
    double delta_mc = 0.0;
    double delta_delta = 0.0;  // delta_cf - delta_mc
    std::size_t n_samples = 0;
    double cf_seconds = 0.0;
    double mc_seconds = 0.0;
};

// Monte-Carlo counterpart of a CF verification run on the same problem;
// ties on the half-space boundary count as satisfying.
inline ComparisonReport compare(const VerificationProblem& problem,
                                const VerificationResult& cf_result, std::size_t n,
                                std::uint64_t seed, unsigned n_threads = 1) {
    problem.validate();
    if (problem.safety.size() != 1)
        throw std::invalid_argument("compare: expects exactly one constraint");
    const HalfSpace& hs = problem.safety.front();

    const auto t0 = std::chrono::steady_clock::now();
    const SampleBatch batch = sample_inputs(problem.inputs, n, seed);
    const std::vector<double> y = forward_batch_scalar(problem.net, batch, hs.c, n_threads);
    std::size_t hits = 0;
    for (double v : y)
        if (hs.direction == Direction::le ? v <= hs.d : v >= hs.d) ++hits;

    ComparisonReport rep;
    rep.p_hat_mc = static_cast<double>(hits) / static_cast<double>(n);
    rep.mc_seconds = detail::seconds_since(t0);
    rep.p_hat_cf = cf_result.p_hat;
    rep.delta_cf = cf_result.delta;
    rep.delta_mc = rep.p_hat_mc - (1.0 - problem.risk);
    rep.delta_delta = rep.delta_cf - rep.delta_mc;
    rep.n_samples = n;
    rep.cf_seconds = cf_result.timing_seconds;
    return rep;
}

}  // namespace cfv
