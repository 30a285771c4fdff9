// Monte-Carlo ground truth: seedable platform-independent sampling, batch
// forward passes, and empirical CDFs.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cf_core.hpp"
#include "network.hpp"
#include "parallel.hpp"

namespace cfv {

// SplitMix64: tiny, seedable, identical across platforms. The standard-library
// engines would also do, but their distributions are not bit-stable across
// implementations and Table-1-style ensembles must reproduce exactly in CI.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // open interval (0,1): 53-bit mantissa with the low bit forced on, so the
    // Cauchy tangent map and Box-Muller log never see an endpoint
    double uniform01() { return static_cast<double>((next() >> 11) | 1ull) * 0x1.0p-53; }
};

inline double draw_sample(const AnalyticCF& dist, SplitMix64& rng) {
    switch (dist.kind) {
        case DistKind::cauchy:
            return dist.p1 + dist.p2 * std::tan(std::numbers::pi * (rng.uniform01() - 0.5));
        case DistKind::gaussian: {
            const double u1 = rng.uniform01(), u2 = rng.uniform01();
            const double z = std::sqrt(-2.0 * std::log(u1)) *
                             std::cos(2.0 * std::numbers::pi * u2);
            return dist.p1 + std::sqrt(dist.p2) * z;
        }
        case DistKind::uniform:
            return dist.p1 + (dist.p2 - dist.p1) * rng.uniform01();
        case DistKind::degenerate:
            return dist.p1;
    }
    throw std::invalid_argument("draw_sample: unknown distribution kind");
}

struct SampleBatch {
    std::size_t n = 0, width = 0;
    std::uint64_t seed = 0;
    std::vector<double> data;  // row-major, n x width

    const double* row(std::size_t i) const { return data.data() + i * width; }
};

inline SampleBatch sample_inputs(const std::vector<AnalyticCF>& dists, std::size_t n,
                                 std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("sample_inputs: need at least one sample");
    SampleBatch batch{n, dists.size(), seed, {}};
    batch.data.resize(n * dists.size());
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < dists.size(); ++j)
            batch.data[i * dists.size() + j] = draw_sample(dists[j], rng);
    return batch;
}

// Forward-propagates every sample row; parallel over disjoint sample blocks,
// so the output is independent of the thread count.
inline std::vector<double> forward_batch_scalar(const Network& net, const SampleBatch& batch,
                                                const std::vector<double>& c,
                                                unsigned n_threads = 1) {
    if (c.size() != net.output_width())
        throw std::invalid_argument("forward_batch_scalar: coefficient length mismatch");
    std::vector<double> out(batch.n);
    parallel_for(batch.n, n_threads, [&](std::size_t i) {
        const std::vector<double> x(batch.row(i), batch.row(i) + batch.width);
        const std::vector<double> y = forward(net, x);
        double acc = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) acc += c[j] * y[j];
        out[i] = acc;
    });
    return out;
}

inline double empirical_cdf(const std::vector<double>& values, double x) {
    if (values.empty()) throw std::invalid_argument("empirical_cdf: empty batch");
    const auto count = std::count_if(values.begin(), values.end(),
                                     [x](double v) { return v <= x; });
    return static_cast<double>(count) / static_cast<double>(values.size());
}

// Sorted copy for repeated queries (CDF curves, empirical quantiles).
struct EmpiricalCdf {
    std::vector<double> sorted;

    explicit EmpiricalCdf(std::vector<double> values) : sorted(std::move(values)) {
        if (sorted.empty()) throw std::invalid_argument("EmpiricalCdf: empty batch");
        std::sort(sorted.begin(), sorted.end());
    }

    double cdf(double x) const {
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
        return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
    }

    double quantile(double q) const {
        if (!(q > 0.0) || !(q < 1.0)) throw std::invalid_argument("quantile: q must be in (0,1)");
        const auto idx = static_cast<std::size_t>(q * static_cast<double>(sorted.size()));
        return sorted[std::min(idx, sorted.size() - 1)];
    }
};

}  // namespace cfv
