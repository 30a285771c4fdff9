// JSON serialization of networks and verification problems, and the seeded
// random-network generator used by the ensemble experiments.
//
// Network file format (row-major weights, one object per affine layer):
//   {"layers": [{"weights": [[w00, w01], ...], "bias": [b0, ...]}, ...]}
//
// Problem config:
//   {
//     "network":    "relative/or/absolute/path.json"  (or an inline network object),
//     "inputs":     [{"kind": "cauchy", "location": 1.0, "scale": 1.0}, ...],
//     "safety":     {"c": [1.0], "d": 0.0, "direction": "ge"}  (or an array of these),
//     "risk":       0.05,
//     "numerics":   {"t_max": 50.0, "n_grid": 10001, "ht_step": 0.05, "ht_terms": 5000},
//     "seed":       0,
//     "mc_samples": 10000
//   }
// Distribution records: cauchy{location,scale}, gaussian{mean,variance},
// uniform{lower,upper}, degenerate{value}. numerics, seed and mc_samples are
// optional and default to the values shown.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cf_core.hpp"
#include "network.hpp"
#include "oracle.hpp"
#include "verification.hpp"

namespace cfv {

using json = nlohmann::json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline const json& require_field(const json& j, const char* key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) throw ConfigError(where + ": missing field '" + key + "'");
    return *it;
}

inline double as_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + ": expected a number");
    return j.get<double>();
}

inline json parse_file(const std::string& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) throw ConfigError(what + ": cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(what + ": parse error in '" + path + "': " + e.what());
    }
}

}  // namespace detail

inline Network network_from_json(const json& j) {
    const json& layers = detail::require_field(j, "layers", "network");
    if (!layers.is_array() || layers.empty())
        throw ConfigError("network: 'layers' must be a non-empty array");
    Network net;
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const std::string where = "network layer " + std::to_string(k);
        const json& weights = detail::require_field(layers[k], "weights", where);
        const json& bias = detail::require_field(layers[k], "bias", where);
        if (!weights.is_array() || weights.empty() || !weights[0].is_array())
            throw ConfigError(where + ": 'weights' must be an array of rows");
        AffineLayer layer;
        layer.rows = weights.size();
        layer.cols = weights[0].size();
        for (const json& row : weights) {
            if (!row.is_array() || row.size() != layer.cols)
                throw ConfigError(where + ": ragged weight rows");
            for (const json& v : row) layer.weights.push_back(detail::as_number(v, where));
        }
        if (!bias.is_array()) throw ConfigError(where + ": 'bias' must be an array");
        for (const json& v : bias) layer.bias.push_back(detail::as_number(v, where));
        net.layers.push_back(std::move(layer));
    }
    try {
        net.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("network: ") + e.what());
    }
    return net;
}

inline json network_to_json(const Network& net) {
    json layers = json::array();
    for (const AffineLayer& L : net.layers) {
        json rows = json::array();
        for (std::size_t r = 0; r < L.rows; ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < L.cols; ++c) row.push_back(L.w(r, c));
            rows.push_back(std::move(row));
        }
        layers.push_back(json{{"weights", std::move(rows)}, {"bias", L.bias}});
    }
    return json{{"layers", std::move(layers)}};
}

inline Network load_network(const std::string& path) {
    return network_from_json(detail::parse_file(path, "network"));
}

inline void save_network(const Network& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("network: cannot write '" + path + "'");
    out << network_to_json(net).dump(2) << "\n";
}

inline Network random_network(const std::vector<std::size_t>& widths, std::uint64_t seed) {
    if (widths.size() < 2)
        throw std::invalid_argument("random_network: need at least input and output widths");
    SplitMix64 rng(seed);
    auto u11 = [&rng] { return 2.0 * rng.uniform01() - 1.0; };
    Network net;
    for (std::size_t k = 0; k + 1 < widths.size(); ++k) {
        AffineLayer layer;
        layer.rows = widths[k + 1];
        layer.cols = widths[k];
        layer.weights.resize(layer.rows * layer.cols);
        layer.bias.resize(layer.rows);
        for (double& v : layer.weights) v = u11();
        for (double& v : layer.bias) v = u11();
        net.layers.push_back(std::move(layer));
    }
    return net;
}

inline AnalyticCF dist_from_json(const json& j, const std::string& where) {
    const std::string kind = detail::require_field(j, "kind", where).get<std::string>();
    try {
        if (kind == "cauchy")
            return cauchy_cf(detail::as_number(detail::require_field(j, "location", where), where),
                             detail::as_number(detail::require_field(j, "scale", where), where));
        if (kind == "gaussian")
            return gaussian_cf(detail::as_number(detail::require_field(j, "mean", where), where),
                               detail::as_number(detail::require_field(j, "variance", where), where));
        if (kind == "uniform")
            return uniform_cf(detail::as_number(detail::require_field(j, "lower", where), where),
                              detail::as_number(detail::require_field(j, "upper", where), where));
        if (kind == "degenerate")
            return degenerate_cf(detail::as_number(detail::require_field(j, "value", where), where));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + ": " + e.what());
    }
    throw ConfigError(where + ": unknown distribution kind '" + kind + "'");
}

inline json dist_to_json(const AnalyticCF& d) {
    switch (d.kind) {
        case DistKind::cauchy: return {{"kind", "cauchy"}, {"location", d.p1}, {"scale", d.p2}};
        case DistKind::gaussian: return {{"kind", "gaussian"}, {"mean", d.p1}, {"variance", d.p2}};
        case DistKind::uniform: return {{"kind", "uniform"}, {"lower", d.p1}, {"upper", d.p2}};
        case DistKind::degenerate: return {{"kind", "degenerate"}, {"value", d.p1}};
    }
    throw std::logic_error("dist_to_json: unhandled kind");
}

inline HalfSpace halfspace_from_json(const json& j, const std::string& where) {
    HalfSpace hs;
    const json& c = detail::require_field(j, "c", where);
    if (!c.is_array() || c.empty()) throw ConfigError(where + ": 'c' must be a non-empty array");
    for (const json& v : c) hs.c.push_back(detail::as_number(v, where));
    hs.d = detail::as_number(detail::require_field(j, "d", where), where);
    const std::string dir = j.value("direction", "ge");
    if (dir == "le")
        hs.direction = Direction::le;
    else if (dir == "ge")
        hs.direction = Direction::ge;
    else
        throw ConfigError(where + ": direction must be 'le' or 'ge', got '" + dir + "'");
    return hs;
}

inline json halfspace_to_json(const HalfSpace& hs) {
    return {{"c", hs.c}, {"d", hs.d}, {"direction", direction_name(hs.direction)}};
}

struct ProblemConfig {
    Network net;
    std::vector<AnalyticCF> inputs;
    std::vector<HalfSpace> safety;
    double risk = 0.05;
    double t_max = 50.0;
    int n_grid = 10001;
    double ht_step = 0.05;
    int ht_terms = 5000;
    std::uint64_t seed = 0;
    int mc_samples = 10000;

    FrequencyGrid grid() const { return FrequencyGrid::make(t_max, n_grid); }
    HilbertParams hilbert() const { return HilbertParams{ht_step, ht_terms}; }

    VerificationProblem problem() const {
        VerificationProblem p{net, inputs, safety, risk, grid(), hilbert(), seed, mc_samples};
        try {
            p.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        return p;
    }
};

inline ProblemConfig problem_config_from_json(const json& j, const std::string& base_dir) {
    ProblemConfig cfg;
    const json& net = detail::require_field(j, "network", "config");
    if (net.is_string()) {
        std::filesystem::path p(net.get<std::string>());
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        cfg.net = load_network(p.string());
    } else {
        cfg.net = network_from_json(net);
    }

    const json& inputs = detail::require_field(j, "inputs", "config");
    if (!inputs.is_array() || inputs.empty())
        throw ConfigError("config: 'inputs' must be a non-empty array");
    for (std::size_t i = 0; i < inputs.size(); ++i)
        cfg.inputs.push_back(dist_from_json(inputs[i], "input " + std::to_string(i)));

    const json& safety = detail::require_field(j, "safety", "config");
    if (safety.is_array()) {
        for (std::size_t i = 0; i < safety.size(); ++i)
            cfg.safety.push_back(halfspace_from_json(safety[i], "safety " + std::to_string(i)));
    } else {
        cfg.safety.push_back(halfspace_from_json(safety, "safety"));
    }

    cfg.risk = detail::as_number(detail::require_field(j, "risk", "config"), "config risk");
    if (!(cfg.risk > 0.0) || !(cfg.risk <= 1.0))
        throw ConfigError("config: risk must be in (0, 1]");

    if (const auto it = j.find("numerics"); it != j.end()) {
        const json& n = *it;
        cfg.t_max = n.value("t_max", cfg.t_max);
        cfg.n_grid = n.value("n_grid", cfg.n_grid);
        cfg.ht_step = n.value("ht_step", cfg.ht_step);
        cfg.ht_terms = n.value("ht_terms", cfg.ht_terms);
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.mc_samples = j.value("mc_samples", cfg.mc_samples);
    if (cfg.mc_samples < 1) throw ConfigError("config: mc_samples must be >= 1");
    return cfg;
}

inline ProblemConfig load_problem(const std::string& path) {
    const json j = detail::parse_file(path, "config");
    const std::string base = std::filesystem::path(path).parent_path().string();
    ProblemConfig cfg = problem_config_from_json(j, base.empty() ? "." : base);
    cfg.problem();  // full cross-validation up front
    return cfg;
}

// Normalized echo of every parameter that influenced a run; the network is
// summarized by its widths to keep result records small.
inline json config_echo(const ProblemConfig& cfg) {
    std::vector<std::size_t> widths{cfg.net.input_width()};
    for (const AffineLayer& L : cfg.net.layers) widths.push_back(L.rows);
    json inputs = json::array();
    for (const AnalyticCF& d : cfg.inputs) inputs.push_back(dist_to_json(d));
    json safety = json::array();
    for (const HalfSpace& hs : cfg.safety) safety.push_back(halfspace_to_json(hs));
    return json{{"network_widths", widths},
                {"inputs", inputs},
                {"safety", safety},
                {"risk", cfg.risk},
                {"numerics",
                 {{"t_max", cfg.t_max},
                  {"n_grid", cfg.n_grid},
                  {"ht_step", cfg.ht_step},
                  {"ht_terms", cfg.ht_terms}}},
                {"seed", cfg.seed},
                {"mc_samples", cfg.mc_samples}};
}

}  // namespace cfv
