// cfv: chance-constraint verification of ReLU networks from the command line.
//
// Subcommands: verify, propagate, quantile, compare, sweep. Machine-readable
// results go to stdout (JSON) or --out files (CSV); progress and summaries go
// to stderr. Exit codes: 0 pass/success, 1 verification fail, 2 numeric
// failure, 3 configuration error.
#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfv/model_io.hpp"
#include "cfv/oracle.hpp"
#include "cfv/propagation.hpp"
#include "cfv/verification.hpp"

namespace {

using cfv::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitConfig = 3;

struct Overrides {
    std::optional<double> ht_step;
    std::optional<int> ht_terms;
    std::optional<int> grid_points;
    std::optional<double> cutoff;
    std::optional<double> risk;
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
    unsigned threads = cfv::default_thread_count();
};

void add_override_flags(CLI::App& cmd, Overrides& ov) {
    cmd.add_option("--ht-step", ov.ht_step, "Hilbert transform step h");
    cmd.add_option("--ht-terms", ov.ht_terms, "Hilbert transform truncation M");
    cmd.add_option("--grid-points", ov.grid_points, "frequency grid size (rounded up to odd)");
    cmd.add_option("--cutoff", ov.cutoff, "frequency grid cutoff t_max");
    cmd.add_option("--risk", ov.risk, "acceptable violation probability in (0, 1]");
    cmd.add_option("--seed", ov.seed, "RNG seed for sampling paths");
    cmd.add_option("--samples", ov.samples, "Monte-Carlo sample count");
    cmd.add_option("--threads", ov.threads, "worker thread cap");
}

cfv::ProblemConfig load_with_overrides(const std::string& path, const Overrides& ov) {
    cfv::ProblemConfig cfg = cfv::load_problem(path);
    if (ov.ht_step) cfg.ht_step = *ov.ht_step;
    if (ov.ht_terms) cfg.ht_terms = *ov.ht_terms;
    if (ov.grid_points) cfg.n_grid = *ov.grid_points;
    if (ov.cutoff) cfg.t_max = *ov.cutoff;
    if (ov.risk) cfg.risk = *ov.risk;
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.samples) cfg.mc_samples = *ov.samples;
    cfg.problem();  // re-validate with overrides applied
    return cfg;
}

json echo_with_threads(const cfv::ProblemConfig& cfg, const Overrides& ov) {
    json e = cfv::config_echo(cfg);
    e["threads"] = ov.threads;
    return e;
}

std::string fmt_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return ec == std::errc() ? std::string(buf, p) : std::string("nan");
}

std::ofstream open_out(const std::string& path, const char* what) {
    std::ofstream out(path);
    if (!out) throw cfv::ConfigError(std::string(what) + ": cannot write '" + path + "'");
    return out;
}

int cmd_verify(const std::string& config_path, const Overrides& ov) {
    const cfv::ProblemConfig cfg = load_with_overrides(config_path, ov);
    const cfv::VerificationProblem problem = cfg.problem();

    json result;
    bool pass = false;
    if (cfg.safety.size() == 1) {
        const cfv::VerificationResult r = cfv::verify_halfspace(problem, ov.threads);
        pass = r.pass;
        result = json{{"p_hat", r.p_hat},
                      {"verdict", r.pass ? "pass" : "fail"},
                      {"delta", r.delta},
                      {"raw_cdf_value", r.raw_cdf_value},
                      {"timing_seconds", r.timing_seconds}};
    } else {
        const cfv::PolytopeResult r = cfv::verify_polytope(problem, ov.threads);
        pass = r.pass;
        json per = json::array();
        for (const cfv::VerificationResult& h : r.per_halfspace)
            per.push_back(json{{"p_hat", h.p_hat},
                               {"verdict", h.pass ? "pass" : "fail"},
                               {"delta", h.delta},
                               {"raw_cdf_value", h.raw_cdf_value},
                               {"timing_seconds", h.timing_seconds}});
        result = json{{"p_hat", r.combined_p_bound},
                      {"verdict", r.pass ? "pass" : "fail"},
                      {"delta", r.combined_p_bound - (1.0 - cfg.risk)},
                      {"raw_cdf_value", nullptr},
                      {"timing_seconds", r.timing_seconds},
                      {"per_halfspace", std::move(per)}};
    }
    result["params_echo"] = echo_with_threads(cfg, ov);
    std::cout << result.dump(2) << "\n";
    std::cerr << "verify: " << (pass ? "pass" : "fail") << " (p_hat=" << result["p_hat"]
              << ", required " << 1.0 - cfg.risk << ")\n";
    return pass ? kExitPass : kExitFail;
}

int cmd_propagate(const std::string& config_path, const Overrides& ov,
                  const std::string& trace_path, double x_min, double x_max, int x_points,
                  const std::vector<std::size_t>& components) {
    const cfv::ProblemConfig cfg = load_with_overrides(config_path, ov);
    if (x_points < 2 || !(x_max > x_min))
        throw cfv::ConfigError("propagate: need x-max > x-min and at least 2 x-points");

    cfv::MarginalSet inputs(cfg.inputs.begin(), cfg.inputs.end());
    const auto t0 = std::chrono::steady_clock::now();
    const cfv::PropagationResult prop =
        cfv::propagate_network(cfg.net, inputs, cfg.grid(), cfg.hilbert(), true, ov.threads);

    auto keep = [&components](std::size_t j) {
        return components.empty() ||
               std::find(components.begin(), components.end(), j) != components.end();
    };

    std::ofstream out = open_out(trace_path, "propagate");
    out << "layer,phase,component,x,cdf\n";
    std::size_t rows = 0;
    for (std::size_t k = 0; k < prop.trace.size(); ++k) {
        const cfv::LayerMarginals& lm = prop.trace[k];
        const bool has_post = !lm.post.empty();
        for (int phase = 0; phase < (has_post ? 2 : 1); ++phase) {
            const cfv::MarginalSet& set = phase == 0 ? lm.pre : lm.post;
            for (std::size_t j = 0; j < set.size(); ++j) {
                if (!keep(j)) continue;
                cfv::CdfInverter inv(
                    [&set, j](double t) { return cfv::evaluate_cf(set[j], t); }, cfg.hilbert());
                for (int i = 0; i < x_points; ++i) {
                    const double x = x_min + (x_max - x_min) * i / (x_points - 1);
                    out << k << ',' << (phase == 0 ? "pre" : "post") << ',' << j << ','
                        << fmt_double(x) << ',' << fmt_double(inv.cdf(x).value) << "\n";
                    ++rows;
                }
            }
        }
    }
    std::cerr << "propagate: wrote " << rows << " rows to " << trace_path << " in "
              << cfv::detail::seconds_since(t0) << " s\n";
    return kExitPass;
}

int cmd_quantile(const std::string& config_path, const Overrides& ov, double p) {
    const cfv::ProblemConfig cfg = load_with_overrides(config_path, ov);
    if (!(p > 0.0) || !(p < 1.0)) throw cfv::ConfigError("quantile: p must be in (0, 1)");
    const cfv::HalfSpace& hs = cfg.safety.front();

    const auto t0 = std::chrono::steady_clock::now();
    cfv::MarginalSet inputs(cfg.inputs.begin(), cfg.inputs.end());
    const cfv::MarginalSet out =
        cfv::propagate_network(cfg.net, inputs, cfg.grid(), cfg.hilbert(), false, ov.threads)
            .output;
    const cfv::SampledCF phi_y = cfv::output_scalar_cf(out, hs.c, cfg.grid());
    const double r = cfv::quantile(phi_y, p, cfg.hilbert(), hs.direction);

    json result{{"p", p},
                {"direction", cfv::direction_name(hs.direction)},
                {"quantile", r},
                {"timing_seconds", cfv::detail::seconds_since(t0)},
                {"params_echo", echo_with_threads(cfg, ov)}};
    std::cout << result.dump(2) << "\n";
    std::cerr << "quantile: level " << p << " at " << r << "\n";
    return kExitPass;
}

int cmd_compare(const std::string& config_path, const Overrides& ov) {
    const cfv::ProblemConfig cfg = load_with_overrides(config_path, ov);
    const cfv::VerificationProblem problem = cfg.problem();
    const cfv::VerificationResult cf = cfv::verify_halfspace(problem, ov.threads);
    const cfv::ComparisonReport rep = cfv::compare(
        problem, cf, static_cast<std::size_t>(cfg.mc_samples), cfg.seed, ov.threads);

    json result{{"p_hat_cf", rep.p_hat_cf},
                {"p_hat_mc", rep.p_hat_mc},
                {"delta_cf", rep.delta_cf},
                {"delta_mc", rep.delta_mc},
                {"delta_delta", rep.delta_delta},
                {"n_samples", rep.n_samples},
                {"cf_seconds", rep.cf_seconds},
                {"mc_seconds", rep.mc_seconds},
                {"params_echo", echo_with_threads(cfg, ov)}};
    std::cout << result.dump(2) << "\n";
    std::cerr << "compare: |delta_cf - delta_mc| = " << std::abs(rep.delta_delta) << "\n";
    return kExitPass;
}

struct SweepTuple {
    double h;    // HT step
    int n_grid;  // frequency grid resolution
    int m_terms; // HT truncation
};

SweepTuple parse_tuple(const std::string& text) {
    SweepTuple t{};
    char trailing = 0;
    if (std::sscanf(text.c_str(), "%lf,%d,%d%c", &t.h, &t.n_grid, &t.m_terms, &trailing) != 3 ||
        t.h <= 0.0 || t.n_grid < 3 || t.m_terms < 1)
        throw cfv::ConfigError("sweep: bad tuple '" + text + "', expected h,N,M");
    return t;
}

// One ensemble cell: `trials` random networks with the shape and inputs of the
// base config, each scored by |delta_cf - delta_mc| against a fresh MC run.
int cmd_sweep(const std::string& config_path, const Overrides& ov,
              const std::vector<std::string>& tuple_texts, int trials,
              const std::string& out_path) {
    const cfv::ProblemConfig base = load_with_overrides(config_path, ov);
    if (trials < 1) throw cfv::ConfigError("sweep: trials must be >= 1");
    std::vector<SweepTuple> tuples;
    for (const std::string& s : tuple_texts) tuples.push_back(parse_tuple(s));
    if (tuples.empty()) throw cfv::ConfigError("sweep: need at least one --tuple h,N,M");

    std::vector<std::size_t> widths{base.net.input_width()};
    for (const cfv::AffineLayer& L : base.net.layers) widths.push_back(L.rows);

    std::ofstream out = open_out(out_path, "sweep");
    out << "h,N,M,mean_abs_delta_delta,mean_time_seconds\n";
    for (const SweepTuple& tup : tuples) {
        double sum_err = 0.0;
        double sum_time = 0.0;
        for (int trial = 0; trial < trials; ++trial) {
            cfv::ProblemConfig cfg = base;
            cfg.ht_step = tup.h;
            cfg.ht_terms = tup.m_terms;
            cfg.n_grid = tup.n_grid;
            cfg.seed = base.seed + static_cast<std::uint64_t>(trial);
            cfg.net = cfv::random_network(widths, cfg.seed);
            const auto t0 = std::chrono::steady_clock::now();
            const cfv::VerificationProblem problem = cfg.problem();
            const cfv::VerificationResult cf = cfv::verify_halfspace(problem, ov.threads);
            const cfv::ComparisonReport rep = cfv::compare(
                problem, cf, static_cast<std::size_t>(cfg.mc_samples), cfg.seed, ov.threads);
            sum_time += cfv::detail::seconds_since(t0);
            sum_err += std::abs(rep.delta_delta);
            std::cerr << "sweep: h=" << tup.h << " N=" << tup.n_grid << " M=" << tup.m_terms
                      << " trial " << trial + 1 << "/" << trials
                      << " |dDelta|=" << std::abs(rep.delta_delta) << "\n";
        }
        out << fmt_double(tup.h) << ',' << tup.n_grid << ',' << tup.m_terms << ','
            << fmt_double(sum_err / trials) << ',' << fmt_double(sum_time / trials) << "\n";
    }
    std::cerr << "sweep: wrote " << out_path << "\n";
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chance-constraint verification of ReLU networks via characteristic functions"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;

    CLI::App* verify = app.add_subcommand("verify", "check the chance constraint, exit 0/1");
    verify->add_option("config", config_path, "problem config JSON")->required();
    add_override_flags(*verify, ov);

    std::string trace_path = "trace.csv";
    double x_min = -5.0, x_max = 5.0;
    int x_points = 201;
    std::vector<std::size_t> components;
    CLI::App* propagate =
        app.add_subcommand("propagate", "trace per-layer marginal CDF curves to CSV");
    propagate->add_option("config", config_path, "problem config JSON")->required();
    propagate->add_option("--trace", trace_path, "output CSV path");
    propagate->add_option("--x-min", x_min, "left end of the CDF x-range");
    propagate->add_option("--x-max", x_max, "right end of the CDF x-range");
    propagate->add_option("--x-points", x_points, "number of x samples per curve");
    propagate->add_option("--components", components, "restrict rows to these component indices");
    add_override_flags(*propagate, ov);

    double p_level = 0.95;
    CLI::App* quantile =
        app.add_subcommand("quantile", "output-distribution quantile for the safety direction");
    quantile->add_option("config", config_path, "problem config JSON")->required();
    quantile->add_option("--p", p_level, "quantile level in (0, 1)");
    add_override_flags(*quantile, ov);

    CLI::App* compare =
        app.add_subcommand("compare", "CF verdict vs Monte-Carlo verdict on one problem");
    compare->add_option("config", config_path, "problem config JSON")->required();
    add_override_flags(*compare, ov);

    std::vector<std::string> tuple_texts;
    int trials = 10;
    std::string sweep_out = "sweep.csv";
    CLI::App* sweep = app.add_subcommand("sweep", "ensemble error/time table over h,N,M tuples");
    sweep->add_option("config", config_path, "problem config JSON")->required();
    sweep->add_option("--tuple", tuple_texts, "parameter tuple h,N,M (repeatable)")->required();
    sweep->add_option("--trials", trials, "random networks per tuple");
    sweep->add_option("--out", sweep_out, "output CSV path");
    add_override_flags(*sweep, ov);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (verify->parsed()) return cmd_verify(config_path, ov);
        if (propagate->parsed())
            return cmd_propagate(config_path, ov, trace_path, x_min, x_max, x_points, components);
        if (quantile->parsed()) return cmd_quantile(config_path, ov, p_level);
        if (compare->parsed()) return cmd_compare(config_path, ov);
        if (sweep->parsed()) return cmd_sweep(config_path, ov, tuple_texts, trials, sweep_out);
    } catch (const cfv::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const cfv::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const cfv::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
