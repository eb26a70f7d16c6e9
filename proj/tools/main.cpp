// fbmwalk: weighted-random-walk approximation to fractional Brownian
// motion. Subcommands: generate, verify, converge, constants.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "fbmwalk/oracle.hpp"
#include "fbmwalk/special.hpp"
#include "fbmwalk/stats.hpp"
#include "fbmwalk/version.hpp"
#include "fbmwalk/walk.hpp"

using json = nlohmann::ordered_json;
using namespace fbmwalk;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
    std::string command;
    double hurst = 0.5;
    long n = 256;
    double horizon = 1.0;
    std::string past_steps = "auto";  // integer or "auto"
    long paths = 1;
    std::uint64_t seed = 1;
    std::string scale = "raw";  // "raw" | "c_H"
    std::string output;
    std::string format = "csv";  // "csv" | "jsonl"
    std::vector<long> scaling_ns = {16, 64, 256, 1024};
};

long resolve_past_steps(const RunConfig& cfg, const HurstIndex& H) {
    if (cfg.past_steps == "auto") {
        return past_horizon_for_tolerance(H, cfg.n, cfg.horizon, 1e-3);
    }
    const long m = std::stol(cfg.past_steps);
    if (m < 1) throw CLI::ValidationError("--past-steps must be >= 1 or auto");
    return m;
}

double resolve_scale(const RunConfig& cfg, const HurstIndex& H) {
    if (cfg.scale == "raw") return 1.0;
    if (cfg.scale == "c_H") return scaling_constant_c(H);
    throw CLI::ValidationError("--scale must be raw or c_H");
}

unsigned worker_count(long paths) {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FBMWALK_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return std::min<unsigned>(n, static_cast<unsigned>(std::max(1L, paths)));
}

// Deterministic fan-out: path p always uses schedule(seed, p), so the
// result is independent of the worker count.
std::vector<PathSample> generate_paths(const PathGenerator& gen,
                                       std::uint64_t base_seed, long paths) {
    std::vector<PathSample> out(static_cast<size_t>(paths));
    const unsigned workers = worker_count(paths);
    std::atomic<long> next{0};
    auto run = [&] {
        for (;;) {
            const long p = next.fetch_add(1);
            if (p >= paths) return;
            out[static_cast<size_t>(p)] =
                gen.generate(CounterRng::schedule(base_seed, p));
        }
    };
    if (workers <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string path_filename(const std::string& base, long index, long total) {
    if (total <= 1) return base;
    const auto dot = base.find_last_of('.');
    char suffix[24];
    std::snprintf(suffix, sizeof(suffix), "_%04ld", index);
    if (dot == std::string::npos) return base + suffix;
    return base.substr(0, dot) + suffix + base.substr(dot);
}

void write_path_file(const PathSample& path, const std::string& filename,
                     const std::string& format, double scale) {
    std::ofstream out(filename, std::ios::binary);  // LF endings everywhere
    if (!out) throw std::runtime_error("cannot open output file " + filename);
    const bool csv = (format == "csv");
    if (csv) out << "t,x\n";
    for (size_t k = 0; k < path.values.size(); ++k) {
        const double t = path.grid.time_of(static_cast<long>(k));
        const double x = scale * path.values[k];
        if (csv) {
            out << format_double(t) << "," << format_double(x) << "\n";
        } else {
            out << "{\"t\":" << format_double(t) << ",\"x\":"
                << format_double(x) << "}\n";
        }
    }
    if (!out) throw std::runtime_error("write failed for " + filename);
}

int cmd_constants(const RunConfig& cfg, bool as_json) {
    const HurstIndex H(cfg.hurst);
    const FbmConstants c = make_constants(H);
    json j;
    j["H"] = cfg.hurst;
    j["K_H"] = c.K;
    j["c_H"] = c.c;
    if (H.sub_diffusive()) j["zeta(3/2-H)"] = zeta(1.5 - cfg.hurst);
    if (H.super_diffusive()) j["zeta(3-2H)"] = zeta(3.0 - 2.0 * cfg.hurst);
    if (as_json) {
        std::cout << j.dump(2) << "\n";
    } else {
        for (auto& [k, v] : j.items()) {
            std::cout << k << " = " << format_double(v.get<double>()) << "\n";
        }
    }
    return kExitOk;
}

int cmd_generate(const RunConfig& cfg) {
    const HurstIndex H(cfg.hurst);
    const long M = resolve_past_steps(cfg, H);
    const double scale = resolve_scale(cfg, H);
    const GridSpec grid(cfg.n, cfg.horizon, M);
    const PathGenerator gen(H, grid);
    const std::string base = cfg.output.empty() ? "path.csv" : cfg.output;

    const auto paths = generate_paths(gen, cfg.seed, cfg.paths);
    for (long p = 0; p < cfg.paths; ++p) {
        write_path_file(paths[static_cast<size_t>(p)],
                        path_filename(base, p, cfg.paths), cfg.format, scale);
    }

    json meta;
    meta["H"] = cfg.hurst;
    meta["N"] = cfg.n;
    meta["horizon"] = cfg.horizon;
    meta["past_steps"] = M;
    meta["paths"] = cfg.paths;
    meta["seed"] = cfg.seed;
    meta["scale"] = cfg.scale;
    meta["format"] = cfg.format;
    meta["generator"] =
        gen.engine() == Engine::Convolution ? "convolution" : "incremental";
    meta["version"] = FBMWALK_VERSION;
    std::ofstream side(base + ".meta.json", std::ios::binary);
    side << meta.dump(2) << "\n";
    return kExitOk;
}

json check_entry(const std::string& name, double computed, double bound,
                 bool pass) {
    json c;
    c["check"] = name;
    c["computed"] = computed;
    c["bound"] = bound;
    c["margin"] = bound - computed;
    c["pass"] = pass;
    return c;
}

int cmd_verify(const RunConfig& cfg) {
    const HurstIndex H(cfg.hurst);
    const long M =
        cfg.past_steps == "auto" ? 512 : resolve_past_steps(cfg, H);
    const GridSpec grid(cfg.n, cfg.horizon, M);
    const long seeds = std::max(1L, cfg.paths);
    json checks = json::array();
    bool all_pass = true;
    auto add = [&](json c) {
        all_pass = all_pass && c["pass"].get<bool>();
        checks.push_back(std::move(c));
    };

    // Form identity: incremental vs reordered coefficient form.
    double worst_form = 0.0;
    for (long s = 0; s < seeds; ++s) {
        const BernoulliStream stream(CounterRng::schedule(cfg.seed, s), grid);
        const auto a = path_incremental(H, stream);
        const auto b = path_coefficient(H, stream);
        for (size_t i = 0; i < a.values.size(); ++i) {
            worst_form =
                std::max(worst_form, std::abs(a.values[i] - b.values[i]));
        }
    }
    add(check_entry("form_identity_sup_norm", worst_form, 1e-9,
                    worst_form <= 1e-9));

    // Riemann sandwich for the regime's error terms.
    const auto kinds =
        H.sub_diffusive()
            ? std::vector<ErrorTermKind>{ErrorTermKind::EpsilonTilde,
                                         ErrorTermKind::DeltaTilde}
        : H.super_diffusive()
            ? std::vector<ErrorTermKind>{ErrorTermKind::Epsilon,
                                         ErrorTermKind::Delta}
            : std::vector<ErrorTermKind>{};
    const char* kind_names[] = {"epsilon", "delta", "epsilon_tilde",
                                "delta_tilde"};
    for (const auto kind : kinds) {
        const auto report = error_term_report(H, grid, kind);
        double worst_excess = 0.0;
        for (const auto& e : report.entries) {
            worst_excess = std::max(worst_excess,
                                    std::max(-e.value, e.value - e.upper_bound));
        }
        json c = check_entry(std::string("riemann_sandwich_") +
                                 kind_names[static_cast<int>(kind)],
                             worst_excess, 0.0, report.all_within_bounds());
        c["entries"] = report.entries.size();
        add(std::move(c));
    }

    if (H.super_diffusive()) {
        for (long j = 1; j <= grid.future_steps(); j *= 2) {
            const double t = grid.time_of(j);
            const auto l2 = lemma2_variance_bounds(H, t, grid);
            json c = check_entry("lemma2_i_t=" + std::to_string(t),
                                 l2.epsilon_variance, l2.epsilon_bound,
                                 l2.pass_i);
            add(std::move(c));
            c = check_entry("lemma2_ii_t=" + std::to_string(t),
                            l2.delta_variance, l2.delta_bound, l2.pass_ii);
            add(std::move(c));
        }
    } else if (H.sub_diffusive()) {
        double worst = 0.0, bound = 0.0;
        bool pass = true;
        for (long s = 0; s < seeds; ++s) {
            const BernoulliStream stream(CounterRng::schedule(cfg.seed, s),
                                         grid);
            const auto l3 = lemma3_pathwise_bound(H, stream);
            worst = std::max(worst, l3.max_discrepancy);
            bound = l3.bound;
            pass = pass && l3.pass;
        }
        json c = check_entry("lemma3_pathwise", worst, bound, pass);
        c["seeds"] = seeds;
        add(std::move(c));
    } else {
        // Classical degeneracy: the walk is the plain Bernoulli walk and
        // its quadratic variation is exactly the horizon.
        double worst_gap = 0.0, worst_qv = 0.0;
        for (long s = 0; s < seeds; ++s) {
            const BernoulliStream stream(CounterRng::schedule(cfg.seed, s),
                                         grid);
            const auto path = path_incremental(H, stream);
            double b = 0.0, qv = 0.0;
            for (long j = 0; j < grid.future_steps(); ++j) {
                const double inc =
                    path.values[static_cast<size_t>(j + 1)] -
                    path.values[static_cast<size_t>(j)];
                qv += inc * inc;
                b += stream.delta_b(j);
                worst_gap = std::max(
                    worst_gap,
                    std::abs(path.values[static_cast<size_t>(j + 1)] - b));
            }
            worst_qv = std::max(worst_qv, std::abs(qv - grid.horizon()));
        }
        add(check_entry("degeneracy_vs_bernoulli_walk", worst_gap, 1e-12,
                        worst_gap <= 1e-12));
        add(check_entry("quadratic_variation_gap", worst_qv, 1e-12,
                        worst_qv <= 1e-12));
    }

    json report;
    report["command"] = "verify";
    report["H"] = cfg.hurst;
    report["N"] = cfg.n;
    report["past_steps"] = M;
    report["seeds"] = seeds;
    report["all_pass"] = all_pass;
    report["checks"] = checks;
    if (!cfg.output.empty()) {
        std::ofstream out(cfg.output, std::ios::binary);
        out << report.dump(2) << "\n";
    }
    std::cout << report.dump(2) << "\n";
    return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_converge(const RunConfig& cfg) {
    const HurstIndex H(cfg.hurst);
    const long M = resolve_past_steps(cfg, H);
    const double scale = resolve_scale(cfg, H);
    const GridSpec grid(cfg.n, cfg.horizon, M);

    const bool gate = cfg.paths >= 100;
    if (!gate) {
        std::cerr << "warning: paths < 100; z-score gating skipped\n";
    }

    json report;
    report["command"] = "converge";
    report["H"] = cfg.hurst;
    report["N"] = cfg.n;
    report["past_steps"] = M;
    report["paths"] = cfg.paths;
    report["scale"] = cfg.scale;
    bool all_pass = true;

    std::vector<double> probes;
    for (double f : {0.25, 0.5, 0.75, 1.0}) probes.push_back(f * cfg.horizon);

    if (cfg.paths >= 2) {
        const PathGenerator gen(H, grid);
        const auto paths = generate_paths(gen, cfg.seed, cfg.paths);
        const auto var = estimate_variance(paths, cfg.horizon, scale, H);
        json jv;
        jv["value"] = var.value;
        jv["target"] = var.target;
        jv["std_error"] = var.std_error;
        jv["z"] = var.z_score;
        report["variance_at_horizon"] = jv;
        if (gate) all_pass = all_pass && std::abs(var.z_score) <= 4.0;

        const auto cov = compare_covariance(paths, probes, scale, H);
        json jc = json::array();
        for (const auto& e : cov.entries) {
            json entry;
            entry["estimator"] = e.estimator;
            entry["value"] = e.value;
            entry["target"] = e.target;
            entry["z"] = e.z_score;
            jc.push_back(entry);
        }
        report["covariance"] = {{"max_abs_gap", cov.max_abs_gap},
                                {"max_abs_z", cov.max_abs_z},
                                {"entries", jc}};
        if (gate) all_pass = all_pass && cov.max_abs_z <= 4.0;
    }

    if (H.regime() != Regime::Classical && cfg.scaling_ns.size() >= 3) {
        const auto study = scaling_study(H, cfg.scaling_ns, 25, cfg.seed);
        json js;
        js["grid_sizes"] = study.grid_sizes;
        js["discrepancies"] = study.discrepancies;
        js["slope"] = study.fit.slope;
        js["expected_slope"] = study.expected_slope;
        js["tolerance"] = study.slope_tolerance;
        js["residual"] = study.fit.residual;
        js["pass"] = study.pass;
        report["scaling_study"] = js;
        all_pass = all_pass && study.pass;
    }

    report["all_pass"] = all_pass;
    if (!cfg.output.empty()) {
        std::ofstream out(cfg.output, std::ios::binary);
        out << report.dump(2) << "\n";
    }
    std::cout << report.dump(2) << "\n";
    return all_pass ? kExitOk : kExitCheckFailed;
}

// Returns true if the file set "scale" explicitly.
bool load_config_file(const std::string& file, RunConfig& cfg) {
    std::ifstream in(file);
    if (!in) throw CLI::ValidationError("cannot read config file " + file);
    json j = json::parse(in);
    if (j.contains("hurst")) cfg.hurst = j["hurst"].get<double>();
    if (j.contains("n")) cfg.n = j["n"].get<long>();
    if (j.contains("horizon")) cfg.horizon = j["horizon"].get<double>();
    if (j.contains("past_steps")) {
        cfg.past_steps = j["past_steps"].is_string()
                             ? j["past_steps"].get<std::string>()
                             : std::to_string(j["past_steps"].get<long>());
    }
    if (j.contains("paths")) cfg.paths = j["paths"].get<long>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("scale")) cfg.scale = j["scale"].get<std::string>();
    if (j.contains("out")) cfg.output = j["out"].get<std::string>();
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
    if (j.contains("scaling_ns"))
        cfg.scaling_ns = j["scaling_ns"].get<std::vector<long>>();
    return j.contains("scale");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted-random-walk approximation to fractional Brownian "
                 "motion"};
    app.set_version_flag("--version", FBMWALK_VERSION);
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_file;
    bool constants_json = false;

    // --hurst is mandatory but may come from the config file instead of
    // the command line, so it is checked after the config merge.
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--hurst", cfg.hurst, "Hurst index in (0,1)");
        sub->add_option("--config", config_file, "JSON config file");
    };
    auto add_run_options = [&](CLI::App* sub) {
        sub->add_option("--n", cfg.n, "grid points per unit time (N)");
        sub->add_option("--horizon", cfg.horizon, "simulation horizon");
        sub->add_option("--past-steps", cfg.past_steps,
                        "past horizon in steps, or 'auto' (tol 1e-3)");
        sub->add_option("--paths", cfg.paths, "number of paths / seeds");
        sub->add_option("--seed", cfg.seed, "base seed");
        sub->add_option("--scale", cfg.scale, "raw or c_H");
        sub->add_option("--out", cfg.output, "output file");
        sub->add_option("--format", cfg.format, "csv or jsonl");
    };

    auto* gen = app.add_subcommand("generate", "generate fractional walk paths");
    add_common(gen);
    add_run_options(gen);

    auto* ver = app.add_subcommand(
        "verify", "deterministic identity and bound verification");
    add_common(ver);
    add_run_options(ver);

    auto* con = app.add_subcommand(
        "converge", "statistical convergence checks against the exact oracle");
    add_common(con);
    add_run_options(con);
    con->add_option("--scaling-n", cfg.scaling_ns,
                    "grid sizes for the rate-slope study");

    auto* cst = app.add_subcommand("constants", "print K_H, c_H and the zeta "
                                                "values they use");
    add_common(cst);
    cst->add_flag("--json", constants_json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        // Precedence: flags > config file > defaults. `cfg` holds
        // defaults plus explicitly passed flags; fields not given on the
        // command line fall back to the file value when one exists.
        auto* sub = app.get_subcommands().front();
        bool scale_configured =
            (sub != cst) && sub->count("--scale") > 0;
        if (!config_file.empty()) {
            RunConfig flags = cfg;
            const bool file_scale = load_config_file(config_file, cfg);
            scale_configured = scale_configured || file_scale;
            auto take = [&](const char* name, auto member) {
                if (sub->count(name)) cfg.*member = flags.*member;
            };
            take("--hurst", &RunConfig::hurst);
            if (sub != cst) {
                take("--n", &RunConfig::n);
                take("--horizon", &RunConfig::horizon);
                take("--past-steps", &RunConfig::past_steps);
                take("--paths", &RunConfig::paths);
                take("--seed", &RunConfig::seed);
                take("--scale", &RunConfig::scale);
                take("--out", &RunConfig::output);
                take("--format", &RunConfig::format);
            }
        }
        // The theorem concerns c_H-scaled paths; converge applies that
        // scaling unless the user picked one explicitly.
        if (con->parsed() && !scale_configured) cfg.scale = "c_H";
        if (cfg.format != "csv" && cfg.format != "jsonl") {
            throw CLI::ValidationError("--format must be csv or jsonl");
        }
        if (cfg.paths < 1) {
            throw CLI::ValidationError("--paths must be >= 1");
        }
        if (gen->parsed()) return cmd_generate(cfg);
        if (ver->parsed()) return cmd_verify(cfg);
        if (con->parsed()) return cmd_converge(cfg);
        if (cst->parsed()) return cmd_constants(cfg, constants_json);
        return kExitUsage;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}
