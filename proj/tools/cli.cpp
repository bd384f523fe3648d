#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "epochspec/core.hpp"
#include "epochspec/dgp.hpp"
#include "epochspec/error.hpp"
#include "epochspec/experiments.hpp"
#include "epochspec/test_procedure.hpp"
#include "epochspec/version.hpp"
#include "epochspec/weight_cache.hpp"
#include "epochspec/weighted_chisq.hpp"

namespace epochspec::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;
constexpr int kExitNumerical = 4;

int exit_code(ErrorKind kind) {
    switch (classify(kind)) {
        case ErrorClass::Input: return kExitInput;
        case ErrorClass::Config: return kExitConfig;
        case ErrorClass::Numerical: return kExitNumerical;
    }
    return kExitConfig;
}

std::string fmt(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

json result_doc(const std::string& command, json inputs, const char* body_key, json body,
                json seed, Clock::time_point start) {
    json doc{{"command", command}, {"inputs", std::move(inputs)}};
    doc[body_key] = std::move(body);
    doc["seed"] = std::move(seed);
    doc["version"] = kVersion;
    doc["elapsed_ms"] = elapsed_ms(start);
    return doc;
}

struct CacheOptions {
    bool disabled = false;
    std::string file;

    [[nodiscard]] std::unique_ptr<WeightCache> make() const {
        if (disabled) {
            return nullptr;
        }
        return std::make_unique<WeightCache>(file.empty() ? WeightCache::default_path()
                                                          : std::filesystem::path(file));
    }
};

void add_cache_options(CLI::App* cmd, CacheOptions& cache) {
    cmd->add_flag("--no-cache", cache.disabled, "Recompute the limit law instead of using the weight cache")
        ->envname("EPOCHSPEC_NO_CACHE");
    cmd->add_option("--cache-file", cache.file, "Weight cache location")->envname("EPOCHSPEC_CACHE_FILE");
}

// ---------------------------------------------------------------- test

struct TestArgs {
    std::string path;
    std::size_t block_length = 10;
    int s = 2;
    double alpha = 0.05;
    std::string format = "json";
    CacheOptions cache;
};

json outcome_json(const TestOutcome& o) {
    return json{{"statistic", o.statistic},
                {"critical_value", o.critical_value},
                {"p_value", o.p_value},
                {"alpha", o.alpha},
                {"decision", decision_label(o.decision)},
                {"reject_h0", o.decision == Decision::RejectH0},
                {"n", o.n},
                {"block_length", o.ell},
                {"blocks", o.m},
                {"s", o.s},
                {"per_frequency", o.per_frequency},
                {"block_length_heuristic", o.block_length_heuristic},
                {"p_value_from_sampling", o.p_value_from_sampling}};
}

int cmd_test(const TestArgs& args, std::ostream& out) {
    const auto start = Clock::now();
    const TimeSeries series = read_series_file(args.path);
    TestConfig config;
    config.ell = args.block_length;
    config.s = args.s;
    config.alpha = args.alpha;
    const auto cache = args.cache.make();
    const TestOutcome outcome = run_test(series, config, cache.get());
    if (args.format == "text") {
        out << "epoch-periodogram test (H0: I(1), H1: I(0))\n"
            << "  observations   " << outcome.n << " (blocks " << outcome.m << " x length " << outcome.ell << ")\n"
            << "  frequencies    " << outcome.s << "\n"
            << "  statistic      " << fmt(outcome.statistic) << "\n"
            << "  critical value " << fmt(outcome.critical_value) << " (alpha " << fmt(outcome.alpha) << ")\n"
            << "  p-value        " << fmt(outcome.p_value) << "\n"
            << "  decision       " << decision_label(outcome.decision) << "\n";
        return kExitOk;
    }
    const json inputs{{"path", args.path},
                      {"block_length", args.block_length},
                      {"s", args.s},
                      {"alpha", args.alpha}};
    out << result_doc("test", inputs, "outcome", outcome_json(outcome), nullptr, start).dump(2) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- limit

struct LimitArgs {
    double d = 0.5;
    int s = 2;
    std::vector<double> quantiles;
    double tol = 1e-6;
    CacheOptions cache;
};

int cmd_limit(const LimitArgs& args, std::ostream& out) {
    const auto start = Clock::now();
    const MemoryParameter d(args.d);
    if (args.s < 1) {
        throw Error(ErrorKind::ConfigError, "--s must be at least 1");
    }
    for (const double p : args.quantiles) {
        if (!(p > 0.0 && p < 1.0)) {
            throw Error(ErrorKind::ConfigError, "quantile levels must lie in (0, 1)");
        }
    }
    const auto cache = args.cache.make();
    const LimitLaw law = limit_law(d, args.s, args.tol, cache.get());
    const WeightedChiSq dist(law.weights);
    json quantiles = json::array();
    for (const double p : args.quantiles) {
        quantiles.push_back(json{{"p", p}, {"value", wchisq_quantile(dist, p)}});
    }
    const json outcome{{"regime", to_string(d.regime())},
                       {"weights", law.weights.zeta},
                       {"weights_sum", law.weights.sum()},
                       {"quantiles", quantiles},
                       {"cache_hit", law.cache_hit},
                       {"scale_omitted", law.covariance.scale_omitted}};
    const json inputs{{"d", args.d}, {"s", args.s}, {"quantile", args.quantiles}, {"tol", args.tol}};
    out << result_doc("limit", inputs, "outcome", outcome, nullptr, start).dump(2) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string kind = "whitenoise";
    double d = 0.0;
    double phi = 0.0;
    double d_increment = 0.0;
    std::size_t n = 2000;
    std::uint64_t seed = 0;
    double sigma = 1.0;
    std::string mode = "exact";
    std::size_t truncation = 0;
    std::string innovations = "gaussian";
    std::string out;
};

DgpSpec dgp_from_args(const SimulateArgs& args) {
    DgpSpec spec;
    if (args.kind == "whitenoise") {
        spec.kind = DgpKind::WhiteNoise;
    } else if (args.kind == "farima") {
        spec.kind = DgpKind::Farima;
        if (args.d >= 0.5) {
            throw Error(ErrorKind::InvalidDgp,
                        "farima needs d in [-1/2, 1/2); for d >= 1/2 use --kind integrated --d-increment " +
                            fmt(args.d - 1.0));
        }
    } else if (args.kind == "ar1") {
        spec.kind = DgpKind::Ar1;
    } else if (args.kind == "integrated") {
        spec.kind = DgpKind::IntegratedFarima;
    } else {
        throw Error(ErrorKind::InvalidDgp, "unknown --kind '" + args.kind + "'");
    }
    spec.d = args.d;
    spec.phi = args.phi;
    spec.d_increment = args.d_increment;
    spec.n = args.n;
    spec.seed = args.seed;
    spec.sigma_eps = args.sigma;
    spec.ma_truncation = args.truncation;
    spec.mode = args.mode == "truncated" ? DgpMode::TruncatedMA : DgpMode::ExactGaussian;
    spec.innovations = args.innovations == "uniform" ? Innovations::UniformCentered : Innovations::Gaussian;
    spec.validate();
    return spec;
}

void write_series(std::ostream& os, const DgpSpec& spec, const Generated& generated) {
    os << "# epochspec " << kVersion << '\n'
       << "# kind=" << to_string(spec.kind);
    switch (spec.kind) {
        case DgpKind::Farima: os << " d=" << fmt(spec.d); break;
        case DgpKind::Ar1: os << " phi=" << fmt(spec.phi); break;
        case DgpKind::IntegratedFarima: os << " d_increment=" << fmt(spec.d_increment); break;
        case DgpKind::WhiteNoise: break;
    }
    os << " memory=" << fmt(spec.memory()) << " n=" << spec.n << " seed=" << spec.seed
       << " sigma=" << fmt(spec.sigma_eps) << " innovations=" << to_string(spec.innovations) << '\n'
       << "# mode=" << to_string(generated.metadata.mode_used)
       << " ma_truncation=" << generated.metadata.ma_truncation
       << " burn_in=" << generated.metadata.burn_in << '\n';
    for (const auto& warning : generated.metadata.warnings) {
        os << "# warning: " << warning << '\n';
    }
    for (const double v : generated.series.values()) {
        os << fmt(v) << '\n';
    }
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    const DgpSpec spec = dgp_from_args(args);
    const Generated generated = generate_with_metadata(spec);
    for (const auto& warning : generated.metadata.warnings) {
        err << "warning: " << warning << '\n';
    }
    if (args.out.empty()) {
        write_series(out, spec, generated);
        return kExitOk;
    }
    std::ofstream file(args.out, std::ios::binary);
    if (!file) {
        throw Error(ErrorKind::IoError, "cannot write " + args.out);
    }
    write_series(file, spec, generated);
    file.close();
    if (!file) {
        throw Error(ErrorKind::IoError, "failed writing " + args.out);
    }
    const json inputs{{"kind", args.kind},   {"d", args.d},           {"phi", args.phi},
                      {"d_increment", args.d_increment},             {"n", args.n},
                      {"sigma", args.sigma}, {"mode", args.mode},     {"truncation", args.truncation},
                      {"innovations", args.innovations},             {"out", args.out}};
    const json body{{"path", args.out},
                    {"mode_used", to_string(generated.metadata.mode_used)},
                    {"ma_truncation", generated.metadata.ma_truncation},
                    {"burn_in", generated.metadata.burn_in},
                    {"warnings", generated.metadata.warnings}};
    out << result_doc("simulate", inputs, "outcome", body, args.seed, start).dump(2) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- experiment

struct ExperimentArgs {
    std::string plan;
    std::string out_dir = "experiment-out";
    unsigned threads = 0;
    CacheOptions cache;
};

int cmd_experiment(const ExperimentArgs& args, std::ostream& out) {
    const auto start = Clock::now();
    const ExperimentPlan plan = load_plan(args.plan);
    const unsigned threads = args.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : args.threads;
    const auto cache = args.cache.make();
    const ExperimentOutputs outputs = run_plan(plan, threads, cache.get());
    write_outputs(plan, outputs, args.out_dir, elapsed_ms(start));
    json files = json::array();
    for (const auto& file : outputs.files) {
        files.push_back((std::filesystem::path(args.out_dir) / file.name).string());
    }
    const json inputs{{"plan", args.plan}, {"out", args.out_dir}, {"threads", threads}};
    const json table{{"name", plan.name},
                     {"kind", to_string(plan.kind)},
                     {"files", files},
                     {"manifest", (std::filesystem::path(args.out_dir) / "manifest.json").string()},
                     {"notes", outputs.notes}};
    out << result_doc("experiment", inputs, "table", table, plan.seed, start).dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Epoch-periodogram stationarity test (H0: I(1) vs H1: I(0))", "epochspec"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    TestArgs test_args;
    CLI::App* test = app.add_subcommand("test", "Run the test on a one-column series file");
    test->add_option("path", test_args.path, "Input file (text or CSV, first column used)")->required();
    test->add_option("--block-length", test_args.block_length, "Epoch length ell")
        ->envname("EPOCHSPEC_BLOCK_LENGTH");
    test->add_option("--s", test_args.s, "Number of Fourier frequencies")->envname("EPOCHSPEC_S");
    test->add_option("--alpha", test_args.alpha, "Significance level")->envname("EPOCHSPEC_ALPHA");
    test->add_option("--format", test_args.format, "Output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->envname("EPOCHSPEC_FORMAT");
    add_cache_options(test, test_args.cache);

    LimitArgs limit_args;
    CLI::App* limit = app.add_subcommand("limit", "Weights and quantiles of the limit law Q(s,d)");
    limit->add_option("--d", limit_args.d, "Memory parameter in (-1/2, 3/2)")->envname("EPOCHSPEC_D");
    limit->add_option("--s", limit_args.s, "Number of Fourier frequencies")->envname("EPOCHSPEC_S");
    limit->add_option("--quantile", limit_args.quantiles, "Quantile levels")->envname("EPOCHSPEC_QUANTILE");
    limit->add_option("--tol", limit_args.tol, "Quadrature relative tolerance")->envname("EPOCHSPEC_TOL");
    add_cache_options(limit, limit_args.cache);

    SimulateArgs sim_args;
    CLI::App* simulate = app.add_subcommand("simulate", "Generate a series");
    simulate->add_option("--kind", sim_args.kind, "whitenoise | farima | ar1 | integrated")
        ->envname("EPOCHSPEC_KIND");
    simulate->add_option("--d", sim_args.d, "FARIMA memory parameter")->envname("EPOCHSPEC_D");
    simulate->add_option("--phi", sim_args.phi, "AR(1) coefficient")->envname("EPOCHSPEC_PHI");
    simulate->add_option("--d-increment", sim_args.d_increment, "Memory parameter of the increments")
        ->envname("EPOCHSPEC_D_INCREMENT");
    simulate->add_option("--n", sim_args.n, "Length")->envname("EPOCHSPEC_N");
    simulate->add_option("--seed", sim_args.seed, "Seed")->envname("EPOCHSPEC_SEED");
    simulate->add_option("--sigma", sim_args.sigma, "Innovation standard deviation")->envname("EPOCHSPEC_SIGMA");
    simulate->add_option("--mode", sim_args.mode, "FARIMA generation mode")
        ->check(CLI::IsMember({"exact", "truncated"}))
        ->envname("EPOCHSPEC_MODE");
    simulate->add_option("--truncation", sim_args.truncation, "MA truncation for truncated mode (0 = auto)")
        ->envname("EPOCHSPEC_TRUNCATION");
    simulate->add_option("--innovations", sim_args.innovations, "Innovation law")
        ->check(CLI::IsMember({"gaussian", "uniform"}))
        ->envname("EPOCHSPEC_INNOVATIONS");
    simulate->add_option("--out", sim_args.out, "Output file (default stdout)")->envname("EPOCHSPEC_OUT");

    ExperimentArgs exp_args;
    CLI::App* experiment = app.add_subcommand("experiment", "Run a Monte Carlo plan");
    experiment->add_option("--plan", exp_args.plan, "Plan JSON file")->required()->envname("EPOCHSPEC_PLAN");
    experiment->add_option("--out", exp_args.out_dir, "Output directory")->envname("EPOCHSPEC_OUT");
    experiment->add_option("--threads", exp_args.threads, "Worker threads (0 = all cores)")
        ->envname("EPOCHSPEC_THREADS");
    add_cache_options(experiment, exp_args.cache);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e, out, err);
        }
        app.exit(e, out, err);
        return kExitConfig;
    }

    try {
        if (*test) {
            return cmd_test(test_args, out);
        }
        if (*limit) {
            return cmd_limit(limit_args, out);
        }
        if (*simulate) {
            return cmd_simulate(sim_args, out, err);
        }
        if (*experiment) {
            return cmd_experiment(exp_args, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitConfig;
}

}  // namespace epochspec::cli
