#include "epochspec/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "epochspec/error.hpp"
#include "epochspec/parallel.hpp"
#include "epochspec/statistic.hpp"
#include "epochspec/test_procedure.hpp"
#include "epochspec/version.hpp"

namespace epochspec {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

[[noreturn]] void plan_error(const std::string& what) {
    throw Error(ErrorKind::PlanError, what);
}

DgpMode parse_mode(const std::string& s) {
    if (s == "exact") {
        return DgpMode::ExactGaussian;
    }
    if (s == "truncated") {
        return DgpMode::TruncatedMA;
    }
    plan_error("unknown mode '" + s + "'");
}

Innovations parse_innovations(const std::string& s) {
    if (s == "gaussian") {
        return Innovations::Gaussian;
    }
    if (s == "uniform") {
        return Innovations::UniformCentered;
    }
    plan_error("unknown innovations '" + s + "'");
}

json dgp_to_json(const DgpSpec& dgp) {
    json j{{"kind", to_string(dgp.kind)},
           {"sigma", dgp.sigma_eps},
           {"mode", to_string(dgp.mode)},
           {"innovations", to_string(dgp.innovations)}};
    switch (dgp.kind) {
        case DgpKind::Farima: j["d"] = dgp.d; break;
        case DgpKind::Ar1: j["phi"] = dgp.phi; break;
        case DgpKind::IntegratedFarima: j["d_increment"] = dgp.d_increment; break;
        case DgpKind::WhiteNoise: break;
    }
    if (dgp.ma_truncation != 0) {
        j["ma_truncation"] = dgp.ma_truncation;
    }
    return j;
}

DgpSpec instantiate(const DgpSpec& tmpl, std::size_t n, std::uint64_t seed) {
    DgpSpec spec = tmpl;
    spec.n = n;
    spec.seed = seed;
    return spec;
}

void validate_grid(const ExperimentPlan& plan) {
    for (const auto& point : plan.grid) {
        DgpSpec probe = point.dgp;
        probe.n = std::max<std::size_t>(plan.n, 2);
        try {
            probe.validate();
        } catch (const Error& e) {
            plan_error("grid point '" + point.label + "': " + e.what());
        }
    }
}

}  // namespace

std::size_t convergence_block_length(const TestConfig& config, std::size_t n) {
    if (config.ell != 0) {
        return config.ell;
    }
    return static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::SizePower: return "size_power";
        case ExperimentKind::CdfOverlay: return "cdf_overlay";
        case ExperimentKind::Convergence: return "convergence";
    }
    return "unknown";
}

void ExperimentPlan::validate() const {
    if (replications < 100) {
        plan_error("replications must be >= 100");
    }
    if (grid.empty()) {
        plan_error("grid must not be empty");
    }
    if (config.ell == 0 && kind != ExperimentKind::Convergence) {
        plan_error("only convergence plans may scale the block length with n");
    }
    if (kind == ExperimentKind::Convergence) {
        if (n_grid.empty()) {
            plan_error("convergence plans need a non-empty n_grid");
        }
        for (const std::size_t size : n_grid) {
            TestConfig at_n = config;
            at_n.ell = convergence_block_length(config, size);
            try {
                at_n.validate();
            } catch (const Error& e) {
                plan_error(e.what());
            }
            if (size / at_n.ell < 2) {
                plan_error("n_grid entry too small for the block length");
            }
        }
        return validate_grid(*this);
    }
    try {
        config.validate();
    } catch (const Error& e) {
        plan_error(e.what());
    }
    if (n / config.ell < 2) {
        plan_error("n too small for the block length");
    }
    validate_grid(*this);
}

GridPoint grid_point_from_json(const json& entry, const std::string& parameter) {
    if (!entry.is_object()) {
        plan_error("grid entries must be objects");
    }
    GridPoint point;
    const std::string kind = entry.value("kind", "");
    DgpSpec& dgp = point.dgp;
    dgp.sigma_eps = entry.value("sigma", 1.0);
    dgp.mode = parse_mode(entry.value("mode", "exact"));
    dgp.innovations = parse_innovations(entry.value("innovations", "gaussian"));
    dgp.ma_truncation = entry.value("ma_truncation", std::size_t{0});
    if (kind == "farima") {
        const double d = entry.at("d").get<double>();
        point.value = d;
        if (d >= 0.5) {
            dgp.kind = DgpKind::IntegratedFarima;
            dgp.d_increment = d - 1.0;
            point.note = "d=" + fmt(d) + " generated as the cumulative sum of FARIMA(0," + fmt(d - 1.0) + ",0)";
        } else {
            dgp.kind = DgpKind::Farima;
            dgp.d = d;
        }
    } else if (kind == "integrated") {
        dgp.kind = DgpKind::IntegratedFarima;
        dgp.d_increment = entry.at("d_increment").get<double>();
        point.value = dgp.d_increment + 1.0;
        point.note = "d=" + fmt(point.value) + " generated as the cumulative sum of FARIMA(0," +
                     fmt(dgp.d_increment) + ",0)";
    } else if (kind == "ar1") {
        const double phi = entry.at("phi").get<double>();
        point.value = phi;
        if (phi == 1.0) {
            dgp.kind = DgpKind::IntegratedFarima;
            dgp.d_increment = 0.0;
            point.note = "phi=1 generated as a Gaussian random walk";
        } else {
            dgp.kind = DgpKind::Ar1;
            dgp.phi = phi;
        }
    } else if (kind == "whitenoise") {
        dgp.kind = DgpKind::WhiteNoise;
        point.value = 0.0;
    } else {
        plan_error("unknown grid kind '" + kind + "'");
    }
    if (entry.contains("value")) {
        point.value = entry.at("value").get<double>();
    }
    point.label = entry.value("label", parameter + "=" + fmt(point.value));
    return point;
}

ExperimentPlan plan_from_json(const json& doc) {
    try {
        ExperimentPlan plan;
        plan.name = doc.value("name", "experiment");
        const std::string kind = doc.at("kind").get<std::string>();
        if (kind == "size_power") {
            plan.kind = ExperimentKind::SizePower;
        } else if (kind == "cdf_overlay") {
            plan.kind = ExperimentKind::CdfOverlay;
        } else if (kind == "convergence") {
            plan.kind = ExperimentKind::Convergence;
        } else {
            plan_error("unknown experiment kind '" + kind + "'");
        }
        plan.parameter = doc.value("parameter", "d");
        plan.n = doc.value("n", std::size_t{2000});
        plan.n_grid = doc.value("n_grid", std::vector<std::size_t>{});
        plan.replications = doc.value("replications", std::size_t{3000});
        plan.seed = doc.at("seed").get<std::uint64_t>();
        plan.config.ell = doc.value("block_length", std::size_t{10});
        const std::string rule = doc.value("block_length_rule", "fixed");
        if (rule == "sqrt") {
            plan.config.ell = 0;
        } else if (rule != "fixed") {
            plan_error("unknown block_length_rule '" + rule + "'");
        }
        plan.config.s = doc.value("s", 2);
        plan.config.alpha = doc.value("alpha", 0.05);
        plan.config.quadrature_tol = doc.value("quadrature_tol", 1e-6);
        for (const json& entry : doc.at("grid")) {
            plan.grid.push_back(grid_point_from_json(entry, plan.parameter));
        }
        plan.validate();
        return plan;
    } catch (const json::exception& e) {
        plan_error(std::string("malformed plan: ") + e.what());
    }
}

json plan_to_json(const ExperimentPlan& plan) {
    json grid = json::array();
    for (const auto& point : plan.grid) {
        json entry{{"label", point.label}, {"value", point.value}, {"dgp", dgp_to_json(point.dgp)}};
        if (!point.note.empty()) {
            entry["note"] = point.note;
        }
        grid.push_back(std::move(entry));
    }
    json doc{{"name", plan.name},
             {"kind", to_string(plan.kind)},
             {"parameter", plan.parameter},
             {"n", plan.n},
             {"replications", plan.replications},
             {"seed", plan.seed},
             {"block_length", plan.config.ell},
             {"block_length_rule", plan.config.ell == 0 ? "sqrt" : "fixed"},
             {"s", plan.config.s},
             {"alpha", plan.config.alpha},
             {"quadrature_tol", plan.config.quadrature_tol},
             {"grid", std::move(grid)}};
    if (!plan.n_grid.empty()) {
        doc["n_grid"] = plan.n_grid;
    }
    return doc;
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open plan " + path.string());
    }
    const json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) {
        throw Error(ErrorKind::IoError, "plan is not valid JSON: " + path.string());
    }
    return plan_from_json(doc);
}

RejectionTable size_power_curve(const ExperimentPlan& plan, unsigned threads, const WeightCache* cache) {
    plan.validate();
    const EpochTest test(plan.config, cache);
    RejectionTable table;
    table.parameter = plan.parameter;
    for (std::size_t g = 0; g < plan.grid.size(); ++g) {
        const GridPoint& point = plan.grid[g];
        std::vector<unsigned char> rejected(plan.replications, 0);
        parallel_for(plan.replications, threads, [&](std::size_t r) {
            const DgpSpec spec = instantiate(point.dgp, plan.n, derive_seed(plan.seed, {g, r}));
            const std::vector<double> values = generate_values(spec);
            rejected[r] = test.decide(values) == Decision::RejectH0 ? 1 : 0;
        });
        RejectionRow row;
        row.label = point.label;
        row.value = point.value;
        row.replications = plan.replications;
        for (const unsigned char flag : rejected) {
            row.rejections += flag;
        }
        row.rate = static_cast<double>(row.rejections) / static_cast<double>(row.replications);
        row.std_error = std::sqrt(row.rate * (1.0 - row.rate) / static_cast<double>(row.replications));
        table.rows.push_back(row);
        if (!point.note.empty()) {
            table.notes.push_back(point.label + ": " + point.note);
        }
    }
    return table;
}

double max_adjacent_increase_in_se(const RejectionTable& table) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < table.rows.size(); ++k) {
        const auto& a = table.rows[k];
        const auto& b = table.rows[k + 1];
        const double rise = b.rate - a.rate;
        const double pooled = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
        double score = 0.0;
        if (pooled > 0.0) {
            score = rise / pooled;
        } else if (rise > 0.0) {
            score = std::numeric_limits<double>::infinity();
        } else if (rise < 0.0) {
            score = -std::numeric_limits<double>::infinity();
        }
        worst = std::max(worst, score);
    }
    return worst;
}

double ks_distance(std::span<const double> sample, const WeightedChiSq& law) {
    if (sample.empty()) {
        throw Error(ErrorKind::ConfigError, "KS distance needs a non-empty sample");
    }
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double count = static_cast<double>(sorted.size());
    double distance = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = wchisq_cdf(law, sorted[i]);
        distance = std::max({distance, static_cast<double>(i + 1) / count - f, f - static_cast<double>(i) / count});
    }
    return distance;
}

CdfOverlay cdf_overlay(const DgpSpec& dgp, const TestConfig& config, std::size_t replications,
                       std::uint64_t seed, unsigned threads, const WeightCache* cache,
                       std::uint64_t grid_index) {
    const MemoryParameter d(dgp.memory());
    config.validate();
    CdfOverlay out;
    out.d = d.value();
    out.weights = limit_law(d, config.s, config.quadrature_tol, cache).weights;
    out.statistics.resize(replications);
    parallel_for(replications, threads, [&](std::size_t r) {
        const DgpSpec spec = instantiate(dgp, dgp.n, derive_seed(seed, {grid_index, r}));
        const std::vector<double> values = generate_values(spec);
        out.statistics[r] = q_statistic(values, config.ell, config.s, d).value;
    });
    out.ks_distance = ks_distance(out.statistics, WeightedChiSq(out.weights));
    return out;
}

std::vector<ConvergenceRow> limit_convergence(std::span<const DgpSpec> dgps,
                                                 std::span<const std::size_t> n_grid,
                                                 const TestConfig& config, std::size_t replications,
                                                 std::uint64_t seed, unsigned threads,
                                                 const WeightCache* cache) {
    if (dgps.empty() || n_grid.empty()) {
        throw Error(ErrorKind::ConfigError, "convergence study needs non-empty grids");
    }
    std::vector<ConvergenceRow> rows;
    for (std::size_t g = 0; g < dgps.size(); ++g) {
        const MemoryParameter d(dgps[g].memory());
        const WeightedChiSq law(limit_law(d, config.s, config.quadrature_tol, cache).weights);
        for (std::size_t k = 0; k < n_grid.size(); ++k) {
            TestConfig at_n = config;
            at_n.ell = convergence_block_length(config, n_grid[k]);
            at_n.validate();
            std::vector<double> stats(replications);
            parallel_for(replications, threads, [&](std::size_t r) {
                const DgpSpec spec = instantiate(dgps[g], n_grid[k], derive_seed(seed, {g, k, r}));
                stats[r] = q_statistic(generate_values(spec), at_n.ell, at_n.s, d).value;
            });
            rows.push_back(ConvergenceRow{d.value(), n_grid[k], at_n.ell, replications, ks_distance(stats, law)});
        }
    }
    return rows;
}

std::string rejection_csv(const RejectionTable& table) {
    std::ostringstream out;
    out << "label," << table.parameter << ",rejections,replications,rate,std_error\n";
    for (const auto& row : table.rows) {
        out << row.label << ',' << fmt(row.value) << ',' << row.rejections << ',' << row.replications << ','
            << fmt(row.rate) << ',' << fmt(row.std_error) << '\n';
    }
    return out.str();
}

std::string overlay_csv(std::span<const CdfOverlay> overlays) {
    std::ostringstream out;
    out << "d,rank,statistic,empirical_cdf,limit_cdf\n";
    for (const auto& overlay : overlays) {
        const WeightedChiSq law(overlay.weights);
        std::vector<double> sorted = overlay.statistics;
        std::sort(sorted.begin(), sorted.end());
        const double count = static_cast<double>(sorted.size());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            out << fmt(overlay.d) << ',' << (i + 1) << ',' << fmt(sorted[i]) << ','
                << fmt(static_cast<double>(i + 1) / count) << ',' << fmt(wchisq_cdf(law, sorted[i])) << '\n';
        }
    }
    return out.str();
}

std::string overlay_summary_csv(std::span<const CdfOverlay> overlays) {
    std::ostringstream out;
    out << "d,replications,ks_distance,weights\n";
    for (const auto& overlay : overlays) {
        out << fmt(overlay.d) << ',' << overlay.statistics.size() << ',' << fmt(overlay.ks_distance) << ',';
        for (std::size_t i = 0; i < overlay.weights.zeta.size(); ++i) {
            out << (i ? ";" : "") << fmt(overlay.weights.zeta[i]);
        }
        out << '\n';
    }
    return out.str();
}

std::string convergence_csv(std::span<const ConvergenceRow> rows) {
    std::ostringstream out;
    out << "d,n,block_length,replications,ks_distance\n";
    for (const auto& row : rows) {
        out << fmt(row.d) << ',' << row.n << ',' << row.ell << ',' << row.replications << ',' << fmt(row.ks_distance) << '\n';
    }
    return out.str();
}

ExperimentOutputs run_plan(const ExperimentPlan& plan, unsigned threads, const WeightCache* cache) {
    plan.validate();
    ExperimentOutputs outputs;
    for (const auto& point : plan.grid) {
        if (!point.note.empty()) {
            outputs.notes.push_back(point.label + ": " + point.note);
        }
    }
    switch (plan.kind) {
        case ExperimentKind::SizePower: {
            const RejectionTable table = size_power_curve(plan, threads, cache);
            outputs.files.push_back({"rejection.csv", rejection_csv(table)});
            break;
        }
        case ExperimentKind::CdfOverlay: {
            std::vector<CdfOverlay> overlays;
            for (std::size_t g = 0; g < plan.grid.size(); ++g) {
                DgpSpec dgp = plan.grid[g].dgp;
                dgp.n = plan.n;
                overlays.push_back(cdf_overlay(dgp, plan.config, plan.replications, plan.seed, threads, cache, g));
            }
            outputs.files.push_back({"cdf_overlay.csv", overlay_csv(overlays)});
            outputs.files.push_back({"cdf_summary.csv", overlay_summary_csv(overlays)});
            break;
        }
        case ExperimentKind::Convergence: {
            std::vector<DgpSpec> dgps;
            for (const auto& point : plan.grid) {
                dgps.push_back(point.dgp);
            }
            const auto rows = limit_convergence(dgps, plan.n_grid, plan.config, plan.replications,
                                                   plan.seed, threads, cache);
            outputs.files.push_back({"convergence.csv", convergence_csv(rows)});
            break;
        }
    }
    return outputs;
}

void write_outputs(const ExperimentPlan& plan, const ExperimentOutputs& outputs,
                   const std::filesystem::path& dir, double wall_time_ms) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
    }
    json files = json::array();
    for (const auto& file : outputs.files) {
        std::ofstream out(dir / file.name, std::ios::binary);
        if (!out) {
            throw Error(ErrorKind::IoError, "cannot write " + (dir / file.name).string());
        }
        out << file.content;
        files.push_back(file.name);
    }
    const json manifest{{"plan", plan_to_json(plan)},
                        {"version", kVersion},
                        {"wall_time_ms", wall_time_ms},
                        {"outputs", files},
                        {"notes", outputs.notes}};
    std::ofstream out(dir / "manifest.json");
    if (!out) {
        throw Error(ErrorKind::IoError, "cannot write manifest");
    }
    out << manifest.dump(2) << '\n';
}

}  // namespace epochspec
