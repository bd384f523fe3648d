#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "epochspec/core.hpp"
#include "epochspec/dgp.hpp"
#include "epochspec/limit_covariance.hpp"
#include "epochspec/weight_cache.hpp"
#include "epochspec/weighted_chisq.hpp"

namespace epochspec {

// Seed contract: replicate r of grid point g draws from
// derive_seed(master, {g, r}) (and {g, k, r} for the k-th sample size of a
// convergence plan), so results never depend on the worker count.

struct GridPoint {
    std::string label;
    double value = 0.0;  ///< parameter value reported in the table (d or phi)
    DgpSpec dgp;         ///< template; n and seed are filled per replicate
    std::string note;    ///< how the point was realized, when not literal
};

enum class ExperimentKind { SizePower, CdfOverlay, Convergence };

[[nodiscard]] std::string to_string(ExperimentKind kind);

struct ExperimentPlan {
    std::string name;
    ExperimentKind kind = ExperimentKind::SizePower;
    std::string parameter = "d";
    std::vector<GridPoint> grid;
    TestConfig config;
    std::size_t n = 2000;
    std::vector<std::size_t> n_grid;  ///< Convergence only
    std::size_t replications = 3000;
    std::uint64_t seed = 0;

    /// R >= 100, non-empty grid, valid config, n_grid present for Convergence.
    /// config.ell == 0 ("block_length_rule": "sqrt") is accepted for Convergence only.
    void validate() const;
};

/// Grid entries: {"label"?, "kind": "farima"|"ar1"|"integrated"|"whitenoise",
/// "d"|"phi"|"d_increment", "sigma"?, "mode"?, "innovations"?}. A farima entry
/// with d >= 1/2 is realized as the cumulative sum of FARIMA(0, d-1, 0); an
/// ar1 entry with phi = 1 as a Gaussian random walk. Both are noted.
[[nodiscard]] GridPoint grid_point_from_json(const nlohmann::json& entry, const std::string& parameter);
[[nodiscard]] ExperimentPlan plan_from_json(const nlohmann::json& doc);
[[nodiscard]] nlohmann::json plan_to_json(const ExperimentPlan& plan);
[[nodiscard]] ExperimentPlan load_plan(const std::filesystem::path& path);

struct RejectionRow {
    std::string label;
    double value = 0.0;
    std::size_t rejections = 0;
    std::size_t replications = 0;
    double rate = 0.0;
    double std_error = 0.0;  ///< sqrt(rate (1 - rate) / R)
};

struct RejectionTable {
    std::string parameter;
    std::vector<RejectionRow> rows;
    std::vector<std::string> notes;
};

/// Rejection frequency of the epoch-periodogram test at every grid point.
[[nodiscard]] RejectionTable size_power_curve(const ExperimentPlan& plan, unsigned threads = 1,
                                              const WeightCache* cache = nullptr);

/// Largest (rate[k+1] - rate[k]) / sqrt(se[k]^2 + se[k+1]^2) over adjacent rows;
/// <= 2 means the curve is nonincreasing within two pooled standard errors.
[[nodiscard]] double max_adjacent_increase_in_se(const RejectionTable& table);

/// One-sample Kolmogorov-Smirnov distance between a sample and the inversion CDF.
[[nodiscard]] double ks_distance(std::span<const double> sample, const WeightedChiSq& law);

struct CdfOverlay {
    double d = 0.0;
    std::vector<double> statistics;  ///< Q_{n,m}(s,d) per replicate, in replicate order
    ChiSqWeights weights;
    double ks_distance = 0.0;
};

/// Replicated Q_{n,m}(s,d), normalized with the generator's own memory
/// parameter d, next to the limit weights of Q(s,d).
[[nodiscard]] CdfOverlay cdf_overlay(const DgpSpec& dgp, const TestConfig& config,
                                     std::size_t replications, std::uint64_t seed,
                                     unsigned threads = 1, const WeightCache* cache = nullptr,
                                     std::uint64_t grid_index = 0);

struct ConvergenceRow {
    double d = 0.0;
    std::size_t n = 0;
    std::size_t ell = 0;
    std::size_t replications = 0;
    double ks_distance = 0.0;
};

/// Block length used at sample size n: config.ell, or round(sqrt(n)) when
/// config.ell == 0 so that both m and ell grow with n.
[[nodiscard]] std::size_t convergence_block_length(const TestConfig& config, std::size_t n);

[[nodiscard]] std::vector<ConvergenceRow> limit_convergence(std::span<const DgpSpec> dgps,
                                                               std::span<const std::size_t> n_grid,
                                                               const TestConfig& config,
                                                               std::size_t replications,
                                                               std::uint64_t seed, unsigned threads = 1,
                                                               const WeightCache* cache = nullptr);

[[nodiscard]] std::string rejection_csv(const RejectionTable& table);
[[nodiscard]] std::string overlay_csv(std::span<const CdfOverlay> overlays);
[[nodiscard]] std::string overlay_summary_csv(std::span<const CdfOverlay> overlays);
[[nodiscard]] std::string convergence_csv(std::span<const ConvergenceRow> rows);

struct OutputFile {
    std::string name;
    std::string content;
};

struct ExperimentOutputs {
    std::vector<OutputFile> files;  ///< CSV tables, deterministic given the plan
    std::vector<std::string> notes;
};

[[nodiscard]] ExperimentOutputs run_plan(const ExperimentPlan& plan, unsigned threads = 1,
                                         const WeightCache* cache = nullptr);

/// Writes every CSV plus manifest.json (plan echo, version, wall time) into `dir`.
void write_outputs(const ExperimentPlan& plan, const ExperimentOutputs& outputs,
                   const std::filesystem::path& dir, double wall_time_ms);

}  // namespace epochspec
