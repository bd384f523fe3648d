#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "epochspec/core.hpp"

namespace epochspec {

enum class DgpKind {
    WhiteNoise,
    Farima,            ///< FARIMA(0,d,0), -1/2 < d < 1/2
    Ar1,               ///< X_t = phi X_{t-1} + eps_t, |phi| < 1
    IntegratedFarima,  ///< cumulative sum of FARIMA(0,d_increment,0), memory d_increment + 1
};

enum class DgpMode {
    ExactGaussian,  ///< circulant embedding of the autocovariance
    TruncatedMA,    ///< MA(infinity) filter truncated at ma_truncation lags
};

enum class Innovations { Gaussian, UniformCentered };

[[nodiscard]] std::string to_string(DgpKind kind);
[[nodiscard]] std::string to_string(DgpMode mode);
[[nodiscard]] std::string to_string(Innovations innovations);

struct DgpSpec {
    DgpKind kind = DgpKind::WhiteNoise;
    double d = 0.0;            ///< Farima
    double phi = 0.0;          ///< Ar1
    double d_increment = 0.0;  ///< IntegratedFarima, in [-1/2, 1/2)
    std::size_t n = 0;
    double sigma_eps = 1.0;
    std::uint64_t seed = 0;
    std::size_t ma_truncation = 0;  ///< 0 selects max(10^4, 10 n)
    DgpMode mode = DgpMode::ExactGaussian;
    Innovations innovations = Innovations::Gaussian;

    /// Throws InvalidDgp on out-of-range parameters.
    void validate() const;
    /// Memory parameter of the generated series (0 for white noise and AR(1)).
    [[nodiscard]] double memory() const;
    [[nodiscard]] std::size_t effective_truncation() const;
};

struct DgpMetadata {
    DgpMode mode_used = DgpMode::ExactGaussian;
    std::size_t ma_truncation = 0;  ///< 0 unless the truncated filter was used
    std::size_t burn_in = 0;
    std::vector<std::string> warnings;
};

struct Generated {
    TimeSeries series;
    DgpMetadata metadata;
};

/// MA(infinity) weights of (1-B)^{-d}: a_0 = 1, a_j = a_{j-1} (j-1+d)/j, j = 1..M.
[[nodiscard]] std::vector<double> farima_coefficients(double d, std::size_t truncation);

/// gamma(0..count-1) of FARIMA(0,d,0) with innovation variance sigma^2:
/// gamma(0) = sigma^2 Gamma(1-2d)/Gamma(1-d)^2, gamma(h+1) = gamma(h) (h+d)/(h+1-d).
[[nodiscard]] std::vector<double> farima_autocovariance(double d, std::size_t count,
                                                        double sigma = 1.0);

[[nodiscard]] std::vector<double> generate_values(const DgpSpec& spec, DgpMetadata* metadata = nullptr);
[[nodiscard]] Generated generate_with_metadata(const DgpSpec& spec);
[[nodiscard]] TimeSeries generate(const DgpSpec& spec);

/// Partial sums with the X_0 = 0 convention, and their inverse.
[[nodiscard]] std::vector<double> cumulative_sum(std::span<const double> increments);
[[nodiscard]] std::vector<double> first_difference(std::span<const double> levels);

struct VarianceGrowthRow {
    std::size_t n = 0;
    double variance = 0.0;    ///< sample variance of S_n over the replications
    double normalizer = 0.0;  ///< log n when d_increment = -1/2, else n^{1+2 d_increment}
    double ratio = 0.0;       ///< variance / normalizer
};

/// Var(S_n) of partial sums of Gaussian FARIMA(0,d_increment,0) increments,
/// estimated from `replications` independent paths per n.
[[nodiscard]] std::vector<VarianceGrowthRow> variance_growth_probe(
    double d_increment, std::span<const std::size_t> n_grid, std::size_t replications,
    std::uint64_t seed, unsigned threads = 1);

}  // namespace epochspec
