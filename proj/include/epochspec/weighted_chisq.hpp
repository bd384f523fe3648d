#pragma once

#include <cstddef>
#include <vector>

#include "epochspec/limit_covariance.hpp"
#include "epochspec/rng.hpp"

namespace epochspec {

/// Law of Q = sum_i zeta_i Q_i with Q_i i.i.d. chi-squared(1), zeta_i > 0.
class WeightedChiSq {
public:
    explicit WeightedChiSq(std::vector<double> weights);
    explicit WeightedChiSq(const ChiSqWeights& weights) : WeightedChiSq(weights.zeta) {}

    [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
    [[nodiscard]] double mean() const noexcept;
    [[nodiscard]] double variance() const noexcept;

private:
    std::vector<double> weights_;
};

/// P(Q <= x) by Imhof inversion of the characteristic function
/// prod_k (1 - 2 i zeta_k t)^{-1/2}; absolute error well below 1e-6.
/// Returns 0 for x <= 0. Throws InversionFailure if the integral cannot be
/// brought under control.
[[nodiscard]] double wchisq_cdf(const WeightedChiSq& dist, double x);

/// x with wchisq_cdf(x) = p, 0 < p < 1, found by bracketing from
/// [0, mean + 10 sd] and a TOMS 748 root search; |cdf(x) - p| <= 1e-6.
[[nodiscard]] double wchisq_quantile(const WeightedChiSq& dist, double p);

/// k i.i.d. draws sum_i zeta_i N_i^2, deterministic given the engine state.
[[nodiscard]] std::vector<double> wchisq_sample(const WeightedChiSq& dist, Rng& rng, std::size_t k);

/// Empirical CDF of a sample, used as the fallback when inversion fails.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> sample);
    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] double quantile(double p) const;
    [[nodiscard]] std::size_t size() const noexcept { return sorted_.size(); }

private:
    std::vector<double> sorted_;
};

}  // namespace epochspec
