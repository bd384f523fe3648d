#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "epochspec/core.hpp"

namespace epochspec {

struct PeriodogramOrdinate {
    int j = 0;
    double lambda = 0.0;  ///< 2*pi*j/N
    double value = 0.0;
};

/// Periodogram (1/(2*pi*N)) |sum_t x_t e^{i t lambda_j}|^2 of a raw span at
/// lambda_j = 2*pi*j/N, N = x.size(). Requires 1 <= j < N/2.
/// Angles are reduced exactly as (t*j mod N), so any index offset that is a
/// multiple of N leaves the result unchanged. The sums run over x_t - x_1,
/// which is exact algebra at these frequencies; a constant span yields 0.
[[nodiscard]] PeriodogramOrdinate periodogram(std::span<const double> x, int j);

/// Periodogram of the whole series at lambda_j = 2*pi*j/n.
[[nodiscard]] PeriodogramOrdinate full_periodogram(const TimeSeries& series, int j);

/// Per-block periodograms at lambda'_j = 2*pi*j/ell, ordered by block index.
/// Only the first part.usable_n observations are used.
[[nodiscard]] std::vector<PeriodogramOrdinate> block_periodograms(const TimeSeries& series,
                                                                  const EpochPartition& part,
                                                                  int j);
[[nodiscard]] std::vector<PeriodogramOrdinate> block_periodograms(std::span<const double> x,
                                                                  const EpochPartition& part,
                                                                  int j);

/// Series length at and above which trigonometric sums use compensated summation.
inline constexpr std::size_t kCompensatedSummationThreshold = 100'000;

}  // namespace epochspec
