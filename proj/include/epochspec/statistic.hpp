#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "epochspec/core.hpp"

namespace epochspec {

/// Q_{n,m}(s,d) = m^{-2d} sum_{j=1}^s I_n(lambda_j) / ((1/m) sum_h I_{n,h}(lambda'_j)).
struct QStatistic {
    double value = 0.0;
    int s = 0;
    MemoryParameter d{0.5};
    std::size_t m = 0;
    std::size_t ell = 0;
    std::size_t usable_n = 0;
    /// I_n(lambda_j) / block-average periodogram, before the m^{-2d} factor.
    std::vector<double> per_frequency;
};

/// m^{-2d} * sum_j ratios_j, summed in ascending j.
[[nodiscard]] double normalized_sum(std::span<const double> ratios, std::size_t m,
                                    const MemoryParameter& d);

/// Computed on the first m*ell observations. Throws DegenerateDenominator
/// (naming j) when a block-average periodogram is zero, ConfigError when 2s >= ell.
[[nodiscard]] QStatistic q_statistic(const TimeSeries& series, std::size_t ell, int s,
                                     const MemoryParameter& d);
[[nodiscard]] QStatistic q_statistic(std::span<const double> values, std::size_t ell, int s,
                                     const MemoryParameter& d);

}  // namespace epochspec
