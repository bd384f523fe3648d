#include "epochspec/statistic.hpp"

#include <cmath>
#include <string>

#include "epochspec/error.hpp"
#include "epochspec/periodogram.hpp"

namespace epochspec {

namespace {
constexpr double kDegenerateRelative = 1e-20;
}  // namespace

double normalized_sum(std::span<const double> ratios, std::size_t m, const MemoryParameter& d) {
    double total = 0.0;
    for (const double r : ratios) {
        total += r;
    }
    return std::pow(static_cast<double>(m), -2.0 * d.value()) * total;
}

QStatistic q_statistic(std::span<const double> values, std::size_t ell, int s,
                       const MemoryParameter& d) {
    if (s < 1) {
        throw Error(ErrorKind::ConfigError, "s must be >= 1");
    }
    if (2 * static_cast<std::size_t>(s) >= ell) {
        throw Error(ErrorKind::ConfigError, "need 2s < block length");
    }
    const EpochPartition part = make_partition(values.size(), ell);
    const std::span<const double> usable = values.first(part.usable_n);

    QStatistic out;
    out.s = s;
    out.d = d;
    out.m = part.m;
    out.ell = part.ell;
    out.usable_n = part.usable_n;
    out.per_frequency.reserve(static_cast<std::size_t>(s));
    // Near-zero block periodograms are judged against the scale of the data
    // around its first value, which transforms like the periodograms under X -> aX + b.
    double mean_square = 0.0;
    for (const double v : usable) {
        mean_square += (v - usable[0]) * (v - usable[0]);
    }
    mean_square /= static_cast<double>(usable.size());
    const double degenerate_below = kDegenerateRelative * mean_square;
    for (int j = 1; j <= s; ++j) {
        const double numerator = periodogram(usable, j).value;
        double block_sum = 0.0;
        for (const auto& ordinate : block_periodograms(usable, part, j)) {
            block_sum += ordinate.value;
        }
        const double denominator = block_sum / static_cast<double>(part.m);
        if (!(denominator > degenerate_below)) {
            throw Error(ErrorKind::DegenerateDenominator,
                        "block-average periodogram is zero at j=" + std::to_string(j));
        }
        out.per_frequency.push_back(numerator / denominator);
    }
    out.value = normalized_sum(out.per_frequency, out.m, d);
    return out;
}

QStatistic q_statistic(const TimeSeries& series, std::size_t ell, int s, const MemoryParameter& d) {
    return q_statistic(series.values(), ell, s, d);
}

}  // namespace epochspec
