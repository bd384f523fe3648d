#include "epochspec/periodogram.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "epochspec/error.hpp"

namespace epochspec {

namespace {

// Neumaier variant of Kahan summation.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

void check_frequency(int j, std::size_t length) {
    if (j < 1 || 2 * static_cast<std::size_t>(j) >= length) {
        throw Error(ErrorKind::FrequencyOutOfRange,
                    "frequency index j=" + std::to_string(j) + " outside [1, " +
                        std::to_string(length) + "/2)");
    }
}

// Direct trigonometric sum over x with 1-based time index t = 1..N. The
// kernel sums to zero at j != 0 mod N, so subtracting x[0] changes nothing
// mathematically but makes constant input give exactly zero and keeps level
// shifts from leaking roundoff into the sums.
template <typename Accumulator>
double direct_periodogram(std::span<const double> x, int j) {
    const std::size_t length = x.size();
    const double step = 2.0 * std::numbers::pi / static_cast<double>(length);
    const auto jj = static_cast<std::size_t>(j);
    const double reference = x[0];
    Accumulator re;
    Accumulator im;
    for (std::size_t t = 1; t <= length; ++t) {
        const double angle = step * static_cast<double>((t * jj) % length);
        const double centered = x[t - 1] - reference;
        re.add(centered * std::cos(angle));
        im.add(centered * std::sin(angle));
    }
    const double c = re.value();
    const double s = im.value();
    return (c * c + s * s) / (2.0 * std::numbers::pi * static_cast<double>(length));
}

struct PlainSum {
    void add(double v) noexcept { sum += v; }
    [[nodiscard]] double value() const noexcept { return sum; }
    double sum = 0.0;
};

}  // namespace

PeriodogramOrdinate periodogram(std::span<const double> x, int j) {
    check_frequency(j, x.size());
    const double value = x.size() >= kCompensatedSummationThreshold
                             ? direct_periodogram<CompensatedSum>(x, j)
                             : direct_periodogram<PlainSum>(x, j);
    return {j, 2.0 * std::numbers::pi * j / static_cast<double>(x.size()), value};
}

PeriodogramOrdinate full_periodogram(const TimeSeries& series, int j) {
    return periodogram(series.values(), j);
}

std::vector<PeriodogramOrdinate> block_periodograms(std::span<const double> x,
                                                    const EpochPartition& part, int j) {
    check_frequency(j, part.ell);
    if (x.size() < part.usable_n) {
        throw Error(ErrorKind::InvalidLength, "partition longer than series");
    }
    std::vector<PeriodogramOrdinate> out;
    out.reserve(part.m);
    for (std::size_t h = 0; h < part.m; ++h) {
        out.push_back(periodogram(x.subspan(part.block_offset(h), part.ell), j));
    }
    return out;
}

std::vector<PeriodogramOrdinate> block_periodograms(const TimeSeries& series,
                                                    const EpochPartition& part, int j) {
    return block_periodograms(series.values(), part, j);
}

}  // namespace epochspec
