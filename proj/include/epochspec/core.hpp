#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace epochspec {

/// Ordered sample X_1..X_n of finite reals, n >= 2. Immutable once built.
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> values);

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// First `count` observations, used when the tail does not fill a whole block.
    [[nodiscard]] std::span<const double> head(std::size_t count) const;

private:
    std::vector<double> values_;
};

/// m consecutive blocks of length ell covering indices 1..m*ell; the tail
/// n mod ell points are excluded.
struct EpochPartition {
    std::size_t ell = 0;
    std::size_t m = 0;
    std::size_t usable_n = 0;

    /// Zero-based offset of block h (zero-based).
    [[nodiscard]] std::size_t block_offset(std::size_t h) const noexcept { return h * ell; }
};

[[nodiscard]] EpochPartition make_partition(std::size_t n, std::size_t ell);
[[nodiscard]] EpochPartition make_partition(const TimeSeries& series, std::size_t ell);

enum class Regime { Stationary, Integrated };

/// Memory parameter d in (-1/2, 3/2); d >= 1/2 is I(1).
class MemoryParameter {
public:
    explicit MemoryParameter(double d);

    [[nodiscard]] double value() const noexcept { return d_; }
    [[nodiscard]] Regime regime() const noexcept {
        return d_ < 0.5 ? Regime::Stationary : Regime::Integrated;
    }
    [[nodiscard]] bool is_boundary() const noexcept { return d_ == 0.5; }

private:
    double d_;
};

[[nodiscard]] std::string to_string(Regime regime);

struct TestConfig {
    int s = 2;
    double alpha = 0.05;
    std::size_t ell = 10;
    double d_null = 0.5;
    double quadrature_tol = 1e-6;
    std::size_t mc_fallback_draws = 1'000'000;

    /// Throws Error(ConfigError) when a field is out of range or 2s >= ell.
    void validate() const;
};

/// Block length used when the caller does not fix one: 10 for n >= 500,
/// otherwise max(10, round(sqrt(n)/2)). The second branch is a heuristic.
struct BlockLengthChoice {
    std::size_t ell;
    bool heuristic;
};
[[nodiscard]] BlockLengthChoice default_block_length(std::size_t n);

// Series ingestion: one value per line, '#' comment lines skipped, an optional
// non-numeric first line is taken as a header. For CSV rows the first field is used.
[[nodiscard]] TimeSeries read_series(std::istream& in);
[[nodiscard]] TimeSeries read_series_file(const std::filesystem::path& path);

}  // namespace epochspec
