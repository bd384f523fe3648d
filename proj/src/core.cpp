#include "epochspec/core.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string_view>

#include "epochspec/error.hpp"

namespace epochspec {

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
        throw Error(ErrorKind::InvalidSeries,
                    "series needs at least 2 observations, got " + std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw Error(ErrorKind::InvalidSeries,
                        "non-finite value at position " + std::to_string(i + 1));
        }
    }
}

std::span<const double> TimeSeries::head(std::size_t count) const {
    if (count > values_.size()) {
        throw Error(ErrorKind::InvalidLength, "head longer than series");
    }
    return std::span<const double>(values_).first(count);
}

EpochPartition make_partition(std::size_t n, std::size_t ell) {
    if (ell < 2) {
        throw Error(ErrorKind::InvalidLength, "block length must be >= 2, got " + std::to_string(ell));
    }
    const std::size_t m = n / ell;
    if (m < 2) {
        throw Error(ErrorKind::BlockTooLong, "n=" + std::to_string(n) + " with block length " +
                                                 std::to_string(ell) + " gives fewer than 2 blocks");
    }
    return EpochPartition{ell, m, m * ell};
}

EpochPartition make_partition(const TimeSeries& series, std::size_t ell) {
    return make_partition(series.size(), ell);
}

MemoryParameter::MemoryParameter(double d) : d_(d) {
    if (!(d > -0.5 && d < 1.5)) {
        throw Error(ErrorKind::InvalidMemoryParameter,
                    "memory parameter must lie in (-1/2, 3/2), got " + std::to_string(d));
    }
}

std::string to_string(Regime regime) {
    return regime == Regime::Stationary ? "I(0)" : "I(1)";
}

void TestConfig::validate() const {
    if (s < 1) {
        throw Error(ErrorKind::ConfigError, "s must be >= 1");
    }
    if (ell < 2) {
        throw Error(ErrorKind::ConfigError, "block length must be >= 2");
    }
    if (2 * static_cast<std::size_t>(s) >= ell) {
        throw Error(ErrorKind::ConfigError, "need 2s < block length (s=" + std::to_string(s) +
                                                ", block length=" + std::to_string(ell) + ")");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorKind::ConfigError, "alpha must lie in (0,1)");
    }
    if (!(d_null > -0.5 && d_null < 1.5)) {
        throw Error(ErrorKind::ConfigError, "d_null must lie in (-1/2, 3/2)");
    }
    if (!(quadrature_tol > 0.0 && quadrature_tol < 1.0)) {
        throw Error(ErrorKind::ConfigError, "quadrature tolerance must lie in (0,1)");
    }
    if (mc_fallback_draws < 1000) {
        throw Error(ErrorKind::ConfigError, "mc_fallback_draws must be >= 1000");
    }
}

BlockLengthChoice default_block_length(std::size_t n) {
    if (n >= 500) {
        return {10, false};
    }
    const auto rule = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(n)) / 2.0));
    return {std::max<std::size_t>(10, rule), true};
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view field, double& out) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    if (field.empty()) {
        return false;
    }
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace

TimeSeries read_series(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    bool seen_data_line = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') {
            continue;
        }
        const auto comma = view.find_first_of(",;\t");
        const std::string_view field = comma == std::string_view::npos ? view : view.substr(0, comma);
        double value = 0.0;
        if (!parse_double(field, value)) {
            if (!seen_data_line) {
                seen_data_line = true;  // header
                continue;
            }
            throw Error(ErrorKind::InvalidSeries,
                        "line " + std::to_string(line_no) + ": not a number: '" + std::string(field) + "'");
        }
        seen_data_line = true;
        values.push_back(value);
    }
    if (in.bad()) {
        throw Error(ErrorKind::IoError, "read failure");
    }
    return TimeSeries(std::move(values));
}

TimeSeries read_series_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open " + path.string());
    }
    return read_series(in);
}

}  // namespace epochspec
