#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "epochspec/error.hpp"
#include "epochspec/periodogram.hpp"
#include "support/oracles.hpp"

using namespace epochspec;

TEST(Periodogram, ConstantSeriesIsExactlyZero) {
    const TimeSeries x(std::vector<double>(64, 5.0));
    for (int j = 1; j < 32; ++j) {
        EXPECT_EQ(full_periodogram(x, j).value, 0.0);
    }
}

TEST(Periodogram, CosineAtFirstFrequency) {
    std::vector<double> v;
    for (int t = 1; t <= 8; ++t) {
        v.push_back(std::cos(2.0 * std::numbers::pi * t / 8.0));
    }
    const auto p = full_periodogram(TimeSeries(v), 1);
    EXPECT_NEAR(p.value, 1.0 / std::numbers::pi, 1e-14);
    EXPECT_NEAR(p.lambda, 2.0 * std::numbers::pi / 8.0, 1e-15);
    EXPECT_NEAR(p.value, static_cast<double>(oracle::periodogram(v, 1)), 1e-14);
}

TEST(Periodogram, Impulse) {
    for (std::size_t n : {5u, 16u, 101u}) {
        std::vector<double> v(n, 0.0);
        v[0] = 1.0;
        for (int j = 1; 2 * static_cast<std::size_t>(j) < n; ++j) {
            EXPECT_NEAR(periodogram(v, j).value, 1.0 / (2.0 * std::numbers::pi * n), 1e-15);
        }
    }
}

TEST(Periodogram, MatchesDirectDftOracle) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> z;
    for (std::size_t n : {10u, 37u, 500u, 2048u}) {
        std::vector<double> v(n);
        for (auto& x : v) {
            x = 3.0 + z(rng);
        }
        for (int j : {1, 2, 4}) {
            const double expected = static_cast<double>(oracle::periodogram(v, j));
            EXPECT_NEAR(periodogram(v, j).value, expected, 1e-11 * std::max(1.0, expected)) << n << " " << j;
        }
    }
}

TEST(Periodogram, CompensatedPathOnLongSeries) {
    const std::size_t n = 200'000;
    std::mt19937_64 rng(11);
    std::normal_distribution<double> z;
    std::vector<double> v(n);
    double level = 0.0;
    for (auto& x : v) {
        level += z(rng);
        x = level;
    }
    const double expected = static_cast<double>(oracle::periodogram(v, 3));
    EXPECT_NEAR(periodogram(v, 3).value / expected, 1.0, 1e-11);
}

TEST(Periodogram, FrequencyRange) {
    const std::vector<double> v(10, 1.0);
    EXPECT_THROW((void)periodogram(v, 0), Error);
    EXPECT_THROW((void)periodogram(v, 5), Error);
    EXPECT_NO_THROW((void)periodogram(v, 4));
}

TEST(BlockPeriodograms, IdenticalBlocksGiveEqualOrdinates) {
    std::vector<double> v{0.3, -1.2, 2.5, 0.7, -0.4, 1.1, 0.0, 0.9, -2.0, 0.5};
    v.insert(v.end(), v.begin(), v.end());
    const auto part = make_partition(v.size(), 10);
    const auto ords = block_periodograms(TimeSeries(v), part, 2);
    ASSERT_EQ(ords.size(), 2u);
    EXPECT_EQ(ords[0].value, ords[1].value);
    EXPECT_NEAR(ords[0].lambda, 2.0 * std::numbers::pi * 2 / 10.0, 1e-15);
}

TEST(BlockPeriodograms, GlobalIndexMatchesLocalIndex) {
    // With the global time index t = (h-1) ell + k the phase factor differs by
    // e^{i 2 pi j (h-1)}, which has unit modulus.
    std::mt19937_64 rng(3);
    std::normal_distribution<double> z;
    const std::size_t ell = 12;
    std::vector<double> v(ell * 7 + 5);
    for (auto& x : v) {
        x = z(rng);
    }
    const auto part = make_partition(v.size(), ell);
    EXPECT_EQ(part.usable_n, ell * 7);
    for (int j = 1; j <= 5; ++j) {
        const auto ords = block_periodograms(v, part, j);
        ASSERT_EQ(ords.size(), 7u);
        for (std::size_t h = 0; h < part.m; ++h) {
            std::complex<long double> acc{0.0L, 0.0L};
            for (std::size_t k = 0; k < ell; ++k) {
                const std::size_t t = h * ell + k + 1;
                acc += static_cast<long double>(v[t - 1]) *
                       std::polar(1.0L, 2.0L * std::numbers::pi_v<long double> * j * t / ell);
            }
            const double global = static_cast<double>(std::norm(acc) / (2.0L * std::numbers::pi_v<long double> * ell));
            EXPECT_NEAR(ords[h].value, global, 1e-12 * std::max(1.0, global));
        }
    }
}

TEST(BlockPeriodograms, WhiteNoiseAverageIsSpectralDensity) {
    // E I(lambda) = sigma^2 / (2 pi) for unit white noise; average over 100 runs of m = 200 blocks.
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> z;
    const auto part = make_partition(2000, 10);
    double grand = 0.0;
    for (int run = 0; run < 100; ++run) {
        std::vector<double> v(2000);
        for (auto& x : v) {
            x = z(rng);
        }
        double avg = 0.0;
        for (const auto& o : block_periodograms(v, part, 1)) {
            avg += o.value;
        }
        grand += avg / 200.0;
    }
    EXPECT_NEAR(grand / 100.0, 1.0 / (2.0 * std::numbers::pi), 0.02);
}
