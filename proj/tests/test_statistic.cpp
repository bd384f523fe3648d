#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "epochspec/dgp.hpp"
#include "epochspec/error.hpp"
#include "epochspec/rng.hpp"
#include "epochspec/statistic.hpp"
#include "support/oracles.hpp"

using namespace epochspec;

namespace {

std::vector<double> gaussian(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::vector<double> v(n);
    for (auto& x : v) {
        x = z(rng);
    }
    return v;
}

}  // namespace

TEST(QStatistic, MatchesOracle) {
    for (std::size_t n : {203u, 1000u}) {
        for (double d : {0.0, 0.5, 1.0}) {
            const auto x = gaussian(n, n);
            const auto q = q_statistic(x, 10, 2, MemoryParameter(d));
            EXPECT_NEAR(q.value, static_cast<double>(oracle::q_statistic(x, 10, 2, d)), 1e-10 * q.value);
            EXPECT_EQ(q.m, n / 10);
            EXPECT_EQ(q.usable_n, (n / 10) * 10);
            ASSERT_EQ(q.per_frequency.size(), 2u);
            EXPECT_NEAR(q.value, normalized_sum(q.per_frequency, q.m, MemoryParameter(d)), 1e-15 * q.value);
            EXPECT_GE(q.value, 0.0);
        }
    }
}

TEST(QStatistic, TailBeyondLastBlockIsIgnored) {
    auto x = gaussian(205, 1);
    const double base = q_statistic(x, 10, 2, MemoryParameter(0.5)).value;
    for (std::size_t k = 200; k < 205; ++k) {
        x[k] = 1e6;
    }
    EXPECT_EQ(q_statistic(x, 10, 2, MemoryParameter(0.5)).value, base);
}

TEST(QStatistic, LocationAndScaleInvariance) {
    const auto x = gaussian(500, 4);
    const double base = q_statistic(x, 10, 3, MemoryParameter(0.5)).value;
    for (double a : {-3.0, 0.01, 250.0}) {
        for (double b : {-40.0, 0.0, 7.5}) {
            std::vector<double> y(x.size());
            for (std::size_t t = 0; t < x.size(); ++t) {
                y[t] = a * x[t] + b;
            }
            EXPECT_NEAR(q_statistic(y, 10, 3, MemoryParameter(0.5)).value, base, 1e-9 * base);
        }
    }
}

TEST(QStatistic, WhiteNoiseMeanIsS) {
    // E Q(s, 0) = s by the trace identity.
    double mean = 0.0;
    const int reps = 3000;
    for (int r = 0; r < reps; ++r) {
        mean += q_statistic(gaussian(2000, derive_seed(99, {static_cast<std::uint64_t>(r)})), 10, 2,
                            MemoryParameter(0.0))
                    .value;
    }
    EXPECT_NEAR(mean / reps, 2.0, 0.1);
}

TEST(QStatistic, Errors) {
    const auto x = gaussian(100, 2);
    EXPECT_THROW((void)q_statistic(x, 10, 5, MemoryParameter(0.5)), Error);
    EXPECT_THROW((void)q_statistic(x, 10, 0, MemoryParameter(0.5)), Error);
    EXPECT_THROW((void)q_statistic(std::span<const double>(x).first(15), 10, 2, MemoryParameter(0.5)), Error);
    const std::vector<double> flat(100, 3.0);
    try {
        (void)q_statistic(flat, 10, 2, MemoryParameter(0.5));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateDenominator);
        EXPECT_NE(std::string(e.what()).find("j=1"), std::string::npos);
    }
    // Blocks that are individually constant but at different levels.
    std::vector<double> steps(100);
    for (std::size_t t = 0; t < steps.size(); ++t) {
        steps[t] = static_cast<double>(t / 10);
    }
    EXPECT_THROW((void)q_statistic(steps, 10, 2, MemoryParameter(0.5)), Error);
}
