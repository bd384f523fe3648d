#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "epochspec/dgp.hpp"
#include "epochspec/error.hpp"

using namespace epochspec;

namespace {

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

std::vector<double> sample_acf(const std::vector<double>& v, std::size_t max_lag) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    std::vector<double> acf(max_lag + 1, 0.0);
    for (std::size_t h = 0; h <= max_lag; ++h) {
        for (std::size_t t = 0; t + h < v.size(); ++t) {
            acf[h] += (v[t] - mean) * (v[t + h] - mean);
        }
        acf[h] /= n;
    }
    return acf;
}

DgpSpec farima(double d, std::size_t n, std::uint64_t seed, DgpMode mode = DgpMode::ExactGaussian) {
    DgpSpec spec;
    spec.kind = DgpKind::Farima;
    spec.d = d;
    spec.n = n;
    spec.seed = seed;
    spec.mode = mode;
    return spec;
}

}  // namespace

TEST(FarimaCoefficients, Recursion) {
    for (double d : {-0.4, 0.1, 0.3}) {
        const auto a = farima_coefficients(d, 5);
        EXPECT_DOUBLE_EQ(a[0], 1.0);
        EXPECT_DOUBLE_EQ(a[1], d);
        EXPECT_NEAR(a[2], d * (d + 1.0) / 2.0, 1e-15);
    }
    const auto zero = farima_coefficients(0.0, 10);
    for (std::size_t j = 1; j < zero.size(); ++j) {
        EXPECT_EQ(zero[j], 0.0);
    }
}

TEST(FarimaCoefficients, HyperbolicDecay) {
    const auto a = farima_coefficients(0.3, 10'000);
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t j = 1000; j <= 10'000; j += 100) {
        lx.push_back(std::log(static_cast<double>(j)));
        ly.push_back(std::log(a[j]));
    }
    EXPECT_NEAR(slope(lx, ly), -0.7, 0.02);
}

TEST(FarimaAutocovariance, ClosedForms) {
    const auto g = farima_autocovariance(0.3, 3, 2.0);
    EXPECT_NEAR(g[0], 4.0 * std::tgamma(0.4) / std::pow(std::tgamma(0.7), 2), 1e-12);
    EXPECT_NEAR(g[1] / g[0], 0.3 / 0.7, 1e-14);
    const auto w = farima_autocovariance(0.0, 4);
    EXPECT_DOUBLE_EQ(w[0], 1.0);
    EXPECT_DOUBLE_EQ(w[2], 0.0);
}

TEST(Generate, WhiteNoiseMoments) {
    DgpSpec spec;
    spec.n = 1'000'000;
    spec.seed = 12;
    const auto v = generate_values(spec);
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double var = 0.0;
    for (double x : v) {
        var += (x - mean) * (x - mean);
    }
    var /= v.size() - 1;
    EXPECT_NEAR(mean, 0.0, 0.004);
    EXPECT_NEAR(var, 1.0, 0.01);
}

TEST(Generate, UniformInnovationsHaveRequestedVariance) {
    DgpSpec spec;
    spec.n = 400'000;
    spec.seed = 2;
    spec.sigma_eps = 2.0;
    spec.innovations = Innovations::UniformCentered;
    const auto v = generate_values(spec);
    double ss = 0.0;
    for (double x : v) {
        ss += x * x;
        EXPECT_LE(std::abs(x), 2.0 * std::sqrt(3.0) + 1e-12);
    }
    EXPECT_NEAR(ss / v.size(), 4.0, 0.05);
}

TEST(Generate, FarimaAutocorrelationSlope) {
    const auto v = generate_values(farima(0.3, 100'000, 31));
    const auto acf = sample_acf(v, 200);
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t h = 10; h <= 200; ++h) {
        lx.push_back(std::log(static_cast<double>(h)));
        ly.push_back(std::log(acf[h]));
    }
    EXPECT_NEAR(slope(lx, ly), -0.4, 0.1);
}

TEST(Generate, ExactAndTruncatedAgreeWithTheory) {
    const auto theory = farima_autocovariance(0.2, 4);
    for (DgpMode mode : {DgpMode::ExactGaussian, DgpMode::TruncatedMA}) {
        std::vector<double> avg(4, 0.0);
        const int reps = 40;
        for (int r = 0; r < reps; ++r) {
            DgpSpec spec = farima(0.2, 5000, 100 + r, mode);
            spec.ma_truncation = 20'000;
            const auto acf = sample_acf(generate_values(spec), 3);
            for (std::size_t h = 0; h < 4; ++h) {
                avg[h] += acf[h] / reps;
            }
        }
        for (std::size_t h = 0; h < 4; ++h) {
            EXPECT_NEAR(avg[h], theory[h], 0.04) << to_string(mode) << " lag " << h;
        }
    }
}

TEST(Generate, Metadata) {
    auto g = generate_with_metadata(farima(0.3, 500, 1, DgpMode::TruncatedMA));
    EXPECT_EQ(g.metadata.mode_used, DgpMode::TruncatedMA);
    EXPECT_EQ(g.metadata.ma_truncation, 10'000u);
    g = generate_with_metadata(farima(-0.5 + 1e-9, 4096, 1));
    EXPECT_EQ(g.metadata.mode_used, DgpMode::ExactGaussian);
    EXPECT_TRUE(g.metadata.warnings.empty());
}

TEST(Generate, Ar1WithZeroCoefficientIsWhiteNoise) {
    DgpSpec wn;
    wn.n = 500;
    wn.seed = 7;
    DgpSpec ar = wn;
    ar.kind = DgpKind::Ar1;
    ar.phi = 0.0;
    EXPECT_EQ(generate_values(ar), generate_values(wn));
}

TEST(Generate, Ar1Autocorrelation) {
    DgpSpec ar;
    ar.kind = DgpKind::Ar1;
    ar.phi = 0.6;
    ar.n = 200'000;
    ar.seed = 8;
    const auto acf = sample_acf(generate_values(ar), 2);
    EXPECT_NEAR(acf[0], 1.0 / (1.0 - 0.36), 0.03);
    EXPECT_NEAR(acf[1] / acf[0], 0.6, 0.01);
}

TEST(Generate, IntegratedIsCumulativeSum) {
    DgpSpec inc = farima(0.2, 1000, 5);
    DgpSpec lev = inc;
    lev.kind = DgpKind::IntegratedFarima;
    lev.d_increment = 0.2;
    const auto x = generate_values(lev);
    EXPECT_EQ(x, cumulative_sum(generate_values(inc)));
    const auto back = first_difference(x);
    const auto y = generate_values(inc);
    for (std::size_t t = 0; t < y.size(); ++t) {
        EXPECT_NEAR(back[t], y[t], 1e-9 * (1.0 + std::abs(x[t])));
    }
    EXPECT_DOUBLE_EQ(lev.memory(), 1.2);
}

TEST(Generate, Deterministic) {
    EXPECT_EQ(generate_values(farima(0.3, 2000, 7)), generate_values(farima(0.3, 2000, 7)));
    EXPECT_NE(generate_values(farima(0.3, 2000, 7)), generate_values(farima(0.3, 2000, 8)));
}

TEST(Generate, Validation) {
    EXPECT_THROW((void)generate_values(farima(0.5, 100, 1)), Error);
    EXPECT_THROW((void)generate_values(farima(0.6, 100, 1)), Error);
    DgpSpec ar;
    ar.kind = DgpKind::Ar1;
    ar.phi = 1.0;
    ar.n = 100;
    EXPECT_THROW((void)generate_values(ar), Error);
    DgpSpec uni = farima(0.2, 100, 1);
    uni.innovations = Innovations::UniformCentered;
    EXPECT_THROW((void)generate_values(uni), Error);
    uni.mode = DgpMode::TruncatedMA;
    EXPECT_NO_THROW((void)generate_values(uni));
    DgpSpec tiny;
    tiny.n = 1;
    EXPECT_THROW((void)generate_values(tiny), Error);
}

TEST(VarianceGrowth, RandomWalkIsLinear) {
    const std::vector<std::size_t> grid{1000, 10'000};
    const auto rows = variance_growth_probe(0.0, grid, 2000, 3);
    for (const auto& r : rows) {
        EXPECT_NEAR(r.ratio, 1.0, 0.1) << r.n;
    }
}

TEST(VarianceGrowth, LongMemoryPlateau) {
    const std::vector<std::size_t> grid{1000, 10'000};
    const auto rows = variance_growth_probe(0.3, grid, 1000, 4);
    const double ratio = rows[1].ratio / rows[0].ratio;
    EXPECT_GE(ratio, 0.7);
    EXPECT_LE(ratio, 1.4);
}

TEST(VarianceGrowth, BoundaryIsLogarithmic) {
    const std::vector<std::size_t> grid{1000, 10'000};
    const auto rows = variance_growth_probe(-0.5, grid, 1000, 6);
    EXPECT_NEAR(rows[0].normalizer, std::log(1000.0), 1e-12);
    const double ratio = rows[1].ratio / rows[0].ratio;
    EXPECT_GE(ratio, 0.8);
    EXPECT_LE(ratio, 1.25);
}
