#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "epochspec/error.hpp"
#include "epochspec/limit_covariance.hpp"
#include "support/oracles.hpp"

using namespace epochspec;

namespace {

constexpr std::size_t kOraclePoints = 10'000'000;

}  // namespace

TEST(OverlapCorrelation, MatchesDirectIntegral) {
    // R(u) = int_0^{1-u} [f(x) g(x+u) + f(x+u) g(x)] dx against tanh-sinh.
    boost::math::quadrature::tanh_sinh<double> ts;
    for (Trig f : {Trig::Cos, Trig::Sin}) {
        for (Trig g : {Trig::Cos, Trig::Sin}) {
            for (int i = 1; i <= 3; ++i) {
                for (int j = 1; j <= 3; ++j) {
                    for (double u : {0.0, 0.13, 0.5, 0.91}) {
                        auto tr = [](Trig t, int k, double x) {
                            const double a = 2.0 * std::numbers::pi * k * x;
                            return t == Trig::Cos ? std::cos(a) : std::sin(a);
                        };
                        const double direct = ts.integrate(
                            [&](double x) { return tr(f, i, x) * tr(g, j, x + u) + tr(f, i, x + u) * tr(g, j, x); },
                            0.0, 1.0 - u);
                        EXPECT_NEAR(overlap_correlation(f, i, g, j, u), direct, 1e-11);
                    }
                }
            }
        }
    }
}

TEST(ATerm, WhiteNoiseValue) {
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            EXPECT_NEAR(a_term(MemoryParameter(0.0), i, j), 1.0, 1e-12);
        }
    }
}

TEST(ATerm, MatchesTanhSinhOracle) {
    boost::math::quadrature::tanh_sinh<double> ts(15);
    const double integral =
        ts.integrate([](double x) { return std::sqrt(x) * 2.0 * std::cos(2.0 * std::numbers::pi * x); }, 0.0, 1.0,
                     1e-12);
    EXPECT_NEAR(a_term(MemoryParameter(0.25), 1, 1), 1.0 - 1.5 * integral, 1e-10);
}

TEST(ATerm, SymmetricAndRegimeChecked) {
    EXPECT_DOUBLE_EQ(a_term(MemoryParameter(-0.3), 1, 3), a_term(MemoryParameter(-0.3), 3, 1));
    EXPECT_THROW((void)a_term(MemoryParameter(0.7), 1, 1), Error);
}

TEST(KernelIntegrals, SymmetricInIndices) {
    for (double d : {-0.3, 0.2, 0.5, 1.1}) {
        const MemoryParameter md(d);
        EXPECT_NEAR(kernel_integral_cos(md, 1, 2, 1e-10), kernel_integral_cos(md, 2, 1, 1e-10), 1e-12);
        EXPECT_NEAR(kernel_integral_sin(md, 1, 3, 1e-10), kernel_integral_sin(md, 3, 1, 1e-10), 1e-12);
    }
}

TEST(KernelIntegrals, MonteCarloOracleAtBoundaryAndRandomWalk) {
    for (double d : {0.5, 1.0, 0.0}) {
        const auto est = oracle::covariance_mc(d, 1, kOraclePoints, 101);
        const MemoryParameter md(d);
        const double c = kernel_integral_cos(md, 1, 1, 1e-8);
        const double s = kernel_integral_sin(md, 1, 1, 1e-8);
        EXPECT_LE(std::abs(c - est.c(1, 1).mean), 3.0 * est.c(1, 1).se) << "d=" << d;
        EXPECT_LE(std::abs(s - est.sn(1, 1).mean), 3.0 * est.sn(1, 1).se) << "d=" << d;
    }
}

TEST(LimitCovariance, WhiteNoiseIsHalfIdentity) {
    const auto cov = build_limit_covariance(MemoryParameter(0.0), 3, 1e-9);
    EXPECT_TRUE(cov.sigma_cos.isApprox(0.5 * Eigen::MatrixXd::Identity(3, 3), 1e-8));
    EXPECT_TRUE(cov.sigma_sin.isApprox(0.5 * Eigen::MatrixXd::Identity(3, 3), 1e-8));
    for (double z : chi_squared_weights(cov).zeta) {
        EXPECT_NEAR(z, 0.5, 1e-8);
    }
}

TEST(LimitCovariance, RandomWalkWeights) {
    // With the |x - y| kernel the weights take the form {s - (2s-1)/4, 1/4, ..., 1/4}.
    const auto w = chi_squared_weights(build_limit_covariance(MemoryParameter(1.0), 2, 1e-10));
    ASSERT_EQ(w.zeta.size(), 4u);
    EXPECT_NEAR(w.zeta[0], 1.25, 1e-7);
    for (std::size_t k = 1; k < 4; ++k) {
        EXPECT_NEAR(w.zeta[k], 0.25, 1e-7);
    }
}

TEST(LimitCovariance, StructureOnReferenceGrid) {
    for (double d : {-0.4, -0.2, 0.0, 0.2, 0.4, 0.5, 0.7, 1.0, 1.2, 1.4}) {
        const auto cov = build_limit_covariance(MemoryParameter(d), 3);
        EXPECT_EQ(cov.sigma().rows(), 6);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov.sigma());
        EXPECT_GT(es.eigenvalues().minCoeff(), 0.0) << d;
        EXPECT_GT(cov.d_diag.minCoeff(), 0.0) << d;
        EXPECT_TRUE(cov.scale_omitted);
        const auto w = chi_squared_weights(cov);
        EXPECT_NEAR(w.sum(), 3.0, 1e-8) << d;
        for (std::size_t k = 0; k + 1 < w.zeta.size(); ++k) {
            EXPECT_GE(w.zeta[k], w.zeta[k + 1]);
        }
        EXPECT_GT(w.zeta.back(), 0.0);
    }
}

TEST(LimitCovariance, SingleFrequencyWeightsAreDiagonalRatios) {
    for (double d : {-0.25, 0.5, 1.3}) {
        const auto cov = build_limit_covariance(MemoryParameter(d), 1);
        const double dd = cov.sigma_cos(0, 0) + cov.sigma_sin(0, 0);
        const auto w = chi_squared_weights(cov);
        const double a = cov.sigma_cos(0, 0) / dd;
        const double b = cov.sigma_sin(0, 0) / dd;
        EXPECT_NEAR(w.zeta[0], std::max(a, b), 1e-12);
        EXPECT_NEAR(w.zeta[1], std::min(a, b), 1e-12);
        EXPECT_NEAR(w.sum(), 1.0, 1e-12);
    }
}

TEST(LimitCovariance, CharacteristicPolynomialOracle) {
    // Each weight solves det(Sigma - zeta D~) = 0. Check with a determinant
    // normalized by the scale of the matrix, and check the trace identity.
    const auto cov = build_limit_covariance(MemoryParameter(0.5), 2, 1e-9);
    const auto w = chi_squared_weights(cov);
    ASSERT_EQ(w.zeta.size(), 4u);
    Eigen::VectorXd dt(4);
    dt << cov.d_diag, cov.d_diag;
    const Eigen::MatrixXd sigma = cov.sigma();
    const double scale = std::abs((sigma).determinant());
    for (double z : w.zeta) {
        const Eigen::MatrixXd pencil = sigma - z * Eigen::MatrixXd(dt.asDiagonal());
        EXPECT_LT(std::abs(pencil.determinant()) / scale, 1e-8) << z;
        // Nearby non-roots give a clearly nonzero determinant.
        const Eigen::MatrixXd off = sigma - (z + 0.01) * Eigen::MatrixXd(dt.asDiagonal());
        EXPECT_GT(std::abs(off.determinant()) / scale, 1e-6);
    }
    EXPECT_NEAR(w.sum(), 2.0, 1e-8);
}

TEST(LimitCovariance, WeightsInvariantUnderScaling) {
    const auto cov = build_limit_covariance(MemoryParameter(0.3), 3);
    const auto base = chi_squared_weights(cov).zeta;
    for (double c : {1e-3, 1.0, 1e3}) {
        const auto scaled = chi_squared_weights(cov.scaled(c)).zeta;
        for (std::size_t k = 0; k < base.size(); ++k) {
            EXPECT_NEAR(scaled[k], base[k], 1e-10);
        }
    }
}

TEST(LimitCovariance, NormalizedEntriesContinuousAtBoundary) {
    // Raw entries of the stationary and integrated regimes differ by a
    // d-dependent factor; entries normalized by D are continuous in d.
    auto normalized = [](double d) {
        const auto cov = build_limit_covariance(MemoryParameter(d), 2, 1e-9);
        Eigen::MatrixXd n(4, 4);
        n.setZero();
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const double norm = std::sqrt(cov.d_diag(i) * cov.d_diag(j));
                n(i, j) = cov.sigma_cos(i, j) / norm;
                n(2 + i, 2 + j) = cov.sigma_sin(i, j) / norm;
            }
        }
        return n;
    };
    const Eigen::MatrixXd at = normalized(0.5);
    EXPECT_LT((normalized(0.5 - 1e-4) - at).cwiseAbs().maxCoeff(), 1e-3);
    EXPECT_LT((normalized(0.5 + 1e-4) - at).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(LimitCovariance, ValidateRejectsIndefiniteInput) {
    auto cov = build_limit_covariance(MemoryParameter(0.5), 2);
    cov.sigma_cos(0, 1) = cov.sigma_cos(1, 0) = 10.0;
    EXPECT_THROW(validate(cov), Error);
    auto asym = build_limit_covariance(MemoryParameter(0.5), 2);
    asym.sigma_sin(0, 1) += 1e-3;
    EXPECT_THROW(validate(asym), Error);
}
