#include "epochspec/limit_covariance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>

#include "epochspec/error.hpp"
#include "epochspec/quadrature.hpp"

namespace epochspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double phase_of(Trig t) {
    return t == Trig::Cos ? 0.0 : -0.5 * std::numbers::pi;
}

// int_0^L cos(c x + phi) dx
double cos_integral(double c, double phi, double length) {
    if (c == 0.0) {
        return length * std::cos(phi);
    }
    return (std::sin(c * length + phi) - std::sin(phi)) / c;
}

void check_indices(int i, int j) {
    if (i < 1 || j < 1) {
        throw Error(ErrorKind::ConfigError, "frequency indices must be >= 1");
    }
}

double max_abs(const Eigen::MatrixXd& m) {
    return m.cwiseAbs().maxCoeff();
}

}  // namespace

double Kernel::operator()(double u) const {
    if (kind == Kind::NegLog) {
        return -std::log(u);
    }
    return std::pow(u, exponent);
}

double overlap_correlation(Trig f, int i, Trig g, int j, double u) {
    // f(x) = cos(a x + p), g(y) = cos(b y + q); products expanded into
    // single cosines and integrated over x in [0, 1-u].
    const double a = kTwoPi * i;
    const double b = kTwoPi * j;
    const double p = phase_of(f);
    const double q = phase_of(g);
    const double length = 1.0 - u;
    // f(x) g(x+u)
    const double first = 0.5 * cos_integral(a + b, b * u + p + q, length) +
                         0.5 * cos_integral(a - b, -b * u + p - q, length);
    // f(x+u) g(x)
    const double second = 0.5 * cos_integral(a + b, a * u + p + q, length) +
                          0.5 * cos_integral(a - b, a * u + p - q, length);
    return first + second;
}

double trig_kernel_integral(Trig f, int i, Trig g, int j, const Kernel& kernel, double tol) {
    check_indices(i, j);
    if (kernel.kind == Kernel::Kind::Power && !(kernel.exponent > -1.0)) {
        throw Error(ErrorKind::ConfigError, "kernel exponent must exceed -1");
    }
    const auto integrand = [&](double u) { return kernel(u) * overlap_correlation(f, i, g, j, u); };
    return quadrature::integrate(integrand, 0.0, 1.0, {tol, 0.0, 10'000'000}).value;
}

double a_term(const MemoryParameter& d, int i, int j, double tol) {
    check_indices(i, j);
    const double dv = d.value();
    if (!(dv > -0.5 && dv < 0.5)) {
        throw Error(ErrorKind::RegimeError,
                    "a_term needs -1/2 < d < 1/2, got " + std::to_string(dv));
    }
    // (2d+1) int_0^1 x^{2d} cos(2 pi k x) dx = int_0^1 cos(2 pi k t^{1/(2d+1)}) dt
    const double power = 1.0 / (2.0 * dv + 1.0);
    const auto moment = [&](int k) {
        const auto integrand = [&](double t) { return std::cos(kTwoPi * k * std::pow(t, power)); };
        return quadrature::integrate(integrand, 0.0, 1.0, {tol, 0.0, 10'000'000}).value;
    };
    return 1.0 - (moment(i) + moment(j));
}

namespace {

double entry(const MemoryParameter& d, int i, int j, double tol, Trig block) {
    check_indices(i, j);
    if (!(tol > 0.0)) {
        throw Error(ErrorKind::ConfigError, "tolerance must be positive");
    }
    const double dv = d.value();
    if (d.is_boundary()) {
        return 0.5 * trig_kernel_integral(block, i, block, j, Kernel::neg_log(), tol);
    }
    if (d.regime() == Regime::Integrated) {
        return -0.5 * trig_kernel_integral(block, i, block, j, Kernel::power(2.0 * dv - 1.0), tol);
    }
    // Stationary regime: components are combined with cancellation, so tighten.
    const double inner_tol = tol * 1e-2;
    const Kernel kernel = Kernel::power(2.0 * dv + 1.0);
    const double scale = 2.0 * std::numbers::pi * std::numbers::pi * i * j;
    if (block == Trig::Cos) {
        const double ss = trig_kernel_integral(Trig::Sin, i, Trig::Sin, j, kernel, inner_tol);
        return -(a_term(d, i, j, inner_tol) + scale * ss);
    }
    return -scale * trig_kernel_integral(Trig::Cos, i, Trig::Cos, j, kernel, inner_tol);
}

}  // namespace

double kernel_integral_cos(const MemoryParameter& d, int i, int j, double tol) {
    return entry(d, i, j, tol, Trig::Cos);
}

double kernel_integral_sin(const MemoryParameter& d, int i, int j, double tol) {
    return entry(d, i, j, tol, Trig::Sin);
}

Eigen::MatrixXd LimitCovariance::sigma() const {
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(2 * s, 2 * s);
    full.topLeftCorner(s, s) = sigma_cos;
    full.bottomRightCorner(s, s) = sigma_sin;
    return full;
}

LimitCovariance LimitCovariance::scaled(double c) const {
    if (!(c > 0.0)) {
        throw Error(ErrorKind::ConfigError, "scale must be positive");
    }
    LimitCovariance out = *this;
    out.sigma_cos *= c;
    out.sigma_sin *= c;
    out.d_diag *= c;
    return out;
}

void validate(const LimitCovariance& cov) {
    const auto fail = [&](const std::string& what) {
        throw Error(ErrorKind::NotPositiveDefinite,
                    what + " (d=" + std::to_string(cov.d.value()) + ", s=" + std::to_string(cov.s) + ")");
    };
    if (cov.s < 1 || cov.sigma_cos.rows() != cov.s || cov.sigma_cos.cols() != cov.s ||
        cov.sigma_sin.rows() != cov.s || cov.sigma_sin.cols() != cov.s || cov.d_diag.size() != cov.s) {
        fail("inconsistent dimensions");
    }
    for (const Eigen::MatrixXd* block : {&cov.sigma_cos, &cov.sigma_sin}) {
        if (!block->allFinite()) {
            fail("non-finite entry");
        }
        const double asym = max_abs(*block - block->transpose());
        if (asym > 1e-9 * max_abs(*block)) {
            fail("block not symmetric");
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(*block, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success || !(solver.eigenvalues().minCoeff() > 0.0)) {
            fail("block not positive definite");
        }
    }
    for (int j = 0; j < cov.s; ++j) {
        if (!(cov.d_diag(j) > 0.0)) {
            fail("non-positive normalizer D");
        }
    }
}

LimitCovariance build_limit_covariance(const MemoryParameter& d, int s, double tol) {
    if (s < 1) {
        throw Error(ErrorKind::ConfigError, "s must be >= 1");
    }
    LimitCovariance cov;
    cov.d = d;
    cov.s = s;
    cov.sigma_cos.resize(s, s);
    cov.sigma_sin.resize(s, s);
    for (int i = 1; i <= s; ++i) {
        for (int j = 1; j <= s; ++j) {
            cov.sigma_cos(i - 1, j - 1) = kernel_integral_cos(d, i, j, tol);
            cov.sigma_sin(i - 1, j - 1) = kernel_integral_sin(d, i, j, tol);
        }
    }
    cov.d_diag = cov.sigma_cos.diagonal() + cov.sigma_sin.diagonal();
    validate(cov);
    // Symmetric to roundoff; make it exact.
    cov.sigma_cos = 0.5 * (cov.sigma_cos + cov.sigma_cos.transpose()).eval();
    cov.sigma_sin = 0.5 * (cov.sigma_sin + cov.sigma_sin.transpose()).eval();
    return cov;
}

double ChiSqWeights::sum() const {
    return std::accumulate(zeta.begin(), zeta.end(), 0.0);
}

ChiSqWeights chi_squared_weights(const LimitCovariance& cov) {
    validate(cov);
    const int s = cov.s;
    Eigen::VectorXd inv_sqrt(2 * s);
    for (int j = 0; j < s; ++j) {
        inv_sqrt(j) = inv_sqrt(j + s) = 1.0 / std::sqrt(cov.d_diag(j));
    }
    const Eigen::MatrixXd normalized = inv_sqrt.asDiagonal() * cov.sigma() * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(normalized, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::EigenFailure, "symmetric eigensolver did not converge");
    }
    ChiSqWeights out;
    out.zeta.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + 2 * s);
    std::sort(out.zeta.begin(), out.zeta.end(), std::greater<>());
    if (!(out.zeta.back() > 0.0)) {
        throw Error(ErrorKind::EigenFailure, "non-positive chi-squared weight");
    }
    return out;
}

}  // namespace epochspec
