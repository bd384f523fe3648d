#pragma once

#include <vector>

#include <Eigen/Dense>

#include "epochspec/core.hpp"

namespace epochspec {

enum class Trig { Cos, Sin };

/// Kernel K(|x - y|) of the limit covariance double integrals.
struct Kernel {
    enum class Kind { NegLog, Power } kind = Kind::NegLog;
    double exponent = 0.0;  ///< used by Power: |x-y|^exponent, exponent > -1

    static Kernel neg_log() { return {Kind::NegLog, 0.0}; }
    static Kernel power(double exponent) { return {Kind::Power, exponent}; }
    [[nodiscard]] double operator()(double u) const;
};

/// R(u) = int_0^{1-u} [f(x) g(x+u) + f(x+u) g(x)] dx with f = trig(2*pi*i x),
/// g = trig(2*pi*j y), in closed form. For any kernel,
/// int int_{[0,1]^2} f(x) g(y) K(|x-y|) dx dy = int_0^1 K(u) R(u) du.
[[nodiscard]] double overlap_correlation(Trig f, int i, Trig g, int j, double u);

/// int int_{[0,1]^2} f(2 pi i x) g(2 pi j y) K(|x-y|) dx dy via the 1D reduction
/// and adaptive quadrature at relative tolerance tol.
[[nodiscard]] double trig_kernel_integral(Trig f, int i, Trig g, int j, const Kernel& kernel,
                                          double tol);

/// a_ij(d) = 1 - (2d+1) int_0^1 x^{2d} (cos(2 pi i x) + cos(2 pi j x)) dx, -1/2 < d < 1/2.
[[nodiscard]] double a_term(const MemoryParameter& d, int i, int j, double tol = 1e-12);

/// Sigma^(c)_ij(d) with the common scale factor set to one, signed so the
/// matrix is positive definite:
///   d = 1/2:        (1/2) int int cos cos (-log|x-y|)
///   1/2 < d < 3/2: -(1/2) int int cos cos |x-y|^{2d-1}
///   d < 1/2:       -[a_ij(d) + 2 pi^2 i j int int sin sin |x-y|^{2d+1}]
[[nodiscard]] double kernel_integral_cos(const MemoryParameter& d, int i, int j, double tol);

/// Sigma^(s)_ij(d), same conventions:
///   d = 1/2:        (1/2) int int sin sin (-log|x-y|)
///   1/2 < d < 3/2: -(1/2) int int sin sin |x-y|^{2d-1}
///   d < 1/2:       -2 pi^2 i j int int cos cos |x-y|^{2d+1}
[[nodiscard]] double kernel_integral_sin(const MemoryParameter& d, int i, int j, double tol);

struct LimitCovariance {
    MemoryParameter d{0.5};
    int s = 0;
    Eigen::MatrixXd sigma_cos;
    Eigen::MatrixXd sigma_sin;
    Eigen::VectorXd d_diag;  ///< D_jj = sigma_cos(j,j) + sigma_sin(j,j)
    /// The overall scale factor shared by every entry is not evaluated (set to 1).
    /// It cancels in Sigma D^{-1}, so the chi-squared weights do not depend on it.
    bool scale_omitted = true;

    /// Full 2s x 2s block-diagonal Sigma(d).
    [[nodiscard]] Eigen::MatrixXd sigma() const;
    /// Both blocks (and hence D) multiplied by c > 0.
    [[nodiscard]] LimitCovariance scaled(double c) const;
};

/// Assemble Sigma(d) for frequencies 1..s and check symmetry, positive
/// definiteness and D > 0; throws NotPositiveDefinite otherwise.
[[nodiscard]] LimitCovariance build_limit_covariance(const MemoryParameter& d, int s,
                                                     double tol = 1e-6);

/// Throws NotPositiveDefinite if any structural invariant of `cov` fails.
void validate(const LimitCovariance& cov);

struct ChiSqWeights {
    std::vector<double> zeta;  ///< 2s positive weights, descending

    [[nodiscard]] double sum() const;
};

/// Eigenvalues of D~^{-1/2} Sigma(d) D~^{-1/2}, D~ = diag(D, D); these are the
/// eigenvalues of Sigma(d) D~^{-1}. Sorted descending.
[[nodiscard]] ChiSqWeights chi_squared_weights(const LimitCovariance& cov);

}  // namespace epochspec
