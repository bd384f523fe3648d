#include "epochspec/weighted_chisq.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "epochspec/error.hpp"
#include "epochspec/quadrature.hpp"

namespace epochspec {

WeightedChiSq::WeightedChiSq(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw Error(ErrorKind::ConfigError, "weighted chi-squared needs at least one weight");
    }
    for (const double w : weights_) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw Error(ErrorKind::ConfigError, "weights must be positive and finite");
        }
    }
}

double WeightedChiSq::mean() const noexcept {
    return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

double WeightedChiSq::variance() const noexcept {
    double v = 0.0;
    for (const double w : weights_) {
        v += 2.0 * w * w;
    }
    return v;
}

namespace {

constexpr int kMaxTailPanels = 80;
constexpr double kPanelAbsTol = 1e-13;

// Imhof integrand sin(theta(u)) / (u rho(u)).
struct ImhofIntegrand {
    const std::vector<double>& weights;
    double x;

    double operator()(double u) const {
        double theta = -0.5 * x * u;
        double log_rho = 0.0;
        for (const double w : weights) {
            const double wu = w * u;
            theta += 0.5 * std::atan(wu);
            log_rho += 0.25 * std::log1p(wu * wu);
        }
        return std::sin(theta) / (u * std::exp(log_rho));
    }
};

// Wynn epsilon extrapolation of the limit of a sequence of partial sums.
double wynn_epsilon(const std::vector<double>& partial) {
    const std::size_t n = partial.size();
    if (n < 3) {
        return partial.back();
    }
    // eps[k] holds column k of the table for the current diagonal sweep.
    std::vector<std::vector<double>> table(n + 1, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        table[1][i] = partial[i];
    }
    double best = partial.back();
    for (std::size_t col = 2; col <= n; ++col) {
        const std::size_t rows = n - col + 1;
        for (std::size_t i = 0; i < rows; ++i) {
            const double diff = table[col - 1][i + 1] - table[col - 1][i];
            if (diff == 0.0) {
                return col % 2 == 0 ? table[col - 1][i + 1] : best;
            }
            table[col][i] = table[col - 2][i + 1] + 1.0 / diff;
        }
        if (col % 2 == 1 && rows > 0) {
            best = table[col][rows - 1];
        }
    }
    return best;
}

double imhof_integral(const std::vector<double>& weights, double x) {
    const ImhofIntegrand f{weights, x};
    const double min_weight = *std::min_element(weights.begin(), weights.end());
    const double half_period = 2.0 * std::numbers::pi / x;
    // Beyond u0 the phase is linear in u up to O(1/u) and the amplitude decays monotonically.
    const double head_panels = std::ceil(std::max(1.0, 20.0 / (min_weight * half_period)));
    const double u0 = head_panels * half_period;
    const quadrature::Options opts{1e-10, kPanelAbsTol, 2'000'000};

    double head = 0.0;
    for (double k = 0; k < head_panels; k += 1.0) {
        head += quadrature::integrate(f, k * half_period, (k + 1.0) * half_period, opts).value;
    }

    // Tail: panels one half-period long alternate in sign; accelerate with Wynn epsilon.
    std::vector<double> partial;
    double running = 0.0;
    double previous_estimate = 0.0;
    double log_weight_prod = 0.0;
    for (const double w : weights) {
        log_weight_prod += std::log(w);
    }
    const double k_half = 0.5 * static_cast<double>(weights.size());
    for (int k = 0; k < kMaxTailPanels; ++k) {
        const double a = u0 + k * half_period;
        running += quadrature::integrate(f, a, a + half_period, opts).value;
        partial.push_back(running);
        // Crude bound on what is left: int_U^inf du / (u^{1+k/2} prod sqrt(w)).
        const double b = a + half_period;
        const double remainder_bound = std::exp(-k_half * std::log(b) - 0.5 * log_weight_prod) / k_half;
        if (remainder_bound < 1e-12) {
            return head + running;
        }
        const double estimate = wynn_epsilon(partial);
        if (k >= 6 && std::abs(estimate - previous_estimate) < 1e-12) {
            return head + estimate;
        }
        previous_estimate = estimate;
    }
    if (std::abs(wynn_epsilon(partial) - previous_estimate) < 1e-9) {
        return head + previous_estimate;
    }
    throw Error(ErrorKind::InversionFailure,
                "tail of the Imhof integral did not settle at x=" + std::to_string(x));
}

}  // namespace

double wchisq_cdf(const WeightedChiSq& dist, double x) {
    if (std::isnan(x)) {
        throw Error(ErrorKind::InversionFailure, "cdf evaluated at NaN");
    }
    if (x <= 0.0) {
        return 0.0;
    }
    if (std::isinf(x)) {
        return 1.0;
    }
    const double value = 0.5 - imhof_integral(dist.weights(), x) / std::numbers::pi;
    if (!std::isfinite(value) || value < -1e-7 || value > 1.0 + 1e-7) {
        throw Error(ErrorKind::InversionFailure,
                    "Imhof inversion produced " + std::to_string(value) + " at x=" + std::to_string(x));
    }
    return std::clamp(value, 0.0, 1.0);
}

double wchisq_quantile(const WeightedChiSq& dist, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorKind::ConfigError, "quantile level must lie in (0,1)");
    }
    const auto objective = [&](double x) { return wchisq_cdf(dist, x) - p; };
    double lo = 0.0;
    double hi = dist.mean() + 10.0 * std::sqrt(dist.variance());
    double f_lo = -p;
    double f_hi = objective(hi);
    for (int expand = 0; f_hi < 0.0; ++expand) {
        if (expand > 60) {
            throw Error(ErrorKind::InversionFailure, "could not bracket quantile");
        }
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        f_hi = objective(hi);
    }
    if (f_hi == 0.0) {
        return hi;
    }
    std::uintmax_t max_iter = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        objective, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(48), max_iter);
    const double root = 0.5 * (a + b);
    if (std::abs(objective(root)) > 1e-6) {
        throw Error(ErrorKind::InversionFailure,
                    "quantile root search missed target for p=" + std::to_string(p));
    }
    return root;
}

std::vector<double> wchisq_sample(const WeightedChiSq& dist, Rng& rng, std::size_t k) {
    if (k < 1) {
        throw Error(ErrorKind::ConfigError, "sample size must be >= 1");
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> out(k);
    for (double& draw : out) {
        double q = 0.0;
        for (const double w : dist.weights()) {
            const double z = normal(rng);
            q += w * z * z;
        }
        draw = q;
    }
    return out;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> sample) : sorted_(std::move(sample)) {
    if (sorted_.empty()) {
        throw Error(ErrorKind::ConfigError, "empirical CDF needs a non-empty sample");
    }
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorKind::ConfigError, "quantile level must lie in (0,1)");
    }
    const auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted_.size()))) - 1;
    return sorted_[std::min(idx, sorted_.size() - 1)];
}

}  // namespace epochspec
