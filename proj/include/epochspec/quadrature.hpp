#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "epochspec/error.hpp"

namespace epochspec::quadrature {

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    double l1_norm = 0.0;  ///< integral of |f|, used as the scale for near-zero integrals
    std::size_t evaluations = 0;
};

struct Options {
    double rel_tol = 1e-6;
    double abs_tol = 0.0;
    std::size_t max_evaluations = 10'000'000;
};

namespace detail {

struct Rule21 {
    std::array<double, 11> nodes{};          // nodes[0] = 0, ascending
    std::array<double, 11> kronrod_weights{};
    std::array<double, 5> gauss_weights{};   // for nodes[1], nodes[3], ..., nodes[9]
};

inline const Rule21& rule21() {
    static const Rule21 rule = [] {
        using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
        using Gauss = boost::math::quadrature::gauss<double, 10>;
        Rule21 r;
        std::copy(Kronrod::abscissa().begin(), Kronrod::abscissa().end(), r.nodes.begin());
        std::copy(Kronrod::weights().begin(), Kronrod::weights().end(), r.kronrod_weights.begin());
        std::copy(Gauss::weights().begin(), Gauss::weights().end(), r.gauss_weights.begin());
        return r;
    }();
    return rule;
}

struct Panel {
    double a;
    double b;
    double value;
    double error;
    double l1;
    bool operator<(const Panel& other) const noexcept { return error < other.error; }
};

template <typename F>
Panel apply_rule(const F& f, double a, double b) {
    const Rule21& r = rule21();
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = r.kronrod_weights[0] * fc;
    double l1 = r.kronrod_weights[0] * std::abs(fc);
    double gauss = 0.0;
    for (std::size_t k = 1; k < r.nodes.size(); ++k) {
        const double dx = half * r.nodes[k];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += r.kronrod_weights[k] * (f1 + f2);
        l1 += r.kronrod_weights[k] * (std::abs(f1) + std::abs(f2));
        if (k % 2 == 1) {
            gauss += r.gauss_weights[k / 2] * (f1 + f2);
        }
    }
    return Panel{a, b, kronrod * half, std::abs((kronrod - gauss) * half), l1 * std::abs(half)};
}

}  // namespace detail

inline constexpr std::size_t kEvaluationsPerPanel = 21;

/// Globally adaptive Gauss-Kronrod (G10/K21) integration on [a, b]. The panel
/// with the largest error estimate is bisected until the summed estimate falls
/// below max(rel_tol*|I|, abs_tol, 50*eps*L1). Integrable endpoint singularities are
/// handled by repeated bisection toward the singular end (nodes never touch
/// the endpoints). Throws QuadratureNonConvergence past max_evaluations.
template <typename F>
Result integrate(const F& f, double a, double b, const Options& opts = {}) {
    std::vector<detail::Panel> heap{detail::apply_rule(f, a, b)};
    std::size_t evaluations = kEvaluationsPerPanel;
    double value = heap.front().value;
    double error = heap.front().error;
    double l1 = heap.front().l1;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    while (true) {
        const double target =
            std::max({opts.rel_tol * std::abs(value), opts.abs_tol, 50.0 * eps * l1});
        if (error <= target) {
            break;
        }
        if (evaluations + 2 * kEvaluationsPerPanel > opts.max_evaluations) {
            throw Error(ErrorKind::QuadratureNonConvergence,
                        "error estimate " + std::to_string(error) + " above target " +
                            std::to_string(target) + " after " + std::to_string(evaluations) +
                            " evaluations");
        }
        const detail::Panel worst = heap.front();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Panel cannot be split further in double precision; accept what we have.
            break;
        }
        std::pop_heap(heap.begin(), heap.end());
        heap.pop_back();
        const detail::Panel left = detail::apply_rule(f, worst.a, mid);
        const detail::Panel right = detail::apply_rule(f, mid, worst.b);
        evaluations += 2 * kEvaluationsPerPanel;
        value += left.value + right.value - worst.value;
        l1 += left.l1 + right.l1 - worst.l1;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end());
        // The running update drifts; resum from scratch now and then.
        error += left.error + right.error - worst.error;
        if (heap.size() % 256 == 0) {
            error = 0.0;
            for (const auto& panel : heap) {
                error += panel.error;
            }
        }
    }
    return Result{value, error, l1, evaluations};
}

}  // namespace epochspec::quadrature
