#include "epochspec/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <tuple>

#include "epochspec/error.hpp"
#include "epochspec/parallel.hpp"
#include "epochspec/rng.hpp"
#include "fft.hpp"

namespace epochspec {

namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

void fill_innovations(std::span<double> out, Innovations kind, double sigma, Rng& rng) {
    if (kind == Innovations::Gaussian) {
        std::normal_distribution<double> normal(0.0, sigma);
        for (double& v : out) {
            v = normal(rng);
        }
    } else {
        const double half_width = std::sqrt(3.0) * sigma;
        std::uniform_real_distribution<double> uniform(-half_width, half_width);
        for (double& v : out) {
            v = uniform(rng);
        }
    }
}

// sqrt(lambda_k / M) for the circulant embedding of a FARIMA autocovariance.
// Shared across replications with the same (d, n, sigma).
class EmbeddingCache {
public:
    std::shared_ptr<const std::vector<double>> get(double d, std::size_t n, double sigma) {
        const auto key = std::make_tuple(d, n, sigma);
        {
            std::lock_guard lock(mutex_);
            if (auto it = entries_.find(key); it != entries_.end()) {
                return it->second;
            }
        }
        auto computed = compute(d, n, sigma);
        std::lock_guard lock(mutex_);
        if (entries_.size() > 32) {
            entries_.clear();
        }
        entries_.emplace(key, computed);
        return computed;
    }

private:
    static std::shared_ptr<const std::vector<double>> compute(double d, std::size_t n, double sigma) {
        const std::size_t size = next_pow2(2 * (n - 1));
        const std::size_t half = size / 2;
        const std::vector<double> gamma = farima_autocovariance(d, half + 1, sigma);
        std::vector<std::complex<double>> row(size);
        for (std::size_t k = 0; k <= half; ++k) {
            row[k] = gamma[k];
        }
        for (std::size_t k = 1; k < half; ++k) {
            row[size - k] = gamma[k];
        }
        detail::fft_inplace(row);
        double max_eig = 0.0;
        double min_eig = 0.0;
        for (const auto& v : row) {
            max_eig = std::max(max_eig, v.real());
            min_eig = std::min(min_eig, v.real());
        }
        if (min_eig < -1e-10 * max_eig) {
            return nullptr;
        }
        auto scaled = std::make_shared<std::vector<double>>(size);
        for (std::size_t k = 0; k < size; ++k) {
            (*scaled)[k] = std::sqrt(std::max(row[k].real(), 0.0) / static_cast<double>(size));
        }
        return scaled;
    }

    std::mutex mutex_;
    std::map<std::tuple<double, std::size_t, double>, std::shared_ptr<const std::vector<double>>> entries_;
};

EmbeddingCache& embedding_cache() {
    static EmbeddingCache cache;
    return cache;
}

std::vector<double> farima_exact(double d, std::size_t n, double sigma, Rng& rng) {
    const auto scale = embedding_cache().get(d, n, sigma);
    if (!scale) {
        throw Error(ErrorKind::EmbeddingFailure,
                    "circulant embedding has negative eigenvalues for d=" + std::to_string(d));
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::complex<double>> w(scale->size());
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double re = normal(rng);
        const double im = normal(rng);
        w[k] = (*scale)[k] * std::complex<double>(re, im);
    }
    detail::fft_inplace(w);
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        out[t] = w[t].real();
    }
    return out;
}

std::vector<double> farima_truncated(double d, std::size_t n, std::size_t truncation, double sigma,
                                     Innovations innovations, Rng& rng) {
    const std::vector<double> a = farima_coefficients(d, truncation);
    std::vector<double> eps(n + truncation);
    fill_innovations(eps, innovations, sigma, rng);
    // Linear convolution through a zero-padded FFT; X_t sits at index truncation + t - 1.
    const std::size_t size = next_pow2(n + 2 * truncation);
    std::vector<std::complex<double>> fa(size);
    std::vector<std::complex<double>> fe(size);
    std::copy(a.begin(), a.end(), fa.begin());
    std::copy(eps.begin(), eps.end(), fe.begin());
    detail::fft_inplace(fa);
    detail::fft_inplace(fe);
    for (std::size_t k = 0; k < size; ++k) {
        fe[k] *= fa[k];
    }
    detail::fft_inplace(fe, /*inverse=*/true);
    std::vector<double> out(n);
    const double inv = 1.0 / static_cast<double>(size);
    for (std::size_t t = 0; t < n; ++t) {
        out[t] = fe[truncation + t].real() * inv;
    }
    return out;
}

// FARIMA(0,d,0) path for d in [-1/2, 1/2); d = 0 is plain white noise.
std::vector<double> farima_path(double d, const DgpSpec& spec, Rng& rng, DgpMetadata& meta) {
    if (d == 0.0) {
        std::vector<double> out(spec.n);
        fill_innovations(out, spec.innovations, spec.sigma_eps, rng);
        meta.mode_used = spec.mode;
        return out;
    }
    if (spec.mode == DgpMode::ExactGaussian) {
        try {
            meta.mode_used = DgpMode::ExactGaussian;
            return farima_exact(d, spec.n, spec.sigma_eps, rng);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::EmbeddingFailure) {
                throw;
            }
            meta.warnings.push_back(std::string(e.what()) + "; fell back to truncated MA");
        }
    }
    meta.mode_used = DgpMode::TruncatedMA;
    meta.ma_truncation = spec.effective_truncation();
    meta.burn_in = meta.ma_truncation;
    return farima_truncated(d, spec.n, meta.ma_truncation, spec.sigma_eps, spec.innovations, rng);
}

}  // namespace

std::string to_string(DgpKind kind) {
    switch (kind) {
        case DgpKind::WhiteNoise: return "whitenoise";
        case DgpKind::Farima: return "farima";
        case DgpKind::Ar1: return "ar1";
        case DgpKind::IntegratedFarima: return "integrated";
    }
    return "unknown";
}

std::string to_string(DgpMode mode) {
    return mode == DgpMode::ExactGaussian ? "exact" : "truncated";
}

std::string to_string(Innovations innovations) {
    return innovations == Innovations::Gaussian ? "gaussian" : "uniform";
}

void DgpSpec::validate() const {
    const auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidDgp, what); };
    if (n < 2) {
        fail("n must be >= 2");
    }
    if (!(sigma_eps > 0.0) || !std::isfinite(sigma_eps)) {
        fail("sigma_eps must be positive");
    }
    switch (kind) {
        case DgpKind::Farima:
            if (!(d > -0.5 && d < 0.5)) {
                fail("farima needs -1/2 < d < 1/2 (use the integrated kind for d >= 1/2)");
            }
            break;
        case DgpKind::Ar1:
            if (!(std::abs(phi) < 1.0)) {
                fail("ar1 needs |phi| < 1 (phi = 1 is the integrated kind with d_increment = 0)");
            }
            break;
        case DgpKind::IntegratedFarima:
            if (!(d_increment >= -0.5 && d_increment < 0.5)) {
                fail("integrated needs -1/2 <= d_increment < 1/2");
            }
            break;
        case DgpKind::WhiteNoise:
            break;
    }
    const bool uses_filter = (kind == DgpKind::Farima && d != 0.0) ||
                             (kind == DgpKind::IntegratedFarima && d_increment != 0.0);
    if (uses_filter && mode == DgpMode::ExactGaussian && innovations != Innovations::Gaussian) {
        fail("non-Gaussian innovations need truncated MA mode");
    }
}

double DgpSpec::memory() const {
    switch (kind) {
        case DgpKind::Farima: return d;
        case DgpKind::IntegratedFarima: return d_increment + 1.0;
        default: return 0.0;
    }
}

std::size_t DgpSpec::effective_truncation() const {
    return ma_truncation != 0 ? ma_truncation : std::max<std::size_t>(10'000, 10 * n);
}

std::vector<double> farima_coefficients(double d, std::size_t truncation) {
    if (!(d >= -0.5 && d < 0.5)) {
        throw Error(ErrorKind::InvalidDgp, "farima coefficients need -1/2 <= d < 1/2");
    }
    if (truncation < 1) {
        throw Error(ErrorKind::InvalidDgp, "truncation must be >= 1");
    }
    std::vector<double> a(truncation + 1);
    a[0] = 1.0;
    for (std::size_t j = 1; j <= truncation; ++j) {
        a[j] = a[j - 1] * (static_cast<double>(j) - 1.0 + d) / static_cast<double>(j);
    }
    return a;
}

std::vector<double> farima_autocovariance(double d, std::size_t count, double sigma) {
    if (!(d >= -0.5 && d < 0.5)) {
        throw Error(ErrorKind::InvalidDgp, "farima autocovariance needs -1/2 <= d < 1/2");
    }
    std::vector<double> gamma(count);
    if (count == 0) {
        return gamma;
    }
    gamma[0] = sigma * sigma * std::exp(std::lgamma(1.0 - 2.0 * d) - 2.0 * std::lgamma(1.0 - d));
    for (std::size_t h = 0; h + 1 < count; ++h) {
        const double hd = static_cast<double>(h);
        gamma[h + 1] = gamma[h] * (hd + d) / (hd + 1.0 - d);
    }
    return gamma;
}

std::vector<double> generate_values(const DgpSpec& spec, DgpMetadata* metadata) {
    spec.validate();
    DgpMetadata meta;
    Rng rng = make_rng(spec.seed);
    std::vector<double> out;
    switch (spec.kind) {
        case DgpKind::WhiteNoise:
            out.resize(spec.n);
            fill_innovations(out, spec.innovations, spec.sigma_eps, rng);
            meta.mode_used = spec.mode;
            break;
        case DgpKind::Farima:
            out = farima_path(spec.d, spec, rng, meta);
            break;
        case DgpKind::IntegratedFarima:
            out = cumulative_sum(farima_path(spec.d_increment, spec, rng, meta));
            break;
        case DgpKind::Ar1: {
            // Burn-in draws come from a separate stream so that phi = 0 reproduces white noise.
            const auto burn_in = static_cast<std::size_t>(std::ceil(10.0 / (1.0 - std::abs(spec.phi))));
            Rng burn_rng = make_rng(derive_seed(spec.seed, {1}));
            std::vector<double> warmup(burn_in);
            fill_innovations(warmup, spec.innovations, spec.sigma_eps, burn_rng);
            double x = 0.0;
            for (const double e : warmup) {
                x = spec.phi * x + e;
            }
            out.resize(spec.n);
            fill_innovations(out, spec.innovations, spec.sigma_eps, rng);
            for (double& v : out) {
                x = spec.phi * x + v;
                v = x;
            }
            meta.mode_used = spec.mode;
            meta.burn_in = burn_in;
            break;
        }
    }
    if (metadata != nullptr) {
        *metadata = std::move(meta);
    }
    return out;
}

Generated generate_with_metadata(const DgpSpec& spec) {
    DgpMetadata meta;
    std::vector<double> values = generate_values(spec, &meta);
    return Generated{TimeSeries(std::move(values)), std::move(meta)};
}

TimeSeries generate(const DgpSpec& spec) {
    return TimeSeries(generate_values(spec));
}

std::vector<double> cumulative_sum(std::span<const double> increments) {
    std::vector<double> out(increments.size());
    std::partial_sum(increments.begin(), increments.end(), out.begin());
    return out;
}

std::vector<double> first_difference(std::span<const double> levels) {
    std::vector<double> out(levels.size());
    double previous = 0.0;
    for (std::size_t t = 0; t < levels.size(); ++t) {
        out[t] = levels[t] - previous;
        previous = levels[t];
    }
    return out;
}

std::vector<VarianceGrowthRow> variance_growth_probe(double d_increment,
                                                     std::span<const std::size_t> n_grid,
                                                     std::size_t replications, std::uint64_t seed,
                                                     unsigned threads) {
    if (replications < 2) {
        throw Error(ErrorKind::ConfigError, "variance probe needs >= 2 replications");
    }
    std::vector<VarianceGrowthRow> rows;
    for (std::size_t g = 0; g < n_grid.size(); ++g) {
        const std::size_t n = n_grid[g];
        DgpSpec spec;
        spec.kind = DgpKind::IntegratedFarima;
        spec.d_increment = d_increment;
        spec.n = n;
        spec.validate();
        std::vector<double> sums(replications);
        parallel_for(replications, threads, [&](std::size_t r) {
            DgpSpec rep = spec;
            rep.seed = derive_seed(seed, {g, r});
            Rng rng = make_rng(rep.seed);
            DgpMetadata meta;
            const std::vector<double> increments = farima_path(d_increment, rep, rng, meta);
            sums[r] = std::accumulate(increments.begin(), increments.end(), 0.0);
        });
        const double mean = std::accumulate(sums.begin(), sums.end(), 0.0) / static_cast<double>(replications);
        double ss = 0.0;
        for (const double v : sums) {
            ss += (v - mean) * (v - mean);
        }
        VarianceGrowthRow row;
        row.n = n;
        row.variance = ss / static_cast<double>(replications - 1);
        row.normalizer = d_increment == -0.5 ? std::log(static_cast<double>(n))
                                             : std::pow(static_cast<double>(n), 1.0 + 2.0 * d_increment);
        row.ratio = row.variance / row.normalizer;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace epochspec
