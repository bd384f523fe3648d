#include "fft.hpp"

#include <map>
#include <mutex>
#include <utility>

#include <fftw3.h>

namespace epochspec::detail {

namespace {

// fftw_plan_* is not thread-safe; fftw_execute_dft on a cached plan is.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) {
            fftw_destroy_plan(plan);
        }
    }

    fftw_plan get(std::size_t n, bool inverse, fftw_complex* sample) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(n, inverse);
        if (auto it = plans_.find(key); it != plans_.end()) {
            return it->second;
        }
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), sample, sample,
                                          inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, bool>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

}  // namespace

void fft_inplace(std::vector<std::complex<double>>& data, bool inverse) {
    if (data.empty()) {
        return;
    }
    auto* raw = reinterpret_cast<fftw_complex*>(data.data());
    // FFTW_ESTIMATE planning does not touch the array contents.
    fftw_plan plan = plan_cache().get(data.size(), inverse, raw);
    fftw_execute_dft(plan, raw, raw);
}

}  // namespace epochspec::detail
