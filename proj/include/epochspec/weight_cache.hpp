#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include "epochspec/limit_covariance.hpp"

namespace epochspec {

struct LimitLaw {
    LimitCovariance covariance;
    ChiSqWeights weights;
    bool cache_hit = false;
};

inline constexpr std::string_view kWeightCacheSchema = "epochspec.weight-cache/1";

/// JSON file mapping (d rounded to 1e-12, s, tol) to the weights and matrix
/// entries. Advisory: unreadable or foreign files are treated as empty, and
/// concurrent writers resolve last-writer-wins via atomic rename.
class WeightCache {
public:
    explicit WeightCache(std::filesystem::path file);

    /// $EPOCHSPEC_CACHE_FILE, else $XDG_CACHE_HOME/epochspec/weights.json,
    /// else $HOME/.cache/epochspec/weights.json, else ./epochspec-weights.json.
    [[nodiscard]] static std::filesystem::path default_path();

    [[nodiscard]] std::optional<LimitLaw> lookup(double d, int s, double tol) const;
    void store(const LimitLaw& law, double tol) const;

    [[nodiscard]] const std::filesystem::path& file() const noexcept { return file_; }

private:
    std::filesystem::path file_;
};

/// Sigma(d), D and the weights for (d, s), read from `cache` when present and
/// written back after a miss. A null cache always recomputes.
[[nodiscard]] LimitLaw limit_law(const MemoryParameter& d, int s, double tol,
                                 const WeightCache* cache = nullptr);

}  // namespace epochspec
