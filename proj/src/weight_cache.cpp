#include "epochspec/weight_cache.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <random>
#include <string>
#include <system_error>

#include <nlohmann/json.hpp>

#include "epochspec/error.hpp"

namespace epochspec {

namespace {

using nlohmann::json;

std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
}

long long d_key(double d) {
    return std::llround(d * 1e12);
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows, int s) {
    Eigen::MatrixXd m(s, s);
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j) {
            m(i, j) = rows.at(i).at(j).get<double>();
        }
    }
    return m;
}

json read_document(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        return json();
    }
    json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object() || doc.value("schema", "") != kWeightCacheSchema ||
        !doc.contains("entries") || !doc["entries"].is_array()) {
        return json();
    }
    return doc;
}

bool key_matches(const json& entry, double d, int s, double tol) {
    const json& key = entry.at("key");
    return key.at("d_e12").get<long long>() == d_key(d) && key.at("s").get<int>() == s &&
           key.at("tol").get<double>() == tol;
}

}  // namespace

WeightCache::WeightCache(std::filesystem::path file) : file_(std::move(file)) {}

std::filesystem::path WeightCache::default_path() {
    if (const char* explicit_file = std::getenv("EPOCHSPEC_CACHE_FILE"); explicit_file && *explicit_file) {
        return explicit_file;
    }
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
        return std::filesystem::path(xdg) / "epochspec" / "weights.json";
    }
    if (const char* home = std::getenv("HOME"); home && *home) {
        return std::filesystem::path(home) / ".cache" / "epochspec" / "weights.json";
    }
    return "epochspec-weights.json";
}

std::optional<LimitLaw> WeightCache::lookup(double d, int s, double tol) const {
    std::lock_guard lock(cache_mutex());
    const json doc = read_document(file_);
    if (doc.is_null()) {
        return std::nullopt;
    }
    try {
        for (const json& entry : doc["entries"]) {
            if (!key_matches(entry, d, s, tol)) {
                continue;
            }
            LimitLaw law;
            law.covariance.d = MemoryParameter(entry.at("d").get<double>());
            law.covariance.s = s;
            law.covariance.sigma_cos = matrix_from_json(entry.at("sigma_cos"), s);
            law.covariance.sigma_sin = matrix_from_json(entry.at("sigma_sin"), s);
            law.covariance.d_diag = law.covariance.sigma_cos.diagonal() + law.covariance.sigma_sin.diagonal();
            law.weights.zeta = entry.at("weights").get<std::vector<double>>();
            if (law.weights.zeta.size() != static_cast<std::size_t>(2 * s)) {
                return std::nullopt;
            }
            validate(law.covariance);
            law.cache_hit = true;
            return law;
        }
    } catch (const std::exception&) {
        // Malformed entry: the cache is advisory, recompute.
    }
    return std::nullopt;
}

void WeightCache::store(const LimitLaw& law, double tol) const {
    std::lock_guard lock(cache_mutex());
    json doc = read_document(file_);
    if (doc.is_null()) {
        doc = json{{"schema", kWeightCacheSchema}, {"entries", json::array()}};
    }
    const double d = law.covariance.d.value();
    const int s = law.covariance.s;
    json kept = json::array();
    for (json& entry : doc["entries"]) {
        try {
            if (key_matches(entry, d, s, tol)) {
                continue;
            }
        } catch (const std::exception&) {
            continue;
        }
        kept.push_back(std::move(entry));
    }
    kept.push_back(json{
        {"key", {{"d_e12", d_key(d)}, {"s", s}, {"tol", tol}}},
        {"d", d},
        {"weights", law.weights.zeta},
        {"sigma_cos", matrix_to_json(law.covariance.sigma_cos)},
        {"sigma_sin", matrix_to_json(law.covariance.sigma_sin)},
        {"d_diag", std::vector<double>(law.covariance.d_diag.data(),
                                       law.covariance.d_diag.data() + law.covariance.d_diag.size())},
        {"scale_omitted", law.covariance.scale_omitted},
    });
    doc["entries"] = std::move(kept);

    std::error_code ec;
    if (file_.has_parent_path()) {
        std::filesystem::create_directories(file_.parent_path(), ec);
    }
    std::filesystem::path tmp = file_;
    tmp += ".tmp." + std::to_string(std::random_device{}());
    {
        std::ofstream out(tmp);
        if (!out) {
            return;  // read-only location: run without a cache
        }
        out << doc.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, file_, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
    }
}

LimitLaw limit_law(const MemoryParameter& d, int s, double tol, const WeightCache* cache) {
    if (cache != nullptr) {
        if (auto hit = cache->lookup(d.value(), s, tol)) {
            return *hit;
        }
    }
    LimitLaw law;
    law.covariance = build_limit_covariance(d, s, tol);
    law.weights = chi_squared_weights(law.covariance);
    if (cache != nullptr) {
        cache->store(law, tol);
    }
    return law;
}

}  // namespace epochspec
