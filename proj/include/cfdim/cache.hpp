#pragma once

#include "cfdim/pressure.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace cfdim {

struct CacheKey {
    std::string B;         // exact "p/q"
    std::string alphabet;  // Alphabet::label()
    unsigned n = 1;
    double tolerance = 0;
    std::string mode;      // "float" | "exact"
};

CacheKey make_cache_key(const PressureProblem& p, double tol);

// CSV rows: B,alphabet,n,tolerance,s_value,residual,mode,leaves. Exact-key hits only.
class PressureCache {
public:
    explicit PressureCache(std::string path) : path_(std::move(path)) {}
    static std::optional<std::string> path_from_env();  // CFDIM_CACHE

    // corrupt rows are skipped with a warning on `warn`
    std::optional<PressureSolution> lookup(const CacheKey& key, std::ostream& warn) const;
    void store(const CacheKey& key, const PressureSolution& sol) const;
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

std::string format_double(double v);  // shortest text that round-trips

} // namespace cfdim
