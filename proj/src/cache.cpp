#include "cfdim/cache.hpp"

#include "cfdim/errors.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

namespace cfdim {

namespace {

constexpr const char* kHeader = "B,alphabet,n,tolerance,s_value,residual,mode,leaves";

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

template <class T>
bool parse_num(const std::string& s, T& v) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && p == s.data() + s.size();
}

std::string csv_alphabet(const std::string& label) {
    std::string s = label;
    for (char& c : s)
        if (c == ',') c = ';';
    return s;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

CacheKey make_cache_key(const PressureProblem& p, double tol) {
    return {to_string(p.B), p.alphabet.label(), p.n, tol, to_string(p.mode)};
}

std::optional<std::string> PressureCache::path_from_env() {
    const char* v = std::getenv("CFDIM_CACHE");
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

std::optional<PressureSolution> PressureCache::lookup(const CacheKey& key, std::ostream& warn) const {
    std::ifstream in(path_);
    if (!in) return std::nullopt;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == kHeader) continue;
        auto f = split(line);
        PressureSolution sol;
        unsigned n = 0;
        double tol = 0;
        if (f.size() != 8 || !parse_num(f[2], n) || !parse_num(f[3], tol) || !parse_num(f[4], sol.s_value) ||
            !parse_num(f[5], sol.residual) || !parse_num(f[7], sol.leaves) || (f[6] != "float" && f[6] != "exact")) {
            warn << "warning: skipping corrupt cache row " << lineno << " in " << path_ << "\n";
            continue;
        }
        if (f[0] != key.B || f[1] != csv_alphabet(key.alphabet) || n != key.n || tol != key.tolerance || f[6] != key.mode)
            continue;
        sol.tolerance = tol;
        sol.mode = f[6] == "exact" ? SummationMode::ExactRational : SummationMode::CompensatedFloat;
        sol.hi = sol.s_value;
        sol.lo = sol.s_value - std::max(tol, 0.0);
        if (sol.lo < 0) sol.lo = 0;
        return sol;
    }
    return std::nullopt;
}

void PressureCache::store(const CacheKey& key, const PressureSolution& sol) const {
    bool fresh = !std::ifstream(path_).good();
    std::ofstream out(path_, std::ios::app);
    if (!out) throw ResourceError("cannot write cache file " + path_);
    if (fresh) out << kHeader << "\n";
    out << key.B << "," << csv_alphabet(key.alphabet) << "," << key.n << "," << format_double(key.tolerance) << ","
        << format_double(sol.s_value) << "," << format_double(sol.residual) << "," << key.mode << "," << sol.leaves
        << "\n";
}

} // namespace cfdim
