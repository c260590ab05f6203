#pragma once

#include "cfdim/cf_core.hpp"
#include "cfdim/pressure.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cfdim {

// Sparse index set {n_k} (n_1 = 1) with gaps m_k, base B and free-position bound alpha.
// Scheduled positions take [M_k + 1, 2 M_k] with M_k = [B^{2 n_k}]; all others take 1..alpha.
struct Schedule {
    std::vector<unsigned> indices;
    std::vector<unsigned> gaps;  // m_1 = 0, m_k = n_k - n_{k-1} - 1
    Rational B;
    std::uint64_t alpha = 2;
    std::vector<BigInt> M;

    static Schedule make(std::vector<unsigned> indices, const Rational& B, std::uint64_t alpha);
    bool consistent() const;

    struct Range {
        BigInt lo, hi;
        std::optional<std::size_t> k;  // 1-based schedule slot when the position is scheduled
    };
    Range range_at(unsigned position) const;
    std::optional<std::size_t> slot_of(unsigned position) const;
    unsigned last_index() const { return indices.back(); }
    std::string label() const;
};

struct AdmissibleWord {
    std::vector<BigInt> sigma;  // sigma_2, sigma_4, ..., sigma_{2n}
    unsigned depth() const { return static_cast<unsigned>(sigma.size()); }
    bool operator==(const AdmissibleWord&) const = default;
};

bool admissible(const Schedule& s, const AdmissibleWord& w);
std::vector<BigInt> interleave(const std::vector<BigInt>& sigma);  // (1, s2, 1, s4, ...)
std::string to_string(const AdmissibleWord& w);

// Odometer over D_n in lexicographic order.
class AdmissibleWordStream {
public:
    AdmissibleWordStream(const Schedule& s, unsigned n);
    std::optional<AdmissibleWord> next();
    const BigInt& total() const { return total_; }

private:
    std::vector<Schedule::Range> ranges_;
    std::vector<BigInt> cur_;
    BigInt total_;
    bool done_ = false;
};

AdmissibleWordStream enumerate_Dn(const Schedule& s, unsigned n, std::uint64_t budget);
BigInt count_Dn(const Schedule& s, unsigned n);

struct FundamentalInterval {
    enum class Kind { Basic, Fundamental };
    AdmissibleWord word;
    Rational left, right, length;
    Kind kind = Kind::Fundamental;
};

FundamentalInterval basic_interval(const AdmissibleWord& w);
// closure of the union of the admissible children cylinders I(1, s2, ..., 1, s_{2n}, 1, c)
FundamentalInterval fundamental_interval(const Schedule& s, const AdmissibleWord& w);
// the closed forms: alpha / ((q'+q)((alpha+1)q'+q)) off-schedule, M / (((M+1)q'+q)((2M+1)q'+q)) before n_k
Rational fundamental_length_closed_form(const Schedule& s, const AdmissibleWord& w);

struct GapSides {
    Rational g_left, g_right;
};

// Interior gap closed forms for a word whose next position has range `next`
// (free: 1..alpha; scheduled: M+1..2M). No admissibility of sigma itself is assumed.
GapSides gap_formulas(const std::vector<BigInt>& sigma, const Schedule::Range& next, std::uint64_t alpha);

struct GapReport {
    std::optional<Rational> g_left, g_right;          // gaps to same-parent neighbours
    std::optional<Rational> left_bound, right_bound;  // substitutes where a side is at a range edge
    Rational g_min;
    bool next_scheduled = false;  // n = n_k - 1: next position is scheduled
    Rational length;              // |J(w)|
};

GapReport gaps(const Schedule& s, const AdmissibleWord& w);

using STable = std::map<unsigned, double>;  // m -> s_{m,B}(alpha)

// s_{m_j,B}(alpha) for every gap m_j >= 1 the schedule needs up to its last index
STable build_s_table(const Schedule& s, double tol, const SolveOptions& opt = {});

struct MeasureNode {
    AdmissibleWord word;
    double mu = 0;
    double log_mu = 0;
    double rel_error_bound = 0;
    std::vector<std::pair<unsigned, double>> exponents_used;
    int rule = 1;  // which of the three defining cases applied
};

MeasureNode measure_mu(const Schedule& s, const AdmissibleWord& w, const STable& table,
                       std::uint64_t tail_budget = kDefaultLeafBudget);

struct EstimationParams {
    double eps = 0.1;
    double t = 0;
    unsigned k0 = 1;
    double log_c_I = 0;

    static EstimationParams make(const Schedule& s, double eps, double sB_alpha, unsigned k0);
};

struct HolderRow {
    AdmissibleWord word;
    double log_mu = 0, log_length = 0;
    double ratio = 0;  // (log mu - log c_I) / log |J|, compared with t - eps
    bool ok = true;
};

struct HolderScan {
    std::vector<HolderRow> rows;
    std::size_t violations = 0;
};

HolderScan holder_scan(const Schedule& s, unsigned max_depth, const STable& table, const EstimationParams& ep,
                       std::uint64_t budget = kDefaultLeafBudget);

struct LuczakResult {
    BigInt count;
    double bound = 0;
    bool holds = true;
};

// S(m,k): sequences of length 1..k with product <= m
LuczakResult luczak_count(std::uint64_t m, unsigned k);

struct SeriesTerm {
    std::uint64_t index;
    double term;
};

struct CoverWeights {
    std::vector<SeriesTerm> I_terms, J_terms;  // dyadic blocks i; q
    double I_partial = 0, J_partial = 0;
    double I_last = 0, J_last = 0;
};

CoverWeights cover_weight_Ebc(std::uint64_t m_low, std::uint64_t m_high, double d, double c, double exponent,
                              std::uint64_t alpha_bound);

struct NestedRatio {
    double R = 0;
    long double log_numerator = 0, log_denominator = 0;
    std::vector<bool> exact_count;  // per j = 1..k: m_j from the exact integer count
};

NestedRatio nested_Ek_ratio(double b, double c, unsigned k);

struct GrowthRow {
    unsigned n;
    long double log_q;      // log q_{2n+2}
    long double log_bound;  // log max(q_{2n}^{d^2}, c^{d^{2n+2}})
    bool ok;
};

// q_{2n+2} > max(q_{2n}^{d^2}, c^{d^{2n+2}}) on the word with a_{2j} = ceil(c^{b^{2j}}), d = (1+b)/2
std::vector<GrowthRow> growth_check(double b, double c, unsigned n_max);

} // namespace cfdim
