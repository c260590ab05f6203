#include "cfdim/errors.hpp"
#include "cfdim/geometry.hpp"

#include <mpfr.h>

#include <cmath>
#include <map>

namespace cfdim {

namespace {

// C(v, n): sequences of length exactly n with product <= v; summed over blocks of equal v / a
struct SeqCounter {
    std::map<std::pair<std::uint64_t, unsigned>, BigInt> memo;

    BigInt count(std::uint64_t v, unsigned n) {
        if (n == 0) return 1;
        if (n == 1) return BigInt(static_cast<unsigned long>(v));
        auto key = std::make_pair(v, n);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        BigInt total = 0;
        for (std::uint64_t a = 1; a <= v;) {
            std::uint64_t t = v / a;
            std::uint64_t a_max = v / t;
            total += BigInt(static_cast<unsigned long>(a_max - a + 1)) * count(t, n - 1);
            a = a_max + 1;
        }
        memo.emplace(key, total);
        return total;
    }
};

struct Mp {
    mpfr_t v;
    explicit Mp(mpfr_prec_t bits) { mpfr_init2(v, bits); }
    ~Mp() { mpfr_clear(v); }
    Mp(const Mp&) = delete;
    Mp& operator=(const Mp&) = delete;
};

// X = c^{b^{2j}} at enough precision to resolve its integer part
void power_tower(Mp& X, double b, double c, unsigned j) {
    Mp e(mpfr_get_prec(X.v)), base(mpfr_get_prec(X.v));
    mpfr_set_d(e.v, b, MPFR_RNDN);
    mpfr_pow_ui(e.v, e.v, 2ul * j, MPFR_RNDN);
    mpfr_set_d(base.v, c, MPFR_RNDN);
    mpfr_pow(X.v, base.v, e.v, MPFR_RNDN);
}

constexpr double kExactBits = 1e4;

} // namespace

LuczakResult luczak_count(std::uint64_t m, unsigned k) {
    if (m < 1 || k < 1) throw DomainError("luczak_count needs m >= 1 and k >= 1");
    if (m > 10'000'000'000ull || k > 64) throw ResourceError("luczak_count limited to m <= 1e10 and k <= 64");
    SeqCounter sc;
    LuczakResult r;
    r.count = 0;
    for (unsigned n = 1; n <= k; ++n) r.count += sc.count(m, n);
    double lm = std::log(static_cast<double>(m));
    r.bound = static_cast<double>(m) * std::pow(2.0 + lm, static_cast<double>(k - 1));
    r.holds = r.count.get_d() <= r.bound;
    return r;
}

CoverWeights cover_weight_Ebc(std::uint64_t m_low, std::uint64_t m_high, double d, double c, double exponent,
                              std::uint64_t alpha_bound) {
    if (!(d > 1) || !(c > 1)) throw DomainError("cover weights need d > 1 and c > 1");
    if (m_low < 1 || m_high < m_low) throw DomainError("cover weights need 1 <= m_low <= m_high");
    double critical = 1.0 / (1.0 + d * d);
    if (!(exponent > critical))
        throw DomainError("exponent must exceed 1/(1+d^2) = " + std::to_string(critical) + "; the series diverges");
    if (m_high - m_low + 1 > alpha_bound)
        throw ResourceError("cover series range has " + std::to_string(m_high - m_low + 1) + " terms, over the cap of " +
                            std::to_string(alpha_bound));

    CoverWeights w;
    const double ln2 = std::log(2.0);
    double dd = 1.0 + d * d;
    // dyadic blocks q in [2^{i-1}, 2^i] meeting [m_low, m_high]
    std::uint64_t i_low = 1, i_high = 1;
    while ((std::uint64_t{1} << i_low) < m_low) ++i_low;
    while (i_high < 63 && (std::uint64_t{1} << i_high) <= m_high) ++i_high;
    for (std::uint64_t i = i_low; i <= i_high; ++i) {
        double di = static_cast<double>(i);
        double K = 0.5 * std::log(3.0 * di * std::log(2.0) / std::log(c)) / std::log(d);
        double log_term = di * ln2 + K * std::log(2.0 + di * ln2) + (1.0 - (di - 1.0) * dd) * exponent * ln2;
        double term = std::exp(log_term);
        w.I_terms.push_back({i, term});
        w.I_partial += term;
        w.I_last = term;
    }
    for (std::uint64_t q = m_low; q <= m_high; ++q) {
        double lq = std::log(static_cast<double>(q));
        double term = std::exp(ln2 + lq + exponent * (ln2 - 2.0 * dd * lq));
        w.J_terms.push_back({q, term});
        w.J_partial += term;
        w.J_last = term;
    }
    return w;
}

NestedRatio nested_Ek_ratio(double b, double c, unsigned k) {
    if (!(b > 1) || !(c > 1)) throw DomainError("nested ratio needs b > 1 and c > 1");
    if (k < 1) throw DomainError("nested ratio needs k >= 1");
    NestedRatio r;
    const long double lb = b, lc = std::log(static_cast<long double>(c));
    auto log_m = [&](unsigned j) -> long double {
        long double e = std::pow(lb, 2.0L * j);
        long double bits = e * lc / std::log(2.0L);
        if (bits <= kExactBits) {
            r.exact_count.push_back(true);
            Mp X(static_cast<mpfr_prec_t>(bits) + 128), X3(static_cast<mpfr_prec_t>(bits) + 130);
            power_tower(X, b, c, j);
            mpfr_mul_ui(X3.v, X.v, 3, MPFR_RNDN);
            BigInt hi, lo;
            mpfr_get_z(hi.get_mpz_t(), X3.v, MPFR_RNDD);
            mpfr_get_z(lo.get_mpz_t(), X.v, MPFR_RNDU);
            return log_of(BigInt(hi - lo + 1));
        }
        r.exact_count.push_back(false);
        return e * lc + std::log(2.0L);  // log of 2 c^{b^{2j}}
    };
    long double num = 0;
    for (unsigned j = 1; j < k; ++j) num += log_m(j);
    long double lmk = log_m(k);
    long double b2 = lb * lb;
    long double log_eps = -std::log(3.0L) - 6.0L * k * std::log(2.0L) -
                          2.0L * b2 * (std::pow(lb, 2.0L * k) - 1.0L) / (b2 - 1.0L) * lc;
    r.log_numerator = num;
    r.log_denominator = -(lmk + log_eps);
    r.R = static_cast<double>(num / r.log_denominator);
    return r;
}

std::vector<GrowthRow> growth_check(double b, double c, unsigned n_max) {
    if (!(b > 1) || !(c > 1)) throw DomainError("growth check needs b > 1 and c > 1");
    const long double d = (1.0L + b) / 2.0L, lc = std::log(static_cast<long double>(c));
    std::vector<BigInt> sigma;
    for (unsigned j = 1; j <= n_max + 1; ++j) {
        long double bits = std::pow(static_cast<long double>(b), 2.0L * j) * lc / std::log(2.0L);
        if (bits > 1e5) throw ResourceError("growth check: c^{b^{2j}} exceeds 1e5 bits at j = " + std::to_string(j));
        Mp X(static_cast<mpfr_prec_t>(bits) + 128);
        power_tower(X, b, c, j);
        BigInt a;
        mpfr_get_z(a.get_mpz_t(), X.v, MPFR_RNDU);
        sigma.push_back(a);
    }
    ConvergentTable t(0);
    for (const auto& a : interleave(sigma)) t.push(a);
    std::vector<GrowthRow> rows;
    for (unsigned n = 0; n <= n_max; ++n) {
        long double lq = log_of(t.q(2 * n + 2));
        long double lprev = n == 0 ? 0.0L : log_of(t.q(2 * n));
        long double bound = std::max(d * d * lprev, std::pow(d, 2.0L * n + 2.0L) * lc);
        rows.push_back({n, lq, bound, lq > bound});
    }
    return rows;
}

} // namespace cfdim
