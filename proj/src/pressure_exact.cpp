// Certified enclosures of f_{n,B}(rho) for dyadic rho: every leaf term is bracketed with
// directed rounding (down for the lower sum, up for the upper), so the sign of f - 1 is
// decided only when the enclosure excludes 1.
#include "cfdim/errors.hpp"
#include "cfdim/pressure.hpp"

#include <mpfr.h>

namespace cfdim {

namespace {

struct Mp {
    mpfr_t v;
    explicit Mp(mpfr_prec_t bits) { mpfr_init2(v, bits); }
    ~Mp() { mpfr_clear(v); }
    Mp(const Mp&) = delete;
    Mp& operator=(const Mp&) = delete;
};

Rational to_rational(const mpfr_t x) {
    Rational r;
    mpfr_get_q(r.get_mpq_t(), x);
    return r;
}

struct ExactWalk {
    const std::vector<std::uint64_t>& syms;
    const Rational& B2n;
    mpfr_prec_t bits;
    const mpfr_t& neg_rho;
    Mp lo_sum, hi_sum, x_lo, x_hi, t;

    ExactWalk(const std::vector<std::uint64_t>& s, const Rational& b, mpfr_prec_t p, const mpfr_t& nr)
        : syms(s), B2n(b), bits(p), neg_rho(nr), lo_sum(p), hi_sum(p), x_lo(p), x_hi(p), t(p) {
        mpfr_set_ui(lo_sum.v, 0, MPFR_RNDN);
        mpfr_set_ui(hi_sum.v, 0, MPFR_RNDN);
    }

    void leaf(const BigInt& q) {
        Rational X = B2n * Rational(q * q);
        mpfr_set_q(x_lo.v, X.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(x_hi.v, X.get_mpq_t(), MPFR_RNDU);
        // X^{-rho} is non-increasing in X
        mpfr_pow(t.v, x_hi.v, neg_rho, MPFR_RNDD);
        mpfr_add(lo_sum.v, lo_sum.v, t.v, MPFR_RNDD);
        mpfr_pow(t.v, x_lo.v, neg_rho, MPFR_RNDU);
        mpfr_add(hi_sum.v, hi_sum.v, t.v, MPFR_RNDU);
    }

    void run(unsigned left, const BigInt& q_even, const BigInt& q_odd_prev) {
        BigInt q_odd = q_even + q_odd_prev;
        for (auto a : syms) {
            BigInt q = BigInt(static_cast<unsigned long>(a)) * q_odd + q_even;
            if (left == 1)
                leaf(q);
            else
                run(left - 1, q, q_odd);
        }
    }
};

} // namespace

Enclosure pressure_sum_exact(const PressureProblem& p, const Dyadic& rho, unsigned precision_bits) {
    p.validate();
    if (rho.num < 0) throw DomainError("exponent rho must be >= 0");
    if (precision_bits < 32) precision_bits = 32;
    std::size_t rho_bits = mpz_sizeinbase(rho.num.get_mpz_t(), 2) + 1;
    Mp neg_rho(static_cast<mpfr_prec_t>(std::max<std::size_t>(precision_bits, rho_bits)));
    mpfr_set_z(neg_rho.v, rho.num.get_mpz_t(), MPFR_RNDN);  // exact at this precision
    mpfr_div_2ui(neg_rho.v, neg_rho.v, rho.shift, MPFR_RNDN);
    mpfr_neg(neg_rho.v, neg_rho.v, MPFR_RNDN);

    Rational B2n = pow_int(p.B, 2ul * p.n);
    ExactWalk walk(p.alphabet.symbols, B2n, precision_bits, neg_rho.v);
    walk.run(p.n, BigInt(1), BigInt(0));
    return {to_rational(walk.lo_sum.v), to_rational(walk.hi_sum.v), precision_bits};
}

} // namespace cfdim
