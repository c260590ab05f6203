#include "cfdim/rational.hpp"

#include "cfdim/errors.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace cfdim {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) throw DomainError("not a number: '" + std::string(whole) + "'");
    BigInt z(std::string(s), 10);
    return neg ? BigInt(-z) : z;
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view es = s.substr(e + 1);
        BigInt ez = parse_integer(es, whole);
        if (!ez.fits_slong_p() || abs(ez) > 100000) throw DomainError("exponent out of range: '" + std::string(whole) + "'");
        exp10 = ez.get_si();
        s = s.substr(0, e);
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (ip.empty() && fp.empty()) throw DomainError("not a number: '" + std::string(whole) + "'");
        if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
            throw DomainError("not a number: '" + std::string(whole) + "'");
        digits = std::string(ip) + std::string(fp);
        exp10 -= static_cast<long>(fp.size());
    } else {
        if (!all_digits(s)) throw DomainError("not a number: '" + std::string(whole) + "'");
        digits = std::string(s);
    }
    if (digits.empty()) digits = "0";
    BigInt mant(digits, 10);
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    Rational r = exp10 < 0 ? make_rational(mant, scale) : Rational(mant * scale);
    return neg ? Rational(-r) : r;
}

} // namespace

Rational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw DomainError("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw DomainError("empty number");
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        BigInt p = parse_integer(s.substr(0, slash), text);
        std::string_view qs = s.substr(slash + 1);
        if (!all_digits(qs)) throw DomainError("bad denominator in '" + std::string(text) + "'");
        return make_rational(p, BigInt(std::string(qs), 10));
    }
    return parse_decimal(s, text);
}

std::string to_string(const BigInt& z) { return z.get_str(10); }

std::string to_string(const Rational& r) {
    return r.get_num().get_str(10) + "/" + r.get_den().get_str(10);
}

BigInt floor_of(const Rational& r) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

BigInt ceil_of(const Rational& r) {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

double to_double(const Rational& r) { return mpq_get_d(r.get_mpq_t()); }

long double log_of(const BigInt& z) {
    if (z <= 0) throw DomainError("log of non-positive integer");
    long e = 0;
    double m = mpz_get_d_2exp(&e, z.get_mpz_t());
    return std::log(static_cast<long double>(m)) + static_cast<long double>(e) * std::log(2.0L);
}

long double log_of(const Rational& r) {
    if (r <= 0) throw DomainError("log of non-positive rational");
    return log_of(r.get_num()) - log_of(r.get_den());
}

Rational pow_int(const Rational& base, unsigned long e) {
    BigInt n, d;
    mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), e);
    return make_rational(n, d);
}

} // namespace cfdim
