#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace cfdim {

using BigInt = mpz_class;
using Rational = mpq_class;

Rational make_rational(const BigInt& num, const BigInt& den);

// Accepts "p/q", integers, and terminating decimals ("1.25", "-3e-2"); always exact.
Rational parse_rational(std::string_view text);

// "p/q" with optional sign on p; integers keep the "/1" so the format is uniform.
std::string to_string(const Rational& r);
std::string to_string(const BigInt& z);

BigInt floor_of(const Rational& r);
BigInt ceil_of(const Rational& r);
double to_double(const Rational& r);
long double log_of(const BigInt& z);       // natural log, z > 0
long double log_of(const Rational& r);     // natural log, r > 0
Rational pow_int(const Rational& base, unsigned long e);

} // namespace cfdim
