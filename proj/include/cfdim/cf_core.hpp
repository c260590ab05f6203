#pragma once

#include "cfdim/rational.hpp"

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cfdim {

// [a0; a1, a2, ...] with every a_i >= 1 for i >= 1. Finite by storage; lazy
// producers implement QuotientSource instead.
struct CFExpansion {
    BigInt integer_part;
    std::vector<BigInt> quotients;
    bool truncated = false;  // expand() stopped at max_terms before the expansion ended

    bool canonical() const;
    std::size_t size() const { return quotients.size(); }
    bool operator==(const CFExpansion&) const = default;
};

std::string to_string(const CFExpansion& cf);
CFExpansion parse_cf(std::string_view text);

// Pull interface: one partial quotient per call, nullopt once exhausted.
class QuotientSource {
public:
    virtual ~QuotientSource() = default;
    virtual std::optional<BigInt> next() = 0;
};

// Gauss map T(x) = 1/x mod 1 applied to a rational; terminates.
class GaussExpansion final : public QuotientSource {
public:
    explicit GaussExpansion(const Rational& x);
    const BigInt& integer_part() const { return a0_; }
    std::optional<BigInt> next() override;

private:
    BigInt a0_;
    Rational frac_;
};

CFExpansion expand(const Rational& x, std::size_t max_terms);

// p_k, q_k for k = -1 .. depth(). Seeds p_{-1}=1, q_{-1}=0, p_0=a0, q_0=1.
class ConvergentTable {
public:
    explicit ConvergentTable(const BigInt& a0 = 0);
    void push(const BigInt& a);  // appends a_{depth+1}

    long depth() const { return static_cast<long>(p_.size()) - 2; }
    const BigInt& p(long k) const { return p_.at(static_cast<std::size_t>(k + 1)); }
    const BigInt& q(long k) const { return q_.at(static_cast<std::size_t>(k + 1)); }
    Rational value() const { return make_rational(p(depth()), q(depth())); }
    bool determinant_ok() const;

private:
    std::vector<BigInt> p_, q_;
};

ConvergentTable convergents(const CFExpansion& cf, std::size_t upto);
Rational evaluate(const CFExpansion& cf);
CFExpansion canonicalize(const CFExpansion& cf);
std::strong_ordering compare(const CFExpansion& a, const CFExpansion& b);

// q_n of the word (a_1..a_n) alone (a0 irrelevant).
BigInt denominator_of(const std::vector<BigInt>& word);

// I(a_1..a_n). Odd n: ((p_n+p_{n-1})/(q_n+q_{n-1}), p_n/q_n]; even n: [p_n/q_n, ...).
struct Cylinder {
    std::vector<BigInt> word;
    Rational left, right, length;
    bool left_closed = false, right_closed = false;
    bool contains(const Rational& x) const;
};

Cylinder cylinder(const std::vector<BigInt>& word);

} // namespace cfdim
