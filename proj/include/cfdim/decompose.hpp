#pragma once

#include "cfdim/cf_core.hpp"
#include "cfdim/errors.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cfdim {

// [a0; 1, a2, 1, a4, ..., 1, a_{2k}] plus an optional trailing odd-position 1.
struct EvenRestrictedSeq {
    BigInt integer_part;
    std::vector<BigInt> even_quotients;
    bool odd_tail = false;

    CFExpansion materialize() const;
    Rational value() const { return evaluate(materialize()); }
};

enum class DecompOp { Sum, Product };
enum class DecompStatus { TerminatedExactly, Truncated };

const char* to_string(DecompOp op);
const char* to_string(DecompStatus st);

struct Bracket {
    Rational low, high;  // low <= x < high (degenerate low == high == x once terminated)
    Rational width() const { return high - low; }
};

struct DecompositionResult {
    DecompOp op = DecompOp::Sum;
    Rational x;
    EvenRestrictedSeq first, second;
    DecompStatus status = DecompStatus::Truncated;
    std::size_t steps = 0;
    Bracket bracket;
    std::vector<Bracket> history;  // running bracket: initial, then after each full step
};

struct EvenSelection {
    BigInt c;
    bool exact = false;  // [prefix, c] == target
};

// prefix must end at an odd depth 2k-1 with last quotient 1. Picks the unique c with
// [prefix, c] <= target < [prefix, c + 1].
EvenSelection select_even_quotient(const Rational& target, const ConvergentTable& prefix);

struct StepRecord {
    std::size_t k = 0;
    BigInt a;                 // a_{2k}
    std::optional<BigInt> b;  // b_{2k}; absent when the first selection terminated
    bool exact = false;
};

// Alternating first/second-component selection, one full step per pull.
class GreedyDecomposer final {
public:
    GreedyDecomposer(DecompOp op, const Rational& x);
    std::optional<StepRecord> next();
    bool terminated() const { return terminated_; }
    std::size_t steps() const { return steps_; }
    DecompositionResult result() const;

private:
    Rational combine(const Rational& u, const Rational& v) const;
    Rational residual(const Rational& v) const;

    DecompOp op_;
    Rational x_;         // reduced target (sum: shifted into [3/2, 2))
    BigInt shift_;       // sum only: integer added back to the first integer part
    ConvergentTable a_, b_;
    std::vector<BigInt> a_even_, b_even_;
    bool terminated_ = false;
    bool first_tail_ = true, second_tail_ = true;
    std::size_t steps_ = 0;
    std::vector<Bracket> history_;
};

DecompositionResult sum_decompose(const Rational& x, std::size_t k_max = 32);
DecompositionResult product_decompose(const Rational& x, std::size_t k_max = 32);

struct VerificationReport {
    bool pass = true;
    std::optional<std::size_t> failed_step;
    std::string message;
    Rational residual_width;
};

VerificationReport verify_decomposition(const DecompositionResult& r, const Rational& x, DecompOp op);

} // namespace cfdim
