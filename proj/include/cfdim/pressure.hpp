#pragma once

#include "cfdim/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cfdim {

struct Alphabet {
    std::vector<std::uint64_t> symbols;  // sorted, distinct, >= 1

    static Alphabet bounded(std::uint64_t alpha);  // {1..alpha}
    static Alphabet of(std::vector<std::uint64_t> syms);
    std::size_t size() const { return symbols.size(); }
    std::string label() const;  // "1..a" for contiguous ranges from 1, else "{a,b,c}"
};

enum class SummationMode { CompensatedFloat, ExactRational };
const char* to_string(SummationMode m);

inline constexpr std::uint64_t kDefaultLeafBudget = std::uint64_t{1} << 26;

struct PressureProblem {
    Alphabet alphabet;
    Rational B{2};
    unsigned n = 1;
    SummationMode mode = SummationMode::CompensatedFloat;
    std::uint64_t leaf_budget = kDefaultLeafBudget;
    unsigned threads = 1;

    void validate() const;            // throws DomainError / ResourceError
    std::uint64_t leaf_count() const;  // |A|^n, ResourceError past the budget
};

struct PressureValue {
    double value = 0;
    double error_bound = 0;
    std::uint64_t leaves = 0;
};

// f_{n,B}(rho) = sum over A^n of (B^{2n} q_{2n}(1,a_2,...,1,a_{2n})^2)^{-rho}
PressureValue pressure_sum(const PressureProblem& p, double rho);

// rho = num / 2^shift, the only exponents the certified mode accepts
struct Dyadic {
    BigInt num;
    unsigned shift = 0;
    Rational value() const;
    double to_double() const;
    static Dyadic midpoint(const Dyadic& a, const Dyadic& b);
};

struct Enclosure {
    Rational lo, hi;
    unsigned precision_bits = 0;
};

Enclosure pressure_sum_exact(const PressureProblem& p, const Dyadic& rho, unsigned precision_bits = 128);

struct PressureSolution {
    double s_value = 0;
    double residual = 0;  // |f(s_value) - 1|
    unsigned iterations = 0;
    double lo = 0, hi = 0;
    double tolerance = 0;
    std::uint64_t leaves = 0;
    SummationMode mode = SummationMode::CompensatedFloat;
    bool certified = false;  // exact mode: every bisection decision came from a sign-certain enclosure
};

// tol <= 0 bisects to machine resolution
PressureSolution solve_s(const PressureProblem& p, double tol);

struct SolveOptions {
    std::uint64_t leaf_budget = kDefaultLeafBudget;
    unsigned threads = 1;
    SummationMode mode = SummationMode::CompensatedFloat;
};

struct Extrapolation {
    std::vector<unsigned> depths;
    std::vector<PressureSolution> solutions;
    double estimate = 0;     // min over the schedule
    double uncertainty = 0;  // spread across the two deepest depths plus solver tolerance
    std::vector<std::string> relation_violations;  // s_{rn} <= s_n, s_{n+k} <= max(s_n, s_k)
};

Extrapolation extrapolate_sB(const Rational& B, std::uint64_t alpha, const std::vector<unsigned>& schedule,
                             double tol, const SolveOptions& opt = {});

struct CurvePoint {
    Rational B;
    PressureSolution solution;
};

struct SBCurve {
    std::vector<CurvePoint> points;
    std::vector<double> differences;  // s(B_{i+1}) - s(B_i)
    bool non_increasing = true;
};

SBCurve sB_curve(const std::vector<Rational>& B_grid, std::uint64_t alpha, unsigned n, double tol,
                 const SolveOptions& opt = {});

} // namespace cfdim
