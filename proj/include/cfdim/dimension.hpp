#pragma once

#include "cfdim/geometry.hpp"
#include "cfdim/pressure.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cfdim {

struct DimFEstimate {
    Extrapolation extrapolation;
    double estimate = 0;
    double uncertainty = 0;
    bool in_sanity_band = false;  // estimate in [1/2 - uncertainty, 1]
};

DimFEstimate dim_F(const Rational& B, std::uint64_t alpha, const std::vector<unsigned>& schedule, double tol,
                   const SolveOptions& opt = {});

struct DimEbc {
    double value = 0;  // 1/(1+b^2)
    std::vector<NestedRatio> evidence;
    bool flagged = false;  // |R_kmax - value| > 0.01
};

DimEbc dim_Ebc(double b, double c, unsigned k_max);

// Parses a formula in n (numbers, n, + - * / ^, exp, log, sqrt, parentheses).
std::function<long double(unsigned)> compile_expression(const std::string& text);

struct PhiSpec {
    enum class Family { Power, Exponential, DoubleExponential, Table, Expression };
    Family family = Family::Power;
    double p = 1, B0 = 2, b0 = 2, c0 = 2;
    std::vector<long double> table;                 // phi(1), phi(2), ... for Family::Table
    std::function<long double(unsigned)> log_phi;      // log phi(n) for Family::Expression
    std::function<long double(unsigned)> log_log_phi;  // alternative form for towers that overflow log phi
    unsigned horizon = 128;

    static PhiSpec power(double p);
    static PhiSpec exponential(double B0);
    static PhiSpec double_exponential(double b0, double c0);
    static PhiSpec from_table(std::vector<long double> values);
    static PhiSpec from_log_expression(std::function<long double(unsigned)> log_phi, unsigned horizon = 128);
    static PhiSpec from_log_log_expression(std::function<long double(unsigned)> log_log_phi, unsigned horizon = 128);
};

enum class GrowthCase { B_eq_1, B_finite, B_inf_b_eq_1, B_inf_b_finite, B_inf_b_inf };
const char* to_string(GrowthCase c);

struct GrowthDimension {
    enum class Kind { Value, SB, Interval };
    Kind kind = Kind::Value;
    double value = 0;        // Value / SB estimate / Interval lower endpoint
    double uncertainty = 0;  // SB and interval lower endpoint
    std::string note;
};

struct GrowthClass {
    GrowthCase tag = GrowthCase::B_eq_1;
    double B_estimate = 1;                // +inf when B is infinite
    std::optional<double> b_estimate;     // only when B is infinite
    GrowthDimension dimension;
    bool heuristic = false;
    std::optional<long double> reciprocal_sum;  // sum of 1/phi(n) over the horizon (sampled specs)
};

struct ClassifyOptions {
    std::uint64_t alpha = 4;
    std::vector<unsigned> depths{1, 2, 3, 4};
    double tol = 1e-9;
    bool evaluate_pressure = true;
    SolveOptions solve;
};

GrowthClass classify_phi(const PhiSpec& phi, const ClassifyOptions& opt = {});

} // namespace cfdim
