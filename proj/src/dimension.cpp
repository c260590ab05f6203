#include "cfdim/dimension.hpp"

#include "cfdim/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <memory>

namespace cfdim {

DimFEstimate dim_F(const Rational& B, std::uint64_t alpha, const std::vector<unsigned>& schedule, double tol,
                   const SolveOptions& opt) {
    if (B <= 1) throw DomainError("dim_F needs B > 1");
    DimFEstimate d;
    d.extrapolation = extrapolate_sB(B, alpha, schedule, tol, opt);
    d.estimate = d.extrapolation.estimate;
    d.uncertainty = d.extrapolation.uncertainty;
    d.in_sanity_band = d.estimate >= 0.5 - d.uncertainty && d.estimate <= 1.0;
    return d;
}

DimEbc dim_Ebc(double b, double c, unsigned k_max) {
    if (!(b > 1) || !(c > 1)) throw DomainError("dim_Ebc needs b > 1 and c > 1");
    if (k_max < 1) throw DomainError("dim_Ebc needs k_max >= 1");
    DimEbc d;
    d.value = 1.0 / (1.0 + b * b);
    for (unsigned k = 1; k <= k_max; ++k) d.evidence.push_back(nested_Ek_ratio(b, c, k));
    d.flagged = std::fabs(d.evidence.back().R - d.value) > 0.01;
    return d;
}

namespace {

using Fn = std::function<long double(unsigned)>;

class ExprParser {
public:
    explicit ExprParser(const std::string& s) : s_(s) {}

    Fn parse() {
        Fn f = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw DomainError("expression '" + s_ + "': " + why + " at offset " + std::to_string(pos_));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Fn expr() {
        Fn lhs = term();
        for (;;) {
            if (eat('+')) {
                Fn r = term();
                lhs = [lhs, r](unsigned n) { return lhs(n) + r(n); };
            } else if (eat('-')) {
                Fn r = term();
                lhs = [lhs, r](unsigned n) { return lhs(n) - r(n); };
            } else {
                return lhs;
            }
        }
    }
    Fn term() {
        Fn lhs = unary();
        for (;;) {
            if (eat('*')) {
                Fn r = unary();
                lhs = [lhs, r](unsigned n) { return lhs(n) * r(n); };
            } else if (eat('/')) {
                Fn r = unary();
                lhs = [lhs, r](unsigned n) { return lhs(n) / r(n); };
            } else {
                return lhs;
            }
        }
    }
    Fn unary() {
        if (eat('-')) {
            Fn f = unary();
            return [f](unsigned n) { return -f(n); };
        }
        return power();
    }
    Fn power() {
        Fn base = primary();
        if (eat('^')) {
            Fn e = unary();  // right-associative
            return [base, e](unsigned n) { return std::pow(base(n), e(n)); };
        }
        return base;
    }
    Fn primary() {
        skip();
        if (eat('(')) {
            Fn f = expr();
            if (!eat(')')) fail("missing ')'");
            return f;
        }
        if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
            std::size_t used = 0;
            long double v = std::stold(s_.substr(pos_), &used);
            pos_ += used;
            return [v](unsigned) { return v; };
        }
        std::string id;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) id += s_[pos_++];
        if (id == "n") return [](unsigned n) { return static_cast<long double>(n); };
        if (id == "e") return [](unsigned) { return std::exp(1.0L); };
        if (id == "exp" || id == "log" || id == "sqrt") {
            if (!eat('(')) fail("expected '(' after " + id);
            Fn a = expr();
            if (!eat(')')) fail("missing ')'");
            if (id == "exp") return [a](unsigned n) { return std::exp(a(n)); };
            if (id == "log") return [a](unsigned n) { return std::log(a(n)); };
            return [a](unsigned n) { return std::sqrt(a(n)); };
        }
        fail(id.empty() ? "expected a value" : "unknown name '" + id + "'");
    }

    std::string s_;
    std::size_t pos_ = 0;
};

struct TailTrend {
    long double early_min, late_min;
};

// minima of y over [N/4, N/2) and [N/2, N]
TailTrend tail_minima(const std::vector<long double>& y) {
    std::size_t N = y.size();
    long double early = std::numeric_limits<long double>::infinity(), late = early;
    for (std::size_t n = N / 4; n < N / 2; ++n) early = std::min(early, y[n]);
    for (std::size_t n = N / 2; n < N; ++n) late = std::min(late, y[n]);
    return {early, late};
}

// log-scale limits below this are read as "tends to 0" (B or b equal to 1)
constexpr long double kUnitThreshold = 0.04L;

struct Trend {
    enum Kind { ToZero, Finite, ToInfinity } kind;
    long double limit = 0;
};

// y(n) = L + C/n makes 2 late - early exact; slowly decaying y (log n / n) lands near 0
Trend classify_trend(const TailTrend& t) {
    if (std::isinf(t.late_min) && t.late_min > 0) return {Trend::ToInfinity};
    if (t.early_min > 0 && t.late_min >= 1.5L * t.early_min) return {Trend::ToInfinity};
    long double L = 2.0L * t.late_min - t.early_min;
    if (std::isinf(t.early_min)) L = t.late_min;
    if (!(L > kUnitThreshold)) return {Trend::ToZero};
    return {Trend::Finite, L};
}

} // namespace

std::function<long double(unsigned)> compile_expression(const std::string& text) { return ExprParser(text).parse(); }

PhiSpec PhiSpec::power(double p) {
    PhiSpec s;
    s.family = Family::Power;
    s.p = p;
    return s;
}

PhiSpec PhiSpec::exponential(double B0) {
    if (!(B0 > 1)) throw DomainError("exponential family needs B0 > 1");
    PhiSpec s;
    s.family = Family::Exponential;
    s.B0 = B0;
    return s;
}

PhiSpec PhiSpec::double_exponential(double b0, double c0) {
    if (!(b0 > 1) || !(c0 > 1)) throw DomainError("double-exponential family needs b0 > 1 and c0 > 1");
    PhiSpec s;
    s.family = Family::DoubleExponential;
    s.b0 = b0;
    s.c0 = c0;
    return s;
}

PhiSpec PhiSpec::from_table(std::vector<long double> values) {
    PhiSpec s;
    s.family = Family::Table;
    s.horizon = static_cast<unsigned>(values.size());
    s.table = std::move(values);
    return s;
}

PhiSpec PhiSpec::from_log_expression(std::function<long double(unsigned)> log_phi, unsigned horizon) {
    PhiSpec s;
    s.family = Family::Expression;
    s.log_phi = std::move(log_phi);
    s.horizon = horizon;
    return s;
}

PhiSpec PhiSpec::from_log_log_expression(std::function<long double(unsigned)> log_log_phi, unsigned horizon) {
    PhiSpec s;
    s.family = Family::Expression;
    s.log_log_phi = std::move(log_log_phi);
    s.horizon = horizon;
    return s;
}

const char* to_string(GrowthCase c) {
    switch (c) {
    case GrowthCase::B_eq_1: return "B_eq_1";
    case GrowthCase::B_finite: return "B_finite";
    case GrowthCase::B_inf_b_eq_1: return "B_inf_b_eq_1";
    case GrowthCase::B_inf_b_finite: return "B_inf_b_finite";
    case GrowthCase::B_inf_b_inf: return "B_inf_b_inf";
    }
    return "?";
}

namespace {

void fill_dimension(GrowthClass& g, const ClassifyOptions& opt) {
    auto& d = g.dimension;
    switch (g.tag) {
    case GrowthCase::B_eq_1:
        d.kind = GrowthDimension::Kind::Interval;
        d.note = "lower endpoint is the s_1+ estimate at B = 1 + 1e-4; upper endpoint not computed";
        if (opt.evaluate_pressure) {
            auto est = dim_F(parse_rational("1.0001"), opt.alpha, opt.depths, opt.tol, opt.solve);
            d.value = est.estimate;
            d.uncertainty = est.uncertainty;
        } else {
            d.value = std::numeric_limits<double>::quiet_NaN();
        }
        break;
    case GrowthCase::B_finite:
        d.kind = GrowthDimension::Kind::SB;
        d.note = "s_B estimate from truncated alphabet 1.." + std::to_string(opt.alpha);
        if (opt.evaluate_pressure) {
            Rational B;
            mpq_set_d(B.get_mpq_t(), g.B_estimate);
            auto est = dim_F(B, opt.alpha, opt.depths, opt.tol, opt.solve);
            d.value = est.estimate;
            d.uncertainty = est.uncertainty;
        } else {
            d.value = std::numeric_limits<double>::quiet_NaN();
        }
        break;
    case GrowthCase::B_inf_b_eq_1:
        d.value = 0.5;
        break;
    case GrowthCase::B_inf_b_finite:
        d.value = 1.0 / (1.0 + *g.b_estimate * *g.b_estimate);
        break;
    case GrowthCase::B_inf_b_inf:
        d.value = 0.0;
        break;
    }
}

} // namespace

GrowthClass classify_phi(const PhiSpec& phi, const ClassifyOptions& opt) {
    GrowthClass g;
    const double inf = std::numeric_limits<double>::infinity();
    switch (phi.family) {
    case PhiSpec::Family::Power:
        g.tag = GrowthCase::B_eq_1;
        g.B_estimate = 1;
        break;
    case PhiSpec::Family::Exponential:
        g.tag = GrowthCase::B_finite;
        g.B_estimate = phi.B0;
        break;
    case PhiSpec::Family::DoubleExponential:
        g.tag = GrowthCase::B_inf_b_finite;
        g.B_estimate = inf;
        g.b_estimate = phi.b0;
        break;
    case PhiSpec::Family::Table:
    case PhiSpec::Family::Expression: {
        g.heuristic = true;
        unsigned N = phi.family == PhiSpec::Family::Table ? static_cast<unsigned>(phi.table.size()) : phi.horizon;
        if (N < 16) throw ConfigError("growth heuristic needs at least 16 samples; got " + std::to_string(N));
        if (phi.family == PhiSpec::Family::Expression && !phi.log_phi && !phi.log_log_phi)
            throw ConfigError("expression spec has no evaluator");
        std::vector<long double> y(N), z(N);
        long double recip = 0;
        for (unsigned n = 1; n <= N; ++n) {
            long double lp, llp;
            if (phi.family == PhiSpec::Family::Table) {
                long double v = phi.table[n - 1];
                if (!(v > 0)) throw DomainError("phi must be positive; phi(" + std::to_string(n) + ") is not");
                lp = std::log(v);
                llp = lp > 0 ? std::log(lp) : -std::numeric_limits<long double>::infinity();
            } else if (phi.log_log_phi) {
                llp = phi.log_log_phi(n);
                lp = std::exp(llp);
            } else {
                lp = phi.log_phi(n);
                llp = lp > 0 ? std::log(lp) : -std::numeric_limits<long double>::infinity();
            }
            if (std::isnan(lp) || std::isnan(llp)) throw DomainError("phi(" + std::to_string(n) + ") is not a number");
            y[n - 1] = lp / (2.0L * n);
            z[n - 1] = std::isinf(llp) && llp < 0 ? 0.0L : llp / (2.0L * n);
            recip += std::exp(-lp);
        }
        g.reciprocal_sum = recip;
        Trend ty = classify_trend(tail_minima(y));
        if (ty.kind == Trend::ToZero) {
            g.tag = GrowthCase::B_eq_1;
            g.B_estimate = 1;
        } else if (ty.kind == Trend::Finite) {
            g.tag = GrowthCase::B_finite;
            g.B_estimate = static_cast<double>(std::exp(ty.limit));
        } else {
            g.B_estimate = inf;
            Trend tz = classify_trend(tail_minima(z));
            if (tz.kind == Trend::ToZero) {
                g.tag = GrowthCase::B_inf_b_eq_1;
                g.b_estimate = 1;
            } else if (tz.kind == Trend::Finite) {
                g.tag = GrowthCase::B_inf_b_finite;
                g.b_estimate = static_cast<double>(std::exp(tz.limit));
            } else {
                g.tag = GrowthCase::B_inf_b_inf;
                g.b_estimate = inf;
            }
        }
        break;
    }
    }
    fill_dimension(g, opt);
    return g;
}

} // namespace cfdim
