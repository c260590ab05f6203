#include "cfdim/pressure.hpp"

#include "cfdim/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace cfdim {

Alphabet Alphabet::bounded(std::uint64_t alpha) {
    if (alpha < 1) throw DomainError("alphabet bound must be >= 1");
    Alphabet a;
    for (std::uint64_t i = 1; i <= alpha; ++i) a.symbols.push_back(i);
    return a;
}

Alphabet Alphabet::of(std::vector<std::uint64_t> syms) {
    std::sort(syms.begin(), syms.end());
    syms.erase(std::unique(syms.begin(), syms.end()), syms.end());
    if (syms.empty()) throw DomainError("alphabet must be non-empty");
    if (syms.front() < 1) throw DomainError("alphabet symbols must be >= 1");
    return Alphabet{std::move(syms)};
}

std::string Alphabet::label() const {
    bool contiguous = !symbols.empty() && symbols.front() == 1 && symbols.back() == symbols.size();
    if (contiguous) return "1.." + std::to_string(symbols.size());
    std::string s = "{";
    for (std::size_t i = 0; i < symbols.size(); ++i) s += (i ? "," : "") + std::to_string(symbols[i]);
    return s + "}";
}

const char* to_string(SummationMode m) { return m == SummationMode::ExactRational ? "exact" : "float"; }

void PressureProblem::validate() const {
    if (alphabet.size() == 0) throw DomainError("alphabet must be non-empty");
    if (B <= 1) throw DomainError("base B must exceed 1; got " + to_string(B));
    if (n < 1) throw DomainError("depth n must be >= 1");
    leaf_count();
}

std::uint64_t PressureProblem::leaf_count() const {
    std::uint64_t leaves = 1;
    for (unsigned i = 0; i < n; ++i) {
        if (leaves > leaf_budget / alphabet.size())
            throw ResourceError("enumeration budget exceeded: |A|^n = " + std::to_string(alphabet.size()) + "^" +
                                std::to_string(n) + " is over the cap of " + std::to_string(leaf_budget) + " leaves");
        leaves *= alphabet.size();
    }
    return leaves;
}

namespace {

struct Neumaier {
    double sum = 0, comp = 0;
    void add(double x) {
        double t = sum + x;
        comp += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

struct FloatWalk {
    const std::vector<std::uint64_t>& syms;
    double base;  // -rho * 2n log B
    double two_rho;

    // state after k pairs (1, a): (q_{2k}, q_{2k-1})
    void run(unsigned left, double q_even, double q_odd_prev, Neumaier& acc) const {
        double q_odd = q_even + q_odd_prev;
        for (auto a : syms) {
            double q = static_cast<double>(a) * q_odd + q_even;
            if (left == 1)
                acc.add(std::exp(base - two_rho * std::log(q)));
            else
                run(left - 1, q, q_odd, acc);
        }
    }
};

} // namespace

PressureValue pressure_sum(const PressureProblem& p, double rho) {
    p.validate();
    if (!(rho >= 0)) throw DomainError("exponent rho must be >= 0");
    std::uint64_t leaves = p.leaf_count();
    double logB = static_cast<double>(log_of(p.B));
    FloatWalk walk{p.alphabet.symbols, -rho * 2.0 * p.n * logB, 2.0 * rho};

    // one partial sum per first symbol, reduced in symbol order regardless of threads
    std::size_t parts = p.alphabet.size();
    std::vector<double> partial(parts, 0.0);
    auto work = [&](std::size_t i) {
        Neumaier acc;
        double q = static_cast<double>(p.alphabet.symbols[i]) + 1.0;  // q_2(1, a)
        if (p.n == 1)
            acc.add(std::exp(walk.base - walk.two_rho * std::log(q)));
        else
            walk.run(p.n - 1, q, 1.0, acc);
        partial[i] = acc.value();
    };
    unsigned threads = std::max(1u, std::min<unsigned>(p.threads, static_cast<unsigned>(parts)));
    if (threads == 1) {
        for (std::size_t i = 0; i < parts; ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < parts;) work(i);
            });
        for (auto& th : pool) th.join();
    }
    Neumaier total;
    for (double v : partial) total.add(v);
    PressureValue out;
    out.value = total.value();
    out.leaves = leaves;
    out.error_bound = (4.0 * static_cast<double>(leaves) + 8.0) * std::numeric_limits<double>::epsilon() * out.value;
    return out;
}

Rational Dyadic::value() const {
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, shift);
    return make_rational(num, den);
}

double Dyadic::to_double() const { return std::ldexp(num.get_d(), -static_cast<int>(shift)); }

Dyadic Dyadic::midpoint(const Dyadic& a, const Dyadic& b) {
    unsigned s = std::max(a.shift, b.shift);
    BigInt na = a.num, nb = b.num;
    na <<= (s - a.shift);
    nb <<= (s - b.shift);
    Dyadic m{na + nb, s + 1};
    while (m.shift > 0 && mpz_even_p(m.num.get_mpz_t())) {
        m.num >>= 1;
        --m.shift;
    }
    return m;
}

namespace {

PressureSolution solve_float(const PressureProblem& p, double tol) {
    PressureSolution sol;
    sol.mode = SummationMode::CompensatedFloat;
    sol.tolerance = tol;
    PressureValue f0 = pressure_sum(p, 0.0);
    sol.leaves = f0.leaves;
    if (f0.value <= 1.0) {  // a single word: f == 1 at rho = 0
        sol.residual = std::fabs(f0.value - 1.0);
        return sol;
    }
    double lo = 0, hi = 1;
    double f_hi = pressure_sum(p, 1.0).value;
    if (f_hi > 1.0) throw InvariantViolation("f(1) > 1 for B = " + to_string(p.B));
    while (hi - lo > tol) {
        double mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) break;
        double v = pressure_sum(p, mid).value;
        ++sol.iterations;
        if (v > 1.0)
            lo = mid;
        else {
            hi = mid;
            f_hi = v;
        }
    }
    sol.lo = lo;
    sol.hi = hi;
    sol.s_value = hi;
    sol.residual = std::fabs(f_hi - 1.0);
    return sol;
}

PressureSolution solve_exact(const PressureProblem& p, double tol) {
    PressureSolution sol;
    sol.mode = SummationMode::ExactRational;
    sol.tolerance = tol;
    sol.certified = true;
    sol.leaves = p.leaf_count();
    Dyadic lo{0, 0}, hi{1, 0};
    Enclosure f0 = pressure_sum_exact(p, lo);
    if (f0.hi <= 1) {
        sol.residual = to_double(f0.hi) - 1.0;
        sol.residual = std::fabs(sol.residual);
        return sol;
    }
    constexpr unsigned kMaxBits = 2048;
    // exact dyadic midpoints cannot go below 2^-1074 anyway
    double floor_tol = std::max(tol, std::ldexp(1.0, -60));
    while (hi.to_double() - lo.to_double() > floor_tol) {
        Dyadic mid = Dyadic::midpoint(lo, hi);
        ++sol.iterations;
        for (unsigned bits = 128;; bits *= 2) {
            Enclosure e = pressure_sum_exact(p, mid, bits);
            if (e.hi <= 1) {
                hi = mid;
                break;
            }
            if (e.lo > 1) {
                lo = mid;
                break;
            }
            if (bits >= kMaxBits) {  // sign undecidable at the cap: keep the lower endpoint
                hi = mid;
                sol.certified = false;
                break;
            }
        }
    }
    sol.lo = lo.to_double();
    sol.hi = hi.to_double();
    sol.s_value = sol.hi;
    PressureProblem fp = p;
    fp.mode = SummationMode::CompensatedFloat;
    sol.residual = std::fabs(pressure_sum(fp, sol.s_value).value - 1.0);
    return sol;
}

} // namespace

PressureSolution solve_s(const PressureProblem& p, double tol) {
    p.validate();
    if (std::isnan(tol)) throw DomainError("tolerance must be a number");
    return p.mode == SummationMode::ExactRational ? solve_exact(p, tol) : solve_float(p, tol);
}

Extrapolation extrapolate_sB(const Rational& B, std::uint64_t alpha, const std::vector<unsigned>& schedule,
                             double tol, const SolveOptions& opt) {
    if (schedule.empty()) throw DomainError("depth schedule must be non-empty");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (schedule[i] <= schedule[i - 1]) throw DomainError("depth schedule must be strictly increasing");
    std::vector<PressureProblem> probs;
    for (unsigned n : schedule) {
        PressureProblem p{Alphabet::bounded(alpha), B, n, opt.mode, opt.leaf_budget, opt.threads};
        try {
            p.validate();
        } catch (const ResourceError& e) {
            throw ResourceError(std::string("schedule too aggressive for the budget: ") + e.what());
        }
        probs.push_back(std::move(p));
    }
    Extrapolation ex;
    ex.depths = schedule;
    for (const auto& p : probs) ex.solutions.push_back(solve_s(p, tol));
    ex.estimate = ex.solutions.front().s_value;
    for (const auto& s : ex.solutions) ex.estimate = std::min(ex.estimate, s.s_value);
    std::size_t m = ex.solutions.size();
    ex.uncertainty = (m >= 2 ? std::fabs(ex.solutions[m - 1].s_value - ex.solutions[m - 2].s_value) : 0.0) +
                     std::max(tol, 0.0);

    // a violation needs the brackets themselves to separate
    auto idx = [&](unsigned n) -> long {
        auto it = std::find(schedule.begin(), schedule.end(), n);
        return it == schedule.end() ? -1 : it - schedule.begin();
    };
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            unsigned a = schedule[i], b = schedule[j];
            long k = idx(a + b);
            if (k >= 0 && ex.solutions[k].lo > std::max(ex.solutions[i].hi, ex.solutions[j].hi))
                ex.relation_violations.push_back("s_" + std::to_string(a + b) + " > max(s_" + std::to_string(a) +
                                                 ", s_" + std::to_string(b) + ")");
            if (i != j && b % a == 0 && ex.solutions[j].lo > ex.solutions[i].hi)
                ex.relation_violations.push_back("s_" + std::to_string(b) + " > s_" + std::to_string(a));
        }
    }
    return ex;
}

SBCurve sB_curve(const std::vector<Rational>& B_grid, std::uint64_t alpha, unsigned n, double tol,
                 const SolveOptions& opt) {
    SBCurve c;
    for (const auto& B : B_grid) {
        PressureProblem p{Alphabet::bounded(alpha), B, n, opt.mode, opt.leaf_budget, opt.threads};
        c.points.push_back({B, solve_s(p, tol)});
    }
    for (std::size_t i = 1; i < c.points.size(); ++i) {
        const auto& a = c.points[i - 1];
        const auto& b = c.points[i];
        c.differences.push_back(b.solution.s_value - a.solution.s_value);
        if (b.B >= a.B && b.solution.lo > a.solution.hi) c.non_increasing = false;
        if (b.B < a.B && a.solution.lo > b.solution.hi) c.non_increasing = false;
    }
    return c;
}

} // namespace cfdim
