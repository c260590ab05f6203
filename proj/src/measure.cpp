#include "cfdim/errors.hpp"
#include "cfdim/geometry.hpp"

#include <cmath>
#include <limits>

namespace cfdim {

STable build_s_table(const Schedule& s, double tol, const SolveOptions& opt) {
    STable t;
    for (unsigned m : s.gaps) {
        if (m == 0 || t.count(m)) continue;
        PressureProblem p{Alphabet::bounded(s.alpha), s.B, m, opt.mode, opt.leaf_budget, opt.threads};
        t[m] = solve_s(p, tol).s_value;
    }
    return t;
}

namespace {

struct Compensated {
    double sum = 0, comp = 0;
    void add(double x) {
        double t = sum + x;
        comp += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

struct MuContext {
    const Schedule& s;
    const STable& table;
    double logB;

    double exponent(unsigned m) const {
        auto it = table.find(m);
        if (it == table.end())
            throw ConfigError("missing exponent s_{" + std::to_string(m) + ",B}(alpha) in the s-table");
        return it->second;
    }

    // log of (B^{2m} q_{2m}(1, sigma_{n_{k-1}+1}, ..., 1, sigma_{n_k - 1})^2)^{-s}
    double block_log(std::size_t k, const std::vector<BigInt>& sigma) const {
        unsigned m = s.gaps[k - 1];
        if (m == 0) return 0.0;
        unsigned first = s.indices[k - 2] + 1;
        std::vector<BigInt> block(sigma.begin() + (first - 1), sigma.begin() + (first - 1 + m));
        double q = static_cast<double>(log_of(denominator_of(interleave(block))));
        return -exponent(m) * (2.0 * m * logB + 2.0 * q);
    }

    double full_log(std::size_t j, const std::vector<BigInt>& sigma) const {
        return -static_cast<double>(log_of(s.M[j - 1])) + block_log(j, sigma);
    }
};

// sum over free tails of exp(block exponent); state is the convergent pair after the fixed part
void tail_walk(unsigned left, double q_even, double q_odd_prev, double base, double two_s, std::uint64_t alpha,
               Compensated& acc) {
    double q_odd = q_even + q_odd_prev;
    for (std::uint64_t a = 1; a <= alpha; ++a) {
        double q = static_cast<double>(a) * q_odd + q_even;
        if (left == 1)
            acc.add(std::exp(base - two_s * std::log(q)));
        else
            tail_walk(left - 1, q, q_odd, base, two_s, alpha, acc);
    }
}

} // namespace

MeasureNode measure_mu(const Schedule& s, const AdmissibleWord& w, const STable& table, std::uint64_t tail_budget) {
    unsigned n = w.depth();
    if (n < 1 || n > s.last_index())
        throw ConfigError("mu is defined for depths 1.." + std::to_string(s.last_index()) + " of this schedule; got " +
                          std::to_string(n));
    if (!admissible(s, w)) throw DomainError("word " + to_string(w) + " is not admissible");
    MuContext ctx{s, table, static_cast<double>(log_of(s.B))};
    std::size_t k = 1;
    while (s.indices[k - 1] < n) ++k;

    MeasureNode node;
    node.word = w;
    double log_mu = 0;
    for (std::size_t j = 1; j < k; ++j) log_mu += ctx.full_log(j, w.sigma);
    std::size_t terms = 1;
    if (n == s.indices[k - 1]) {
        node.rule = 1;
        log_mu += ctx.full_log(k, w.sigma);
    } else if (n + 1 == s.indices[k - 1]) {
        node.rule = 2;
        log_mu += ctx.block_log(k, w.sigma);
    } else {
        node.rule = 3;
        unsigned m = s.gaps[k - 1];
        unsigned first = s.indices[k - 2] + 1;
        unsigned tail = s.indices[k - 1] - 1 - n;
        std::uint64_t count = 1;
        for (unsigned i = 0; i < tail; ++i) {
            if (count > tail_budget / s.alpha)
                throw ResourceError("free-tail enumeration over budget of " + std::to_string(tail_budget));
            count *= s.alpha;
        }
        terms = count;
        double sexp = ctx.exponent(m);
        double q_even = 1, q_odd_prev = 0;
        for (unsigned pos = first; pos <= n; ++pos) {
            double q_odd = q_even + q_odd_prev;
            double q = w.sigma[pos - 1].get_d() * q_odd + q_even;
            q_odd_prev = q_odd;
            q_even = q;
        }
        Compensated acc;
        tail_walk(tail, q_even, q_odd_prev, -sexp * 2.0 * m * ctx.logB, 2.0 * sexp, s.alpha, acc);
        log_mu += std::log(acc.value());
    }
    for (std::size_t j = 2; j <= k; ++j)
        if (s.gaps[j - 1] > 0) node.exponents_used.emplace_back(s.gaps[j - 1], ctx.exponent(s.gaps[j - 1]));
    node.log_mu = log_mu;
    node.mu = std::exp(log_mu);
    node.rel_error_bound = (8.0 * static_cast<double>(k) + 4.0 * static_cast<double>(terms) + 8.0) *
                           std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(log_mu));
    return node;
}

EstimationParams EstimationParams::make(const Schedule& s, double eps, double sB_alpha, unsigned k0) {
    if (!(eps > 0 && eps < 0.25)) throw DomainError("epsilon must lie in (0, 1/4)");
    EstimationParams p;
    p.eps = eps;
    p.t = sB_alpha - 2 * eps;
    if (!(p.t > 0)) throw DomainError("t = s_B(alpha) - 2 eps must be positive");
    if (k0 < 1 || k0 > s.indices.size()) throw DomainError("k0 must index the schedule");
    p.k0 = k0;
    double logB = static_cast<double>(log_of(s.B));
    double loga = std::log(static_cast<double>(s.alpha));
    unsigned prefix = 0;
    for (unsigned j = 1; j <= k0; ++j) {
        prefix += s.indices[j - 1];
        p.log_c_I += 2.0 * prefix * logB + s.indices[j - 1] * loga;
    }
    return p;
}

HolderScan holder_scan(const Schedule& s, unsigned max_depth, const STable& table, const EstimationParams& ep,
                       std::uint64_t budget) {
    HolderScan scan;
    for (unsigned n = 1; n <= max_depth; ++n) {
        auto st = enumerate_Dn(s, n, budget);
        while (auto w = st.next()) {
            HolderRow row;
            row.word = *w;
            row.log_mu = measure_mu(s, *w, table, budget).log_mu;
            row.log_length = static_cast<double>(log_of(fundamental_interval(s, *w).length));
            row.ratio = (row.log_mu - ep.log_c_I) / row.log_length;
            // mu <= c_I |J|^{t - eps}, with a rounding allowance
            row.ok = row.log_mu <= ep.log_c_I + (ep.t - ep.eps) * row.log_length + 1e-12;
            if (!row.ok) ++scan.violations;
            scan.rows.push_back(std::move(row));
        }
    }
    return scan;
}

} // namespace cfdim
