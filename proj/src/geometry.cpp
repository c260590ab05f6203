#include "cfdim/geometry.hpp"

#include "cfdim/errors.hpp"

#include <algorithm>

namespace cfdim {

Schedule Schedule::make(std::vector<unsigned> indices, const Rational& B, std::uint64_t alpha) {
    if (indices.empty() || indices.front() != 1) throw DomainError("schedule indices must start with n_1 = 1");
    for (std::size_t i = 1; i < indices.size(); ++i)
        if (indices[i] <= indices[i - 1]) throw DomainError("schedule indices must be strictly increasing");
    if (B <= 1) throw DomainError("schedule base B must exceed 1");
    if (alpha < 2) throw DomainError("schedule needs alpha >= 2 (alpha = 1 gives single-child intervals)");
    Schedule s;
    s.indices = std::move(indices);
    s.B = B;
    s.alpha = alpha;
    for (std::size_t k = 0; k < s.indices.size(); ++k) {
        s.gaps.push_back(k == 0 ? 0u : s.indices[k] - s.indices[k - 1] - 1);
        s.M.push_back(floor_of(pow_int(B, 2ul * s.indices[k])));
    }
    return s;
}

bool Schedule::consistent() const {
    if (gaps.size() != indices.size() || M.size() != indices.size()) return false;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        unsigned m = k == 0 ? indices[0] - 1 : indices[k] - indices[k - 1] - 1;
        if (gaps[k] != m) return false;
    }
    return true;
}

std::optional<std::size_t> Schedule::slot_of(unsigned position) const {
    auto it = std::lower_bound(indices.begin(), indices.end(), position);
    if (it == indices.end() || *it != position) return std::nullopt;
    return static_cast<std::size_t>(it - indices.begin()) + 1;
}

Schedule::Range Schedule::range_at(unsigned position) const {
    if (auto k = slot_of(position)) return {M[*k - 1] + 1, 2 * M[*k - 1], k};
    return {BigInt(1), BigInt(static_cast<unsigned long>(alpha)), std::nullopt};
}

std::string Schedule::label() const {
    std::string s = "B=" + to_string(B) + " alpha=" + std::to_string(alpha) + " indices=";
    for (std::size_t i = 0; i < indices.size(); ++i) s += (i ? "," : "") + std::to_string(indices[i]);
    return s;
}

bool admissible(const Schedule& s, const AdmissibleWord& w) {
    for (unsigned pos = 1; pos <= w.depth(); ++pos) {
        auto r = s.range_at(pos);
        const BigInt& v = w.sigma[pos - 1];
        if (v < r.lo || v > r.hi) return false;
    }
    return true;
}

std::vector<BigInt> interleave(const std::vector<BigInt>& sigma) {
    std::vector<BigInt> out;
    out.reserve(2 * sigma.size());
    for (const auto& v : sigma) {
        out.emplace_back(1);
        out.push_back(v);
    }
    return out;
}

std::string to_string(const AdmissibleWord& w) {
    std::string s = "(";
    for (std::size_t i = 0; i < w.sigma.size(); ++i) s += (i ? "," : "") + w.sigma[i].get_str(10);
    return s + ")";
}

AdmissibleWordStream::AdmissibleWordStream(const Schedule& s, unsigned n) : total_(1) {
    if (n < 1) throw DomainError("depth n must be >= 1");
    for (unsigned pos = 1; pos <= n; ++pos) {
        ranges_.push_back(s.range_at(pos));
        cur_.push_back(ranges_.back().lo);
        total_ *= ranges_.back().hi - ranges_.back().lo + 1;
    }
}

std::optional<AdmissibleWord> AdmissibleWordStream::next() {
    if (done_) return std::nullopt;
    AdmissibleWord w{cur_};
    std::size_t i = cur_.size();
    while (i > 0) {
        --i;
        if (cur_[i] < ranges_[i].hi) {
            cur_[i] += 1;
            return w;
        }
        cur_[i] = ranges_[i].lo;
    }
    done_ = true;
    return w;
}

BigInt count_Dn(const Schedule& s, unsigned n) { return AdmissibleWordStream(s, n).total(); }

AdmissibleWordStream enumerate_Dn(const Schedule& s, unsigned n, std::uint64_t budget) {
    AdmissibleWordStream st(s, n);
    if (st.total() > BigInt(static_cast<unsigned long>(budget)))
        throw ResourceError("D_" + std::to_string(n) + " has " + st.total().get_str(10) + " words, over the budget of " +
                            std::to_string(budget));
    return st;
}

namespace {

// (p, q) table of (1, s2, ..., 1, s_{2n}, 1): depth 2n+1
ConvergentTable table_with_odd_one(const std::vector<BigInt>& sigma) {
    ConvergentTable t(0);
    for (const auto& a : interleave(sigma)) t.push(a);
    t.push(1);
    return t;
}

Rational value_with(const ConvergentTable& t, const BigInt& c) {
    long d = t.depth();
    return make_rational(c * t.p(d) + t.p(d - 1), c * t.q(d) + t.q(d - 1));
}

Rational cf_value(const std::vector<BigInt>& quotients) {
    CFExpansion cf;
    cf.integer_part = 0;
    cf.quotients = quotients;
    return evaluate(cf);
}

} // namespace

FundamentalInterval basic_interval(const AdmissibleWord& w) {
    Cylinder c = cylinder(interleave(w.sigma));
    return {w, c.left, c.right, c.length, FundamentalInterval::Kind::Basic};
}

FundamentalInterval fundamental_interval(const Schedule& s, const AdmissibleWord& w) {
    if (!admissible(s, w)) throw DomainError("word " + to_string(w) + " is not admissible");
    auto next = s.range_at(w.depth() + 1);
    ConvergentTable t = table_with_odd_one(w.sigma);
    // children [w,1,c] increase with c and tile [[w,1,lo], [w,1,hi+1])
    FundamentalInterval f{w, value_with(t, next.lo), value_with(t, next.hi + 1), 0, FundamentalInterval::Kind::Fundamental};
    f.length = f.right - f.left;
    return f;
}

Rational fundamental_length_closed_form(const Schedule& s, const AdmissibleWord& w) {
    ConvergentTable t = table_with_odd_one(w.sigma);
    long d = t.depth();
    const BigInt &q1 = t.q(d), &q0 = t.q(d - 1);  // q_{2n+1}, q_{2n}
    auto next = s.range_at(w.depth() + 1);
    if (!next.k) {
        BigInt a(static_cast<unsigned long>(s.alpha));
        return make_rational(a, (q1 + q0) * ((a + 1) * q1 + q0));
    }
    const BigInt& M = s.M[*next.k - 1];
    return make_rational(M, ((M + 1) * q1 + q0) * ((2 * M + 1) * q1 + q0));
}

GapSides gap_formulas(const std::vector<BigInt>& sigma, const Schedule::Range& next, std::uint64_t alpha) {
    ConvergentTable t = table_with_odd_one(sigma);
    long d = t.depth();
    const BigInt &q_odd = t.q(d), &q = t.q(d - 1), &qp = t.q(d - 2);  // q_{2n+1}, q_{2n}, q_{2n-1}
    if (!next.k) {
        BigInt a(static_cast<unsigned long>(alpha));
        return {make_rational(a + 4, (2 * q + qp) * ((a + 2) * q - qp)),
                make_rational(a + 4, (2 * q + 3 * qp) * ((a + 1) * q_odd + q))};
    }
    BigInt M = next.lo - 1;
    BigInt num = 2 * M * M + 5 * M + 4;
    return {make_rational(num, ((M + 2) * q + (M + 1) * qp) * ((2 * M + 2) * q - qp)),
            make_rational(num, ((M + 2) * q + (2 * M + 3) * qp) * ((2 * M + 1) * q_odd + q))};
}

GapReport gaps(const Schedule& s, const AdmissibleWord& w) {
    if (!admissible(s, w)) throw DomainError("word " + to_string(w) + " is not admissible");
    unsigned n = w.depth();
    auto here = s.range_at(n);
    auto next = s.range_at(n + 1);
    GapSides sides = gap_formulas(w.sigma, next, s.alpha);
    GapReport r;
    r.next_scheduled = next.k.has_value();
    r.length = fundamental_interval(s, w).length;
    const BigInt& sig = w.sigma.back();
    std::vector<BigInt> u = interleave({w.sigma.begin(), w.sigma.end() - 1});

    if (sig > here.lo) {
        r.g_left = sides.g_left;
    } else if (here.k) {
        r.left_bound = sides.g_left;  // as if sigma - 1 were admissible: the true neighbour lies further left
    } else {
        std::vector<BigInt> u11 = u;
        u11.emplace_back(1);
        u11.emplace_back(1);
        r.left_bound = cf_value(u11) - cf_value(u);
    }
    if (sig < here.hi) {
        r.g_right = sides.g_right;
    } else if (n >= 2) {
        std::vector<BigInt> u1 = u, u2 = u;
        u1.emplace_back(1);
        u2.back() += 1;
        u2.emplace_back(1);
        u2.emplace_back(1);
        r.right_bound = cf_value(u2) - cf_value(u1);
    }
    std::optional<Rational> best;
    for (const auto* g : {&r.g_left, &r.g_right})
        if (*g && (!best || **g < *best)) best = **g;
    if (!best)
        for (const auto* g : {&r.left_bound, &r.right_bound})
            if (*g && (!best || **g < *best)) best = **g;
    r.g_min = *best;
    return r;
}

} // namespace cfdim
