#include "cfdim/decompose.hpp"

#include <algorithm>

namespace cfdim {

CFExpansion EvenRestrictedSeq::materialize() const {
    CFExpansion cf;
    cf.integer_part = integer_part;
    for (const auto& a : even_quotients) {
        cf.quotients.emplace_back(1);
        cf.quotients.push_back(a);
    }
    if (odd_tail) cf.quotients.emplace_back(1);
    return cf;
}

const char* to_string(DecompOp op) { return op == DecompOp::Sum ? "sum" : "product"; }

const char* to_string(DecompStatus st) {
    return st == DecompStatus::TerminatedExactly ? "terminated_exactly" : "truncated";
}

EvenSelection select_even_quotient(const Rational& target, const ConvergentTable& prefix) {
    long d = prefix.depth();
    if (d < 1 || d % 2 == 0 || prefix.p(d) - prefix.p(d - 1) != prefix.p(d - 2) ||
        prefix.q(d) - prefix.q(d - 1) != prefix.q(d - 2))
        throw DomainError("selection prefix must end with an odd-position quotient 1");
    const BigInt &p1 = prefix.p(d), &q1 = prefix.q(d), &p2 = prefix.p(d - 1), &q2 = prefix.q(d - 1);
    auto value = [&](const BigInt& c) { return make_rational(c * p1 + p2, c * q1 + q2); };

    Rational sup = make_rational(p1, q1);
    Rational floor_value = value(1);
    if (target < floor_value)
        throw InfeasibleSelection(InfeasibleSelection::Side::Below,
                                  "target " + to_string(target) + " below [prefix,1,1] = " + to_string(floor_value));
    if (target >= sup)
        throw InfeasibleSelection(InfeasibleSelection::Side::AtOrAbove,
                                  "target " + to_string(target) + " not below [prefix,1] = " + to_string(sup));

    // invert c -> (c p1 + p2)/(c q1 + q2) at target u/v; denominator is positive since target < sup
    const BigInt &u = target.get_num(), &v = target.get_den();
    BigInt num = u * q2 - v * p2, den = v * p1 - u * q1;
    BigInt c;
    mpz_fdiv_q(c.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (c < 1) c = 1;
    if (value(c + 1) <= target) c += 1;
    if (value(c) > target) c -= 1;
    if (c < 1 || value(c) > target || value(c + 1) <= target)
        throw InvariantViolation("even-quotient inversion failed for target " + to_string(target));
    return {c, value(c) == target};
}

GreedyDecomposer::GreedyDecomposer(DecompOp op, const Rational& x) : op_(op) {
    BigInt fl = floor_of(x);
    if (op == DecompOp::Sum) {
        shift_ = fl - 1;
        x_ = x - Rational(shift_);
        a_ = ConvergentTable(0);
        history_.push_back({Rational(shift_) + Rational(3, 2), Rational(shift_ + 2)});
    } else {
        shift_ = 0;
        x_ = x;
        a_ = ConvergentTable(fl);
        history_.push_back({Rational(fl) + Rational(1, 2), Rational(fl + 1)});
    }
    a_.push(1);
    b_ = ConvergentTable(0);
    b_.push(1);
}

Rational GreedyDecomposer::combine(const Rational& u, const Rational& v) const {
    return op_ == DecompOp::Sum ? Rational(u + v + shift_) : Rational(u * v);
}

Rational GreedyDecomposer::residual(const Rational& v) const {
    return op_ == DecompOp::Sum ? Rational(x_ - v) : Rational(x_ / v);
}

std::optional<StepRecord> GreedyDecomposer::next() {
    if (terminated_) return std::nullopt;
    StepRecord rec;
    rec.k = steps_ + 1;
    auto tagged = [&](const char* which, auto&& f) {
        try {
            return f();
        } catch (const InfeasibleSelection& e) {
            throw InfeasibleSelection(e.side, "step " + std::to_string(rec.k) + " (" + which + "): " + e.what());
        }
    };

    Rational b_prev = b_.value();
    EvenSelection sa = tagged("first", [&] { return select_even_quotient(residual(b_prev), a_); });
    a_.push(sa.c);
    a_even_.push_back(sa.c);
    rec.a = sa.c;
    Rational a_even = a_.value();
    if (sa.exact) {
        terminated_ = true;
        first_tail_ = false;
        second_tail_ = true;
        steps_ = rec.k;
        rec.exact = true;
        return rec;
    }
    a_.push(1);
    Rational a_odd = a_.value();

    EvenSelection sb = tagged("second", [&] { return select_even_quotient(residual(a_odd), b_); });
    b_.push(sb.c);
    b_even_.push_back(sb.c);
    rec.b = sb.c;
    Rational b_even = b_.value();
    steps_ = rec.k;
    if (sb.exact) {
        terminated_ = true;
        first_tail_ = true;
        second_tail_ = false;
        rec.exact = true;
        return rec;
    }
    b_.push(1);
    Rational b_odd = b_.value();

    Bracket nb = history_.back();
    nb.low = std::max({nb.low, combine(a_even, b_prev), combine(a_odd, b_even)});
    nb.high = std::min({nb.high, combine(a_odd, b_prev), combine(a_odd, b_odd)});
    history_.push_back(nb);
    return rec;
}

DecompositionResult GreedyDecomposer::result() const {
    DecompositionResult r;
    r.op = op_;
    r.x = x_ + Rational(shift_);
    r.first.integer_part = op_ == DecompOp::Sum ? shift_ : a_.p(0);
    r.first.even_quotients = a_even_;
    r.second.integer_part = 0;
    r.second.even_quotients = b_even_;
    r.steps = steps_;
    r.history = history_;
    if (terminated_) {
        r.status = DecompStatus::TerminatedExactly;
        r.first.odd_tail = first_tail_;
        r.second.odd_tail = second_tail_;
        r.bracket = {r.x, r.x};
    } else {
        r.status = DecompStatus::Truncated;
        r.bracket = history_.back();
    }
    return r;
}

namespace {

bool in_domain(const Rational& x) {
    Rational frac = x - Rational(floor_of(x));
    return frac == 0 || frac >= Rational(1, 2);
}

DecompositionResult closed_form(DecompOp op, const Rational& x, const BigInt& first_a0) {
    DecompositionResult r;
    r.op = op;
    r.x = x;
    r.first.integer_part = first_a0;
    r.first.odd_tail = true;
    r.second.integer_part = 0;
    r.second.odd_tail = true;
    r.status = DecompStatus::TerminatedExactly;
    r.bracket = {x, x};
    r.history.push_back(r.bracket);
    return r;
}

DecompositionResult run(DecompOp op, const Rational& x, std::size_t k_max) {
    GreedyDecomposer g(op, x);
    while (!g.terminated() && g.steps() < k_max) g.next();
    return g.result();
}

} // namespace

DecompositionResult sum_decompose(const Rational& x, std::size_t k_max) {
    if (!in_domain(x)) throw DomainError("sum decomposition needs x in Z + [1/2, 1]; got " + to_string(x));
    if (x.get_den() == 1) return closed_form(DecompOp::Sum, x, x.get_num() - 2);  // [x-2;1] + [0;1]
    return run(DecompOp::Sum, x, k_max);
}

DecompositionResult product_decompose(const Rational& x, std::size_t k_max) {
    if (x <= 0 || !in_domain(x))
        throw DomainError("product decomposition needs positive x in Z + [1/2, 1]; got " + to_string(x));
    if (x.get_den() == 1) return closed_form(DecompOp::Product, x, x.get_num() - 1);  // [x-1;1] * [0;1]
    return run(DecompOp::Product, x, k_max);
}

VerificationReport verify_decomposition(const DecompositionResult& r, const Rational& x, DecompOp op) {
    VerificationReport rep;
    auto fail = [&](std::optional<std::size_t> step, std::string msg) {
        rep.pass = false;
        rep.failed_step = step;
        rep.message = std::move(msg);
        return rep;
    };
    auto combine = [&](const Rational& u, const Rational& v) { return op == DecompOp::Sum ? Rational(u + v) : Rational(u * v); };
    auto prefix_value = [](const EvenRestrictedSeq& s, std::size_t j, bool tail) {
        EvenRestrictedSeq p{s.integer_part, {s.even_quotients.begin(), s.even_quotients.begin() + static_cast<long>(j)}, tail};
        return p.value();
    };

    const auto& A = r.first;
    const auto& B = r.second;
    std::size_t ka = A.even_quotients.size(), kb = B.even_quotients.size();
    bool terminated = r.status == DecompStatus::TerminatedExactly;
    bool stop_first = terminated && ka == kb + 1;
    bool stop_second = terminated && ka == kb && ka > 0;
    if (!(ka == kb || stop_first)) return fail(std::nullopt, "sequence lengths inconsistent with the alternation");
    for (const auto* s : {&A, &B})
        for (const auto& a : s->even_quotients)
            if (a < 1) return fail(std::nullopt, "non-positive even quotient");

    for (std::size_t j = 1; j <= ka; ++j) {
        std::string at = "step " + std::to_string(j);
        Rational b_prev = prefix_value(B, j - 1, true);
        Rational a_even = prefix_value(A, j, false), a_odd = prefix_value(A, j, true);
        Rational lo1 = combine(a_even, b_prev), hi1 = combine(a_odd, b_prev);
        if (stop_first && j == ka) {
            if (lo1 != x) return fail(j, at + ": first selection should close exactly");
        } else if (!(lo1 <= x && x < hi1)) {
            return fail(j, at + ": first-component inequality violated");
        }
        if (j > kb) break;
        Rational b_even = prefix_value(B, j, false), b_odd = prefix_value(B, j, true);
        Rational lo2 = combine(a_odd, b_even), hi2 = combine(a_odd, b_odd);
        if (stop_second && j == ka) {
            if (lo2 != x) return fail(j, at + ": second selection should close exactly");
        } else if (!(lo2 <= x && x < hi2)) {
            return fail(j, at + ": second-component inequality violated");
        }
    }

    if (terminated) {
        if (combine(A.value(), B.value()) != x)
            return fail(ka == 0 ? std::nullopt : std::optional<std::size_t>(ka), "exact reconstruction failed");
        rep.residual_width = 0;
        return rep;
    }
    for (std::size_t i = 0; i < r.history.size(); ++i) {
        const Bracket& b = r.history[i];
        if (!(b.low <= x && x < b.high)) return fail(i, "bracket does not contain x");
        if (i > 0 && (b.low < r.history[i - 1].low || b.high > r.history[i - 1].high))
            return fail(i, "bracket widened");
    }
    if (!(r.bracket.low <= x && x < r.bracket.high)) return fail(r.steps, "final bracket does not contain x");
    rep.residual_width = r.bracket.width();
    return rep;
}

} // namespace cfdim
