#include "cfdim/cf_core.hpp"

#include "cfdim/errors.hpp"

#include <cctype>

namespace cfdim {

bool CFExpansion::canonical() const {
    for (const auto& a : quotients)
        if (a < 1) return false;
    return quotients.empty() || quotients.back() >= 2;
}

std::string to_string(const CFExpansion& cf) {
    std::string s = "[" + cf.integer_part.get_str(10) + ";";
    for (std::size_t i = 0; i < cf.quotients.size(); ++i) {
        if (i) s += ",";
        s += cf.quotients[i].get_str(10);
    }
    return s + "]";
}

CFExpansion parse_cf(std::string_view text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.size() < 3 || t.front() != '[' || t.back() != ']')
        throw DomainError("continued fraction must look like [a0;a1,...]: '" + std::string(text) + "'");
    t = t.substr(1, t.size() - 2);
    auto semi = t.find(';');
    CFExpansion cf;
    auto num = [&](const std::string& s) {
        BigInt z;
        if (s.empty() || z.set_str(s, 10) != 0) throw DomainError("bad quotient '" + s + "' in '" + std::string(text) + "'");
        return z;
    };
    cf.integer_part = num(t.substr(0, semi));
    if (semi == std::string::npos) return cf;
    std::string rest = t.substr(semi + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
        auto comma = rest.find(',', pos);
        if (comma == std::string::npos) comma = rest.size();
        BigInt a = num(rest.substr(pos, comma - pos));
        if (a < 1) throw DomainError("partial quotients must be >= 1 in '" + std::string(text) + "'");
        cf.quotients.push_back(a);
        pos = comma + 1;
    }
    return cf;
}

GaussExpansion::GaussExpansion(const Rational& x) : a0_(floor_of(x)), frac_(x - Rational(a0_)) {}

std::optional<BigInt> GaussExpansion::next() {
    if (frac_ == 0) return std::nullopt;
    Rational inv = 1 / frac_;
    BigInt a = floor_of(inv);
    frac_ = inv - Rational(a);
    return a;
}

CFExpansion expand(const Rational& x, std::size_t max_terms) {
    GaussExpansion g(x);
    CFExpansion cf;
    cf.integer_part = g.integer_part();
    while (auto a = g.next()) {
        if (cf.quotients.size() == max_terms) {
            cf.truncated = true;
            break;
        }
        cf.quotients.push_back(*a);
    }
    return cf;
}

ConvergentTable::ConvergentTable(const BigInt& a0) : p_{1, a0}, q_{0, 1} {}

void ConvergentTable::push(const BigInt& a) {
    std::size_t n = p_.size();
    p_.push_back(a * p_[n - 1] + p_[n - 2]);
    q_.push_back(a * q_[n - 1] + q_[n - 2]);
}

bool ConvergentTable::determinant_ok() const {
    for (long k = 0; k <= depth(); ++k) {
        BigInt d = p(k) * q(k - 1) - p(k - 1) * q(k);
        if (d != ((k - 1) % 2 == 0 ? 1 : -1)) return false;
    }
    return true;
}

ConvergentTable convergents(const CFExpansion& cf, std::size_t upto) {
    if (upto > cf.quotients.size())
        throw RangeError("requested convergent " + std::to_string(upto) + " of an expansion with " +
                         std::to_string(cf.quotients.size()) + " quotients");
    ConvergentTable t(cf.integer_part);
    for (std::size_t i = 0; i < upto; ++i) t.push(cf.quotients[i]);
    return t;
}

Rational evaluate(const CFExpansion& cf) { return convergents(cf, cf.quotients.size()).value(); }

CFExpansion canonicalize(const CFExpansion& cf) {
    CFExpansion out = cf;
    for (const auto& a : out.quotients)
        if (a < 1) throw DomainError("partial quotients must be >= 1");
    if (!out.quotients.empty() && out.quotients.back() == 1) {
        out.quotients.pop_back();
        if (out.quotients.empty())
            out.integer_part += 1;
        else
            out.quotients.back() += 1;
    }
    return out;
}

namespace {

std::strong_ordering compare_canonical(const CFExpansion& a, const CFExpansion& b) {
    // index 0 is the integer part; a smaller term wins at even index, loses at odd
    auto term = [](const CFExpansion& c, std::size_t i) -> const BigInt& {
        return i == 0 ? c.integer_part : c.quotients[i - 1];
    };
    std::size_t la = a.quotients.size(), lb = b.quotients.size();
    std::size_t common = std::min(la, lb);
    for (std::size_t n = 0; n <= common; ++n) {
        int c = cmp(term(a, n), term(b, n));
        if (c == 0) continue;
        bool a_less = (n % 2 == 0) ? c < 0 : c > 0;
        return a_less ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (la == lb) return std::strong_ordering::equal;
    // one is a proper prefix of the other, ending at index n = common
    bool shorter_less = common % 2 == 0;
    bool a_less = (la < lb) == shorter_less;
    return a_less ? std::strong_ordering::less : std::strong_ordering::greater;
}

} // namespace

std::strong_ordering compare(const CFExpansion& a, const CFExpansion& b) {
    if (a.canonical() && b.canonical()) return compare_canonical(a, b);
    return compare_canonical(a.canonical() ? a : canonicalize(a), b.canonical() ? b : canonicalize(b));
}

BigInt denominator_of(const std::vector<BigInt>& word) {
    BigInt q_prev = 0, q = 1;
    for (const auto& a : word) {
        BigInt next = a * q + q_prev;
        q_prev = q;
        q = next;
    }
    return q;
}

bool Cylinder::contains(const Rational& x) const {
    bool above = left_closed ? x >= left : x > left;
    bool below = right_closed ? x <= right : x < right;
    return above && below;
}

Cylinder cylinder(const std::vector<BigInt>& word) {
    if (word.empty()) throw DomainError("cylinder of an empty word");
    ConvergentTable t(0);
    for (const auto& a : word) {
        if (a < 1) throw DomainError("partial quotients must be >= 1");
        t.push(a);
    }
    long n = t.depth();
    Rational conv = make_rational(t.p(n), t.q(n));
    Rational other = make_rational(t.p(n) + t.p(n - 1), t.q(n) + t.q(n - 1));
    Cylinder c;
    c.word = word;
    if (n % 2 == 0) {
        c.left = conv;
        c.right = other;
        c.left_closed = true;
    } else {
        c.left = other;
        c.right = conv;
        c.right_closed = true;
    }
    c.length = c.right - c.left;
    return c;
}

} // namespace cfdim
