#include <doctest.h>

#include "cfdim/cf_core.hpp"
#include "cfdim/errors.hpp"

#include <random>

using namespace cfdim;

namespace {

std::vector<BigInt> W(std::initializer_list<long> xs) {
    std::vector<BigInt> v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

// backward evaluation, independent of the convergent recurrence
Rational backward(long a0, const std::vector<BigInt>& w) {
    Rational t = 0;
    for (auto it = w.rbegin(); it != w.rend(); ++it) t = Rational(1) / (Rational(*it) + t);
    return Rational(a0) + t;
}

} // namespace

TEST_CASE("parse and print round trip") {
    CHECK(to_string(parse_cf("[2;1,3]")) == "[2;1,3]");
    CHECK(to_string(parse_cf("[7;]")) == "[7;]");
    CHECK(to_string(parse_cf(" [ 0 ; 4 , 5 ] ")) == "[0;4,5]");
    CHECK_THROWS_AS(parse_cf("[1;0]"), DomainError);
    CHECK_THROWS_AS(parse_cf("1;2"), DomainError);
    CHECK_THROWS_AS(parse_cf("[1;2,x]"), DomainError);
}

TEST_CASE("expand known values") {
    CHECK(to_string(expand(make_rational(415, 93), 64)) == "[4;2,6,7]");
    CHECK(to_string(expand(make_rational(7, 10), 64)) == "[0;1,2,3]");
    CHECK(to_string(expand(Rational(3), 64)) == "[3;]");
    CHECK(to_string(expand(make_rational(-1, 2), 64)) == "[-1;2]");
    auto cut = expand(make_rational(415, 93), 2);
    CHECK(cut.truncated);
    CHECK(cut.quotients.size() == 2);
}

TEST_CASE("Gauss map source yields quotients lazily") {
    GaussExpansion g(make_rational(415, 93));
    CHECK(g.integer_part() == 4);
    std::vector<BigInt> got;
    while (auto a = g.next()) got.push_back(*a);
    CHECK(got == W({2, 6, 7}));
    CHECK_FALSE(g.next());
}

TEST_CASE("convergents and determinant") {
    CFExpansion cf{0, W({1, 2, 3}), false};
    ConvergentTable t = convergents(cf, 3);
    CHECK(t.p(-1) == 1);
    CHECK(t.q(-1) == 0);
    CHECK(make_rational(t.p(1), t.q(1)) == 1);
    CHECK(make_rational(t.p(2), t.q(2)) == make_rational(2, 3));
    CHECK(make_rational(t.p(3), t.q(3)) == make_rational(7, 10));
    CHECK(t.determinant_ok());
    CHECK_THROWS_AS(convergents(cf, 4), RangeError);
}

TEST_CASE("canonical form merges a trailing 1") {
    CHECK(to_string(canonicalize(parse_cf("[0;2,1]"))) == "[0;3]");
    CHECK(to_string(canonicalize(parse_cf("[4;1]"))) == "[5;]");
    CHECK(parse_cf("[0;2,3]").canonical());
    CHECK_FALSE(parse_cf("[0;2,1]").canonical());
    CHECK(evaluate(parse_cf("[0;2,1]")) == evaluate(parse_cf("[0;3]")));
}

TEST_CASE("compare follows the value order") {
    CHECK(compare(parse_cf("[0;1]"), parse_cf("[0;2]")) == std::strong_ordering::greater);
    CHECK(compare(parse_cf("[0;2]"), parse_cf("[0;2,5]")) == std::strong_ordering::greater);
    CHECK(compare(parse_cf("[0;2,5]"), parse_cf("[0;2,5,1]")) == std::strong_ordering::less);
    CHECK(compare(parse_cf("[1;]"), parse_cf("[0;1]")) == std::strong_ordering::equal);
    CHECK(compare(parse_cf("[1;3]"), parse_cf("[1;3]")) == std::strong_ordering::equal);
}

TEST_CASE("cylinders: endpoints, orientation, length") {
    Cylinder c1 = cylinder(W({1}));
    CHECK(c1.left == make_rational(1, 2));
    CHECK(c1.right == 1);
    CHECK_FALSE(c1.left_closed);
    CHECK(c1.right_closed);

    Cylinder c11 = cylinder(W({1, 1}));
    CHECK(c11.left == make_rational(1, 2));
    CHECK(c11.right == make_rational(2, 3));
    CHECK(c11.left_closed);
    CHECK_FALSE(c11.right_closed);

    Cylinder c2 = cylinder(W({2}));
    CHECK(c2.left == make_rational(1, 3));
    CHECK(c2.right == make_rational(1, 2));
    CHECK(c2.length == make_rational(1, 6));
    CHECK(c2.contains(make_rational(1, 2)));
    CHECK_FALSE(c2.contains(make_rational(1, 3)));
}

TEST_CASE("property: random words") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> len(1, 8), q(1, 9), extra(2, 50);  // a trailing 1 is the open endpoint
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<BigInt> w;
        int n = len(rng);
        for (int i = 0; i < n; ++i) w.emplace_back(q(rng));
        CFExpansion cf{0, w, false};
        CHECK(evaluate(cf) == backward(0, w));

        ConvergentTable t = convergents(cf, w.size());
        CHECK(t.determinant_ok());
        CHECK(denominator_of(w) == t.q(n));

        Cylinder c = cylinder(w);
        CHECK(c.length == make_rational(1, t.q(n) * (t.q(n) + t.q(n - 1))));
        CHECK(c.right - c.left == c.length);
        // every extension lands inside the cylinder
        auto w2 = w;
        w2.emplace_back(extra(rng));
        CHECK(c.contains(evaluate(CFExpansion{0, w2, false})));
        CHECK(c.contains(evaluate(cf)));

        CFExpansion canon = canonicalize(cf);
        CHECK(canon.canonical());
        CHECK(evaluate(canon) == evaluate(cf));
        CHECK(expand(evaluate(cf), 64) == canon);
    }
}
