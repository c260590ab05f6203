#include <doctest.h>

#include "cfdim/decompose.hpp"
#include "cfdim/errors.hpp"

#include <random>

using namespace cfdim;

namespace {

std::string cf_of(const EvenRestrictedSeq& s) { return to_string(s.materialize()); }

// backward evaluation of "[a0;a1,...]" without the library's convergents
Rational value_of(const std::string& text) {
    CFExpansion cf = parse_cf(text);
    Rational t = 0;
    for (auto it = cf.quotients.rbegin(); it != cf.quotients.rend(); ++it) t = Rational(1) / (Rational(*it) + t);
    return Rational(cf.integer_part) + t;
}

ConvergentTable prefix(std::initializer_list<long> qs) {
    ConvergentTable t(0);
    for (long a : qs) t.push(BigInt(a));
    return t;
}

} // namespace

TEST_CASE("special decompositions") {
    auto s = sum_decompose(make_rational(3, 2));
    CHECK(s.status == DecompStatus::TerminatedExactly);
    CHECK(cf_of(s.first) == "[0;1,1]");
    CHECK(cf_of(s.second) == "[0;1]");

    auto two = sum_decompose(Rational(2));
    CHECK(cf_of(two.first) == "[0;1]");
    CHECK(cf_of(two.second) == "[0;1]");

    auto half = product_decompose(make_rational(1, 2));
    CHECK(half.status == DecompStatus::TerminatedExactly);
    CHECK(cf_of(half.first) == "[0;1,1]");
    CHECK(cf_of(half.second) == "[0;1]");

    auto one = product_decompose(Rational(1));
    CHECK(cf_of(one.first) == "[0;1]");
    CHECK(cf_of(one.second) == "[0;1]");
}

TEST_CASE("worked examples") {
    auto s = sum_decompose(make_rational(8, 5));
    CHECK(cf_of(s.first) == "[0;1,1,1]");
    CHECK(cf_of(s.second) == "[0;1,14]");
    CHECK(value_of("[0;1,1,1]") + value_of("[0;1,14]") == make_rational(8, 5));

    // 5/2 closes on the first selection: [2;1,1] = 5/2
    auto p = product_decompose(make_rational(5, 2));
    CHECK(p.status == DecompStatus::TerminatedExactly);
    CHECK(cf_of(p.first) == "[2;1,1]");
    CHECK(cf_of(p.second) == "[0;1]");

    auto q = product_decompose(make_rational(13, 5));
    CHECK(cf_of(q.first) == "[2;1,1,1]");
    CHECK(cf_of(q.second) == "[0;1,39]");
    CHECK(value_of("[2;1,1,1]") * value_of("[0;1,39]") == make_rational(13, 5));

    // integers use the closed forms
    auto five = sum_decompose(Rational(5));
    CHECK(cf_of(five.first) == "[3;1]");
    CHECK(cf_of(five.second) == "[0;1]");
    auto seven = product_decompose(Rational(7));
    CHECK(cf_of(seven.first) == "[6;1]");
    CHECK(seven.first.value() * seven.second.value() == 7);
}

TEST_CASE("even quotient selection") {
    // [0;1,c] = c/(c+1)
    auto e = select_even_quotient(make_rational(3, 5), prefix({1}));
    CHECK(e.c == 1);
    CHECK_FALSE(e.exact);
    auto f = select_even_quotient(make_rational(3, 4), prefix({1}));
    CHECK(f.c == 3);
    CHECK(f.exact);
    auto g = select_even_quotient(make_rational(99, 100), prefix({1}));
    CHECK(g.c == 99);
    CHECK(g.exact);
    CHECK_THROWS_AS(select_even_quotient(make_rational(3, 5), prefix({2})), DomainError);
    CHECK_THROWS_AS(select_even_quotient(make_rational(3, 5), prefix({1, 2})), DomainError);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(sum_decompose(make_rational(6, 5)), DomainError);
    CHECK_THROWS_AS(product_decompose(Rational(0)), DomainError);
    CHECK_THROWS_AS(product_decompose(make_rational(1, 3)), DomainError);
}

TEST_CASE("stepwise decomposer matches the batch result") {
    Rational x = make_rational(183457, 100000);
    GreedyDecomposer g(DecompOp::Sum, x);
    std::size_t k = 0;
    while (auto st = g.next()) {
        ++k;
        CHECK(st->k == k);
        CHECK(st->a >= 1);
        if (g.terminated()) break;
    }
    auto r = sum_decompose(x);
    CHECK(g.result().first.even_quotients == r.first.even_quotients);
    CHECK(g.result().second.even_quotients == r.second.even_quotients);
}

TEST_CASE("truncation keeps a valid bracket") {
    Rational x = make_rational(183457, 100000);
    auto r = sum_decompose(x, 2);
    CHECK(r.status == DecompStatus::Truncated);
    CHECK(r.steps == 2);
    CHECK(r.bracket.low <= x);
    CHECK(x < r.bracket.high);
    CHECK(verify_decomposition(r, x, DecompOp::Sum).pass);
}

TEST_CASE("verification catches a tampered result") {
    Rational x = make_rational(37, 23);
    auto r = sum_decompose(x);
    REQUIRE(verify_decomposition(r, x, DecompOp::Sum).pass);
    r.first.even_quotients[1] += 1;
    auto v = verify_decomposition(r, x, DecompOp::Sum);
    CHECK_FALSE(v.pass);
    CHECK(v.failed_step.has_value());
}

TEST_CASE("property: random rationals decompose and verify") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long> den(2, 100000), whole(1, 6);
    for (DecompOp op : {DecompOp::Sum, DecompOp::Product}) {
        for (int i = 0; i < 150; ++i) {
            long q = den(rng);
            std::uniform_int_distribution<long> num((q + 1) / 2, q);
            Rational x = Rational(whole(rng)) + make_rational(num(rng), q);
            auto r = op == DecompOp::Sum ? sum_decompose(x, 6) : product_decompose(x, 6);
            auto v = verify_decomposition(r, x, op);
            CHECK_MESSAGE(v.pass, to_string(x) << ": " << v.message);
            for (const auto* s : {&r.first, &r.second}) {
                CFExpansion cf = s->materialize();
                for (std::size_t j = 0; j < cf.quotients.size(); j += 2) CHECK(cf.quotients[j] == 1);
            }
            for (std::size_t j = 1; j < r.history.size(); ++j) {
                CHECK(r.history[j].low >= r.history[j - 1].low);
                CHECK(r.history[j].high <= r.history[j - 1].high);
            }
            if (r.status == DecompStatus::TerminatedExactly) {
                Rational v2 = op == DecompOp::Sum ? Rational(r.first.value() + r.second.value())
                                                  : Rational(r.first.value() * r.second.value());
                CHECK(v2 == x);
            } else {
                CHECK(r.bracket.low <= x);
                CHECK(x < r.bracket.high);
            }
        }
    }
}
