#include <doctest.h>

#include "cfdim/dimension.hpp"
#include "cfdim/errors.hpp"

#include <cmath>

using namespace cfdim;

TEST_CASE("dim_F is the smallest depth estimate") {
    auto d = dim_F(Rational(2), 3, {1, 2, 3}, 1e-12);
    double m = 1;
    for (const auto& s : d.extrapolation.solutions) m = std::min(m, s.s_value);
    CHECK(d.estimate == m);
    CHECK(d.uncertainty >= 1e-12);
    CHECK_THROWS_AS(dim_F(Rational(1), 3, {1}, 1e-12), DomainError);
}

TEST_CASE("dim_F at large B with a finite alphabet stays well below 1/2") {
    // fixed alphabet: the estimate falls with B (mpmath oracle at n = 3: 0.16309...)
    auto d = dim_F(Rational(1000), 20, {1, 2, 3}, 1e-12);
    CHECK(d.estimate <= 0.163093834041341 + 1e-9);
    CHECK(d.estimate < 0.4);
    CHECK_FALSE(d.in_sanity_band);
}

TEST_CASE("dim E(b,c)") {
    auto d = dim_Ebc(2, 2, 8);
    CHECK(d.value == doctest::Approx(0.2));
    CHECK(d.evidence.size() == 8);
    CHECK_FALSE(d.flagged);
    CHECK(dim_Ebc(3, 2, 2).flagged);
    CHECK_THROWS_AS(dim_Ebc(1, 2, 3), DomainError);
}

TEST_CASE("expression compiler") {
    CHECK(compile_expression("2*n+1")(3) == 7);
    CHECK(compile_expression("n^2 - n/2")(4) == 14);
    CHECK(compile_expression("exp(log(n))")(5) == doctest::Approx(5));
    CHECK(compile_expression("sqrt(16) + e")(1) == doctest::Approx(4 + std::exp(1.0)));
    CHECK(compile_expression("-(n)")(2) == -2);
    CHECK(compile_expression("2^3^2")(1) == 512);  // right associative
    CHECK_THROWS_AS(compile_expression("2*"), DomainError);
    CHECK_THROWS_AS(compile_expression("foo(n)"), DomainError);
    CHECK_THROWS_AS(compile_expression("(n"), DomainError);
}

TEST_CASE("classifier: five growth cases") {
    ClassifyOptions opt;

    auto lin = classify_phi(PhiSpec::power(1), opt);
    CHECK(lin.tag == GrowthCase::B_eq_1);
    CHECK(lin.dimension.kind == GrowthDimension::Kind::Interval);
    CHECK(lin.dimension.value > 0);

    auto ex = classify_phi(PhiSpec::exponential(4), opt);
    CHECK(ex.tag == GrowthCase::B_finite);
    CHECK(ex.B_estimate == 4);
    CHECK(ex.dimension.kind == GrowthDimension::Kind::SB);
    auto direct = dim_F(Rational(4), opt.alpha, opt.depths, opt.tol);
    CHECK(ex.dimension.value == direct.estimate);

    auto sq = classify_phi(PhiSpec::from_log_expression(compile_expression("n^2")), opt);
    CHECK(sq.tag == GrowthCase::B_inf_b_eq_1);
    CHECK(sq.dimension.value == 0.5);
    CHECK(sq.heuristic);

    auto dexp = classify_phi(PhiSpec::double_exponential(3, 2), opt);
    CHECK(dexp.tag == GrowthCase::B_inf_b_finite);
    CHECK(dexp.dimension.value == doctest::Approx(0.1));

    auto tower = classify_phi(PhiSpec::from_log_log_expression(compile_expression("n^2")), opt);
    CHECK(tower.tag == GrowthCase::B_inf_b_inf);
    CHECK(tower.dimension.value == 0);
}

TEST_CASE("classifier heuristics on sampled growth") {
    ClassifyOptions opt;
    opt.evaluate_pressure = false;

    // phi(n) = 3^n: log phi / 2n = log(3)/2, so B = sqrt(3)
    std::vector<long double> t;
    for (int n = 1; n <= 60; ++n) t.push_back(std::pow(3.0L, n));
    auto g = classify_phi(PhiSpec::from_table(t), opt);
    CHECK(g.tag == GrowthCase::B_finite);
    CHECK(g.B_estimate == doctest::Approx(std::sqrt(3.0)).epsilon(1e-3));
    CHECK(g.heuristic);
    REQUIRE(g.reciprocal_sum);
    CHECK(*g.reciprocal_sum == doctest::Approx(0.5).epsilon(1e-6));

    // log log phi = 2n log 3, i.e. phi = e^{3^{2n}}: b = 3
    auto db = classify_phi(PhiSpec::from_log_log_expression(compile_expression("2*n*log(3)")), opt);
    CHECK(db.tag == GrowthCase::B_inf_b_finite);
    REQUIRE(db.b_estimate);
    CHECK(*db.b_estimate == doctest::Approx(3).epsilon(1e-2));

    auto poly = classify_phi(PhiSpec::from_log_expression(compile_expression("3*log(n)")), opt);
    CHECK(poly.tag == GrowthCase::B_eq_1);

    std::vector<long double> few(10, 2.0L);
    CHECK_THROWS_AS(classify_phi(PhiSpec::from_table(few), opt), ConfigError);
    CHECK_THROWS_AS(classify_phi(PhiSpec::from_log_expression(nullptr), opt), ConfigError);
    CHECK_THROWS_AS(PhiSpec::exponential(1), DomainError);
    CHECK_THROWS_AS(PhiSpec::double_exponential(2, 1), DomainError);
}

TEST_CASE("growth case labels") {
    CHECK(std::string(to_string(GrowthCase::B_inf_b_finite)) == "B_inf_b_finite");
    CHECK(std::string(to_string(GrowthCase::B_eq_1)) == "B_eq_1");
}
