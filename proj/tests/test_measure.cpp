#include <doctest.h>

#include "cfdim/errors.hpp"
#include "cfdim/geometry.hpp"

#include <cmath>

using namespace cfdim;

namespace {

AdmissibleWord word(std::initializer_list<long> xs) {
    AdmissibleWord w;
    for (long x : xs) w.sigma.emplace_back(x);
    return w;
}

double q_even(std::initializer_list<long> evens) {
    // q of (1, e_1, 1, e_2, ...) by the plain recurrence
    double qm = 0, q = 1;
    for (long e : evens)
        for (long a : {1L, e}) {
            double t = a * q + qm;
            qm = q;
            q = t;
        }
    return q;
}

constexpr double kS1 = 0.21934711091194554;  // 16^-s + 36^-s = 1

} // namespace

TEST_CASE("s-table holds one exponent per gap") {
    Schedule s = Schedule::make({1, 3, 5, 8}, Rational(2), 2);
    STable t = build_s_table(s, 0.0);
    CHECK(t.size() == 2);  // gaps 0, 1, 1, 2
    CHECK(t.at(1) == doctest::Approx(kS1).epsilon(1e-14));
    CHECK(t.count(2));
}

TEST_CASE("measure values against hand formulas") {
    Schedule s = Schedule::make({1, 3}, Rational(2), 2);
    STable t = build_s_table(s, 0.0);

    auto m1 = measure_mu(s, word({5}), t);
    CHECK(m1.rule == 1);
    CHECK(m1.mu == doctest::Approx(0.25).epsilon(1e-15));

    // n = n_2 - 1: 1/M_1 * (B^2 q_2(1,sigma)^2)^-s_1, q_2 = sigma + 1
    for (long sig : {1L, 2L}) {
        auto m2 = measure_mu(s, word({6, sig}), t);
        CHECK(m2.rule == 2);
        double want = 0.25 * std::pow(4.0 * (sig + 1) * (sig + 1), -kS1);
        CHECK(m2.mu == doctest::Approx(want).epsilon(1e-13));
    }

    auto m3 = measure_mu(s, word({6, 2, 100}), t);
    CHECK(m3.rule == 1);
    CHECK(m3.mu == doctest::Approx(0.25 / 64 * std::pow(36.0, -kS1)).epsilon(1e-13));
    CHECK(m3.rel_error_bound > 0);
}

TEST_CASE("free-tail rule") {
    Schedule s = Schedule::make({1, 4}, Rational(2), 2);
    STable t = build_s_table(s, 0.0);
    double s2 = t.at(2);
    auto m = measure_mu(s, word({5, 2}), t);
    CHECK(m.rule == 3);
    double sum = 0;
    for (long a : {1L, 2L}) sum += std::pow(16.0 * std::pow(q_even({2, a}), 2), -s2);
    CHECK(m.mu == doctest::Approx(0.25 * sum).epsilon(1e-13));
    REQUIRE(m.exponents_used.size() == 1);
    CHECK(m.exponents_used[0].first == 2);
}

TEST_CASE("mass is conserved level by level") {
    for (auto idx : {std::vector<unsigned>{1, 3}, std::vector<unsigned>{1, 4}, std::vector<unsigned>{1, 2, 5}}) {
        Schedule s = Schedule::make(idx, parse_rational("3/2"), 3);
        STable t = build_s_table(s, 0.0);
        double total = 0;
        auto l1 = enumerate_Dn(s, 1, 1 << 20);
        while (auto w = l1.next()) total += measure_mu(s, *w, t).mu;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
        for (unsigned n = 1; n < s.last_index(); ++n) {
            auto st = enumerate_Dn(s, n, 1 << 20);
            while (auto w = st.next()) {
                double parent = measure_mu(s, *w, t).mu, sum = 0;
                auto next = s.range_at(n + 1);
                for (BigInt c = next.lo; c <= next.hi; ++c) {
                    AdmissibleWord ch = *w;
                    ch.sigma.push_back(c);
                    sum += measure_mu(s, ch, t).mu;
                }
                CHECK(std::fabs(sum - parent) <= 1e-12 * parent);
            }
        }
    }
}

TEST_CASE("measure errors") {
    Schedule s = Schedule::make({1, 3}, Rational(2), 2);
    STable t = build_s_table(s, 0.0);
    CHECK_THROWS_AS(measure_mu(s, word({5, 1, 65, 1}), t), ConfigError);
    CHECK_THROWS_AS(measure_mu(s, word({4}), t), DomainError);
    CHECK_THROWS_AS(measure_mu(s, word({5, 1}), STable{}), ConfigError);
}

TEST_CASE("estimation constants") {
    Schedule s = Schedule::make({1, 3}, Rational(2), 3);
    auto ep = EstimationParams::make(s, 0.05, 0.4, 1);
    CHECK(ep.t == doctest::Approx(0.3));
    CHECK(ep.log_c_I == doctest::Approx(2 * std::log(2.0) + std::log(3.0)));
    auto ep2 = EstimationParams::make(s, 0.05, 0.4, 2);
    // c_I = B^{2 n_1} alpha^{n_1} * B^{2 (n_1 + n_2)} alpha^{n_2}
    CHECK(ep2.log_c_I == doctest::Approx(10 * std::log(2.0) + 4 * std::log(3.0)));
    CHECK_THROWS_AS(EstimationParams::make(s, 0.3, 0.4, 1), DomainError);
    CHECK_THROWS_AS(EstimationParams::make(s, 0.1, 0.15, 1), DomainError);
    CHECK_THROWS_AS(EstimationParams::make(s, 0.05, 0.4, 3), DomainError);
}

TEST_CASE("Hoelder scan at desk scale") {
    Schedule s = Schedule::make({1, 3}, Rational(2), 3);
    STable t = build_s_table(s, 0.0);
    double sB = extrapolate_sB(s.B, s.alpha, {1, 2, 3}, 1e-12).estimate;
    auto ep = EstimationParams::make(s, 0.1, sB, 1);
    HolderScan hs = holder_scan(s, 3, t, ep);
    CHECK(hs.violations == 0);
    CHECK(hs.rows.size() == 4 + 4 * 3 + 4 * 3 * 64);
    for (const auto& r : hs.rows) CHECK(r.ratio >= ep.t - ep.eps - 1e-12);
}
