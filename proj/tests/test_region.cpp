#include "support.hpp"

#include "qbd/region.hpp"

#include <doctest.h>

using namespace qbd;
using namespace testing;

TEST_SUITE("region") {

TEST_CASE("case names") {
    for (RegionCase c : {RegionCase::case1, RegionCase::case2a, RegionCase::case2b, RegionCase::case2c, RegionCase::case2d})
        CHECK(region_case_from_string(to_string(c)) == c);
    CHECK_THROWS_AS(region_case_from_string("case3"), ParameterError);
}

TEST_CASE("grid axes are cell centred") {
    const GridAxis g{0, 1, 4};
    CHECK(g.at(0) == doctest::Approx(0.125));
    CHECK(g.at(3) == doctest::Approx(0.875));
    const auto [a, b] = default_region_axes(kP321, RegionCase::case1, 10);
    CHECK(a.hi > case1_s21_bound(kP321));
    CHECK(b.hi > case1_s11_bound(kP321, case1_s21_bound(kP321)));
}

TEST_CASE("region seeds follow the case coordinates") {
    CHECK(max_diff(region_alpha0(kP321, RegionCase::case1, 0.05L, 0.3L), alpha0_case1(kP321, 0.05L, 0.3L)) == 0);
    CHECK(max_diff(region_alpha0(kP122, RegionCase::case2a, 0.5L, 0.7L), alpha0_case2a(kP122, 0.5L, 0.7L)) == 0);
    CHECK(max_diff(region_alpha0(kP122, RegionCase::case2d, 0.5L, 0.7L), alpha0_case2d(0.5L, 0.7L)) == 0);
}

TEST_CASE("case 1 membership at sample points") {
    // Well inside: both labels agree and the mass is nonnegative.
    RegionQuery q{RegionCase::case1, Real(1) / 24, Real(0.3), 50};
    RegionResult r = region_membership(kP321, q);
    REQUIRE(r.analytic_inside.has_value());
    CHECK(*r.analytic_inside);
    CHECK(r.stochastic_ok);
    REQUIRE(r.m_psd.has_value());
    CHECK(*r.m_psd);

    // Past the s21 bound the factors lose positivity.
    q.s_a = Real(1) / 12 * Real(1.3);
    q.s_b = Real(0.3);
    r = region_membership(kP321, q);
    CHECK_FALSE(*r.analytic_inside);
    CHECK_FALSE(r.stochastic_ok);
    CHECK(r.min_entry < 0);
}

TEST_CASE("case 2a corner is inside") {
    const RegionResult r = region_membership(kP122, RegionQuery{RegionCase::case2a, 1, 1, 50});
    REQUIRE(r.analytic_inside.has_value());
    CHECK(*r.analytic_inside);
    CHECK(r.stochastic_ok);
    CHECK_FALSE(r.m_psd.has_value());
}

TEST_CASE("cases without an analytic formula report none") {
    const RegionResult r = region_membership(kP122, RegionQuery{RegionCase::case2c, 0.2L, 0.4L, 20});
    CHECK_FALSE(r.analytic_inside.has_value());
    CHECK_FALSE(r.m_psd.has_value());
}

TEST_CASE("a singular seed is reported as outside with a reason") {
    const RegionResult r = region_membership(kP122, RegionQuery{RegionCase::case2c, 0, 0, 20});
    CHECK_FALSE(r.stochastic_ok);
    CHECK_FALSE(r.reason.empty());
}

TEST_CASE("small scans agree with the analytic regions") {
    const auto [a1, b1] = default_region_axes(kP321, RegionCase::case1, 24);
    const RegionScan s1 = scan_region(kP321, RegionCase::case1, a1, b1, 50, 2);
    CHECK(s1.compared > 0);
    CHECK(s1.agreement() >= 0.99);

    const auto [a2, b2] = default_region_axes(kP122, RegionCase::case2a, 24);
    const RegionScan s2 = scan_region(kP122, RegionCase::case2a, a2, b2, 50, 2);
    CHECK(s2.compared > 0);
    CHECK(s2.agreement() >= 0.99);
}

TEST_CASE("scan results do not depend on the thread count") {
    const auto [a, b] = default_region_axes(kP321, RegionCase::case1, 12);
    const RegionScan one = scan_region(kP321, RegionCase::case1, a, b, 30, 1);
    const RegionScan many = scan_region(kP321, RegionCase::case1, a, b, 30, 4);
    REQUIRE(one.cells.size() == many.cells.size());
    for (std::size_t i = 0; i < one.cells.size(); ++i) {
        CHECK(one.cells[i].stochastic_ok == many.cells[i].stochastic_ok);
        CHECK(one.cells[i].min_entry == many.cells[i].min_entry);
        CHECK(one.cells[i].m_psd == many.cells[i].m_psd);
    }
    CHECK(one.boundary == many.boundary);
    CHECK(one.agreed == many.agreed);
    CHECK_THROWS_AS(scan_region(kP321, RegionCase::case1, GridAxis{0, 1, 0}, b, 30, 1), ParameterError);
}

}
