#include <doctest.h>

#include <cmath>
#include <limits>

#include "invmean/error.hpp"
#include "invmean/mean.hpp"
#include "support.hpp"

using namespace invmean;
using invmean::testing::k_closed_form;
using invmean::testing::PointGen;

TEST_CASE("interval rejects degenerate and unbounded input") {
    CHECK_THROWS_AS(Interval(1.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(Interval(2.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(Interval(0.0, std::numeric_limits<double>::infinity()), InvalidArgument);
    CHECK_THROWS_AS(Interval(std::nan(""), 1.0), InvalidArgument);
    const Interval d(0.0, 10.0);
    CHECK(d.contains(0.0));
    CHECK(d.contains(10.0));
    CHECK_FALSE(d.contains(10.5));
    CHECK(d.length() == 10.0);
}

TEST_CASE("builtin means") {
    const Interval d(1.0, 4.0);
    CHECK(make_builtin(BuiltinKind::arithmetic, d)(1, 3) == 2.0);
    CHECK(make_builtin(BuiltinKind::geometric, d)(1, 4) == doctest::Approx(2.0));
    CHECK(make_builtin(BuiltinKind::harmonic, d)(1, 3) == doctest::Approx(1.5));
    CHECK(make_builtin(Builtin{BuiltinKind::power, 2.0}, d)(1, 3) == doctest::Approx(std::sqrt(5.0)));
    CHECK(make_builtin(BuiltinKind::min, d)(3, 1) == 1.0);
    CHECK(make_builtin(BuiltinKind::max, d)(3, 1) == 3.0);
    CHECK_THROWS_AS(make_builtin(BuiltinKind::harmonic, Interval(0.0, 1.0)), InvalidArgument);
    CHECK_THROWS_AS(make_builtin(BuiltinKind::geometric, Interval(-1.0, 1.0)), InvalidArgument);
    CHECK_FALSE(make_builtin(BuiltinKind::geometric, Interval(0.0, 1.0)).is(MeanProperty::strict));
    CHECK_THROWS_AS(make_builtin(BuiltinKind::arithmetic, d)(0.5, 2.0), DomainError);
}

TEST_CASE("parse_builtin") {
    CHECK(parse_builtin("geometric")->kind == BuiltinKind::geometric);
    const auto p = parse_builtin("power:-1.5");
    REQUIRE(p);
    CHECK(p->kind == BuiltinKind::power);
    CHECK(p->exponent == -1.5);
    CHECK_FALSE(parse_builtin("median"));
    CHECK_FALSE(parse_builtin("power:"));
}

TEST_CASE("example pair on both branches") {
    const MeanPair pair = make_example_pair(Interval(0.0, 10.0));
    CHECK(pair.comparable());
    CHECK(pair.symmetric());
    const Point far = pair(0.0, 3.0);
    CHECK(far.x == doctest::Approx((3 - std::sqrt(3.0)) / 2).epsilon(1e-15));
    CHECK(far.y == doctest::Approx((3 + std::sqrt(3.0)) / 2).epsilon(1e-15));
    const Point near = pair(0.0, 0.5);
    CHECK(near.x == 0.25);
    CHECK(near.y == 0.25);
    // gap exactly 1 takes the midpoint branch
    CHECK(pair(2.0, 3.0).x == 2.5);
    CHECK_THROWS_AS(make_example_pair(Interval(0.0, 1.0)), InvalidArgument);
}

TEST_CASE("example pair keeps images above gap 1 on the far branch") {
    const MeanPair pair = make_example_pair(Interval(0.0, 10.0));
    PointGen gen(7);
    for (int i = 0; i < 10'000; ++i) {
        const double x = gen.uniform(0, 9);
        const double y = std::nextafter(x + 1.0, 11.0);
        if (y > 10.0 || !(y - x > 1.0)) continue;
        const Point p = pair(x, y);
        CHECK(p.y - p.x > 1.0);
        CHECK(p.x >= x);
        CHECK(p.y <= y);
    }
}

TEST_CASE("K_c family") {
    const Interval d(0.0, 10.0);
    for (double c : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        const Mean k = make_kc(c, d);
        CHECK(k(0, 3) == doctest::Approx(k_closed_form(c, 0, 3)));
        CHECK(k(4, 4.5) == 4.25);
    }
    CHECK_THROWS_AS(make_kc(1.5, d), InvalidArgument);
}

TEST_CASE("convex combinations of K_-1 and K_1 are K_c") {
    const Interval d(0.0, 10.0);
    const Mean lo = make_kc(-1, d);
    const Mean up = make_kc(1, d);
    PointGen gen(11);
    for (int i = 0; i < 10'000; ++i) {
        const double t = gen.uniform(0, 1);
        const Point p = gen.in(d);
        const double v = convex_combine(lo, up, t)(p.x, p.y);
        CHECK(std::abs(v - k_closed_form(2 * t - 1, p.x, p.y)) < 1e-12);
    }
    CHECK_THROWS_AS(convex_combine(lo, up, 1.5), InvalidArgument);
}

TEST_CASE("meet_join is comparable and stays a mean") {
    const Interval d(1.0, 5.0);
    const MeanPair pair(make_builtin(BuiltinKind::arithmetic, d), make_builtin(BuiltinKind::geometric, d));
    const MeanPair mj = meet_join(pair);
    CHECK(mj.comparable());
    const Point p = mj(1.0, 4.0);
    CHECK(p.x == doctest::Approx(2.0));
    CHECK(p.y == 2.5);
}

TEST_CASE("builtins satisfy mean bounds on random pairs") {
    const Interval d(0.5, 20.0);
    PointGen gen(3);
    const Builtin kinds[] = {{BuiltinKind::arithmetic, 1}, {BuiltinKind::geometric, 1}, {BuiltinKind::harmonic, 1},
                             {BuiltinKind::power, 3},      {BuiltinKind::power, -2},    {BuiltinKind::min, 1},
                             {BuiltinKind::max, 1}};
    for (const Builtin& b : kinds) {
        const Mean m = make_builtin(b, d);
        for (int i = 0; i < 10'000; ++i) {
            const Point p = gen.in(d);
            const double v = m(p.x, p.y);
            REQUIRE(std::min(p.x, p.y) <= v);
            REQUIRE(v <= std::max(p.x, p.y));
        }
    }
}

TEST_CASE("example pair properties on a grid") {
    const MeanPair pair = make_example_pair(Interval(0.0, 10.0));
    SUBCASE("all hold when no node pair sits one ulp past gap 1") {
        const PropertyReport r = check_properties(pair, GridSpec::uniform(100));
        CHECK(r.all_hold());
    }
    SUBCASE("default grid: only strictness and weakIn break, at rounded gap-1 nodes") {
        const PropertyReport r = check_properties(pair, GridSpec{});
        CHECK(r.mean_bounds.holds);
        CHECK(r.symmetric.holds);
        CHECK(r.comparable_le.holds);
        for (const PropertyCheck* c : {&r.strict, &r.weak_in}) {
            if (c->holds) continue;
            REQUIRE(c->witness);
            const double gap = std::abs(c->witness->x - c->witness->y);
            CHECK(gap > 1.0);
            CHECK(gap - 1.0 < 1e-14);
        }
    }
}

TEST_CASE("property check reports the smallest witness") {
    const Interval d(0.0, 4.0);
    const MeanPair pair(make_builtin(BuiltinKind::max, d), make_builtin(BuiltinKind::min, d));
    const PropertyReport r = check_properties(pair, GridSpec::uniform(5));
    CHECK(r.mean_bounds.holds);
    CHECK_FALSE(r.strict.holds);
    REQUIRE(r.strict.witness);
    CHECK(*r.strict.witness == Point{0.0, 1.0});
    CHECK_FALSE(r.comparable_le.holds);
    CHECK_FALSE(comparable_on_grid(pair.m(), pair.n(), GridSpec::uniform(5)));
    CHECK(comparable_on_grid(pair.n(), pair.m(), GridSpec::uniform(5)));
}

TEST_CASE("grid sampling") {
    const Interval d(0.0, 10.0);
    const auto pts = sample_points(GridSpec{11, 5, 1}, d);
    CHECK(pts.size() == 121 + 5);
    CHECK(pts.front() == Point{0.0, 0.0});
    CHECK(pts[120] == Point{10.0, 10.0});
    CHECK(sample_points(GridSpec{11, 5, 1}, d) == pts);
    CHECK_THROWS_AS(sample_points(GridSpec{0, 0, 1}, d), InvalidArgument);
}
