#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <string>

#include "invmean/error.hpp"
#include "invmean/expr.hpp"
#include "support.hpp"

using namespace invmean;

namespace {

const char* const kExampleM = "if abs(x-y) <= 1 then (x+y)/2 else (x+y-sqrt(abs(x-y)))/2";

// Random well-formed source text; depth bounds the recursion.
std::string random_expr(std::mt19937_64& rng, int depth) {
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
    if (depth <= 0 || pick(4) == 0) {
        switch (pick(4)) {
        case 0: return "x";
        case 1: return "y";
        case 2: return std::to_string(pick(100));
        default: return std::to_string(pick(1000)) + "." + std::to_string(pick(1000)) + "e-" + std::to_string(pick(5));
        }
    }
    const std::string a = random_expr(rng, depth - 1);
    const std::string b = random_expr(rng, depth - 1);
    static const char* const ops[] = {"+", "-", "*", "/"};
    static const char* const cmps[] = {"<", "<=", ">", ">="};
    switch (pick(9)) {
    case 0:
    case 1: return a + " " + ops[pick(4)] + " " + b;
    case 2: return "(" + a + ")" + ops[pick(4)] + "(" + b + ")";
    case 3: return "-" + a;
    case 4: return (pick(2) ? "sqrt(" : "abs(") + a + ")";
    case 5: return (pick(2) ? "min(" : "max(") + a + ", " + b + (pick(2) ? ", x)" : ")");
    case 6: return "pow(" + a + ", " + (pick(2) ? "-" : "") + std::to_string(pick(4)) + ".5)";
    case 7:
        return "(if " + a + " " + cmps[pick(4)] + " " + b + " then " + random_expr(rng, depth - 1) + " else " +
               random_expr(rng, depth - 1) + ")";
    default: return "(" + a + ")";
    }
}

std::uint64_t bits(double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, sizeof u);
    return u;
}

}  // namespace

TEST_CASE("parse and evaluate basics") {
    CHECK(evaluate(parse("(x+y)/2"), 2, 4) == 3.0);
    CHECK(evaluate(parse("x - y - 1"), 5, 1) == 3.0);
    CHECK(evaluate(parse("2 * -x + 1"), 3, 0) == -5.0);
    CHECK(evaluate(parse("1 - 2 * 3"), 0, 0) == -5.0);
    CHECK(evaluate(parse("min(x, y, 0.5)"), 1, 2) == 0.5);
    CHECK(evaluate(parse("max(x, y)"), 1, 2) == 2.0);
    CHECK(evaluate(parse("pow(x, 2)"), 3, 0) == 9.0);
    CHECK(evaluate(parse("pow(x, -1)"), 4, 0) == 0.25);
    CHECK(evaluate(parse("1e2 + 2.5E-1"), 0, 0) == 100.25);
    CHECK(evaluate(parse("if x < y then x else y"), 1, 2) == 1.0);
    CHECK(evaluate(parse("if x >= y then x else y"), 1, 2) == 2.0);
}

TEST_CASE("piecewise mean from text") {
    const MeanExpr m = parse(kExampleM);
    CHECK(m(0, 3) == doctest::Approx((3 - std::sqrt(3.0)) / 2).epsilon(1e-15));
    CHECK(m(0, 3) == doctest::Approx(0.63397).epsilon(1e-5));
    CHECK(m(0, 0.5) == 0.25);
    // the guard is exact: gap 1 takes the first branch
    CHECK(m(2, 3) == 2.5);
}

TEST_CASE("syntax errors carry a position and the expected tokens") {
    try {
        parse("sqrt(x*");
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(e.position().line == 1);
        CHECK(e.position().column == 8);
        CHECK(std::string(e.what()).find("expected expression") != std::string::npos);
        CHECK_FALSE(e.expected().empty());
    }
    try {
        parse("x +\n  (y * 2");
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(e.position().line == 2);
    }
    CHECK_THROWS_AS(parse("z + 1"), ParseError);
    CHECK_THROWS_AS(parse("log(x)"), ParseError);
    CHECK_THROWS_AS(parse("min(x)"), ParseError);
    CHECK_THROWS_AS(parse("sqrt(x, y)"), ParseError);
    CHECK_THROWS_AS(parse("pow(x, y)"), ParseError);
    CHECK_THROWS_AS(parse("if x < y then x"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("x y"), ParseError);
    CHECK_THROWS_AS(parse("1 $ 2"), ParseError);
}

TEST_CASE("evaluation errors") {
    CHECK_THROWS_AS(evaluate(parse("sqrt(x-y)"), 0, 1), EvalError);
    CHECK_THROWS_AS(evaluate(parse("x / (y - 1)"), 0, 1), EvalError);
    CHECK_THROWS_AS(evaluate(parse("pow(x, 0.5)"), -1, 0), EvalError);
    try {
        evaluate(parse("x + sqrt(-1)"), 0, 0);
        FAIL("no error");
    } catch (const EvalError& e) {
        CHECK(e.position().column == 5);
    }
    // only the taken branch is evaluated
    CHECK(evaluate(parse("if x > 0 then sqrt(x) else sqrt(-x)"), 4, 0) == 2.0);
}

TEST_CASE("pretty printing round-trips") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 5'000; ++i) {
        const std::string src = random_expr(rng, 5);
        const MeanExpr e = parse(src);
        const MeanExpr again = parse(e.to_string());
        REQUIRE_MESSAGE(again == e, src);
        REQUIRE(again.to_string() == e.to_string());
    }
    CHECK(parse(kExampleM) == parse(parse(kExampleM).to_string()));
    CHECK_FALSE(parse("x - y") == parse("y - x"));
}

TEST_CASE("evaluation is deterministic") {
    std::mt19937_64 rng(5);
    invmean::testing::PointGen gen(6);
    for (int i = 0; i < 2'000; ++i) {
        const MeanExpr e = parse(random_expr(rng, 4));
        const Point p = gen.in(Interval(-5, 5));
        double first = 0.0;
        try {
            first = e(p.x, p.y);
        } catch (const EvalError&) {
            CHECK_THROWS_AS(e(p.x, p.y), EvalError);
            continue;
        }
        CHECK(bits(e(p.x, p.y)) == bits(first));
    }
}

TEST_CASE("parser survives arbitrary input") {
    std::mt19937_64 rng(2024);
    const std::string alphabet = "xy0123456789.eE+-*/()<>=, \n\tifthenelsqrabmnpow$#";
    std::size_t accepted = 0;
    for (int i = 0; i < 100'000; ++i) {
        std::string s;
        const std::size_t len = rng() % 40;
        const bool raw = i % 4 == 0;
        for (std::size_t k = 0; k < len; ++k)
            s.push_back(raw ? static_cast<char>(rng() % 256) : alphabet[rng() % alphabet.size()]);
        try {
            parse(s);
            ++accepted;
        } catch (const ParseError&) {
        }
    }
    CHECK(accepted > 0);

    CHECK_THROWS_AS(parse(std::string(100'000, '(')), ParseError);
    CHECK_THROWS_AS(parse(std::string(100'000, '-') + "x"), ParseError);
}

TEST_CASE("lift_to_mean") {
    const Interval d(0.0, 10.0);
    const GridSpec grid{};
    const Mean am = lift_to_mean(parse("(x+y)/2"), d, grid);
    CHECK(am.is(MeanProperty::symmetric));
    CHECK(am.is(MeanProperty::strict));

    const Mean proj = lift_to_mean(parse("x"), d, grid);
    CHECK_FALSE(proj.is(MeanProperty::strict));
    CHECK_FALSE(proj.is(MeanProperty::symmetric));

    try {
        lift_to_mean(parse("x+y"), Interval(1.0, 10.0), grid);
        FAIL("accepted");
    } catch (const MeanBoundsError& e) {
        CHECK(e.x() == 1.0);
        CHECK(e.y() == 1.0);
        CHECK(e.value() == 2.0);
    }
    CHECK_THROWS_AS(lift_to_mean(parse("sqrt(x-y)"), d, grid), EvalError);
}
