#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <vector>

#include "invmean/expr.hpp"
#include "invmean/mean.hpp"

namespace invmean::testing {

/// Seeded source of sample points for the hand-rolled property tests.
class PointGen {
public:
    explicit PointGen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    Point in(const Interval& d) { return {uniform(d.lo(), d.hi()), uniform(d.lo(), d.hi())}; }
    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline double k_closed_form(double c, double x, double y) {
    return std::abs(x - y) <= 1.0 ? (x + y) / 2 : (x + y + c) / 2;
}

/// Long double arithmetic-geometric iteration, independent of the library.
inline long double agm_oracle(long double a, long double b, long double tol = 1e-15L) {
    for (int i = 0; i < 200 && std::fabs(a - b) > tol; ++i) {
        const long double next_a = (a + b) / 2;
        b = std::sqrt(a * b);
        a = next_a;
    }
    return (a + b) / 2;
}

/// A pool of means on `domain` (lo > 0, length > 1) mixing built-ins, the
/// discontinuous K_c family, the example pair's components and lifted expressions.
inline std::vector<Mean> mean_pool(const Interval& domain) {
    std::vector<Mean> pool;
    for (auto kind : {BuiltinKind::arithmetic, BuiltinKind::geometric, BuiltinKind::harmonic,
                      BuiltinKind::min, BuiltinKind::max})
        pool.push_back(make_builtin(kind, domain));
    for (double p : {-3.0, -0.5, 0.5, 2.0, 7.0}) pool.push_back(make_builtin(Builtin{BuiltinKind::power, p}, domain));
    for (double c : {-1.0, 0.3, 1.0}) pool.push_back(make_kc(c, domain));
    const MeanPair example = make_example_pair(domain);
    pool.push_back(example.m());
    pool.push_back(example.n());
    const GridSpec grid = GridSpec::uniform(21);
    for (const char* src : {"if x < y then (2*x + y)/3 else (x + 2*y)/3", "x", "y",
                            "max(min(x, y), min(max(x, y), (x*x + y*y)/(x + y)))", "if abs(x-y) > 2 then min(x,y) + 0.5 else max(x,y)"})
        pool.push_back(lift_to_mean(parse(src), domain, grid, src));
    return pool;
}

}  // namespace invmean::testing
