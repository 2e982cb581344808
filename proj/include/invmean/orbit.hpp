#pragma once

#include <cstddef>
#include <vector>

#include "invmean/mean.hpp"

namespace invmean {

/// Truncation rule for an orbit: stop once the envelope [min, max] of the pair
/// moves less than gap_tol in one step and its width changed by less than gap_tol.
struct ConvergencePolicy {
    double gap_tol = 1e-12;
    std::size_t max_steps = 100'000;

    void validate() const;
};

/// Prefix of the Gauss iteration x_{n+1} = M(x_n, y_n), y_{n+1} = N(x_n, y_n).
struct OrbitTrace {
    std::vector<Point> pairs;  // pairs[0] is the starting point
    bool converged = false;
    double final_gap = 0.0;

    /// Number of map applications performed.
    std::size_t steps() const noexcept { return pairs.empty() ? 0 : pairs.size() - 1; }
    const Point& last() const { return pairs.back(); }
};

/// Runs the iteration from (x, y). Each new pair is checked to lie inside the
/// envelope of its predecessor; a violation or a failing mean evaluation is
/// raised as OrbitError carrying the step index.
OrbitTrace iterate(const MeanPair& pair, double x, double y, const ConvergencePolicy& policy);

/// Appends `extra` further steps to a trace without any convergence test.
void extend_orbit(const MeanPair& pair, OrbitTrace& trace, std::size_t extra);

struct LowerUpper {
    double lo = 0.0;
    double up = 0.0;
    bool converged = false;  // false: values are approximate (max_steps hit)
    std::size_t steps = 0;
};

/// Lo = lim min(x_n, y_n), Up = lim max(x_n, y_n), read off the final pair.
LowerUpper lower_upper(const MeanPair& pair, double x, double y, const ConvergencePolicy& policy);

/// x_0, y_0, x_1, y_1, ... in order.
std::vector<double> interleave(const OrbitTrace& trace);

/// Row indices kept when exporting a long trace: all rows while the trace has at
/// most `cap` of them, otherwise the first cap/2 rows followed by logarithmically
/// spaced rows up to and including the last one.
std::vector<std::size_t> export_indices(std::size_t rows, std::size_t cap = 10'000);

/// True if min(x_n, y_n) never decreases, max(x_n, y_n) never increases and each
/// pair lies within the envelope of the previous one. Exact comparisons.
bool envelope_monotone(const OrbitTrace& trace);

}  // namespace invmean
