#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "invmean/mean.hpp"
#include "invmean/orbit.hpp"
#include "invmean/transfinite.hpp"

namespace invmean {

/// Pass/fail threshold for residual checks; sits above the orbit tolerance to
/// absorb accumulated rounding.
inline constexpr double kResidualTolerance = 1e-9;

/// sup over the grid of |K(x,y) - K(M(x,y), N(x,y))|. A zero residual certifies
/// invariance on the grid only.
struct InvarianceReport {
    double max_residual = 0.0;
    std::optional<Point> witness;  // lexicographically smallest point attaining the max
    std::size_t grid_size = 0;

    bool passed(double tol = kResidualTolerance) const noexcept { return max_residual < tol; }
};

InvarianceReport invariance_residual(const Mean& k, const MeanPair& pair, const GridSpec& grid);

/// The pair map applied `times` times, as a pair of means.
MeanPair compose_pair(const MeanPair& pair, std::size_t times);

struct SymmetryReport {
    InvarianceReport invariance;
    bool checked = false;     // false: k is not invariant on the grid, the check was skipped
    bool symmetric = false;   // |k(x,y) - k(y,x)| < tol at every grid point
    double max_asymmetry = 0.0;
    std::optional<Point> witness;

    /// An invariant mean of a symmetric pair must be symmetric; a failure here is a bug.
    bool consistent() const noexcept { return !checked || symmetric; }
};

/// Requires a pair whose means are both declared symmetric.
SymmetryReport check_symmetry_of_invariant(const Mean& k, const MeanPair& pair,
                                           const GridSpec& grid,
                                           double tol = kResidualTolerance);

using Function2 = std::function<double(double, double)>;

enum class InverseStatus { checked, not_injective, not_monotone };

struct PhiDecompositionReport {
    // (a) Phi = Phi o (M, N) on the grid
    InvarianceReport invariance;
    bool invariant = false;
    // (c) Phi = f o Tr with f(t) = Phi(t, t)
    double max_decomposition_error = 0.0;
    std::optional<Point> decomposition_witness;
    bool decomposition_holds = false;
    // (d) Tr = f^{-1} o Phi, when f is monotone on the diagonal samples
    InverseStatus inverse_status = InverseStatus::not_injective;
    double max_inverse_error = 0.0;
    std::optional<Point> inverse_witness;
    bool inverse_holds = false;

    bool passed() const noexcept {
        return invariant && decomposition_holds &&
               (inverse_status != InverseStatus::checked || inverse_holds);
    }
};

/// Checks the decomposition Phi = f o Tr of an invariant function. Steps (c) and
/// (d) allow 10 * tol to cover the truncation of Tr. The iff characterization
/// only holds for continuous Phi; any expression is accepted and checked as far
/// as possible.
PhiDecompositionReport check_phi_decomposition(const Function2& phi, const MeanPair& pair,
                                               const GridSpec& grid,
                                               const StagePolicy& policy = {},
                                               double tol = kResidualTolerance);

struct OrderingEntry {
    std::string name;
    InvarianceReport invariance;
    bool invariant = false;   // candidates that are not invariant are excluded
    bool within = false;      // Lo - tol <= K <= Up + tol at every grid point
    std::optional<Point> witness;
    double distance_to_lo = 0.0;  // max |K - Lo| over the grid
    double distance_to_up = 0.0;  // max |K - Up| over the grid
};

struct OrderingReport {
    std::vector<OrderingEntry> entries;
    std::size_t grid_size = 0;

    bool passed() const noexcept;
};

/// Lo and Up are the least and greatest invariant means: every invariant
/// candidate must sit between them.
OrderingReport ordering_check(const MeanPair& pair, std::span<const Mean> candidates,
                              const GridSpec& grid, const ConvergencePolicy& policy = {},
                              double tol = kResidualTolerance);

}  // namespace invmean
