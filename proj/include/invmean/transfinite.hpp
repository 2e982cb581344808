#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "invmean/mean.hpp"
#include "invmean/orbit.hpp"

namespace invmean {

/// Desk-scale stand-in for iterating up to the first uncountable ordinal:
/// alternate limit stages (orbit run to stabilization) with single successor
/// steps, at most max_limit_stages times.
struct StagePolicy {
    ConvergencePolicy inner;
    std::size_t max_limit_stages = 64;
    /// Resolution at which the sum and the width of a non-diagonal limit pair are
    /// represented before the successor step is taken. A truncated limit stage
    /// stops short of the exact limit by about gap_tol; rounding to a dyadic lattice
    /// much coarser than that recovers limits that lie on the lattice (an integer
    /// gap, say) exactly, so a mean that is discontinuous right at the limit is
    /// evaluated on the correct side. 0 disables the rounding.
    double limit_resolution = 0x1p-32;
    bool record_successors = false;

    void validate() const;
};

enum class StageKind { limit, successor };

struct StageRecord {
    StageKind kind = StageKind::limit;
    double a = 0.0;  // lower component
    double b = 0.0;  // upper component
};

struct TransfiniteReport {
    double tr_value = 0.0;  // midpoint of the final pair
    std::vector<StageRecord> stage_pairs;
    std::size_t limit_stages_used = 0;
    std::size_t successor_steps = 0;
    bool terminated_diagonal = false;
    bool approximate = false;  // stage budget exhausted or some limit stage hit max_steps
};

/// Returns the pair to stage with: the pair itself when flagged comparable, its
/// meet/join pair when both means are symmetric. Throws InvalidArgument otherwise.
MeanPair staging_pair(const MeanPair& pair);

/// Staged iteration from (x, y). The first limit record approximates (Lo, Up).
TransfiniteReport transfinite_iterate(const MeanPair& pair, double x, double y,
                                      const StagePolicy& policy = {});

/// Tr as a mean.
Mean transfinite_mean(const MeanPair& pair, const StagePolicy& policy = {});

enum class StageComponent { a, b };

/// (x, y) -> component of the pair after `stage` limit stages (stage >= 1). Once the
/// staging has reached the diagonal every later stage returns Tr.
Mean stage_mean(const MeanPair& pair, std::size_t stage, StageComponent component,
                const StagePolicy& policy = {});

struct UniquenessProbe {
    double resolution = 0.0;       // grid spacing h
    double modulus = 0.0;          // max |Tr(p) - Tr(q)| over adjacent nodes
    double jump_threshold = 0.0;
    bool jump_detected = false;
    std::optional<std::pair<Point, Point>> witness;  // adjacent nodes with the largest jump
    std::string verdict;
};

/// Heuristic continuity probe for Tr on the uniform part of the grid. A jump
/// larger than jump_factor * h between adjacent nodes suggests that the pair
/// admits no continuous invariant mean; no jump proves nothing.
UniquenessProbe probe_continuous_uniqueness(const MeanPair& pair, const GridSpec& grid,
                                            const StagePolicy& policy = {},
                                            double jump_factor = 4.0);

}  // namespace invmean
