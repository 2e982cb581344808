#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "invmean/expr.hpp"
#include "invmean/mean.hpp"
#include "invmean/orbit.hpp"

namespace invmean {

/// A map w: [0,1] -> [0,1]. Outputs are checked on every use.
class WeightFunction {
public:
    WeightFunction(std::string name, std::function<double(double)> fn);

    static WeightFunction constant(double v);
    static WeightFunction identity();
    /// Single-variable expression in x; an expression mentioning y is rejected.
    static WeightFunction from_expr(const MeanExpr& expr);

    /// Throws InvalidArgument if the weight leaves [0,1].
    double operator()(double t) const;
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
    std::function<double(double)> fn_;
};

enum class LimitKind { liminf, limsup, phi_w };

/// liminf, limsup, or phi_w(a) = liminf a_n + w(liminf a_{2n}) (limsup a_n - liminf a_n).
struct LimitLikeSpec {
    LimitKind kind = LimitKind::liminf;
    std::optional<WeightFunction> weight;  // set iff kind == phi_w

    static LimitLikeSpec liminf() { return {LimitKind::liminf, std::nullopt}; }
    static LimitLikeSpec limsup() { return {LimitKind::limsup, std::nullopt}; }
    static LimitLikeSpec phi(WeightFunction w) { return {LimitKind::phi_w, std::move(w)}; }

    std::string name() const;
    /// "liminf", "limsup" or "w:<expression in x>".
    static LimitLikeSpec parse(const std::string& text);
};

struct TailEstimate {
    double liminf_est = 0.0;
    double limsup_est = 0.0;
    std::size_t window = 0;
    bool exact = false;  // the window is an exact repetition of a detected period
    std::size_t period = 0;
};

/// Min and max over the last `window` entries, plus exact period detection
/// (period p <= window/2 repeating across the whole window).
TailEstimate tail_bounds(std::span<const double> seq, std::size_t window);

/// Applies the functional to the last `window` entries. "Even" entries are those
/// at 1-based positions 2, 4, 6, ... of the whole sequence (odd 0-based indices),
/// so parity is unaffected by a shift of two. For phi_w the values are mapped
/// affinely from `scale` onto [0,1] before w is applied; every value of the
/// window must lie in `scale`.
double apply_phi(const LimitLikeSpec& spec, std::span<const double> seq, std::size_t window,
                 const Interval& scale = Interval(0.0, 1.0));

/// Bo_phi(x,y) = phi(x_0, y_0, x_1, y_1, ...). Each evaluation runs the orbit to
/// convergence, continues it for window/2 further steps and applies phi to the
/// trailing `window` entries, which lie entirely past the convergence point.
/// phi_w rescales with the pair's domain. Throws ConvergenceError when the
/// envelope does not stabilize within the policy.
Mean bo_mean(const MeanPair& pair, const LimitLikeSpec& spec, const ConvergencePolicy& policy,
             std::size_t window = 16);

/// prefix followed by cycle repeated forever.
struct EventuallyPeriodic {
    std::vector<double> prefix;
    std::vector<double> cycle;

    double at(std::size_t i) const;  // 0-based
    std::vector<double> materialize(std::size_t length) const;
    /// (a_{k+1}, a_{k+2}, ...): the same sequence with its first k entries dropped.
    EventuallyPeriodic shifted(std::size_t k) const;
};

struct LimitLikeCase {
    double phi = 0.0;
    double phi_shifted = 0.0;  // phi of the sequence shifted by two
    double true_liminf = 0.0;  // min of the cycle
    double true_limsup = 0.0;  // max of the cycle
    bool shift_invariant = false;
    bool sandwiched = false;
};

struct LimitLikeReport {
    std::vector<LimitLikeCase> cases;
    std::optional<std::size_t> first_violation;  // index into cases

    bool passed() const noexcept { return !first_violation.has_value(); }
};

/// Checks (i) phi(a_1, a_2, ...) == phi(a_3, a_4, ...) and (ii) liminf <= phi <= limsup,
/// both exactly, on eventually periodic sequences. The evaluation window is a
/// multiple of lcm(period, 2) lying inside the periodic part, so tail bounds are exact.
/// phi_w sequences must take values in [0,1]. An empty cycle is rejected.
LimitLikeReport check_two_limit_like(const LimitLikeSpec& spec,
                                     std::span<const EventuallyPeriodic> sequences);

/// (0, x, 0, 1, 0, x, 0, 1, ...).
EventuallyPeriodic four_periodic_probe(double x);

/// Twenty eventually periodic sequences with values in [0,1]: the 4-periodic
/// probes for x = 0, 0.1, ..., 1 followed by nine sequences with prefixes and
/// periods 1, 2, 3, 5, 6 and 7.
std::vector<EventuallyPeriodic> standard_test_sequences();

}  // namespace invmean
