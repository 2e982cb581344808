#include "invmean/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "invmean/error.hpp"

namespace invmean {

namespace {

// Running maximum with lexicographically smallest witness on ties.
struct MaxTracker {
    double value = 0.0;
    std::optional<Point> at;

    void offer(double v, Point p) {
        if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
        if (!at || v > value || (v == value && p < *at)) {
            value = v;
            at = p;
        }
    }
};

double invert_monotone(const Function2& phi, double lo, double hi, bool increasing, double v) {
    auto f = [&](double t) { return phi(t, t); };
    for (int k = 0; k < 200; ++k) {
        const double mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) break;
        const bool below = increasing ? f(mid) < v : f(mid) > v;
        (below ? lo : hi) = mid;
    }
    return lo + (hi - lo) / 2;
}

}  // namespace

InvarianceReport invariance_residual(const Mean& k, const MeanPair& pair, const GridSpec& grid) {
    if (!(k.domain() == pair.domain())) throw InvalidArgument("mean and pair differ in domain");
    const auto points = sample_points(grid, pair.domain());
    MaxTracker worst;
    for (const Point p : points) {
        const Point image = pair(p);
        worst.offer(std::abs(k(p.x, p.y) - k(image.x, image.y)), p);
    }
    return {worst.value, worst.at, points.size()};
}

MeanPair compose_pair(const MeanPair& pair, std::size_t times) {
    if (times < 1) throw InvalidArgument("compose_pair needs at least one application");
    auto apply = [pair, times](double x, double y) {
        Point p{x, y};
        for (std::size_t i = 0; i < times; ++i) p = pair(p);
        return p;
    };
    const std::string suffix = "^" + std::to_string(times);
    Mean m(pair.m().name() + suffix, pair.domain(),
           [apply](double x, double y) { return apply(x, y).x; }, pair.m().properties());
    Mean n(pair.n().name() + suffix, pair.domain(),
           [apply](double x, double y) { return apply(x, y).y; }, pair.n().properties());
    return MeanPair(std::move(m), std::move(n), pair.comparable());
}

SymmetryReport check_symmetry_of_invariant(const Mean& k, const MeanPair& pair,
                                           const GridSpec& grid, double tol) {
    if (!pair.symmetric()) throw InvalidArgument("symmetry lemma needs a symmetric pair");
    SymmetryReport report;
    report.invariance = invariance_residual(k, pair, grid);
    if (!report.invariance.passed(tol)) return report;

    report.checked = true;
    MaxTracker worst;
    for (const Point p : sample_points(grid, pair.domain()))
        worst.offer(std::abs(k(p.x, p.y) - k(p.y, p.x)), p);
    report.max_asymmetry = worst.value;
    report.symmetric = worst.value < tol;
    if (!report.symmetric) report.witness = worst.at;
    return report;
}

PhiDecompositionReport check_phi_decomposition(const Function2& phi, const MeanPair& pair,
                                               const GridSpec& grid, const StagePolicy& policy,
                                               double tol) {
    PhiDecompositionReport report;
    const auto points = sample_points(grid, pair.domain());
    const Mean tr = transfinite_mean(pair, policy);

    // (a)
    MaxTracker residual;
    for (const Point p : points) {
        const Point image = pair(p);
        residual.offer(std::abs(phi(p.x, p.y) - phi(image.x, image.y)), p);
    }
    report.invariance = {residual.value, residual.at, points.size()};
    report.invariant = report.invariance.passed(tol);

    // (b) f(t) = Phi(t, t); (c) Phi = f o Tr
    std::vector<double> tr_values;
    tr_values.reserve(points.size());
    MaxTracker decomposition;
    for (const Point p : points) {
        const double t = tr(p.x, p.y);
        tr_values.push_back(t);
        decomposition.offer(std::abs(phi(p.x, p.y) - phi(t, t)), p);
    }
    report.max_decomposition_error = decomposition.value;
    report.decomposition_witness = decomposition.at;
    report.decomposition_holds = decomposition.value < 10 * tol;

    // (d) invert f by bisection when it is strictly monotone on the diagonal samples
    const auto nodes = axis_nodes(grid, pair.domain());
    std::vector<double> f;
    f.reserve(nodes.size());
    for (double t : nodes) f.push_back(phi(t, t));
    const bool increasing = std::adjacent_find(f.begin(), f.end(), std::greater_equal<>()) == f.end();
    const bool decreasing = std::adjacent_find(f.begin(), f.end(), std::less_equal<>()) == f.end();
    if (f.size() < 2) {
        report.inverse_status = InverseStatus::not_injective;
    } else if (increasing || decreasing) {
        report.inverse_status = InverseStatus::checked;
    } else {
        std::vector<double> sorted_f = f;
        std::sort(sorted_f.begin(), sorted_f.end());
        const bool distinct = std::adjacent_find(sorted_f.begin(), sorted_f.end()) == sorted_f.end();
        report.inverse_status = distinct ? InverseStatus::not_monotone : InverseStatus::not_injective;
    }

    if (report.inverse_status == InverseStatus::checked) {
        MaxTracker inverse;
        const double lo = pair.domain().lo();
        const double hi = pair.domain().hi();
        for (std::size_t i = 0; i < points.size(); ++i) {
            const Point p = points[i];
            const double t = invert_monotone(phi, lo, hi, increasing, phi(p.x, p.y));
            inverse.offer(std::abs(t - tr_values[i]), p);
        }
        report.max_inverse_error = inverse.value;
        report.inverse_witness = inverse.at;
        report.inverse_holds = inverse.value < 10 * tol;
    }
    return report;
}

bool OrderingReport::passed() const noexcept {
    return std::all_of(entries.begin(), entries.end(),
                       [](const OrderingEntry& e) { return !e.invariant || e.within; });
}

OrderingReport ordering_check(const MeanPair& pair, std::span<const Mean> candidates,
                              const GridSpec& grid, const ConvergencePolicy& policy, double tol) {
    const auto points = sample_points(grid, pair.domain());
    std::vector<LowerUpper> bounds;
    bounds.reserve(points.size());
    for (const Point p : points) bounds.push_back(lower_upper(pair, p.x, p.y, policy));

    OrderingReport report;
    report.grid_size = points.size();
    for (const Mean& k : candidates) {
        OrderingEntry entry;
        entry.name = k.name();
        entry.invariance = invariance_residual(k, pair, grid);
        entry.invariant = entry.invariance.passed(tol);
        if (entry.invariant) {
            entry.within = true;
            for (std::size_t i = 0; i < points.size(); ++i) {
                const Point p = points[i];
                const double v = k(p.x, p.y);
                entry.distance_to_lo = std::max(entry.distance_to_lo, std::abs(v - bounds[i].lo));
                entry.distance_to_up = std::max(entry.distance_to_up, std::abs(v - bounds[i].up));
                if (!(bounds[i].lo - tol <= v && v <= bounds[i].up + tol) &&
                    (entry.within || p < *entry.witness)) {
                    entry.within = false;
                    entry.witness = p;
                }
            }
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

}  // namespace invmean
