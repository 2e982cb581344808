#include "invmean/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "invmean/error.hpp"

namespace invmean {

namespace {

double gap_of(Point p) { return std::abs(p.x - p.y); }

Point step_checked(const MeanPair& pair, Point p, std::size_t step) {
    Point next;
    try {
        next = pair(p);
    } catch (const Error& e) {
        std::ostringstream os;
        os << "mean evaluation failed at step " << step << ": " << e.what();
        throw OrbitError(os.str(), step);
    }
    const double lo = std::min(p.x, p.y);
    const double hi = std::max(p.x, p.y);
    if (!(lo <= next.x && next.x <= hi && lo <= next.y && next.y <= hi)) {
        std::ostringstream os;
        os.precision(17);
        os << "mean bounds violated at step " << step << ": (" << p.x << ", " << p.y
           << ") -> (" << next.x << ", " << next.y << ")";
        throw OrbitError(os.str(), step);
    }
    return next;
}

}  // namespace

void ConvergencePolicy::validate() const {
    if (!(gap_tol > 0.0)) throw InvalidArgument("gap_tol must be positive");
    if (max_steps < 1) throw InvalidArgument("max_steps must be at least 1");
}

OrbitTrace iterate(const MeanPair& pair, double x, double y, const ConvergencePolicy& policy) {
    policy.validate();
    if (!pair.domain().contains(x) || !pair.domain().contains(y))
        throw DomainError("orbit start lies outside the pair's domain");

    OrbitTrace trace;
    trace.pairs.push_back({x, y});
    // Every later pair stays inside the initial envelope, so nothing can move
    // further than the starting gap.
    if (gap_of({x, y}) < policy.gap_tol) {
        trace.converged = true;
        trace.final_gap = gap_of({x, y});
        return trace;
    }

    Point cur{x, y};
    for (std::size_t n = 1; n <= policy.max_steps; ++n) {
        const Point next = step_checked(pair, cur, n);
        trace.pairs.push_back(next);

        const double lo_move = std::abs(std::min(next.x, next.y) - std::min(cur.x, cur.y));
        const double hi_move = std::abs(std::max(next.x, next.y) - std::max(cur.x, cur.y));
        const double gap_change = std::abs(gap_of(next) - gap_of(cur));
        cur = next;
        if (std::max(lo_move, hi_move) < policy.gap_tol && gap_change < policy.gap_tol) {
            trace.converged = true;
            break;
        }
    }
    trace.final_gap = gap_of(cur);
    return trace;
}

void extend_orbit(const MeanPair& pair, OrbitTrace& trace, std::size_t extra) {
    if (trace.pairs.empty()) throw InvalidArgument("cannot extend an empty trace");
    Point cur = trace.last();
    for (std::size_t k = 0; k < extra; ++k) {
        cur = step_checked(pair, cur, trace.pairs.size());
        trace.pairs.push_back(cur);
    }
    trace.final_gap = gap_of(cur);
}

LowerUpper lower_upper(const MeanPair& pair, double x, double y, const ConvergencePolicy& policy) {
    const OrbitTrace trace = iterate(pair, x, y, policy);
    const Point last = trace.last();
    return {std::min(last.x, last.y), std::max(last.x, last.y), trace.converged, trace.steps()};
}

std::vector<double> interleave(const OrbitTrace& trace) {
    std::vector<double> out;
    out.reserve(2 * trace.pairs.size());
    for (const Point p : trace.pairs) {
        out.push_back(p.x);
        out.push_back(p.y);
    }
    return out;
}

std::vector<std::size_t> export_indices(std::size_t rows, std::size_t cap) {
    std::vector<std::size_t> idx;
    if (rows <= cap || cap < 2) {
        idx.resize(rows);
        for (std::size_t i = 0; i < rows; ++i) idx[i] = i;
        return idx;
    }
    const std::size_t head = cap / 2;
    for (std::size_t i = 0; i < head; ++i) idx.push_back(i);
    const std::size_t tail = cap - head;
    const double first = std::log(static_cast<double>(head));
    const double last = std::log(static_cast<double>(rows - 1));
    for (std::size_t k = 1; k <= tail; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(tail);
        auto i = static_cast<std::size_t>(std::llround(std::exp(first + t * (last - first))));
        i = std::min(i, rows - 1);
        if (i > idx.back()) idx.push_back(i);
    }
    if (idx.back() != rows - 1) idx.push_back(rows - 1);
    return idx;
}

bool envelope_monotone(const OrbitTrace& trace) {
    for (std::size_t n = 1; n < trace.pairs.size(); ++n) {
        const Point prev = trace.pairs[n - 1];
        const Point cur = trace.pairs[n];
        const double plo = std::min(prev.x, prev.y), phi = std::max(prev.x, prev.y);
        const double clo = std::min(cur.x, cur.y), chi = std::max(cur.x, cur.y);
        if (clo < plo || chi > phi) return false;
    }
    return true;
}

}  // namespace invmean
