#include "invmean/transfinite.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "invmean/error.hpp"

namespace invmean {

namespace {

double round_to(double v, double q) { return q > 0.0 ? std::nearbyint(v / q) * q : v; }

std::pair<double, double> sorted(Point p) { return std::minmax(p.x, p.y); }

}  // namespace

void StagePolicy::validate() const {
    inner.validate();
    if (max_limit_stages < 1) throw InvalidArgument("max_limit_stages must be at least 1");
    if (!(limit_resolution >= 0.0) || !std::isfinite(limit_resolution))
        throw InvalidArgument("limit_resolution must be a finite non-negative number");
}

MeanPair staging_pair(const MeanPair& pair) {
    if (pair.comparable()) return pair;
    if (pair.symmetric()) return meet_join(pair);
    throw InvalidArgument("transfinite iteration needs a comparable (M <= N) or symmetric pair");
}

TransfiniteReport transfinite_iterate(const MeanPair& pair, double x, double y,
                                      const StagePolicy& policy) {
    policy.validate();
    const MeanPair work = staging_pair(pair);
    if (!work.domain().contains(x) || !work.domain().contains(y))
        throw DomainError("transfinite start lies outside the pair's domain");

    const double tol = policy.inner.gap_tol;
    TransfiniteReport report;
    Point cur{x, y};

    auto finish_diagonal = [&](Point p) {
        report.terminated_diagonal = true;
        report.tr_value = (p.x + p.y) / 2;
    };

    if (std::abs(cur.x - cur.y) < tol) {
        finish_diagonal(cur);
        return report;
    }

    while (report.limit_stages_used < policy.max_limit_stages) {
        const auto [env_lo, env_hi] = sorted(cur);
        const OrbitTrace trace = iterate(work, cur.x, cur.y, policy.inner);
        ++report.limit_stages_used;
        if (!trace.converged) report.approximate = true;

        auto [a, b] = sorted(trace.last());
        if (b - a < tol) {
            report.stage_pairs.push_back({StageKind::limit, a, b});
            finish_diagonal({a, b});
            return report;
        }

        const double q = policy.limit_resolution;
        const double sum = round_to(a + b, q);
        const double width = round_to(b - a, q);
        a = std::clamp((sum - width) / 2, env_lo, env_hi);
        b = std::clamp((sum + width) / 2, env_lo, env_hi);
        report.stage_pairs.push_back({StageKind::limit, a, b});
        if (b - a < tol) {
            finish_diagonal({a, b});
            return report;
        }

        try {
            cur = work(a, b);
        } catch (const Error& e) {
            throw OrbitError(std::string("successor step failed: ") + e.what(), 0);
        }
        ++report.successor_steps;
        if (policy.record_successors) {
            const auto [sa, sb] = sorted(cur);
            report.stage_pairs.push_back({StageKind::successor, sa, sb});
        }
        if (std::abs(cur.x - cur.y) < tol) {
            finish_diagonal(cur);
            return report;
        }
    }

    report.approximate = true;
    report.tr_value = (cur.x + cur.y) / 2;
    return report;
}

Mean transfinite_mean(const MeanPair& pair, const StagePolicy& policy) {
    policy.validate();
    const MeanPair work = staging_pair(pair);
    return Mean("Tr", work.domain(), [work, policy](double x, double y) {
        return transfinite_iterate(work, x, y, policy).tr_value;
    });
}

Mean stage_mean(const MeanPair& pair, std::size_t stage, StageComponent component,
                const StagePolicy& policy) {
    if (stage < 1) throw InvalidArgument("stage index starts at 1");
    policy.validate();
    const MeanPair work = staging_pair(pair);
    StagePolicy limited = policy;
    limited.max_limit_stages = stage;
    limited.record_successors = false;

    const std::string name =
        std::string(component == StageComponent::a ? "A" : "B") + "[" + std::to_string(stage) + "]";
    return Mean(name, work.domain(), [work, stage, component, limited](double x, double y) {
        const TransfiniteReport r = transfinite_iterate(work, x, y, limited);
        if (r.stage_pairs.size() >= stage) {
            const StageRecord& rec = r.stage_pairs[stage - 1];
            return component == StageComponent::a ? rec.a : rec.b;
        }
        return r.tr_value;
    });
}

UniquenessProbe probe_continuous_uniqueness(const MeanPair& pair, const GridSpec& grid,
                                            const StagePolicy& policy, double jump_factor) {
    if (grid.nodes_per_axis < 2) throw InvalidArgument("grid too coarse: need 2 nodes per axis");
    const Mean tr = transfinite_mean(pair, policy);
    const auto nodes = axis_nodes(grid, pair.domain());
    const std::size_t n = nodes.size();

    std::vector<double> values(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) values[i * n + j] = tr(nodes[i], nodes[j]);

    UniquenessProbe probe;
    probe.resolution = pair.domain().length() / static_cast<double>(n - 1);
    probe.jump_threshold = jump_factor * probe.resolution;

    auto consider = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        const double d = std::abs(values[i * n + j] - values[k * n + l]);
        if (d > probe.modulus) {
            probe.modulus = d;
            probe.witness = std::make_pair(Point{nodes[i], nodes[j]}, Point{nodes[k], nodes[l]});
        }
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i + 1 < n) consider(i, j, i + 1, j);
            if (j + 1 < n) consider(i, j, i, j + 1);
        }

    probe.jump_detected = probe.modulus > probe.jump_threshold;
    std::ostringstream os;
    os.precision(6);
    if (probe.jump_detected) {
        os << "jump of " << probe.modulus << " between adjacent nodes at resolution "
           << probe.resolution << "; Tr looks discontinuous, so no continuous invariant mean is "
           << "expected (heuristic)";
    } else {
        probe.witness.reset();
        os << "no discontinuity detected at grid resolution " << probe.resolution
           << " (largest adjacent change " << probe.modulus << "; heuristic, not a proof)";
    }
    probe.verdict = os.str();
    return probe;
}

}  // namespace invmean
