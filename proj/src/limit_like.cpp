#include "invmean/limit_like.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "invmean/error.hpp"

namespace invmean {

WeightFunction::WeightFunction(std::string name, std::function<double(double)> fn)
    : name_(std::move(name)), fn_(std::move(fn)) {
    if (!fn_) throw InvalidArgument("weight function is empty");
}

WeightFunction WeightFunction::constant(double v) {
    std::ostringstream os;
    os << v;
    return WeightFunction(os.str(), [v](double) { return v; });
}

WeightFunction WeightFunction::identity() {
    return WeightFunction("x", [](double t) { return t; });
}

WeightFunction WeightFunction::from_expr(const MeanExpr& expr) {
    if (expr.uses_variable('y'))
        throw InvalidArgument("weight expression may only use the variable x");
    return WeightFunction(expr.to_string(), [expr](double t) { return expr(t, 0.0); });
}

double WeightFunction::operator()(double t) const {
    const double v = fn_(t);
    if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream os;
        os << "weight " << name_ << " returned " << v << " at " << t << ", outside [0, 1]";
        throw InvalidArgument(os.str());
    }
    return v;
}

std::string LimitLikeSpec::name() const {
    switch (kind) {
    case LimitKind::liminf: return "liminf";
    case LimitKind::limsup: return "limsup";
    case LimitKind::phi_w: return "phi[" + (weight ? weight->name() : std::string("?")) + "]";
    }
    return "?";
}

LimitLikeSpec LimitLikeSpec::parse(const std::string& text) {
    if (text == "liminf") return liminf();
    if (text == "limsup") return limsup();
    if (text.starts_with("w:")) return phi(WeightFunction::from_expr(MeanExpr::parse(text.substr(2))));
    throw InvalidArgument("unknown functional '" + text + "' (liminf, limsup or w:EXPR)");
}

TailEstimate tail_bounds(std::span<const double> seq, std::size_t window) {
    if (window < 1) throw InvalidArgument("tail window must be at least 1");
    if (window > seq.size()) throw InvalidArgument("tail window exceeds the sequence length");

    const auto tail = seq.subspan(seq.size() - window);
    const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
    TailEstimate est{*lo, *hi, window, false, 0};

    for (std::size_t p = 1; p <= window / 2; ++p) {
        bool repeats = true;
        for (std::size_t i = 0; i + p < tail.size() && repeats; ++i) repeats = tail[i] == tail[i + p];
        if (repeats) {
            est.exact = true;
            est.period = p;
            break;
        }
    }
    return est;
}

double apply_phi(const LimitLikeSpec& spec, std::span<const double> seq, std::size_t window,
                 const Interval& scale) {
    const TailEstimate est = tail_bounds(seq, window);
    switch (spec.kind) {
    case LimitKind::liminf: return est.liminf_est;
    case LimitKind::limsup: return est.limsup_est;
    case LimitKind::phi_w: break;
    }
    if (!spec.weight) throw InvalidArgument("phi_w needs a weight function");

    const std::size_t start = seq.size() - window;
    std::optional<double> even_inf;
    for (std::size_t i = start; i < seq.size(); ++i) {
        if (!scale.contains(seq[i]))
            throw InvalidArgument("sequence value outside the phi_w scale interval");
        if (i % 2 == 1) even_inf = even_inf ? std::min(*even_inf, seq[i]) : seq[i];
    }
    // A one-entry window starting on an odd position has no even entry; use the tail itself.
    const double even = even_inf.value_or(est.liminf_est);
    const double t = (even - scale.lo()) / scale.length();
    const double w = (*spec.weight)(std::clamp(t, 0.0, 1.0));
    const double v = est.liminf_est + w * (est.limsup_est - est.liminf_est);
    return std::clamp(v, est.liminf_est, est.limsup_est);
}

Mean bo_mean(const MeanPair& pair, const LimitLikeSpec& spec, const ConvergencePolicy& policy,
             std::size_t window) {
    policy.validate();
    if (window < 2) throw InvalidArgument("bo_mean window must cover at least one pair");
    if (spec.kind == LimitKind::phi_w && !spec.weight)
        throw InvalidArgument("phi_w needs a weight function");

    const std::string name = "Bo[" + spec.name() + "]";
    return Mean(name, pair.domain(), [pair, spec, policy, window](double x, double y) {
        if (x == y) return x;
        OrbitTrace trace = iterate(pair, x, y, policy);
        if (!trace.converged)
            throw ConvergenceError("orbit envelope did not stabilize within max_steps");
        extend_orbit(pair, trace, (window + 1) / 2);
        const std::vector<double> seq = interleave(trace);
        return apply_phi(spec, seq, window, pair.domain());
    });
}

double EventuallyPeriodic::at(std::size_t i) const {
    if (i < prefix.size()) return prefix[i];
    return cycle[(i - prefix.size()) % cycle.size()];
}

std::vector<double> EventuallyPeriodic::materialize(std::size_t length) const {
    if (cycle.empty()) throw InvalidArgument("eventually periodic sequence needs a cycle");
    std::vector<double> out(length);
    for (std::size_t i = 0; i < length; ++i) out[i] = at(i);
    return out;
}

EventuallyPeriodic EventuallyPeriodic::shifted(std::size_t k) const {
    if (cycle.empty()) throw InvalidArgument("eventually periodic sequence needs a cycle");
    EventuallyPeriodic out;
    if (k <= prefix.size()) {
        out.prefix.assign(prefix.begin() + static_cast<std::ptrdiff_t>(k), prefix.end());
        out.cycle = cycle;
        return out;
    }
    const std::size_t r = (k - prefix.size()) % cycle.size();
    out.cycle.assign(cycle.begin() + static_cast<std::ptrdiff_t>(r), cycle.end());
    out.cycle.insert(out.cycle.end(), cycle.begin(), cycle.begin() + static_cast<std::ptrdiff_t>(r));
    return out;
}

EventuallyPeriodic four_periodic_probe(double x) { return {{}, {0.0, x, 0.0, 1.0}}; }

std::vector<EventuallyPeriodic> standard_test_sequences() {
    std::vector<EventuallyPeriodic> family;
    for (int k = 0; k <= 10; ++k) family.push_back(four_periodic_probe(k / 10.0));
    family.push_back({{}, {0.5}});
    family.push_back({{1.0, 0.0, 0.25}, {0.75}});
    family.push_back({{}, {0.2, 0.8}});
    family.push_back({{0.9}, {0.3, 0.6}});
    family.push_back({{}, {0.1, 0.4, 0.9}});
    family.push_back({{0.0, 1.0}, {0.6, 0.2, 0.35}});
    family.push_back({{}, {0.05, 0.95, 0.5, 0.25, 0.75}});
    family.push_back({{0.3, 0.3, 0.3}, {1.0, 0.0, 1.0, 0.0, 0.5, 0.5}});
    family.push_back({{0.125}, {0.9, 0.1, 0.8, 0.2, 0.7, 0.3, 0.6}});
    return family;
}

LimitLikeReport check_two_limit_like(const LimitLikeSpec& spec,
                                     std::span<const EventuallyPeriodic> sequences) {
    LimitLikeReport report;
    for (const auto& seq : sequences) {
        if (seq.cycle.empty())
            throw InvalidArgument("cannot verify a sequence that is not eventually periodic");

        const std::size_t unit = std::lcm(seq.cycle.size(), std::size_t{2});
        const std::size_t window = unit * std::max<std::size_t>(1, (16 + unit - 1) / unit);
        const std::size_t length = seq.prefix.size() + window + unit;

        const auto a = seq.materialize(length);
        const auto shifted = seq.shifted(2).materialize(length);

        LimitLikeCase c;
        c.phi = apply_phi(spec, a, window);
        c.phi_shifted = apply_phi(spec, shifted, window);
        const auto [lo, hi] = std::minmax_element(seq.cycle.begin(), seq.cycle.end());
        c.true_liminf = *lo;
        c.true_limsup = *hi;
        c.shift_invariant = c.phi == c.phi_shifted;
        c.sandwiched = c.true_liminf <= c.phi && c.phi <= c.true_limsup;
        if (!(c.shift_invariant && c.sandwiched) && !report.first_violation)
            report.first_violation = report.cases.size();
        report.cases.push_back(c);
    }
    return report;
}

}  // namespace invmean
