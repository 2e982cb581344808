#include "report_json.hpp"

#include <cmath>

namespace invmean::io {

namespace {

Json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

Json optional_point(const std::optional<Point>& p) { return p ? to_json(*p) : Json(nullptr); }

Json check(const PropertyCheck& c) {
    return Json{{"holds", c.holds}, {"witness", optional_point(c.witness)}};
}

const char* inverse_status_name(InverseStatus s) {
    switch (s) {
    case InverseStatus::checked: return "checked";
    case InverseStatus::not_injective: return "declined: f is not injective on the diagonal samples";
    case InverseStatus::not_monotone: return "declined: f is injective but not monotone";
    }
    return "?";
}

}  // namespace

Json to_json(const Point& p) { return Json::array({number(p.x), number(p.y)}); }

Json to_json(const Interval& d) { return Json::array({d.lo(), d.hi()}); }

Json to_json(const GridSpec& g, std::size_t size) {
    return Json{{"nodes_per_axis", g.nodes_per_axis},
                {"random_pairs", g.random_pairs},
                {"seed", g.seed},
                {"points", size},
                {"scope", "certified on the sampled grid only"}};
}

Json to_json(const MeanPair& pair) {
    return Json{{"m", pair.m().name()},
                {"n", pair.n().name()},
                {"domain", to_json(pair.domain())},
                {"comparable", pair.comparable()},
                {"symmetric", pair.symmetric()}};
}

Json to_json(const PropertyReport& r) {
    return Json{{"mean_bounds", check(r.mean_bounds)}, {"symmetric", check(r.symmetric)},
                {"strict", check(r.strict)},           {"comparable_le", check(r.comparable_le)},
                {"weak_in", check(r.weak_in)},         {"grid_points", r.grid_size}};
}

Json to_json(const InvarianceReport& r) {
    return Json{{"max_residual", number(r.max_residual)},
                {"witness", optional_point(r.witness)},
                {"grid_points", r.grid_size}};
}

Json to_json(const SymmetryReport& r) {
    return Json{{"invariance", to_json(r.invariance)},
                {"checked", r.checked},
                {"symmetric", r.symmetric},
                {"max_asymmetry", number(r.max_asymmetry)},
                {"witness", optional_point(r.witness)}};
}

Json to_json(const PhiDecompositionReport& r) {
    Json inverse{{"status", inverse_status_name(r.inverse_status)}};
    if (r.inverse_status == InverseStatus::checked) {
        inverse["max_error"] = number(r.max_inverse_error);
        inverse["witness"] = optional_point(r.inverse_witness);
        inverse["holds"] = r.inverse_holds;
    }
    return Json{{"invariance", to_json(r.invariance)},
                {"invariant", r.invariant},
                {"decomposition",
                 {{"f", "f(t) = phi(t, t)"},
                  {"max_error", number(r.max_decomposition_error)},
                  {"witness", optional_point(r.decomposition_witness)},
                  {"holds", r.decomposition_holds}}},
                {"inverse", inverse},
                {"note", "phi = f o Tr is characterized only for continuous phi"}};
}

Json to_json(const OrderingReport& r) {
    Json entries = Json::array();
    for (const auto& e : r.entries) {
        Json j{{"name", e.name}, {"invariance", to_json(e.invariance)}, {"invariant", e.invariant}};
        if (e.invariant) {
            j["within_lo_up"] = e.within;
            j["witness"] = optional_point(e.witness);
            j["max_distance_to_lo"] = number(e.distance_to_lo);
            j["max_distance_to_up"] = number(e.distance_to_up);
        } else {
            j["notice"] = "excluded: not invariant on the grid";
        }
        entries.push_back(std::move(j));
    }
    return Json{{"candidates", entries}, {"grid_points", r.grid_size}};
}

Json to_json(const UniquenessProbe& r) {
    Json witness = nullptr;
    if (r.witness) witness = Json::array({to_json(r.witness->first), to_json(r.witness->second)});
    return Json{{"resolution", number(r.resolution)},
                {"modulus", number(r.modulus)},
                {"jump_threshold", number(r.jump_threshold)},
                {"jump_detected", r.jump_detected},
                {"witness", witness},
                {"verdict", r.verdict}};
}

Json to_json(const LimitLikeReport& r) {
    Json cases = Json::array();
    for (const auto& c : r.cases)
        cases.push_back(Json{{"phi", number(c.phi)},
                             {"phi_shifted_by_two", number(c.phi_shifted)},
                             {"liminf", number(c.true_liminf)},
                             {"limsup", number(c.true_limsup)},
                             {"shift_invariant", c.shift_invariant},
                             {"sandwiched", c.sandwiched}});
    Json first = nullptr;
    if (r.first_violation) first = *r.first_violation;
    return Json{{"cases", cases}, {"first_violation", first}};
}

Json to_json(const TransfiniteReport& r) {
    Json stages = Json::array();
    for (const auto& s : r.stage_pairs)
        stages.push_back(Json{{"kind", s.kind == StageKind::limit ? "limit" : "successor"},
                              {"a", number(s.a)},
                              {"b", number(s.b)}});
    return Json{{"tr_value", number(r.tr_value)},
                {"stage_pairs", stages},
                {"limit_stages_used", r.limit_stages_used},
                {"successor_steps", r.successor_steps},
                {"terminated_diagonal", r.terminated_diagonal},
                {"approximate", r.approximate}};
}

Json orbit_to_json(const OrbitTrace& trace, std::size_t cap) {
    Json rows = Json::array();
    for (std::size_t i : export_indices(trace.pairs.size(), cap)) {
        const Point p = trace.pairs[i];
        rows.push_back(Json{{"n", i}, {"x_n", p.x}, {"y_n", p.y}, {"gap", std::abs(p.x - p.y)}});
    }
    return Json{{"converged", trace.converged},
                {"steps", trace.steps()},
                {"final_gap", number(trace.final_gap)},
                {"rows", rows}};
}

}  // namespace invmean::io
