#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "invmean/error.hpp"
#include "invmean/expr.hpp"
#include "invmean/invariance.hpp"
#include "invmean/limit_like.hpp"
#include "invmean/mean.hpp"
#include "invmean/orbit.hpp"
#include "invmean/transfinite.hpp"

namespace py = pybind11;
using namespace invmean;

namespace {

ConvergencePolicy make_policy(double gap_tol, std::size_t max_steps) {
    ConvergencePolicy p{gap_tol, max_steps};
    p.validate();
    return p;
}

StagePolicy make_stage_policy(double gap_tol, std::size_t max_steps, std::size_t max_limit_stages) {
    StagePolicy p;
    p.inner = make_policy(gap_tol, max_steps);
    p.max_limit_stages = max_limit_stages;
    p.validate();
    return p;
}

py::object point_or_none(const std::optional<Point>& p) {
    if (!p) return py::none();
    return py::make_tuple(p->x, p->y);
}

MeanPair pair_from_text(const std::string& m, const std::string& n, double lo, double hi, std::size_t grid) {
    const Interval d(lo, hi);
    const GridSpec spec = GridSpec::uniform(grid);
    Mean mm = mean_from_text(m, d, spec);
    Mean nn = mean_from_text(n, d, spec);
    const bool comparable = comparable_on_grid(mm, nn, spec);
    return MeanPair(std::move(mm), std::move(nn), comparable);
}

}  // namespace

PYBIND11_MODULE(_invmean, m) {
    m.doc() = "Invariant means of two-variable mean-type mappings";

    auto& base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());

    py::class_<MeanExpr>(m, "Expr")
        .def("__call__", &MeanExpr::operator(), py::arg("x"), py::arg("y"))
        .def("__str__", &MeanExpr::to_string)
        .def("__eq__", [](const MeanExpr& a, const MeanExpr& b) { return a == b; })
        .def("uses_variable", [](const MeanExpr& e, const std::string& v) {
            if (v.size() != 1) throw InvalidArgument("variable name must be one character");
            return e.uses_variable(v[0]);
        });
    m.def("parse", &MeanExpr::parse, py::arg("source"), "Parse a mean expression in x and y.");

    py::class_<MeanPair>(m, "Pair")
        .def_static("example", [](double lo, double hi) { return make_example_pair(Interval(lo, hi)); },
                    py::arg("lo") = 0.0, py::arg("hi") = 10.0)
        .def_static("agm", [](double lo, double hi) {
                        const Interval d(lo, hi);
                        return MeanPair(make_builtin(BuiltinKind::arithmetic, d), make_builtin(BuiltinKind::geometric, d));
                    },
                    py::arg("lo") = 1.0, py::arg("hi") = 2.0)
        .def_static("from_text", &pair_from_text, py::arg("m"), py::arg("n"), py::arg("lo"), py::arg("hi"),
                    py::arg("grid") = 101,
                    "Built-in names, kc:<c> or expressions; comparability is detected on the grid.")
        .def("__call__", [](const MeanPair& p, double x, double y) {
            const Point q = p(x, y);
            return py::make_tuple(q.x, q.y);
        })
        .def_property_readonly("domain", [](const MeanPair& p) {
            return py::make_tuple(p.domain().lo(), p.domain().hi());
        })
        .def_property_readonly("names", [](const MeanPair& p) { return py::make_tuple(p.m().name(), p.n().name()); })
        .def_property_readonly("comparable", &MeanPair::comparable)
        .def_property_readonly("symmetric", &MeanPair::symmetric);

    m.def("orbit", [](const MeanPair& pair, double x, double y, double gap_tol, std::size_t max_steps) {
              const OrbitTrace t = iterate(pair, x, y, make_policy(gap_tol, max_steps));
              py::list rows;
              for (const Point p : t.pairs) rows.append(py::make_tuple(p.x, p.y));
              py::dict d;
              d["pairs"] = rows;
              d["converged"] = t.converged;
              d["final_gap"] = t.final_gap;
              d["steps"] = t.steps();
              return d;
          },
          py::arg("pair"), py::arg("x"), py::arg("y"), py::arg("gap_tol") = 1e-12, py::arg("max_steps") = 100'000);

    m.def("lower_upper", [](const MeanPair& pair, double x, double y, double gap_tol, std::size_t max_steps) {
              const LowerUpper r = lower_upper(pair, x, y, make_policy(gap_tol, max_steps));
              return py::make_tuple(r.lo, r.up, r.converged);
          },
          py::arg("pair"), py::arg("x"), py::arg("y"), py::arg("gap_tol") = 1e-12, py::arg("max_steps") = 100'000);

    m.def("transfinite", [](const MeanPair& pair, double x, double y, double gap_tol, std::size_t max_steps,
                            std::size_t max_limit_stages) {
              const TransfiniteReport r =
                  transfinite_iterate(pair, x, y, make_stage_policy(gap_tol, max_steps, max_limit_stages));
              py::list stages;
              for (const StageRecord& s : r.stage_pairs) stages.append(py::make_tuple(s.a, s.b));
              py::dict d;
              d["tr_value"] = r.tr_value;
              d["stage_pairs"] = stages;
              d["limit_stages_used"] = r.limit_stages_used;
              d["successor_steps"] = r.successor_steps;
              d["terminated_diagonal"] = r.terminated_diagonal;
              d["approximate"] = r.approximate;
              return d;
          },
          py::arg("pair"), py::arg("x"), py::arg("y"), py::arg("gap_tol") = 1e-12, py::arg("max_steps") = 100'000,
          py::arg("max_limit_stages") = 64);

    m.def("bo", [](const MeanPair& pair, double x, double y, const std::string& phi, std::size_t window) {
              return bo_mean(pair, LimitLikeSpec::parse(phi), {}, window)(x, y);
          },
          py::arg("pair"), py::arg("x"), py::arg("y"), py::arg("phi") = "liminf", py::arg("window") = 16);

    m.def("invariance_residual",
          [](const MeanPair& pair, const std::string& k, std::size_t grid, std::size_t random_pairs) {
              const GridSpec spec{grid, random_pairs, GridSpec{}.seed};
              const Mean mean = k == "tr" ? transfinite_mean(pair) : mean_from_text(k, pair.domain(), spec);
              const InvarianceReport r = invariance_residual(mean, pair, spec);
              return py::make_tuple(r.max_residual, point_or_none(r.witness), r.grid_size);
          },
          py::arg("pair"), py::arg("k"), py::arg("grid") = 101, py::arg("random_pairs") = 1000,
          "max |K - K o (M, N)| over the grid, its witness and the grid size; k is tr, a built-in, kc:<c> or an "
          "expression.");

    m.def("check_two_limit_like", [](const std::string& spec) {
              const auto family = standard_test_sequences();
              const LimitLikeReport r = check_two_limit_like(LimitLikeSpec::parse(spec), family);
              py::object first = py::none();
              if (r.first_violation) first = py::int_(*r.first_violation);
              return py::make_tuple(r.passed(), first);
          },
          py::arg("spec"));
}
