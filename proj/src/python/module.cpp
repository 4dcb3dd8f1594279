#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gmlsat/gen.hpp"
#include "gmlsat/solver.hpp"

namespace py = pybind11;

namespace {

gmlsat::Verdict dispatch(const std::string& text, std::string engine,
                         bool want_model, const gmlsat::Limits& limits) {
  gmlsat::Formula raw = gmlsat::parse_formula(text);
  bool inv = gmlsat::mentions_inverse_or_intersection(raw);
  if (engine == "auto") engine = inv ? "inverse" : "optimized";
  if (engine == "incorrect")
    return gmlsat::solve_incorrect(gmlsat::to_nnf_legacy(raw), limits);
  gmlsat::Formula phi = gmlsat::to_nnf(gmlsat::modernize(raw));
  if (engine == "standard")
    return gmlsat::solve_standard(phi, limits, want_model);
  if (engine == "optimized") return gmlsat::solve_grk(phi, limits, want_model);
  if (engine == "inverse") return gmlsat::solve_grkri(phi, limits, want_model);
  throw std::invalid_argument("unknown engine: " + engine);
}

}  // namespace

PYBIND11_MODULE(gmlsat_native, m) {
  m.doc() = "satisfiability solvers for graded modal logics";

  py::register_exception<gmlsat::resource_limit_error>(m, "ResourceLimitError");
  py::register_exception<gmlsat::parse_error>(m, "FormulaParseError",
                                              PyExc_ValueError);

  m.def(
      "solve",
      [](const std::string& formula, const std::string& engine,
         bool want_model, std::uint64_t max_steps, std::uint64_t max_depth,
         std::uint64_t max_constraints) {
        gmlsat::Limits limits;
        limits.max_steps = max_steps;
        limits.max_depth = max_depth;
        limits.max_constraints = max_constraints;
        gmlsat::Verdict v = dispatch(formula, engine, want_model, limits);
        py::dict stats;
        stats["steps"] = v.stats.steps;
        stats["nodes_created"] = v.stats.nodes_created;
        stats["backtracks"] = v.stats.backtracks;
        stats["max_depth"] = v.stats.max_depth;
        stats["peak_live_vars"] = v.stats.peak_live_vars;
        stats["restarts"] = v.stats.restarts;
        py::dict out;
        out["sat"] = v.sat;
        out["stats"] = stats;
        out["model"] = v.model ? py::cast(gmlsat::model_to_text(*v.model,
                                                                v.root))
                               : py::none();
        return out;
      },
      py::arg("formula"), py::arg("engine") = "auto",
      py::arg("model") = false, py::arg("max_steps") = gmlsat::Limits{}.max_steps,
      py::arg("max_depth") = gmlsat::Limits{}.max_depth,
      py::arg("max_constraints") = gmlsat::Limits{}.max_constraints,
      "Decide a formula given in the s-expression grammar. Returns a dict "
      "with 'sat', 'stats', and (on request, for SAT) a 'model' text block.");

  m.def(
      "nnf",
      [](const std::string& formula) {
        return gmlsat::print_formula(
            gmlsat::to_nnf(gmlsat::modernize(gmlsat::parse_formula(formula))));
      },
      py::arg("formula"),
      "Negation normal form over ge/le modalities, legacy operators rewritten.");

  m.def(
      "generate",
      [](std::uint64_t seed, std::uint64_t max_size, std::uint64_t max_n,
         int atoms, int relations, bool allow_inverse, bool allow_intersection,
         bool allow_legacy) {
        gmlsat::GenProfile p;
        p.max_size = max_size;
        p.max_n = max_n;
        p.atoms = atoms;
        p.relations = relations;
        p.allow_inverse = allow_inverse;
        p.allow_intersection = allow_intersection;
        p.allow_legacy = allow_legacy;
        return gmlsat::print_formula(gmlsat::generate(seed, p));
      },
      py::arg("seed"), py::arg("max_size") = 25, py::arg("max_n") = 4,
      py::arg("atoms") = 3, py::arg("relations") = 2,
      py::arg("allow_inverse") = false, py::arg("allow_intersection") = false,
      py::arg("allow_legacy") = false,
      "Seeded random formula; deterministic per seed and profile.");

  m.def(
      "check_model",
      [](const std::string& model_text, const std::string& formula) {
        auto [model, root] = gmlsat::model_from_text(model_text);
        return gmlsat::check(
            model, root,
            gmlsat::to_nnf(gmlsat::modernize(gmlsat::parse_formula(formula))));
      },
      py::arg("model"), py::arg("formula"),
      "Evaluate a formula at the root of a model given in the text format.");

  m.def(
      "measures",
      [](const std::string& formula) {
        gmlsat::FormulaMeasures ms = gmlsat::measures(
            gmlsat::to_nnf(gmlsat::modernize(gmlsat::parse_formula(formula))));
        py::dict out;
        out["size"] = ms.size;
        out["modal_depth"] = ms.modal_depth;
        out["norm"] = ms.norm;
        return out;
      },
      py::arg("formula"), "Size, modal depth, and norm of the NNF form.");
}
