#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "asymcomp/composer.hpp"
#include "asymcomp/report.hpp"

namespace py = pybind11;
using namespace asymcomp;

namespace {

std::vector<NamedFn> to_named(const std::vector<std::pair<std::string, std::string>>& fns) {
  std::vector<NamedFn> out;
  for (const auto& [id, text] : fns) out.push_back({id, ComplexityFn::parse(text)});
  return out;
}

std::vector<std::vector<std::string>> to_ids(const ClassifiedLibrary& lib) {
  std::vector<std::vector<std::string>> out;
  for (const auto& c : lib.classes) out.push_back(c.ids());
  return out;
}

}  // namespace

PYBIND11_MODULE(_asymcomp, m) {
  m.doc() = "Growth-rate comparison of complexity functions and evaluation-plan composition";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<EvalError>(m, "EvalError", PyExc_ArithmeticError);
  py::register_exception<RegistryError>(m, "RegistryError", PyExc_ValueError);
  py::register_exception<CompositionError>(m, "CompositionError");
  py::register_exception<PlanError>(m, "PlanError");
  py::register_exception<ClassifyError>(m, "ClassifyError", PyExc_ValueError);

  py::class_<Expr>(m, "Expr")
      .def(py::init([](const std::string& text) { return parse(text); }), py::arg("text"))
      .def("evaluate",
           [](const Expr& e, const VarValues& vars, bool log) {
             return evaluate(e, vars, log ? EvalMode::Log : EvalMode::Linear);
           },
           py::arg("vars") = VarValues{}, py::arg("log") = false,
           "Value at `vars`; with log=True, ln|value| computed without overflow.")
      .def("free_variables", &free_variables)
      .def("__eq__", [](const Expr& a, const Expr& b) { return a == b; })
      .def("__str__", [](const Expr& e) { return format(e); })
      .def("__repr__", [](const Expr& e) { return "Expr('" + format(e) + "')"; });

  m.def("parse", &parse, py::arg("text"));
  m.def("format", &format, py::arg("expr"));
  m.def(
      "evaluate",
      [](const std::string& text, const VarValues& vars, bool log) {
        return evaluate(parse(text), vars, log ? EvalMode::Log : EvalMode::Linear);
      },
      py::arg("text"), py::arg("vars") = VarValues{}, py::arg("log") = false);

  py::enum_<CompCode>(m, "CompCode")
      .value("EQUIVALENT", CompCode::Equivalent)
      .value("FIRST_SMALLER", CompCode::FirstSmaller)
      .value("SECOND_SMALLER", CompCode::SecondSmaller)
      .value("INCONCLUSIVE", CompCode::Inconclusive);

  py::class_<ComparatorConfig>(m, "ComparatorConfig")
      .def(py::init<>())
      .def_readwrite("q", &ComparatorConfig::q)
      .def_readwrite("k", &ComparatorConfig::k)
      .def_readwrite("eps", &ComparatorConfig::eps)
      .def_readwrite("L", &ComparatorConfig::L)
      .def_readwrite("tmax", &ComparatorConfig::tmax)
      .def_readwrite("pmax", &ComparatorConfig::pmax)
      .def("widened", &ComparatorConfig::widened)
      .def("to_json", [](const ComparatorConfig& c) { return config_json(c); });

  py::class_<CompResult>(m, "CompResult")
      .def_readonly("code", &CompResult::code)
      .def_property_readonly("evaluations", [](const CompResult& r) { return r.trace.evaluations; })
      .def_property_readonly("start", [](const CompResult& r) { return r.trace.sweep.start; })
      .def_property_readonly("notes", [](const CompResult& r) { return r.trace.notes; });

  m.def(
      "compare",
      [](const std::string& f1, const std::string& f2, const ComparatorConfig& cfg) {
        return comp(ComplexityFn::parse(f1), ComplexityFn::parse(f2), cfg);
      },
      py::arg("f1"), py::arg("f2"), py::arg("config") = ComparatorConfig{},
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "compare_json",
      [](const std::string& f1, const std::string& f2, const ComparatorConfig& cfg) {
        auto a = ComplexityFn::parse(f1);
        auto b = ComplexityFn::parse(f2);
        return comp_result_json(a, b, comp(a, b, cfg));
      },
      py::arg("f1"), py::arg("f2"), py::arg("config") = ComparatorConfig{});
  m.def(
      "root_free_start",
      [](const std::string& f1, const std::string& f2, const ComparatorConfig& cfg) {
        return find_root_free_start(ComplexityFn::parse(f1), ComplexityFn::parse(f2), cfg);
      },
      py::arg("f1"), py::arg("f2"), py::arg("config") = ComparatorConfig{});

  m.def(
      "classify",
      [](const std::vector<std::pair<std::string, std::string>>& fns, const ComparatorConfig& cfg) {
        return to_ids(classify(to_named(fns), cfg));
      },
      py::arg("functions"), py::arg("config") = ComparatorConfig{},
      "Groups (id, expression) pairs into growth classes, slowest first.");
  m.def(
      "insert",
      [](const std::vector<std::pair<std::string, std::string>>& fns,
         const std::pair<std::string, std::string>& extra, const ComparatorConfig& cfg) {
        auto lib = classify(to_named(fns), cfg);
        return to_ids(insert_function(lib, {extra.first, ComplexityFn::parse(extra.second)}));
      },
      py::arg("functions"), py::arg("extra"), py::arg("config") = ComparatorConfig{});

  py::class_<Registry>(m, "Registry")
      .def_static("from_json", &Registry::from_json, py::arg("text"),
                  py::arg("config") = ComparatorConfig{})
      .def_static("load", &load_registry, py::arg("path"), py::arg("config") = ComparatorConfig{})
      .def("best_numeric",
           [](const Registry& r, const std::string& sig) -> std::optional<std::string> {
             const auto* s = r.find_best_numeric(Signature::parse(sig));
             if (!s) return std::nullopt;
             return s->id;
           },
           py::arg("signature"));

  py::class_<Plan>(m, "Plan")
      .def("execute", &execute_plan, py::arg("vars") = VarValues{})
      .def("to_json", &emit_plan)
      .def_property_readonly("errors", [](const Plan& p) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& a : p.errors) out.emplace_back(a.formula, format(a.error));
        return out;
      });

  m.def(
      "compose",
      [](const std::string& text, const Registry& reg) { return compose(parse(text), reg); },
      py::arg("expr"), py::arg("registry"));
  m.def("read_plan", &read_plan, py::arg("json"), py::arg("registry"));
}
