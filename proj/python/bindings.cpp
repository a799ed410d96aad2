#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "regtrace/interpreter.hpp"
#include "regtrace/parser.hpp"
#include "regtrace/report.hpp"
#include "regtrace/solver.hpp"
#include "regtrace/verifier.hpp"

namespace py = pybind11;
using namespace regtrace;

namespace {

Trace to_trace(const std::vector<std::string>& names) {
  Trace t;
  for (const auto& n : names) t.emplace_back(n);
  return t;
}

std::vector<std::string> from_trace(const Trace& t) {
  std::vector<std::string> out;
  for (const auto& e : t) out.push_back(e.name());
  return out;
}

std::string verify_json(const std::string& source, const std::string& solver, unsigned jobs, bool dump_all) {
  const Program program = load_program(source);
  VerifyOptions opts;
  opts.jobs = jobs;
  VerdictReport report;
  {
    py::gil_scoped_release release;
    report = verify_program(program, [&] { return make_solver(solver); }, opts);
  }
  return to_json(report, dump_all).dump();
}

std::string oracle_json(const std::string& source, const std::string& entry, std::size_t runs, std::uint64_t seed,
                        std::int64_t fuel) {
  const Program program = load_program(source);
  const std::string proc = entry.empty() ? program.entry : entry;
  if (proc.empty() || !program.find_procedure(proc)) throw py::value_error("no procedure to run: '" + proc + "'");
  OracleOptions opts;
  opts.runs = runs;
  opts.seed = seed;
  opts.fuel = fuel;
  OracleReport report;
  {
    py::gil_scoped_release release;
    report = check_triple_random(program, proc, opts);
  }
  return to_json(report).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Regular trace contract verifier";

  py::register_exception<ProgramError>(m, "ProgramError", PyExc_ValueError);
  py::register_exception<NoSatisfyingState>(m, "NoSatisfyingState", PyExc_RuntimeError);

  m.def(
      "included",
      [](const std::string& u, const std::string& v) -> py::tuple {
        const InclusionResult r = included(parse_regex(u), parse_regex(v));
        if (r.holds) return py::make_tuple(true, py::none());
        return py::make_tuple(false, from_trace(*r.witness));
      },
      py::arg("u"), py::arg("v"), "Returns (holds, witness); the witness is in L(u) but not L(v).");
  m.def(
      "member", [](const std::vector<std::string>& word, const std::string& u) {
        return member(to_trace(word), parse_regex(u));
      },
      py::arg("word"), py::arg("u"));
  m.def(
      "derive", [](const std::string& event, const std::string& u) {
        return derive(Event(event), parse_regex(u)).to_string();
      },
      py::arg("event"), py::arg("u"), "Brzozowski derivative, printed in canonical form.");
  m.def(
      "check_sat",
      [](const std::string& formula) {
        BuiltinSolver s;
        return std::string(to_string(s.check_sat(parse_formula(formula)).status));
      },
      py::arg("formula"));
  m.def("verify_json", &verify_json, py::arg("source"), py::arg("solver") = "internal", py::arg("jobs") = 1,
        py::arg("dump_all") = false);
  m.def("oracle_json", &oracle_json, py::arg("source"), py::arg("entry") = "", py::arg("runs") = 1000,
        py::arg("seed") = 1, py::arg("fuel") = 1000);
}
