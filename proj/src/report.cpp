#include "regtrace/report.hpp"

#include <sstream>

namespace regtrace {

namespace {

nlohmann::ordered_json value_json(const Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  return std::get<std::int64_t>(v);
}

nlohmann::ordered_json trace_json(const Trace& t) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& e : t) out.push_back(e.name());
  return out;
}

nlohmann::ordered_json state_json(const GroundState& s) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [k, v] : s) out[k] = value_json(v);
  return out;
}

}  // namespace

nlohmann::ordered_json to_json(const Obligation& o) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(o.kind);
  j["role"] = o.role;
  j["procedure"] = o.procedure;
  j["span"] = o.span.to_string();
  j["verdict"] = to_string(o.verdict);
  j["context"] = o.context.to_string();
  if (o.goal) j["goal"] = o.goal->to_string();
  if (o.lhs) j["lhs"] = o.lhs->to_string();
  if (o.rhs) j["rhs"] = o.rhs->to_string();
  if (o.witness) j["witness"] = trace_json(*o.witness);
  if (o.model) {
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    for (const auto& [var, v] : *o.model) m[var.to_string()] = value_json(v);
    j["model"] = std::move(m);
  }
  if (!o.diagnostic.empty()) j["diagnostic"] = o.diagnostic;
  return j;
}

nlohmann::ordered_json to_json(const VerdictReport& r, bool include_discharged) {
  nlohmann::ordered_json j;
  j["program"] = r.program;
  j["verified"] = r.verified();
  auto procs = nlohmann::ordered_json::array();
  for (const auto& p : r.procedures) {
    nlohmann::ordered_json pj;
    pj["name"] = p.name;
    pj["span"] = p.span.to_string();
    pj["status"] = to_string(p.status);
    pj["paths"] = p.paths;
    std::size_t discharged = 0;
    auto obs = nlohmann::ordered_json::array();
    for (const auto& o : p.obligations) {
      if (o.verdict == Verdict::kHolds) ++discharged;
      if (include_discharged || o.verdict != Verdict::kHolds) obs.push_back(to_json(o));
    }
    pj["obligations_total"] = p.obligations.size();
    pj["obligations_discharged"] = discharged;
    pj["obligations"] = std::move(obs);
    auto warns = nlohmann::ordered_json::array();
    for (const auto& w : p.warnings) {
      warns.push_back({{"kind", w.kind}, {"span", w.span.to_string()}, {"message", w.message}});
    }
    pj["warnings"] = std::move(warns);
    procs.push_back(std::move(pj));
  }
  j["procedures"] = std::move(procs);
  return j;
}

nlohmann::ordered_json to_json(const OracleReport& r) {
  nlohmann::ordered_json j;
  j["procedure"] = r.procedure;
  j["runs"] = r.runs;
  j["stopped"] = r.stopped;
  j["aborted"] = r.aborted;
  j["fuel_exhausted"] = r.fuel_exhausted;
  auto vs = nlohmann::ordered_json::array();
  for (const auto& v : r.violations) {
    vs.push_back({{"run", v.run_index},
                  {"seed", v.seed},
                  {"pre_state", state_json(v.pre_state)},
                  {"trace", trace_json(v.trace)},
                  {"reason", v.reason}});
  }
  j["violations"] = std::move(vs);
  return j;
}

std::string format_model(const Model& m) {
  std::string out;
  for (const auto& [var, v] : m) {
    if (!out.empty()) out += ", ";
    out += var.to_string() + " = " + value_to_string(v);
  }
  return out;
}

std::string format_obligation(const Obligation& o) {
  std::ostringstream out;
  out << o.span.to_string() << ": " << to_string(o.kind) << " (" << o.role << ") " << to_string(o.verdict) << "\n";
  out << "    context: " << o.context.to_string() << "\n";
  if (o.goal) out << "    goal:    " << o.goal->to_string() << "\n";
  if (o.lhs && o.rhs) out << "    check:   " << o.lhs->to_string() << "  <=  " << o.rhs->to_string() << "\n";
  if (o.witness) out << "    witness: " << trace_to_string(*o.witness) << "\n";
  if (o.model && !o.model->empty()) out << "    model:   " << format_model(*o.model) << "\n";
  if (!o.diagnostic.empty()) out << "    note:    " << o.diagnostic << "\n";
  return out.str();
}

std::string format_text(const VerdictReport& r, bool dump_all) {
  std::ostringstream out;
  out << r.program << ": " << (r.verified() ? "verified" : "failed") << "\n";
  for (const auto& p : r.procedures) {
    std::size_t held = 0;
    for (const auto& o : p.obligations) held += o.verdict == Verdict::kHolds;
    out << "  " << p.name << ": " << to_string(p.status);
    if (p.status != ProcedureStatus::kAssumed) out << " (" << held << "/" << p.obligations.size() << " obligations)";
    out << "\n";
    for (const auto& w : p.warnings) out << "    warning " << w.kind << " at " << w.span.to_string() << ": " << w.message << "\n";
    for (const auto& o : p.obligations) {
      if (dump_all || o.verdict != Verdict::kHolds) out << "    " << format_obligation(o);
    }
  }
  return out.str();
}

std::string format_text(const OracleReport& r) {
  std::ostringstream out;
  out << "oracle: " << r.violations.size() << " violations / " << r.runs << " runs (" << r.stopped << " stopped, "
      << r.aborted << " aborted, " << r.fuel_exhausted << " out of fuel)\n";
  for (const auto& v : r.violations) {
    out << "  run " << v.run_index << " seed " << v.seed << ": " << v.reason << "\n";
    out << "    trace: " << trace_to_string(v.trace) << "\n";
  }
  return out.str();
}

}  // namespace regtrace
