#pragma once

#include <string>

#include "json.hpp"
#include "regtrace/interpreter.hpp"
#include "regtrace/verifier.hpp"

namespace regtrace {

/// Machine-readable reports. Field order and content depend only on the
/// input program and options, never on timing or thread scheduling.
nlohmann::ordered_json to_json(const Obligation& o);
nlohmann::ordered_json to_json(const VerdictReport& r, bool include_discharged);
nlohmann::ordered_json to_json(const OracleReport& r);

std::string format_model(const Model& m);
std::string format_obligation(const Obligation& o);
/// Per-procedure status lines followed by every failed obligation (and
/// every discharged one too when `dump_all` is set).
std::string format_text(const VerdictReport& r, bool dump_all);
std::string format_text(const OracleReport& r);

}  // namespace regtrace
