#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "regtrace/parser.hpp"

namespace regtrace::testing {

inline std::string corpus_path(const std::string& name) { return std::string(REGTRACE_CORPUS_DIR) + "/" + name + ".trc"; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Loads corpus/<name>.trc, e.g. "matcher" or "mutants/matcher_no_abort".
inline Program load_corpus(const std::string& name) { return load_program(read_file(corpus_path(name))); }

}  // namespace regtrace::testing
