// Command-line front end: verify programs, run the randomized oracle, and
// decide regex inclusions.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "regtrace/interpreter.hpp"
#include "regtrace/parser.hpp"
#include "regtrace/report.hpp"
#include "regtrace/solver.hpp"
#include "regtrace/verifier.hpp"

namespace fs = std::filesystem;
using namespace regtrace;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Config {
  std::vector<std::string> inputs;
  std::string solver = "internal";
  std::size_t oracle_runs = 0;
  std::uint64_t seed = 1;
  std::int64_t fuel = 1000;
  std::string entry;
  bool json = false;
  bool dump_vcs = false;
  unsigned jobs = 1;
};

struct InputError {
  std::string message;
};

fs::path locate(const std::string& input) {
  if (fs::is_regular_file(input)) return input;
  if (fs::is_regular_file(input + ".trc")) return input + ".trc";
  throw InputError{input + ": no such file"};
}

Program load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError{path.string() + ": cannot open"};
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return load_program(buf.str());
  } catch (const ProgramError& e) {
    std::string msg;
    for (const auto& d : e.diagnostics()) msg += path.string() + ":" + d.to_string() + "\n";
    msg.pop_back();
    throw InputError{msg};
  }
}

int run_files(const Config& cfg, bool verify, bool oracle) {
  int exit_code = kExitOk;
  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  for (const auto& input : cfg.inputs) {
    const fs::path path = locate(input);
    const Program program = load(path);
    const std::string name = path.stem().string();
    nlohmann::ordered_json entry_json;
    entry_json["file"] = path.string();
    if (verify) {
      const bool internal = cfg.solver.empty() || cfg.solver == "internal";
      VerifyOptions opts;
      opts.jobs = internal ? cfg.jobs : 1;
      VerdictReport report = verify_program(program, [&] { return make_solver(cfg.solver); }, opts);
      report.program = name;
      if (!report.verified()) exit_code = kExitFailed;
      if (cfg.json) {
        entry_json["verification"] = to_json(report, cfg.dump_vcs);
      } else {
        std::cout << format_text(report, cfg.dump_vcs);
      }
    }
    if (oracle) {
      const std::string entry = cfg.entry.empty() ? program.entry : cfg.entry;
      if (entry.empty()) throw InputError{path.string() + ": no procedure with a body to run"};
      if (!program.find_procedure(entry)) throw InputError{path.string() + ": no procedure named '" + entry + "'"};
      OracleOptions opts;
      opts.runs = cfg.oracle_runs;
      opts.seed = cfg.seed;
      opts.fuel = cfg.fuel;
      OracleReport report;
      try {
        report = check_triple_random(program, entry, opts);
      } catch (const NoSatisfyingState& e) {
        throw InputError{path.string() + ": " + e.what()};
      }
      if (!report.violations.empty()) exit_code = kExitFailed;
      if (cfg.json) {
        entry_json["oracle"] = to_json(report);
      } else {
        std::cout << format_text(report);
      }
    }
    results.push_back(std::move(entry_json));
  }
  if (cfg.json) {
    nlohmann::ordered_json doc;
    doc["results"] = std::move(results);
    doc["exit_code"] = exit_code;
    std::cout << doc.dump(2) << "\n";
  }
  return exit_code;
}

void add_common(CLI::App* cmd, Config& cfg) {
  cmd->add_option("inputs", cfg.inputs, "Program files (the .trc extension may be omitted)")->required();
  cmd->add_option("--seed", cfg.seed, "Oracle seed")->capture_default_str();
  cmd->add_option("--fuel", cfg.fuel, "Loop iterations plus calls per oracle run")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--entry", cfg.entry, "Procedure run by the oracle (default: main or the last defined)");
  cmd->add_flag("--json", cfg.json, "Print one machine-readable report document");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verifier for regular trace contracts"};
  app.require_subcommand(1);
  Config cfg;

  CLI::App* verify = app.add_subcommand("verify", "Verify every procedure against its contract");
  add_common(verify, cfg);
  verify->add_option("--solver", cfg.solver, "'internal' or an SMT-LIB solver command line, e.g. \"z3 -in\"")
      ->capture_default_str();
  verify->add_option("--oracle,--oracle-runs", cfg.oracle_runs, "Also run the randomized oracle this many times");
  verify->add_flag("--dump-vcs", cfg.dump_vcs, "List every obligation, including discharged ones");
  verify->add_option("--jobs", cfg.jobs, "Procedures verified in parallel (internal solver only)")
      ->check(CLI::PositiveNumber);

  CLI::App* oracle = app.add_subcommand("oracle", "Run the randomized oracle only");
  add_common(oracle, cfg);
  oracle->add_option("--runs,--oracle-runs", cfg.oracle_runs, "Number of seeded runs")->check(CLI::PositiveNumber);

  std::string lhs;
  std::string rhs;
  CLI::App* include = app.add_subcommand("include", "Decide whether L(U) is contained in L(V)");
  include->add_option("U", lhs)->required();
  include->add_option("V", rhs)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (include->parsed()) {
      const InclusionResult r = included(parse_regex(lhs), parse_regex(rhs));
      if (r.holds) {
        std::cout << "holds\n";
        return kExitOk;
      }
      std::cout << "fails, witness " << trace_to_string(*r.witness) << "\n";
      return kExitFailed;
    }
    if (oracle->parsed()) {
      if (cfg.oracle_runs == 0) cfg.oracle_runs = 1000;
      return run_files(cfg, false, true);
    }
    return run_files(cfg, true, cfg.oracle_runs > 0);
  } catch (const InputError& e) {
    std::cerr << e.message << "\n";
    return kExitUsage;
  } catch (const ProgramError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
}
