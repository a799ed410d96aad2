#include <gtest/gtest.h>

#include "corpus.hpp"
#include "regtrace/report.hpp"

namespace regtrace {
namespace {

VerdictReport verify_corpus(const std::string& name) {
  VerdictReport r = verify_program(testing::load_corpus(name), [] { return make_solver("internal"); });
  r.program = name;
  return r;
}

TEST(ReportText, VerifiedSummary) {
  const std::string text = format_text(verify_corpus("even_odd"), false);
  EXPECT_EQ(text.rfind("even_odd: verified\n", 0), 0u) << text;
  EXPECT_NE(text.find("  even_odd: verified ("), std::string::npos);
}

TEST(ReportText, FailureListsSpanAndWitness) {
  const std::string text = format_text(verify_corpus("mutants/even_odd_swapped"), false);
  EXPECT_NE(text.find("failed"), std::string::npos);
  EXPECT_NE(text.find("witness: <odd>"), std::string::npos) << text;
  EXPECT_NE(text.find("TraceInclusion"), std::string::npos);
}

TEST(ReportText, DumpListsDischargedObligations) {
  const VerdictReport r = verify_corpus("even_odd");
  const std::string quiet = format_text(r, false);
  const std::string dump = format_text(r, true);
  EXPECT_EQ(quiet.find("check:"), std::string::npos);
  EXPECT_NE(dump.find("(even odd)* even odd  <=  (even odd)*"), std::string::npos) << dump;
}

TEST(ReportJson, MirrorsTheVerdict) {
  const auto j = to_json(verify_corpus("mutants/even_odd_swapped"), false);
  EXPECT_EQ(j["verified"], false);
  ASSERT_EQ(j["procedures"].size(), 1u);
  const auto& proc = j["procedures"][0];
  EXPECT_EQ(proc["status"], "failed");
  ASSERT_FALSE(proc["obligations"].empty());
  bool saw_witness = false;
  for (const auto& o : proc["obligations"]) {
    EXPECT_EQ(o["verdict"], "fails");
    if (o.contains("witness")) saw_witness = saw_witness || o["witness"] == nlohmann::ordered_json::array({"odd"});
  }
  EXPECT_TRUE(saw_witness);
}

TEST(ReportJson, DischargedObligationsOnlyWhenRequested) {
  const VerdictReport r = verify_corpus("even_odd");
  EXPECT_TRUE(to_json(r, false)["procedures"][0]["obligations"].empty());
  EXPECT_EQ(to_json(r, true)["procedures"][0]["obligations"].size(),
            to_json(r, true)["procedures"][0]["obligations_total"].get<std::size_t>());
}

TEST(ReportJson, Deterministic) {
  EXPECT_EQ(to_json(verify_corpus("matcher"), true).dump(), to_json(verify_corpus("matcher"), true).dump());
}

TEST(ReportOracle, TextAndJson) {
  const Program p = testing::load_corpus("mutants/even_odd_swapped");
  OracleOptions opts;
  opts.runs = 20;
  const OracleReport r = check_triple_random(p, p.entry, opts);
  const std::string text = format_text(r);
  EXPECT_EQ(text.rfind("oracle: " + std::to_string(r.violations.size()) + " violations / 20 runs", 0), 0u) << text;
  const auto j = to_json(r);
  EXPECT_EQ(j["runs"], 20);
  EXPECT_EQ(j["violations"].size(), r.violations.size());
}

}  // namespace
}  // namespace regtrace
