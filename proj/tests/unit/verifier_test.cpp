#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "stipula/codegen.hpp"

using namespace stipula;
using namespace stipula::testing;

namespace {

std::filesystem::path write_unit(const std::string& fixture, const std::string& tag, bool break_ensures = false) {
  std::string text = render(translate(load_fixture(fixture)));
  if (break_ensures) {
    auto at = text.find("@ ensures    ");
    auto end = text.find(";\n", at);
    text.replace(at, end - at, "@ ensures    false");
  }
  auto dir = std::filesystem::temp_directory_path() / ("stipula_verifier_" + tag);
  std::filesystem::create_directories(dir);
  auto path = dir / (fixture + ".java");
  std::ofstream(path) << text;
  return path;
}

std::string prover(const std::string& mode = "") {
  std::string cmd = STIPULA_FAKE_PROVER;
  return mode.empty() ? cmd : "FAKE_PROVER_MODE=" + mode + " " + cmd;
}

}  // namespace

TEST(Verifier, EmptyCommandSkips) {
  VerifierReport r = verify_external("/nonexistent.java", "");
  EXPECT_EQ(r.status, VerifierReport::Status::Skipped);
  EXPECT_FALSE(r.all_closed());
  EXPECT_EQ(r.open_count(), 0u);
  EXPECT_EQ(nlohmann::json::parse(report_to_json(r))["status"], "skipped");
}

TEST(Verifier, ObligationLinesAreParsed) {
  VerifierReport r = verify_external(write_unit("license", "closed").string(), prover());
  EXPECT_EQ(r.status, VerifierReport::Status::Completed);
  EXPECT_TRUE(r.all_closed());
  ASSERT_FALSE(r.obligations.empty());
  EXPECT_EQ(r.obligations.front().name, "offer");
  auto j = nlohmann::json::parse(report_to_json(r));
  EXPECT_EQ(j["open"], 0);
  EXPECT_EQ(j["obligations"].size(), r.obligations.size());
}

TEST(Verifier, BrokenEnsuresLeavesAnOpenObligation) {
  VerifierReport r = verify_external(write_unit("license", "broken", true).string(), prover());
  EXPECT_EQ(r.open_count(), 1u);
  EXPECT_FALSE(r.all_closed());
}

TEST(Verifier, ExitStatusDecidesWithoutObligationLines) {
  auto path = write_unit("deposit", "status").string();
  VerifierReport ok = verify_external(path, prover("silent"));
  ASSERT_EQ(ok.obligations.size(), 1u);
  EXPECT_EQ(ok.obligations[0].name, "all");
  EXPECT_TRUE(ok.all_closed());
  VerifierReport bad = verify_external(path, prover("fail"));
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_EQ(bad.open_count(), 1u);
}

TEST(Verifier, MissingProver) {
  EXPECT_THROW((void)verify_external("/tmp/x.java", "/nonexistent/prover-binary"), ProverNotFound);
}

TEST(Verifier, Timeout) {
  auto t0 = std::chrono::steady_clock::now();
  EXPECT_THROW((void)verify_external(write_unit("loan", "hang").string(), prover("hang"), std::chrono::seconds(1)),
               ProverTimeout);
  EXPECT_LT(std::chrono::steady_clock::now() - t0, std::chrono::seconds(10));
}

TEST(Verifier, PathsAreQuoted) {
  auto dir = std::filesystem::temp_directory_path() / "stipula verifier 'quoted'";
  std::filesystem::create_directories(dir);
  auto path = dir / "Loan.java";
  std::ofstream(path) << render(translate(load_fixture("loan")));
  VerifierReport r = verify_external(path.string(), prover());
  EXPECT_TRUE(r.all_closed()) << r.output;
}
