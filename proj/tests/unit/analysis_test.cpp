#include <gtest/gtest.h>

#include "contract_check.hpp"
#include "fixtures.hpp"
#include "stipula/analysis.hpp"
#include "stipula/parser.hpp"

using namespace stipula;
using namespace stipula::testing;

namespace {

std::vector<std::string> rendered(const std::vector<Condition>& cs, bool pre = false) {
  RenderOptions ro;
  ro.old_as_current = pre;
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(render(c, ro));
  return out;
}

std::vector<std::string> names(const std::vector<Location>& ls) {
  std::vector<std::string> out;
  for (const auto& l : ls) out.push_back(l.str());
  return out;
}

}  // namespace

TEST(Analysis, ClassifiesCorpusAssets) {
  AssetAnalysis lic = analyze_assets(load_fixture("license"));
  EXPECT_EQ(lic.at("balance").kind, AssetKind::Indivisible);
  EXPECT_EQ(lic.at("token").kind, AssetKind::Indivisible);
  EXPECT_EQ(names(lic.at("token").owners), (std::vector<std::string>{"License.token", "Licensor.token", "Licensee.token"}));

  AssetAnalysis dep = analyze_assets(load_fixture("deposit"));
  EXPECT_EQ(dep.at("flour").kind, AssetKind::Divisible);
  EXPECT_EQ(dep.at("flour").kappa, "kappa_flour");
  EXPECT_EQ(dep.asset_of("begin", "h"), std::optional<std::string>("flour"));
  EXPECT_EQ(dep.asset_of("buy", "w"), std::nullopt);  // paid to Farm directly

  AssetAnalysis bet = analyze_assets(load_fixture("betting"));
  EXPECT_TRUE(bet.is_divisible("wallet"));
}

TEST(Analysis, AssetInvariants) {
  AssetAnalysis dep = analyze_assets(load_fixture("deposit"));
  EXPECT_EQ(render(conservation_invariant(dep.at("flour"))), "Deposit.flour + Client.flour + Farm.flour == kappa_flour");
  EXPECT_THROW((void)exclusivity_invariant(dep.at("flour")), KindError);

  AssetAnalysis lic = analyze_assets(load_fixture("license"));
  EXPECT_EQ(render(exclusivity_invariant(lic.at("token"))),
            "License.token && !Licensor.token && !Licensee.token || Licensor.token && !License.token && "
            "!Licensee.token || Licensee.token && !License.token && !Licensor.token");
  EXPECT_THROW((void)conservation_invariant(lic.at("token")), KindError);
}

TEST(Analysis, ConflictingParameterUse) {
  const char* src = R"(stipula C {
    asset a, b
    field
    agreement (P) { } => @S
    @S P : f()[h] { h -o a  h -o b } => @T
  })";
  EXPECT_THROW((void)analyze_assets(load_contract(src)), ConflictError);

  const char* cross = R"(stipula C {
    asset a, b
    field
    agreement (P) { } => @S
    @S P : f()[] { a -o b } => @T
  })";
  EXPECT_THROW((void)analyze_assets(load_contract(cross)), ConflictError);
}

TEST(Analysis, LicenseBuySpec) {
  ContractAst ast = load_fixture("license");
  AssetAnalysis assets = analyze_assets(ast);
  ClauseSpec s = derive_clause_spec(ast, *ast.find_clause("buy"), assets);
  EXPECT_EQ(rendered(s.requires_, true), (std::vector<std::string>{"License.balance", "License.token"}));
  EXPECT_EQ(rendered(s.ensures), (std::vector<std::string>{"Licensor.balance", "!License.balance", "Licensee.token",
                                                           "!License.token"}));
  EXPECT_EQ(names(s.frame), (std::vector<std::string>{"Licensor.balance", "License.balance", "Licensee.token",
                                                      "License.token"}));
  EXPECT_EQ(s.source_state, "Trial");
  EXPECT_EQ(s.target_state, "End");
}

TEST(Analysis, DepositSendSpec) {
  ContractAst ast = load_fixture("deposit");
  AssetAnalysis assets = analyze_assets(ast);
  ClauseSpec s = derive_clause_spec(ast, *ast.find_clause("send"), assets);
  EXPECT_EQ(rendered(s.requires_, true), (std::vector<std::string>{"h >= 0", "Farm.flour >= h"}));
  EXPECT_EQ(rendered(s.ensures), (std::vector<std::string>{"Deposit.flour == \\old(Deposit.flour) + h",
                                                           "Farm.flour == \\old(Farm.flour) - h",
                                                           "Client.flour == \\old(Client.flour)"}));
  EXPECT_EQ(names(s.frame), (std::vector<std::string>{"Deposit.flour", "Farm.flour"}));
}

TEST(Analysis, EventSpecDrainsContract) {
  ContractAst ast = load_fixture("deposit");
  AssetAnalysis assets = analyze_assets(ast);
  ClauseSpec s = derive_clause_spec(ast, *ast.find_event(1), assets);
  EXPECT_TRUE(s.is_event);
  EXPECT_EQ(s.method, "event1");
  EXPECT_EQ(rendered(s.ensures)[0], "Farm.flour == \\old(Farm.flour) + \\old(Deposit.flour)");
  EXPECT_EQ(rendered(s.ensures)[1], "Deposit.flour == 0");
}

TEST(Analysis, BettingBranchesMerge) {
  ContractAst ast = load_fixture("betting");
  AssetAnalysis assets = analyze_assets(ast);
  ClauseSpec s = derive_clause_spec(ast, *ast.find_clause("data"), assets);
  EXPECT_FALSE(s.ensures.empty());
  std::vector<std::string> frame = names(s.frame);
  EXPECT_NE(std::find(frame.begin(), frame.end(), "Betting.wallet"), frame.end());
  EXPECT_NE(std::find(frame.begin(), frame.end(), "DataProvider.wallet"), frame.end());
}

TEST(Analysis, AllLocationsFieldsFirst) {
  ContractAst ast = load_fixture("deposit");
  EXPECT_EQ(names(all_locations(ast, analyze_assets(ast))),
            (std::vector<std::string>{"cost_flour", "Deposit.flour", "Client.flour", "Farm.flour"}));
}

// The same randomized agreement as the acceptance run, on fewer samples.
TEST(Analysis, ClauseContractsAgreeWithInterpreter) {
  Rng rng(5);
  for (const auto& name : corpus()) {
    ContractAst ast = load_fixture(name);
    Interpreter in(ast);
    Automaton a = build_automaton(ast);
    MethodRunner runner(in, a, enumerate_scenarios(a, enumerate_cycles(a), ast, in.assets()));
    for (const auto& c : ast.clauses) {
      ClauseSpec spec = derive_clause_spec(ast, c, in.assets());
      TargetMethod m{TargetMethod::Kind::Clause, c.name, spec.params, spec.requires_, spec.ensures, spec.frame, {}};
      ContractCheck r = check_method_contract(in, runner, m, rng, 100);
      EXPECT_TRUE(r.violations.empty()) << name << ": " << (r.violations.empty() ? "" : r.violations.front());
      EXPECT_EQ(r.accepted, 100u) << name << "." << c.name;
    }
  }
}
