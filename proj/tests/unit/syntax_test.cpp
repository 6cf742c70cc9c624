#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "stipula/parser.hpp"

using namespace stipula;
using namespace stipula::testing;

namespace {

template <class E>
SourcePos error_pos(const std::string& src) {
  try {
    (void)parse_contract(src);
  } catch (const E& e) {
    return e.pos();
  }
  ADD_FAILURE() << "no error for:\n" << src;
  return {};
}

const char* kMinimal = R"(stipula M {
  asset a
  field f
  agreement (P, Q)(f) { P, Q : f } => @S
  @S P : go(x)[h] (h > 0) { h -o a  x -> f } => @T
})";

}  // namespace

TEST(Syntax, CorpusParses) {
  for (const auto& name : corpus()) EXPECT_NO_THROW((void)load_fixture(name)) << name;
}

TEST(Syntax, LicenseStructure) {
  ContractAst ast = parse_contract(read_fixture("license"));
  EXPECT_EQ(ast.name, "License");
  EXPECT_EQ(ast.assets, (std::vector<std::string>{"balance", "token"}));
  EXPECT_EQ(ast.fields, (std::vector<std::string>{"t_start", "t_limit", "cost", "code"}));
  EXPECT_EQ(ast.parties, (std::vector<std::string>{"Licensor", "Licensee"}));
  EXPECT_EQ(ast.agreement.initial_state, "Init");
  ASSERT_EQ(ast.clauses.size(), 3u);
  const FunctionClause& offer = ast.clauses[0];
  EXPECT_EQ(offer.party, "Licensor");
  EXPECT_EQ(offer.value_params, (std::vector<std::string>{"x"}));
  EXPECT_EQ(offer.asset_params, (std::vector<std::string>{"n"}));
  ASSERT_EQ(offer.events.size(), 1u);
  EXPECT_EQ(offer.events[0].trigger_state, "Prop");
  EXPECT_EQ(std::get<std::string>(offer.events[0].delay.value), "t_start");
}

TEST(Syntax, EventsNumberedByTriggerStateOrder) {
  ContractAst ast = load_fixture("deposit");
  // begin schedules the RunF event before the RunC one; RunC appears first as a state.
  const auto& evs = ast.clauses[0].events;
  ASSERT_EQ(evs.size(), 2u);
  EXPECT_EQ(evs[0].trigger_state, "RunF");
  EXPECT_EQ(evs[0].event_index, 2);
  EXPECT_EQ(evs[1].trigger_state, "RunC");
  EXPECT_EQ(evs[1].event_index, 1);
  EXPECT_EQ(ast.events().front()->trigger_state, "RunC");
}

TEST(Syntax, ShorthandDrainIsCanonicalized) {
  ContractAst raw = parse_contract(read_fixture("deposit"));
  const auto& body = raw.clauses[0].events[0].body;
  ASSERT_EQ(body.size(), 1u);
  const auto* mv = std::get_if<AssetMove>(&body[0].node);
  ASSERT_NE(mv, nullptr);
  EXPECT_TRUE(mv->shorthand);

  ContractAst canon = canonicalize(raw);
  const auto* drain = std::get_if<AssetDrain>(&canon.clauses[0].events[0].body[0].node);
  ASSERT_NE(drain, nullptr);
  EXPECT_EQ(drain->from, "flour");
  EXPECT_EQ(drain->to, "Farm");
}

TEST(Syntax, CanonicalConditionalsHaveElse) {
  ContractAst ast = load_fixture("betting");
  const FunctionClause* data = ast.find_clause("data");
  ASSERT_NE(data, nullptr);
  const auto* c = std::get_if<Conditional>(&data->body[0].node);
  ASSERT_NE(c, nullptr);
  EXPECT_TRUE(c->else_branch.has_value());
}

TEST(Syntax, PrinterRoundTrip) {
  for (const auto& name : corpus()) {
    ContractAst a = parse_contract(read_fixture(name));
    std::string printed = to_source(a);
    ContractAst b = parse_contract(printed);
    EXPECT_TRUE(structurally_equal(a, b)) << name << "\n" << printed;
    EXPECT_EQ(to_source(b), printed) << name;
  }
}

TEST(Syntax, CanonicalRoundTrip) {
  for (const auto& name : corpus()) {
    ContractAst a = load_fixture(name);
    EXPECT_TRUE(structurally_equal(a, load_contract(to_source(a)))) << name;
  }
}

TEST(Syntax, ParamTypesInferred) {
  ContractAst ast = parse_contract(kMinimal);
  const FunctionClause& go = ast.clauses[0];
  EXPECT_EQ(go.param_types.at("x"), ValueType::Int);
  EXPECT_EQ(go.param_types.at("h"), ValueType::Int);
  EXPECT_EQ(ast.field_types.at("f"), ValueType::Int);
}

TEST(Syntax, UnicodeLolliAccepted) {
  std::string src = kMinimal;
  src.replace(src.find("-o"), 2, "⊸");
  ContractAst a = parse_contract(src);
  EXPECT_TRUE(structurally_equal(a, parse_contract(kMinimal)));
}

TEST(Syntax, ErrorsCarryPositions) {
  SourcePos p = error_pos<SyntaxError>("stipula X {\n  asset a\n  field\n  agreement (P) { } => S\n}");
  EXPECT_EQ(p.line, 4);

  std::string bad_name = kMinimal;
  bad_name.replace(bad_name.find("x -> f"), 6, "y -> f");
  p = error_pos<NameError>(bad_name);
  EXPECT_EQ(p.line, 5);
}

TEST(Syntax, RejectsBadPrograms) {
  // unknown party in a clause
  EXPECT_THROW((void)parse_contract(R"(stipula X { asset field agreement (P) { } => @S
    @S Q : f()[] { } => @T })"),
               NameError);
  // sending to an undeclared field
  EXPECT_THROW((void)parse_contract(R"(stipula X { asset field agreement (P) { } => @S
    @S P : f(v)[] { v -> g } => @T })"),
               NameError);
  // asset moved into a field
  EXPECT_THROW((void)parse_contract(R"(stipula X { asset a field g agreement (P)(g) { P : g } => @S
    @S P : f()[h] { h -o g } => @T })"),
               TypeError);
  // duplicate clause
  EXPECT_THROW((void)parse_contract(R"(stipula X { asset field agreement (P) { } => @S
    @S P : f()[] { } => @T  @T P : f()[] { } => @S })"),
               NameError);
  // unterminated string
  EXPECT_THROW((void)parse_contract("stipula X { asset field agreement (P) { } => @S\n @S P : f()[] { \"abc -> P } => @T }"),
               SyntaxError);
  // mixed int/bool
  EXPECT_THROW((void)parse_contract(R"(stipula X { asset field g agreement (P)(g) { P : g } => @S
    @S P : f(v)[] (v && v > 1) { } => @T })"),
               TypeError);
}

TEST(Syntax, EmptyContractParses) {
  ContractAst ast = load_fixture("empty");
  EXPECT_EQ(ast.name, "Empty");
  EXPECT_TRUE(ast.clauses.empty());
}
