#include <gtest/gtest.h>

#include <json.hpp>

#include "contract_check.hpp"
#include "fixtures.hpp"
#include "stipula/codegen.hpp"
#include "stipula/parser.hpp"

using namespace stipula;
using namespace stipula::testing;

namespace {

std::vector<ScenarioPlan> plans(const ContractAst& ast) {
  Automaton a = build_automaton(ast);
  return enumerate_scenarios(a, enumerate_cycles(a), ast);
}

std::vector<ScenarioPlan> plans(const std::string& fixture) { return plans(load_fixture(fixture)); }

/// `begin(h) loop event1` style summary of a plan.
std::string skeleton(const ScenarioPlan& p) {
  std::string out;
  for (const auto& s : p.steps) {
    if (!out.empty()) out += " ";
    if (const auto* c = std::get_if<CallStep>(&s)) {
      out += c->clause + "(";
      for (std::size_t i = 0; i < c->args.size(); ++i) out += (i ? "," : "") + c->args[i].second;
      out += ")";
    } else if (const auto* g = std::get_if<GuardedEvent>(&s)) {
      out += "[" + g->guard + "]";
    } else if (const auto* e = std::get_if<EventStep>(&s)) {
      out += "event" + std::to_string(e->event_index);
    } else {
      out += "loop";
    }
  }
  return out;
}

std::vector<std::string> skeletons(const std::vector<ScenarioPlan>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(p.name + ": " + skeleton(p));
  return out;
}

}  // namespace

TEST(Scenario, LoanPlans) {
  auto ps = plans("loan");
  EXPECT_EQ(skeletons(ps),
            (std::vector<std::string>{
                "seq1: give_money(w) [ev_event1] pay_installment1(h) [ev_event2] pay_installment2(h) [ev_event3] "
                "pay_installment3(h)",
                "seq2: withdraw(u)"}));
  EXPECT_EQ(ps[0].guards(), (std::vector<std::string>{"ev_event1", "ev_event2", "ev_event3"}));
  EXPECT_EQ(ps[0].symbols, (std::vector<Symbol>{{"w", ValueType::Int}, {"h", ValueType::Int}}));
}

TEST(Scenario, LicensePlans) {
  EXPECT_EQ(skeletons(plans("license")),
            (std::vector<std::string>{"seq1: offer(x,n) event1", "seq2: offer(x,n) activate(b) event2",
                                      "seq3: offer(x,n) activate(b) buy()"}));
}

TEST(Scenario, DepositPlansHaveOneLoop) {
  auto ps = plans("deposit");
  EXPECT_EQ(skeletons(ps), (std::vector<std::string>{"seq1: begin(h) loop event1", "seq2: begin(h) loop buy(w) event2"}));
  for (const auto& p : ps) {
    ASSERT_TRUE(p.loop.has_value());
    EXPECT_EQ(p.loop->entry_state, "RunC");
    ASSERT_EQ(p.loop->body.size(), 2u);
    EXPECT_EQ(p.loop->body[0].clause, "buy");
    EXPECT_EQ(p.loop->body[1].args[0].second, "h_send");  // h is taken by begin
  }
}

TEST(Scenario, DepositLoopDeltas) {
  auto ps = plans("deposit");
  const LoopSegment& seg = *ps[0].loop;
  std::map<std::string, std::string> per;
  for (const auto& d : seg.deltas) per[d.loc.str()] = render(d.per_iteration());
  EXPECT_EQ(per.at("Deposit.flour"), "-(w/\\old(cost_flour)) + h_send");
  EXPECT_EQ(per.at("Farm.flour"), "-h_send");
  ASSERT_EQ(seg.divisibility.size(), 1u);
  EXPECT_EQ(render(seg.divisibility[0]), "w % \\old(cost_flour) == 0");
  for (const auto& d : seg.deltas)
    if (d.loc.str() == "Client.flour") {
      EXPECT_EQ(render(d.after(t_old(d.loc), t_var("n"))), "\\old(Client.flour) + n * w/\\old(cost_flour)");
    }
}

TEST(Scenario, DepositInvariantText) {
  ContractAst ast = load_fixture("deposit");
  AssetAnalysis assets = analyze_assets(ast);
  auto ps = plans(ast);
  LoopAnnotation ann = synthesize_loop_invariant(*ps[0].loop, assets);
  RenderOptions ro;
  ro.unqualified_contract = true;
  std::vector<std::string> inv;
  for (const auto& c : ann.invariants) inv.push_back(render(c, ro));
  EXPECT_NE(std::find(inv.begin(), inv.end(), "flour == \\old(flour) - i * w/cost_flour + i * h_send"), inv.end());
  EXPECT_NE(std::find(inv.begin(), inv.end(), "flour + Client.flour + Farm.flour == kappa_flour"), inv.end());
  EXPECT_EQ(render(ann.variant), "counter - i");
}

TEST(Scenario, OverlapIsRejectedWithWitness) {
  ContractAst ast = load_fixture("overlap");
  Automaton a = build_automaton(ast);
  try {
    (void)enumerate_scenarios(a, enumerate_cycles(a), ast);
    FAIL() << "expected NotDisjointError";
  } catch (const NotDisjointError& e) {
    EXPECT_NE(std::string(e.what()).find("-ab->"), std::string::npos) << e.what();
  }
}

TEST(Scenario, UnsupportedShapes) {
  // an empty-bodied event on the cycle
  EXPECT_THROW((void)plans(load_contract(R"(stipula X { asset field agreement (P) { } => @A
    @A P : go()[] { now + 1 >> @B { } => @A } => @B })")),
               NotSupportedError);
  // a field doubled on every iteration
  EXPECT_THROW((void)plans(load_contract(R"(stipula X { asset field g agreement (P)(g) { P : g } => @A
    @A P : go()[] { g * 2 -> g } => @B
    @B P : back()[] { } => @A })")),
               NonLinearDeltaError);
}

TEST(Scenario, ScenarioSpecIsGuardedMerge) {
  ContractAst ast = load_fixture("loan");
  AssetAnalysis assets = analyze_assets(ast);
  auto ps = plans(ast);
  ClauseSpec s = derive_scenario_spec(ast, assets, ps[0]);
  std::vector<std::string> params;
  for (const auto& p : s.params) params.push_back(p.name + ":" + std::string(type_name(p.type)));
  EXPECT_EQ(params, (std::vector<std::string>{"w:int", "h:int", "ev_event1:boolean", "ev_event2:boolean",
                                              "ev_event3:boolean"}));
}

TEST(Scenario, LoopSpecQuantifiesObligations) {
  ContractAst ast = load_fixture("deposit");
  AssetAnalysis assets = analyze_assets(ast);
  ClauseSpec s = derive_loop_spec(ast, assets, plans(ast)[0]);
  EXPECT_EQ(s.method, "seq1_loop");
  EXPECT_EQ(s.params.front().name, "counter");
  EXPECT_EQ(render(s.requires_.front()), "counter >= 0");
  bool has_forall = false;
  for (const auto& r : s.requires_) has_forall |= r->kind == Term::Kind::Forall;
  EXPECT_TRUE(has_forall);
}

TEST(Scenario, PlansJson) {
  ContractAst ast = load_fixture("deposit");
  Automaton a = build_automaton(ast);
  auto j = nlohmann::json::parse(plans_to_json(a, enumerate_scenarios(a, enumerate_cycles(a), ast)));
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["name"], "seq1");
  EXPECT_EQ(j[0]["steps"][1]["kind"], "loop");
  EXPECT_EQ(j[0]["loop"]["entry"], "RunC");
  EXPECT_EQ(j[0]["loop"]["counter"], "counter");
}

TEST(Scenario, GeneratedScenarioContractsHoldOnReplay) {
  Rng rng(23);
  for (const auto& name : corpus()) {
    ContractAst ast = load_fixture(name);
    Interpreter in(ast);
    Automaton a = build_automaton(ast);
    MethodRunner runner(in, a, enumerate_scenarios(a, enumerate_cycles(a), ast, in.assets()));
    for (const auto& m : translate(ast).methods) {
      if (m.kind != TargetMethod::Kind::Scenario && m.kind != TargetMethod::Kind::LoopHelper) continue;
      ContractCheck r = check_method_contract(in, runner, m, rng, 60);
      EXPECT_TRUE(r.violations.empty()) << name << ": " << (r.violations.empty() ? "" : r.violations.front());
      EXPECT_EQ(r.accepted, 60u) << name << "." << m.name;
    }
  }
}

TEST(Scenario, ContractWithoutClausesHasNoPlans) { EXPECT_TRUE(plans("empty").empty()); }
