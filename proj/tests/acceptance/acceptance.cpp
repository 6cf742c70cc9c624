// Acceptance run: one PASS/FAIL/SKIP line per criterion. Exits non-zero when
// any criterion fails; skipped criteria do not count as failures.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "contract_check.hpp"
#include "cycle_oracle.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "replay.hpp"
#include "stipula/codegen.hpp"
#include "stipula/parser.hpp"

using namespace stipula;
using namespace stipula::testing;

namespace {

enum class Outcome { Pass, Fail, Skip };

struct Verdict {
  Outcome outcome = Outcome::Pass;
  std::string detail;
};

Verdict pass(std::string d) { return {Outcome::Pass, std::move(d)}; }
Verdict fail(std::string d) { return {Outcome::Fail, std::move(d)}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string rendered(const std::string& fixture) { return render(translate(load_fixture(fixture))); }

// 1 -------------------------------------------------------------------------
Verdict corpus_round_trip() {
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& name : corpus()) {
    ContractAst ast = parse_contract(read_fixture(name));
    ContractAst back = parse_contract(to_source(ast));
    if (!structurally_equal(ast, back)) return fail(name + ": printed source does not parse back to the same AST");
    std::string java = render(translate(canonicalize(ast)));
    if (java.empty()) return fail(name + ": empty translation");
  }
  double secs = seconds_since(t0);
  if (secs >= 1.0) return fail("corpus took " + std::to_string(secs) + " s");
  return pass("4 contracts parsed, round-tripped and translated in " + std::to_string(secs) + " s");
}

// 2 -------------------------------------------------------------------------
Verdict quoted_fragments() {
  struct Want {
    std::string fixture, fragment;
  };
  const std::vector<Want> wants{
      {"license", "requires License.balance && License.token"},
      {"deposit", "Deposit.flour == \\old(Deposit.flour) + h"},
      {"deposit", "flour == \\old(flour) - i * w/cost_flour + i * h_send"},
      {"loan", "if (ev_event1) { event1(); return; }"},
  };
  for (const auto& w : wants) {
    std::string text = normalize_ws(rendered(w.fixture));
    if (text.find(normalize_ws(w.fragment)) == std::string::npos)
      return fail(w.fixture + " lacks `" + w.fragment + "`");
  }
  return pass("4 fragments found");
}

// 3 -------------------------------------------------------------------------
using Edge = std::tuple<std::string, std::string, std::string>;

std::set<Edge> edges(const Automaton& a) {
  std::set<Edge> out;
  for (const auto& t : a.transitions) out.insert({t.from, t.label.str(), t.to});
  return out;
}

Verdict automaton_fidelity() {
  Automaton lic = build_automaton(load_fixture("license"));
  std::set<Edge> lic_want{{"Init", "offer", "Prop"},
                          {"Prop", "activate", "Trial"},
                          {"Trial", "buy", "End"},
                          {"Prop", "ev1", "End"},
                          {"Trial", "ev2", "End"}};
  std::set<std::string> lic_states(lic.states.begin(), lic.states.end());
  if (lic.initial != "Init" || lic_states != std::set<std::string>{"Init", "Prop", "Trial", "End"} ||
      lic.transitions.size() != 5 || edges(lic) != lic_want)
    return fail("License automaton differs");

  Automaton dep = build_automaton(load_fixture("deposit"));
  std::set<Edge> dep_want{{"Start", "begin", "RunC"},
                          {"RunC", "buy", "RunF"},
                          {"RunF", "send", "RunC"},
                          {"RunC", "ev1", "End"},
                          {"RunF", "ev2", "End"}};
  std::set<std::string> dep_states(dep.states.begin(), dep.states.end());
  if (dep.initial != "Start" || dep_states != std::set<std::string>{"Start", "RunC", "RunF", "End"} ||
      dep.transitions.size() != 5 || edges(dep) != dep_want)
    return fail("Deposit automaton differs");
  CycleReport r = enumerate_cycles(dep);
  if (r.cycles.size() != 1 || !r.disjoint) return fail("Deposit should have exactly one cycle");
  std::set<std::string> on_cycle;
  for (const auto& s : trace_states(dep, r.cycles.front())) on_cycle.insert(s);
  if (on_cycle != std::set<std::string>{"RunC", "RunF"}) return fail("Deposit cycle is not RunC<->RunF");
  return pass("License and Deposit automata match");
}

// 4 -------------------------------------------------------------------------
Verdict cycle_oracle() {
  constexpr int kAutomata = 2000;
  Rng rng(20240401);
  auto t0 = std::chrono::steady_clock::now();
  int with_cycles = 0, overlapping = 0;
  for (int n = 0; n < kAutomata; ++n) {
    Automaton a = random_automaton(rng);
    CycleReport got = enumerate_cycles(a);
    OracleCycles want = dfs_simple_cycles(a);
    std::set<std::vector<std::size_t>> got_set(got.cycles.begin(), got.cycles.end());
    if (got_set != want.cycles) return fail("cycle sets differ on automaton #" + std::to_string(n));
    if (got.disjoint != want.disjoint) return fail("disjointness differs on automaton #" + std::to_string(n));
    with_cycles += !want.cycles.empty();
    overlapping += !want.disjoint;
  }
  double secs = seconds_since(t0);
  if (secs >= 30.0) return fail("took " + std::to_string(secs) + " s");
  return pass(std::to_string(kAutomata) + " automata (" + std::to_string(with_cycles) + " cyclic, " +
              std::to_string(overlapping) + " overlapping) in " + std::to_string(secs) + " s");
}

// 5 -------------------------------------------------------------------------
Verdict conservation_exclusivity() {
  constexpr long kSteps = 12000;
  Rng rng(7);
  long steps = 0, rejected = 0;
  std::size_t turn = 0;
  while (steps < kSteps) {
    const std::string& name = corpus()[turn++ % corpus().size()];
    Interpreter in(load_fixture(name));
    RuntimeState s = in.init(random_fields(in.ast(), rng), random_endowments(in.assets(), rng));
    if (!in.exclusive(s)) return fail(name + ": initial state not exclusive");
    for (int k = 0; k < 40 && steps < kSteps; ++k) {
      RuntimeState next;
      try {
        auto roll = uniform(rng, 0, 9);
        auto due = in.fireable(s);
        if (roll < 2 && !due.empty()) {
          next = in.fire_event(s, due[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(due.size()) - 1))]);
        } else if (roll < 4) {
          next = in.tick(s, uniform(rng, 0, 2) == 0 ? uniform(rng, 0, 400) : uniform(rng, 0, 10));
        } else {
          const auto& cs = in.ast().clauses;
          const FunctionClause& c = cs[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(cs.size()) - 1))];
          auto hints = value_hints(s);
          ValueArgs values;
          AssetArgs assets;
          for (const auto& p : c.value_params) values[p] = random_value(rng, c.param_types.at(p), hints);
          for (const auto& p : c.asset_params) assets[p] = std::get<std::int64_t>(random_value(rng, ValueType::Int, hints));
          next = in.invoke(s, c.name, values, assets);
        }
      } catch (const Error&) {
        ++rejected;
        continue;
      }
      ++steps;
      if (!in.conserved(s, next)) return fail(name + ": owner-sum changed at step " + std::to_string(steps));
      if (!in.exclusive(next)) return fail(name + ": indivisible asset without a unique owner at step " + std::to_string(steps));
      s = std::move(next);
    }
  }
  return pass(std::to_string(steps) + " steps accepted (" + std::to_string(rejected) + " rejected inputs), no violations");
}

// 6 -------------------------------------------------------------------------
Verdict spec_soundness() {
  Rng rng(11);
  std::size_t methods = 0;
  for (const auto& name : corpus()) {
    ContractAst ast = load_fixture(name);
    Interpreter in(ast);
    Automaton a = build_automaton(ast);
    MethodRunner runner(in, a, enumerate_scenarios(a, enumerate_cycles(a), ast, in.assets()));
    TargetUnit unit = translate(ast);
    for (const auto& m : unit.methods) {
      ContractCheck c = check_method_contract(in, runner, m, rng);
      ++methods;
      if (!c.violations.empty()) return fail(name + "." + c.violations.front());
      if (c.accepted < 500)
        return fail(name + "." + m.name + ": only " + std::to_string(c.accepted) + " requires-satisfying inputs in " +
                    std::to_string(c.attempts) + " attempts");
    }
  }
  return pass(std::to_string(methods) + " methods, 500 satisfying inputs each, no violations");
}

// 7 -------------------------------------------------------------------------
Verdict loop_invariant() {
  ContractAst ast = load_fixture("deposit");
  Interpreter in(ast);
  Automaton a = build_automaton(ast);
  MethodRunner runner(in, a, enumerate_scenarios(a, enumerate_cycles(a), ast, in.assets()));
  const LoopSegment& seg = *runner.plans().front().loop;
  LoopAnnotation ann = synthesize_loop_invariant(seg, in.assets());
  const AssetModel& flour = in.assets().at("flour");

  Rng rng(3);
  int runs = 0;
  for (std::int64_t k = 0; k <= 3; ++k) {
    for (int n = 0; n < 250; ++n) {
      std::int64_t cost = uniform(rng, 1, 6);
      std::int64_t w = cost * uniform(rng, 0, 5);
      std::int64_t h_send = uniform(rng, 0, 10);
      RuntimeState s = random_state(in, rng, seg.entry_state);
      s.fields["cost_flour"] = cost;
      s.assets[flour.contract_slot()] = uniform(rng, 3 * (w / cost), 60);
      s.assets[Location::party("Farm", "flour")] = uniform(rng, 3 * h_send, 60);

      Bindings vars{{"w", w}, {"h_send", h_send}, {"i", k}, {"counter", k + uniform(rng, 0, 2)}};
      std::int64_t total = 0;
      for (const auto& o : flour.owners) total += s.asset(o);
      vars[flour.kappa] = total;

      RuntimeState after;
      try {
        after = runner.run_loop(s, seg, vars, k);
      } catch (const Error& e) {
        return fail("unrolling " + std::to_string(k) + " rejected: " + e.what());
      }
      Store pre = s.store(in.assets()), post = after.store(in.assets());
      EvalEnv env{&pre, &post, vars};
      for (const auto& inv : ann.invariants)
        if (!holds(inv, env)) return fail("k=" + std::to_string(k) + ": invariant fails: " + render(inv));
      ++runs;
    }
  }
  return pass(std::to_string(runs) + " unrollings (k = 0..3) satisfy " + std::to_string(ann.invariants.size()) +
              " invariant conjuncts");
}

// 8 -------------------------------------------------------------------------
std::vector<ScenarioPlan> plans_of(const std::string& name) {
  ContractAst ast = load_fixture(name);
  Automaton a = build_automaton(ast);
  return enumerate_scenarios(a, enumerate_cycles(a), ast);
}

Verdict scenario_counts() {
  auto loan = plans_of("loan");
  auto license = plans_of("license");
  auto deposit = plans_of("deposit");
  if (loan.size() != 2) return fail("Loan has " + std::to_string(loan.size()) + " plans");
  if (license.size() != 3) return fail("License has " + std::to_string(license.size()) + " plans");
  if (deposit.empty()) return fail("Deposit has no plans");
  for (const auto& p : deposit) {
    int loops = 0;
    for (const auto& s : p.steps) loops += std::holds_alternative<LoopStep>(s);
    if (loops != 1 || !p.loop) return fail("Deposit " + p.name + " has " + std::to_string(loops) + " loop segments");
  }
  return pass("Loan 2, License 3, Deposit " + std::to_string(deposit.size()) + " plans with one loop each");
}

// 9 -------------------------------------------------------------------------
Verdict prover_smoke() {
  const char* cmd = std::getenv("STIPULAC_PROVER");
  if (!cmd || !*cmd) return {Outcome::Skip, "STIPULAC_PROVER not set"};
  auto dir = std::filesystem::temp_directory_path() / "stipula_acceptance";
  std::filesystem::create_directories(dir);
  std::size_t total = 0;
  for (const auto& name : corpus()) {
    TargetUnit unit = translate(load_fixture(name));
    auto path = dir / (unit.class_name + ".java");
    std::ofstream(path) << render(unit);
    VerifierReport r;
    try {
      r = verify_external(path.string(), cmd);
    } catch (const ProverNotFound& e) {
      return {Outcome::Skip, e.what()};
    } catch (const ProverTimeout& e) {
      return fail(e.what());
    }
    if (!r.all_closed()) return fail(unit.class_name + ": " + std::to_string(r.open_count()) + " open obligations");
    total += r.obligations.size();
  }
  return pass(std::to_string(total) + " obligations closed");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"corpus round trip", corpus_round_trip},
      {"quoted fragments", quoted_fragments},
      {"automaton fidelity", automaton_fidelity},
      {"cycle oracle", cycle_oracle},
      {"conservation and exclusivity", conservation_exclusivity},
      {"contract soundness", spec_soundness},
      {"loop invariant", loop_invariant},
      {"scenario counts", scenario_counts},
      {"prover smoke", prover_smoke},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = fail(std::string("exception: ") + e.what());
    }
    const char* tag = v.outcome == Outcome::Pass ? "PASS" : v.outcome == Outcome::Fail ? "FAIL" : "SKIP";
    failures += v.outcome == Outcome::Fail;
    std::cout << tag << " " << (i + 1) << " " << criteria[i].first << ": " << v.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
