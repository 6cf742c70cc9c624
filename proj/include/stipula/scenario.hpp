#pragma once

// Scenario plans: linear paths through the automaton from the initial state,
// with at most one cycle collapsed into a counted loop.

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stipula/analysis.hpp"
#include "stipula/automaton.hpp"

namespace stipula {

/// A clause call; args pair each parameter (value params, then asset params)
/// with the scenario symbol passed for it.
struct CallStep {
  std::string clause;
  std::vector<std::pair<std::string, std::string>> args;

  bool operator==(const CallStep&) const = default;
};

/// `if (guard) { eventN(); return; }` for an event with an empty body.
struct GuardedEvent {
  int event_index = 0;
  std::string guard;  // ev_event<N>

  bool operator==(const GuardedEvent&) const = default;
};

/// An event with effects, taken unconditionally on this path.
struct EventStep {
  int event_index = 0;

  bool operator==(const EventStep&) const = default;
};

/// Position of the plan's loop.
struct LoopStep {
  bool operator==(const LoopStep&) const = default;
};

using ScenarioStep = std::variant<CallStep, GuardedEvent, EventStep, LoopStep>;

struct SignedTerm {
  bool negative = false;
  TermPtr term;
};

/// Change of one location over one loop iteration, as a signed sum of terms
/// that do not depend on anything the loop writes.
struct LoopDelta {
  Location loc;
  std::vector<SignedTerm> terms;

  [[nodiscard]] TermPtr per_iteration() const;
  /// `base + n*t1 - n*t2 ...`, with `n*(a/b)` written `(n*a)/b`.
  [[nodiscard]] TermPtr after(const TermPtr& base, const TermPtr& n) const;
};

struct LoopSegment {
  std::string entry_state;
  Trace cycle;  // rotated to start at the entry state
  std::vector<CallStep> body;
  std::string counter = "counter";
  std::string index = "i";
  std::vector<LoopDelta> deltas;  // write order
  std::vector<Location> frame;
  /// `a % b == 0` for every scaled quotient `a/b`.
  std::vector<Condition> divisibility;
};

struct Symbol {
  std::string name;
  ValueType type = ValueType::Int;

  bool operator==(const Symbol&) const = default;
};

struct ScenarioPlan {
  std::string name;  // seq<N>
  std::vector<ScenarioStep> steps;
  std::optional<LoopSegment> loop;
  /// Symbolic arguments in first-use order.
  std::vector<Symbol> symbols;

  [[nodiscard]] std::vector<std::string> guards() const;
};

/// Throws NotDisjointError (carrying the witness) unless the report is disjoint;
/// NotSupportedError for a guard-only event triggered on a cycle or a path
/// meeting two cycles; NonLinearDeltaError from loop summarization.
[[nodiscard]] std::vector<ScenarioPlan> enumerate_scenarios(const Automaton& a, const CycleReport& report,
                                                            const ContractAst& ast);
[[nodiscard]] std::vector<ScenarioPlan> enumerate_scenarios(const Automaton& a, const CycleReport& report,
                                                            const ContractAst& ast, const AssetAnalysis& assets);

struct LoopAnnotation {
  std::vector<Condition> invariants;
  TermPtr variant;
};

/// Per-location equations in the loop index, index bounds, and the asset
/// invariants of touched assets. Locations the loop does not write appear as
/// plain reads.
[[nodiscard]] LoopAnnotation synthesize_loop_invariant(const LoopSegment& seg, const AssetAnalysis& assets);

/// Contract of the helper method running a plan's loop (`<plan>_loop`).
[[nodiscard]] ClauseSpec derive_loop_spec(const ContractAst& ast, const AssetAnalysis& assets,
                                          const ScenarioPlan& plan);
/// Contract of the scenario method itself.
[[nodiscard]] ClauseSpec derive_scenario_spec(const ContractAst& ast, const AssetAnalysis& assets,
                                              const ScenarioPlan& plan);

[[nodiscard]] std::string plans_to_json(const Automaton& a, const std::vector<ScenarioPlan>& plans);

}  // namespace stipula
