#pragma once

// Executes generated methods in the reference interpreter, so their
// contracts can be checked against concrete runs.

#include <string>
#include <vector>

#include "stipula/codegen.hpp"
#include "stipula/interp.hpp"

namespace stipula::testing {

class MethodRunner {
 public:
  MethodRunner(const Interpreter& in, const Automaton& a, std::vector<ScenarioPlan> plans);

  [[nodiscard]] const std::vector<ScenarioPlan>& plans() const { return plans_; }
  [[nodiscard]] const ScenarioPlan& plan(const std::string& name) const;

  /// Moves `base` to the state the method starts from (control state, and
  /// for events a pending instance that is due).
  [[nodiscard]] RuntimeState prepare(const TargetMethod& m, RuntimeState base) const;
  /// Runs the method body with `args` bound to its parameters.
  [[nodiscard]] RuntimeState execute(const TargetMethod& m, const RuntimeState& pre, const Bindings& args) const;

  [[nodiscard]] RuntimeState call(const RuntimeState& s, const CallStep& step, const Bindings& args) const;
  /// Ticks until the pending event is due, then fires it.
  [[nodiscard]] RuntimeState fire_due(const RuntimeState& s, int event_index) const;
  [[nodiscard]] RuntimeState run_loop(const RuntimeState& s, const LoopSegment& seg, const Bindings& args,
                                      std::int64_t iterations) const;
  [[nodiscard]] RuntimeState run_plan(const RuntimeState& s, const ScenarioPlan& p, const Bindings& args) const;

 private:
  const Interpreter& in_;
  Automaton automaton_;
  std::vector<ScenarioPlan> plans_;
};

/// Locations whose value differs between two stores.
[[nodiscard]] std::vector<Location> changed_locations(const Store& before, const Store& after);

}  // namespace stipula::testing
