#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stipula/ast.hpp"

namespace stipula {

struct TransitionLabel {
  enum class Kind { Function, Event };
  Kind kind = Kind::Function;
  std::string name;     // function name
  int event_index = 0;  // event label ev<N>

  static TransitionLabel function(std::string n) { return {Kind::Function, std::move(n), 0}; }
  static TransitionLabel event(int i) { return {Kind::Event, "", i}; }

  /// `offer`, `ev1`, ...
  [[nodiscard]] std::string str() const;
  friend bool operator==(const TransitionLabel&, const TransitionLabel&) = default;
};

struct Transition {
  std::string from;
  TransitionLabel label;
  std::string to;

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct Automaton {
  std::string name;
  std::vector<std::string> states;  // initial first, then first appearance
  std::string initial;
  std::vector<Transition> transitions;  // each function, then its events

  [[nodiscard]] std::vector<std::size_t> outgoing(const std::string& state) const;
  [[nodiscard]] bool has_state(const std::string& s) const;
};

/// A linear trace as indices into Automaton::transitions.
using Trace = std::vector<std::size_t>;

struct CycleReport {
  /// Each cycle rotated to start at its smallest transition index; sorted.
  std::vector<Trace> cycles;
  bool disjoint = true;
  std::optional<std::pair<Trace, Trace>> witness;
  /// Iterations until the (A, C) fixpoint was reached.
  std::size_t iterations = 0;
  /// A_0..A_n and C_0..C_n, each sorted.
  std::vector<std::vector<Trace>> a_history;
  std::vector<std::vector<Trace>> c_history;
};

[[nodiscard]] Automaton build_automaton(const ContractAst& ast);

/// Cycle construction by fixpoint over linear traces from the initial state.
[[nodiscard]] CycleReport enumerate_cycles(const Automaton& a);

/// States visited by a trace, in order; for a cycle the start state is not repeated.
[[nodiscard]] std::vector<std::string> trace_states(const Automaton& a, const Trace& t);
[[nodiscard]] bool is_cycle(const Automaton& a, const Trace& t);
/// Rotation starting at the smallest transition index.
[[nodiscard]] Trace canonical_rotation(const Trace& cycle);
/// `RunC -buy-> RunF -send-> RunC`
[[nodiscard]] std::string describe(const Automaton& a, const Trace& t);

[[nodiscard]] std::vector<std::string> unreachable_states(const Automaton& a);

/// Graphviz text; nodes sorted by name, edges by source then declaration order.
[[nodiscard]] std::string to_dot(const Automaton& a);

}  // namespace stipula
