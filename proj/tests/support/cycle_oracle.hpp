#pragma once

// Brute-force simple-cycle enumeration, independent of the fixpoint
// construction in the library.

#include <cstddef>
#include <set>
#include <vector>

#include "stipula/automaton.hpp"

namespace stipula::testing {

struct OracleCycles {
  /// Transition-index cycles, each rotated to start at its smallest index.
  std::set<std::vector<std::size_t>> cycles;
  bool disjoint = true;
};

/// Every simple cycle through a state reachable from the initial state.
[[nodiscard]] OracleCycles dfs_simple_cycles(const Automaton& a);

}  // namespace stipula::testing
