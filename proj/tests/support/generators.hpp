#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "stipula/automaton.hpp"
#include "stipula/interp.hpp"

namespace stipula::testing {

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi].
[[nodiscard]] std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi);

/// States S0..S<n-1> (S0 initial), transitions f0..f<m-1> with random ends.
[[nodiscard]] Automaton random_automaton(Rng& rng, std::size_t max_states = 8, std::size_t max_transitions = 16);

/// Small values in [0, span] (rarely negative), biased toward `hints` so
/// equality guards get hit.
[[nodiscard]] Value random_value(Rng& rng, ValueType t, const std::vector<std::int64_t>& hints, std::int64_t span = 12);

/// Non-negative small values for every field.
[[nodiscard]] std::map<std::string, Value> random_fields(const ContractAst& ast, Rng& rng);
/// Divisible party slots in [0, 40]; each indivisible asset given to one random party.
[[nodiscard]] std::map<Location, std::int64_t> random_endowments(const AssetAnalysis& assets, Rng& rng);

/// Random fields in [0, scale] and asset slots (contract slots included) at
/// `control`, nothing pending.
[[nodiscard]] RuntimeState random_state(const Interpreter& in, Rng& rng, const std::string& control,
                                        std::int64_t scale = 8);

/// Int field values, asset slot values and their pairwise products.
[[nodiscard]] std::vector<std::int64_t> value_hints(const RuntimeState& s);

}  // namespace stipula::testing
