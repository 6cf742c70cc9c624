#pragma once

#include <string>

#include "stipula/analysis.hpp"
#include "stipula/automaton.hpp"

namespace stipula {

/// `N cycle(s), disjoint` or `N cycles, not disjoint`.
[[nodiscard]] std::string cycle_summary(const CycleReport& r);

/// Assets, clause contracts and cycle structure as JSON (see docs/formats.md).
[[nodiscard]] std::string analysis_report_json(const ContractAst& ast);

}  // namespace stipula
