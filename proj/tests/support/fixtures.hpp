#pragma once

#include <string>
#include <vector>

#include "stipula/ast.hpp"

namespace stipula::testing {

/// Absolute path of `tests/fixtures/<name>.stipula`.
[[nodiscard]] std::string fixture_path(const std::string& name);
[[nodiscard]] std::string read_fixture(const std::string& name);
/// Parsed and canonicalized.
[[nodiscard]] ContractAst load_fixture(const std::string& name);

/// The four case-study contracts.
[[nodiscard]] const std::vector<std::string>& corpus();

/// Collapse every whitespace run to one space.
[[nodiscard]] std::string normalize_ws(const std::string& s);

}  // namespace stipula::testing
