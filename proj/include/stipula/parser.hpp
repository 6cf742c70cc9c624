#pragma once

#include <string>
#include <string_view>

#include "stipula/ast.hpp"

namespace stipula {

/// Parse and check one contract. Shorthand moves (`h -o X`) are kept as
/// AssetMove with `shorthand = true`; run canonicalize() to normalize them.
[[nodiscard]] ContractAst parse_contract(std::string_view source);

/// Drain shorthand becomes AssetDrain; every conditional gets an explicit else.
[[nodiscard]] ContractAst canonicalize(const ContractAst& ast);

/// parse_contract followed by canonicalize.
[[nodiscard]] ContractAst load_contract(std::string_view source);

/// ASCII source that parses back to a structurally equal AST.
[[nodiscard]] std::string to_source(const ContractAst& ast);
[[nodiscard]] std::string to_source(const Expr& e);

/// Name resolution and typing; fills `field_types` and `param_types`.
/// Called by parse_contract, exposed for ASTs built by hand.
void check_contract(ContractAst& ast);

}  // namespace stipula
