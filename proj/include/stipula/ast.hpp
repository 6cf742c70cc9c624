#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stipula/error.hpp"

namespace stipula {

enum class BinaryOp { Add, Sub, Mul, Div, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnaryOp { Not, Neg };
enum class ValueType { Int, Bool, String };

[[nodiscard]] std::string_view spelling(BinaryOp op);
[[nodiscard]] std::string_view spelling(UnaryOp op);
[[nodiscard]] std::string_view type_name(ValueType t);

// ---------------------------------------------------------------------------
// Expressions

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct IntLit {
  std::int64_t value = 0;
};
struct BoolLit {
  bool value = false;
};
struct StrLit {
  std::string value;
};
struct NameRef {
  std::string name;
};
struct UnaryExpr {
  UnaryOp op;
  ExprPtr operand;
};
struct BinaryExpr {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Expr {
  std::variant<IntLit, BoolLit, StrLit, NameRef, UnaryExpr, BinaryExpr> node;
  SourcePos pos;
};

ExprPtr make_int(std::int64_t v, SourcePos pos = {});
ExprPtr make_bool(bool v, SourcePos pos = {});
ExprPtr make_string(std::string v, SourcePos pos = {});
ExprPtr make_name(std::string name, SourcePos pos = {});
ExprPtr make_unary(UnaryOp op, ExprPtr operand, SourcePos pos = {});
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos = {});

/// The referenced name when `e` is a bare identifier.
[[nodiscard]] const std::string* as_name(const Expr& e);

// ---------------------------------------------------------------------------
// Statements

struct Statement;
using Block = std::vector<Statement>;

/// `E -> x`
struct FieldSend {
  ExprPtr value;
  std::string field;
};
/// `E -> A`; informational, never drains anything.
struct PartySend {
  ExprPtr value;
  std::string party;
};
/// `E -o h, X`. `shorthand` records that the source text was `h -o X`.
struct AssetMove {
  ExprPtr amount;
  std::string from;
  std::string to;
  bool shorthand = false;
};
/// Canonical `h -o X`: the whole content of `from` moves to `to`.
struct AssetDrain {
  std::string from;
  std::string to;
};
struct Conditional {
  ExprPtr cond;
  Block then_branch;
  std::optional<Block> else_branch;
};

struct Statement {
  std::variant<FieldSend, PartySend, AssetMove, AssetDrain, Conditional> node;
  SourcePos pos;
};

// ---------------------------------------------------------------------------
// Clauses

/// `now + k`, with k either a literal or a field name.
struct Delay {
  std::variant<std::int64_t, std::string> value;
};

struct EventClause {
  Delay delay;
  std::string trigger_state;
  Block body;
  std::string target_state;
  int event_index = 0;  // see parse_contract for the numbering rule
  SourcePos pos;
};

struct FunctionClause {
  std::string source_state;
  std::string party;
  std::string name;
  std::vector<std::string> value_params;
  std::vector<std::string> asset_params;
  std::optional<ExprPtr> guard;
  Block body;
  std::vector<EventClause> events;
  std::string target_state;
  SourcePos pos;

  /// Filled by the checker; every parameter has an entry.
  std::map<std::string, ValueType> param_types;

  [[nodiscard]] bool is_value_param(const std::string& n) const;
  [[nodiscard]] bool is_asset_param(const std::string& n) const;
  [[nodiscard]] bool is_param(const std::string& n) const {
    return is_value_param(n) || is_asset_param(n);
  }
};

struct AgreementBinding {
  std::vector<std::string> parties;
  std::vector<std::string> fields;
  SourcePos pos;
};

struct AgreementDecl {
  std::vector<std::string> header_fields;
  std::vector<AgreementBinding> bindings;
  std::string initial_state;
  SourcePos pos;

  /// Fields whose initial value is fixed by the agreement.
  [[nodiscard]] std::vector<std::string> bound_fields() const;
};

struct ContractAst {
  std::string name;
  std::vector<std::string> assets;
  std::vector<std::string> fields;
  std::vector<std::string> parties;
  AgreementDecl agreement;
  std::vector<FunctionClause> clauses;
  SourcePos pos;

  /// Filled by the checker.
  std::map<std::string, ValueType> field_types;

  [[nodiscard]] bool is_asset(const std::string& n) const;
  [[nodiscard]] bool is_field(const std::string& n) const;
  [[nodiscard]] bool is_party(const std::string& n) const;

  [[nodiscard]] const FunctionClause* find_clause(const std::string& name) const;
  /// All events ordered by `event_index` (position + 1).
  [[nodiscard]] std::vector<const EventClause*> events() const;
  [[nodiscard]] const EventClause* find_event(int index) const;
  /// The function clause whose body schedules the event.
  [[nodiscard]] const FunctionClause* event_owner(int index) const;
};

/// Structural equality, ignoring source positions.
[[nodiscard]] bool structurally_equal(const Expr& a, const Expr& b);
[[nodiscard]] bool structurally_equal(const Block& a, const Block& b);
[[nodiscard]] bool structurally_equal(const ContractAst& a, const ContractAst& b);

}  // namespace stipula
