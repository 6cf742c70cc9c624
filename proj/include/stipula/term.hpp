#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "stipula/ast.hpp"

namespace stipula {

/// A mutable location of the target program: a contract field, or an asset
/// slot qualified by its owner (the contract or a party).
struct Location {
  enum class Kind { Field, Contract, Party };
  Kind kind = Kind::Field;
  std::string owner;  // empty for fields
  std::string name;

  static Location field(std::string name) { return {Kind::Field, "", std::move(name)}; }
  static Location contract(std::string c, std::string asset) { return {Kind::Contract, std::move(c), std::move(asset)}; }
  static Location party(std::string p, std::string asset) { return {Kind::Party, std::move(p), std::move(asset)}; }

  [[nodiscard]] bool is_asset() const { return kind != Kind::Field; }
  /// `Owner.name`, or the bare name for fields.
  [[nodiscard]] std::string str() const;

  friend auto operator<=>(const Location&, const Location&) = default;
  friend bool operator==(const Location&, const Location&) = default;
};

using Value = std::variant<std::int64_t, bool, std::string>;
using Store = std::map<Location, Value>;
using Bindings = std::map<std::string, Value>;

[[nodiscard]] std::string value_str(const Value& v);

enum class TermOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or, Implies };

struct Term;
using TermPtr = std::shared_ptr<const Term>;
/// Conditions are boolean-valued terms.
using Condition = TermPtr;

struct Term {
  enum class Kind { Int, Bool, Str, Loc, Old, Var, Not, Neg, Binary, Ite, Forall };
  Kind kind = Kind::Int;
  std::int64_t int_value = 0;
  bool bool_value = false;
  std::string text;  // string literal, variable name, or bound variable of Forall
  Location loc;
  TermOp op = TermOp::Add;
  std::vector<TermPtr> kids;  // Binary: lhs rhs; Ite: c a b; Forall: lo hi body
};

TermPtr t_int(std::int64_t v);
TermPtr t_bool(bool v);
TermPtr t_str(std::string s);
TermPtr t_loc(Location l);
TermPtr t_old(Location l);
TermPtr t_var(std::string name);
TermPtr t_not(TermPtr a);
TermPtr t_neg(TermPtr a);
TermPtr t_bin(TermOp op, TermPtr a, TermPtr b);
TermPtr t_ite(TermPtr c, TermPtr a, TermPtr b);
/// `(\forall int var; lo <= var && var < hi; body)`
TermPtr t_forall(std::string var, TermPtr lo, TermPtr hi, TermPtr body);

inline TermPtr t_add(TermPtr a, TermPtr b) { return t_bin(TermOp::Add, std::move(a), std::move(b)); }
inline TermPtr t_sub(TermPtr a, TermPtr b) { return t_bin(TermOp::Sub, std::move(a), std::move(b)); }
inline TermPtr t_mul(TermPtr a, TermPtr b) { return t_bin(TermOp::Mul, std::move(a), std::move(b)); }
inline TermPtr t_div(TermPtr a, TermPtr b) { return t_bin(TermOp::Div, std::move(a), std::move(b)); }
inline TermPtr t_eq(TermPtr a, TermPtr b) { return t_bin(TermOp::Eq, std::move(a), std::move(b)); }
inline TermPtr t_ge(TermPtr a, TermPtr b) { return t_bin(TermOp::Ge, std::move(a), std::move(b)); }
inline TermPtr t_gt(TermPtr a, TermPtr b) { return t_bin(TermOp::Gt, std::move(a), std::move(b)); }
inline TermPtr t_le(TermPtr a, TermPtr b) { return t_bin(TermOp::Le, std::move(a), std::move(b)); }
inline TermPtr t_lt(TermPtr a, TermPtr b) { return t_bin(TermOp::Lt, std::move(a), std::move(b)); }
inline TermPtr t_implies(TermPtr a, TermPtr b) { return t_bin(TermOp::Implies, std::move(a), std::move(b)); }

/// Left-nested conjunction/disjunction; empty lists give true/false.
TermPtr t_and(const std::vector<TermPtr>& parts);
TermPtr t_or(const std::vector<TermPtr>& parts);

/// Top-level conjuncts of a condition.
[[nodiscard]] std::vector<TermPtr> conjuncts(const TermPtr& t);

[[nodiscard]] bool equal(const Term& a, const Term& b);
[[nodiscard]] bool equal(const TermPtr& a, const TermPtr& b);

/// Light constant folding and unit laws; keeps the shape otherwise.
[[nodiscard]] TermPtr simplify(const TermPtr& t);

/// Bottom-up rewrite; `f` returns a replacement or nullopt to keep the node.
[[nodiscard]] TermPtr rewrite(const TermPtr& t, const std::function<std::optional<TermPtr>(const Term&)>& f);

/// Locations read in the post state (`Loc`) and the pre state (`Old`).
void collect_locations(const Term& t, std::set<Location>& now, std::set<Location>& old);
[[nodiscard]] std::set<std::string> free_vars(const Term& t);

/// Translate a source expression; `resolve` maps each name to a term.
[[nodiscard]] TermPtr from_expr(const Expr& e, const std::function<TermPtr(const std::string&, SourcePos)>& resolve);

struct EvalEnv {
  const Store* pre = nullptr;
  const Store* post = nullptr;
  Bindings vars;
};

/// Integer division and remainder truncate toward zero; a zero divisor throws EvalError.
[[nodiscard]] Value evaluate(const Term& t, const EvalEnv& env);
[[nodiscard]] bool holds(const Condition& c, const EvalEnv& env);

struct RenderOptions {
  /// Render `\old(L)` as `L` (preconditions talk about the current state).
  bool old_as_current = false;
  /// Drop the owner of contract-owned assets (`flour` instead of `Deposit.flour`).
  bool unqualified_contract = false;
};

/// Java/JML surface syntax.
[[nodiscard]] std::string render(const Term& t, const RenderOptions& opts = {});
[[nodiscard]] std::string render(const TermPtr& t, const RenderOptions& opts = {});

}  // namespace stipula
