#include "stipula/ast.hpp"

#include <algorithm>

namespace stipula {

std::string_view spelling(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

std::string_view spelling(UnaryOp op) { return op == UnaryOp::Not ? "!" : "-"; }

std::string_view type_name(ValueType t) {
  switch (t) {
    case ValueType::Int: return "int";
    case ValueType::Bool: return "boolean";
    case ValueType::String: return "String";
  }
  return "?";
}

ExprPtr make_int(std::int64_t v, SourcePos pos) {
  return std::make_shared<const Expr>(Expr{IntLit{v}, pos});
}
ExprPtr make_bool(bool v, SourcePos pos) {
  return std::make_shared<const Expr>(Expr{BoolLit{v}, pos});
}
ExprPtr make_string(std::string v, SourcePos pos) {
  return std::make_shared<const Expr>(Expr{StrLit{std::move(v)}, pos});
}
ExprPtr make_name(std::string name, SourcePos pos) {
  return std::make_shared<const Expr>(Expr{NameRef{std::move(name)}, pos});
}
ExprPtr make_unary(UnaryOp op, ExprPtr operand, SourcePos pos) {
  return std::make_shared<const Expr>(Expr{UnaryExpr{op, std::move(operand)}, pos});
}
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
  return std::make_shared<const Expr>(Expr{BinaryExpr{op, std::move(lhs), std::move(rhs)}, pos});
}

const std::string* as_name(const Expr& e) {
  if (const auto* n = std::get_if<NameRef>(&e.node)) return &n->name;
  return nullptr;
}

namespace {

bool contains(const std::vector<std::string>& v, const std::string& n) {
  return std::find(v.begin(), v.end(), n) != v.end();
}

}  // namespace

bool FunctionClause::is_value_param(const std::string& n) const { return contains(value_params, n); }
bool FunctionClause::is_asset_param(const std::string& n) const { return contains(asset_params, n); }

std::vector<std::string> AgreementDecl::bound_fields() const {
  std::vector<std::string> out = header_fields;
  for (const auto& b : bindings)
    for (const auto& f : b.fields)
      if (!contains(out, f)) out.push_back(f);
  return out;
}

bool ContractAst::is_asset(const std::string& n) const { return contains(assets, n); }
bool ContractAst::is_field(const std::string& n) const { return contains(fields, n); }
bool ContractAst::is_party(const std::string& n) const { return contains(parties, n); }

const FunctionClause* ContractAst::find_clause(const std::string& n) const {
  for (const auto& c : clauses)
    if (c.name == n) return &c;
  return nullptr;
}

std::vector<const EventClause*> ContractAst::events() const {
  std::vector<const EventClause*> out;
  for (const auto& c : clauses)
    for (const auto& e : c.events) out.push_back(&e);
  std::sort(out.begin(), out.end(),
            [](const EventClause* a, const EventClause* b) { return a->event_index < b->event_index; });
  return out;
}

const EventClause* ContractAst::find_event(int index) const {
  for (const auto& c : clauses)
    for (const auto& e : c.events)
      if (e.event_index == index) return &e;
  return nullptr;
}

const FunctionClause* ContractAst::event_owner(int index) const {
  for (const auto& c : clauses)
    for (const auto& e : c.events)
      if (e.event_index == index) return &c;
  return nullptr;
}

// ---------------------------------------------------------------------------

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, IntLit> || std::is_same_v<T, BoolLit> ||
                      std::is_same_v<T, StrLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, NameRef>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, UnaryExpr>) {
          return x.op == y.op && structurally_equal(*x.operand, *y.operand);
        } else {
          return x.op == y.op && structurally_equal(*x.lhs, *y.lhs) &&
                 structurally_equal(*x.rhs, *y.rhs);
        }
      },
      a.node);
}

namespace {

bool same_statement(const Statement& a, const Statement& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, FieldSend>) {
          return x.field == y.field && structurally_equal(*x.value, *y.value);
        } else if constexpr (std::is_same_v<T, PartySend>) {
          return x.party == y.party && structurally_equal(*x.value, *y.value);
        } else if constexpr (std::is_same_v<T, AssetMove>) {
          return x.from == y.from && x.to == y.to && x.shorthand == y.shorthand &&
                 structurally_equal(*x.amount, *y.amount);
        } else if constexpr (std::is_same_v<T, AssetDrain>) {
          return x.from == y.from && x.to == y.to;
        } else {
          if (!structurally_equal(*x.cond, *y.cond)) return false;
          if (!structurally_equal(x.then_branch, y.then_branch)) return false;
          if (x.else_branch.has_value() != y.else_branch.has_value()) return false;
          return !x.else_branch || structurally_equal(*x.else_branch, *y.else_branch);
        }
      },
      a.node);
}

bool same_delay(const Delay& a, const Delay& b) { return a.value == b.value; }

bool same_event(const EventClause& a, const EventClause& b) {
  return same_delay(a.delay, b.delay) && a.trigger_state == b.trigger_state &&
         a.target_state == b.target_state && a.event_index == b.event_index &&
         structurally_equal(a.body, b.body);
}

bool same_clause(const FunctionClause& a, const FunctionClause& b) {
  if (a.source_state != b.source_state || a.party != b.party || a.name != b.name ||
      a.value_params != b.value_params || a.asset_params != b.asset_params ||
      a.target_state != b.target_state || a.param_types != b.param_types)
    return false;
  if (a.guard.has_value() != b.guard.has_value()) return false;
  if (a.guard && !structurally_equal(**a.guard, **b.guard)) return false;
  if (!structurally_equal(a.body, b.body)) return false;
  if (a.events.size() != b.events.size()) return false;
  for (std::size_t i = 0; i < a.events.size(); ++i)
    if (!same_event(a.events[i], b.events[i])) return false;
  return true;
}

}  // namespace

bool structurally_equal(const Block& a, const Block& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_statement(a[i], b[i])) return false;
  return true;
}

bool structurally_equal(const ContractAst& a, const ContractAst& b) {
  if (a.name != b.name || a.assets != b.assets || a.fields != b.fields || a.parties != b.parties ||
      a.field_types != b.field_types)
    return false;
  const auto& ga = a.agreement;
  const auto& gb = b.agreement;
  if (ga.header_fields != gb.header_fields || ga.initial_state != gb.initial_state ||
      ga.bindings.size() != gb.bindings.size())
    return false;
  for (std::size_t i = 0; i < ga.bindings.size(); ++i)
    if (ga.bindings[i].parties != gb.bindings[i].parties ||
        ga.bindings[i].fields != gb.bindings[i].fields)
      return false;
  if (a.clauses.size() != b.clauses.size()) return false;
  for (std::size_t i = 0; i < a.clauses.size(); ++i)
    if (!same_clause(a.clauses[i], b.clauses[i])) return false;
  return true;
}

}  // namespace stipula
