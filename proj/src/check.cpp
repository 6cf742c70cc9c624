#include <map>
#include <set>

#include "stipula/parser.hpp"

namespace stipula {

namespace {

// Union-find over type variables; a root may carry a concrete type.
class Types {
 public:
  int fresh(std::optional<ValueType> t = std::nullopt) {
    parent_.push_back(static_cast<int>(parent_.size()));
    bound_.push_back(t);
    return parent_.back();
  }

  int find(int v) {
    while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
    return v;
  }

  void unify(int a, int b, const std::string& what, SourcePos pos) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (bound_[a] && bound_[b] && *bound_[a] != *bound_[b]) {
      throw TypeError(what + ": " + std::string(type_name(*bound_[a])) + " vs " +
                          std::string(type_name(*bound_[b])),
                      pos);
    }
    if (!bound_[a]) bound_[a] = bound_[b];
    parent_[b] = a;
  }

  void require(int v, ValueType t, const std::string& what, SourcePos pos) {
    unify(v, fresh(t), what, pos);
  }

  ValueType resolve(int v) { return bound_[find(v)].value_or(ValueType::Int); }

 private:
  std::vector<int> parent_;
  std::vector<std::optional<ValueType>> bound_;
};

class Checker {
 public:
  explicit Checker(ContractAst& c) : c_(c) {}

  void run() {
    declarations();
    for (const auto& f : c_.fields) field_var_[f] = types_.fresh();
    for (auto& f : c_.clauses) clause(f);
    c_.field_types.clear();
    for (const auto& f : c_.fields) c_.field_types[f] = types_.resolve(field_var_[f]);
    for (auto& f : c_.clauses) {
      f.param_types.clear();
      for (const auto& p : f.value_params) f.param_types[p] = types_.resolve(param_var_[{f.name, p}]);
      for (const auto& p : f.asset_params) f.param_types[p] = ValueType::Int;
    }
  }

 private:
  ContractAst& c_;
  Types types_;
  std::map<std::string, int> field_var_;
  std::map<std::pair<std::string, std::string>, int> param_var_;
  const FunctionClause* clause_ = nullptr;  // null inside event bodies
  const FunctionClause* owner_ = nullptr;

  void declarations() {
    std::map<std::string, std::string> seen;
    auto declare = [&](const std::vector<std::string>& names, const char* what) {
      for (const auto& n : names) {
        auto [it, fresh] = seen.emplace(n, what);
        if (!fresh) throw NameError("duplicate declaration of '" + n + "' (" + it->second + " and " + what + ")", c_.pos);
      }
    };
    declare(c_.assets, "asset");
    declare(c_.fields, "field");
    declare(c_.parties, "party");

    const auto& ag = c_.agreement;
    for (const auto& f : ag.header_fields)
      if (!c_.is_field(f)) throw NameError("agreement names undeclared field '" + f + "'", ag.pos);
    std::set<std::string> bound;
    for (const auto& b : ag.bindings) {
      for (const auto& p : b.parties)
        if (!c_.is_party(p)) throw NameError("agreement binding names unknown party '" + p + "'", b.pos);
      for (const auto& f : b.fields) {
        if (!c_.is_field(f)) throw NameError("agreement binding names undeclared field '" + f + "'", b.pos);
        if (!bound.insert(f).second)
          throw NameError("field '" + f + "' is bound by more than one agreement binding", b.pos);
      }
    }

    std::set<std::string> clause_names;
    for (const auto& f : c_.clauses) {
      if (!clause_names.insert(f.name).second) throw NameError("duplicate clause '" + f.name + "'", f.pos);
      if (seen.count(f.name)) throw NameError("clause '" + f.name + "' clashes with a declaration", f.pos);
    }
    for (const auto& f : c_.clauses) {
      if (!c_.is_party(f.party)) throw NameError("clause '" + f.name + "' names unknown party '" + f.party + "'", f.pos);
      std::set<std::string> params;
      for (const auto* list : {&f.value_params, &f.asset_params}) {
        for (const auto& p : *list) {
          if (!params.insert(p).second) throw NameError("parameter '" + p + "' declared twice in '" + f.name + "'", f.pos);
          if (seen.count(p) || clause_names.count(p))
            throw NameError("parameter '" + p + "' of '" + f.name + "' shadows a declared name", f.pos);
        }
      }
    }
  }

  void clause(const FunctionClause& f) {
    for (const auto& p : f.value_params) param_var_[{f.name, p}] = types_.fresh();
    clause_ = &f;
    owner_ = &f;
    if (f.guard) types_.require(expr(**f.guard, false), ValueType::Bool, "guard must be boolean", (*f.guard)->pos);
    block(f.body);
    clause_ = nullptr;
    for (const auto& e : f.events) {
      if (const auto* field = std::get_if<std::string>(&e.delay.value)) {
        if (!c_.is_field(*field)) throw NameError("event delay '" + *field + "' is not a field", e.pos);
        types_.require(field_var_[*field], ValueType::Int, "event delay must be an integer", e.pos);
      }
      block(e.body);
    }
    owner_ = nullptr;
  }

  bool is_value_param(const std::string& n) const { return clause_ && clause_->is_value_param(n); }
  bool is_asset_param(const std::string& n) const { return clause_ && clause_->is_asset_param(n); }

  [[noreturn]] void unresolved(const std::string& n, SourcePos pos) const {
    if (!clause_ && owner_ && owner_->is_param(n))
      throw NameError("event body cannot use parameter '" + n + "' of '" + owner_->name + "'", pos);
    throw NameError("undeclared identifier '" + n + "'", pos);
  }

  void block(const Block& b) {
    for (const auto& s : b) statement(s);
  }

  void asset_source(const std::string& from, SourcePos pos) {
    if (c_.is_asset(from) || is_asset_param(from)) return;
    if (c_.is_field(from) || is_value_param(from) || c_.is_party(from))
      throw TypeError("'" + from + "' is not an asset", pos);
    unresolved(from, pos);
  }

  void asset_target(const std::string& to, SourcePos pos) {
    if (c_.is_asset(to) || c_.is_party(to)) return;
    if (c_.is_field(to) || is_value_param(to) || is_asset_param(to))
      throw TypeError("'" + to + "' cannot receive assets", pos);
    unresolved(to, pos);
  }

  void statement(const Statement& s) {
    std::visit(
        [&](const auto& st) {
          using T = std::decay_t<decltype(st)>;
          if constexpr (std::is_same_v<T, FieldSend>) {
            if (!c_.is_field(st.field)) {
              if (c_.is_asset(st.field) || (clause_ && clause_->is_param(st.field)))
                throw TypeError("'" + st.field + "' is not a field", s.pos);
              unresolved(st.field, s.pos);
            }
            types_.unify(expr(*st.value, false), field_var_[st.field], "type mismatch assigning '" + st.field + "'",
                         s.pos);
          } else if constexpr (std::is_same_v<T, PartySend>) {
            if (!c_.is_party(st.party)) unresolved(st.party, s.pos);
            (void)expr(*st.value, true);
          } else if constexpr (std::is_same_v<T, AssetMove>) {
            asset_source(st.from, s.pos);
            asset_target(st.to, s.pos);
            types_.require(expr(*st.amount, false), ValueType::Int, "moved amount must be an integer", s.pos);
          } else if constexpr (std::is_same_v<T, AssetDrain>) {
            asset_source(st.from, s.pos);
            asset_target(st.to, s.pos);
          } else {
            types_.require(expr(*st.cond, false), ValueType::Bool, "condition must be boolean", st.cond->pos);
            block(st.then_branch);
            if (st.else_branch) block(*st.else_branch);
          }
        },
        s.node);
  }

  int expr(const Expr& e, bool string_ok) {
    return std::visit(
        [&](const auto& n) -> int {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, IntLit>) {
            return types_.fresh(ValueType::Int);
          } else if constexpr (std::is_same_v<T, BoolLit>) {
            return types_.fresh(ValueType::Bool);
          } else if constexpr (std::is_same_v<T, StrLit>) {
            if (!string_ok) throw TypeError("string literal only allowed in sends and equality tests", e.pos);
            return types_.fresh(ValueType::String);
          } else if constexpr (std::is_same_v<T, NameRef>) {
            if (c_.is_field(n.name)) return field_var_[n.name];
            if (c_.is_asset(n.name) || is_asset_param(n.name)) return types_.fresh(ValueType::Int);
            if (is_value_param(n.name)) return param_var_[{clause_->name, n.name}];
            if (c_.is_party(n.name)) throw NameError("party '" + n.name + "' used as a value", e.pos);
            unresolved(n.name, e.pos);
          } else if constexpr (std::is_same_v<T, UnaryExpr>) {
            int v = expr(*n.operand, false);
            if (n.op == UnaryOp::Not) {
              types_.require(v, ValueType::Bool, "'!' needs a boolean", e.pos);
              return types_.fresh(ValueType::Bool);
            }
            types_.require(v, ValueType::Int, "unary '-' needs an integer", e.pos);
            return types_.fresh(ValueType::Int);
          } else {
            switch (n.op) {
              case BinaryOp::Add: case BinaryOp::Sub: case BinaryOp::Mul: case BinaryOp::Div: {
                types_.require(expr(*n.lhs, false), ValueType::Int, "arithmetic needs integers", e.pos);
                types_.require(expr(*n.rhs, false), ValueType::Int, "arithmetic needs integers", e.pos);
                return types_.fresh(ValueType::Int);
              }
              case BinaryOp::Lt: case BinaryOp::Le: case BinaryOp::Gt: case BinaryOp::Ge: {
                types_.require(expr(*n.lhs, false), ValueType::Int, "comparison needs integers", e.pos);
                types_.require(expr(*n.rhs, false), ValueType::Int, "comparison needs integers", e.pos);
                return types_.fresh(ValueType::Bool);
              }
              case BinaryOp::Eq: case BinaryOp::Ne: {
                int l = expr(*n.lhs, true);
                int r = expr(*n.rhs, true);
                types_.unify(l, r, "equality operands differ", e.pos);
                return types_.fresh(ValueType::Bool);
              }
              case BinaryOp::And: case BinaryOp::Or: {
                types_.require(expr(*n.lhs, false), ValueType::Bool, "logical operator needs booleans", e.pos);
                types_.require(expr(*n.rhs, false), ValueType::Bool, "logical operator needs booleans", e.pos);
                return types_.fresh(ValueType::Bool);
              }
            }
            return types_.fresh();
          }
        },
        e.node);
  }
};

}  // namespace

void check_contract(ContractAst& ast) { Checker(ast).run(); }

}  // namespace stipula
