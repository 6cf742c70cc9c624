#include "stipula/term.hpp"

#include <sstream>

namespace stipula {

std::string Location::str() const { return kind == Kind::Field ? name : owner + "." + name; }

std::string value_str(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return "\"" + std::get<std::string>(v) + "\"";
}

namespace {

TermPtr node(Term t) { return std::make_shared<const Term>(std::move(t)); }

}  // namespace

TermPtr t_int(std::int64_t v) {
  Term t;
  t.kind = Term::Kind::Int;
  t.int_value = v;
  return node(std::move(t));
}

TermPtr t_bool(bool v) {
  Term t;
  t.kind = Term::Kind::Bool;
  t.bool_value = v;
  return node(std::move(t));
}

TermPtr t_str(std::string s) {
  Term t;
  t.kind = Term::Kind::Str;
  t.text = std::move(s);
  return node(std::move(t));
}

TermPtr t_loc(Location l) {
  Term t;
  t.kind = Term::Kind::Loc;
  t.loc = std::move(l);
  return node(std::move(t));
}

TermPtr t_old(Location l) {
  Term t;
  t.kind = Term::Kind::Old;
  t.loc = std::move(l);
  return node(std::move(t));
}

TermPtr t_var(std::string name) {
  Term t;
  t.kind = Term::Kind::Var;
  t.text = std::move(name);
  return node(std::move(t));
}

TermPtr t_not(TermPtr a) {
  Term t;
  t.kind = Term::Kind::Not;
  t.kids = {std::move(a)};
  return node(std::move(t));
}

TermPtr t_neg(TermPtr a) {
  Term t;
  t.kind = Term::Kind::Neg;
  t.kids = {std::move(a)};
  return node(std::move(t));
}

TermPtr t_bin(TermOp op, TermPtr a, TermPtr b) {
  Term t;
  t.kind = Term::Kind::Binary;
  t.op = op;
  t.kids = {std::move(a), std::move(b)};
  return node(std::move(t));
}

TermPtr t_ite(TermPtr c, TermPtr a, TermPtr b) {
  Term t;
  t.kind = Term::Kind::Ite;
  t.kids = {std::move(c), std::move(a), std::move(b)};
  return node(std::move(t));
}

TermPtr t_forall(std::string var, TermPtr lo, TermPtr hi, TermPtr body) {
  Term t;
  t.kind = Term::Kind::Forall;
  t.text = std::move(var);
  t.kids = {std::move(lo), std::move(hi), std::move(body)};
  return node(std::move(t));
}

TermPtr t_and(const std::vector<TermPtr>& parts) {
  if (parts.empty()) return t_bool(true);
  TermPtr out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = t_bin(TermOp::And, out, parts[i]);
  return out;
}

TermPtr t_or(const std::vector<TermPtr>& parts) {
  if (parts.empty()) return t_bool(false);
  TermPtr out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = t_bin(TermOp::Or, out, parts[i]);
  return out;
}

std::vector<TermPtr> conjuncts(const TermPtr& t) {
  if (t->kind == Term::Kind::Binary && t->op == TermOp::And) {
    auto out = conjuncts(t->kids[0]);
    auto rhs = conjuncts(t->kids[1]);
    out.insert(out.end(), rhs.begin(), rhs.end());
    return out;
  }
  if (t->kind == Term::Kind::Bool && t->bool_value) return {};
  return {t};
}

bool equal(const Term& a, const Term& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Term::Kind::Int: return a.int_value == b.int_value;
    case Term::Kind::Bool: return a.bool_value == b.bool_value;
    case Term::Kind::Str:
    case Term::Kind::Var: return a.text == b.text;
    case Term::Kind::Loc:
    case Term::Kind::Old: return a.loc == b.loc;
    case Term::Kind::Binary:
      if (a.op != b.op) return false;
      break;
    case Term::Kind::Forall:
      if (a.text != b.text) return false;
      break;
    default: break;
  }
  if (a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!equal(*a.kids[i], *b.kids[i])) return false;
  return true;
}

bool equal(const TermPtr& a, const TermPtr& b) { return equal(*a, *b); }

// ---------------------------------------------------------------------------

namespace {

bool is_int(const TermPtr& t, std::int64_t v) { return t->kind == Term::Kind::Int && t->int_value == v; }
bool is_bool(const TermPtr& t, bool v) { return t->kind == Term::Kind::Bool && t->bool_value == v; }

std::optional<std::int64_t> fold_int(TermOp op, std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  switch (op) {
    case TermOp::Add: if (__builtin_add_overflow(a, b, &r)) return std::nullopt; return r;
    case TermOp::Sub: if (__builtin_sub_overflow(a, b, &r)) return std::nullopt; return r;
    case TermOp::Mul: if (__builtin_mul_overflow(a, b, &r)) return std::nullopt; return r;
    case TermOp::Div: if (b == 0 || (a == INT64_MIN && b == -1)) return std::nullopt; return a / b;
    case TermOp::Mod: if (b == 0 || (a == INT64_MIN && b == -1)) return std::nullopt; return a % b;
    default: return std::nullopt;
  }
}

}  // namespace

TermPtr simplify(const TermPtr& t) {
  if (t->kids.empty()) return t;
  std::vector<TermPtr> k;
  k.reserve(t->kids.size());
  for (const auto& c : t->kids) k.push_back(simplify(c));

  switch (t->kind) {
    case Term::Kind::Not:
      if (k[0]->kind == Term::Kind::Bool) return t_bool(!k[0]->bool_value);
      if (k[0]->kind == Term::Kind::Not) return k[0]->kids[0];
      return t_not(k[0]);
    case Term::Kind::Neg:
      if (k[0]->kind == Term::Kind::Int && k[0]->int_value != INT64_MIN) return t_int(-k[0]->int_value);
      return t_neg(k[0]);
    case Term::Kind::Ite:
      if (k[0]->kind == Term::Kind::Bool) return k[0]->bool_value ? k[1] : k[2];
      if (equal(k[1], k[2])) return k[1];
      if (is_bool(k[1], true) && is_bool(k[2], false)) return k[0];
      if (is_bool(k[1], false) && is_bool(k[2], true)) return simplify(t_not(k[0]));
      return t_ite(k[0], k[1], k[2]);
    case Term::Kind::Forall: return t_forall(t->text, k[0], k[1], k[2]);
    default: break;
  }

  const TermPtr& a = k[0];
  const TermPtr& b = k[1];
  if (a->kind == Term::Kind::Int && b->kind == Term::Kind::Int) {
    if (auto r = fold_int(t->op, a->int_value, b->int_value)) return t_int(*r);
    switch (t->op) {
      case TermOp::Eq: return t_bool(a->int_value == b->int_value);
      case TermOp::Ne: return t_bool(a->int_value != b->int_value);
      case TermOp::Lt: return t_bool(a->int_value < b->int_value);
      case TermOp::Le: return t_bool(a->int_value <= b->int_value);
      case TermOp::Gt: return t_bool(a->int_value > b->int_value);
      case TermOp::Ge: return t_bool(a->int_value >= b->int_value);
      default: break;
    }
  }
  switch (t->op) {
    case TermOp::Add:
      if (is_int(a, 0)) return b;
      if (is_int(b, 0)) return a;
      break;
    case TermOp::Sub:
      if (is_int(b, 0)) return a;
      if (equal(a, b)) return t_int(0);
      break;
    case TermOp::Mul:
      if (is_int(a, 1)) return b;
      if (is_int(b, 1)) return a;
      if (is_int(a, 0) || is_int(b, 0)) return t_int(0);
      break;
    case TermOp::Div:
      if (is_int(b, 1)) return a;
      break;
    case TermOp::Eq:
      if (equal(a, b)) return t_bool(true);
      break;
    case TermOp::And:
      if (is_bool(a, true)) return b;
      if (is_bool(b, true)) return a;
      if (is_bool(a, false) || is_bool(b, false)) return t_bool(false);
      break;
    case TermOp::Or:
      if (is_bool(a, false)) return b;
      if (is_bool(b, false)) return a;
      if (is_bool(a, true) || is_bool(b, true)) return t_bool(true);
      break;
    case TermOp::Implies:
      if (is_bool(a, true)) return b;
      if (is_bool(a, false) || is_bool(b, true)) return t_bool(true);
      break;
    default: break;
  }
  return t_bin(t->op, a, b);
}

TermPtr rewrite(const TermPtr& t, const std::function<std::optional<TermPtr>(const Term&)>& f) {
  TermPtr cur = t;
  if (!t->kids.empty()) {
    Term copy = *t;
    bool changed = false;
    for (auto& c : copy.kids) {
      TermPtr n = rewrite(c, f);
      changed |= n != c;
      c = n;
    }
    if (changed) cur = std::make_shared<const Term>(std::move(copy));
  }
  if (auto r = f(*cur)) return *r;
  return cur;
}

void collect_locations(const Term& t, std::set<Location>& now, std::set<Location>& old) {
  if (t.kind == Term::Kind::Loc) now.insert(t.loc);
  if (t.kind == Term::Kind::Old) old.insert(t.loc);
  for (const auto& k : t.kids) collect_locations(*k, now, old);
}

namespace {

void free_vars_into(const Term& t, std::set<std::string>& bound, std::set<std::string>& out) {
  if (t.kind == Term::Kind::Var && !bound.count(t.text)) out.insert(t.text);
  if (t.kind == Term::Kind::Forall) {
    free_vars_into(*t.kids[0], bound, out);
    free_vars_into(*t.kids[1], bound, out);
    bool fresh = bound.insert(t.text).second;
    free_vars_into(*t.kids[2], bound, out);
    if (fresh) bound.erase(t.text);
    return;
  }
  for (const auto& k : t.kids) free_vars_into(*k, bound, out);
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> bound, out;
  free_vars_into(t, bound, out);
  return out;
}

TermPtr from_expr(const Expr& e, const std::function<TermPtr(const std::string&, SourcePos)>& resolve) {
  return std::visit(
      [&](const auto& n) -> TermPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          return t_int(n.value);
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          return t_bool(n.value);
        } else if constexpr (std::is_same_v<T, StrLit>) {
          return t_str(n.value);
        } else if constexpr (std::is_same_v<T, NameRef>) {
          return resolve(n.name, e.pos);
        } else if constexpr (std::is_same_v<T, UnaryExpr>) {
          TermPtr a = from_expr(*n.operand, resolve);
          return n.op == UnaryOp::Not ? t_not(a) : t_neg(a);
        } else {
          TermOp op = TermOp::Add;
          switch (n.op) {
            case BinaryOp::Add: op = TermOp::Add; break;
            case BinaryOp::Sub: op = TermOp::Sub; break;
            case BinaryOp::Mul: op = TermOp::Mul; break;
            case BinaryOp::Div: op = TermOp::Div; break;
            case BinaryOp::Eq: op = TermOp::Eq; break;
            case BinaryOp::Ne: op = TermOp::Ne; break;
            case BinaryOp::Lt: op = TermOp::Lt; break;
            case BinaryOp::Le: op = TermOp::Le; break;
            case BinaryOp::Gt: op = TermOp::Gt; break;
            case BinaryOp::Ge: op = TermOp::Ge; break;
            case BinaryOp::And: op = TermOp::And; break;
            case BinaryOp::Or: op = TermOp::Or; break;
          }
          return t_bin(op, from_expr(*n.lhs, resolve), from_expr(*n.rhs, resolve));
        }
      },
      e.node);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

std::int64_t as_int(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  throw EvalError("expected an integer, got " + value_str(v));
}

bool as_bool(const Value& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  throw EvalError("expected a boolean, got " + value_str(v));
}

const Value& lookup(const Store* s, const Location& l, const char* which) {
  if (!s) throw EvalError(std::string("no ") + which + " state to read " + l.str());
  auto it = s->find(l);
  if (it == s->end()) throw EvalError(std::string("unknown location ") + l.str() + " in " + which + " state");
  return it->second;
}

Value eval(const Term& t, const EvalEnv& env, Bindings& vars) {
  switch (t.kind) {
    case Term::Kind::Int: return t.int_value;
    case Term::Kind::Bool: return t.bool_value;
    case Term::Kind::Str: return t.text;
    case Term::Kind::Loc: return lookup(env.post, t.loc, "current");
    case Term::Kind::Old: return lookup(env.pre, t.loc, "pre");
    case Term::Kind::Var: {
      auto it = vars.find(t.text);
      if (it == vars.end()) throw EvalError("unbound variable " + t.text);
      return it->second;
    }
    case Term::Kind::Not: return !as_bool(eval(*t.kids[0], env, vars));
    case Term::Kind::Neg: {
      std::int64_t v = as_int(eval(*t.kids[0], env, vars));
      if (v == INT64_MIN) throw EvalError("integer overflow");
      return -v;
    }
    case Term::Kind::Ite:
      return as_bool(eval(*t.kids[0], env, vars)) ? eval(*t.kids[1], env, vars) : eval(*t.kids[2], env, vars);
    case Term::Kind::Forall: {
      std::int64_t lo = as_int(eval(*t.kids[0], env, vars));
      std::int64_t hi = as_int(eval(*t.kids[1], env, vars));
      auto saved = vars.find(t.text) != vars.end() ? std::optional<Value>(vars[t.text]) : std::nullopt;
      bool ok = true;
      for (std::int64_t k = lo; k < hi && ok; ++k) {
        vars[t.text] = k;
        ok = as_bool(eval(*t.kids[2], env, vars));
      }
      if (saved) vars[t.text] = *saved;
      else vars.erase(t.text);
      return ok;
    }
    case Term::Kind::Binary: break;
  }

  switch (t.op) {
    case TermOp::And: return as_bool(eval(*t.kids[0], env, vars)) && as_bool(eval(*t.kids[1], env, vars));
    case TermOp::Or: return as_bool(eval(*t.kids[0], env, vars)) || as_bool(eval(*t.kids[1], env, vars));
    case TermOp::Implies: return !as_bool(eval(*t.kids[0], env, vars)) || as_bool(eval(*t.kids[1], env, vars));
    default: break;
  }
  Value a = eval(*t.kids[0], env, vars);
  Value b = eval(*t.kids[1], env, vars);
  switch (t.op) {
    case TermOp::Eq:
    case TermOp::Ne: {
      if (a.index() != b.index()) throw EvalError("comparing " + value_str(a) + " with " + value_str(b));
      return (a == b) == (t.op == TermOp::Eq);
    }
    case TermOp::Lt: return as_int(a) < as_int(b);
    case TermOp::Le: return as_int(a) <= as_int(b);
    case TermOp::Gt: return as_int(a) > as_int(b);
    case TermOp::Ge: return as_int(a) >= as_int(b);
    default: break;
  }
  std::int64_t x = as_int(a);
  std::int64_t y = as_int(b);
  if ((t.op == TermOp::Div || t.op == TermOp::Mod) && y == 0) throw EvalError("division by zero");
  if (auto r = fold_int(t.op, x, y)) return *r;
  throw EvalError("integer overflow");
}

}  // namespace

Value evaluate(const Term& t, const EvalEnv& env) {
  Bindings vars = env.vars;
  return eval(t, env, vars);
}

bool holds(const Condition& c, const EvalEnv& env) { return as_bool(evaluate(*c, env)); }

// ---------------------------------------------------------------------------
// Rendering

namespace {

constexpr int kUnary = 7;
constexpr int kAtom = 8;

int level(TermOp op) {
  switch (op) {
    case TermOp::Implies: return 0;
    case TermOp::Or: return 1;
    case TermOp::And: return 2;
    case TermOp::Eq: case TermOp::Ne: return 3;
    case TermOp::Lt: case TermOp::Le: case TermOp::Gt: case TermOp::Ge: return 4;
    case TermOp::Add: case TermOp::Sub: return 5;
    case TermOp::Mul: case TermOp::Div: case TermOp::Mod: return 6;
  }
  return 0;
}

int level(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Binary: return level(t.op);
    case Term::Kind::Not:
    case Term::Kind::Neg: return kUnary;
    case Term::Kind::Int: return t.int_value < 0 ? kUnary : kAtom;
    default: return kAtom;
  }
}

std::string_view spelling(TermOp op) {
  switch (op) {
    case TermOp::Add: return "+";
    case TermOp::Sub: return "-";
    case TermOp::Mul: return "*";
    case TermOp::Div: return "/";
    case TermOp::Mod: return "%";
    case TermOp::Eq: return "==";
    case TermOp::Ne: return "!=";
    case TermOp::Lt: return "<";
    case TermOp::Le: return "<=";
    case TermOp::Gt: return ">";
    case TermOp::Ge: return ">=";
    case TermOp::And: return "&&";
    case TermOp::Or: return "||";
    case TermOp::Implies: return "==>";
  }
  return "?";
}

class Renderer {
 public:
  explicit Renderer(const RenderOptions& o) : o_(o) {}

  void term(std::ostream& os, const Term& t) {
    switch (t.kind) {
      case Term::Kind::Int: os << t.int_value; return;
      case Term::Kind::Bool: os << (t.bool_value ? "true" : "false"); return;
      case Term::Kind::Str: os << '"' << t.text << '"'; return;
      case Term::Kind::Var: os << t.text; return;
      case Term::Kind::Loc: os << loc(t.loc); return;
      case Term::Kind::Old:
        if (o_.old_as_current) os << loc(t.loc);
        else os << "\\old(" << loc(t.loc) << ')';
        return;
      case Term::Kind::Not:
      case Term::Kind::Neg:
        os << (t.kind == Term::Kind::Not ? '!' : '-');
        child(os, *t.kids[0], level(*t.kids[0]) < kUnary || (t.kind == Term::Kind::Neg && level(*t.kids[0]) == kUnary));
        return;
      case Term::Kind::Ite:
        os << '(';
        term(os, *t.kids[0]);
        os << " ? ";
        term(os, *t.kids[1]);
        os << " : ";
        term(os, *t.kids[2]);
        os << ')';
        return;
      case Term::Kind::Forall:
        os << "(\\forall int " << t.text << "; ";
        term(os, *t.kids[0]);
        os << " <= " << t.text << " && " << t.text << " < ";
        child(os, *t.kids[1], level(*t.kids[1]) <= 4);
        os << "; ";
        term(os, *t.kids[2]);
        os << ')';
        return;
      case Term::Kind::Binary: break;
    }
    int lv = level(t.op);
    // `==>` associates to the right, everything else to the left.
    bool right_assoc = t.op == TermOp::Implies;
    child(os, *t.kids[0], right_assoc ? level(*t.kids[0]) <= lv : level(*t.kids[0]) < lv);
    if (t.op == TermOp::Div) os << '/';
    else os << ' ' << spelling(t.op) << ' ';
    child(os, *t.kids[1], right_assoc ? level(*t.kids[1]) < lv : level(*t.kids[1]) <= lv);
  }

 private:
  const RenderOptions& o_;

  std::string loc(const Location& l) const {
    if (l.kind == Location::Kind::Contract && o_.unqualified_contract) return l.name;
    return l.str();
  }

  void child(std::ostream& os, const Term& t, bool parens) {
    if (parens) os << '(';
    term(os, t);
    if (parens) os << ')';
  }
};

}  // namespace

std::string render(const Term& t, const RenderOptions& opts) {
  std::ostringstream os;
  Renderer(opts).term(os, t);
  return os.str();
}

std::string render(const TermPtr& t, const RenderOptions& opts) { return render(*t, opts); }

}  // namespace stipula
