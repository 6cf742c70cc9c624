#include "symexec.hpp"

#include <algorithm>
#include <set>

namespace stipula::detail {

void Obligations::add(std::vector<Condition>& group, const TermPtr& path, const Condition& c) {
  TermPtr cond = simplify(c);
  if (cond->kind == Term::Kind::Bool && cond->bool_value) return;
  TermPtr p = simplify(path);
  if (!(p->kind == Term::Kind::Bool && p->bool_value)) cond = t_implies(p, cond);
  group.push_back(cond);
}

std::vector<Condition> Obligations::ordered() const {
  std::vector<Condition> out;
  for (const auto* g : {&availability, &division, &guard, &body}) {
    for (const auto& c : *g) {
      for (const auto& part : conjuncts(c)) {
        bool dup = std::any_of(out.begin(), out.end(), [&](const Condition& o) { return equal(o, part); });
        if (!dup) out.push_back(part);
      }
    }
  }
  return out;
}

TermPtr SymState::get(const Location& l) const {
  auto it = vals.find(l);
  return it == vals.end() ? t_old(l) : it->second;
}

void SymState::set(const Location& l, TermPtr v) {
  vals[l] = simplify(v);
  if (std::find(writes.begin(), writes.end(), l) == writes.end()) writes.push_back(l);
}

Location SymExec::slot(const std::string& owner, const std::string& asset) const {
  if (owner == ast_.name && !ast_.is_party(owner)) return Location::contract(ast_.name, asset);
  return Location::party(owner, asset);
}

namespace {

void collect_divisors(const Term& t, std::vector<TermPtr>& out) {
  for (const auto& k : t.kids) collect_divisors(*k, out);
  if (t.kind == Term::Kind::Binary && (t.op == TermOp::Div || t.op == TermOp::Mod)) out.push_back(t.kids[1]);
}

TermPtr conj(const TermPtr& a, const TermPtr& b) { return simplify(t_and({a, b})); }

}  // namespace

TermPtr SymExec::expr(const SymState& st, const Frame& fr, const Expr& e, const TermPtr& path,
                      Obligations& ob) const {
  TermPtr t = from_expr(e, [&](const std::string& n, SourcePos pos) -> TermPtr {
    if (ast_.is_field(n)) return st.get(Location::field(n));
    if (ast_.is_asset(n)) {
      TermPtr v = st.get(Location::contract(ast_.name, n));
      return assets_.is_divisible(n) ? v : t_ite(v, t_int(1), t_int(0));
    }
    auto it = fr.params.find(n);
    if (it != fr.params.end()) return it->second;
    throw UnsupportedError("cannot resolve '" + n + "'", pos);
  });
  std::vector<TermPtr> divisors;
  collect_divisors(*t, divisors);
  for (const auto& d : divisors) Obligations::add(ob.division, path, t_gt(d, t_int(0)));
  return t;
}

void SymExec::call(SymState& st, const FunctionClause& f, const std::map<std::string, TermPtr>& args,
                   const TermPtr& path, Obligations& ob) const {
  Frame fr;
  fr.clause = &f;
  for (const auto& p : f.value_params) fr.params[p] = args.at(p);
  for (const auto& p : f.asset_params) fr.params[p] = args.at(p);

  for (const auto& k : f.asset_params) {
    TermPtr v = fr.params[k];
    auto asset = assets_.asset_of(f.name, k);
    if (!asset) {
      Obligations::add(ob.availability, path, t_ge(v, t_int(0)));
    } else if (assets_.is_divisible(*asset)) {
      Obligations::add(ob.availability, path, t_ge(v, t_int(0)));
      Obligations::add(ob.availability, path, t_ge(st.get(slot(f.party, *asset)), v));
    } else {
      Obligations::add(ob.availability, path, t_eq(v, t_int(1)));
      Obligations::add(ob.availability, path, st.get(slot(f.party, *asset)));
    }
  }
  if (f.guard) Obligations::add(ob.guard, path, expr(st, fr, **f.guard, path, ob));
  block(st, fr, f.body, path, ob);
}

void SymExec::fire(SymState& st, const EventClause& e, const TermPtr& path, Obligations& ob) const {
  Frame fr;
  block(st, fr, e.body, path, ob);
}

void SymExec::block(SymState& st, Frame& fr, const Block& b, const TermPtr& path, Obligations& ob) const {
  for (const auto& s : b) statement(st, fr, s, path, ob);
}

void SymExec::statement(SymState& st, Frame& fr, const Statement& s, const TermPtr& path, Obligations& ob) const {
  if (const auto* fs = std::get_if<FieldSend>(&s.node)) {
    st.set(Location::field(fs->field), expr(st, fr, *fs->value, path, ob));
  } else if (const auto* ps = std::get_if<PartySend>(&s.node)) {
    (void)expr(st, fr, *ps->value, path, ob);
  } else if (const auto* mv = std::get_if<AssetMove>(&s.node)) {
    transfer(st, fr, mv->from, mv->to, mv->amount.get(), path, ob, s.pos);
  } else if (const auto* dr = std::get_if<AssetDrain>(&s.node)) {
    transfer(st, fr, dr->from, dr->to, nullptr, path, ob, s.pos);
  } else {
    const auto& c = std::get<Conditional>(s.node);
    TermPtr cond = expr(st, fr, *c.cond, path, ob);
    SymState a = st, b = st;
    Frame fa = fr, fb = fr;
    block(a, fa, c.then_branch, conj(path, cond), ob);
    if (c.else_branch) block(b, fb, *c.else_branch, conj(path, t_not(cond)), ob);

    std::set<Location> keys;
    for (const auto& [l, _] : a.vals) keys.insert(l);
    for (const auto& [l, _] : b.vals) keys.insert(l);
    std::vector<Location> order = st.writes;
    for (const auto* side : {&a.writes, &b.writes})
      for (const auto& l : *side)
        if (std::find(order.begin(), order.end(), l) == order.end()) order.push_back(l);
    for (const auto& l : keys) {
      TermPtr va = a.get(l), vb = b.get(l);
      st.vals[l] = equal(va, vb) ? va : simplify(t_ite(cond, va, vb));
    }
    st.writes = order;
    for (auto& [name, v] : fr.params) {
      TermPtr va = fa.params[name], vb = fb.params[name];
      v = equal(va, vb) ? va : simplify(t_ite(cond, va, vb));
    }
  }
}

void SymExec::transfer(SymState& st, Frame& fr, const std::string& from, const std::string& to, const Expr* amount,
                       const TermPtr& path, Obligations& ob, SourcePos pos) const {
  bool from_param = !ast_.is_asset(from);
  std::optional<std::string> asset;
  if (!from_param) asset = from;
  else if (fr.clause) asset = assets_.asset_of(fr.clause->name, from);
  if (!from_param && ast_.is_asset(to) && to != from)
    throw ConflictError("transfer between distinct assets '" + from + "' and '" + to + "'", pos);

  // Source amount: the parameter's current value or the source slot.
  std::optional<Location> src;
  if (!from_param) src = Location::contract(ast_.name, from);
  else if (asset) src = slot(fr.clause->party, *asset);

  if (!asset) {
    // External payment: only the parameter's remaining value changes.
    TermPtr have = fr.params.at(from);
    TermPtr e = amount ? expr(st, fr, *amount, path, ob) : have;
    if (amount) {
      Obligations::add(ob.body, path, t_ge(e, t_int(0)));
      Obligations::add(ob.body, path, t_ge(have, e));
    }
    fr.params[from] = simplify(amount ? t_sub(have, e) : t_int(0));
    return;
  }

  Location dst = ast_.is_asset(to) ? Location::contract(ast_.name, to) : slot(to, *asset);
  if (assets_.is_divisible(*asset)) {
    TermPtr have = from_param ? fr.params.at(from) : st.get(*src);
    TermPtr e = amount ? expr(st, fr, *amount, path, ob) : have;
    if (amount) {
      Obligations::add(ob.body, path, t_ge(e, t_int(0)));
      Obligations::add(ob.body, path, t_ge(have, e));
    }
    // Two parameters of one asset may jointly exceed the caller's holding.
    if (from_param) Obligations::add(ob.body, path, t_ge(st.get(*src), e));
    e = simplify(e);
    st.set(dst, t_add(st.get(dst), e));
    st.set(*src, t_sub(st.get(*src), e));
    if (from_param) fr.params[from] = simplify(amount ? t_sub(have, e) : t_int(0));
  } else {
    if (amount) (void)expr(st, fr, *amount, path, ob);
    Obligations::add(ob.body, path, st.get(*src));
    if (dst.kind == Location::Kind::Contract && dst != *src) Obligations::add(ob.body, path, t_not(st.get(dst)));
    st.set(dst, t_bool(true));
    if (dst != *src) st.set(*src, t_bool(false));
    if (from_param) fr.params[from] = t_int(0);
  }
}

std::vector<Condition> effects(const SymState& st, const AssetAnalysis& assets) {
  std::vector<Condition> out;
  std::set<std::string> touched;
  for (const auto& l : st.writes) {
    TermPtr v = simplify(st.get(l));
    if (l.is_asset()) touched.insert(l.name);
    if (l.is_asset() && !assets.is_divisible(l.name) && v->kind == Term::Kind::Bool) {
      out.push_back(v->bool_value ? t_loc(l) : t_not(t_loc(l)));
    } else {
      out.push_back(t_eq(t_loc(l), v));
    }
  }
  for (const auto& m : assets.models) {
    if (m.kind != AssetKind::Divisible || !touched.count(m.asset)) continue;
    for (const auto& o : m.owners)
      if (std::find(st.writes.begin(), st.writes.end(), o) == st.writes.end()) out.push_back(t_eq(t_loc(o), t_old(o)));
  }
  return out;
}

}  // namespace stipula::detail
