#include "stipula/codegen.hpp"

#include <algorithm>
#include <set>

namespace stipula {

TargetStmt TargetStmt::assign(Location l, TermPtr v) {
  TargetStmt s;
  s.kind = Kind::Assign;
  s.target = std::move(l);
  s.value = std::move(v);
  return s;
}

TargetStmt TargetStmt::assign_local(std::string n, TermPtr v) {
  TargetStmt s;
  s.kind = Kind::Assign;
  s.name = std::move(n);
  s.value = std::move(v);
  return s;
}

TargetStmt TargetStmt::local(std::string n, TermPtr v) {
  TargetStmt s = assign_local(std::move(n), std::move(v));
  s.kind = Kind::Local;
  return s;
}

TargetStmt TargetStmt::increment(std::string n) {
  TargetStmt s;
  s.kind = Kind::Increment;
  s.name = std::move(n);
  return s;
}

TargetStmt TargetStmt::call(std::string callee, std::vector<std::string> args) {
  TargetStmt s;
  s.kind = Kind::Call;
  s.name = std::move(callee);
  s.args = std::move(args);
  return s;
}

TargetStmt TargetStmt::if_(TermPtr c, std::vector<TargetStmt> then_b, std::vector<TargetStmt> else_b) {
  TargetStmt s;
  s.kind = Kind::If;
  s.value = std::move(c);
  s.body = std::move(then_b);
  s.else_body = std::move(else_b);
  return s;
}

TargetStmt TargetStmt::return_() {
  TargetStmt s;
  s.kind = Kind::Return;
  return s;
}

TargetStmt TargetStmt::comment(std::string text) {
  TargetStmt s;
  s.kind = Kind::Comment;
  s.name = std::move(text);
  return s;
}

const TargetMethod* TargetUnit::find(const std::string& name) const {
  for (const auto& m : methods)
    if (m.name == name) return &m;
  return nullptr;
}

namespace {

std::string java_type(ValueType t) { return std::string(type_name(t)); }

void names_in(const Expr& e, std::set<std::string>& out) {
  if (const auto* n = std::get_if<NameRef>(&e.node)) out.insert(n->name);
  else if (const auto* u = std::get_if<UnaryExpr>(&e.node)) names_in(*u->operand, out);
  else if (const auto* b = std::get_if<BinaryExpr>(&e.node)) {
    names_in(*b->lhs, out);
    names_in(*b->rhs, out);
  }
}

void names_in(const Block& b, std::set<std::string>& out) {
  for (const auto& s : b) {
    if (const auto* fs = std::get_if<FieldSend>(&s.node)) names_in(*fs->value, out);
    else if (const auto* ps = std::get_if<PartySend>(&s.node)) names_in(*ps->value, out);
    else if (const auto* mv = std::get_if<AssetMove>(&s.node)) {
      names_in(*mv->amount, out);
      out.insert(mv->from);
    } else if (const auto* dr = std::get_if<AssetDrain>(&s.node)) {
      out.insert(dr->from);
    } else if (const auto* c = std::get_if<Conditional>(&s.node)) {
      names_in(*c->cond, out);
      names_in(c->then_branch, out);
      if (c->else_branch) names_in(*c->else_branch, out);
    }
  }
}

/// Direct lowering of canonical statements over the target's statics.
class BodyLowering {
 public:
  BodyLowering(const ContractAst& ast, const AssetAnalysis& assets, const FunctionClause* clause)
      : ast_(ast), assets_(assets), clause_(clause) {}

  std::vector<TargetStmt> block(const Block& b, const std::set<std::string>& used_after) const {
    std::vector<TargetStmt> out;
    for (std::size_t i = 0; i < b.size(); ++i) {
      std::set<std::string> after = used_after;
      names_in(Block(b.begin() + static_cast<std::ptrdiff_t>(i) + 1, b.end()), after);
      statement(b[i], after, out);
    }
    return out;
  }

 private:
  const ContractAst& ast_;
  const AssetAnalysis& assets_;
  const FunctionClause* clause_;

  TermPtr expr(const Expr& e) const {
    return from_expr(e, [&](const std::string& n, SourcePos pos) -> TermPtr {
      if (ast_.is_field(n)) return t_loc(Location::field(n));
      if (ast_.is_asset(n)) {
        TermPtr v = t_loc(Location::contract(ast_.name, n));
        return assets_.is_divisible(n) ? v : t_ite(v, t_int(1), t_int(0));
      }
      if (clause_ && clause_->is_param(n)) return t_var(n);
      throw UnsupportedError("cannot resolve '" + n + "'", pos);
    });
  }

  void statement(const Statement& s, const std::set<std::string>& after, std::vector<TargetStmt>& out) const {
    if (const auto* fs = std::get_if<FieldSend>(&s.node)) {
      out.push_back(TargetStmt::assign(Location::field(fs->field), expr(*fs->value)));
    } else if (const auto* ps = std::get_if<PartySend>(&s.node)) {
      out.push_back(TargetStmt::comment(render(expr(*ps->value)) + " -> " + ps->party));
    } else if (const auto* mv = std::get_if<AssetMove>(&s.node)) {
      transfer(mv->from, mv->to, mv->amount.get(), after, out);
    } else if (const auto* dr = std::get_if<AssetDrain>(&s.node)) {
      transfer(dr->from, dr->to, nullptr, after, out);
    } else {
      const auto& c = std::get<Conditional>(s.node);
      std::vector<TargetStmt> else_b;
      if (c.else_branch) else_b = block(*c.else_branch, after);
      out.push_back(TargetStmt::if_(expr(*c.cond), block(c.then_branch, after), std::move(else_b)));
    }
  }

  void transfer(const std::string& from, const std::string& to, const Expr* amount,
                const std::set<std::string>& after, std::vector<TargetStmt>& out) const {
    bool from_param = !ast_.is_asset(from);
    std::optional<std::string> asset;
    if (!from_param) asset = from;
    else if (clause_) asset = assets_.asset_of(clause_->name, from);
    bool param_read_later = from_param && after.count(from);

    if (!asset) {
      TermPtr e = amount ? expr(*amount) : t_var(from);
      out.push_back(TargetStmt::comment("payment of " + render(e) + " from " + clause_->party + " to " + to));
      if (param_read_later)
        out.push_back(TargetStmt::assign_local(from, amount ? t_sub(t_var(from), e) : t_int(0)));
      return;
    }
    Location src = from_param ? Location::party(clause_->party, *asset) : Location::contract(ast_.name, from);
    Location dst = ast_.is_asset(to) ? Location::contract(ast_.name, to) : Location::party(to, *asset);
    if (assets_.is_divisible(*asset)) {
      TermPtr e = amount ? expr(*amount) : (from_param ? t_var(from) : t_loc(src));
      if (!amount && !from_param) {
        // Drain of a contract asset: hand everything over, then zero the source.
        out.push_back(TargetStmt::assign(dst, t_add(t_loc(dst), t_loc(src))));
        out.push_back(TargetStmt::assign(src, t_int(0)));
        return;
      }
      out.push_back(TargetStmt::assign(dst, t_add(t_loc(dst), e)));
      out.push_back(TargetStmt::assign(src, t_sub(t_loc(src), e)));
      if (param_read_later)
        out.push_back(TargetStmt::assign_local(from, amount ? t_sub(t_var(from), e) : t_int(0)));
    } else {
      out.push_back(TargetStmt::assign(dst, t_bool(true)));
      if (dst != src) out.push_back(TargetStmt::assign(src, t_bool(false)));
      if (param_read_later) out.push_back(TargetStmt::assign_local(from, t_int(0)));
    }
  }
};

std::vector<Condition> unchanged(const ContractAst& ast, const AssetAnalysis& assets) {
  std::vector<Condition> out;
  for (const auto& l : all_locations(ast, assets)) out.push_back(t_eq(t_loc(l), t_old(l)));
  return out;
}

TargetMethod from_spec(const ClauseSpec& spec, TargetMethod::Kind kind) {
  TargetMethod m;
  m.kind = kind;
  m.name = spec.method;
  m.params = spec.params;
  m.requires_ = spec.requires_;
  m.ensures = spec.ensures;
  m.frame = spec.frame;
  return m;
}

std::vector<std::string> symbols_of(const CallStep& c) {
  std::vector<std::string> out;
  for (const auto& [_, sym] : c.args) out.push_back(sym);
  return out;
}

}  // namespace

TargetUnit lower(const ContractAst& ast, const AssetAnalysis& assets, const std::vector<ScenarioPlan>& plans,
                 const LowerOptions& opts) {
  TargetUnit u;
  u.class_name = ast.name;
  u.bigint_math = opts.bigint_math;

  std::set<std::string> bound;
  for (const auto& f : ast.agreement.bound_fields()) bound.insert(f);
  for (const auto& f : ast.fields) {
    auto it = ast.field_types.find(f);
    ValueType t = it == ast.field_types.end() ? ValueType::Int : it->second;
    std::string init;
    if (!bound.count(f)) init = t == ValueType::Int ? "0" : t == ValueType::Bool ? "false" : "\"\"";
    u.statics.push_back({ast.name, f, java_type(t), init, false});
  }
  for (const auto& m : assets.models)
    u.statics.push_back({ast.name, m.asset, m.kind == AssetKind::Divisible ? "int" : "boolean", "", false});
  for (const auto& m : assets.models)
    if (m.kind == AssetKind::Divisible) u.statics.push_back({ast.name, m.kappa, "int", "", true});
  for (const auto& m : assets.models)
    u.invariants.push_back(m.kind == AssetKind::Divisible ? conservation_invariant(m) : exclusivity_invariant(m));

  for (const auto& p : ast.parties) {
    PartyClass pc{p, {}};
    for (const auto& m : assets.models)
      pc.statics.push_back({p, m.asset, m.kind == AssetKind::Divisible ? "int" : "boolean", "", false});
    u.parties.push_back(std::move(pc));
  }

  auto finish_plain = [&](TargetMethod& m) {
    if (m.frame.empty() && m.ensures.empty()) m.ensures = unchanged(ast, assets);
  };
  for (const auto& f : ast.clauses) {
    TargetMethod m = from_spec(derive_clause_spec(ast, f, assets), TargetMethod::Kind::Clause);
    m.body = BodyLowering(ast, assets, &f).block(f.body, {});
    finish_plain(m);
    u.methods.push_back(std::move(m));
  }
  for (const auto* e : ast.events()) {
    TargetMethod m = from_spec(derive_clause_spec(ast, *e, assets), TargetMethod::Kind::Event);
    m.body = BodyLowering(ast, assets, nullptr).block(e->body, {});
    finish_plain(m);
    u.methods.push_back(std::move(m));
  }

  for (const auto& p : plans) {
    if (!p.loop) continue;
    const LoopSegment& seg = *p.loop;
    TargetMethod m = from_spec(derive_loop_spec(ast, assets, p), TargetMethod::Kind::LoopHelper);
    LoopAnnotation ann = synthesize_loop_invariant(seg, assets);
    TargetStmt loop;
    loop.kind = TargetStmt::Kind::Loop;
    loop.value = t_lt(t_var(seg.index), t_var(seg.counter));
    loop.invariants = ann.invariants;
    loop.variant = ann.variant;
    RenderOptions ro;
    ro.unqualified_contract = true;
    for (const auto& l : seg.frame) loop.loop_frame.push_back(render(t_loc(l), ro));
    loop.loop_frame.push_back(seg.index);
    for (const auto& c : seg.body) loop.body.push_back(TargetStmt::call(c.clause, symbols_of(c)));
    loop.body.push_back(TargetStmt::increment(seg.index));
    m.body.push_back(TargetStmt::local(seg.index, t_int(0)));
    m.body.push_back(std::move(loop));
    u.methods.push_back(std::move(m));
  }

  for (const auto& p : plans) {
    TargetMethod m = from_spec(derive_scenario_spec(ast, assets, p), TargetMethod::Kind::Scenario);
    for (const auto& step : p.steps) {
      if (const auto* c = std::get_if<CallStep>(&step)) {
        m.body.push_back(TargetStmt::call(c->clause, symbols_of(*c)));
      } else if (const auto* g = std::get_if<GuardedEvent>(&step)) {
        m.body.push_back(TargetStmt::if_(
            t_var(g->guard), {TargetStmt::call("event" + std::to_string(g->event_index), {}), TargetStmt::return_()}));
      } else if (const auto* e = std::get_if<EventStep>(&step)) {
        m.body.push_back(TargetStmt::call("event" + std::to_string(e->event_index), {}));
      } else {
        std::vector<std::string> args{p.loop->counter};
        const ClauseSpec helper = derive_loop_spec(ast, assets, p);
        for (std::size_t i = 1; i < helper.params.size(); ++i) args.push_back(helper.params[i].name);
        m.body.push_back(TargetStmt::call(p.name + "_loop", std::move(args)));
      }
    }
    u.methods.push_back(std::move(m));
  }
  return u;
}

TargetUnit translate(const ContractAst& ast, const LowerOptions& opts) {
  AssetAnalysis assets = analyze_assets(ast);
  Automaton a = build_automaton(ast);
  CycleReport cycles = enumerate_cycles(a);
  std::vector<ScenarioPlan> plans = enumerate_scenarios(a, cycles, ast, assets);
  return lower(ast, assets, plans, opts);
}

}  // namespace stipula
