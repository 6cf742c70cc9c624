#include "stipula/scenario.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "symexec.hpp"

namespace stipula {

std::vector<std::string> ScenarioPlan::guards() const {
  std::vector<std::string> out;
  for (const auto& s : steps)
    if (const auto* g = std::get_if<GuardedEvent>(&s)) out.push_back(g->guard);
  return out;
}

namespace {

TermPtr scaled(const TermPtr& n, const TermPtr& t) {
  if (t->kind == Term::Kind::Binary && t->op == TermOp::Div) return t_div(t_mul(n, t->kids[0]), t->kids[1]);
  return t_mul(n, t);
}

}  // namespace

TermPtr LoopDelta::per_iteration() const {
  if (terms.empty()) return t_int(0);
  TermPtr acc = terms.front().negative ? t_neg(terms.front().term) : terms.front().term;
  for (std::size_t i = 1; i < terms.size(); ++i)
    acc = terms[i].negative ? t_sub(acc, terms[i].term) : t_add(acc, terms[i].term);
  return acc;
}

TermPtr LoopDelta::after(const TermPtr& base, const TermPtr& n) const {
  TermPtr acc = base;
  for (const auto& t : terms) acc = t.negative ? t_sub(acc, scaled(n, t.term)) : t_add(acc, scaled(n, t.term));
  return acc;
}

namespace {

bool is_event_folded(const ContractAst& ast, int index) {
  const EventClause* e = ast.find_event(index);
  return e && e->body.empty();
}

void linearize(const TermPtr& t, bool negative, std::vector<SignedTerm>& out) {
  if (t->kind == Term::Kind::Binary && (t->op == TermOp::Add || t->op == TermOp::Sub)) {
    linearize(t->kids[0], negative, out);
    linearize(t->kids[1], t->op == TermOp::Sub ? !negative : negative, out);
  } else if (t->kind == Term::Kind::Neg) {
    linearize(t->kids[0], !negative, out);
  } else if (!(t->kind == Term::Kind::Int && t->int_value == 0)) {
    out.push_back({negative, t});
  }
}

void cancel(std::vector<SignedTerm>& terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      if (terms[i].negative != terms[j].negative && equal(terms[i].term, terms[j].term)) {
        terms.erase(terms.begin() + static_cast<std::ptrdiff_t>(j));
        terms.erase(terms.begin() + static_cast<std::ptrdiff_t>(i));
        --i;
        break;
      }
    }
  }
}

bool mentions(const Term& t, const std::vector<Location>& locs) {
  if ((t.kind == Term::Kind::Old || t.kind == Term::Kind::Loc) &&
      std::find(locs.begin(), locs.end(), t.loc) != locs.end())
    return true;
  return std::any_of(t.kids.begin(), t.kids.end(), [&](const TermPtr& k) { return mentions(*k, locs); });
}

bool mentions_var(const Term& t, const std::string& v) {
  if (t.kind == Term::Kind::Var && t.text == v) return true;
  return std::any_of(t.kids.begin(), t.kids.end(), [&](const TermPtr& k) { return mentions_var(*k, v); });
}

std::map<std::string, TermPtr> call_args(const CallStep& c) {
  std::map<std::string, TermPtr> args;
  for (const auto& [param, sym] : c.args) args[param] = t_var(sym);
  return args;
}

const FunctionClause& clause_of(const ContractAst& ast, const std::string& name) {
  const FunctionClause* f = ast.find_clause(name);
  if (!f) throw UnknownClauseError("no clause named '" + name + "'");
  return *f;
}

/// Runs the loop body once from `st`, collecting obligations.
void run_body(const ContractAst& ast, const AssetAnalysis& assets, const LoopSegment& seg, detail::SymState& st,
              detail::Obligations& ob) {
  detail::SymExec exec(ast, assets);
  for (const auto& c : seg.body) exec.call(st, clause_of(ast, c.clause), call_args(c), t_bool(true), ob);
}

void summarize(const ContractAst& ast, const AssetAnalysis& assets, LoopSegment& seg) {
  detail::SymState st;
  detail::Obligations ob;
  run_body(ast, assets, seg, st, ob);
  seg.frame = st.writes;
  for (const auto& l : st.writes) {
    TermPtr v = simplify(st.get(l));
    if (equal(v, t_old(l))) continue;
    if (l.is_asset() && !assets.is_divisible(l.name))
      throw NonLinearDeltaError("indivisible " + l.str() + " changes hands inside the loop at @" + seg.entry_state);
    std::vector<SignedTerm> terms;
    linearize(v, false, terms);
    cancel(terms);
    auto self = std::find_if(terms.begin(), terms.end(), [&](const SignedTerm& s) {
      return !s.negative && s.term->kind == Term::Kind::Old && s.term->loc == l;
    });
    if (self == terms.end())
      throw NonLinearDeltaError(l.str() + " is overwritten, not incremented, inside the loop at @" + seg.entry_state);
    terms.erase(self);
    for (const auto& s : terms) {
      if (mentions(*s.term, seg.frame))
        throw NonLinearDeltaError("per-iteration change of " + l.str() + " depends on state the loop writes: " +
                                  render(s.term));
    }
    for (const auto& s : terms) {
      if (s.term->kind == Term::Kind::Binary && s.term->op == TermOp::Div) {
        TermPtr c = t_eq(t_bin(TermOp::Mod, s.term->kids[0], s.term->kids[1]), t_int(0));
        bool dup = std::any_of(seg.divisibility.begin(), seg.divisibility.end(),
                               [&](const Condition& d) { return equal(d, c); });
        if (!dup) seg.divisibility.push_back(c);
      }
    }
    seg.deltas.push_back({l, std::move(terms)});
  }
}

class Enumerator {
 public:
  Enumerator(const Automaton& a, const CycleReport& r, const ContractAst& ast, const AssetAnalysis& assets)
      : a_(a), ast_(ast), assets_(assets) {
    for (std::size_t c = 0; c < r.cycles.size(); ++c)
      for (const auto& s : trace_states(a, r.cycles[c])) cycle_of_[s] = c;
    cycles_ = r.cycles;
    for (const auto& n : ast.fields) reserved_.insert(n);
    for (const auto& n : ast.assets) reserved_.insert(n);
    for (const auto& n : ast.parties) reserved_.insert(n);
    reserved_.insert(ast.name);
    for (const auto* n : {"counter", "i", "k"}) reserved_.insert(n);
  }

  std::vector<ScenarioPlan> run() {
    visit(Path{}, a_.initial);
    return std::move(out_);
  }

 private:
  struct Path {
    ScenarioPlan plan;
    std::set<std::string> visited;
    std::set<std::string> called;
  };

  const Automaton& a_;
  const ContractAst& ast_;
  const AssetAnalysis& assets_;
  std::vector<Trace> cycles_;
  std::map<std::string, std::size_t> cycle_of_;
  std::set<std::string> reserved_;
  std::vector<ScenarioPlan> out_;

  static const Symbol* find(const std::vector<Symbol>& syms, const std::string& n) {
    for (const auto& s : syms)
      if (s.name == n) return &s;
    return nullptr;
  }

  std::string fresh(const std::vector<Symbol>& syms, const std::string& base) const {
    if (!find(syms, base) && !reserved_.count(base)) return base;
    for (int n = 2;; ++n) {
      std::string c = base + "_" + std::to_string(n);
      if (!find(syms, c) && !reserved_.count(c)) return c;
    }
  }

  /// Straight-line calls reuse a parameter's name as its symbol; inside a loop
  /// a name bound before the loop gets a `_<clause>` suffix.
  CallStep make_call(Path& p, const FunctionClause& f, const std::vector<Symbol>* before_loop) {
    CallStep c{f.name, {}};
    std::vector<std::pair<std::string, ValueType>> params;
    for (const auto& v : f.value_params) {
      auto it = f.param_types.find(v);
      params.emplace_back(v, it == f.param_types.end() ? ValueType::Int : it->second);
    }
    for (const auto& k : f.asset_params) params.emplace_back(k, ValueType::Int);
    auto& syms = p.plan.symbols;
    for (const auto& [name, type] : params) {
      std::string sym;
      if (before_loop && find(*before_loop, name)) {
        sym = fresh(syms, name + "_" + f.name);
      } else if (const Symbol* s = find(syms, name); s && s->type == type) {
        sym = name;
      } else {
        sym = fresh(syms, name);
      }
      if (!find(syms, sym)) syms.push_back({sym, type});
      c.args.emplace_back(name, sym);
    }
    return c;
  }

  bool scheduled(const Path& p, int event_index) const {
    const FunctionClause* owner = ast_.event_owner(event_index);
    return owner && p.called.count(owner->name);
  }

  void finish(Path& p) {
    if (p.plan.steps.empty()) return;  // no clause leaves the initial state
    p.plan.name = "seq" + std::to_string(out_.size() + 1);
    out_.push_back(std::move(p.plan));
  }

  void take(Path p, const Transition& t) {
    if (t.label.kind == TransitionLabel::Kind::Function) {
      const FunctionClause& f = clause_of(ast_, t.label.name);
      p.plan.steps.emplace_back(make_call(p, f, nullptr));
      p.called.insert(f.name);
    } else {
      p.plan.steps.emplace_back(EventStep{t.label.event_index});
    }
    visit(std::move(p), t.to);
  }

  void visit(Path p, const std::string& q) {
    if (!p.visited.insert(q).second) throw NotSupportedError("scenario path revisits @" + q + " outside a cycle");
    auto cyc = cycle_of_.find(q);
    if (cyc != cycle_of_.end()) {
      loop(std::move(p), q, cycles_[cyc->second]);
      return;
    }

    for (std::size_t ti : a_.outgoing(q)) {
      const Transition& t = a_.transitions[ti];
      if (t.label.kind == TransitionLabel::Kind::Event && is_event_folded(ast_, t.label.event_index) &&
          scheduled(p, t.label.event_index)) {
        int n = t.label.event_index;
        p.plan.steps.emplace_back(GuardedEvent{n, "ev_event" + std::to_string(n)});
      }
    }
    bool branched = false;
    for (std::size_t ti : a_.outgoing(q)) {
      const Transition& t = a_.transitions[ti];
      if (t.label.kind == TransitionLabel::Kind::Event &&
          (is_event_folded(ast_, t.label.event_index) || !scheduled(p, t.label.event_index)))
        continue;
      take(p, t);
      branched = true;
    }
    if (!branched) finish(p);
  }

  void loop(Path p, const std::string& entry, const Trace& cycle) {
    if (p.plan.loop) throw NotSupportedError("scenario path meets a second cycle at @" + entry);

    // Rotate so the cycle starts at the entry state.
    Trace rot = cycle;
    auto start = std::find_if(rot.begin(), rot.end(), [&](std::size_t t) { return a_.transitions[t].from == entry; });
    std::rotate(rot.begin(), start, rot.end());

    LoopSegment seg;
    seg.entry_state = entry;
    seg.cycle = rot;
    std::vector<Symbol> before = p.plan.symbols;
    std::vector<std::string> states;
    for (std::size_t ti : rot) {
      const Transition& t = a_.transitions[ti];
      if (t.label.kind != TransitionLabel::Kind::Function)
        throw NotSupportedError("cycle through @" + t.from + " contains event " + t.label.str());
      states.push_back(t.from);
      p.visited.insert(t.from);
      const FunctionClause& f = clause_of(ast_, t.label.name);
      seg.body.push_back(make_call(p, f, &before));
      p.called.insert(f.name);
    }
    summarize(ast_, assets_, seg);
    p.plan.steps.emplace_back(LoopStep{});
    p.plan.loop = std::move(seg);

    bool branched = false;
    for (std::size_t j = 0; j < states.size(); ++j) {
      for (std::size_t ti : a_.outgoing(states[j])) {
        if (std::find(rot.begin(), rot.end(), ti) != rot.end()) continue;
        const Transition& t = a_.transitions[ti];
        if (t.label.kind == TransitionLabel::Kind::Event) {
          if (!scheduled(p, t.label.event_index)) continue;
          if (is_event_folded(ast_, t.label.event_index))
            throw NotSupportedError("guard-only event " + t.label.str() + " triggers at @" + t.from +
                                    ", which lies on a cycle");
        }
        Path np = p;
        for (std::size_t m = 0; m < j; ++m) {
          const FunctionClause& f = clause_of(ast_, a_.transitions[rot[m]].label.name);
          np.plan.steps.emplace_back(make_call(np, f, nullptr));
        }
        take(std::move(np), t);
        branched = true;
      }
    }
    if (!branched) finish(p);
  }
};

}  // namespace

std::vector<ScenarioPlan> enumerate_scenarios(const Automaton& a, const CycleReport& report, const ContractAst& ast) {
  return enumerate_scenarios(a, report, ast, analyze_assets(ast));
}

std::vector<ScenarioPlan> enumerate_scenarios(const Automaton& a, const CycleReport& report, const ContractAst& ast,
                                              const AssetAnalysis& assets) {
  if (!report.disjoint) {
    std::string msg = "cycles are not disjoint";
    if (report.witness)
      msg += ": " + describe(a, report.witness->first) + " and " + describe(a, report.witness->second) +
             " share a state";
    throw NotDisjointError(msg);
  }
  return Enumerator(a, report, ast, assets).run();
}

LoopAnnotation synthesize_loop_invariant(const LoopSegment& seg, const AssetAnalysis& assets) {
  TermPtr i = t_var(seg.index);
  TermPtr n = t_var(seg.counter);
  auto current = [&](const TermPtr& t) {
    return rewrite(t, [&](const Term& x) -> std::optional<TermPtr> {
      if (x.kind == Term::Kind::Old && std::find(seg.frame.begin(), seg.frame.end(), x.loc) == seg.frame.end())
        return t_loc(x.loc);
      return std::nullopt;
    });
  };

  LoopAnnotation out;
  for (const auto& d : seg.deltas) out.invariants.push_back(t_eq(t_loc(d.loc), current(d.after(t_old(d.loc), i))));
  for (const auto& l : seg.frame) {
    bool has_delta = std::any_of(seg.deltas.begin(), seg.deltas.end(), [&](const LoopDelta& d) { return d.loc == l; });
    if (!has_delta) out.invariants.push_back(t_eq(t_loc(l), t_old(l)));
  }
  out.invariants.push_back(t_and({t_le(t_int(0), i), t_le(i, n)}));
  for (const auto& m : assets.models) {
    bool touched = std::any_of(m.owners.begin(), m.owners.end(), [&](const Location& o) {
      return std::find(seg.frame.begin(), seg.frame.end(), o) != seg.frame.end();
    });
    if (!touched) continue;
    out.invariants.push_back(m.kind == AssetKind::Divisible ? conservation_invariant(m) : exclusivity_invariant(m));
  }
  out.variant = t_sub(n, i);
  return out;
}

ClauseSpec derive_loop_spec(const ContractAst& ast, const AssetAnalysis& assets, const ScenarioPlan& plan) {
  if (!plan.loop) throw ArgumentError(plan.name + " has no loop");
  const LoopSegment& seg = *plan.loop;
  ClauseSpec spec;
  spec.method = plan.name + "_loop";
  spec.source_state = seg.entry_state;
  spec.target_state = seg.entry_state;
  spec.params.push_back({seg.counter, ValueType::Int});
  std::set<std::string> used;
  for (const auto& c : seg.body)
    for (const auto& [_, sym] : c.args) used.insert(sym);
  for (const auto& s : plan.symbols)
    if (used.count(s.name)) spec.params.push_back({s.name, s.type});

  // One iteration from the state reached after k iterations.
  const std::string k = "k";
  detail::SymState st;
  for (const auto& d : seg.deltas) st.vals[d.loc] = simplify(d.after(t_old(d.loc), t_var(k)));
  detail::Obligations ob;
  run_body(ast, assets, seg, st, ob);

  TermPtr n = t_var(seg.counter);
  spec.requires_.push_back(t_ge(n, t_int(0)));
  std::vector<Condition> per_iteration;
  for (const auto& c : ob.ordered()) {
    if (mentions_var(*c, k)) per_iteration.push_back(t_forall(k, t_int(0), n, c));
    else spec.requires_.push_back(c);
  }
  spec.requires_.insert(spec.requires_.end(), seg.divisibility.begin(), seg.divisibility.end());
  spec.requires_.insert(spec.requires_.end(), per_iteration.begin(), per_iteration.end());

  std::set<std::string> touched;
  for (const auto& l : seg.frame) {
    auto d = std::find_if(seg.deltas.begin(), seg.deltas.end(), [&](const LoopDelta& x) { return x.loc == l; });
    spec.ensures.push_back(t_eq(t_loc(l), d == seg.deltas.end() ? t_old(l) : d->after(t_old(l), n)));
    if (l.is_asset()) touched.insert(l.name);
  }
  for (const auto& m : assets.models) {
    if (m.kind != AssetKind::Divisible || !touched.count(m.asset)) continue;
    for (const auto& o : m.owners)
      if (std::find(seg.frame.begin(), seg.frame.end(), o) == seg.frame.end())
        spec.ensures.push_back(t_eq(t_loc(o), t_old(o)));
  }
  spec.frame = seg.frame;
  return spec;
}

ClauseSpec derive_scenario_spec(const ContractAst& ast, const AssetAnalysis& assets, const ScenarioPlan& plan) {
  ClauseSpec spec;
  spec.method = plan.name;
  spec.source_state = ast.agreement.initial_state;
  for (const auto& s : plan.symbols) spec.params.push_back({s.name, s.type});
  if (plan.loop) spec.params.push_back({plan.loop->counter, ValueType::Int});
  for (const auto& g : plan.guards()) spec.params.push_back({g, ValueType::Bool});

  // Obligations are collected unconditionally (every guard may be false),
  // step by step so that they read in call order.
  detail::SymExec exec(ast, assets);
  detail::SymState st;
  std::vector<Condition> requires_;
  auto flush = [&](const detail::Obligations& ob) {
    for (const auto& c : ob.ordered())
      if (std::none_of(requires_.begin(), requires_.end(), [&](const Condition& r) { return equal(r, c); }))
        requires_.push_back(c);
  };
  TermPtr yes = t_bool(true);
  std::vector<std::pair<std::string, detail::SymState>> exits;
  for (const auto& step : plan.steps) {
    detail::Obligations ob;
    if (const auto* c = std::get_if<CallStep>(&step)) {
      exec.call(st, clause_of(ast, c->clause), call_args(*c), yes, ob);
    } else if (const auto* g = std::get_if<GuardedEvent>(&step)) {
      detail::SymState taken = st;
      exec.fire(taken, *ast.find_event(g->event_index), yes, ob);
      exits.emplace_back(g->guard, std::move(taken));
    } else if (const auto* e = std::get_if<EventStep>(&step)) {
      exec.fire(st, *ast.find_event(e->event_index), yes, ob);
    } else {
      ClauseSpec loop = derive_loop_spec(ast, assets, plan);
      auto at_entry = [&](const TermPtr& t) {
        return simplify(rewrite(t, [&](const Term& x) -> std::optional<TermPtr> {
          if (x.kind == Term::Kind::Old) return st.get(x.loc);
          return std::nullopt;
        }));
      };
      for (const auto& r : loop.requires_) detail::Obligations::add(ob.body, yes, at_entry(r));
      std::vector<std::pair<Location, TermPtr>> post;
      for (const auto& en : loop.ensures) post.emplace_back(en->kids[0]->loc, at_entry(en->kids[1]));
      for (const auto& [l, v] : post) st.set(l, v);
    }
    flush(ob);
  }
  for (auto it = exits.rbegin(); it != exits.rend(); ++it) {
    const auto& [guard, taken] = *it;
    std::vector<Location> locs = st.writes;
    for (const auto& l : taken.writes)
      if (std::find(locs.begin(), locs.end(), l) == locs.end()) locs.push_back(l);
    for (const auto& l : locs) {
      TermPtr a = taken.get(l), b = st.get(l);
      if (!equal(a, b)) st.vals[l] = simplify(t_ite(t_var(guard), a, b));
    }
    st.writes = locs;
  }
  spec.requires_ = std::move(requires_);
  spec.ensures = detail::effects(st, assets);
  spec.frame = st.writes;
  return spec;
}

std::string plans_to_json(const Automaton& a, const std::vector<ScenarioPlan>& plans) {
  using nlohmann::json;
  auto call_json = [](const CallStep& c) {
    json args = json::object();
    for (const auto& [p, s] : c.args) args[p] = s;
    return json{{"kind", "call"}, {"clause", c.clause}, {"args", args}};
  };
  json out = json::array();
  for (const auto& p : plans) {
    json steps = json::array();
    for (const auto& s : p.steps) {
      if (const auto* c = std::get_if<CallStep>(&s)) steps.push_back(call_json(*c));
      else if (const auto* g = std::get_if<GuardedEvent>(&s))
        steps.push_back({{"kind", "guarded_event"}, {"event", g->event_index}, {"guard", g->guard}});
      else if (const auto* e = std::get_if<EventStep>(&s))
        steps.push_back({{"kind", "event"}, {"event", e->event_index}});
      else steps.push_back({{"kind", "loop"}});
    }
    json symbols = json::array();
    for (const auto& s : p.symbols) symbols.push_back({{"name", s.name}, {"type", std::string(type_name(s.type))}});
    json jp{{"name", p.name}, {"symbols", symbols}, {"steps", steps}};
    if (p.loop) {
      const auto& l = *p.loop;
      json body = json::array();
      for (const auto& c : l.body) body.push_back(call_json(c));
      json deltas = json::object();
      for (const auto& d : l.deltas) deltas[d.loc.str()] = render(d.per_iteration());
      json frame = json::array();
      for (const auto& f : l.frame) frame.push_back(f.str());
      jp["loop"] = {{"entry", l.entry_state}, {"cycle", describe(a, l.cycle)}, {"counter", l.counter},
                    {"index", l.index}, {"body", body}, {"deltas", deltas}, {"frame", frame}};
    }
    out.push_back(jp);
  }
  return out.dump(2);
}

}  // namespace stipula
