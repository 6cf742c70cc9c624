#include "stipula/interp.hpp"

#include <algorithm>
#include <set>

namespace stipula {

std::int64_t RuntimeState::asset(const Location& l) const {
  auto it = assets.find(l);
  if (it == assets.end()) throw ArgumentError("unknown asset slot " + l.str());
  return it->second;
}

Store RuntimeState::store(const AssetAnalysis& models) const {
  Store out;
  for (const auto& [name, v] : fields) out[Location::field(name)] = v;
  for (const auto& [loc, v] : assets) {
    if (models.is_divisible(loc.name)) out[loc] = v;
    else out[loc] = v != 0;
  }
  return out;
}

struct Interpreter::Frame {
  const FunctionClause* clause = nullptr;
  std::map<std::string, Value> params;
};

Interpreter::Interpreter(ContractAst ast) : ast_(std::move(ast)), assets_(analyze_assets(ast_)) {}

namespace {

ValueType type_of(const Value& v) {
  if (std::holds_alternative<std::int64_t>(v)) return ValueType::Int;
  if (std::holds_alternative<bool>(v)) return ValueType::Bool;
  return ValueType::String;
}

Value default_value(ValueType t) {
  switch (t) {
    case ValueType::Bool: return false;
    case ValueType::String: return std::string();
    case ValueType::Int: break;
  }
  return std::int64_t{0};
}

ValueType declared(const std::map<std::string, ValueType>& types, const std::string& name) {
  auto it = types.find(name);
  return it == types.end() ? ValueType::Int : it->second;
}

}  // namespace

RuntimeState Interpreter::init(const std::map<std::string, Value>& field_inits,
                               const std::map<Location, std::int64_t>& endowments) const {
  RuntimeState s;
  s.control = ast_.agreement.initial_state;
  for (const auto& [name, v] : field_inits) {
    if (!ast_.is_field(name)) throw ArgumentError("'" + name + "' is not a field of " + ast_.name);
    ValueType want = declared(ast_.field_types, name);
    if (type_of(v) != want)
      throw ArgumentError("field '" + name + "' expects " + std::string(type_name(want)) + ", got " + value_str(v));
  }
  for (const auto& f : ast_.agreement.bound_fields())
    if (!field_inits.count(f)) throw MissingInitError("agreement field '" + f + "' has no initial value");
  for (const auto& f : ast_.fields) {
    auto it = field_inits.find(f);
    s.fields[f] = it != field_inits.end() ? it->second : default_value(declared(ast_.field_types, f));
  }

  for (const auto& m : assets_.models)
    for (const auto& o : m.owners) s.assets[o] = 0;
  for (const auto& [loc, v] : endowments) {
    if (loc.kind != Location::Kind::Party || !s.assets.count(loc))
      throw ArgumentError("cannot endow " + loc.str() + ": not a party asset slot");
    if (v < 0) throw ArgumentError("negative endowment for " + loc.str());
    if (!assets_.is_divisible(loc.name) && v > 1)
      throw ArgumentError("indivisible asset " + loc.str() + " takes 0 or 1, got " + std::to_string(v));
    s.assets[loc] = v;
  }
  if (!exclusive(s)) throw ArgumentError("every indivisible asset needs exactly one initial holder");
  return s;
}

Value Interpreter::eval(const RuntimeState& s, const Frame& fr, const Expr& e) const {
  TermPtr t = from_expr(e, [&](const std::string& n, SourcePos pos) -> TermPtr {
    if (ast_.is_field(n)) {
      const Value& v = s.fields.at(n);
      if (const auto* i = std::get_if<std::int64_t>(&v)) return t_int(*i);
      if (const auto* b = std::get_if<bool>(&v)) return t_bool(*b);
      return t_str(std::get<std::string>(v));
    }
    if (ast_.is_asset(n)) return t_int(s.assets.at(Location::contract(ast_.name, n)));
    auto it = fr.params.find(n);
    if (it != fr.params.end()) {
      const Value& v = it->second;
      if (const auto* i = std::get_if<std::int64_t>(&v)) return t_int(*i);
      if (const auto* b = std::get_if<bool>(&v)) return t_bool(*b);
      return t_str(std::get<std::string>(v));
    }
    throw EvalError("cannot resolve '" + n + "'", pos);
  });
  try {
    return evaluate(*t, EvalEnv{});
  } catch (const EvalError& err) {
    if (err.pos().known()) throw;
    throw EvalError(err.message(), e.pos);
  }
}

RuntimeState Interpreter::invoke(const RuntimeState& in, std::string_view name, const ValueArgs& value_args,
                                 const AssetArgs& asset_args) const {
  const FunctionClause* f = ast_.find_clause(std::string(name));
  if (!f) throw UnknownClauseError("no clause named '" + std::string(name) + "'");
  if (in.control != f->source_state)
    throw WrongStateError("'" + f->name + "' needs state @" + f->source_state + ", contract is in @" + in.control,
                          f->pos);

  Frame fr;
  fr.clause = f;
  for (const auto& [k, _] : value_args)
    if (!f->is_value_param(k)) throw ArgumentError("'" + f->name + "' has no value parameter '" + k + "'");
  for (const auto& [k, _] : asset_args)
    if (!f->is_asset_param(k)) throw ArgumentError("'" + f->name + "' has no asset parameter '" + k + "'");
  for (const auto& p : f->value_params) {
    auto it = value_args.find(p);
    if (it == value_args.end()) throw ArgumentError("missing value argument '" + p + "' for '" + f->name + "'");
    ValueType want = declared(f->param_types, p);
    if (type_of(it->second) != want)
      throw ArgumentError("argument '" + p + "' expects " + std::string(type_name(want)) + ", got " +
                          value_str(it->second));
    fr.params[p] = it->second;
  }
  for (const auto& k : f->asset_params) {
    auto it = asset_args.find(k);
    if (it == asset_args.end()) throw ArgumentError("missing asset argument '" + k + "' for '" + f->name + "'");
    std::int64_t v = it->second;
    if (v < 0) throw ArgumentError("asset argument '" + k + "' is negative");
    if (auto a = assets_.asset_of(f->name, k)) {
      Location src = Location::party(f->party, *a);
      std::int64_t held = in.asset(src);
      if (!assets_.is_divisible(*a) && v != 1)
        throw ArgumentError("indivisible asset argument '" + k + "' must be 1, got " + std::to_string(v));
      if (held < v)
        throw InsufficientAssetError(f->party + " holds " + std::to_string(held) + " " + *a + ", '" + k +
                                     "' needs " + std::to_string(v));
    }
    fr.params[k] = v;
  }

  if (f->guard) {
    Value g = eval(in, fr, **f->guard);
    if (!std::get<bool>(g)) throw GuardFalseError("guard of '" + f->name + "' is false", (*f->guard)->pos);
  }

  RuntimeState s = in;
  block(s, fr, f->body);
  for (const auto& e : f->events) {
    std::int64_t k = 0;
    if (const auto* lit = std::get_if<std::int64_t>(&e.delay.value)) {
      k = *lit;
    } else {
      k = std::get<std::int64_t>(s.fields.at(std::get<std::string>(e.delay.value)));
    }
    if (k < 0) continue;  // already expired
    s.pending.push_back({e.event_index, k, e.trigger_state, e.target_state});
  }
  s.control = f->target_state;
  return s;
}

void Interpreter::block(RuntimeState& s, Frame& fr, const Block& b) const {
  for (const auto& st : b) statement(s, fr, st);
}

void Interpreter::statement(RuntimeState& s, Frame& fr, const Statement& st) const {
  if (const auto* fs = std::get_if<FieldSend>(&st.node)) {
    s.fields[fs->field] = eval(s, fr, *fs->value);
  } else if (const auto* ps = std::get_if<PartySend>(&st.node)) {
    s.messages.push_back({ps->party, eval(s, fr, *ps->value)});
  } else if (const auto* mv = std::get_if<AssetMove>(&st.node)) {
    transfer(s, fr, mv->from, mv->to, mv->amount.get(), st.pos);
  } else if (const auto* dr = std::get_if<AssetDrain>(&st.node)) {
    transfer(s, fr, dr->from, dr->to, nullptr, st.pos);
  } else {
    const auto& c = std::get<Conditional>(st.node);
    if (std::get<bool>(eval(s, fr, *c.cond))) block(s, fr, c.then_branch);
    else if (c.else_branch) block(s, fr, *c.else_branch);
  }
}

void Interpreter::transfer(RuntimeState& s, Frame& fr, const std::string& from, const std::string& to,
                           const Expr* amount, SourcePos pos) const {
  bool from_param = !ast_.is_asset(from);
  std::optional<std::string> asset;
  if (!from_param) asset = from;
  else if (fr.clause) asset = assets_.asset_of(fr.clause->name, from);

  std::int64_t e = 0;
  auto amount_of = [&](std::int64_t have) {
    e = amount ? std::get<std::int64_t>(eval(s, fr, *amount)) : have;
    if (e < 0) throw InsufficientAssetError("negative amount " + std::to_string(e) + " moved from '" + from + "'", pos);
    if (e > have)
      throw InsufficientAssetError("'" + from + "' has " + std::to_string(have) + ", cannot move " + std::to_string(e),
                                   pos);
  };

  if (!asset) {
    std::int64_t have = std::get<std::int64_t>(fr.params.at(from));
    amount_of(have);
    fr.params[from] = have - e;
    s.payments.push_back({fr.clause->party, to, from, e});
    return;
  }

  Location src = from_param ? Location::party(fr.clause->party, *asset) : Location::contract(ast_.name, from);
  Location dst = ast_.is_asset(to) ? Location::contract(ast_.name, to) : Location::party(to, *asset);
  if (assets_.is_divisible(*asset)) {
    std::int64_t have = from_param ? std::get<std::int64_t>(fr.params.at(from)) : s.assets.at(src);
    amount_of(have);
    if (s.assets.at(src) < e)
      throw InsufficientAssetError(src.str() + " holds " + std::to_string(s.assets.at(src)) + ", cannot move " +
                                       std::to_string(e),
                                   pos);
    s.assets[dst] += e;
    s.assets[src] -= e;
    if (from_param) fr.params[from] = have - e;
  } else {
    if (amount) (void)eval(s, fr, *amount);
    if (s.assets.at(src) != 1) throw InsufficientAssetError(src.str() + " does not hold the unit", pos);
    if (dst.kind == Location::Kind::Contract && dst != src && s.assets.at(dst) != 0)
      throw InsufficientAssetError(dst.str() + " already holds the unit", pos);
    s.assets[dst] = 1;
    if (dst != src) s.assets[src] = 0;
    if (from_param) fr.params[from] = std::int64_t{0};
  }
}

RuntimeState Interpreter::tick(const RuntimeState& in, std::int64_t n) const {
  if (n < 0) throw ArgumentError("tick count must be non-negative");
  RuntimeState s = in;
  s.clock += n;
  for (auto& p : s.pending) p.remaining -= n;
  std::erase_if(s.pending, [](const PendingEvent& p) { return p.remaining < 0; });
  return s;
}

std::vector<int> Interpreter::fireable(const RuntimeState& s) const {
  std::set<int> out;
  for (const auto& p : s.pending)
    if (p.remaining == 0 && p.trigger_state == s.control) out.insert(p.event_index);
  return {out.begin(), out.end()};
}

RuntimeState Interpreter::fire_event(const RuntimeState& in, int event_index) const {
  auto it = std::find_if(in.pending.begin(), in.pending.end(), [&](const PendingEvent& p) {
    return p.event_index == event_index && p.remaining == 0 && p.trigger_state == in.control;
  });
  if (it == in.pending.end()) {
    std::string why = "no pending instance";
    for (const auto& p : in.pending) {
      if (p.event_index != event_index) continue;
      why = p.remaining != 0 ? std::to_string(p.remaining) + " minutes remain"
                             : "trigger state @" + p.trigger_state + " differs from @" + in.control;
    }
    throw NotFireableError("event" + std::to_string(event_index) + " cannot fire: " + why);
  }
  const EventClause* ev = ast_.find_event(event_index);
  RuntimeState s = in;
  s.pending.erase(s.pending.begin() + (it - in.pending.begin()));
  Frame fr;
  block(s, fr, ev->body);
  s.control = ev->target_state;
  return s;
}

bool Interpreter::conserved(const RuntimeState& before, const RuntimeState& after) const {
  for (const auto& m : assets_.models) {
    if (m.kind != AssetKind::Divisible) continue;
    std::int64_t a = 0, b = 0;
    for (const auto& o : m.owners) {
      a += before.asset(o);
      b += after.asset(o);
    }
    if (a != b) return false;
  }
  return true;
}

bool Interpreter::exclusive(const RuntimeState& s) const {
  for (const auto& m : assets_.models) {
    if (m.kind != AssetKind::Indivisible) continue;
    int holders = 0;
    for (const auto& o : m.owners) {
      std::int64_t v = s.asset(o);
      if (v != 0 && v != 1) return false;
      holders += static_cast<int>(v);
    }
    if (holders != 1) return false;
  }
  return true;
}

RuntimeState run_trace(const ContractAst& ast, const std::vector<TraceStep>& trace) {
  if (trace.empty() || !std::holds_alternative<InitStep>(trace.front()))
    throw TraceError(0, "a trace must start with an init step");
  Interpreter in(ast);
  RuntimeState s;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    try {
      const auto& step = trace[i];
      if (const auto* init = std::get_if<InitStep>(&step)) {
        if (i != 0) throw ArgumentError("init may only appear as the first step");
        s = in.init(init->fields, init->endowments);
      } else if (const auto* call = std::get_if<InvokeStep>(&step)) {
        s = in.invoke(s, call->clause, call->value_args, call->asset_args);
      } else if (const auto* t = std::get_if<TickStep>(&step)) {
        s = in.tick(s, t->n);
      } else {
        s = in.fire_event(s, std::get<FireStep>(step).event_index);
      }
    } catch (const Error& e) {
      throw TraceError(i, e);
    }
  }
  return s;
}

}  // namespace stipula
