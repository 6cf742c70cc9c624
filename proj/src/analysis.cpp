#include "stipula/analysis.hpp"

#include <set>

#include "symexec.hpp"

namespace stipula {

std::string_view kind_name(AssetKind k) { return k == AssetKind::Divisible ? "divisible" : "indivisible"; }

const AssetModel* AssetAnalysis::find(const std::string& asset) const {
  for (const auto& m : models)
    if (m.asset == asset) return &m;
  return nullptr;
}

const AssetModel& AssetAnalysis::at(const std::string& asset) const {
  if (const auto* m = find(asset)) return *m;
  throw KindError("unknown asset '" + asset + "'");
}

std::optional<std::string> AssetAnalysis::asset_of(const std::string& clause, const std::string& param) const {
  auto it = param_asset.find({clause, param});
  if (it == param_asset.end()) return std::nullopt;
  return it->second;
}

bool AssetAnalysis::is_divisible(const std::string& asset) const {
  const auto* m = find(asset);
  return m && m->kind == AssetKind::Divisible;
}

namespace {

struct Move {
  const FunctionClause* clause;  // null inside events
  std::string from;
  std::string to;
  const Expr* amount;  // null for drains
  SourcePos pos;
};

void collect(const Block& b, const FunctionClause* clause, std::vector<Move>& out) {
  for (const auto& s : b) {
    if (const auto* m = std::get_if<AssetMove>(&s.node)) {
      out.push_back({clause, m->from, m->to, m->amount.get(), s.pos});
    } else if (const auto* d = std::get_if<AssetDrain>(&s.node)) {
      out.push_back({clause, d->from, d->to, nullptr, s.pos});
    } else if (const auto* c = std::get_if<Conditional>(&s.node)) {
      collect(c->then_branch, clause, out);
      if (c->else_branch) collect(*c->else_branch, clause, out);
    }
  }
}

bool is_unit(const Expr* e) {
  const auto* lit = e ? std::get_if<IntLit>(&e->node) : nullptr;
  return lit && lit->value == 1;
}

}  // namespace

AssetAnalysis analyze_assets(const ContractAst& ast) {
  std::vector<Move> moves;
  for (const auto& f : ast.clauses) {
    collect(f.body, &f, moves);
    for (const auto& e : f.events) collect(e.body, nullptr, moves);
  }

  AssetAnalysis out;
  std::map<std::pair<std::string, std::string>, SourcePos> typed_at;
  for (const auto& m : moves) {
    bool from_asset = ast.is_asset(m.from);
    if (from_asset && ast.is_asset(m.to) && m.from != m.to) {
      throw ConflictError("transfer between distinct assets '" + m.from + "' and '" + m.to + "'", m.pos);
    }
    if (!from_asset && m.clause && ast.is_asset(m.to)) {
      auto key = std::make_pair(m.clause->name, m.from);
      auto [it, fresh] = out.param_asset.emplace(key, m.to);
      if (!fresh && it->second != m.to) {
        throw ConflictError("parameter '" + m.from + "' of '" + m.clause->name + "' flows into both '" + it->second +
                                "' (at " + typed_at[key].str() + ") and '" + m.to + "'",
                            m.pos);
      }
      typed_at.emplace(key, m.pos);
    }
  }

  std::set<std::string> divisible;
  for (const auto& m : moves) {
    if (!m.amount || is_unit(m.amount)) continue;
    if (ast.is_asset(m.from)) {
      divisible.insert(m.from);
    } else if (m.clause) {
      if (auto a = out.asset_of(m.clause->name, m.from)) divisible.insert(*a);
    }
  }

  for (const auto& a : ast.assets) {
    AssetModel m;
    m.asset = a;
    m.kind = divisible.count(a) ? AssetKind::Divisible : AssetKind::Indivisible;
    m.owners.push_back(Location::contract(ast.name, a));
    for (const auto& p : ast.parties) m.owners.push_back(Location::party(p, a));
    if (m.kind == AssetKind::Divisible) m.kappa = "kappa_" + a;
    out.models.push_back(std::move(m));
  }
  return out;
}

std::vector<AssetModel> classify_assets(const ContractAst& ast) { return analyze_assets(ast).models; }

Condition exclusivity_invariant(const AssetModel& m) {
  if (m.kind != AssetKind::Indivisible)
    throw KindError("exclusivity applies to indivisible assets; '" + m.asset + "' is divisible");
  std::vector<TermPtr> cases;
  for (const auto& x : m.owners) {
    std::vector<TermPtr> parts{t_loc(x)};
    for (const auto& y : m.owners)
      if (y != x) parts.push_back(t_not(t_loc(y)));
    cases.push_back(t_and(parts));
  }
  return t_or(cases);
}

Condition conservation_invariant(const AssetModel& m) {
  if (m.kind != AssetKind::Divisible)
    throw KindError("conservation applies to divisible assets; '" + m.asset + "' is indivisible");
  TermPtr sum = t_loc(m.owners.front());
  for (std::size_t i = 1; i < m.owners.size(); ++i) sum = t_add(sum, t_loc(m.owners[i]));
  return t_eq(sum, t_var(m.kappa));
}

std::vector<Location> all_locations(const ContractAst& ast, const AssetAnalysis& assets) {
  std::vector<Location> out;
  for (const auto& f : ast.fields) out.push_back(Location::field(f));
  for (const auto& m : assets.models) out.insert(out.end(), m.owners.begin(), m.owners.end());
  return out;
}

ClauseSpec derive_clause_spec(const ContractAst& ast, const FunctionClause& clause, const AssetAnalysis& assets) {
  ClauseSpec spec;
  spec.method = clause.name;
  spec.party = clause.party;
  spec.source_state = clause.source_state;
  spec.target_state = clause.target_state;
  std::map<std::string, TermPtr> args;
  for (const auto& p : clause.value_params) {
    auto it = clause.param_types.find(p);
    spec.params.push_back({p, it == clause.param_types.end() ? ValueType::Int : it->second});
    args[p] = t_var(p);
  }
  for (const auto& p : clause.asset_params) {
    spec.params.push_back({p, ValueType::Int});
    args[p] = t_var(p);
  }

  detail::SymExec exec(ast, assets);
  detail::SymState st;
  detail::Obligations ob;
  exec.call(st, clause, args, t_bool(true), ob);
  spec.requires_ = ob.ordered();
  spec.ensures = detail::effects(st, assets);
  spec.frame = st.writes;
  return spec;
}

ClauseSpec derive_clause_spec(const ContractAst& ast, const EventClause& event, const AssetAnalysis& assets) {
  ClauseSpec spec;
  spec.method = "event" + std::to_string(event.event_index);
  spec.is_event = true;
  spec.event_index = event.event_index;
  spec.source_state = event.trigger_state;
  spec.target_state = event.target_state;

  detail::SymExec exec(ast, assets);
  detail::SymState st;
  detail::Obligations ob;
  exec.fire(st, event, t_bool(true), ob);
  spec.requires_ = ob.ordered();
  spec.ensures = detail::effects(st, assets);
  spec.frame = st.writes;
  return spec;
}

}  // namespace stipula
