#include "stipula/report.hpp"

#include <json.hpp>

namespace stipula {

using nlohmann::json;

std::string cycle_summary(const CycleReport& r) {
  std::size_t n = r.cycles.size();
  return std::to_string(n) + (n == 1 ? " cycle, " : " cycles, ") + (r.disjoint ? "disjoint" : "not disjoint");
}

namespace {

json strings(const std::vector<Condition>& cs, const RenderOptions& ro = {}) {
  json out = json::array();
  for (const auto& c : cs) out.push_back(render(c, ro));
  return out;
}

json spec_json(const ClauseSpec& s) {
  RenderOptions pre;
  pre.old_as_current = true;
  json params = json::array();
  for (const auto& p : s.params) params.push_back({{"name", p.name}, {"type", std::string(type_name(p.type))}});
  json frame = json::array();
  for (const auto& l : s.frame) frame.push_back(l.str());
  json j{{"method", s.method},   {"source", s.source_state},        {"target", s.target_state},
         {"params", params},     {"requires", strings(s.requires_, pre)}, {"ensures", strings(s.ensures)},
         {"assignable", frame}};
  if (s.is_event) j["event"] = s.event_index;
  else j["party"] = s.party;
  return j;
}

}  // namespace

std::string analysis_report_json(const ContractAst& ast) {
  AssetAnalysis assets = analyze_assets(ast);
  Automaton a = build_automaton(ast);
  CycleReport cycles = enumerate_cycles(a);

  json j;
  j["contract"] = ast.name;
  j["assets"] = json::array();
  for (const auto& m : assets.models) {
    json owners = json::array();
    for (const auto& o : m.owners) owners.push_back(o.str());
    json jm{{"asset", m.asset}, {"kind", std::string(kind_name(m.kind))}, {"owners", owners}};
    if (m.kind == AssetKind::Divisible) {
      jm["kappa"] = m.kappa;
      jm["invariant"] = render(conservation_invariant(m));
    } else {
      jm["invariant"] = render(exclusivity_invariant(m));
    }
    j["assets"].push_back(jm);
  }
  j["payments"] = json::array();
  for (const auto& f : ast.clauses)
    for (const auto& k : f.asset_params)
      if (!assets.asset_of(f.name, k)) j["payments"].push_back({{"clause", f.name}, {"param", k}});

  j["clauses"] = json::array();
  for (const auto& f : ast.clauses) j["clauses"].push_back(spec_json(derive_clause_spec(ast, f, assets)));
  j["events"] = json::array();
  for (const auto* e : ast.events()) j["events"].push_back(spec_json(derive_clause_spec(ast, *e, assets)));

  json trans = json::array();
  for (const auto& t : a.transitions) trans.push_back({{"from", t.from}, {"label", t.label.str()}, {"to", t.to}});
  json cyc = json::array();
  for (const auto& c : cycles.cycles) cyc.push_back(describe(a, c));
  j["automaton"] = {{"states", a.states},
                    {"initial", a.initial},
                    {"transitions", trans},
                    {"cycles", cyc},
                    {"disjoint", cycles.disjoint},
                    {"unreachable", unreachable_states(a)}};
  if (cycles.witness)
    j["automaton"]["witness"] = {describe(a, cycles.witness->first), describe(a, cycles.witness->second)};
  return j.dump(2);
}

}  // namespace stipula
