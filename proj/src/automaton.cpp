#include "stipula/automaton.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace stipula {

std::string TransitionLabel::str() const {
  return kind == Kind::Function ? name : "ev" + std::to_string(event_index);
}

std::vector<std::size_t> Automaton::outgoing(const std::string& state) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < transitions.size(); ++i)
    if (transitions[i].from == state) out.push_back(i);
  return out;
}

bool Automaton::has_state(const std::string& s) const {
  return std::find(states.begin(), states.end(), s) != states.end();
}

Automaton build_automaton(const ContractAst& ast) {
  Automaton a;
  a.name = ast.name;
  a.initial = ast.agreement.initial_state;
  a.states.push_back(a.initial);
  auto add_state = [&](const std::string& s) {
    if (!a.has_state(s)) a.states.push_back(s);
  };
  auto add = [&](Transition t) {
    add_state(t.from);
    add_state(t.to);
    a.transitions.push_back(std::move(t));
  };
  for (const auto& f : ast.clauses) {
    add({f.source_state, TransitionLabel::function(f.name), f.target_state});
    for (const auto& e : f.events) add({e.trigger_state, TransitionLabel::event(e.event_index), e.target_state});
  }
  return a;
}

// ---------------------------------------------------------------------------

std::vector<std::string> trace_states(const Automaton& a, const Trace& t) {
  std::vector<std::string> out;
  if (t.empty()) return out;
  out.push_back(a.transitions[t.front()].from);
  for (std::size_t i : t) out.push_back(a.transitions[i].to);
  if (out.size() > 1 && out.back() == out.front()) out.pop_back();
  return out;
}

bool is_cycle(const Automaton& a, const Trace& t) {
  return !t.empty() && a.transitions[t.back()].to == a.transitions[t.front()].from;
}

Trace canonical_rotation(const Trace& cycle) {
  if (cycle.empty()) return cycle;
  auto it = std::min_element(cycle.begin(), cycle.end());
  Trace out(it, cycle.end());
  out.insert(out.end(), cycle.begin(), it);
  return out;
}

std::string describe(const Automaton& a, const Trace& t) {
  if (t.empty()) return "<empty>";
  std::string out = a.transitions[t.front()].from;
  for (std::size_t i : t) out += " -" + a.transitions[i].label.str() + "-> " + a.transitions[i].to;
  return out;
}

namespace {

using TraceSet = std::set<Trace>;

const std::string& last_state(const Automaton& a, const Trace& s) { return a.transitions[s.back()].to; }

bool visits(const Automaton& a, const Trace& s, const std::string& q) {
  if (a.transitions[s.front()].from == q) return true;
  for (std::size_t i : s)
    if (a.transitions[i].to == q) return true;
  return false;
}

// sigma (+) t
Trace extend(const Automaton& a, const Trace& s, std::size_t t) {
  const Transition& tr = a.transitions[t];
  if (tr.from != last_state(a, s) || visits(a, s, tr.to)) return s;
  Trace out = s;
  out.push_back(t);
  return out;
}

}  // namespace

CycleReport enumerate_cycles(const Automaton& a) {
  CycleReport r;
  const auto& ts = a.transitions;

  TraceSet A, C;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i].from != a.initial) continue;
    if (ts[i].to != a.initial) A.insert({i});
    else C.insert({i});
  }
  r.a_history.emplace_back(A.begin(), A.end());
  r.c_history.emplace_back(C.begin(), C.end());

  for (;;) {
    TraceSet nextA;
    for (const auto& s : A)
      for (std::size_t t = 0; t < ts.size(); ++t) nextA.insert(extend(a, s, t));

    TraceSet nextC = C;
    for (const auto& s : A) {
      const std::string& q = last_state(a, s);
      for (std::size_t t = 0; t < ts.size(); ++t) {
        if (ts[t].from != q) continue;
        if (ts[t].to == q) {
          nextC.insert({t});
          continue;
        }
        // suffix sigma' of s starting at t.to, closed by t
        for (std::size_t j = 0; j < s.size(); ++j) {
          if (ts[s[j]].from != ts[t].to) continue;
          Trace cyc(s.begin() + static_cast<std::ptrdiff_t>(j), s.end());
          cyc.push_back(t);
          nextC.insert(cyc);
        }
      }
    }

    if (nextA == A && nextC == C) break;
    A = std::move(nextA);
    C = std::move(nextC);
    ++r.iterations;
    r.a_history.emplace_back(A.begin(), A.end());
    r.c_history.emplace_back(C.begin(), C.end());
  }

  std::set<Trace> unique;
  for (const auto& c : C) unique.insert(canonical_rotation(c));
  r.cycles.assign(unique.begin(), unique.end());

  for (std::size_t i = 0; i < r.cycles.size() && r.disjoint; ++i) {
    auto si = trace_states(a, r.cycles[i]);
    std::set<std::string> set_i(si.begin(), si.end());
    for (std::size_t j = i + 1; j < r.cycles.size(); ++j) {
      auto sj = trace_states(a, r.cycles[j]);
      bool shared = std::any_of(sj.begin(), sj.end(), [&](const std::string& s) { return set_i.count(s) > 0; });
      if (shared) {
        r.disjoint = false;
        r.witness = std::make_pair(r.cycles[i], r.cycles[j]);
        break;
      }
    }
  }
  return r;
}

std::vector<std::string> unreachable_states(const Automaton& a) {
  std::set<std::string> seen{a.initial};
  std::deque<std::string> work{a.initial};
  while (!work.empty()) {
    std::string q = work.front();
    work.pop_front();
    for (std::size_t i : a.outgoing(q))
      if (seen.insert(a.transitions[i].to).second) work.push_back(a.transitions[i].to);
  }
  std::vector<std::string> out;
  for (const auto& s : a.states)
    if (!seen.count(s)) out.push_back(s);
  return out;
}

std::string to_dot(const Automaton& a) {
  std::ostringstream os;
  os << "digraph " << (a.name.empty() ? "G" : a.name) << " {\n";
  std::vector<std::string> nodes = a.states;
  std::sort(nodes.begin(), nodes.end());
  for (const auto& s : nodes) {
    os << "  " << s;
    if (s == a.initial) os << " [style=bold]";
    os << ";\n";
  }
  std::vector<std::size_t> order(a.transitions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a.transitions[x].from < a.transitions[y].from;
  });
  for (std::size_t i : order) {
    const auto& t = a.transitions[i];
    os << "  " << t.from << " -> " << t.to << " [label=\"" << t.label.str() << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace stipula
