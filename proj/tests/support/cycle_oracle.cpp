#include "cycle_oracle.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace stipula::testing {

namespace {

using Path = std::vector<std::size_t>;

Path rotate_min(Path c) {
  auto it = std::min_element(c.begin(), c.end());
  std::rotate(c.begin(), it, c.end());
  return c;
}

struct Search {
  const Automaton& a;
  std::map<std::string, std::vector<std::size_t>> out;
  std::set<Path> found;

  void from(const std::string& start, const std::string& here, std::set<std::string>& seen, Path& path) {
    for (std::size_t t : out[here]) {
      const std::string& to = a.transitions[t].to;
      path.push_back(t);
      if (to == start) {
        found.insert(rotate_min(path));
      } else if (!seen.count(to)) {
        seen.insert(to);
        from(start, to, seen, path);
        seen.erase(to);
      }
      path.pop_back();
    }
  }
};

}  // namespace

OracleCycles dfs_simple_cycles(const Automaton& a) {
  Search s{a, {}, {}};
  for (std::size_t i = 0; i < a.transitions.size(); ++i) s.out[a.transitions[i].from].push_back(i);

  std::set<std::string> reach{a.initial};
  std::vector<std::string> stack{a.initial};
  while (!stack.empty()) {
    std::string q = stack.back();
    stack.pop_back();
    for (std::size_t t : s.out[q])
      if (reach.insert(a.transitions[t].to).second) stack.push_back(a.transitions[t].to);
  }

  for (const auto& q : reach) {
    std::set<std::string> seen{q};
    Path path;
    s.from(q, q, seen, path);
  }

  OracleCycles r;
  r.cycles = s.found;
  std::vector<std::set<std::string>> states;
  for (const auto& c : r.cycles) {
    std::set<std::string> st;
    for (std::size_t t : c) st.insert(a.transitions[t].from);
    states.push_back(st);
  }
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i + 1; j < states.size(); ++j)
      for (const auto& q : states[i])
        if (states[j].count(q)) r.disjoint = false;
  return r;
}

}  // namespace stipula::testing
