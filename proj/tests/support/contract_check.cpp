#include "contract_check.hpp"

#include <algorithm>

namespace stipula::testing {

namespace {

bool all_hold(const std::vector<Condition>& cs, const EvalEnv& env) {
  for (const auto& c : cs)
    if (!holds(c, env)) return false;
  return true;
}

std::string describe_args(const Bindings& args) {
  std::string out;
  for (const auto& [k, v] : args) out += (out.empty() ? "" : ", ") + k + "=" + value_str(v);
  return out;
}

}  // namespace

ContractCheck check_method_contract(const Interpreter& in, const MethodRunner& runner, const TargetMethod& m,
                                    Rng& rng, std::size_t want, std::size_t max_attempts) {
  ContractCheck r;
  r.method = m.name;
  while (r.accepted < want && r.attempts < max_attempts && r.violations.size() < 5) {
    ++r.attempts;
    // Alternate wide and narrow value ranges; narrow draws make conjunctions
    // of equalities likely enough to sample.
    const bool narrow = r.attempts % 2 == 0;
    RuntimeState pre = runner.prepare(m, random_state(in, rng, "", narrow ? 2 : 8));
    auto hints = value_hints(pre);
    Bindings args;
    for (const auto& p : m.params)
      args[p.name] = p.name == "counter" ? Value(uniform(rng, 0, 4)) : random_value(rng, p.type, hints, narrow ? 3 : 12);

    Store before = pre.store(in.assets());
    try {
      if (!all_hold(m.requires_, EvalEnv{&before, &before, args})) continue;
    } catch (const EvalError&) {
      continue;  // the requires are undefined here, e.g. a zero divisor
    }
    ++r.accepted;

    RuntimeState post;
    try {
      post = runner.execute(m, pre, args);
    } catch (const Error& e) {
      r.violations.push_back(m.name + "(" + describe_args(args) + "): interpreter rejected a run: " + e.what());
      continue;
    }
    Store after = post.store(in.assets());
    EvalEnv env{&before, &after, args};
    for (const auto& c : m.ensures) {
      bool ok = false;
      try {
        ok = holds(c, env);
      } catch (const EvalError&) {
      }
      if (!ok) r.violations.push_back(m.name + "(" + describe_args(args) + "): ensures fails: " + render(c));
    }
    for (const auto& l : changed_locations(before, after))
      if (std::find(m.frame.begin(), m.frame.end(), l) == m.frame.end())
        r.violations.push_back(m.name + "(" + describe_args(args) + "): writes " + l.str() + " outside its frame");
  }
  return r;
}

}  // namespace stipula::testing
