#include "stipula/parser.hpp"

namespace stipula {

namespace {

Block canon(const Block& b) {
  Block out;
  out.reserve(b.size());
  for (const auto& s : b) {
    Statement c = s;
    if (const auto* m = std::get_if<AssetMove>(&s.node)) {
      const std::string* amount = as_name(*m->amount);
      if (amount && *amount == m->from) c.node = AssetDrain{m->from, m->to};
    } else if (const auto* k = std::get_if<Conditional>(&s.node)) {
      Conditional n;
      n.cond = k->cond;
      n.then_branch = canon(k->then_branch);
      n.else_branch = k->else_branch ? canon(*k->else_branch) : Block{};
      c.node = std::move(n);
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

ContractAst canonicalize(const ContractAst& ast) {
  ContractAst out = ast;
  for (auto& f : out.clauses) {
    f.body = canon(f.body);
    for (auto& e : f.events) e.body = canon(e.body);
  }
  return out;
}

}  // namespace stipula
