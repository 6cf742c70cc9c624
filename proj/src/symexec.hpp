#pragma once

// Symbolic execution of clause bodies over target-program locations.
// Shared by clause specifications and scenario contracts.

#include <map>
#include <string>
#include <vector>

#include "stipula/analysis.hpp"

namespace stipula::detail {

/// Preconditions collected while executing, grouped in the order they are
/// emitted: parameter availability, division safety, guard, body.
struct Obligations {
  std::vector<Condition> availability;
  std::vector<Condition> division;
  std::vector<Condition> guard;
  std::vector<Condition> body;

  /// `path ==> c`, simplified; trivially true conditions are dropped.
  static void add(std::vector<Condition>& group, const TermPtr& path, const Condition& c);
  /// All groups in order, syntactic duplicates removed.
  [[nodiscard]] std::vector<Condition> ordered() const;
};

struct SymState {
  std::map<Location, TermPtr> vals;  // absent means unchanged: \old(L)
  std::vector<Location> writes;      // first-write order

  [[nodiscard]] TermPtr get(const Location& l) const;
  void set(const Location& l, TermPtr v);
};

/// Ensures from a final state: one conjunct per written location, then
/// `L == \old(L)` for untouched owners of touched divisible assets.
[[nodiscard]] std::vector<Condition> effects(const SymState& st, const AssetAnalysis& assets);

class SymExec {
 public:
  SymExec(const ContractAst& ast, const AssetAnalysis& assets) : ast_(ast), assets_(assets) {}

  /// Run a function clause with the given initial parameter terms.
  void call(SymState& st, const FunctionClause& f, const std::map<std::string, TermPtr>& args,
            const TermPtr& path, Obligations& ob) const;
  /// Run an event body.
  void fire(SymState& st, const EventClause& e, const TermPtr& path, Obligations& ob) const;

  /// Slot of `asset` owned by `owner` (a party name, or the contract).
  [[nodiscard]] Location slot(const std::string& owner, const std::string& asset) const;

 private:
  const ContractAst& ast_;
  const AssetAnalysis& assets_;

  struct Frame {
    const FunctionClause* clause = nullptr;
    std::map<std::string, TermPtr> params;  // current values
  };

  void block(SymState& st, Frame& fr, const Block& b, const TermPtr& path, Obligations& ob) const;
  void statement(SymState& st, Frame& fr, const Statement& s, const TermPtr& path, Obligations& ob) const;
  void transfer(SymState& st, Frame& fr, const std::string& from, const std::string& to, const Expr* amount,
                const TermPtr& path, Obligations& ob, SourcePos pos) const;
  TermPtr expr(const SymState& st, const Frame& fr, const Expr& e, const TermPtr& path, Obligations& ob) const;
};

}  // namespace stipula::detail
