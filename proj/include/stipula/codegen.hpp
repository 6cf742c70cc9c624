#pragma once

// Lowering to an annotated Java compilation unit and the optional bridge to
// an external deductive verifier.

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "stipula/analysis.hpp"
#include "stipula/scenario.hpp"

namespace stipula {

struct StaticField {
  std::string owner;  // contract or party class
  std::string name;
  std::string type;         // int | boolean | String
  std::string initializer;  // empty: none
  bool ghost = false;
};

struct TargetStmt {
  enum class Kind { Assign, Local, Increment, Call, If, Return, Comment, Loop };
  Kind kind = Kind::Comment;
  std::optional<Location> target;  // Assign to a static
  std::string name;                // local (Assign/Local/Increment), callee, or comment text
  TermPtr value;                   // assigned value, If/Loop condition
  std::vector<std::string> args;   // Call
  std::vector<TargetStmt> body;    // If then-branch, Loop body
  std::vector<TargetStmt> else_body;
  // Loop annotations.
  std::vector<Condition> invariants;
  TermPtr variant;
  std::vector<std::string> loop_frame;

  static TargetStmt assign(Location l, TermPtr v);
  static TargetStmt assign_local(std::string n, TermPtr v);
  static TargetStmt local(std::string n, TermPtr v);
  static TargetStmt increment(std::string n);
  static TargetStmt call(std::string callee, std::vector<std::string> args);
  static TargetStmt if_(TermPtr c, std::vector<TargetStmt> then_b, std::vector<TargetStmt> else_b = {});
  static TargetStmt return_();
  static TargetStmt comment(std::string text);
};

struct TargetMethod {
  enum class Kind { Clause, Event, LoopHelper, Scenario };
  Kind kind = Kind::Clause;
  std::string name;
  std::vector<MethodParam> params;
  std::vector<Condition> requires_;
  std::vector<Condition> ensures;
  std::vector<Location> frame;
  std::vector<TargetStmt> body;
};

struct PartyClass {
  std::string name;
  std::vector<StaticField> statics;
};

struct TargetUnit {
  std::string class_name;
  /// Prefix the class with the mathematical-integer modifiers.
  bool bigint_math = true;
  std::vector<StaticField> statics;
  std::vector<Condition> invariants;
  std::vector<TargetMethod> methods;
  std::vector<PartyClass> parties;

  [[nodiscard]] const TargetMethod* find(const std::string& name) const;
};

struct LowerOptions {
  bool bigint_math = true;
};

/// Expects a canonical AST; plans come from enumerate_scenarios.
[[nodiscard]] TargetUnit lower(const ContractAst& ast, const AssetAnalysis& assets,
                               const std::vector<ScenarioPlan>& plans, const LowerOptions& opts = {});
/// Full pipeline: assets, automaton, cycles, plans, lowering.
[[nodiscard]] TargetUnit translate(const ContractAst& ast, const LowerOptions& opts = {});

/// Deterministic Java text.
[[nodiscard]] std::string render(const TargetUnit& unit);

struct ObligationResult {
  std::string name;
  bool closed = false;
};

struct VerifierReport {
  enum class Status { Skipped, Completed };
  Status status = Status::Skipped;
  int exit_code = 0;
  std::vector<ObligationResult> obligations;
  std::string output;

  [[nodiscard]] bool all_closed() const;
  [[nodiscard]] std::size_t open_count() const;
};

/// Runs `sh -c "<prover_cmd> <path>"`. An empty command yields a skipped
/// report. The prover's output lines `obligation <name>: closed|open` become
/// obligations; without such lines the exit status decides a single
/// obligation `all`. Throws ProverNotFound (exit 127) and ProverTimeout.
[[nodiscard]] VerifierReport verify_external(const std::string& path, const std::string& prover_cmd,
                                             std::chrono::seconds timeout = std::chrono::seconds(300));

[[nodiscard]] std::string report_to_json(const VerifierReport& r);

}  // namespace stipula
