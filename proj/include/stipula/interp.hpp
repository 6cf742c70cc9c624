#pragma once

// Reference interpreter: agreement, invocation, pending events, ticks.
// Every operation returns a fresh RuntimeState; inputs are never mutated.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stipula/analysis.hpp"
#include "stipula/ast.hpp"
#include "stipula/term.hpp"

namespace stipula {

struct PendingEvent {
  int event_index = 0;
  std::int64_t remaining = 0;
  std::string trigger_state;
  std::string target_state;

  bool operator==(const PendingEvent&) const = default;
};

struct Message {
  std::string party;
  Value value;

  bool operator==(const Message&) const = default;
};

/// A move of an asset parameter that never enters a declared asset.
struct Payment {
  std::string from;  // calling party
  std::string to;    // receiving party
  std::string param;
  std::int64_t amount = 0;

  bool operator==(const Payment&) const = default;
};

struct RuntimeState {
  std::string control;
  std::map<std::string, Value> fields;
  /// Owner-qualified asset slots. Indivisible slots hold 0 or 1.
  std::map<Location, std::int64_t> assets;
  std::vector<PendingEvent> pending;
  std::vector<Message> messages;
  std::vector<Payment> payments;
  std::int64_t clock = 0;

  bool operator==(const RuntimeState&) const = default;

  [[nodiscard]] std::int64_t asset(const Location& l) const;
  /// Fields and asset slots as a term store; indivisible slots become booleans.
  [[nodiscard]] Store store(const AssetAnalysis& assets) const;
};

using ValueArgs = std::map<std::string, Value>;
using AssetArgs = std::map<std::string, std::int64_t>;

class Interpreter {
 public:
  /// Expects a canonical AST.
  explicit Interpreter(ContractAst ast);

  [[nodiscard]] const ContractAst& ast() const { return ast_; }
  [[nodiscard]] const AssetAnalysis& assets() const { return assets_; }

  /// `endowments` are party slots; contract slots start at zero. Each
  /// indivisible asset must end up with exactly one holder.
  [[nodiscard]] RuntimeState init(const std::map<std::string, Value>& field_inits,
                                  const std::map<Location, std::int64_t>& endowments) const;
  [[nodiscard]] RuntimeState invoke(const RuntimeState& s, std::string_view clause, const ValueArgs& value_args,
                                    const AssetArgs& asset_args) const;
  [[nodiscard]] RuntimeState tick(const RuntimeState& s, std::int64_t n = 1) const;
  [[nodiscard]] RuntimeState fire_event(const RuntimeState& s, int event_index) const;

  /// Indices of pending events that may fire now, ascending.
  [[nodiscard]] std::vector<int> fireable(const RuntimeState& s) const;

  [[nodiscard]] bool conserved(const RuntimeState& before, const RuntimeState& after) const;
  [[nodiscard]] bool exclusive(const RuntimeState& s) const;

 private:
  ContractAst ast_;
  AssetAnalysis assets_;

  struct Frame;
  void block(RuntimeState& s, Frame& fr, const Block& b) const;
  void statement(RuntimeState& s, Frame& fr, const Statement& st) const;
  void transfer(RuntimeState& s, Frame& fr, const std::string& from, const std::string& to, const Expr* amount,
                SourcePos pos) const;
  Value eval(const RuntimeState& s, const Frame& fr, const Expr& e) const;
};

struct InitStep {
  std::map<std::string, Value> fields;
  std::map<Location, std::int64_t> endowments;
};
struct InvokeStep {
  std::string clause;
  ValueArgs value_args;
  AssetArgs asset_args;
};
struct TickStep {
  std::int64_t n = 1;
};
struct FireStep {
  int event_index = 0;
};
using TraceStep = std::variant<InitStep, InvokeStep, TickStep, FireStep>;

/// Folds the steps left to right. The first step must be an init. Failures
/// are rethrown as TraceError carrying the zero-based step index.
[[nodiscard]] RuntimeState run_trace(const ContractAst& ast, const std::vector<TraceStep>& trace);

/// Trace files: a JSON array of steps (see docs/formats.md). Throws
/// ArgumentError on malformed input.
[[nodiscard]] std::vector<TraceStep> parse_trace(std::string_view json_text);
/// Runtime state as JSON text (2-space indent).
[[nodiscard]] std::string state_to_json(const RuntimeState& s);

}  // namespace stipula
