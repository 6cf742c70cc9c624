#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stipula/ast.hpp"
#include "stipula/term.hpp"

namespace stipula {

enum class AssetKind { Divisible, Indivisible };

[[nodiscard]] std::string_view kind_name(AssetKind k);

struct AssetModel {
  std::string asset;
  AssetKind kind = AssetKind::Indivisible;
  /// The contract's slot first, then one slot per party in declaration order.
  std::vector<Location> owners;
  /// Name of the symbolic total (divisible only), e.g. `kappa_flour`.
  std::string kappa;

  [[nodiscard]] const Location& contract_slot() const { return owners.front(); }
};

/// Asset models plus the asset each asset parameter carries.
struct AssetAnalysis {
  std::vector<AssetModel> models;
  /// (clause, parameter) -> declared asset. Parameters missing here are
  /// external payments: moved only to parties, never into a declared asset.
  std::map<std::pair<std::string, std::string>, std::string> param_asset;

  [[nodiscard]] const AssetModel* find(const std::string& asset) const;
  [[nodiscard]] const AssetModel& at(const std::string& asset) const;
  [[nodiscard]] std::optional<std::string> asset_of(const std::string& clause, const std::string& param) const;
  [[nodiscard]] bool is_divisible(const std::string& asset) const;
};

/// Expects a canonical AST. Throws ConflictError when a parameter feeds two
/// assets or a move connects two different declared assets.
[[nodiscard]] AssetAnalysis analyze_assets(const ContractAst& ast);
[[nodiscard]] std::vector<AssetModel> classify_assets(const ContractAst& ast);

/// Exactly one owner holds the unit. KindError on divisible assets.
[[nodiscard]] Condition exclusivity_invariant(const AssetModel& m);
/// Sum over owners equals the symbolic total. KindError on indivisible assets.
[[nodiscard]] Condition conservation_invariant(const AssetModel& m);

struct MethodParam {
  std::string name;
  ValueType type = ValueType::Int;
};

/// Pre/post/frame of one clause or event, as target-language conditions.
/// Requires read the pre state through `\old`-free terms: render them with
/// RenderOptions::old_as_current.
struct ClauseSpec {
  std::string method;  // clause name or event<N>
  bool is_event = false;
  int event_index = 0;
  std::string party;  // empty for events
  std::string source_state;
  std::string target_state;
  std::vector<MethodParam> params;
  std::vector<Condition> requires_;
  std::vector<Condition> ensures;
  std::vector<Location> frame;  // write order
};

[[nodiscard]] ClauseSpec derive_clause_spec(const ContractAst& ast, const FunctionClause& clause,
                                            const AssetAnalysis& assets);
[[nodiscard]] ClauseSpec derive_clause_spec(const ContractAst& ast, const EventClause& event,
                                            const AssetAnalysis& assets);

/// Every location of the target program: fields, then asset slots.
[[nodiscard]] std::vector<Location> all_locations(const ContractAst& ast, const AssetAnalysis& assets);

}  // namespace stipula
