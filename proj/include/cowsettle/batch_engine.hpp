#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cowsettle/bridging.hpp"
#include "cowsettle/cow_cycle.hpp"
#include "cowsettle/feasibility.hpp"
#include "cowsettle/price_table.hpp"
#include "cowsettle/swap_order.hpp"
#include "cowsettle/vault.hpp"

namespace cowsettle {

struct BatchConfig {
  std::size_t batch_size = 10;
  std::chrono::seconds expiry_window{240};
  /// Maximum cycle length in orders (bridge included).
  int k_max = 4;
  FeasibilityMode feasibility_mode = FeasibilityMode::floor_inequality;
  bool bridging_enabled = false;
  bool allow_partial_fills = true;
  /// Empty means every asset of the batch.
  std::optional<std::vector<AssetId>> operator_assets;
  /// Largest bridge notional the bridging actor will take; unset is unbounded.
  std::optional<Rational> max_bridge_usd;
  /// Tolerance for checks that follow a rounding division.
  Rational epsilon = decimal_epsilon(9);
  /// Accept cycles whose realized rate product deviates from 1 beyond epsilon.
  bool allow_rate_surplus = false;
  std::string bridge_executor = "operator";
  LiquidityCheck liquidity_check = LiquidityCheck::worst_case;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

enum class OperatorStatus { fully_feasible, completed_via_bridging, no_cow_cycle, isolated_asset };

std::string_view to_string(OperatorStatus status);

/// One cycle found during a batch run, complete or completed by a bridge.
struct Discovery {
  CowCycle cycle;
  std::optional<BridgingOrder> bridge;
  AssetId operator_asset;
  bool selected = false;
  bool settled = false;
  /// Why a selected or feasible cycle did not settle, if it did not.
  std::string settlement_note;
};

struct OperatorOutcome {
  AssetId asset;
  OperatorStatus status;
  /// Indices into BatchReport::discoveries.
  std::vector<std::size_t> discoveries;
  /// Trace lines explaining the status ("Partial sequence found: ...").
  std::vector<std::string> notes;
};

struct BatchReport {
  /// Batch row labels, in batch order.
  std::vector<std::size_t> rows;
  bool all_operators = true;
  int k_max = 4;
  bool bridging_enabled = false;
  bool allow_partial_fills = true;
  FeasibilityMode feasibility_mode = FeasibilityMode::floor_inequality;

  std::vector<OperatorOutcome> operators;
  std::vector<Discovery> discoveries;
  /// Rows settled in complete cycles, in bridged cycles, or not at all.
  std::vector<std::size_t> settled_rows;
  std::vector<std::size_t> bridged_rows;
  std::vector<std::size_t> unmatched_rows;

  VaultLedger ledger_after;

  std::size_t bridge_count() const;
};

/// Greedy chunking in timestamp order: a batch closes at `batch_size` orders or
/// when the next order is more than `expiry_window` younger than the batch's
/// oldest. Returns indices into `orders`, ascending within each batch.
std::vector<std::vector<std::size_t>> form_batches(std::span<const SwapOrder> orders,
                                                   const BatchConfig& config);

/// Runs discovery, selection and settlement on one batch.
///
/// `row_labels` names each order in reports (defaults to 0..n-1). Synthetic
/// orders in the input are ignored as cycle legs.
BatchReport run_batch(std::span<const SwapOrder> batch, const BatchConfig& config,
                      const PriceTable& table, const VaultLedger& ledger,
                      std::span<const std::size_t> row_labels = {});

/// Ledger with each vault holding the total quantity the batch could ask it to
/// pay out, so settlement is never liquidity-bound unless a caller says so.
VaultLedger provision_vaults(std::span<const SwapOrder> batch);

}  // namespace cowsettle
