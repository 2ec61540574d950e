#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "cowsettle/cow_cycle.hpp"
#include "cowsettle/price_table.hpp"
#include "cowsettle/transfer_matrix.hpp"

namespace cowsettle {

struct BridgeOptions {
  /// Components of N with |N_j| <= epsilon count as zero.
  Rational epsilon = decimal_epsilon(9);
  std::string order_id = "bridge";
  /// Account that must execute the bridge (an LP or auxiliary actor).
  std::string executor = "operator";
  std::int64_t timestamp = 0;
  /// Per-leg USD fill for close_chain; defaults to the chain's minimum dollar leg.
  std::optional<Rational> target_usd;
};

/// Synthetic order whose dollar flow is -N of the chain it closes.
struct BridgingOrder {
  SwapOrder order;
  ImbalanceVector provenance;
  /// USD the bridge contributes (give side).
  Rational notional_usd;
  std::string executor;
};

/// Builds the single order with flow -N: it gives the asset whose column is in
/// deficit (N_j < 0) and wants the asset in surplus (N_j > 0), with quantities
/// |N_j| / p(L_j).
///
/// Throws BridgeError when N is zero (no bridge needed), when more than one
/// surplus or deficit component remains (not closable by one order), or when
/// the two components do not cancel within epsilon.
BridgingOrder synthesize_bridge(const ImbalanceVector& n, const PriceTable& table,
                                const BridgeOptions& options = {});

struct ClosedChain {
  CowCycle cycle;
  BridgingOrder bridge;
  /// V' : the scaled chain's dollar matrix with the bridge row appended.
  DollarMatrix dollars;
};

/// Scales an open chain (B_j == A_{j+1}, last want != first give) to its
/// minimum dollar leg (or `options.target_usd`), computes the imbalance and
/// appends the bridging order. The resulting V' has zero column sums.
ClosedChain close_chain(std::span<const SwapOrder> chain, const PriceTable& table,
                        const BridgeOptions& options = {});

}  // namespace cowsettle
