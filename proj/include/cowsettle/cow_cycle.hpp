#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cowsettle/decimal.hpp"
#include "cowsettle/feasibility.hpp"
#include "cowsettle/swap_order.hpp"

namespace cowsettle {

struct CycleLeg {
  /// The leg as executed (scaled to the cycle's fill).
  SwapOrder order;
  /// Batch row of the source order; empty for synthetic bridging legs.
  std::optional<std::size_t> row;
  Rational give_usd;
};

/// A closed sequence of legs sized to a common USD fill.
struct CowCycle {
  std::vector<CycleLeg> legs;
  /// USD value moved by every leg.
  Rational fill_usd;
  bool bridged = false;
  /// Some leg quantity was rounded to 18 fractional digits.
  bool rounded = false;
  std::optional<FeasibilityVerdict> verdict;

  std::vector<SwapOrder> orders() const;
  /// Give quantity per leg (the q-vector).
  std::vector<Decimal> fills() const;
  /// Sum of the give-side USD values over all legs, bridge included.
  Rational volume_usd() const;
  /// Closed asset sequence, first asset repeated at the end.
  std::vector<AssetId> asset_path() const;
  /// Batch rows of the non-synthetic legs, in leg order.
  std::vector<std::size_t> rows() const;
};

}  // namespace cowsettle
