#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cowsettle/asset.hpp"
#include "cowsettle/decimal.hpp"
#include "cowsettle/price_table.hpp"
#include "cowsettle/swap_order.hpp"

namespace cowsettle {

/// Signed asset flows of a set of orders through per-asset vaults.
///
/// Row i is order i; column j is the vault of `assets[j]`. A positive entry is
/// the vault receiving that quantity from the trader, a negative one is the
/// vault paying out. Each order row holds `+give_qty` in its give column and
/// `-want_qty` in its want column.
struct TransferMatrix {
  std::vector<AssetId> assets;
  std::vector<std::vector<Decimal>> rows;
  std::vector<std::string> row_order_ids;

  std::size_t row_count() const noexcept { return rows.size(); }
  std::size_t column_count() const noexcept { return assets.size(); }
  std::size_t column_of(const AssetId& asset) const;
};

/// USD image of a transfer matrix (entry-wise product with the column price).
struct DollarMatrix {
  std::vector<AssetId> assets;
  std::vector<std::vector<Rational>> rows;
  std::vector<std::string> row_order_ids;

  std::size_t row_count() const noexcept { return rows.size(); }
  std::size_t column_count() const noexcept { return assets.size(); }

  /// Row sums; zero for a value-neutral order.
  std::vector<Rational> row_sums() const;

  /// New matrix with `row` appended as the last row.
  DollarMatrix with_row(std::vector<Rational> row, std::string order_id) const;
};

/// Per-vault USD net flow (column sums of a dollar matrix).
struct ImbalanceVector {
  std::vector<AssetId> assets;
  std::vector<Rational> values;

  bool is_zero() const;
  /// True when every component is within `tolerance` of zero.
  bool is_zero_within(const Rational& tolerance) const;
};

/// Columns are the assets in order of first appearance along the order
/// sequence (give asset before want asset within an order).
TransferMatrix build_transfer_matrix(std::span<const SwapOrder> orders);

DollarMatrix to_dollars(const TransferMatrix& m, const PriceTable& table);

ImbalanceVector imbalance(const DollarMatrix& v);

/// Column sums of the asset matrix itself, for diagnostics. Units differ per
/// column, so this is not a conservation check in USD.
std::vector<Decimal> asset_column_sums(const TransferMatrix& m);

/// Inverse of `to_dollars`: entry-wise division by the column price, rounded
/// half-even to 18 fractional digits (exact whenever `v` came from a matrix of
/// decimals).
TransferMatrix recover_orders(const DollarMatrix& v, const PriceTable& table);

struct MinDollarLeg {
  Rational usd;
  std::size_t leg_index;
};

/// Smallest give-side USD value across legs; ties go to the lowest leg index.
MinDollarLeg min_dollar_leg(std::span<const SwapOrder> legs, const PriceTable& table);

struct ScaledCycle {
  std::vector<SwapOrder> legs;
  /// Some quantity needed rounding to 18 fractional digits.
  bool rounded = false;
};

/// Re-sizes every leg so its give and want sides are both worth `target_usd`:
/// quantity = target_usd / price, rounded half-even. Ids are kept and each leg
/// records `target_usd / give_usd` as its fill fraction.
ScaledCycle scale_cycle(std::span<const SwapOrder> legs, const Rational& target_usd,
                        const PriceTable& table);

}  // namespace cowsettle
