#pragma once

#include <cstdint>
#include <string>

#include "cowsettle/asset.hpp"
#include "cowsettle/decimal.hpp"

namespace cowsettle {

/// One trader intent: give `give_qty` of `give_asset` for `want_qty` of `want_asset`.
///
/// `min_rate` is a factor on the quoted want quantity: the trader accepts a
/// realized rate of at least `min_rate * want_qty / give_qty`. The default of 1
/// makes the quote itself the floor.
///
/// `fill_fraction` is 1 for orders as submitted. Scaled copies produced for a
/// partial fill keep the source id and record the fraction of the source order
/// they represent.
class SwapOrder {
 public:
  SwapOrder(std::string id, AssetId give_asset, Decimal give_qty, AssetId want_asset,
            Decimal want_qty, Rational min_rate = 1, std::int64_t timestamp = 0,
            bool synthetic = false);

  const std::string& id() const noexcept { return id_; }
  const AssetId& give_asset() const noexcept { return give_asset_; }
  const AssetId& want_asset() const noexcept { return want_asset_; }
  Decimal give_qty() const noexcept { return give_qty_; }
  Decimal want_qty() const noexcept { return want_qty_; }
  const Rational& min_rate() const noexcept { return min_rate_; }
  std::int64_t timestamp() const noexcept { return timestamp_; }
  bool synthetic() const noexcept { return synthetic_; }
  const Rational& fill_fraction() const noexcept { return fill_fraction_; }

  /// Copy of this order with new quantities, annotated with the fill fraction.
  SwapOrder scaled(Decimal give_qty, Decimal want_qty, Rational fill_fraction) const;

  /// Same order with assets replaced by equal (case-insensitive) ids, used to
  /// adopt the price table's spelling.
  SwapOrder with_assets(AssetId give_asset, AssetId want_asset) const;

 private:
  std::string id_;
  AssetId give_asset_;
  AssetId want_asset_;
  Decimal give_qty_;
  Decimal want_qty_;
  Rational min_rate_;
  std::int64_t timestamp_;
  bool synthetic_;
  Rational fill_fraction_ = 1;
};

}  // namespace cowsettle
