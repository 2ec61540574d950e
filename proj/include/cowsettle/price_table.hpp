#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cowsettle/asset.hpp"
#include "cowsettle/decimal.hpp"
#include "cowsettle/swap_order.hpp"

namespace cowsettle {

/// Static oracle: asset -> strictly positive USD price.
///
/// Entries keep the order in which they were declared. Looking up an asset that
/// is not in the table throws; there is no default price.
class PriceTable {
 public:
  PriceTable() = default;
  PriceTable(std::vector<std::pair<AssetId, Decimal>> entries, std::string source_label = {});

  /// Parses `SYMBOL=DECIMAL` lines. Blank lines and `#` comments are ignored.
  static PriceTable parse(std::istream& in, std::string source_label = {});

  const Decimal& price(const AssetId& asset) const;
  Rational price_rational(const AssetId& asset) const { return price(asset).to_rational(); }
  bool contains(const AssetId& asset) const { return index_.contains(asset); }

  /// The id as spelled in the table.
  const AssetId& canonical(const AssetId& asset) const;

  const std::vector<std::pair<AssetId, Decimal>>& entries() const noexcept { return entries_; }
  const std::string& source_label() const noexcept { return source_label_; }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::vector<std::pair<AssetId, Decimal>> entries_;
  std::unordered_map<AssetId, std::size_t> index_;
  std::string source_label_;
};

PriceTable load_price_table(const std::filesystem::path& path);

struct UsdValue {
  Rational give_usd;
  Rational want_usd;
};

/// (give_qty * p(give), want_qty * p(want)), exact.
UsdValue usd_value(const SwapOrder& order, const PriceTable& table);

}  // namespace cowsettle
