#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cowsettle/decimal.hpp"
#include "cowsettle/price_table.hpp"
#include "cowsettle/swap_order.hpp"

namespace cowsettle {

/// One data row of a swap export.
struct SwapRecord {
  std::int64_t time = 0;  // unix seconds, UTC
  std::string blockchain;
  std::string tx_hash;
  Rational amount_usd;
  std::string src_asset_symbol;
  std::string dst_asset_symbol;
  std::string sender_address;
  std::string receiver;
  /// Explicit quantities from the two-amount schema.
  std::optional<Decimal> give_qty;
  std::optional<Decimal> want_qty;
  std::optional<Rational> min_rate;
};

struct IngestOptions {
  /// Unpriced assets, non-positive amounts and degenerate rows become errors.
  bool strict = false;
};

struct IngestResult {
  std::vector<SwapOrder> orders;
  /// Zero-based data row of each order in the source file.
  std::vector<std::size_t> rows;
  std::vector<std::string> diagnostics;
  std::size_t total_rows = 0;

  std::size_t skipped() const noexcept { return total_rows - orders.size(); }
};

/// `YYYY-MM-DD HH:MM[:SS]` or ISO-8601 (`T` separator, optional fraction and
/// `Z` / `+HH:MM` offset). Returns unix seconds.
std::int64_t parse_timestamp(std::string_view text);

/// Splits CSV text into rows of fields (RFC 4180 quoting, CRLF tolerated).
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

/// Reads swap records and quotes each one USD-equal at the table's prices
/// unless give_qty / want_qty columns are present. Throws IngestError on a
/// malformed row or timestamp.
IngestResult ingest_csv(std::istream& in, const PriceTable& table, const IngestOptions& options = {});
IngestResult ingest_csv(const std::filesystem::path& path, const PriceTable& table,
                        const IngestOptions& options = {});

}  // namespace cowsettle
