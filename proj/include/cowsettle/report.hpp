#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "cowsettle/batch_engine.hpp"
#include "cowsettle/decimal.hpp"

namespace cowsettle {

struct ReportOptions {
  /// Fractional digits shown for quantities in the text report (half-even).
  int quantity_digits = 7;
  /// Printed in the header; empty hides the line.
  std::string price_source = "Using Oracle Price";
};

/// Reads COW_SETTLE_PRECISION. Returns `fallback` when unset; throws
/// ConfigError when set to anything but an integer in [0, 18].
int display_precision_from_env(int fallback = 7);

/// Rounds half-even to `digits` fractional digits and strips trailing zeros.
std::string format_quantity(const Decimal& qty, int digits);

/// Two decimals, half-even.
std::string format_usd(const Rational& usd);

/// Exact decimal text when the value terminates, `num/den` otherwise.
std::string format_exact(const Rational& value);

std::string_view status_label(OperatorStatus status);

void write_text_report(std::ostream& out, std::span<const BatchReport> batches,
                       const ReportOptions& options = {});

/// Indented JSON, keys in fixed order, every number as an exact string.
void write_structured_report(std::ostream& out, std::span<const BatchReport> batches);

}  // namespace cowsettle
