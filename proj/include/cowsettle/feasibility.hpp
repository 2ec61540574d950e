#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "cowsettle/decimal.hpp"
#include "cowsettle/price_table.hpp"
#include "cowsettle/swap_order.hpp"

namespace cowsettle {

enum class FeasibilityMode {
  /// Realized rate must equal the oracle-implied rate p(give)/p(want).
  strict_equality,
  /// Realized rate must meet min_rate * want_qty / give_qty of the order.
  floor_inequality,
};

std::string_view to_string(FeasibilityMode mode);
FeasibilityMode parse_feasibility_mode(std::string_view text);

struct LegVerdict {
  Rational realized_rate;
  Rational required_rate;
  bool pass = false;
};

struct FeasibilityVerdict {
  bool feasible = false;
  FeasibilityMode mode = FeasibilityMode::floor_inequality;
  std::vector<LegVerdict> per_leg;
  /// prod(realized rates) - 1.
  Rational rate_product_deviation;
};

/// Checks a cycle with fill vector q (q[j] is the quantity of give_asset of
/// leg j). The realized rate of leg j is q[j+1] / q[j], cyclically.
///
/// All comparisons are cross-multiplied exact rationals. A leg that misses by
/// at most `tolerance_usd` of its received value still passes; callers pass a
/// non-zero tolerance only when the fills were rounded.
FeasibilityVerdict check_cycle(std::span<const SwapOrder> legs, std::span<const Decimal> fills,
                               const PriceTable& table, FeasibilityMode mode,
                               const Rational& tolerance_usd = Rational(0));

/// prod(q[j+1]) == prod(q[j]): the rate product equals one without dividing.
bool rate_product_is_one(std::span<const Decimal> fills);

}  // namespace cowsettle
