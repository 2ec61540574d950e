#include "cowsettle/feasibility.hpp"

#include "cowsettle/error.hpp"
#include "cowsettle/order_graph.hpp"

namespace cowsettle {

std::string_view to_string(FeasibilityMode mode) {
  return mode == FeasibilityMode::strict_equality ? "strict" : "floor";
}

FeasibilityMode parse_feasibility_mode(std::string_view text) {
  if (text == "strict") return FeasibilityMode::strict_equality;
  if (text == "floor") return FeasibilityMode::floor_inequality;
  throw ConfigError("unknown feasibility mode '" + std::string(text) + "' (strict|floor)");
}

FeasibilityVerdict check_cycle(std::span<const SwapOrder> legs, std::span<const Decimal> fills,
                               const PriceTable& table, FeasibilityMode mode,
                               const Rational& tolerance_usd) {
  if (legs.size() != fills.size()) {
    throw CycleError("check_cycle: " + std::to_string(legs.size()) + " legs but " +
                     std::to_string(fills.size()) + " fills");
  }
  if (!satisfies_cyclic_closure(legs)) throw CycleError("check_cycle: legs do not close");
  for (const auto& q : fills) {
    if (!q.is_positive()) throw CycleError("check_cycle: fills must be positive");
  }

  FeasibilityVerdict verdict;
  verdict.mode = mode;
  verdict.feasible = true;
  Rational product = 1;
  const std::size_t k = legs.size();
  for (std::size_t j = 0; j < k; ++j) {
    const SwapOrder& leg = legs[j];
    Rational given = fills[j].to_rational();
    Rational received = fills[(j + 1) % k].to_rational();
    Rational p_give = table.price_rational(leg.give_asset());
    Rational p_want = table.price_rational(leg.want_asset());

    LegVerdict lv;
    lv.realized_rate = received / given;
    product *= lv.realized_rate;
    if (mode == FeasibilityMode::strict_equality) {
      lv.required_rate = p_give / p_want;
      Rational gap = received * p_want - given * p_give;
      lv.pass = gap == 0 || abs(gap) <= tolerance_usd;
    } else {
      Rational a = leg.give_qty().to_rational();
      Rational b = leg.want_qty().to_rational();
      lv.required_rate = leg.min_rate() * b / a;
      Rational lhs = received * a;
      Rational rhs = leg.min_rate() * b * given;
      if (lhs >= rhs) {
        lv.pass = true;
      } else {
        Rational shortfall_usd = (rhs - lhs) / a * p_want;
        lv.pass = shortfall_usd <= tolerance_usd;
      }
    }
    verdict.feasible = verdict.feasible && lv.pass;
    verdict.per_leg.push_back(std::move(lv));
  }
  verdict.rate_product_deviation = product - 1;
  return verdict;
}

bool rate_product_is_one(std::span<const Decimal> fills) {
  if (fills.empty()) return false;
  BigInt numerator = 1;
  BigInt denominator = 1;
  const std::size_t k = fills.size();
  for (std::size_t j = 0; j < k; ++j) {
    numerator *= to_bigint(fills[(j + 1) % k].raw());
    denominator *= to_bigint(fills[j].raw());
  }
  return numerator == denominator;
}

}  // namespace cowsettle
