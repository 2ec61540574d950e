#include "cowsettle/transfer_matrix.hpp"

#include <algorithm>

#include "cowsettle/error.hpp"

namespace cowsettle {

std::size_t TransferMatrix::column_of(const AssetId& asset) const {
  auto it = std::find(assets.begin(), assets.end(), asset);
  if (it == assets.end()) throw OrderError("asset " + asset.symbol() + " is not a matrix column");
  return static_cast<std::size_t>(it - assets.begin());
}

std::vector<Rational> DollarMatrix::row_sums() const {
  std::vector<Rational> sums;
  sums.reserve(rows.size());
  for (const auto& row : rows) {
    Rational s = 0;
    for (const auto& x : row) s += x;
    sums.push_back(s);
  }
  return sums;
}

DollarMatrix DollarMatrix::with_row(std::vector<Rational> row, std::string order_id) const {
  if (row.size() != assets.size()) throw OrderError("with_row: width mismatch");
  DollarMatrix out = *this;
  out.rows.push_back(std::move(row));
  out.row_order_ids.push_back(std::move(order_id));
  return out;
}

bool ImbalanceVector::is_zero() const {
  return std::all_of(values.begin(), values.end(), [](const Rational& x) { return x == 0; });
}

bool ImbalanceVector::is_zero_within(const Rational& tolerance) const {
  return std::all_of(values.begin(), values.end(),
                     [&](const Rational& x) { return abs(x) <= tolerance; });
}

TransferMatrix build_transfer_matrix(std::span<const SwapOrder> orders) {
  TransferMatrix m;
  auto add_column = [&m](const AssetId& asset) {
    if (std::find(m.assets.begin(), m.assets.end(), asset) == m.assets.end()) {
      m.assets.push_back(asset);
    }
  };
  for (const auto& o : orders) {
    add_column(o.give_asset());
    add_column(o.want_asset());
  }
  for (const auto& o : orders) {
    std::vector<Decimal> row(m.assets.size());
    row[m.column_of(o.give_asset())] = o.give_qty();
    row[m.column_of(o.want_asset())] = -o.want_qty();
    m.rows.push_back(std::move(row));
    m.row_order_ids.push_back(o.id());
  }
  return m;
}

DollarMatrix to_dollars(const TransferMatrix& m, const PriceTable& table) {
  DollarMatrix v;
  v.assets = m.assets;
  v.row_order_ids = m.row_order_ids;
  std::vector<Rational> prices;
  prices.reserve(m.assets.size());
  for (const auto& a : m.assets) prices.push_back(table.price_rational(a));
  for (const auto& row : m.rows) {
    std::vector<Rational> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) out[j] = row[j].to_rational() * prices[j];
    v.rows.push_back(std::move(out));
  }
  return v;
}

ImbalanceVector imbalance(const DollarMatrix& v) {
  ImbalanceVector n{v.assets, std::vector<Rational>(v.assets.size(), Rational(0))};
  for (const auto& row : v.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) n.values[j] += row[j];
  }
  return n;
}

std::vector<Decimal> asset_column_sums(const TransferMatrix& m) {
  std::vector<Decimal> sums(m.assets.size());
  for (const auto& row : m.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) sums[j] += row[j];
  }
  return sums;
}

TransferMatrix recover_orders(const DollarMatrix& v, const PriceTable& table) {
  TransferMatrix m;
  m.assets = v.assets;
  m.row_order_ids = v.row_order_ids;
  std::vector<Rational> prices;
  for (const auto& a : v.assets) prices.push_back(table.price_rational(a));
  for (const auto& row : v.rows) {
    std::vector<Decimal> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) out[j] = Decimal::from_rational(row[j] / prices[j]);
    m.rows.push_back(std::move(out));
  }
  return m;
}

MinDollarLeg min_dollar_leg(std::span<const SwapOrder> legs, const PriceTable& table) {
  if (legs.empty()) throw CycleError("min_dollar_leg: no legs");
  MinDollarLeg best{usd_value(legs[0], table).give_usd, 0};
  for (std::size_t j = 1; j < legs.size(); ++j) {
    Rational usd = usd_value(legs[j], table).give_usd;
    if (usd < best.usd) best = MinDollarLeg{usd, j};
  }
  return best;
}

ScaledCycle scale_cycle(std::span<const SwapOrder> legs, const Rational& target_usd,
                        const PriceTable& table) {
  if (target_usd <= 0) throw CapacityError("scale_cycle: target must be positive");
  ScaledCycle out;
  out.legs.reserve(legs.size());
  for (const auto& leg : legs) {
    Rational capacity = usd_value(leg, table).give_usd;
    if (target_usd > capacity) {
      throw CapacityError("scale_cycle: target " + to_exact_string(target_usd) +
                          " USD exceeds capacity " + to_exact_string(capacity) + " of order " +
                          leg.id());
    }
    bool give_exact = true;
    bool want_exact = true;
    Decimal give = Decimal::from_rational(target_usd / table.price_rational(leg.give_asset()),
                                          Rounding::half_even, &give_exact);
    Decimal want = Decimal::from_rational(target_usd / table.price_rational(leg.want_asset()),
                                          Rounding::half_even, &want_exact);
    if (give.is_zero() || want.is_zero()) {
      throw CapacityError("scale_cycle: target " + to_exact_string(target_usd) +
                          " USD rounds to a zero quantity on order " + leg.id());
    }
    out.rounded = out.rounded || !give_exact || !want_exact;
    out.legs.push_back(leg.scaled(give, want, target_usd / capacity));
  }
  return out;
}

}  // namespace cowsettle
