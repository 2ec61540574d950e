#include "cowsettle/bridging.hpp"

#include <algorithm>

#include "cowsettle/error.hpp"
#include "cowsettle/order_graph.hpp"

namespace cowsettle {

std::vector<SwapOrder> CowCycle::orders() const {
  std::vector<SwapOrder> out;
  out.reserve(legs.size());
  for (const auto& leg : legs) out.push_back(leg.order);
  return out;
}

std::vector<Decimal> CowCycle::fills() const {
  std::vector<Decimal> out;
  out.reserve(legs.size());
  for (const auto& leg : legs) out.push_back(leg.order.give_qty());
  return out;
}

Rational CowCycle::volume_usd() const {
  Rational total = 0;
  for (const auto& leg : legs) total += leg.give_usd;
  return total;
}

std::vector<AssetId> CowCycle::asset_path() const {
  std::vector<AssetId> out;
  for (const auto& leg : legs) out.push_back(leg.order.give_asset());
  if (!out.empty()) out.push_back(out.front());
  return out;
}

std::vector<std::size_t> CowCycle::rows() const {
  std::vector<std::size_t> out;
  for (const auto& leg : legs) {
    if (leg.row) out.push_back(*leg.row);
  }
  return out;
}

BridgingOrder synthesize_bridge(const ImbalanceVector& n, const PriceTable& table,
                                const BridgeOptions& options) {
  std::optional<std::size_t> surplus;
  std::optional<std::size_t> deficit;
  std::size_t nonzero = 0;
  for (std::size_t j = 0; j < n.values.size(); ++j) {
    if (abs(n.values[j]) <= options.epsilon) continue;
    ++nonzero;
    (n.values[j] > 0 ? surplus : deficit) = j;
  }
  if (nonzero == 0) {
    throw BridgeError(BridgeError::Kind::no_bridge_needed, "imbalance is zero; no bridge needed");
  }
  if (nonzero != 2 || !surplus || !deficit) {
    throw BridgeError(BridgeError::Kind::unclosable,
                      "imbalance has " + std::to_string(nonzero) +
                          " non-zero components; a single bridging order needs exactly one "
                          "surplus and one deficit");
  }
  const Rational& in_usd = n.values[*surplus];
  const Rational& out_usd = n.values[*deficit];
  if (abs(in_usd + out_usd) > options.epsilon) {
    throw BridgeError(BridgeError::Kind::non_cancelling,
                      "imbalance components " + to_exact_string(in_usd) + " and " +
                          to_exact_string(out_usd) + " do not cancel");
  }

  const AssetId& give_asset = n.assets[*deficit];
  const AssetId& want_asset = n.assets[*surplus];
  Rational give_usd = -out_usd;
  Decimal give_qty = Decimal::from_rational(give_usd / table.price_rational(give_asset));
  Decimal want_qty = Decimal::from_rational(in_usd / table.price_rational(want_asset));
  if (give_qty.is_zero() || want_qty.is_zero()) {
    throw BridgeError(BridgeError::Kind::unclosable,
                      "bridge quantity rounds to zero at 18 fractional digits");
  }
  return BridgingOrder{
      SwapOrder(options.order_id, give_asset, give_qty, want_asset, want_qty, Rational(1),
                options.timestamp, true),
      n, give_usd, options.executor};
}

ClosedChain close_chain(std::span<const SwapOrder> chain, const PriceTable& table,
                        const BridgeOptions& options) {
  if (chain.empty()) throw CycleError("close_chain: empty chain");
  if (!satisfies_path_closure(chain)) {
    throw CycleError("close_chain: consecutive legs do not connect");
  }
  if (chain.back().want_asset() == chain.front().give_asset()) {
    throw BridgeError(BridgeError::Kind::no_bridge_needed,
                      "chain already closes on " + chain.front().give_asset().symbol());
  }
  std::vector<AssetId> seen;
  for (const auto& leg : chain) seen.push_back(leg.give_asset());
  seen.push_back(chain.back().want_asset());
  auto sorted = seen;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw CycleError("close_chain: chain revisits an asset");
  }

  Rational target = options.target_usd ? *options.target_usd : min_dollar_leg(chain, table).usd;
  ScaledCycle scaled = scale_cycle(chain, target, table);
  DollarMatrix v = to_dollars(build_transfer_matrix(scaled.legs), table);
  ImbalanceVector n = imbalance(v);

  BridgeOptions bridge_options = options;
  if (bridge_options.timestamp == 0) {
    for (const auto& leg : chain) {
      bridge_options.timestamp = std::max(bridge_options.timestamp, leg.timestamp());
    }
  }
  BridgingOrder bridge = synthesize_bridge(n, table, bridge_options);

  std::vector<SwapOrder> legs = scaled.legs;
  legs.push_back(bridge.order);
  TransferMatrix m_closed = build_transfer_matrix(legs);
  DollarMatrix v_closed = to_dollars(m_closed, table);
  ImbalanceVector residual = imbalance(v_closed);
  if (!residual.is_zero_within(options.epsilon)) {
    throw BridgeError(BridgeError::Kind::non_cancelling,
                      "closed chain still carries an imbalance beyond epsilon");
  }

  CowCycle cycle;
  cycle.fill_usd = target;
  cycle.bridged = true;
  cycle.rounded = scaled.rounded || !residual.is_zero();
  for (const auto& leg : legs) {
    cycle.legs.push_back(CycleLeg{leg, std::nullopt, usd_value(leg, table).give_usd});
  }
  return ClosedChain{std::move(cycle), std::move(bridge), std::move(v_closed)};
}

}  // namespace cowsettle
