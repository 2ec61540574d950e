// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cowsettle/batch_engine.hpp"
#include "cowsettle/bridging.hpp"
#include "cowsettle/error.hpp"
#include "cowsettle/feasibility.hpp"
#include "cowsettle/ingest.hpp"
#include "cowsettle/order_graph.hpp"
#include "cowsettle/report.hpp"
#include "cowsettle/transfer_matrix.hpp"
#include "cowsettle/vault.hpp"
#include "cycles.hpp"
#include "fixtures.hpp"
#include "random_cycles.hpp"
#include "random_graphs.hpp"
#include "sample_swaps.hpp"

using namespace cowsettle;
using namespace testing_support;

namespace {

// Pinned tolerances.
const Rational kEpsilonUsd = decimal_epsilon(9);
constexpr double kWorkedExampleSeconds = 1.0;
constexpr double kTraceOneSeconds = 1.0;
constexpr double kTraceTwoSeconds = 5.0;
constexpr int kBridgeSignificantFigures = 4;
constexpr int kPropertyTrials = 1000;

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }
};

// Every settled cycle of criteria 1-4 goes through here.
void expect_capital_preserved(Check& c, const CowCycle& cycle, const std::string& label) {
  VaultLedger ledger = provision_vaults(cycle.orders());
  SettlementPlan plan = plan_settlement(cycle, ledger);
  VaultLedger after = apply_settlement(plan, ledger);
  c.expect(after.balances() == ledger.balances(), label + ": vault balances moved");
}

std::vector<CowCycle> g_settled_cycles;

Rational magnitude(const Rational& r) { return abs(r); }

std::string significant(const Rational& value, int figures) {
  int exponent = 0;
  Rational v = abs(value);
  while (v >= 10) {
    v /= 10;
    ++exponent;
  }
  while (v < 1) {
    v *= 10;
    --exponent;
  }
  int fraction_digits = std::max(0, figures - 1 - exponent);
  return format_rational(value, fraction_digits, Rounding::half_even);
}

Check worked_example() {
  Check c;
  PriceTable t = eth_usdc_arb_prices();
  auto orders = eth_usdc_arb_cycle();
  TransferMatrix m = build_transfer_matrix(orders);
  const int expected_m[3][3] = {{1, 3000, 0}, {0, 3000, 1500}, {1, 0, 1500}};
  const int signs[3][3] = {{1, -1, 0}, {0, 1, -1}, {-1, 0, 1}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      c.expect(m.rows[i][j] == Decimal::from_integer(signs[i][j] * expected_m[i][j]),
               "M entry " + std::to_string(i) + "," + std::to_string(j));
    }
  }
  DollarMatrix v = to_dollars(m, t);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      c.expect(magnitude(v.rows[i][j]) == (expected_m[i][j] == 0 ? 0 : 3000), "V magnitude");
    }
  }
  c.expect(imbalance(v).is_zero(), "balanced cycle has non-zero imbalance");

  std::vector<SwapOrder> pair(orders.begin(), orders.begin() + 2);
  ImbalanceVector n = imbalance(to_dollars(build_transfer_matrix(pair), t));
  c.expect(n.values == std::vector<Rational>{3000, 0, -3000}, "N != [3000, 0, -3000]");

  BridgingOrder b = synthesize_bridge(n, t);
  c.expect(b.order.give_asset() == AssetId("ARB") && b.order.want_asset() == AssetId("ETH") &&
               b.order.give_qty() == Decimal::from_integer(1500) &&
               b.order.want_qty() == Decimal::from_integer(1),
           "bridge != (ARB, ETH, 1500, 1)");

  ClosedChain closed = close_chain(pair, t);
  c.expect(imbalance(closed.dollars).is_zero(), "1^T V' is not exactly zero");

  CowCycle balanced;
  for (std::size_t j = 0; j < orders.size(); ++j) {
    balanced.legs.push_back(CycleLeg{orders[j], j, usd_value(orders[j], t).give_usd});
  }
  g_settled_cycles.push_back(balanced);
  g_settled_cycles.push_back(closed.cycle);
  return c;
}

Check trace_one() {
  Check c;
  BatchReport r = run_sample(operator_eth());
  c.expect(r.discoveries.size() == 1, "expected exactly one cycle");
  if (!c.ok) return c;
  const Discovery& d = r.discoveries[0];
  c.expect(d.cycle.rows() == std::vector<std::size_t>{8, 1, 3}, "rows != [8, 1, 3]");
  c.expect(d.cycle.fill_usd == parse_rational("0.24"), "min dollar value != 0.24");
  const char* expected[3][2] = {{"0.00008", "0.12"}, {"0.12", "0.24"}, {"0.24", "0.00008"}};
  ReportOptions display;
  for (std::size_t j = 0; j < 3 && j < d.cycle.legs.size(); ++j) {
    const SwapOrder& leg = d.cycle.legs[j].order;
    c.expect(format_quantity(leg.give_qty(), display.quantity_digits) == expected[j][0] &&
                 format_quantity(leg.want_qty(), display.quantity_digits) == expected[j][1],
             "fill of leg " + std::to_string(j + 1));
  }
  c.expect(d.settled, "cycle did not settle");
  c.expect(r.ledger_after.balances() == provision_vaults(sample_swaps().orders).balances(),
           "vaults moved across the batch");
  g_settled_cycles.push_back(d.cycle);
  return c;
}

std::string trace_two_structured() {
  BatchReport r = run_sample(all_assets_bridging());
  std::ostringstream s;
  write_structured_report(s, std::span<const BatchReport>(&r, 1));
  return s.str();
}

Check trace_two() {
  Check c;
  BatchReport r = run_sample(all_assets_bridging());
  auto status = [&](const char* asset) {
    const OperatorOutcome* o = outcome_for(r, asset);
    return o ? std::optional<OperatorStatus>(o->status) : std::nullopt;
  };
  c.expect(status("ETH") == OperatorStatus::fully_feasible, "ETH not fully feasible");
  c.expect(status("aArbWETH") == OperatorStatus::completed_via_bridging, "aArbWETH not bridged");
  c.expect(status("USDT") == OperatorStatus::completed_via_bridging, "USDT not bridged");
  for (const char* a : {"WXM", "SolvBTC", "DAI"}) {
    c.expect(status(a) == OperatorStatus::no_cow_cycle, std::string(a) + " not no-cycle");
  }
  c.expect(status("UNI") == OperatorStatus::isolated_asset, "UNI not isolated");
  c.expect(r.bridge_count() == 2, "bridge count != 2");
  if (!c.ok) return c;

  const Discovery& eth = r.discoveries[outcome_for(r, "ETH")->discoveries.at(0)];
  c.expect(format_usd(eth.cycle.fill_usd) == "0.24", "ETH volume != 0.24");
  const Discovery& weth = r.discoveries[outcome_for(r, "aArbWETH")->discoveries.at(0)];
  c.expect(format_usd(weth.bridge->notional_usd) == "0.34", "aArbWETH bridge notional != 0.34");
  c.expect(format_usd(weth.cycle.volume_usd()) == "1.02", "aArbWETH volume != 1.02");
  const Discovery& usdt = r.discoveries[outcome_for(r, "USDT")->discoveries.at(0)];
  c.expect(format_usd(usdt.bridge->notional_usd) == "3.00", "USDT bridge notional != 3.00");
  c.expect(format_usd(usdt.cycle.volume_usd()) == "9.00", "USDT volume != 9.00");

  const SwapOrder& bridge = weth.bridge->order;
  Rational derived_uni = parse_rational("0.34") / 8;
  Rational derived_weth = parse_rational("0.34") / 3000;
  c.expect(bridge.give_asset() == AssetId("UNI") && bridge.want_asset() == AssetId("aArbWETH"),
           "bridge is not UNI -> aArbWETH");
  c.expect(significant(bridge.give_qty().to_rational(), kBridgeSignificantFigures) ==
               significant(derived_uni, kBridgeSignificantFigures),
           "bridge UNI quantity " + bridge.give_qty().to_string());
  c.expect(significant(bridge.want_qty().to_rational(), kBridgeSignificantFigures) ==
               significant(derived_weth, kBridgeSignificantFigures),
           "bridge aArbWETH quantity " + bridge.want_qty().to_string());
  c.expect(format_quantity(bridge.give_qty(), 7) == "0.0425" &&
               format_quantity(bridge.want_qty(), 7) == "0.0001133",
           "bridge display quantities");
  for (const auto& d : r.discoveries) {
    if (d.settled) g_settled_cycles.push_back(d.cycle);
  }
  return c;
}

Check conservation() {
  Check c;
  std::mt19937_64 rng(20250625);
  for (int trial = 0; trial < kPropertyTrials && c.ok; ++trial) {
    int k = 2 + trial % 5;
    RandomChain open = random_chain(rng, k - 1, false);
    ClosedChain closed = close_chain(open.legs, open.table);
    c.expect(imbalance(closed.dollars).is_zero_within(kEpsilonUsd),
             "bridged trial " + std::to_string(trial) + ": column sum beyond epsilon");
    c.expect(rate_product_is_one(closed.cycle.fills()), "bridged rate product != 1");

    RandomChain cyc = random_chain(rng, k, true);
    CowCycle scaled = make_cycle(cyc.legs, cyc.table);
    DollarMatrix v = to_dollars(build_transfer_matrix(scaled.orders()), cyc.table);
    c.expect(imbalance(v).is_zero_within(kEpsilonUsd),
             "complete trial " + std::to_string(trial) + ": column sum beyond epsilon");
    c.expect(rate_product_is_one(scaled.fills()), "complete rate product != 1");
    if (trial % 100 == 0) {
      g_settled_cycles.push_back(closed.cycle);
      g_settled_cycles.push_back(scaled);
    }
  }
  return c;
}

Check enumeration_oracle() {
  Check c;
  std::mt19937_64 rng(1977);
  for (int trial = 0; trial < kPropertyTrials && c.ok; ++trial) {
    auto orders = random_multigraph(rng, 8, 15);
    int k_max = 2 + trial % 4;
    std::set<std::vector<std::size_t>> got;
    for (const auto& cycle : enumerate_cycles(build_graph(orders), k_max)) got.insert(cycle.order_indices);
    c.expect(got == brute_force_cycles(orders, k_max), "trial " + std::to_string(trial));
  }
  return c;
}

Check round_trip() {
  Check c;
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < kPropertyTrials && c.ok; ++trial) {
    RandomChain chain = random_chain(rng, 1 + trial % 7, false);
    TransferMatrix m = build_transfer_matrix(chain.legs);
    TransferMatrix back = recover_orders(to_dollars(m, chain.table), chain.table);
    c.expect(back.rows == m.rows && back.assets == m.assets, "trial " + std::to_string(trial));
  }
  return c;
}

Check capital_preservation() {
  Check c;
  c.expect(!g_settled_cycles.empty(), "no settled cycles collected");
  for (std::size_t i = 0; i < g_settled_cycles.size() && c.ok; ++i) {
    expect_capital_preserved(c, g_settled_cycles[i], "cycle " + std::to_string(i));
  }

  CowCycle cycle = sample_eth_cycle();
  VaultLedger poor;
  poor.deposit(AssetId("ETH"), Decimal::parse("1"));
  poor.deposit(AssetId("ARB"), Decimal::parse("0.05"));
  poor.deposit(AssetId("USDC"), Decimal::parse("1"));
  auto snapshot = poor.balances();
  auto journal = poor.journal();

  VaultLedger rich = provision_vaults(cycle.orders());
  SettlementPlan plan = plan_settlement(cycle, rich);
  plan.ledger_version = poor.version();
  bool refused = false;
  try {
    apply_settlement(plan, poor);
  } catch (const SettlementError& e) {
    refused = e.kind() == SettlementError::Kind::insufficient_liquidity;
  }
  c.expect(refused, "underfunded vault did not raise insufficient-liquidity");
  c.expect(poor.balances() == snapshot && poor.journal() == journal, "underfunded ledger was modified");
  return c;
}

Check determinism() {
  Check c;
  std::string first = trace_two_structured();
  std::string second = trace_two_structured();
  c.expect(!first.empty() && first == second, "structured reports differ");
  return c;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Check()> run;
  double max_seconds;
};

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "worked example matrices, imbalance and bridge", worked_example, kWorkedExampleSeconds},
      {2, "trace: operator ETH, depth 5", trace_one, kTraceOneSeconds},
      {3, "trace: all operators with bridging", trace_two, kTraceTwoSeconds},
      {4, "conservation on random cycles", conservation, 0},
      {5, "enumeration matches brute-force oracle", enumeration_oracle, 0},
      {6, "recover_orders round trip", round_trip, 0},
      {7, "vault capital preservation", capital_preservation, 0},
      {8, "deterministic structured report", determinism, 0},
  };

  int failures = 0;
  for (const auto& cr : criteria) {
    auto start = std::chrono::steady_clock::now();
    Check result;
    try {
      result = cr.run();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.max_seconds > 0 && seconds >= cr.max_seconds) {
      result.expect(false, "runtime " + std::to_string(seconds) + " s over limit");
    }
    failures += result.ok ? 0 : 1;
    std::cout << (result.ok ? "PASS" : "FAIL") << "  criterion " << cr.id << ": " << cr.name << " ("
              << std::fixed << std::setprecision(3) << seconds << " s)";
    if (!result.ok) std::cout << " -- " << result.detail;
    std::cout << '\n';
  }
  return failures == 0 ? 0 : 1;
}
