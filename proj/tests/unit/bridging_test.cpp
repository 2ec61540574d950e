#include <gtest/gtest.h>

#include <random>

#include "cowsettle/bridging.hpp"
#include "cowsettle/error.hpp"
#include "cowsettle/feasibility.hpp"
#include "fixtures.hpp"
#include "random_cycles.hpp"

using namespace cowsettle;
using namespace testing_support;

namespace {

BridgeError::Kind bridge_error_kind(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const BridgeError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no BridgeError";
  return BridgeError::Kind::unclosable;
}

ImbalanceVector vec(std::initializer_list<std::pair<const char*, int>> entries) {
  ImbalanceVector n;
  for (const auto& [sym, v] : entries) {
    n.assets.emplace_back(sym);
    n.values.emplace_back(v);
  }
  return n;
}

}  // namespace

TEST(Bridging, SynthesizesInverseOfImbalance) {
  BridgingOrder b = synthesize_bridge(vec({{"ETH", 3000}, {"USDC", 0}, {"ARB", -3000}}),
                                      eth_usdc_arb_prices());
  EXPECT_EQ(b.order.give_asset().symbol(), "ARB");
  EXPECT_EQ(b.order.want_asset().symbol(), "ETH");
  EXPECT_EQ(b.order.give_qty(), dec("1500"));
  EXPECT_EQ(b.order.want_qty(), dec("1"));
  EXPECT_TRUE(b.order.synthetic());
  EXPECT_EQ(b.notional_usd, 3000);
  EXPECT_EQ(b.executor, "operator");
}

TEST(Bridging, ErrorKinds) {
  PriceTable t = eth_usdc_arb_prices();
  EXPECT_EQ(bridge_error_kind([&] { synthesize_bridge(vec({{"ETH", 0}, {"ARB", 0}}), t); }),
            BridgeError::Kind::no_bridge_needed);
  EXPECT_EQ(bridge_error_kind([&] {
              synthesize_bridge(vec({{"ETH", 3000}, {"USDC", -1000}, {"ARB", -2000}}), t);
            }),
            BridgeError::Kind::unclosable);
  EXPECT_EQ(bridge_error_kind([&] { synthesize_bridge(vec({{"ETH", 3000}, {"ARB", -2000}}), t); }),
            BridgeError::Kind::non_cancelling);
}

TEST(Bridging, ClosesOpenPairWithExactConservation) {
  auto chain = eth_usdc_arb_cycle();
  chain.pop_back();
  ClosedChain c = close_chain(chain, eth_usdc_arb_prices());
  EXPECT_EQ(c.bridge.order.give_asset().symbol(), "ARB");
  EXPECT_EQ(c.bridge.order.give_qty(), dec("1500"));
  EXPECT_EQ(c.bridge.order.want_qty(), dec("1"));
  EXPECT_TRUE(imbalance(c.dollars).is_zero());
  EXPECT_EQ(c.cycle.legs.size(), 3u);
  EXPECT_TRUE(c.cycle.bridged);
  EXPECT_EQ(c.cycle.volume_usd(), 9000);
}

TEST(Bridging, CloseChainRejectsClosedOrBrokenChains) {
  PriceTable t = eth_usdc_arb_prices();
  auto cycle = eth_usdc_arb_cycle();
  EXPECT_EQ(bridge_error_kind([&] { close_chain(cycle, t); }), BridgeError::Kind::no_bridge_needed);
  std::vector<SwapOrder> broken{cycle[0], cycle[2]};
  EXPECT_THROW(close_chain(broken, t), CycleError);
}

TEST(Bridging, TableOneAarbwethChain) {
  PriceTable t = oracle_prices();
  std::vector<SwapOrder> chain{
      order("9", "aArbWETH", "0.006746666666666667", "ETH", "0.006746666666666667"),
      order("6", "ETH", "0.000113333333333333", "UNI", "0.0425")};
  ClosedChain c = close_chain(chain, t);
  EXPECT_EQ(c.bridge.order.give_asset().symbol(), "UNI");
  EXPECT_EQ(c.bridge.order.want_asset().symbol(), "aArbWETH");
  EXPECT_EQ(format_rational(c.bridge.order.give_qty().to_rational(), 4, Rounding::half_even, true), "0.0425");
  EXPECT_EQ(format_rational(c.bridge.order.want_qty().to_rational(), 7, Rounding::half_even, true),
            "0.0001133");
  EXPECT_EQ(format_rational(c.bridge.notional_usd, 2, Rounding::half_even), "0.34");
  EXPECT_TRUE(imbalance(c.dollars).is_zero_within(decimal_epsilon(9)));
}

TEST(Bridging, RandomChainsCloseWithZeroColumnSums) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    int k = std::uniform_int_distribution<int>(2, 6)(rng);
    RandomChain c = random_chain(rng, k - 1, false);
    ClosedChain closed = close_chain(c.legs, c.table);
    ImbalanceVector n = imbalance(closed.dollars);
    ASSERT_TRUE(n.is_zero_within(decimal_epsilon(9))) << "trial " << trial;
    ASSERT_TRUE(rate_product_is_one(closed.cycle.fills()));
    ASSERT_EQ(closed.cycle.legs.size(), static_cast<std::size_t>(k));
  }
}
