#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cowsettle/decimal.hpp"
#include "cowsettle/price_table.hpp"
#include "cowsettle/swap_order.hpp"

namespace testing_support {

using namespace cowsettle;

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(COWSETTLE_FIXTURES) / name;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline Decimal dec(const char* text) { return Decimal::parse(text); }

inline PriceTable prices(std::initializer_list<std::pair<const char*, const char*>> entries) {
  std::vector<std::pair<AssetId, Decimal>> v;
  for (const auto& [sym, p] : entries) v.emplace_back(AssetId(sym), Decimal::parse(p));
  return PriceTable(std::move(v), "test");
}

inline SwapOrder order(const std::string& id, const char* give, const char* a, const char* want,
                       const char* b, std::int64_t ts = 0) {
  return SwapOrder(id, AssetId(give), Decimal::parse(a), AssetId(want), Decimal::parse(b), 1, ts);
}

// Three-asset example: 1 ETH -> 3000 USDC -> 1500 ARB -> 1 ETH.
inline PriceTable eth_usdc_arb_prices() {
  return prices({{"ETH", "3000"}, {"USDC", "1"}, {"ARB", "2"}});
}

inline std::vector<SwapOrder> eth_usdc_arb_cycle() {
  return {order("o1", "ETH", "1", "USDC", "3000"), order("o2", "USDC", "3000", "ARB", "1500"),
          order("o3", "ARB", "1500", "ETH", "1")};
}

inline PriceTable oracle_prices() { return load_price_table(fixture("oracle.txt")); }

}  // namespace testing_support
