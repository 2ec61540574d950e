#pragma once

#include <compare>
#include <functional>
#include <string>
#include <string_view>

namespace cowsettle {

/// Identity of a tradable asset and of its single LP vault.
///
/// Equality, ordering and hashing use the upper-cased key, so "eth" and "ETH"
/// are the same asset. The symbol keeps the spelling it was created with for
/// display ("aArbWETH").
class AssetId {
 public:
  explicit AssetId(std::string_view symbol);

  const std::string& symbol() const noexcept { return symbol_; }
  const std::string& key() const noexcept { return key_; }

  friend bool operator==(const AssetId& a, const AssetId& b) noexcept { return a.key_ == b.key_; }
  friend std::strong_ordering operator<=>(const AssetId& a, const AssetId& b) noexcept {
    return a.key_ <=> b.key_;
  }

 private:
  std::string symbol_;
  std::string key_;
};

}  // namespace cowsettle

template <>
struct std::hash<cowsettle::AssetId> {
  std::size_t operator()(const cowsettle::AssetId& a) const noexcept {
    return std::hash<std::string>{}(a.key());
  }
};
