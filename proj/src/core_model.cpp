#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

#include "cowsettle/asset.hpp"
#include "cowsettle/error.hpp"
#include "cowsettle/price_table.hpp"
#include "cowsettle/swap_order.hpp"

namespace cowsettle {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

AssetId::AssetId(std::string_view symbol) {
  symbol = trim(symbol);
  if (symbol.empty()) throw OrderError("asset symbol must be non-empty");
  for (char c : symbol) {
    auto u = static_cast<unsigned char>(c);
    if (std::isspace(u) || c == '=' || c == '#' || c == ',' || std::iscntrl(u)) {
      throw OrderError("invalid character in asset symbol '" + std::string(symbol) + "'");
    }
  }
  symbol_ = std::string(symbol);
  key_ = symbol_;
  std::transform(key_.begin(), key_.end(), key_.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
}

SwapOrder::SwapOrder(std::string id, AssetId give_asset, Decimal give_qty, AssetId want_asset,
                     Decimal want_qty, Rational min_rate, std::int64_t timestamp, bool synthetic)
    : id_(std::move(id)),
      give_asset_(std::move(give_asset)),
      want_asset_(std::move(want_asset)),
      give_qty_(give_qty),
      want_qty_(want_qty),
      min_rate_(std::move(min_rate)),
      timestamp_(timestamp),
      synthetic_(synthetic) {
  if (give_asset_ == want_asset_) {
    throw OrderError("order " + id_ + ": give and want asset are both " + give_asset_.symbol());
  }
  if (!give_qty_.is_positive() || !want_qty_.is_positive()) {
    throw OrderError("order " + id_ + ": quantities must be positive");
  }
  if (min_rate_ <= 0) throw OrderError("order " + id_ + ": min_rate must be positive");
}

SwapOrder SwapOrder::scaled(Decimal give_qty, Decimal want_qty, Rational fill_fraction) const {
  SwapOrder out(id_, give_asset_, give_qty, want_asset_, want_qty, min_rate_, timestamp_,
                synthetic_);
  out.fill_fraction_ = std::move(fill_fraction);
  return out;
}

SwapOrder SwapOrder::with_assets(AssetId give_asset, AssetId want_asset) const {
  if (!(give_asset == give_asset_) || !(want_asset == want_asset_)) {
    throw OrderError("order " + id_ + ": with_assets may only change spelling");
  }
  SwapOrder out = *this;
  out.give_asset_ = std::move(give_asset);
  out.want_asset_ = std::move(want_asset);
  return out;
}

PriceTable::PriceTable(std::vector<std::pair<AssetId, Decimal>> entries, std::string source_label)
    : source_label_(std::move(source_label)) {
  for (auto& [asset, price] : entries) {
    if (!price.is_positive()) {
      throw PriceError(PriceError::Kind::non_positive,
                       "non-positive price for " + asset.symbol() + ": " + price.to_string());
    }
    if (index_.contains(asset)) {
      throw PriceError(PriceError::Kind::duplicate, "duplicate price for " + asset.symbol());
    }
    index_.emplace(asset, entries_.size());
    entries_.emplace_back(std::move(asset), price);
  }
}

PriceTable PriceTable::parse(std::istream& in, std::string source_label) {
  std::vector<std::pair<AssetId, Decimal>> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    auto eq = view.find('=');
    auto where = [&] { return source_label + ":" + std::to_string(line_no); };
    if (eq == std::string_view::npos) {
      throw PriceError(PriceError::Kind::parse, where() + ": expected SYMBOL=DECIMAL");
    }
    try {
      entries.emplace_back(AssetId(view.substr(0, eq)), Decimal::parse(trim(view.substr(eq + 1))));
    } catch (const OrderError& e) {
      throw PriceError(PriceError::Kind::parse, where() + ": " + e.what());
    } catch (const DecimalError& e) {
      throw PriceError(PriceError::Kind::parse, where() + ": " + e.what());
    }
  }
  return PriceTable(std::move(entries), std::move(source_label));
}

const Decimal& PriceTable::price(const AssetId& asset) const {
  auto it = index_.find(asset);
  if (it == index_.end()) {
    throw PriceError(PriceError::Kind::unpriced, "no oracle price for " + asset.symbol());
  }
  return entries_[it->second].second;
}

const AssetId& PriceTable::canonical(const AssetId& asset) const {
  auto it = index_.find(asset);
  if (it == index_.end()) {
    throw PriceError(PriceError::Kind::unpriced, "no oracle price for " + asset.symbol());
  }
  return entries_[it->second].first;
}

PriceTable load_price_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PriceError(PriceError::Kind::io, "cannot open price file " + path.string());
  return PriceTable::parse(in, path.filename().string());
}

UsdValue usd_value(const SwapOrder& order, const PriceTable& table) {
  return UsdValue{order.give_qty().to_rational() * table.price_rational(order.give_asset()),
                  order.want_qty().to_rational() * table.price_rational(order.want_asset())};
}

}  // namespace cowsettle
