#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cowsettle/asset.hpp"
#include "cowsettle/cow_cycle.hpp"
#include "cowsettle/decimal.hpp"

namespace cowsettle {

/// One signed vault movement. Positive: the vault of `asset` receives.
struct Posting {
  std::string order_id;
  AssetId asset;
  Decimal qty;

  friend bool operator==(const Posting&, const Posting&) = default;
};

/// Per-asset LP vault inventories plus the append-only journal that produced them.
///
/// Every mutation bumps `version()`, which settlement plans use to detect that
/// they were computed against an older snapshot.
class VaultLedger {
 public:
  VaultLedger() = default;

  /// Opening inventory, journaled as an "opening" posting.
  void deposit(const AssetId& asset, Decimal qty);

  Decimal balance(const AssetId& asset) const;
  const std::map<AssetId, Decimal>& balances() const noexcept { return balances_; }
  const std::vector<Posting>& journal() const noexcept { return journal_; }
  std::uint64_t version() const noexcept { return version_; }

  /// Folds a journal from an empty ledger. Throws if any prefix goes negative.
  static VaultLedger replay(std::span<const Posting> journal);

  /// `SYMBOL balance` per line, sorted by asset key.
  void export_balances(std::ostream& out) const;
  static VaultLedger import_balances(std::istream& in);

  /// CSV with header `order_id,symbol,signed_qty`.
  void export_journal(std::ostream& out) const;
  static std::vector<Posting> import_journal(std::istream& in);

 private:
  friend VaultLedger apply_settlement(const struct SettlementPlan& plan, const VaultLedger& ledger);
  void post(const Posting& p);

  std::map<AssetId, Decimal> balances_;
  std::vector<Posting> journal_;
  std::uint64_t version_ = 0;
};

enum class LiquidityCheck {
  /// Atomic execution: every payout is checked as if it happened before any
  /// receipt, i.e. total payouts per vault against the opening balance.
  worst_case,
  /// Non-atomic rails: legs post in order (receipt, then payout) and no
  /// intermediate balance may go negative.
  sequential,
};

struct SettlementPlan {
  CowCycle cycle;
  std::vector<Posting> postings;
  std::map<AssetId, Decimal> net_per_vault;
  std::uint64_t ledger_version = 0;
  LiquidityCheck check = LiquidityCheck::worst_case;
};

/// For each leg the give-asset vault receives from the trader and the
/// want-asset vault pays out. Throws if a vault's net is non-zero or a payout
/// cannot be covered.
SettlementPlan plan_settlement(const CowCycle& cycle, const VaultLedger& ledger,
                               LiquidityCheck check = LiquidityCheck::worst_case);

/// Applies every posting or none. Throws `stale_plan` when the ledger moved
/// since planning.
VaultLedger apply_settlement(const SettlementPlan& plan, const VaultLedger& ledger);

}  // namespace cowsettle
