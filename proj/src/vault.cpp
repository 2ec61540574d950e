#include "cowsettle/vault.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "cowsettle/error.hpp"

namespace cowsettle {

namespace {

void verify_liquidity(const SettlementPlan& plan, const VaultLedger& ledger) {
  if (plan.check == LiquidityCheck::worst_case) {
    std::map<AssetId, Decimal> payouts;
    for (const auto& p : plan.postings) {
      if (p.qty.signum() < 0) payouts[p.asset] -= p.qty;
    }
    for (const auto& [asset, total] : payouts) {
      Decimal available = ledger.balance(asset);
      if (total > available) {
        throw SettlementError(SettlementError::Kind::insufficient_liquidity,
                              "vault " + asset.symbol() + " holds " + available.to_string() +
                                  " but must pay out " + total.to_string());
      }
    }
    return;
  }
  std::map<AssetId, Decimal> running = ledger.balances();
  for (const auto& p : plan.postings) {
    Decimal& b = running[p.asset];
    b += p.qty;
    if (b.signum() < 0) {
      throw SettlementError(SettlementError::Kind::insufficient_liquidity,
                            "vault " + p.asset.symbol() + " goes negative paying order " +
                                p.order_id);
    }
  }
}

}  // namespace

void VaultLedger::post(const Posting& p) {
  Decimal next = balance(p.asset) + p.qty;
  if (next.signum() < 0) {
    throw SettlementError(SettlementError::Kind::insufficient_liquidity,
                          "posting for " + p.order_id + " drives vault " + p.asset.symbol() +
                              " below zero");
  }
  balances_.insert_or_assign(p.asset, next);
  journal_.push_back(p);
}

void VaultLedger::deposit(const AssetId& asset, Decimal qty) {
  if (qty.signum() < 0) {
    throw SettlementError(SettlementError::Kind::insufficient_liquidity,
                          "opening deposit must be non-negative");
  }
  post(Posting{"opening", asset, qty});
  ++version_;
}

Decimal VaultLedger::balance(const AssetId& asset) const {
  auto it = balances_.find(asset);
  return it == balances_.end() ? Decimal{} : it->second;
}

VaultLedger VaultLedger::replay(std::span<const Posting> journal) {
  VaultLedger ledger;
  for (const auto& p : journal) ledger.post(p);
  ledger.version_ = journal.size();
  return ledger;
}

void VaultLedger::export_balances(std::ostream& out) const {
  for (const auto& [asset, qty] : balances_) out << asset.symbol() << ' ' << qty << '\n';
}

VaultLedger VaultLedger::import_balances(std::istream& in) {
  VaultLedger ledger;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string symbol;
    std::string qty;
    if (!(fields >> symbol)) continue;
    std::string extra;
    if (!(fields >> qty) || (fields >> extra)) {
      throw SettlementError(SettlementError::Kind::io,
                            "ledger line " + std::to_string(line_no) + ": expected 'SYMBOL balance'");
    }
    try {
      ledger.deposit(AssetId(symbol), Decimal::parse(qty));
    } catch (const DecimalError& e) {
      throw SettlementError(SettlementError::Kind::io,
                            "ledger line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return ledger;
}

void VaultLedger::export_journal(std::ostream& out) const {
  out << "order_id,symbol,signed_qty\n";
  for (const auto& p : journal_) out << p.order_id << ',' << p.asset.symbol() << ',' << p.qty << '\n';
}

std::vector<Posting> VaultLedger::import_journal(std::istream& in) {
  std::vector<Posting> journal;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line.rfind("order_id,", 0) == 0)) continue;
    auto last = line.rfind(',');
    auto mid = last == std::string::npos ? std::string::npos : line.rfind(',', last - 1);
    if (mid == std::string::npos) {
      throw SettlementError(SettlementError::Kind::io,
                            "journal line " + std::to_string(line_no) + ": expected 3 fields");
    }
    try {
      journal.push_back(Posting{line.substr(0, mid), AssetId(line.substr(mid + 1, last - mid - 1)),
                                Decimal::parse(line.substr(last + 1))});
    } catch (const Error& e) {
      throw SettlementError(SettlementError::Kind::io,
                            "journal line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return journal;
}

SettlementPlan plan_settlement(const CowCycle& cycle, const VaultLedger& ledger,
                               LiquidityCheck check) {
  SettlementPlan plan;
  plan.cycle = cycle;
  plan.ledger_version = ledger.version();
  plan.check = check;
  for (const auto& leg : cycle.legs) {
    const SwapOrder& o = leg.order;
    plan.postings.push_back(Posting{o.id(), o.give_asset(), o.give_qty()});
    plan.postings.push_back(Posting{o.id(), o.want_asset(), -o.want_qty()});
    plan.net_per_vault[o.give_asset()] += o.give_qty();
    plan.net_per_vault[o.want_asset()] -= o.want_qty();
  }
  for (const auto& [asset, net] : plan.net_per_vault) {
    if (!net.is_zero()) {
      throw SettlementError(SettlementError::Kind::not_closed,
                            "vault " + asset.symbol() + " nets " + net.to_string() +
                                " over the cycle; capital would not be preserved");
    }
  }
  verify_liquidity(plan, ledger);
  return plan;
}

VaultLedger apply_settlement(const SettlementPlan& plan, const VaultLedger& ledger) {
  if (plan.postings.empty()) return ledger;
  if (plan.ledger_version != ledger.version()) {
    throw SettlementError(SettlementError::Kind::stale_plan,
                          "plan computed against ledger version " +
                              std::to_string(plan.ledger_version) + ", ledger is at " +
                              std::to_string(ledger.version()));
  }
  verify_liquidity(plan, ledger);
  VaultLedger next = ledger;
  if (plan.check == LiquidityCheck::worst_case) {
    // Payouts first so that a failure can only come from a check already passed above.
    for (const auto& p : plan.postings) {
      if (p.qty.signum() < 0) next.post(p);
    }
    for (const auto& p : plan.postings) {
      if (p.qty.signum() >= 0) next.post(p);
    }
  } else {
    for (const auto& p : plan.postings) next.post(p);
  }
  ++next.version_;
  return next;
}

}  // namespace cowsettle
