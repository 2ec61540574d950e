#include "cowsettle/batch_engine.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "cowsettle/error.hpp"
#include "cowsettle/order_graph.hpp"
#include "cowsettle/transfer_matrix.hpp"

namespace cowsettle {

void BatchConfig::validate() const {
  if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (expiry_window.count() <= 0) throw ConfigError("expiry_window must be positive");
  if (k_max < 2) throw ConfigError("k_max must be at least 2");
  if (epsilon < 0) throw ConfigError("epsilon must be non-negative");
  if (max_bridge_usd && *max_bridge_usd <= 0) throw ConfigError("max_bridge_usd must be positive");
  if (operator_assets && operator_assets->empty()) {
    throw ConfigError("operator_assets must name at least one asset");
  }
}

std::string_view to_string(OperatorStatus status) {
  switch (status) {
    case OperatorStatus::fully_feasible: return "fully-feasible";
    case OperatorStatus::completed_via_bridging: return "completed-via-bridging";
    case OperatorStatus::no_cow_cycle: return "no-cow-cycle";
    case OperatorStatus::isolated_asset: return "isolated-asset";
  }
  return "unknown";
}

std::size_t BatchReport::bridge_count() const {
  return static_cast<std::size_t>(std::count_if(
      discoveries.begin(), discoveries.end(), [](const Discovery& d) { return d.bridge.has_value(); }));
}

std::vector<std::vector<std::size_t>> form_batches(std::span<const SwapOrder> orders,
                                                   const BatchConfig& config) {
  config.validate();
  std::vector<std::size_t> by_time(orders.size());
  std::iota(by_time.begin(), by_time.end(), std::size_t{0});
  std::stable_sort(by_time.begin(), by_time.end(), [&](std::size_t a, std::size_t b) {
    return orders[a].timestamp() < orders[b].timestamp();
  });

  std::vector<std::vector<std::size_t>> batches;
  std::vector<std::size_t> current;
  std::int64_t oldest = 0;
  for (std::size_t idx : by_time) {
    if (!current.empty() &&
        (current.size() >= config.batch_size ||
         orders[idx].timestamp() - oldest > config.expiry_window.count())) {
      std::sort(current.begin(), current.end());
      batches.push_back(std::move(current));
      current.clear();
    }
    if (current.empty()) oldest = orders[idx].timestamp();
    current.push_back(idx);
  }
  if (!current.empty()) {
    std::sort(current.begin(), current.end());
    batches.push_back(std::move(current));
  }
  return batches;
}

VaultLedger provision_vaults(std::span<const SwapOrder> batch) {
  std::map<AssetId, Decimal> need;
  for (const auto& o : batch) {
    need[o.give_asset()] += o.give_qty();
    need[o.want_asset()] += o.want_qty();
  }
  VaultLedger ledger;
  for (const auto& [asset, qty] : need) ledger.deposit(asset, qty);
  return ledger;
}

namespace {

std::string arrow_path(const std::vector<AssetId>& assets) {
  std::string out;
  for (std::size_t i = 0; i < assets.size(); ++i) {
    if (i > 0) out += " → ";
    out += assets[i].symbol();
  }
  return out;
}

// State shared by the three discovery phases of one batch run.
class BatchRun {
 public:
  BatchRun(std::span<const SwapOrder> batch, const BatchConfig& config, const PriceTable& table,
           std::span<const std::size_t> row_labels)
      : config_(config), table_(table) {
    for (std::size_t i = 0; i < batch.size(); ++i) {
      std::size_t label = row_labels.empty() ? i : row_labels[i];
      report_.rows.push_back(label);
      // Pricing both sides up front aborts the batch on any unpriced asset.
      table.price(batch[i].give_asset());
      table.price(batch[i].want_asset());
      if (batch[i].synthetic()) continue;
      orders_.push_back(batch[i].with_assets(table.canonical(batch[i].give_asset()),
                                             table.canonical(batch[i].want_asset())));
      labels_.push_back(label);
    }
    graph_ = build_graph(orders_);
    for (const auto& o : orders_) {
      Rational cap = usd_value(o, table).give_usd;
      capacity_.push_back(cap);
      residual_.push_back(cap);
    }
    report_.all_operators = !config.operator_assets.has_value();
    report_.k_max = config.k_max;
    report_.bridging_enabled = config.bridging_enabled;
    report_.allow_partial_fills = config.allow_partial_fills;
    report_.feasibility_mode = config.feasibility_mode;

    if (config.operator_assets) {
      for (const auto& a : *config.operator_assets) {
        operators_.push_back(table.contains(a) ? table.canonical(a) : a);
      }
    } else {
      operators_ = graph_.nodes();
    }
  }

  BatchReport run(const VaultLedger& ledger) {
    discover_complete_cycles();
    build_operator_outcomes();
    select_and_settle(ledger);
    return std::move(report_);
  }

 private:
  bool is_operator(const AssetId& a) const {
    return std::find(operators_.begin(), operators_.end(), a) != operators_.end();
  }

  // Ingested quotes are already rounded to 18 digits, so every check allows epsilon.
  Rational tolerance() const { return config_.epsilon; }

  std::vector<SwapOrder> legs_of(std::span<const std::size_t> indices) const {
    std::vector<SwapOrder> legs;
    for (std::size_t i : indices) legs.push_back(orders_[i]);
    return legs;
  }

  void note(const AssetId& op, std::string line) { pending_notes_[op.key()].push_back(std::move(line)); }

  // Phase 1: complete cycles through operator assets, largest first, each
  // consuming residual capacity of its legs.
  void discover_complete_cycles() {
    auto candidates = enumerate_cycles(graph_, config_.k_max);
    std::erase_if(candidates, [&](const CycleCandidate& c) {
      return std::none_of(c.assets.begin(), c.assets.end(),
                          [&](const AssetId& a) { return is_operator(a); });
    });
    auto full_volume = [&](const CycleCandidate& c) {
      Rational fill = capacity_[c.order_indices[0]];
      for (std::size_t i : c.order_indices) fill = std::min(fill, capacity_[i]);
      return fill * static_cast<long>(c.length());
    };
    std::vector<std::pair<Rational, CycleCandidate>> ranked;
    for (auto& c : candidates) ranked.emplace_back(full_volume(c), std::move(c));
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    for (const auto& [volume, cand] : ranked) {
      const auto& idx = cand.order_indices;
      std::size_t limiting = 0;
      for (std::size_t j = 1; j < idx.size(); ++j) {
        if (residual_[idx[j]] < residual_[idx[limiting]]) limiting = j;
      }
      Rational fill = residual_[idx[limiting]];
      if (fill == 0) continue;

      AssetId op = orders_[idx[limiting]].give_asset();
      if (!is_operator(op)) {
        for (const auto& candidate_op : operators_) {
          if (std::find(cand.assets.begin(), cand.assets.end(), candidate_op) != cand.assets.end()) {
            op = candidate_op;
            break;
          }
        }
      }
      std::size_t op_leg = 0;
      while (!(orders_[idx[op_leg]].give_asset() == op)) ++op_leg;
      std::vector<std::size_t> rotated = rotate_to(idx, idx[op_leg]);
      std::vector<SwapOrder> legs = legs_of(rotated);
      std::string label = arrow_path(cand.assets);

      if (!config_.allow_partial_fills &&
          std::any_of(rotated.begin(), rotated.end(), [&](std::size_t i) { return residual_[i] != fill; })) {
        note(op, "Cycle " + label + " needs a partial fill; partial fills disabled.");
        continue;
      }

      ScaledCycle scaled = scale_cycle(legs, fill, table_);
      std::vector<Decimal> fills;
      for (const auto& l : scaled.legs) fills.push_back(l.give_qty());
      FeasibilityVerdict verdict = check_cycle(legs, fills, table_, config_.feasibility_mode,
                                               tolerance());
      if (!verdict.feasible) {
        note(op, "Cycle " + label + " rejected: not value-feasible (" +
                     std::string(to_string(config_.feasibility_mode)) + ").");
        continue;
      }
      if (abs(verdict.rate_product_deviation) > config_.epsilon && !config_.allow_rate_surplus) {
        note(op, "Cycle " + label + " rejected: rate product deviates from 1.");
        continue;
      }

      CowCycle cycle;
      cycle.fill_usd = fill;
      cycle.rounded = scaled.rounded;
      cycle.verdict = std::move(verdict);
      for (std::size_t j = 0; j < rotated.size(); ++j) {
        cycle.legs.push_back(CycleLeg{scaled.legs[j], labels_[rotated[j]],
                                      usd_value(scaled.legs[j], table_).give_usd});
      }
      for (std::size_t i : rotated) residual_[i] -= fill;
      for (const auto& a : cand.assets) covered_.insert(a.key());
      complete_owner_.push_back(op);
      report_.discoveries.push_back(Discovery{std::move(cycle), std::nullopt, op, false, false, {}});
    }
  }

  struct Chain {
    std::vector<std::size_t> edges;
    Rational notional;
  };

  void collect_chains(std::size_t node, std::vector<std::size_t>& path, std::vector<bool>& on_path,
                      std::vector<Chain>& out) const {
    const std::size_t max_legs = static_cast<std::size_t>(config_.k_max - 1);
    for (std::size_t e : graph_.out_edges(node)) {
      if (residual_[e] == 0) continue;
      std::size_t next = graph_.to_node(e);
      if (on_path[next]) continue;
      path.push_back(e);
      if (path.size() >= 2) {
        Rational notional = residual_[path[0]];
        for (std::size_t p : path) notional = std::min(notional, residual_[p]);
        out.push_back(Chain{path, notional});
      }
      if (path.size() < max_legs) {
        on_path[next] = true;
        collect_chains(next, path, on_path, out);
        on_path[next] = false;
      }
      path.pop_back();
    }
  }

  // Phase 2: open chains from one operator asset closed by a single bridge.
  OperatorOutcome explore_bridges(const AssetId& op, std::size_t node) {
    OperatorOutcome outcome{op, OperatorStatus::no_cow_cycle, {}, take_notes(op)};
    std::vector<Chain> chains;
    std::vector<std::size_t> path;
    std::vector<bool> on_path(graph_.nodes().size(), false);
    on_path[node] = true;
    collect_chains(node, path, on_path, chains);

    std::size_t over_cap = 0;
    std::erase_if(chains, [&](const Chain& c) {
      bool drop = config_.max_bridge_usd && c.notional > *config_.max_bridge_usd;
      over_cap += drop ? 1 : 0;
      return drop;
    });
    std::stable_sort(chains.begin(), chains.end(), [&](const Chain& a, const Chain& b) {
      if (a.notional != b.notional) return a.notional < b.notional;
      return a.edges < b.edges;
    });

    for (const auto& chain : chains) {
      std::vector<SwapOrder> legs = legs_of(chain.edges);
      BridgeOptions options;
      options.epsilon = config_.epsilon;
      options.executor = config_.bridge_executor;
      options.order_id = "bridge-" + std::to_string(report_.bridge_count() + 1);
      options.target_usd = chain.notional;
      ClosedChain closed = close_chain(legs, table_, options);

      std::vector<SwapOrder> cycle_orders = legs;
      cycle_orders.push_back(closed.bridge.order);
      FeasibilityVerdict verdict =
          check_cycle(cycle_orders, closed.cycle.fills(), table_, config_.feasibility_mode,
                      tolerance());
      if (!verdict.feasible ||
          (abs(verdict.rate_product_deviation) > config_.epsilon && !config_.allow_rate_surplus)) {
        continue;
      }
      closed.cycle.verdict = std::move(verdict);
      for (std::size_t j = 0; j < chain.edges.size(); ++j) {
        closed.cycle.legs[j].row = labels_[chain.edges[j]];
      }
      for (std::size_t e : chain.edges) residual_[e] -= chain.notional;

      std::vector<AssetId> path_assets;
      for (std::size_t e : chain.edges) path_assets.push_back(orders_[e].give_asset());
      path_assets.push_back(orders_[chain.edges.back()].want_asset());
      outcome.notes.push_back("Partial sequence found: " + arrow_path(path_assets));
      outcome.notes.push_back("Missing leg: " + arrow_path({path_assets.back(), path_assets.front()}));

      outcome.status = OperatorStatus::completed_via_bridging;
      outcome.discoveries.push_back(report_.discoveries.size());
      report_.discoveries.push_back(
          Discovery{std::move(closed.cycle), std::move(closed.bridge), op, false, false, {}});
      return outcome;
    }

    std::optional<std::size_t> first_leg;
    for (std::size_t e : graph_.out_edges(node)) {
      if (residual_[e] > 0) {
        first_leg = e;
        break;
      }
    }
    if (first_leg) {
      outcome.notes.push_back("Partial sequence found: " +
                              arrow_path({op, orders_[*first_leg].want_asset()}));
    }
    if (over_cap > 0) {
      outcome.notes.push_back(std::to_string(over_cap) +
                              " closable chain(s) exceed the bridge notional limit.");
    }
    outcome.notes.push_back("No forward chains found.");
    return outcome;
  }

  std::vector<std::string> take_notes(const AssetId& op) {
    auto it = pending_notes_.find(op.key());
    if (it == pending_notes_.end()) return {};
    auto notes = std::move(it->second);
    pending_notes_.erase(it);
    return notes;
  }

  void build_operator_outcomes() {
    // Owners of complete cycles lead, in discovery order.
    std::vector<std::string> listed;
    auto complete_outcome = [&](const AssetId& op) {
      OperatorOutcome o{op, OperatorStatus::fully_feasible, {}, take_notes(op)};
      for (std::size_t d = 0; d < report_.discoveries.size(); ++d) {
        const auto& path = report_.discoveries[d].cycle.asset_path();
        bool owned = report_.discoveries[d].operator_asset == op;
        bool touches = std::find(path.begin(), path.end(), op) != path.end();
        if (owned || (!report_.all_operators && touches)) o.discoveries.push_back(d);
      }
      return o;
    };

    std::vector<OperatorOutcome> outcomes;
    std::vector<AssetId> deferred;
    if (report_.all_operators) {
      for (const auto& owner : complete_owner_) {
        if (std::find(listed.begin(), listed.end(), owner.key()) != listed.end()) continue;
        listed.push_back(owner.key());
        outcomes.push_back(complete_outcome(owner));
      }
    }
    for (const auto& op : operators_) {
      if (std::find(listed.begin(), listed.end(), op.key()) != listed.end()) continue;
      listed.push_back(op.key());
      if (covered_.contains(op.key())) {
        if (!report_.all_operators) outcomes.push_back(complete_outcome(op));
        continue;
      }
      auto node = graph_.node_index(op);
      if (!node) {
        outcomes.push_back(OperatorOutcome{op, OperatorStatus::isolated_asset, {},
                                           {"Asset " + op.symbol() + " does not appear in this batch."}});
        continue;
      }
      if (graph_.out_edges(*node).empty()) {
        deferred.push_back(op);
        outcomes.push_back(OperatorOutcome{op, OperatorStatus::isolated_asset, {}, {}});
        continue;
      }
      if (!config_.bridging_enabled) {
        OperatorOutcome o{op, OperatorStatus::no_cow_cycle, {}, take_notes(op)};
        o.notes.push_back("No complete cycle; bridging disabled.");
        outcomes.push_back(std::move(o));
        continue;
      }
      outcomes.push_back(explore_bridges(op, *node));
    }

    // Dead ends are judged last: isolated once nothing flowing into them is left open.
    for (auto& o : outcomes) {
      if (std::find(deferred.begin(), deferred.end(), o.asset) == deferred.end()) continue;
      std::size_t node = *graph_.node_index(o.asset);
      bool open_inflow = std::any_of(graph_.in_edges(node).begin(), graph_.in_edges(node).end(),
                                     [&](std::size_t e) { return residual_[e] > 0; });
      o.notes = take_notes(o.asset);
      o.notes.push_back("No outgoing swap from " + o.asset.symbol() + " found.");
      if (open_inflow) {
        o.status = OperatorStatus::no_cow_cycle;
        o.notes.push_back("Incoming swaps remain open; no forward chains found.");
      } else {
        o.status = OperatorStatus::isolated_asset;
      }
    }
    report_.operators = std::move(outcomes);
  }

  // Complete cycles first, then bridged ones by descending volume; no order may
  // settle in two cycles.
  void select_and_settle(const VaultLedger& ledger) {
    std::vector<std::size_t> order(report_.discoveries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto& da = report_.discoveries[a];
      const auto& db = report_.discoveries[b];
      if (da.bridge.has_value() != db.bridge.has_value()) return !da.bridge.has_value();
      if (!da.bridge) return false;
      Rational va = da.cycle.volume_usd();
      Rational vb = db.cycle.volume_usd();
      if (va != vb) return va > vb;
      return da.cycle.rows() < db.cycle.rows();
    });

    std::set<std::size_t> used;
    VaultLedger current = ledger;
    for (std::size_t d : order) {
      auto& disc = report_.discoveries[d];
      auto rows = disc.cycle.rows();
      if (std::any_of(rows.begin(), rows.end(), [&](std::size_t r) { return used.contains(r); })) {
        disc.settlement_note = "overlaps an order already selected in this batch";
        continue;
      }
      disc.selected = true;
      try {
        auto before = current.balances();
        SettlementPlan plan = plan_settlement(disc.cycle, current, config_.liquidity_check);
        VaultLedger next = apply_settlement(plan, current);
        for (const auto& [asset, qty] : before) {
          if (next.balance(asset) != qty) throw Error("capital not preserved in vault " + asset.symbol());
        }
        current = std::move(next);
        disc.settled = true;
        used.insert(rows.begin(), rows.end());
        auto& bucket = disc.bridge ? report_.bridged_rows : report_.settled_rows;
        bucket.insert(bucket.end(), rows.begin(), rows.end());
      } catch (const SettlementError& e) {
        disc.settlement_note = e.what();
      }
    }
    std::sort(report_.settled_rows.begin(), report_.settled_rows.end());
    std::sort(report_.bridged_rows.begin(), report_.bridged_rows.end());
    for (std::size_t label : report_.rows) {
      if (!used.contains(label)) report_.unmatched_rows.push_back(label);
    }
    report_.ledger_after = std::move(current);
  }

  const BatchConfig& config_;
  const PriceTable& table_;
  std::vector<SwapOrder> orders_;
  std::vector<std::size_t> labels_;
  AssetGraph graph_;
  std::vector<Rational> capacity_;
  std::vector<Rational> residual_;
  std::vector<AssetId> operators_;
  std::set<std::string> covered_;
  std::vector<AssetId> complete_owner_;
  std::map<std::string, std::vector<std::string>> pending_notes_;
  BatchReport report_;
};

}  // namespace

BatchReport run_batch(std::span<const SwapOrder> batch, const BatchConfig& config,
                      const PriceTable& table, const VaultLedger& ledger,
                      std::span<const std::size_t> row_labels) {
  config.validate();
  if (!row_labels.empty() && row_labels.size() != batch.size()) {
    throw ConfigError("run_batch: row_labels must match the batch size");
  }
  return BatchRun(batch, config, table, row_labels).run(ledger);
}

}  // namespace cowsettle
