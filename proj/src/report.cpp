#include "cowsettle/report.hpp"

#include <cstdlib>
#include <ostream>

#include <json.hpp>

#include "cowsettle/error.hpp"

namespace cowsettle {

namespace {

using Json = nlohmann::ordered_json;

std::string join_path(const std::vector<AssetId>& assets) {
  std::string out;
  for (std::size_t i = 0; i < assets.size(); ++i) {
    if (i > 0) out += " → ";
    out += assets[i].symbol();
  }
  return out;
}

std::string index_list(const std::vector<std::size_t>& rows) {
  std::string out = "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(rows[i]);
  }
  return out + "]";
}

std::string mode_line(const BatchReport& r) {
  if (r.all_operators) return "Mode: All operator assets";
  std::string names;
  for (const auto& o : r.operators) {
    if (!names.empty()) names += ", ";
    names += o.asset.symbol();
  }
  return (r.operators.size() == 1 ? "Mode: Operator asset: " : "Mode: Operator assets: ") + names;
}

void write_legs(std::ostream& out, const CowCycle& cycle, const ReportOptions& options) {
  if (!options.price_source.empty()) out << options.price_source << '\n';
  for (std::size_t j = 0; j < cycle.legs.size(); ++j) {
    const SwapOrder& o = cycle.legs[j].order;
    out << 'T' << j + 1 << " : " << format_quantity(o.give_qty(), options.quantity_digits) << ' '
        << o.give_asset().symbol() << " → " << format_quantity(o.want_qty(), options.quantity_digits)
        << ' ' << o.want_asset().symbol();
    if (o.synthetic()) out << " [synthetic bridging]";
    out << '\n';
  }
}

void write_complete(std::ostream& out, const Discovery& d, const ReportOptions& options) {
  out << "Cycle found: " << join_path(d.cycle.asset_path()) << '\n';
  out << "Swap Indices: " << index_list(d.cycle.rows()) << '\n';
  out << "Lowest Dollar Value: " << format_usd(d.cycle.fill_usd) << '\n';
  write_legs(out, d.cycle, options);
}

void write_bridged(std::ostream& out, const Discovery& d, const ReportOptions& options) {
  const SwapOrder& b = d.bridge->order;
  out << "Bridging order proposed:\n";
  out << "  " << b.give_asset().symbol() << " → " << b.want_asset().symbol()
      << " (value: " << format_usd(d.bridge->notional_usd) << " USD)\n";
  out << "Bridging index: [synthetic bridging]\n";
  out << "Swap Indices: " << index_list(d.cycle.rows()) << '\n';
  write_legs(out, d.cycle, options);
  out << "Cycle USD Volume (with bridging): ";
  for (std::size_t j = 0; j < d.cycle.legs.size(); ++j) {
    if (j > 0) out << " + ";
    out << format_usd(d.cycle.legs[j].give_usd);
  }
  out << " = " << format_usd(d.cycle.volume_usd()) << '\n';
}

std::string settlement_text(const Discovery& d) {
  if (d.settled) return "settled";
  if (!d.selected) return "not selected (" + d.settlement_note + ")";
  return "selected, not settled (" + d.settlement_note + ")";
}

void write_batch(std::ostream& out, const BatchReport& r, const ReportOptions& options) {
  for (const auto& op : r.operators) {
    out << "\n--- Testing operator asset: " << op.asset.symbol() << " ---\n";
    for (const auto& note : op.notes) out << note << '\n';
    for (std::size_t idx : op.discoveries) {
      const Discovery& d = r.discoveries[idx];
      if (d.bridge) {
        write_bridged(out, d, options);
      } else {
        write_complete(out, d, options);
      }
    }
    out << "Status: " << status_label(op.status) << '\n';
    if (op.status == OperatorStatus::fully_feasible) {
      for (std::size_t idx : op.discoveries) {
        out << "Cycle USD Volume: " << format_usd(r.discoveries[idx].cycle.fill_usd) << '\n';
      }
    }
  }

  out << "\nSummary:\n";
  out << r.bridge_count() << " bridging order" << (r.bridge_count() == 1 ? "" : "s")
      << " discovered:\n";
  for (const auto& d : r.discoveries) {
    if (!d.bridge) continue;
    out << "  - " << d.bridge->order.give_asset().symbol() << " → "
        << d.bridge->order.want_asset().symbol() << " : " << format_usd(d.bridge->notional_usd)
        << " USD\n";
  }
  out << "Settlement set:\n";
  for (const auto& d : r.discoveries) {
    out << "  - " << index_list(d.cycle.rows()) << (d.bridge ? " + bridge " : " ")
        << join_path(d.cycle.asset_path()) << " : " << settlement_text(d) << '\n';
  }
  out << "Settled rows: " << index_list(r.settled_rows) << '\n';
  out << "Bridged rows: " << index_list(r.bridged_rows) << '\n';
  out << "Unmatched rows: " << index_list(r.unmatched_rows) << '\n';
}

Json order_json(const SwapOrder& o) {
  Json j;
  j["order_id"] = o.id();
  j["give_asset"] = o.give_asset().symbol();
  j["give_qty"] = o.give_qty().to_string();
  j["want_asset"] = o.want_asset().symbol();
  j["want_qty"] = o.want_qty().to_string();
  j["synthetic"] = o.synthetic();
  return j;
}

Json cycle_json(const BatchReport& r, std::size_t id) {
  const Discovery& d = r.discoveries[id];
  Json j;
  j["id"] = id;
  j["operator_asset"] = d.operator_asset.symbol();
  j["status"] = std::string(to_string(d.bridge ? OperatorStatus::completed_via_bridging
                                               : OperatorStatus::fully_feasible));
  j["indices"] = d.cycle.rows();
  Json path = Json::array();
  for (const auto& a : d.cycle.asset_path()) path.push_back(a.symbol());
  j["assets"] = path;
  j["fill_usd"] = format_exact(d.cycle.fill_usd);
  j["volume_usd"] = format_exact(d.cycle.volume_usd());
  j["rounded"] = d.cycle.rounded;

  Json legs = Json::array();
  for (const auto& leg : d.cycle.legs) {
    Json l;
    l["row"] = leg.row ? Json(*leg.row) : Json(nullptr);
    l.update(order_json(leg.order));
    l["give_usd"] = format_exact(leg.give_usd);
    l["fill_fraction"] = format_exact(leg.order.fill_fraction());
    legs.push_back(std::move(l));
  }
  j["legs"] = std::move(legs);

  if (d.bridge) {
    Json b = order_json(d.bridge->order);
    b["notional_usd"] = format_exact(d.bridge->notional_usd);
    b["executor"] = d.bridge->executor;
    Json n;
    for (std::size_t k = 0; k < d.bridge->provenance.assets.size(); ++k) {
      n[d.bridge->provenance.assets[k].symbol()] = format_exact(d.bridge->provenance.values[k]);
    }
    b["imbalance"] = std::move(n);
    j["bridge"] = std::move(b);
  } else {
    j["bridge"] = nullptr;
  }

  if (d.cycle.verdict) {
    const auto& v = *d.cycle.verdict;
    Json f;
    f["mode"] = std::string(to_string(v.mode));
    f["feasible"] = v.feasible;
    f["rate_product_deviation"] = format_exact(v.rate_product_deviation);
    Json per = Json::array();
    for (const auto& leg : v.per_leg) {
      per.push_back(Json{{"realized_rate", format_exact(leg.realized_rate)},
                         {"required_rate", format_exact(leg.required_rate)},
                         {"pass", leg.pass}});
    }
    f["legs"] = std::move(per);
    j["feasibility"] = std::move(f);
  }
  j["selected"] = d.selected;
  j["settled"] = d.settled;
  j["settlement_note"] = d.settlement_note;
  return j;
}

Json batch_json(const BatchReport& r) {
  Json j;
  j["rows"] = r.rows;
  j["config"] = Json{{"operators", r.all_operators ? "all" : "listed"},
                     {"k_max", r.k_max},
                     {"bridging", r.bridging_enabled},
                     {"partial_fills", r.allow_partial_fills},
                     {"feasibility", std::string(to_string(r.feasibility_mode))}};
  Json ops = Json::array();
  for (const auto& o : r.operators) {
    ops.push_back(Json{{"asset", o.asset.symbol()},
                       {"status", std::string(to_string(o.status))},
                       {"cycles", o.discoveries},
                       {"notes", o.notes}});
  }
  j["operators"] = std::move(ops);
  Json cycles = Json::array();
  for (std::size_t i = 0; i < r.discoveries.size(); ++i) cycles.push_back(cycle_json(r, i));
  j["cycles"] = std::move(cycles);

  Rational settled_volume = 0;
  for (const auto& d : r.discoveries) {
    if (d.settled) settled_volume += d.cycle.volume_usd();
  }
  j["summary"] = Json{{"cycles", r.discoveries.size()},
                      {"bridging_orders", r.bridge_count()},
                      {"settled_volume_usd", format_exact(settled_volume)},
                      {"settled_rows", r.settled_rows},
                      {"bridged_rows", r.bridged_rows},
                      {"unmatched_rows", r.unmatched_rows}};
  Json vaults;
  for (const auto& [asset, qty] : r.ledger_after.balances()) vaults[asset.symbol()] = qty.to_string();
  j["vaults_after"] = std::move(vaults);
  return j;
}

}  // namespace

int display_precision_from_env(int fallback) {
  const char* raw = std::getenv("COW_SETTLE_PRECISION");
  if (raw == nullptr || *raw == '\0') return fallback;
  std::string text(raw);
  if (text.size() > 2 || text.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("COW_SETTLE_PRECISION must be an integer in [0, 18], got '" + text + "'");
  }
  int digits = std::stoi(text);
  if (digits > Decimal::kFractionDigits) {
    throw ConfigError("COW_SETTLE_PRECISION must be an integer in [0, 18], got '" + text + "'");
  }
  return digits;
}

std::string format_quantity(const Decimal& qty, int digits) {
  return format_rational(qty.to_rational(), digits, Rounding::half_even, true);
}

std::string format_usd(const Rational& usd) {
  return format_rational(usd, 2, Rounding::half_even, false);
}

std::string format_exact(const Rational& value) {
  BigInt den = denominator(value);
  while (den % 2 == 0) den /= 2;
  while (den % 5 == 0) den /= 5;
  if (den == 1) return to_exact_string(value);
  return numerator(value).str() + "/" + denominator(value).str();
}

std::string_view status_label(OperatorStatus status) {
  switch (status) {
    case OperatorStatus::fully_feasible: return "Fully Feasible";
    case OperatorStatus::completed_via_bridging: return "Completed via bridging";
    case OperatorStatus::no_cow_cycle: return "No CoW cycle";
    case OperatorStatus::isolated_asset: return "Isolated asset";
  }
  return "Unknown";
}

void write_text_report(std::ostream& out, std::span<const BatchReport> batches,
                       const ReportOptions& options) {
  out << "Starting find_cow_cycles...\n";
  if (!batches.empty()) {
    const BatchReport& first = batches.front();
    out << mode_line(first) << '\n';
    out << "Max depth: " << first.k_max << '\n';
    out << "Bridging mode: "
        << (first.bridging_enabled ? "Enabled (minimize bridging USD value)" : "Disabled") << '\n';
    out << "Partial fills: " << (first.allow_partial_fills ? "Allowed" : "Not allowed") << '\n';
    out << "Feasibility: " << to_string(first.feasibility_mode) << '\n';
  }
  for (std::size_t i = 0; i < batches.size(); ++i) {
    if (batches.size() > 1) {
      out << "\n=== Batch " << i + 1 << " of " << batches.size() << ": rows "
          << index_list(batches[i].rows) << " ===\n";
    }
    write_batch(out, batches[i], options);
  }
  out << "\nFinished find_cow_cycles.\n";
}

void write_structured_report(std::ostream& out, std::span<const BatchReport> batches) {
  Json root;
  root["format"] = "cowsettle.report/1";
  Json list = Json::array();
  for (const auto& b : batches) list.push_back(batch_json(b));
  root["batches"] = std::move(list);
  out << root.dump(2) << '\n';
}

}  // namespace cowsettle
