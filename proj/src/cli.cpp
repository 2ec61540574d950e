#include "cowsettle/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cowsettle/batch_engine.hpp"
#include "cowsettle/error.hpp"
#include "cowsettle/ingest.hpp"
#include "cowsettle/price_table.hpp"
#include "cowsettle/report.hpp"

namespace cowsettle {

namespace {

struct CliArgs {
  std::string orders;
  std::string prices;
  std::string operators = "all";
  std::string mode;
  int depth = 4;
  std::size_t batch_size = 10;
  long expiry_seconds = 240;
  bool bridge = false;
  bool partial_fills = true;
  std::string feasibility = "floor";
  std::string report;
  std::string format = "text";
  bool strict_ingest = false;
  std::string max_bridge_usd;
  std::string vaults;
  std::string ledger_out;
  std::string journal_out;
  std::string executor = "operator";
  std::string liquidity = "worst-case";
};

void build_app(CLI::App& app, CliArgs& a) {
  app.add_option("--orders", a.orders, "Swap CSV")->required();
  app.add_option("--prices", a.prices, "Oracle price file (SYMBOL=PRICE per line)")->required();
  app.add_option("--operator", a.operators, "Operator asset, comma list, or 'all'");
  app.add_option("--mode", a.mode, "'all-assets' is the same as --operator all")
      ->check(CLI::IsMember({"all-assets", "operator"}));
  app.add_option("--depth", a.depth, "Maximum cycle length (k_max)")->check(CLI::Range(2, 64));
  app.add_option("--batch-size", a.batch_size, "Orders per batch")->check(CLI::PositiveNumber);
  app.add_option("--expiry-seconds", a.expiry_seconds, "Batch expiry window")->check(CLI::PositiveNumber);
  app.add_flag("--bridge", a.bridge, "Complete open chains with bridging orders");
  app.add_flag("--partial-fills,!--no-partial-fills", a.partial_fills, "Allow partial fills (default on)");
  app.add_option("--feasibility", a.feasibility, "strict or floor")->check(CLI::IsMember({"strict", "floor"}));
  app.add_option("--report", a.report, "Write the report here instead of stdout");
  app.add_option("--format", a.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
  app.add_flag("--strict-ingest", a.strict_ingest, "Treat skippable rows as errors");
  app.add_option("--max-bridge-usd", a.max_bridge_usd, "Largest bridge notional in USD");
  app.add_option("--vaults", a.vaults, "Opening vault balances (SYMBOL balance per line)");
  app.add_option("--ledger-out", a.ledger_out, "Write closing vault balances");
  app.add_option("--journal-out", a.journal_out, "Write the vault journal as CSV");
  app.add_option("--executor", a.executor, "Account named as bridge executor");
  app.add_option("--liquidity", a.liquidity, "worst-case or sequential")
      ->check(CLI::IsMember({"worst-case", "sequential"}));
}

BatchConfig make_config(const CliArgs& a) {
  BatchConfig c;
  c.k_max = a.depth;
  c.batch_size = a.batch_size;
  c.expiry_window = std::chrono::seconds(a.expiry_seconds);
  c.bridging_enabled = a.bridge;
  c.allow_partial_fills = a.partial_fills;
  c.feasibility_mode = parse_feasibility_mode(a.feasibility);
  c.bridge_executor = a.executor;
  c.liquidity_check = a.liquidity == "sequential" ? LiquidityCheck::sequential : LiquidityCheck::worst_case;
  if (!a.max_bridge_usd.empty()) c.max_bridge_usd = parse_rational(a.max_bridge_usd);

  bool all = a.mode == "all-assets" || a.operators == "all" || a.operators == "ALL";
  if (!all) {
    std::vector<AssetId> ops;
    std::stringstream list(a.operators);
    std::string item;
    while (std::getline(list, item, ',')) ops.emplace_back(item);
    c.operator_assets = std::move(ops);
  }
  c.validate();
  return c;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SettlementError(SettlementError::Kind::io, "cannot write " + path);
  out << content;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Batch CoW cycle discovery and vault settlement", "cowsettle"};
  CliArgs a;
  build_app(app, a);
  if (args.empty()) {
    err << app.help();
    return exit_usage;
  }

  BatchConfig config;
  ReportOptions report_options;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    config = make_config(a);
    report_options.quantity_digits = display_precision_from_env();
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return exit_usage;
  } catch (const Error& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_usage;
  }

  PriceTable table;
  IngestResult ingested;
  std::optional<VaultLedger> opening;
  try {
    table = load_price_table(a.prices);
    ingested = ingest_csv(std::filesystem::path(a.orders), table, IngestOptions{a.strict_ingest});
    if (!a.vaults.empty()) {
      std::ifstream in(a.vaults);
      if (!in) throw IngestError("cannot open vault file " + a.vaults);
      opening = VaultLedger::import_balances(in);
    }
  } catch (const Error& e) {
    err << "ingest error: " << e.what() << '\n';
    return exit_ingest;
  }
  for (const auto& d : ingested.diagnostics) err << d << '\n';

  try {
    std::vector<BatchReport> reports;
    std::optional<VaultLedger> carried = opening;
    VaultLedger last;
    for (const auto& idx : form_batches(ingested.orders, config)) {
      std::vector<SwapOrder> batch;
      std::vector<std::size_t> labels;
      for (std::size_t i : idx) {
        batch.push_back(ingested.orders[i]);
        labels.push_back(ingested.rows[i]);
      }
      VaultLedger ledger = carried ? *carried : provision_vaults(batch);
      reports.push_back(run_batch(batch, config, table, ledger, labels));
      last = reports.back().ledger_after;
      if (carried) carried = last;
    }

    std::ostringstream rendered;
    if (a.format == "structured") {
      write_structured_report(rendered, reports);
    } else {
      write_text_report(rendered, reports, report_options);
    }
    if (a.report.empty()) {
      out << rendered.str();
    } else {
      write_file(a.report, rendered.str());
    }
    if (!a.ledger_out.empty()) {
      std::ostringstream s;
      last.export_balances(s);
      write_file(a.ledger_out, s.str());
    }
    if (!a.journal_out.empty()) {
      std::ostringstream s;
      last.export_journal(s);
      write_file(a.journal_out, s.str());
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_engine;
  }
  return exit_ok;
}

}  // namespace cowsettle
