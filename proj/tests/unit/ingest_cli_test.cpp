#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "cowsettle/cli.hpp"
#include "cowsettle/error.hpp"
#include "cowsettle/ingest.hpp"
#include "cowsettle/report.hpp"
#include "fixtures.hpp"

using namespace cowsettle;
using namespace testing_support;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> sample_args(std::vector<std::string> extra) {
  std::vector<std::string> args{"--orders", fixture("sample_swaps.csv").string(), "--prices",
                                fixture("oracle.txt").string()};
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

IngestResult ingest_text(const std::string& csv, IngestOptions options = {}) {
  std::istringstream in(csv);
  return ingest_csv(in, oracle_prices(), options);
}

const char* kHeader = "time,blockchain,tx_hash,amount_usd,src_asset_symbol,dst_asset_symbol,sender_address,receiver\n";

}  // namespace

TEST(Timestamp, AcceptedForms) {
  EXPECT_EQ(parse_timestamp("1970-01-01 00:00"), 0);
  EXPECT_EQ(parse_timestamp("2025-06-25 14:10"), 1750860600);
  EXPECT_EQ(parse_timestamp("2025-06-25T14:10:00Z"), 1750860600);
  EXPECT_EQ(parse_timestamp("2025-06-25T16:10:00.250+02:00"), 1750860600);
  EXPECT_EQ(parse_timestamp("2025-06-25 14:10:30"), 1750860630);
  for (const char* bad : {"", "2025-06-25", "25-06-2025 14:10", "2025-02-30 10:00", "2025-06-25 24:00",
                          "2025-06-25 14:10 extra"}) {
    EXPECT_THROW(parse_timestamp(bad), IngestError) << bad;
  }
}

TEST(Csv, QuotedFieldsAndLineEndings) {
  std::istringstream in("a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\n\nlast,row");
  auto rows = parse_csv(in);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][0], "x,1");
  EXPECT_EQ(rows[1][1], "say \"hi\"");
  EXPECT_EQ(rows[2][1], "row");
  std::istringstream open("a\n\"never closed\n");
  EXPECT_THROW(parse_csv(open), IngestError);
}

TEST(Ingest, TableOneRowQuotedUsdEqual) {
  IngestResult r = ingest_csv(fixture("sample_swaps.csv"), oracle_prices());
  ASSERT_EQ(r.orders.size(), 10u);
  EXPECT_EQ(r.skipped(), 0u);
  const SwapOrder& row8 = r.orders[8];
  EXPECT_EQ(row8.id(), "0xa857...52ed");
  EXPECT_EQ(row8.give_asset().symbol(), "ETH");
  EXPECT_EQ(row8.give_qty(), dec("0.00008"));
  EXPECT_EQ(row8.want_asset().symbol(), "ARB");
  EXPECT_EQ(row8.want_qty(), dec("0.12"));
  EXPECT_EQ(row8.timestamp(), parse_timestamp("2025-06-25 14:10"));
  EXPECT_EQ(r.rows, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
}

TEST(Ingest, EmptyFileWithHeader) {
  IngestResult r = ingest_text(kHeader);
  EXPECT_TRUE(r.orders.empty());
  EXPECT_EQ(r.total_rows, 0u);
  EXPECT_THROW(ingest_text(""), IngestError);
  EXPECT_THROW(ingest_text("time,amount_usd\n"), IngestError);
}

TEST(Ingest, SkippedRowsAreAccountedFor) {
  std::string csv = std::string(kHeader) +
                    "2025-06-25 14:10,arbitrum,0x1,0,ETH,ARB,,\n"
                    "2025-06-25 14:10,arbitrum,0x2,5,ETH,DOGE,,\n"
                    "2025-06-25 14:10,arbitrum,0x3,5,eth,arb,,\n";
  IngestResult r = ingest_text(csv);
  EXPECT_EQ(r.total_rows, 3u);
  EXPECT_EQ(r.orders.size(), 1u);
  EXPECT_EQ(r.orders.size() + r.skipped(), r.total_rows);
  EXPECT_EQ(r.diagnostics.size(), 2u);
  EXPECT_EQ(r.rows, std::vector<std::size_t>{2});
  EXPECT_EQ(r.orders[0].give_asset().symbol(), "ETH");

  EXPECT_THROW(ingest_text(csv, IngestOptions{true}), IngestError);
}

TEST(Ingest, MalformedRowsAreErrors) {
  EXPECT_THROW(ingest_text(std::string(kHeader) + "2025-06-25 14:10,arbitrum,0x1,5,ETH\n"), IngestError);
  EXPECT_THROW(ingest_text(std::string(kHeader) + "yesterday,arbitrum,0x1,5,ETH,ARB,,\n"), IngestError);
  EXPECT_THROW(ingest_text(std::string(kHeader) + "2025-06-25 14:10,arbitrum,0x1,five,ETH,ARB,,\n"),
               IngestError);
}

TEST(Ingest, TwoAmountSchema) {
  std::istringstream in(
      "time,tx_hash,amount_usd,src_asset_symbol,dst_asset_symbol,give_qty,want_qty,min_rate\n"
      "2025-06-25T14:10:00Z,0x1,3000,ETH,USDC,1,2990,0.99\n");
  IngestResult r = ingest_csv(in, oracle_prices());
  ASSERT_EQ(r.orders.size(), 1u);
  EXPECT_EQ(r.orders[0].want_qty(), dec("2990"));
  EXPECT_EQ(r.orders[0].min_rate(), parse_rational("0.99"));
}

TEST(Cli, NoArgumentsIsUsageError) {
  CliRun r = cli({});
  EXPECT_EQ(r.code, exit_usage);
  EXPECT_NE(r.err.find("--orders"), std::string::npos);
}

TEST(Cli, BadFlagsAreUsageErrors) {
  EXPECT_EQ(cli(sample_args({"--depth", "1"})).code, exit_usage);
  EXPECT_EQ(cli(sample_args({"--feasibility", "loose"})).code, exit_usage);
  EXPECT_EQ(cli(sample_args({"--no-such-flag"})).code, exit_usage);
  EXPECT_EQ(cli({"--orders", "x.csv"}).code, exit_usage);
}

TEST(Cli, MissingFilesAreIngestErrors) {
  EXPECT_EQ(cli({"--orders", "/nonexistent.csv", "--prices", fixture("oracle.txt").string()}).code,
            exit_ingest);
  EXPECT_EQ(cli({"--orders", fixture("sample_swaps.csv").string(), "--prices", "/nonexistent.txt"}).code,
            exit_ingest);
}

TEST(Cli, OperatorEthMatchesGolden) {
  CliRun r = cli(sample_args({"--operator", "ETH", "--depth", "5"}));
  ASSERT_EQ(r.code, exit_ok) << r.err;
  EXPECT_EQ(r.out, read_file(fixture("trace_operator_eth.txt")));
}

TEST(Cli, AllAssetsBridgingMatchesGolden) {
  CliRun r = cli(sample_args({"--mode", "all-assets", "--depth", "3", "--bridge", "--max-bridge-usd", "10"}));
  ASSERT_EQ(r.code, exit_ok) << r.err;
  EXPECT_EQ(r.out, read_file(fixture("trace_all_assets_bridging.txt")));
}

TEST(Cli, ReportFilesAreIdempotent) {
  auto dir = std::filesystem::temp_directory_path() / "cowsettle_cli_test";
  std::filesystem::create_directories(dir);
  auto report = (dir / "report.json").string();
  auto ledger = (dir / "ledger.txt").string();
  auto journal = (dir / "journal.csv").string();
  std::vector<std::string> extra{"--operator", "all", "--depth", "3", "--bridge", "--format", "structured",
                                 "--report", report, "--ledger-out", ledger, "--journal-out", journal};
  ASSERT_EQ(cli(sample_args(extra)).code, exit_ok);
  std::string first = read_file(report);
  ASSERT_EQ(cli(sample_args(extra)).code, exit_ok);
  EXPECT_EQ(read_file(report), first);
  EXPECT_NE(first.find("\"cowsettle.report/1\""), std::string::npos);
  EXPECT_NE(read_file(journal).find("order_id,symbol,signed_qty"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Cli, PrecisionOverride) {
  ::setenv("COW_SETTLE_PRECISION", "3", 1);
  CliRun r = cli(sample_args({"--operator", "ETH", "--depth", "5"}));
  ::unsetenv("COW_SETTLE_PRECISION");
  ASSERT_EQ(r.code, exit_ok);
  EXPECT_NE(r.out.find("T1 : 0 ETH → 0.12 ARB"), std::string::npos);

  ::setenv("COW_SETTLE_PRECISION", "many", 1);
  EXPECT_EQ(cli(sample_args({"--operator", "ETH"})).code, exit_usage);
  ::unsetenv("COW_SETTLE_PRECISION");
}

TEST(Report, QuantityAndUsdFormatting) {
  EXPECT_EQ(format_quantity(dec("0.000113333333333333"), 7), "0.0001133");
  EXPECT_EQ(format_quantity(dec("0.042499999999999875"), 7), "0.0425");
  EXPECT_EQ(format_quantity(dec("0.00008"), 7), "0.00008");
  EXPECT_EQ(format_quantity(dec("1500"), 7), "1500");
  EXPECT_EQ(format_usd(parse_rational("1.019999999999999997")), "1.02");
  EXPECT_EQ(format_exact(Rational(1, 3)), "1/3");
  EXPECT_EQ(format_exact(parse_rational("0.24")), "0.24");
}
