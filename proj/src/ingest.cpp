#include "cowsettle/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <istream>
#include <map>

#include "cowsettle/error.hpp"

namespace cowsettle {

namespace {

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Reads exactly `width` digits at `pos`.
int digits_at(std::string_view text, std::size_t& pos, std::size_t width) {
  if (pos + width > text.size()) throw IngestError("timestamp too short: '" + std::string(text) + "'");
  int value = 0;
  for (std::size_t i = 0; i < width; ++i) {
    char c = text[pos + i];
    if (c < '0' || c > '9') throw IngestError("bad timestamp: '" + std::string(text) + "'");
    value = value * 10 + (c - '0');
  }
  pos += width;
  return value;
}

void expect(std::string_view text, std::size_t& pos, char c) {
  if (pos >= text.size() || text[pos] != c) throw IngestError("bad timestamp: '" + std::string(text) + "'");
  ++pos;
}

}  // namespace

std::int64_t parse_timestamp(std::string_view raw) {
  std::string owned = trim(raw);
  std::string_view text = owned;
  std::size_t pos = 0;
  int y = digits_at(text, pos, 4);
  expect(text, pos, '-');
  int mo = digits_at(text, pos, 2);
  expect(text, pos, '-');
  int d = digits_at(text, pos, 2);
  if (pos >= text.size() || (text[pos] != ' ' && text[pos] != 'T')) {
    throw IngestError("bad timestamp: '" + owned + "'");
  }
  ++pos;
  int h = digits_at(text, pos, 2);
  expect(text, pos, ':');
  int mi = digits_at(text, pos, 2);
  int s = 0;
  if (pos < text.size() && text[pos] == ':') {
    ++pos;
    s = digits_at(text, pos, 2);
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos == start) throw IngestError("bad timestamp: '" + owned + "'");
    }
  }
  int offset = 0;
  if (pos < text.size()) {
    if (text[pos] == 'Z') {
      ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
      int sign = text[pos] == '-' ? -1 : 1;
      ++pos;
      int oh = digits_at(text, pos, 2);
      if (pos < text.size() && text[pos] == ':') ++pos;
      int om = digits_at(text, pos, 2);
      offset = sign * (oh * 3600 + om * 60);
    }
  }
  if (pos != text.size()) throw IngestError("bad timestamp: '" + owned + "'");

  using namespace std::chrono;
  year_month_day date{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!date.ok() || h > 23 || mi > 59 || s > 60) throw IngestError("bad timestamp: '" + owned + "'");
  auto days_since_epoch = sys_days(date).time_since_epoch();
  return duration_cast<seconds>(days_since_epoch).count() + h * 3600 + mi * 60 + s - offset;
}

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && in.peek() == '\n') in.get(c);
      row.push_back(std::move(field));
      field.clear();
      if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (in_quotes) throw IngestError("unterminated quoted field");
  if (any) {
    row.push_back(std::move(field));
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
  }
  return rows;
}

IngestResult ingest_csv(std::istream& in, const PriceTable& table, const IngestOptions& options) {
  auto rows = parse_csv(in);
  IngestResult result;
  if (rows.empty()) throw IngestError("missing header row");

  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < rows[0].size(); ++i) column.emplace(lower(trim(rows[0][i])), i);
  for (const char* required : {"time", "tx_hash", "amount_usd", "src_asset_symbol", "dst_asset_symbol"}) {
    if (!column.contains(required)) {
      throw IngestError(std::string("header lacks required column '") + required + "'");
    }
  }
  auto cell = [&](const std::vector<std::string>& row, const char* name) -> std::optional<std::string> {
    auto it = column.find(name);
    if (it == column.end()) return std::nullopt;
    return trim(row[it->second]);
  };

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    std::size_t data_row = r - 1;
    std::string where = "row " + std::to_string(data_row) + " (line " + std::to_string(r + 1) + ")";
    ++result.total_rows;
    if (row.size() != rows[0].size()) {
      throw IngestError(where + ": expected " + std::to_string(rows[0].size()) + " fields, got " +
                        std::to_string(row.size()));
    }

    SwapRecord rec;
    try {
      rec.time = parse_timestamp(*cell(row, "time"));
      rec.amount_usd = parse_rational(*cell(row, "amount_usd"));
    } catch (const Error& e) {
      throw IngestError(where + ": " + e.what());
    }
    rec.tx_hash = *cell(row, "tx_hash");
    rec.src_asset_symbol = *cell(row, "src_asset_symbol");
    rec.dst_asset_symbol = *cell(row, "dst_asset_symbol");
    rec.blockchain = cell(row, "blockchain").value_or("");
    rec.sender_address = cell(row, "sender_address").value_or("");
    rec.receiver = cell(row, "receiver").value_or("");
    try {
      if (auto g = cell(row, "give_qty"); g && !g->empty()) rec.give_qty = Decimal::parse(*g);
      if (auto w = cell(row, "want_qty"); w && !w->empty()) rec.want_qty = Decimal::parse(*w);
      if (auto m = cell(row, "min_rate"); m && !m->empty()) rec.min_rate = parse_rational(*m);
    } catch (const Error& e) {
      throw IngestError(where + ": " + e.what());
    }

    auto skip = [&](const std::string& why) {
      if (options.strict) throw IngestError(where + ": " + why);
      result.diagnostics.push_back(where + " skipped: " + why);
    };
    if (rec.src_asset_symbol.empty() || rec.dst_asset_symbol.empty()) {
      throw IngestError(where + ": empty asset symbol");
    }
    if (rec.amount_usd <= 0) {
      skip("amount_usd must be positive");
      continue;
    }
    try {
      AssetId src(rec.src_asset_symbol);
      AssetId dst(rec.dst_asset_symbol);
      bool priced = true;
      for (const AssetId* a : {&src, &dst}) {
        if (!table.contains(*a)) {
          skip("asset " + a->symbol() + " has no price");
          priced = false;
          break;
        }
      }
      if (!priced) continue;
      if (src == dst) {
        skip("source and destination asset are both " + src.symbol());
        continue;
      }
      Decimal give = rec.give_qty ? *rec.give_qty
                                  : Decimal::from_rational(rec.amount_usd / table.price_rational(src));
      Decimal want = rec.want_qty ? *rec.want_qty
                                  : Decimal::from_rational(rec.amount_usd / table.price_rational(dst));
      if (!give.is_positive() || !want.is_positive()) {
        skip("quantity is not positive at 18 fractional digits");
        continue;
      }
      std::string id = rec.tx_hash.empty() ? "row-" + std::to_string(data_row) : rec.tx_hash;
      result.orders.emplace_back(id, table.canonical(src), give, table.canonical(dst), want,
                                 rec.min_rate.value_or(Rational(1)), rec.time);
      result.rows.push_back(data_row);
    } catch (const IngestError&) {
      throw;
    } catch (const Error& e) {
      throw IngestError(where + ": " + e.what());
    }
  }
  return result;
}

IngestResult ingest_csv(const std::filesystem::path& path, const PriceTable& table,
                        const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open orders file " + path.string());
  return ingest_csv(in, table, options);
}

}  // namespace cowsettle
