#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cowsettle/batch_engine.hpp"
#include "cowsettle/bridging.hpp"
#include "cowsettle/cli.hpp"
#include "cowsettle/error.hpp"
#include "cowsettle/feasibility.hpp"
#include "cowsettle/ingest.hpp"
#include "cowsettle/order_graph.hpp"
#include "cowsettle/report.hpp"
#include "cowsettle/transfer_matrix.hpp"

namespace py = pybind11;
using namespace cowsettle;

namespace {

// Decimals cross the boundary as strings so nothing is lost to floats.
using StrRows = std::vector<std::vector<std::string>>;

std::vector<std::string> symbols(const std::vector<AssetId>& assets) {
  std::vector<std::string> out;
  for (const auto& a : assets) out.push_back(a.symbol());
  return out;
}

py::dict imbalance_dict(const ImbalanceVector& n) {
  py::dict d;
  for (std::size_t j = 0; j < n.assets.size(); ++j) d[py::str(n.assets[j].symbol())] = format_exact(n.values[j]);
  return d;
}

PriceTable table_from_dict(const std::map<std::string, std::string>& prices) {
  std::vector<std::pair<AssetId, Decimal>> entries;
  for (const auto& [sym, p] : prices) entries.emplace_back(AssetId(sym), Decimal::parse(p));
  return PriceTable(std::move(entries), "python");
}

std::string run_batch_py(const std::vector<SwapOrder>& orders, const PriceTable& table, int k_max,
                         bool bridging, std::optional<std::vector<std::string>> operators,
                         bool partial_fills, const std::string& feasibility,
                         std::optional<std::string> max_bridge_usd,
                         std::vector<std::size_t> rows, const std::string& format) {
  BatchConfig config;
  config.k_max = k_max;
  config.bridging_enabled = bridging;
  config.allow_partial_fills = partial_fills;
  config.feasibility_mode = parse_feasibility_mode(feasibility);
  if (operators) {
    std::vector<AssetId> ops;
    for (const auto& s : *operators) ops.emplace_back(s);
    config.operator_assets = std::move(ops);
  }
  if (max_bridge_usd) config.max_bridge_usd = parse_rational(*max_bridge_usd);
  BatchReport report = run_batch(orders, config, table, provision_vaults(orders), rows);
  std::ostringstream out;
  std::span<const BatchReport> one(&report, 1);
  if (format == "text") {
    write_text_report(out, one);
  } else if (format == "structured") {
    write_structured_report(out, one);
  } else {
    throw ConfigError("format must be 'text' or 'structured'");
  }
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_cowsettle, m) {
  m.doc() = "CoW cycle discovery, bridging and vault settlement";

  static py::exception<Error> base(m, "CowSettleError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  py::class_<PriceTable>(m, "PriceTable")
      .def(py::init(&table_from_dict), py::arg("prices"))
      .def_static("load", [](const std::string& path) { return load_price_table(path); })
      .def("price", [](const PriceTable& t, const std::string& s) { return t.price(AssetId(s)).to_string(); })
      .def("__contains__", [](const PriceTable& t, const std::string& s) { return t.contains(AssetId(s)); })
      .def("__len__", &PriceTable::size);

  py::class_<SwapOrder>(m, "SwapOrder")
      .def(py::init([](std::string id, const std::string& give, const std::string& give_qty,
                       const std::string& want, const std::string& want_qty, const std::string& min_rate,
                       std::int64_t timestamp) {
             return SwapOrder(std::move(id), AssetId(give), Decimal::parse(give_qty), AssetId(want),
                              Decimal::parse(want_qty), parse_rational(min_rate), timestamp);
           }),
           py::arg("id"), py::arg("give_asset"), py::arg("give_qty"), py::arg("want_asset"),
           py::arg("want_qty"), py::arg("min_rate") = "1", py::arg("timestamp") = 0)
      .def_property_readonly("id", &SwapOrder::id)
      .def_property_readonly("give_asset", [](const SwapOrder& o) { return o.give_asset().symbol(); })
      .def_property_readonly("want_asset", [](const SwapOrder& o) { return o.want_asset().symbol(); })
      .def_property_readonly("give_qty", [](const SwapOrder& o) { return o.give_qty().to_string(); })
      .def_property_readonly("want_qty", [](const SwapOrder& o) { return o.want_qty().to_string(); })
      .def_property_readonly("timestamp", &SwapOrder::timestamp)
      .def_property_readonly("synthetic", &SwapOrder::synthetic)
      .def("__repr__", [](const SwapOrder& o) {
        return "SwapOrder(" + o.id() + ": " + o.give_qty().to_string() + " " + o.give_asset().symbol() +
               " -> " + o.want_qty().to_string() + " " + o.want_asset().symbol() + ")";
      });

  m.def(
      "ingest_csv",
      [](const std::string& path, const PriceTable& table, bool strict) {
        IngestResult r = ingest_csv(std::filesystem::path(path), table, IngestOptions{strict});
        return py::make_tuple(r.orders, r.rows, r.diagnostics);
      },
      py::arg("path"), py::arg("table"), py::arg("strict") = false,
      "Returns (orders, source_rows, diagnostics).");

  m.def(
      "enumerate_cycles",
      [](const std::vector<SwapOrder>& orders, int k_max) {
        std::vector<std::vector<std::size_t>> out;
        for (const auto& c : enumerate_cycles(build_graph(orders), k_max)) out.push_back(c.order_indices);
        return out;
      },
      py::arg("orders"), py::arg("k_max") = 4);

  m.def(
      "transfer_matrix",
      [](const std::vector<SwapOrder>& orders) {
        TransferMatrix t = build_transfer_matrix(orders);
        StrRows rows;
        for (const auto& r : t.rows) {
          rows.emplace_back();
          for (const auto& v : r) rows.back().push_back(v.to_string());
        }
        return py::make_tuple(symbols(t.assets), rows);
      },
      py::arg("orders"), "Returns (assets, rows) with +give / -want entries.");

  m.def(
      "dollar_matrix",
      [](const std::vector<SwapOrder>& orders, const PriceTable& table) {
        DollarMatrix v = to_dollars(build_transfer_matrix(orders), table);
        StrRows rows;
        for (const auto& r : v.rows) {
          rows.emplace_back();
          for (const auto& x : r) rows.back().push_back(format_exact(x));
        }
        return py::make_tuple(symbols(v.assets), rows);
      },
      py::arg("orders"), py::arg("table"));

  m.def(
      "imbalance",
      [](const std::vector<SwapOrder>& orders, const PriceTable& table) {
        return imbalance_dict(imbalance(to_dollars(build_transfer_matrix(orders), table)));
      },
      py::arg("orders"), py::arg("table"));

  m.def(
      "close_chain",
      [](const std::vector<SwapOrder>& chain, const PriceTable& table) {
        ClosedChain c = close_chain(chain, table);
        py::dict out;
        out["bridge"] = c.bridge.order;
        out["notional_usd"] = format_exact(c.bridge.notional_usd);
        out["legs"] = c.cycle.orders();
        out["imbalance_before"] = imbalance_dict(c.bridge.provenance);
        out["imbalance_after"] = imbalance_dict(imbalance(c.dollars));
        return out;
      },
      py::arg("chain"), py::arg("table"));

  m.def(
      "check_cycle",
      [](const std::vector<SwapOrder>& legs, const std::vector<std::string>& fills,
         const PriceTable& table, const std::string& mode) {
        std::vector<Decimal> q;
        for (const auto& f : fills) q.push_back(Decimal::parse(f));
        return check_cycle(legs, q, table, parse_feasibility_mode(mode)).feasible;
      },
      py::arg("legs"), py::arg("fills"), py::arg("table"), py::arg("mode") = "floor");

  m.def("run_batch", &run_batch_py, py::arg("orders"), py::arg("table"), py::arg("k_max") = 4,
        py::arg("bridging") = false, py::arg("operators") = py::none(), py::arg("partial_fills") = true,
        py::arg("feasibility") = "floor", py::arg("max_bridge_usd") = py::none(),
        py::arg("rows") = std::vector<std::size_t>{}, py::arg("format") = "structured",
        "Runs one batch against vaults provisioned from the batch; returns the report text.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Returns (exit_code, stdout, stderr).");
}
