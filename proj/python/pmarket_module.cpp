#include "pmarket/cfd.hpp"
#include "pmarket/errors.hpp"
#include "pmarket/glove.hpp"
#include "pmarket/ledger_io.hpp"
#include "pmarket/orderbook.hpp"
#include "pmarket/scenarios.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pmarket;

namespace {

nlohmann::json to_nlohmann(const py::handle& obj)
{
    if (obj.is_none())
        return nullptr;
    if (py::isinstance<py::bool_>(obj))
        return obj.cast<bool>();
    if (py::isinstance<py::int_>(obj))
        return obj.cast<long long>();
    if (py::isinstance<py::float_>(obj))
        return obj.cast<double>();
    if (py::isinstance<py::str>(obj))
        return obj.cast<std::string>();
    if (py::isinstance<py::dict>(obj)) {
        nlohmann::json out = nlohmann::json::object();
        for (auto item : obj.cast<py::dict>())
            out[item.first.cast<std::string>()] = to_nlohmann(item.second);
        return out;
    }
    if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
        nlohmann::json out = nlohmann::json::array();
        for (auto item : obj.cast<py::sequence>())
            out.push_back(to_nlohmann(item));
        return out;
    }
    throw DomainError("unsupported python value in operation body");
}

py::object to_python(const nlohmann::json& j)
{
    switch (j.type()) {
    case nlohmann::json::value_t::null:
        return py::none();
    case nlohmann::json::value_t::boolean:
        return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
        return py::int_(j.get<long long>());
    case nlohmann::json::value_t::number_unsigned:
        return py::int_(j.get<unsigned long long>());
    case nlohmann::json::value_t::number_float:
        return py::float_(j.get<double>());
    case nlohmann::json::value_t::string:
        return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
        py::list out;
        for (const auto& item : j)
            out.append(to_python(item));
        return out;
    }
    default: {
        py::dict out;
        for (const auto& [key, value] : j.items())
            out[py::str(key)] = to_python(value);
        return out;
    }
    }
}

Rational rat(const std::string& text)
{
    return parse_rational(text);
}

glove::Side side_of(const std::string& side)
{
    if (side == "plus" || side == "+")
        return glove::Side::Plus;
    if (side == "minus" || side == "-")
        return glove::Side::Minus;
    throw DomainError("side must be 'plus' or 'minus'");
}

VectorSpec spec_of(const std::vector<std::pair<std::string, std::string>>& legs)
{
    std::vector<VectorLeg> parsed;
    parsed.reserve(legs.size());
    for (const auto& [level, weight] : legs)
        parsed.push_back({rat(level), rat(weight)});
    return VectorSpec(std::move(parsed));
}

/// Script-level ledger wrapper: ops are dicts in the script-file format,
/// events and specs registered once by alias.
class PyLedger {
public:
    explicit PyLedger(const std::map<std::string, std::string>& genesis)
    {
        std::map<Address, Rational> parsed;
        for (const auto& [addr, amount] : genesis)
            parsed[addr] = rat(amount);
        ledger_ = Ledger(parsed);
    }

    static PyLedger load(const std::string& snapshot)
    {
        PyLedger out;
        out.ledger_ = Ledger::from_json(nlohmann::json::parse(snapshot));
        return out;
    }

    std::string register_event(const std::string& alias, const std::string& description)
    {
        EventId id = ledger_.register_event(description);
        events_[alias] = id;
        return id.hex();
    }

    void register_spec(const std::string& alias, const std::vector<std::pair<std::string, std::string>>& legs)
    {
        specs_[alias] = spec_of(legs);
    }

    void apply(const py::dict& op) { io::apply_op(ledger_, to_nlohmann(op), events_, specs_); }

    py::dict balances() const
    {
        py::dict out;
        for (const auto& [addr, assets] : ledger_.balances()) {
            py::dict inner;
            for (const auto& [key, amount] : assets)
                inner[py::str(key.render())] = py::str(format_exact(amount));
            out[py::str(addr)] = inner;
        }
        return out;
    }

    std::string balance(const std::string& addr, const py::dict& asset) const
    {
        nlohmann::json raw = to_nlohmann(asset);
        return format_exact(ledger_.balance(addr, raw.get<AssetKey>()));
    }

    std::vector<std::string> check() const { return ledger_.check_invariants().render(); }

    std::string snapshot() const { return io::snapshot_text(ledger_); }

    std::size_t tx_count() const { return ledger_.tx_log().size(); }

private:
    PyLedger() = default;

    Ledger ledger_;
    std::map<std::string, EventId> events_;
    std::map<std::string, VectorSpec> specs_;
};

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Arbiter-free prediction market toolkit (colored-coin ledger, glove-game "
              "analytics, CFD pricing, order-book simulator)";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    m.def("derive_event_id", [](const std::string& description) { return derive_event_id(description).hex(); },
          py::arg("description"));

    m.def("format_decimal", [](const std::string& value, int places) { return format_decimal(rat(value), places); },
          py::arg("value"), py::arg("places") = 6);

    // glove analytics
    m.def("coalition_value",
          [](long plus, long minus, const std::string& p) {
              return format_exact(glove::coalition_value({plus, minus}, rat(p)));
          },
          py::arg("plus"), py::arg("minus"), py::arg("p"));

    m.def("shapley_exact",
          [](long m, long n, const std::string& p) {
              auto r = glove::shapley_exact({m, n, rat(p)});
              py::dict out;
              out["v_minus"] = format_exact(r.v_minus);
              out["v_plus"] = format_exact(r.v_plus);
              out["s_minus"] = format_exact(r.s_minus);
              out["s_plus"] = format_exact(r.s_plus);
              out["v_minus_decimal"] = format_decimal(r.v_minus, 6);
              out["v_plus_decimal"] = format_decimal(r.v_plus, 6);
              return out;
          },
          py::arg("m"), py::arg("n"), py::arg("p"));

    m.def("shapley_bruteforce",
          [](const std::vector<std::tuple<std::string, long, long>>& players, const std::string& p, int cap) {
              std::vector<glove::BrutePlayer> parsed;
              for (const auto& [label, plus, minus] : players)
                  parsed.push_back({label, plus, minus});
              std::vector<std::string> out;
              for (const auto& v : glove::shapley_bruteforce(parsed, rat(p), cap))
                  out.push_back(format_exact(v));
              return out;
          },
          py::arg("players"), py::arg("p"), py::arg("cap") = glove::kDefaultBruteForceCap);

    m.def("shapley_montecarlo",
          [](long m, long n, const std::string& p, std::uint64_t samples, std::uint64_t seed) {
              auto est = glove::shapley_montecarlo(m, n, rat(p), samples, seed);
              py::dict out;
              out["v_minus"] = format_exact(est.v_minus);
              out["v_plus"] = format_exact(est.v_plus);
              out["se_minus"] = est.se_minus;
              out["se_plus"] = est.se_plus;
              out["samples"] = est.samples;
              return out;
          },
          py::arg("m"), py::arg("n"), py::arg("p"), py::arg("samples"), py::arg("seed"));

    m.def("burn_revenue",
          [](const std::string& side, long keep, long opposing, const std::string& p) {
              return format_exact(glove::burn_revenue(side_of(side), keep, opposing, rat(p)));
          },
          py::arg("side"), py::arg("keep"), py::arg("opposing"), py::arg("p"));

    m.def("optimal_burn",
          [](const std::string& side, long initial, long opposing, const std::string& p) {
              auto r = glove::optimal_burn(side_of(side), initial, opposing, rat(p));
              py::dict out;
              out["keep"] = r.keep_count;
              out["revenue"] = format_exact(r.revenue);
              out["revenue_decimal"] = format_decimal(r.revenue, 6);
              return out;
          },
          py::arg("side"), py::arg("initial"), py::arg("opposing"), py::arg("p"));

    m.def("consolidated_owner_value",
          [](long m, long n, const std::string& p, int cap) {
              return format_exact(glove::consolidated_owner_value(m, n, rat(p), cap));
          },
          py::arg("m"), py::arg("n"), py::arg("p"), py::arg("cap") = glove::kDefaultBruteForceCap);

    m.def("fungible_burn_total",
          [](const std::string& market_value, long total, long held, long burned) {
              return format_exact(glove::fungible_burn_total({rat(market_value), total, held, burned}));
          },
          py::arg("market_value"), py::arg("total"), py::arg("held"), py::arg("burned"));

    // cfd pricing
    m.def("capped_cfd_price",
          [](const std::string& c, const std::string& lower, const std::string& upper) {
              auto [yes, no] = cfd::capped_cfd_price({rat(c), rat(lower), rat(upper)});
              return py::make_tuple(format_exact(yes), format_exact(no));
          },
          py::arg("c"), py::arg("lower"), py::arg("upper"));

    m.def("continuous_settlement_value",
          [](const std::string& amount, const std::string& fraction) {
              return format_exact(cfd::continuous_settlement_value(rat(amount), rat(fraction)));
          },
          py::arg("amount"), py::arg("fraction"));

    m.def("vector_price",
          [](const std::string& amount, const std::vector<std::pair<std::string, std::string>>& spec, int leg,
             const std::string& c, bool prime) {
              cfd::VectorAsset asset{rat(amount), EventId{}, spec_of(spec), leg, {}};
              Rational value = prime ? cfd::vector_price_prime(asset, rat(c)) : cfd::vector_price(asset, rat(c));
              return format_exact(value);
          },
          py::arg("amount"), py::arg("spec"), py::arg("leg"), py::arg("c"), py::arg("prime") = false);

    // scenarios and datasets
    m.def("run_scenario",
          [](const std::string& name) {
              auto r = scenarios::run_scenario(name);
              py::dict out;
              out["name"] = r.name;
              out["headline_label"] = r.headline_label;
              out["headline"] = format_exact(r.headline);
              out["headline_decimal"] = format_decimal(r.headline, 6);
              out["expected"] = format_exact(r.expected);
              out["match"] = r.match;
              out["trace"] = r.trace;
              out["audit"] = r.audit().render();
              return out;
          },
          py::arg("name"));

    m.def("scenario_names", []() { return scenarios::scenario_names(); });

    m.def("dataset_csv",
          [](const std::string& which) {
              if (which == "fig2")
                  return scenarios::fig2_dataset({}).csv();
              if (which == "fig4")
                  return scenarios::fig4_dataset({}).csv();
              if (which == "fig6")
                  return scenarios::fig6_dataset({}).csv();
              throw DomainError("unknown dataset '" + which + "'");
          },
          py::arg("which"));

    // order book
    m.def("simulate_orderbook",
          [](const py::dict& script) {
              auto result = orderbook::simulate(to_nlohmann(script));
              py::dict out;
              out["trace"] = result.trace;
              out["trades"] = result.stats.trades;
              out["checkpoints"] = result.stats.checkpoints;
              out["reclaims"] = result.stats.reclaims;
              out["checkouts"] = result.stats.checkouts;
              out["rejected"] = result.stats.rejected_actions;
              py::dict balances;
              for (const auto& [trader, assets] : result.final_offchain) {
                  py::dict inner;
                  for (const auto& [key, amount] : assets)
                      if (amount != 0)
                          inner[py::str(key.render())] = py::str(format_exact(amount));
                  balances[py::str(trader)] = inner;
              }
              out["offchain"] = balances;
              return out;
          },
          py::arg("script"));

    // ledger
    py::class_<PyLedger>(m, "Ledger")
        .def(py::init<const std::map<std::string, std::string>&>(), py::arg("genesis"))
        .def_static("load", &PyLedger::load, py::arg("snapshot"))
        .def("register_event", &PyLedger::register_event, py::arg("alias"), py::arg("description"))
        .def("register_spec", &PyLedger::register_spec, py::arg("alias"), py::arg("legs"))
        .def("apply", &PyLedger::apply, py::arg("op"))
        .def("balances", &PyLedger::balances)
        .def("balance", &PyLedger::balance, py::arg("address"), py::arg("asset"))
        .def("check", &PyLedger::check)
        .def("snapshot", &PyLedger::snapshot)
        .def("tx_count", &PyLedger::tx_count);

    m.attr("__all__") = py::make_tuple(
        "derive_event_id", "format_decimal", "coalition_value", "shapley_exact", "shapley_bruteforce",
        "shapley_montecarlo", "burn_revenue", "optimal_burn", "consolidated_owner_value", "fungible_burn_total",
        "capped_cfd_price", "continuous_settlement_value", "vector_price", "run_scenario", "scenario_names",
        "dataset_csv", "simulate_orderbook", "Ledger");
}
