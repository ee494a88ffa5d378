// pmarket: colored-coin prediction market toolkit.
//
// Subcommands replay the worked market scenarios, expose the glove-game
// analytics and CFD pricing, drive ledger script files, emit figure
// datasets, and run the semi-decentralized order-book simulator.
//
// Exit codes: 0 success, 1 usage error, 2 domain error, 3 invariant
// violation (or scenario mismatch).

#include "pmarket/cfd.hpp"
#include "pmarket/errors.hpp"
#include "pmarket/glove.hpp"
#include "pmarket/ledger_io.hpp"
#include "pmarket/orderbook.hpp"
#include "pmarket/scenarios.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace pmarket;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitInvariant = 3;

std::string show(const Rational& value)
{
    return format_decimal(value, 6) + " (exact " + format_exact(value) + ")";
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DomainError("cannot write " + path.string());
    out << text;
}

int run_scenario_cmd(const std::string& name, bool quiet)
{
    auto result = scenarios::run_scenario(name);
    if (!quiet)
        for (const auto& line : result.trace)
            std::cout << "  " << line << "\n";
    std::cout << "scenario " << result.name << ": " << result.headline_label << " = " << show(result.headline)
              << ", expected " << format_decimal(result.expected, 6)
              << (result.tolerance == 0 ? std::string(" exactly")
                                        : " within " + format_exact(result.tolerance))
              << " -> " << (result.match ? "match" : "MISMATCH") << "\n";

    auto audit = result.audit();
    if (!audit.clean()) {
        for (const auto& line : audit.render())
            std::cerr << line << "\n";
        return kExitInvariant;
    }
    return result.match ? kExitOk : kExitDomain;
}

glove::Side parse_side(const std::string& side)
{
    if (side == "plus" || side == "+")
        return glove::Side::Plus;
    if (side == "minus" || side == "-")
        return glove::Side::Minus;
    throw DomainError("side must be plus or minus");
}

VectorSpec parse_spec(const std::string& text)
{
    // "75:1/3,100:1/3,125:1/3"
    std::vector<VectorLeg> legs;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        std::string item = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
        if (!item.empty()) {
            auto colon = item.find(':');
            if (colon == std::string::npos)
                throw DomainError("vector spec legs look like level:weight");
            legs.push_back({parse_rational(item.substr(0, colon)), parse_rational(item.substr(colon + 1))});
        }
        if (end == std::string::npos)
            break;
        start = end + 1;
    }
    return VectorSpec(std::move(legs));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"pmarket: arbiter-free prediction market toolkit"};
    app.require_subcommand(1);

    // scenario
    std::string scenario_name;
    bool scenario_quiet = false;
    auto* scenario = app.add_subcommand("scenario", "replay a worked market episode");
    scenario->add_option("name", scenario_name, "one of: s1 s2 s3 idol vector-cfd")->required();
    scenario->add_flag("--quiet", scenario_quiet, "suppress the trade-by-trade trace");

    // dataset
    std::string dataset_which;
    std::string dataset_out;
    scenarios::Fig2Params fig2;
    scenarios::Fig4Params fig4;
    scenarios::Fig6Params fig6;
    std::string p_opt = "0", lower_opt = "20", upper_opt = "40", step_opt = "1", pstep_opt = "1/10";
    auto* dataset = app.add_subcommand("dataset", "emit a figure dataset as CSV");
    dataset->add_option("which", dataset_which, "fig2, fig4 or fig6")->required();
    dataset->add_option("--out", dataset_out, "output path")->required();
    dataset->add_option("--n", fig2.n, "opposing share count (fig2/fig4)");
    dataset->add_option("--p", p_opt, "agreement probability (fig2)");
    dataset->add_option("--m-min", fig2.m_min, "smallest kept-share count (fig2/fig4)");
    dataset->add_option("--m-max", fig2.m_max, "largest kept-share count (fig2/fig4)");
    dataset->add_option("--p-step", pstep_opt, "p grid step (fig4)");
    dataset->add_option("--lower", lower_opt, "lower barrier L (fig6)");
    dataset->add_option("--upper", upper_opt, "upper barrier H (fig6)");
    dataset->add_option("--step", step_opt, "price grid step (fig6)");

    // shapley
    long sh_m = 0, sh_n = 0;
    std::string sh_p, sh_method = "exact";
    std::uint64_t sh_samples = 1'000'000, sh_seed = 1;
    int sh_cap = glove::kDefaultBruteForceCap;
    auto* shapley = app.add_subcommand("shapley", "glove-game share values");
    shapley->add_option("m", sh_m, "count of + shareholders")->required();
    shapley->add_option("n", sh_n, "count of - shareholders")->required();
    shapley->add_option("p", sh_p, "agreement probability (decimal or fraction)")->required();
    shapley->add_option("--method", sh_method, "exact | brute | mc");
    shapley->add_option("--samples", sh_samples, "sample count for mc");
    shapley->add_option("--seed", sh_seed, "rng seed for mc");
    shapley->add_option("--cap", sh_cap, "player cap for brute");

    // burn
    std::string burn_side, burn_p;
    long burn_initial = 0, burn_opposing = 0;
    auto* burn = app.add_subcommand("burn", "optimal publicly verifiable share destruction");
    burn->add_option("side", burn_side, "plus or minus")->required();
    burn->add_option("initial", burn_initial, "shares held")->required();
    burn->add_option("opposing", burn_opposing, "opposing singleton count")->required();
    burn->add_option("p", burn_p, "agreement probability")->required();

    // consolidated
    long cons_m = 0, cons_n = 0;
    std::string cons_p;
    int cons_cap = glove::kDefaultBruteForceCap;
    auto* consolidated = app.add_subcommand("consolidated", "value of one owner holding all + shares");
    consolidated->add_option("m", cons_m, "consolidated + shares")->required();
    consolidated->add_option("n", cons_n, "singleton - players")->required();
    consolidated->add_option("p", cons_p, "agreement probability")->required();
    consolidated->add_option("--cap", cons_cap, "player cap for brute force");

    // fungible
    std::string fun_c;
    long fun_n = 0, fun_m = 0, fun_x = 0;
    auto* fungible = app.add_subcommand("fungible", "total value after burning ordinary coins");
    fungible->add_option("C", fun_c, "market value of the whole supply")->required();
    fungible->add_option("n", fun_n, "total coins")->required();
    fungible->add_option("m", fun_m, "coins held")->required();
    fungible->add_option("x", fun_x, "coins burned")->required();

    // cfd-price
    std::string cfd_c, cfd_l, cfd_h;
    auto* cfdprice = app.add_subcommand("cfd-price", "capped CFD share prices");
    cfdprice->add_option("c", cfd_c, "current price of the baseline asset")->required();
    cfdprice->add_option("L", cfd_l, "lower barrier")->required();
    cfdprice->add_option("H", cfd_h, "upper barrier")->required();

    // vector-price
    std::string vp_m, vp_c, vp_spec;
    int vp_leg = 1;
    bool vp_prime = false;
    auto* vectorprice = app.add_subcommand("vector-price", "market quote for one vector-CFD leg");
    vectorprice->add_option("m", vp_m, "asset amount")->required();
    vectorprice->add_option("c", vp_c, "current price of the baseline asset")->required();
    vectorprice->add_option("--spec", vp_spec, "legs as level:weight,... e.g. 75:1/3,100:1/3,125:1/3")->required();
    vectorprice->add_option("--leg", vp_leg, "leg index J (1-based)")->required();
    vectorprice->add_flag("--prime", vp_prime, "use the accuracy-amplified price'");

    // ledger apply
    std::string ledger_script, ledger_state;
    auto* ledger_cmd = app.add_subcommand("ledger", "ledger file operations");
    auto* ledger_apply = ledger_cmd->add_subcommand("apply", "run a transaction script");
    ledger_apply->add_option("script", ledger_script, "script JSON path")->required();
    ledger_apply->add_option("--state", ledger_state, "snapshot file to write (and load, if it exists)");

    // orderbook simulate
    std::string ob_script, ob_trace;
    std::uint64_t ob_seed = 0;
    bool ob_seed_set = false;
    auto* orderbook_cmd = app.add_subcommand("orderbook", "semi-decentralized order book");
    auto* ob_sim = orderbook_cmd->add_subcommand("simulate", "run a timed action script");
    ob_sim->add_option("script", ob_script, "simulation script JSON path")->required();
    ob_sim->add_option("--seed", ob_seed, "seed override")->each([&](const std::string&) { ob_seed_set = true; });
    ob_sim->add_option("--trace", ob_trace, "write the event trace to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (scenario->parsed())
            return run_scenario_cmd(scenario_name, scenario_quiet);

        if (dataset->parsed()) {
            scenarios::Table table;
            if (dataset_which == "fig2") {
                fig2.p = parse_rational(p_opt);
                table = scenarios::fig2_dataset(fig2);
            } else if (dataset_which == "fig4") {
                fig4.n = fig2.n;
                fig4.m_min = fig2.m_min;
                fig4.m_max = fig2.m_max;
                fig4.p_step = parse_rational(pstep_opt);
                table = scenarios::fig4_dataset(fig4);
            } else if (dataset_which == "fig6") {
                fig6.lower = parse_rational(lower_opt);
                fig6.upper = parse_rational(upper_opt);
                fig6.step = parse_rational(step_opt);
                table = scenarios::fig6_dataset(fig6);
            } else {
                throw DomainError("unknown dataset '" + dataset_which + "'");
            }
            write_file(dataset_out, table.csv());
            std::cout << "wrote " << table.rows.size() << " rows to " << dataset_out << "\n";
            return kExitOk;
        }

        if (shapley->parsed()) {
            Rational p = parse_rational(sh_p);
            if (sh_method == "exact") {
                auto result = glove::shapley_exact({sh_m, sh_n, p});
                std::cout << "v- = " << show(result.v_minus) << "\n";
                std::cout << "v+ = " << show(result.v_plus) << "\n";
            } else if (sh_method == "brute") {
                std::vector<glove::BrutePlayer> players;
                for (long i = 0; i < sh_m; ++i)
                    players.push_back({"plus" + std::to_string(i + 1), 1, 0});
                for (long i = 0; i < sh_n; ++i)
                    players.push_back({"minus" + std::to_string(i + 1), 0, 1});
                auto values = glove::shapley_bruteforce(players, p, sh_cap);
                for (std::size_t i = 0; i < values.size(); ++i)
                    std::cout << players[i].label << " = " << show(values[i]) << "\n";
            } else if (sh_method == "mc") {
                auto est = glove::shapley_montecarlo(sh_m, sh_n, p, sh_samples, sh_seed);
                std::cout << "v- = " << show(est.v_minus) << " se " << est.se_minus << "\n";
                std::cout << "v+ = " << show(est.v_plus) << " se " << est.se_plus << "\n";
            } else {
                throw DomainError("unknown method '" + sh_method + "'");
            }
            return kExitOk;
        }

        if (burn->parsed()) {
            auto analysis = glove::optimal_burn(parse_side(burn_side), burn_initial, burn_opposing,
                                                parse_rational(burn_p));
            std::cout << "keep " << analysis.keep_count << " of " << analysis.initial_count
                      << ", revenue = " << show(analysis.revenue) << "\n";
            return kExitOk;
        }

        if (consolidated->parsed()) {
            Rational value = glove::consolidated_owner_value(cons_m, cons_n, parse_rational(cons_p), cons_cap);
            std::cout << "consolidated owner value = " << show(value) << "\n";
            return kExitOk;
        }

        if (fungible->parsed()) {
            Rational value = glove::fungible_burn_total({parse_rational(fun_c), fun_n, fun_m, fun_x});
            std::cout << "total value after burn = " << show(value) << "\n";
            return kExitOk;
        }

        if (cfdprice->parsed()) {
            auto [yes, no] = cfd::capped_cfd_price({parse_rational(cfd_c), parse_rational(cfd_l),
                                                    parse_rational(cfd_h)});
            std::cout << "yes = " << show(yes) << "\n";
            std::cout << "no  = " << show(no) << "\n";
            return kExitOk;
        }

        if (vectorprice->parsed()) {
            cfd::VectorAsset asset{parse_rational(vp_m), EventId{}, parse_spec(vp_spec), vp_leg, {}};
            Rational c = parse_rational(vp_c);
            Rational value = vp_prime ? cfd::vector_price_prime(asset, c) : cfd::vector_price(asset, c);
            std::cout << (vp_prime ? "price' = " : "price = ") << show(value) << "\n";
            return kExitOk;
        }

        if (ledger_apply->parsed()) {
            std::filesystem::path state_path(ledger_state);
            Ledger ledger;
            if (!ledger_state.empty() && std::filesystem::exists(state_path)) {
                ledger = io::load_snapshot(state_path);
                std::ifstream in(ledger_script);
                if (!in)
                    throw DomainError("cannot open script file " + ledger_script);
                nlohmann::json script = nlohmann::json::parse(in);
                std::map<std::string, EventId> events;
                if (script.contains("events"))
                    for (const auto& [alias, description] : script.at("events").items())
                        events[alias] = ledger.register_event(description.get<std::string>());
                std::map<std::string, VectorSpec> specs;
                if (script.contains("specs"))
                    for (const auto& [alias, spec] : script.at("specs").items())
                        specs[alias] = spec.get<VectorSpec>();
                if (script.contains("ops"))
                    for (const auto& op : script.at("ops"))
                        io::apply_op(ledger, op, events, specs);
            } else {
                ledger = io::run_script_file(ledger_script);
            }

            auto audit = ledger.check_invariants();
            for (const auto& line : audit.render())
                std::cerr << line << "\n";
            if (!ledger_state.empty())
                io::save_snapshot(ledger, state_path);
            std::cout << "applied " << ledger.tx_log().size() << " logged transactions; audit "
                      << (audit.clean() ? "clean" : "NOT CLEAN") << "\n";
            return audit.has_errors() ? kExitInvariant : kExitOk;
        }

        if (ob_sim->parsed()) {
            auto result = orderbook::simulate_file(ob_script,
                                                   ob_seed_set ? std::optional<std::uint64_t>(ob_seed)
                                                               : std::nullopt);
            std::string trace = orderbook::trace_text(result);
            if (ob_trace.empty())
                std::cout << trace;
            else
                write_file(ob_trace, trace);
            std::cout << "trades=" << result.stats.trades << " checkpoints=" << result.stats.checkpoints
                      << " reclaims=" << result.stats.reclaims << " checkouts=" << result.stats.checkouts
                      << " rejected=" << result.stats.rejected_actions << "\n";
            return kExitOk;
        }
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::logic_error& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    }

    return kExitUsage;
}
