#include "pmarket/scenarios.hpp"
#include "pmarket/cfd.hpp"
#include "pmarket/errors.hpp"
#include "pmarket/glove.hpp"

namespace pmarket::scenarios {

namespace {

const std::string kObamaDescription = "Barack Obama will win re-election in 2012";
const std::string kIdolDescription =
    "Percentages for top 24 contestants in American Idol season 99: 1=band, 2=girl, 3=boy, 4=other";

/// Market trade at an exogenous price: seller hands over the asset, buyer
/// pays in clean coins.
void trade(Ledger& ledger, std::vector<std::string>& trace, const Address& seller, const Address& buyer,
           const AssetKey& asset, const Rational& amount, const Rational& total_price)
{
    ledger.transfer(seller, buyer, asset, amount);
    ledger.transfer(buyer, seller, clean_unbet_key(), total_price);
    trace.push_back(seller + " sells " + format_exact(amount) + " of " + asset.render() + " to " + buyer +
                    " for " + format_exact(total_price) + " coins");
}

Rational clean_balance(const Ledger& ledger, const Address& addr)
{
    return ledger.balance(addr, clean_unbet_key());
}

ScenarioResult scenario_s1()
{
    ScenarioResult r;
    r.name = "s1";
    r.headline_label = "gain";
    r.expected = parse_rational("1495");
    r.tolerance = 0;

    Ledger ledger(std::map<Address, Rational>{{"alice", parse_rational("5000")}, {"market", parse_rational("10000")}});
    EventId obama = ledger.register_event(kObamaDescription);

    ledger.outcome_split("alice", parse_rational("5000"), obama, 2);
    r.trace.push_back("alice splits 5000 coins on Obama2012");
    trade(ledger, r.trace, "alice", "market", AssetKey{no_share(obama), {}}, parse_rational("5000"),
          parse_rational("1500")); // market assigns 30% to No
    trade(ledger, r.trace, "market", "alice", AssetKey{no_share(obama), {}}, parse_rational("5000"),
          parse_rational("5")); // losing shares at 0.001
    ledger.outcome_combine("alice", obama, parse_rational("5000"));
    r.trace.push_back("alice combines 5000 Yes + 5000 No back into coins");

    r.headline = clean_balance(ledger, "alice") - parse_rational("5000");
    r.ledger = std::move(ledger);
    return r;
}

ScenarioResult scenario_s2()
{
    ScenarioResult r;
    r.name = "s2";
    r.headline_label = "gain";
    r.expected = parse_rational("2135.7");
    r.tolerance = 0;

    Ledger ledger(std::map<Address, Rational>{{"alice", parse_rational("5000")}, {"market", parse_rational("20000")}});
    EventId obama = ledger.register_event(kObamaDescription);

    ledger.outcome_split("market", parse_rational("7142.8"), obama, 2);
    r.trace.push_back("market splits 7142.8 coins on Obama2012");
    trade(ledger, r.trace, "market", "alice", AssetKey{yes_share(obama), {}}, parse_rational("7142.8"),
          parse_rational("5000")); // 7142.8 * 70% ~= 5000
    trade(ledger, r.trace, "alice", "market", AssetKey{yes_share(obama), {}}, parse_rational("7142.8"),
          parse_rational("7135.7")); // price rose to 0.999

    r.headline = clean_balance(ledger, "alice") - parse_rational("5000");
    r.ledger = std::move(ledger);
    return r;
}

ScenarioResult scenario_s3()
{
    ScenarioResult r;
    r.name = "s3";
    r.headline_label = "encumbered payment accepted";
    r.expected = parse_rational("803");
    r.tolerance = 0;

    Ledger ledger(std::map<Address, Rational>{{"alice", parse_rational("1000")}, {"market", parse_rational("5000")}});
    EventId obama = ledger.register_event(kObamaDescription);

    ledger.outcome_split("alice", parse_rational("1000"), obama, 2);
    r.trace.push_back("alice splits 1000 coins on Obama2012");
    trade(ledger, r.trace, "alice", "market", AssetKey{no_share(obama), {}}, parse_rational("1000"),
          parse_rational("300"));
    // losing-share holders demand 0.2 per share; alice forces instead
    ledger.outcome_force("alice", obama, {kYes}, parse_rational("1000"));
    r.trace.push_back("alice forces 1000 Yes shares into encumbered coins");

    AssetKey encumbered{unbet(), HistorySet({subset_entry(obama, {kYes})})};
    ledger.transfer("alice", "store", encumbered, parse_rational("803"));
    r.trace.push_back("store accepts 803 encumbered coins for an 800-coin item");

    r.headline = ledger.balance("store", encumbered);
    r.ledger = std::move(ledger);
    return r;
}

ScenarioResult scenario_idol()
{
    ScenarioResult r;
    r.name = "idol";
    r.headline_label = "profit";
    r.expected = parse_rational("10");
    r.tolerance = 0;

    Ledger ledger(std::map<Address, Rational>{{"alice", parse_rational("60")}, {"market", parse_rational("1000")}});
    EventId idol = ledger.register_event(kIdolDescription);

    ledger.outcome_split("alice", parse_rational("60"), idol, 4);
    r.trace.push_back("alice splits 60 coins four ways on the Idol event");
    trade(ledger, r.trace, "alice", "market", AssetKey{indexed_share(idol, 2, 4), {}}, parse_rational("60"),
          parse_rational("20")); // 1/3 * 60
    trade(ledger, r.trace, "alice", "market", AssetKey{indexed_share(idol, 3, 4), {}}, parse_rational("60"),
          parse_rational("20"));
    trade(ledger, r.trace, "market", "alice", AssetKey{indexed_share(idol, 2, 4), {}}, parse_rational("60"),
          parse_rational("15")); // 1/4 * 60 after the outcome is known
    trade(ledger, r.trace, "market", "alice", AssetKey{indexed_share(idol, 3, 4), {}}, parse_rational("60"),
          parse_rational("15"));
    ledger.outcome_combine("alice", idol, parse_rational("60"));
    r.trace.push_back("alice combines all four 60-share legs");

    r.headline = clean_balance(ledger, "alice") - parse_rational("60");
    r.ledger = std::move(ledger);
    return r;
}

ScenarioResult scenario_vector_cfd()
{
    ScenarioResult r;
    r.name = "vector-cfd";
    r.headline_label = "alice collects";
    r.expected = parse_rational("41.666");
    r.tolerance = parse_rational("0.001");

    Ledger ledger(std::map<Address, Rational>{{"alice", parse_rational("500")}, {"bob", parse_rational("200")}});
    EventId e5 = ledger.register_event(cfd::baseline_event_description("x"));
    VectorSpec spec({{parse_rational("75"), Rational(1, 3)},
                     {parse_rational("100"), Rational(1, 3)},
                     {parse_rational("125"), Rational(1, 3)}});

    cfd::vector_split(ledger, "alice", parse_rational("500"), e5, spec);
    r.trace.push_back("alice injects 500 coins as a 3-leg vector CFD");

    cfd::VectorAsset z1{parse_rational("500"), e5, spec, 1, {}};
    Rational buy_price = cfd::vector_price(z1, parse_rational("200"));
    trade(ledger, r.trace, "alice", "bob", AssetKey{vector_share(e5, spec, 1), {}}, parse_rational("500"),
          buy_price); // x at $200
    Rational sell_price = cfd::vector_price(z1, parse_rational("110"));
    trade(ledger, r.trace, "bob", "alice", AssetKey{vector_share(e5, spec, 1), {}}, parse_rational("500"),
          sell_price); // x fell to $110

    std::vector<VectorAssetRef> full_set;
    for (int j = 1; j <= 3; ++j)
        full_set.push_back({e5, spec, j, {}, parse_rational("500")});
    cfd::vector_combine(ledger, "alice", full_set);
    r.trace.push_back("alice soaks her full leg set back into 500 coins");

    r.headline = clean_balance(ledger, "alice") - parse_rational("500");
    r.ledger = std::move(ledger);
    return r;
}

} // namespace

std::vector<std::string> scenario_names()
{
    return {"s1", "s2", "s3", "idol", "vector-cfd"};
}

ScenarioResult run_scenario(const std::string& name)
{
    ScenarioResult r;
    if (name == "s1")
        r = scenario_s1();
    else if (name == "s2")
        r = scenario_s2();
    else if (name == "s3")
        r = scenario_s3();
    else if (name == "idol")
        r = scenario_idol();
    else if (name == "vector-cfd")
        r = scenario_vector_cfd();
    else
        throw DomainError("unknown scenario '" + name + "' (expected s1, s2, s3, idol or vector-cfd)");

    r.match = within(r.headline, r.expected, r.tolerance);
    return r;
}

std::string Table::csv() const
{
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i)
            out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

Table fig2_dataset(const Fig2Params& params)
{
    if (params.m_min < 1 || params.m_min > params.m_max)
        throw DomainError("fig2 needs 1 <= m_min <= m_max");
    Table t;
    t.header = {"m", "total_value"};
    for (long m = params.m_min; m <= params.m_max; ++m) {
        Rational value = glove::burn_revenue(glove::Side::Plus, m, params.n, params.p);
        t.rows.push_back({std::to_string(m), format_decimal(value, 6)});
    }
    return t;
}

Table fig4_dataset(const Fig4Params& params)
{
    if (params.m_min < 1 || params.m_min > params.m_max)
        throw DomainError("fig4 needs 1 <= m_min <= m_max");
    if (params.p_step <= 0 || params.p_min > params.p_max)
        throw DomainError("fig4 needs a positive p step and p_min <= p_max");

    std::vector<Rational> p_grid;
    for (Rational p = params.p_min; p <= params.p_max; p += params.p_step)
        p_grid.push_back(p);
    std::vector<long> m_grid;
    for (long m = params.m_min; m <= params.m_max; ++m)
        m_grid.push_back(m);

    Table t;
    t.header = {"p", "m", "total_value"};
    for (const auto& cell : glove::value_surface(params.n, m_grid, p_grid))
        t.rows.push_back({format_decimal(cell.p, 6), std::to_string(cell.m), format_decimal(cell.value, 6)});
    return t;
}

Table fig6_dataset(const Fig6Params& params)
{
    if (params.step <= 0)
        throw DomainError("fig6 needs a positive grid step");
    if (params.lower >= params.upper)
        throw DomainError("fig6 needs lower < upper");
    Table t;
    t.header = {"c", "yes_price", "no_price"};
    for (Rational c = params.lower; c <= params.upper; c += params.step) {
        auto [yes, no] = cfd::capped_cfd_price({c, params.lower, params.upper});
        t.rows.push_back({format_decimal(c, 6), format_decimal(yes, 6), format_decimal(no, 6)});
    }
    return t;
}

} // namespace pmarket::scenarios
