#include "pmarket/ledger_io.hpp"
#include "pmarket/errors.hpp"

#include <fstream>

namespace pmarket {

namespace {

bool is_hex_digest(const std::string& s)
{
    if (s.size() != 64)
        return false;
    for (char c : s)
        if (!std::isxdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

} // namespace

void to_json(nlohmann::json& j, const Ledger& l)
{
    nlohmann::json balances = nlohmann::json::object();
    for (const auto& [addr, assets] : l.balances_) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& [key, amount] : assets)
            list.push_back({{"tag", key.tag}, {"history", key.history}, {"amount", amount}});
        balances[addr] = std::move(list);
    }

    nlohmann::json indexed = nlohmann::json::object();
    for (const auto& [event, ctr] : l.indexed_) {
        nlohmann::json forced = nlohmann::json::array();
        for (const auto& [subset, amount] : ctr.forced)
            forced.push_back({{"subset", subset}, {"amount", amount}});
        indexed[event.hex()] = {{"arity", ctr.arity},
                                {"split_created", ctr.split_created},
                                {"combined", ctr.combined},
                                {"forced", std::move(forced)}};
    }

    nlohmann::json vec = nlohmann::json::array();
    for (const auto& [key, ctr] : l.vector_)
        vec.push_back({{"event", key.first},
                       {"spec_id", to_hex(key.second)},
                       {"spec", ctr.spec},
                       {"split_created", ctr.split_created},
                       {"leg_consumed", ctr.leg_consumed}});

    nlohmann::json burned = nlohmann::json::array();
    for (const auto& [tag, amount] : l.burned_)
        burned.push_back({{"tag", tag}, {"amount", amount}});

    nlohmann::json events = nlohmann::json::object();
    for (const auto& [event, desc] : l.events_)
        events[event.hex()] = desc;

    nlohmann::json genesis = nlohmann::json::object();
    for (const auto& [addr, amount] : l.genesis_)
        genesis[addr] = amount;

    nlohmann::json announcements = nlohmann::json::array();
    for (const auto& [addresses, message] : l.announcements_)
        announcements.push_back({{"addresses", addresses}, {"message", message}});

    j = nlohmann::json{{"format", "pmarket-ledger-v1"},
                       {"genesis", std::move(genesis)},
                       {"events", std::move(events)},
                       {"balances", std::move(balances)},
                       {"counters",
                        {{"indexed", std::move(indexed)},
                         {"vector", std::move(vec)},
                         {"burned", std::move(burned)},
                         {"clean_supply", l.clean_supply_},
                         {"genesis_clean_total", l.genesis_clean_total_}}},
                       {"known_addresses", l.known_},
                       {"announcements", std::move(announcements)},
                       {"tx_log", l.tx_log_}};
}

Ledger Ledger::from_json(const nlohmann::json& j)
{
    if (j.at("format").get<std::string>() != "pmarket-ledger-v1")
        throw DomainError("unsupported ledger snapshot format");

    Ledger l;
    for (const auto& [addr, amount] : j.at("genesis").items())
        l.genesis_[addr] = amount.get<Rational>();
    for (const auto& [hex, desc] : j.at("events").items())
        l.events_[EventId{digest_from_hex(hex)}] = desc.get<std::string>();
    for (const auto& [addr, list] : j.at("balances").items())
        for (const auto& item : list) {
            AssetKey key{item.at("tag").get<OutcomeTag>(), item.at("history").get<HistorySet>()};
            l.balances_[addr][key] = item.at("amount").get<Rational>();
        }

    const auto& counters = j.at("counters");
    for (const auto& [hex, c] : counters.at("indexed").items()) {
        IndexedCounters ctr;
        ctr.arity = c.at("arity").get<int>();
        ctr.split_created = c.at("split_created").get<Rational>();
        ctr.combined = c.at("combined").get<Rational>();
        for (const auto& f : c.at("forced"))
            ctr.forced[f.at("subset").get<std::vector<int>>()] = f.at("amount").get<Rational>();
        l.indexed_[EventId{digest_from_hex(hex)}] = std::move(ctr);
    }
    for (const auto& v : counters.at("vector")) {
        VectorCounters ctr;
        ctr.spec = v.at("spec").get<VectorSpec>();
        ctr.split_created = v.at("split_created").get<Rational>();
        ctr.leg_consumed = v.at("leg_consumed").get<std::vector<Rational>>();
        l.vector_[{v.at("event").get<EventId>(), digest_from_hex(v.at("spec_id").get<std::string>())}] =
            std::move(ctr);
    }
    for (const auto& b : counters.at("burned"))
        l.burned_[b.at("tag").get<OutcomeTag>()] = b.at("amount").get<Rational>();
    l.clean_supply_ = counters.at("clean_supply").get<Rational>();
    l.genesis_clean_total_ = counters.at("genesis_clean_total").get<Rational>();

    l.known_ = j.at("known_addresses").get<std::set<Address>>();
    for (const auto& a : j.at("announcements"))
        l.announcements_.emplace_back(a.at("addresses").get<std::vector<Address>>(),
                                      a.at("message").get<std::string>());
    l.tx_log_ = j.at("tx_log").get<std::vector<nlohmann::json>>();
    return l;
}

namespace io {

namespace {

/// Rewrites event / spec aliases to their raw forms anywhere in an op body.
nlohmann::json resolve_aliases(const nlohmann::json& node, const std::map<std::string, EventId>& events,
                               const std::map<std::string, VectorSpec>& specs)
{
    if (node.is_array()) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& item : node)
            out.push_back(resolve_aliases(item, events, specs));
        return out;
    }
    if (!node.is_object())
        return node;

    nlohmann::json out = nlohmann::json::object();
    for (const auto& [key, value] : node.items()) {
        if (key == "event" && value.is_string() && !is_hex_digest(value.get<std::string>())) {
            auto it = events.find(value.get<std::string>());
            if (it == events.end())
                throw DomainError("unknown event alias '" + value.get<std::string>() + "'");
            out[key] = it->second;
        } else if (key == "spec" && value.is_string()) {
            auto it = specs.find(value.get<std::string>());
            if (it == specs.end())
                throw DomainError("unknown spec alias '" + value.get<std::string>() + "'");
            out[key] = it->second;
        } else {
            out[key] = resolve_aliases(value, events, specs);
        }
    }
    return out;
}

std::vector<VectorAssetRef> parse_asset_refs(const nlohmann::json& arr)
{
    std::vector<VectorAssetRef> assets;
    for (const auto& a : arr) {
        VectorAssetRef ref;
        ref.event = a.at("event").get<EventId>();
        ref.spec = a.at("spec").get<VectorSpec>();
        ref.leg = a.at("leg").get<int>();
        if (a.contains("history"))
            ref.history = a.at("history").get<HistorySet>();
        ref.amount = a.at("amount").get<Rational>();
        assets.push_back(std::move(ref));
    }
    return assets;
}

} // namespace

void apply_op(Ledger& ledger, const nlohmann::json& raw_op, const std::map<std::string, EventId>& event_aliases,
              const std::map<std::string, VectorSpec>& spec_aliases)
{
    nlohmann::json op = resolve_aliases(raw_op, event_aliases, spec_aliases);
    const auto name = op.at("op").get<std::string>();

    auto history_of = [&](const char* field) {
        return op.contains(field) ? op.at(field).get<HistorySet>() : HistorySet{};
    };

    if (name == "register_event") {
        ledger.register_event(op.at("description").get<std::string>());
    } else if (name == "transfer") {
        ledger.transfer(op.at("from").get<std::string>(), op.at("to").get<std::string>(),
                        op.at("asset").get<AssetKey>(), op.at("amount").get<Rational>());
    } else if (name == "outcome_split") {
        ledger.outcome_split(op.at("owner").get<std::string>(), op.at("amount").get<Rational>(),
                             op.at("event").get<EventId>(), op.value("arity", 2), history_of("history"));
    } else if (name == "outcome_combine") {
        std::optional<std::vector<HistorySet>> legs;
        if (op.contains("leg_histories"))
            legs = op.at("leg_histories").get<std::vector<HistorySet>>();
        ledger.outcome_combine(op.at("owner").get<std::string>(), op.at("event").get<EventId>(),
                               op.at("amount").get<Rational>(), legs);
    } else if (name == "outcome_force") {
        ledger.outcome_force(op.at("owner").get<std::string>(), op.at("event").get<EventId>(),
                             op.at("subset").get<std::vector<int>>(), op.at("amount").get<Rational>(),
                             history_of("history"));
    } else if (name == "burn") {
        ledger.burn(op.at("owner").get<std::string>(), op.at("asset").get<AssetKey>(),
                    op.at("amount").get<Rational>());
    } else if (name == "announce") {
        ledger.announce_ownership(op.at("addresses").get<std::vector<Address>>(),
                                  op.value("message", std::string{}));
    } else if (name == "vector_split") {
        ledger.vector_split(op.at("owner").get<std::string>(), op.at("amount").get<Rational>(),
                            op.at("event").get<EventId>(), op.at("spec").get<VectorSpec>(), history_of("history"));
    } else if (name == "vector_combine") {
        ledger.vector_combine(op.at("owner").get<std::string>(), parse_asset_refs(op.at("assets")));
    } else if (name == "vector_force") {
        ledger.vector_force(op.at("owner").get<std::string>(), parse_asset_refs(op.at("assets")),
                            op.at("claimed_settlement").get<Rational>(),
                            op.contains("tolerance") ? op.at("tolerance").get<Rational>() : Rational(0));
    } else if (name == "note") {
        // annotations replay as no-ops to keep logs replayable
        ledger.log_note(op.at("kind").get<std::string>(), op.value("data", nlohmann::json::object()));
    } else {
        throw DomainError("unknown ledger op '" + name + "'");
    }
}

Ledger run_script(const nlohmann::json& script)
{
    std::map<Address, Rational> genesis;
    if (script.contains("genesis"))
        for (const auto& [addr, amount] : script.at("genesis").items())
            genesis[addr] = amount.get<Rational>();

    Ledger ledger(genesis);

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
            apply_op(ledger, op, events, specs);
    return ledger;
}

Ledger run_script_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot open script file " + path.string());
    nlohmann::json script = nlohmann::json::parse(in);
    return run_script(script);
}

Ledger replay(const std::map<Address, Rational>& genesis, const std::vector<nlohmann::json>& tx_log)
{
    Ledger ledger(genesis);
    for (const auto& op : tx_log)
        apply_op(ledger, op);
    return ledger;
}

std::string snapshot_text(const Ledger& ledger)
{
    nlohmann::json j = ledger;
    return j.dump(2) + "\n";
}

void save_snapshot(const Ledger& ledger, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DomainError("cannot write snapshot file " + path.string());
    out << snapshot_text(ledger);
}

Ledger load_snapshot(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot open snapshot file " + path.string());
    return Ledger::from_json(nlohmann::json::parse(in));
}

} // namespace io
} // namespace pmarket
