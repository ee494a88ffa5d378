#include "pmarket/json_codec.hpp"
#include "pmarket/errors.hpp"

namespace nlohmann {

void adl_serializer<pmarket::Rational>::to_json(json& j, const pmarket::Rational& r)
{
    j = pmarket::format_exact(r);
}

void adl_serializer<pmarket::Rational>::from_json(const json& j, pmarket::Rational& r)
{
    r = pmarket::parse_rational(j.get<std::string>());
}

} // namespace nlohmann

namespace pmarket {

void to_json(nlohmann::json& j, const EventId& e)
{
    j = e.hex();
}

void from_json(const nlohmann::json& j, EventId& e)
{
    e = EventId{digest_from_hex(j.get<std::string>())};
}

void to_json(nlohmann::json& j, const HistoryEntry& e)
{
    j = nlohmann::json{{"event", e.event}};
    if (e.is_subset())
        j["subset"] = e.subset();
    else
        j["settlement"] = e.settlement();
}

void from_json(const nlohmann::json& j, HistoryEntry& e)
{
    EventId event = j.at("event").get<EventId>();
    if (j.contains("subset"))
        e = subset_entry(event, j.at("subset").get<std::vector<int>>());
    else
        e = settlement_entry(event, j.at("settlement").get<Rational>());
}

void to_json(nlohmann::json& j, const HistorySet& h)
{
    j = h.entries();
}

void from_json(const nlohmann::json& j, HistorySet& h)
{
    h = HistorySet(j.get<std::vector<HistoryEntry>>());
}

void to_json(nlohmann::json& j, const VectorSpec& s)
{
    j = nlohmann::json::array();
    for (const auto& leg : s.legs())
        j.push_back(nlohmann::json::array({leg.level, leg.weight}));
}

void from_json(const nlohmann::json& j, VectorSpec& s)
{
    std::vector<VectorLeg> legs;
    for (const auto& item : j)
        legs.push_back(VectorLeg{item.at(0).get<Rational>(), item.at(1).get<Rational>()});
    s = VectorSpec(std::move(legs));
}

void to_json(nlohmann::json& j, const OutcomeTag& t)
{
    std::visit(
        [&](const auto& tag) {
            using T = std::decay_t<decltype(tag)>;
            if constexpr (std::is_same_v<T, UnbetTag>) {
                j = nlohmann::json{{"kind", "unbet"}};
            } else if constexpr (std::is_same_v<T, IndexedTag>) {
                j = nlohmann::json{{"kind", "indexed"},
                                   {"event", tag.event},
                                   {"index", tag.index},
                                   {"arity", tag.arity}};
            } else {
                j = nlohmann::json{{"kind", "vector"},
                                   {"event", tag.event},
                                   {"spec", tag.spec},
                                   {"leg", tag.leg}};
            }
        },
        t);
}

void from_json(const nlohmann::json& j, OutcomeTag& t)
{
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "unbet") {
        t = UnbetTag{};
    } else if (kind == "indexed") {
        t = indexed_share(j.at("event").get<EventId>(), j.at("index").get<int>(), j.at("arity").get<int>());
    } else if (kind == "yes") {
        t = yes_share(j.at("event").get<EventId>());
    } else if (kind == "no") {
        t = no_share(j.at("event").get<EventId>());
    } else if (kind == "vector") {
        t = vector_share(j.at("event").get<EventId>(), j.at("spec").get<VectorSpec>(), j.at("leg").get<int>());
    } else {
        throw DomainError("unknown tag kind '" + kind + "'");
    }
}

void to_json(nlohmann::json& j, const AssetKey& k)
{
    j = nlohmann::json{{"tag", k.tag}, {"history", k.history}};
}

void from_json(const nlohmann::json& j, AssetKey& k)
{
    k.tag = j.at("tag").get<OutcomeTag>();
    if (j.contains("history"))
        k.history = j.at("history").get<HistorySet>();
    else
        k.history = HistorySet{};
}

} // namespace pmarket
