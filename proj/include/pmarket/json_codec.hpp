#pragma once

#include "pmarket/asset.hpp"

#include <json.hpp>

// Rational lives in boost's namespace, so it needs the explicit serializer
// rather than an ADL hook. Wire form: exact "n" / "n/d" strings.
namespace nlohmann {
template <>
struct adl_serializer<pmarket::Rational> {
    static void to_json(json& j, const pmarket::Rational& r);
    static void from_json(const json& j, pmarket::Rational& r);
};
} // namespace nlohmann

namespace pmarket {

// nlohmann ADL hooks. Digests travel as 64-char hex. These are the wire
// forms of the snapshot and script files.

void to_json(nlohmann::json& j, const EventId& e);
void from_json(const nlohmann::json& j, EventId& e);

void to_json(nlohmann::json& j, const HistoryEntry& e);
void from_json(const nlohmann::json& j, HistoryEntry& e);

void to_json(nlohmann::json& j, const HistorySet& h);
void from_json(const nlohmann::json& j, HistorySet& h);

void to_json(nlohmann::json& j, const VectorSpec& s);
void from_json(const nlohmann::json& j, VectorSpec& s);

void to_json(nlohmann::json& j, const OutcomeTag& t);
void from_json(const nlohmann::json& j, OutcomeTag& t);

void to_json(nlohmann::json& j, const AssetKey& k);
void from_json(const nlohmann::json& j, AssetKey& k);

} // namespace pmarket
