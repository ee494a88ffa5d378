#pragma once

#include "pmarket/asset.hpp"
#include "pmarket/json_codec.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pmarket {

using Address = std::string;

struct AuditIssue {
    enum class Severity { Error, Warning };
    Severity severity;
    std::string message;

    bool operator==(const AuditIssue&) const = default;
};

struct AuditReport {
    std::vector<AuditIssue> issues;

    bool clean() const { return issues.empty(); }
    bool has_errors() const
    {
        for (const auto& i : issues)
            if (i.severity == AuditIssue::Severity::Error)
                return true;
        return false;
    }
    std::vector<std::string> render() const;
};

/// Cumulative per-event totals for indexed (incl. binary) events.
struct IndexedCounters {
    int arity = 0;
    Rational split_created;
    Rational combined;
    std::map<std::vector<int>, Rational> forced;

    bool operator==(const IndexedCounters&) const = default;
};

/// Cumulative totals for one (event, spec) vector series. Combines can mix
/// specs, so consumption is tracked per leg rather than as a single counter.
struct VectorCounters {
    VectorSpec spec;
    Rational split_created;
    std::vector<Rational> leg_consumed;

    bool operator==(const VectorCounters&) const = default;
};

/// Reference to one vector holding used as input to combine/force.
struct VectorAssetRef {
    EventId event;
    VectorSpec spec;
    int leg = 0;
    HistorySet history;
    Rational amount;
};

/// Account-based colored-coin ledger: an address -> balance map with an
/// append-only transaction log and full conservation counters. Mutations are
/// validate-then-apply; a failed operation leaves the ledger untouched.
/// Single-writer: callers serialize mutations, reads are const.
class Ledger {
public:
    Ledger() = default;
    explicit Ledger(const std::map<Address, Rational>& genesis);

    // --- event registry -----------------------------------------------------
    EventId register_event(const std::string& description);
    const std::map<EventId, std::string>& events() const { return events_; }
    std::optional<std::string> event_description(const EventId& event) const;

    // --- special transactions ----------------------------------------------
    void transfer(const Address& from, const Address& to, const AssetKey& key, const Rational& amount);
    void outcome_split(const Address& owner, const Rational& amount, const EventId& event, int arity,
                       const HistorySet& history = HistorySet{});
    /// Consumes `amount` of every leg of the event. Per leg the holding with
    /// the canonically smallest history that covers the amount is consumed,
    /// unless `leg_histories` pins one explicitly.
    void outcome_combine(const Address& owner, const EventId& event, const Rational& amount,
                         const std::optional<std::vector<HistorySet>>& leg_histories = std::nullopt);
    void outcome_force(const Address& owner, const EventId& event, std::vector<int> subset, const Rational& amount,
                       const HistorySet& history = HistorySet{});
    void burn(const Address& owner, const AssetKey& key, const Rational& amount);
    void announce_ownership(const std::vector<Address>& addresses, const std::string& message);

    // --- vector-CFD transactions (public surface lives in the cfd module) ---
    void vector_split(const Address& owner, const Rational& amount, const EventId& event, const VectorSpec& spec,
                      const HistorySet& history = HistorySet{});
    /// Returns validator warnings (e.g. a partial leg-set that satisfies the
    /// combine constraints on its own).
    std::vector<std::string> vector_combine(const Address& owner, const std::vector<VectorAssetRef>& assets);
    void vector_force(const Address& owner, const std::vector<VectorAssetRef>& assets,
                      const Rational& claimed_settlement, const Rational& tolerance);

    // --- queries -------------------------------------------------------------
    Rational balance(const Address& owner, const AssetKey& key) const;
    const std::map<Address, std::map<AssetKey, Rational>>& balances() const { return balances_; }
    Rational outstanding(const OutcomeTag& tag) const; // over all addresses and histories
    bool known_address(const Address& addr) const { return known_.count(addr) > 0; }

    /// Consolidates addresses linked by ownership announcements; the glove
    /// analytics read player holdings from this view.
    std::map<Address, std::map<AssetKey, Rational>> public_view() const;

    const std::map<EventId, IndexedCounters>& indexed_counters() const { return indexed_; }
    const std::map<std::pair<EventId, Digest>, VectorCounters>& vector_counters() const { return vector_; }
    const std::map<OutcomeTag, Rational, bool (*)(const OutcomeTag&, const OutcomeTag&)>& burned() const
    {
        return burned_;
    }
    const Rational& clean_supply() const { return clean_supply_; }
    const std::map<Address, Rational>& genesis() const { return genesis_; }

    const std::vector<nlohmann::json>& tx_log() const { return tx_log_; }
    /// Out-of-band annotation (orderbook checkpoints); replays as a no-op.
    void log_note(const std::string& kind, nlohmann::json data);

    /// Evaluates every ledger invariant; returns all violations, never mutates.
    AuditReport check_invariants() const;

    bool operator==(const Ledger& other) const;

    friend void to_json(nlohmann::json& j, const Ledger& l);
    static Ledger from_json(const nlohmann::json& j);

private:
    void credit(const Address& owner, const AssetKey& key, const Rational& amount);
    void debit(const Address& owner, const AssetKey& key, const Rational& amount);
    const Rational* find_balance(const Address& owner, const AssetKey& key) const;
    void require_positive(const Rational& amount) const;
    Address group_root(const Address& addr, const std::map<Address, Address>& parent) const;

    std::map<Address, std::map<AssetKey, Rational>> balances_;
    std::set<Address> known_;
    std::map<Address, Rational> genesis_;
    std::map<EventId, std::string> events_;
    std::map<EventId, IndexedCounters> indexed_;
    std::map<std::pair<EventId, Digest>, VectorCounters> vector_;
    std::map<OutcomeTag, Rational, bool (*)(const OutcomeTag&, const OutcomeTag&)> burned_{&tag_less};
    std::vector<std::pair<std::vector<Address>, std::string>> announcements_;
    std::vector<nlohmann::json> tx_log_;
    Rational genesis_clean_total_;
    Rational clean_supply_;
};

} // namespace pmarket
