#pragma once

#include "pmarket/hash.hpp"
#include "pmarket/rational.hpp"

#include <compare>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pmarket {

/// A forced claim encumbering a coin: either a proper outcome subset of an
/// N-ary event (binary force is the singleton {1} or {2}), or a claimed
/// settlement value for a dated vector-CFD event.
struct HistoryEntry {
    EventId event;
    std::variant<std::vector<int>, Rational> payload; // forced subset (sorted) | settlement

    bool is_subset() const { return payload.index() == 0; }
    const std::vector<int>& subset() const { return std::get<0>(payload); }
    const Rational& settlement() const { return std::get<1>(payload); }

    /// Unambiguous one-token form, e.g. "<hex>|S1,2" or "<hex>|V110".
    std::string canonical_token() const;
    std::string render() const; // short, human-oriented

    bool operator==(const HistoryEntry& other) const;
    bool operator<(const HistoryEntry& other) const;
};

HistoryEntry subset_entry(EventId event, std::vector<int> subset);
HistoryEntry settlement_entry(EventId event, Rational settlement);

/// The set of forced claims a coin carries. Entries are kept sorted in the
/// canonical order (event digest bytes, then payload) and deduplicated.
/// Two entries may share an event id (split-after-force can produce that);
/// the ledger audit reports such histories as warnings.
class HistorySet {
public:
    HistorySet() = default;
    explicit HistorySet(std::vector<HistoryEntry> entries);

    static HistorySet union_of(const HistorySet& a, const HistorySet& b);

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const std::vector<HistoryEntry>& entries() const { return entries_; }

    bool contains_event(const EventId& event) const;
    bool has_duplicate_event() const;

    HistorySet with(HistoryEntry extra) const;

    /// Canonical serialization: entries joined with ';' in canonical order.
    /// canonical_set_id hashes exactly this string.
    std::string canonical_serialization() const;
    std::string render() const;

    bool operator==(const HistorySet&) const = default;
    bool operator<(const HistorySet& other) const { return entries_ < other.entries_; }

private:
    std::vector<HistoryEntry> entries_;
};

/// Hash of the canonical serialization; equal sets give equal ids regardless
/// of insertion order. The empty set hashes the empty string.
Digest canonical_set_id(const HistorySet& entries);

/// Re-hashes a set-id into a larger set given its preimage. Verifies the
/// claimed id against the preimage and rejects additions whose event id
/// already appears in the preimage.
Digest extend_set_id(const Digest& claimed_id, const HistorySet& preimage, const HistorySet& additions);

} // namespace pmarket
