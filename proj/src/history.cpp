#include "pmarket/history.hpp"
#include "pmarket/errors.hpp"

#include <algorithm>

namespace pmarket {

namespace {

std::string payload_token(const HistoryEntry& e)
{
    if (e.is_subset()) {
        std::string s = "S";
        for (std::size_t i = 0; i < e.subset().size(); ++i) {
            if (i)
                s += ',';
            s += std::to_string(e.subset()[i]);
        }
        return s;
    }
    return "V" + format_exact(e.settlement());
}

} // namespace

std::string HistoryEntry::canonical_token() const
{
    return event.hex() + "|" + payload_token(*this);
}

std::string HistoryEntry::render() const
{
    return event.short_hex() + "|" + payload_token(*this);
}

bool HistoryEntry::operator==(const HistoryEntry& other) const
{
    return event == other.event && payload == other.payload;
}

bool HistoryEntry::operator<(const HistoryEntry& other) const
{
    if (event != other.event)
        return event < other.event;
    if (payload.index() != other.payload.index())
        return payload.index() < other.payload.index();
    if (is_subset())
        return subset() < other.subset();
    return settlement() < other.settlement();
}

HistoryEntry subset_entry(EventId event, std::vector<int> subset)
{
    std::sort(subset.begin(), subset.end());
    subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
    if (subset.empty())
        throw DomainError("history entry subset must be nonempty");
    return HistoryEntry{event, std::move(subset)};
}

HistoryEntry settlement_entry(EventId event, Rational settlement)
{
    return HistoryEntry{event, std::move(settlement)};
}

HistorySet::HistorySet(std::vector<HistoryEntry> entries) : entries_(std::move(entries))
{
    std::sort(entries_.begin(), entries_.end());
    entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
}

HistorySet HistorySet::union_of(const HistorySet& a, const HistorySet& b)
{
    std::vector<HistoryEntry> merged = a.entries_;
    merged.insert(merged.end(), b.entries_.begin(), b.entries_.end());
    return HistorySet(std::move(merged));
}

bool HistorySet::contains_event(const EventId& event) const
{
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const HistoryEntry& e) { return e.event == event; });
}

bool HistorySet::has_duplicate_event() const
{
    for (std::size_t i = 1; i < entries_.size(); ++i)
        if (entries_[i].event == entries_[i - 1].event)
            return true;
    return false;
}

HistorySet HistorySet::with(HistoryEntry extra) const
{
    std::vector<HistoryEntry> merged = entries_;
    merged.push_back(std::move(extra));
    return HistorySet(std::move(merged));
}

std::string HistorySet::canonical_serialization() const
{
    std::string s;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i)
            s += ';';
        s += entries_[i].canonical_token();
    }
    return s;
}

std::string HistorySet::render() const
{
    if (entries_.empty())
        return "{}";
    std::string s = "{";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i)
            s += ',';
        s += entries_[i].render();
    }
    s += '}';
    return s;
}

Digest canonical_set_id(const HistorySet& entries)
{
    return sha256(entries.canonical_serialization());
}

Digest extend_set_id(const Digest& claimed_id, const HistorySet& preimage, const HistorySet& additions)
{
    if (canonical_set_id(preimage) != claimed_id)
        throw DomainError("set-id verification failed: preimage does not hash to the claimed id");
    for (const auto& e : additions.entries())
        if (preimage.contains_event(e.event))
            throw DomainError("set-id extension rejected: event already present in preimage");
    return canonical_set_id(HistorySet::union_of(preimage, additions));
}

} // namespace pmarket
