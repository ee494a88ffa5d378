#include "pmarket/ledger.hpp"
#include "pmarket/errors.hpp"

#include <algorithm>

namespace pmarket {

namespace {

std::string severity_prefix(AuditIssue::Severity s)
{
    return s == AuditIssue::Severity::Error ? "error: " : "warning: ";
}

} // namespace

std::vector<std::string> AuditReport::render() const
{
    std::vector<std::string> lines;
    lines.reserve(issues.size());
    for (const auto& i : issues)
        lines.push_back(severity_prefix(i.severity) + i.message);
    return lines;
}

Ledger::Ledger(const std::map<Address, Rational>& genesis) : genesis_(genesis)
{
    for (const auto& [addr, amount] : genesis) {
        if (amount <= 0)
            throw DomainError("genesis endowment must be positive for " + addr);
        balances_[addr][clean_unbet_key()] = amount;
        known_.insert(addr);
        genesis_clean_total_ += amount;
    }
    clean_supply_ = genesis_clean_total_;
}

EventId Ledger::register_event(const std::string& description)
{
    EventId id = derive_event_id(description);
    auto it = events_.find(id);
    if (it != events_.end()) {
        if (it->second != description)
            throw DomainError("event digest collision on register_event");
        return id; // idempotent, not re-logged
    }
    events_.emplace(id, description);
    tx_log_.push_back({{"op", "register_event"}, {"description", description}});
    return id;
}

std::optional<std::string> Ledger::event_description(const EventId& event) const
{
    auto it = events_.find(event);
    if (it == events_.end())
        return std::nullopt;
    return it->second;
}

const Rational* Ledger::find_balance(const Address& owner, const AssetKey& key) const
{
    auto a = balances_.find(owner);
    if (a == balances_.end())
        return nullptr;
    auto k = a->second.find(key);
    if (k == a->second.end())
        return nullptr;
    return &k->second;
}

Rational Ledger::balance(const Address& owner, const AssetKey& key) const
{
    const Rational* r = find_balance(owner, key);
    return r ? *r : Rational(0);
}

Rational Ledger::outstanding(const OutcomeTag& tag) const
{
    Rational total = 0;
    for (const auto& [addr, assets] : balances_)
        for (const auto& [key, amount] : assets)
            if (key.tag == tag)
                total += amount;
    return total;
}

void Ledger::require_positive(const Rational& amount) const
{
    if (amount <= 0)
        throw DomainError("amount must be positive (got " + format_exact(amount) + ")");
}

void Ledger::credit(const Address& owner, const AssetKey& key, const Rational& amount)
{
    balances_[owner][key] += amount;
    known_.insert(owner);
}

void Ledger::debit(const Address& owner, const AssetKey& key, const Rational& amount)
{
    auto a = balances_.find(owner);
    auto k = a->second.find(key);
    k->second -= amount;
    if (k->second == 0)
        a->second.erase(k);
    if (a->second.empty())
        balances_.erase(a);
}

void Ledger::transfer(const Address& from, const Address& to, const AssetKey& key, const Rational& amount)
{
    require_positive(amount);
    if (to.empty())
        throw DomainError("transfer needs a destination address");
    const Rational* held = find_balance(from, key);
    if (!held || *held < amount)
        throw DomainError("insufficient balance: " + from + " holds " +
                          format_exact(held ? *held : Rational(0)) + " of " + key.render());

    debit(from, key, amount);
    credit(to, key, amount);
    tx_log_.push_back({{"op", "transfer"}, {"from", from}, {"to", to}, {"asset", key}, {"amount", amount}});
}

void Ledger::outcome_split(const Address& owner, const Rational& amount, const EventId& event, int arity,
                           const HistorySet& history)
{
    require_positive(amount);
    if (arity < 2)
        throw DomainError("outcome-split needs at least two outcomes");
    AssetKey source{unbet(), history};
    const Rational* held = find_balance(owner, source);
    if (!held || *held < amount)
        throw DomainError("insufficient unbet balance for outcome-split");
    auto it = indexed_.find(event);
    if (it != indexed_.end() && it->second.arity != arity)
        throw DomainError("event already split with arity " + std::to_string(it->second.arity));

    debit(owner, source, amount);
    for (int i = 1; i <= arity; ++i)
        credit(owner, AssetKey{indexed_share(event, i, arity), history}, amount);
    auto& ctr = indexed_[event];
    ctr.arity = arity;
    ctr.split_created += amount;
    if (source.is_clean_unbet())
        clean_supply_ -= amount;
    tx_log_.push_back({{"op", "outcome_split"},
                       {"owner", owner},
                       {"amount", amount},
                       {"event", event},
                       {"arity", arity},
                       {"history", history}});
}

void Ledger::outcome_combine(const Address& owner, const EventId& event, const Rational& amount,
                             const std::optional<std::vector<HistorySet>>& leg_histories)
{
    require_positive(amount);
    auto it = indexed_.find(event);
    if (it == indexed_.end())
        throw DomainError("outcome-combine on an event that was never split");
    const int arity = it->second.arity;
    if (leg_histories && static_cast<int>(leg_histories->size()) != arity)
        throw DomainError("outcome-combine needs one history per leg");

    std::vector<AssetKey> consumed;
    consumed.reserve(static_cast<std::size_t>(arity));
    auto holdings = balances_.find(owner);
    for (int i = 1; i <= arity; ++i) {
        OutcomeTag tag = indexed_share(event, i, arity);
        if (leg_histories) {
            AssetKey key{tag, (*leg_histories)[static_cast<std::size_t>(i - 1)]};
            const Rational* held = find_balance(owner, key);
            if (!held || *held < amount)
                throw DomainError("insufficient balance of leg " + std::to_string(i) + " for outcome-combine");
            consumed.push_back(std::move(key));
        } else {
            // first holding (canonical history order) that covers the amount
            const AssetKey* pick = nullptr;
            if (holdings != balances_.end())
                for (const auto& [key, held] : holdings->second)
                    if (key.tag == tag && held >= amount) {
                        pick = &key;
                        break;
                    }
            if (!pick)
                throw DomainError("insufficient balance of leg " + std::to_string(i) + " for outcome-combine");
            consumed.push_back(*pick);
        }
    }

    HistorySet merged;
    for (const auto& key : consumed)
        merged = HistorySet::union_of(merged, key.history);

    std::vector<HistorySet> resolved;
    resolved.reserve(consumed.size());
    for (const auto& key : consumed)
        resolved.push_back(key.history);

    for (const auto& key : consumed)
        debit(owner, key, amount);
    credit(owner, AssetKey{unbet(), merged}, amount);
    it->second.combined += amount;
    if (merged.empty())
        clean_supply_ += amount;
    tx_log_.push_back({{"op", "outcome_combine"},
                       {"owner", owner},
                       {"event", event},
                       {"amount", amount},
                       {"leg_histories", resolved}});
}

void Ledger::outcome_force(const Address& owner, const EventId& event, std::vector<int> subset,
                           const Rational& amount, const HistorySet& history)
{
    require_positive(amount);
    auto it = indexed_.find(event);
    if (it == indexed_.end())
        throw DomainError("outcome-force on an event that was never split");
    const int arity = it->second.arity;

    std::sort(subset.begin(), subset.end());
    subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
    if (subset.empty())
        throw DomainError("outcome-force subset must be nonempty");
    for (int i : subset)
        if (i < 1 || i > arity)
            throw DomainError("outcome-force subset index out of range");
    if (static_cast<int>(subset.size()) == arity)
        throw DomainError("outcome-force over the full outcome set is an outcome-combine");
    if (history.contains_event(event))
        throw DomainError("history already carries an entry for this event");

    for (int i : subset) {
        AssetKey key{indexed_share(event, i, arity), history};
        const Rational* held = find_balance(owner, key);
        if (!held || *held < amount)
            throw DomainError("insufficient balance of leg " + std::to_string(i) +
                              " with the required history for outcome-force");
    }

    for (int i : subset)
        debit(owner, AssetKey{indexed_share(event, i, arity), history}, amount);
    credit(owner, AssetKey{unbet(), history.with(subset_entry(event, subset))}, amount);
    it->second.forced[subset] += amount;
    tx_log_.push_back({{"op", "outcome_force"},
                       {"owner", owner},
                       {"event", event},
                       {"subset", subset},
                       {"amount", amount},
                       {"history", history}});
}

void Ledger::burn(const Address& owner, const AssetKey& key, const Rational& amount)
{
    require_positive(amount);
    const Rational* held = find_balance(owner, key);
    if (!held || *held < amount)
        throw DomainError("insufficient balance to burn");

    debit(owner, key, amount);
    burned_[key.tag] += amount;
    if (key.is_clean_unbet())
        clean_supply_ -= amount;
    tx_log_.push_back({{"op", "burn"}, {"owner", owner}, {"asset", key}, {"amount", amount}});
}

void Ledger::announce_ownership(const std::vector<Address>& addresses, const std::string& message)
{
    if (addresses.empty())
        throw DomainError("announcement needs at least one address");
    for (const auto& a : addresses)
        if (!known_address(a))
            throw DomainError("unknown address in announcement: " + a);

    announcements_.emplace_back(addresses, message);
    tx_log_.push_back({{"op", "announce"}, {"addresses", addresses}, {"message", message}});
}

void Ledger::vector_split(const Address& owner, const Rational& amount, const EventId& event,
                          const VectorSpec& spec, const HistorySet& history)
{
    require_positive(amount);
    if (spec.size() < 2)
        throw DomainError("vector spec needs at least two legs");
    AssetKey source{unbet(), history};
    const Rational* held = find_balance(owner, source);
    if (!held || *held < amount)
        throw DomainError("insufficient unbet balance for vector outcome-split");

    debit(owner, source, amount);
    for (int j = 1; j <= spec.size(); ++j)
        credit(owner, AssetKey{vector_share(event, spec, j), history}, amount);
    auto& ctr = vector_[{event, spec.id()}];
    if (ctr.leg_consumed.empty()) {
        ctr.spec = spec;
        ctr.leg_consumed.assign(static_cast<std::size_t>(spec.size()), Rational(0));
    }
    ctr.split_created += amount;
    if (source.is_clean_unbet())
        clean_supply_ -= amount;
    tx_log_.push_back({{"op", "vector_split"},
                       {"owner", owner},
                       {"amount", amount},
                       {"event", event},
                       {"spec", spec},
                       {"history", history}});
}

namespace {

nlohmann::json asset_refs_json(const std::vector<VectorAssetRef>& assets)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& a : assets)
        arr.push_back({{"event", a.event},
                       {"spec", a.spec},
                       {"leg", a.leg},
                       {"history", a.history},
                       {"amount", a.amount}});
    return arr;
}

} // namespace

std::vector<std::string> Ledger::vector_combine(const Address& owner, const std::vector<VectorAssetRef>& assets)
{
    if (assets.empty())
        throw DomainError("vector outcome-combine needs at least one asset");
    const Rational m = assets.front().amount;
    require_positive(m);
    const EventId event = assets.front().event;
    for (const auto& a : assets) {
        if (a.amount != m)
            throw DomainError("vector outcome-combine: asset amounts differ");
        if (a.event != event)
            throw DomainError("vector outcome-combine: event ids differ");
        if (a.leg < 1 || a.leg > a.spec.size())
            throw DomainError("vector outcome-combine: leg out of range");
    }

    const Rational s1 = assets.front().spec.settlement_sum();
    for (const auto& a : assets)
        if (a.spec.settlement_sum() != s1)
            throw DomainError("vector outcome-combine: spec settlement sums differ (" +
                              format_exact(a.spec.settlement_sum()) + " vs " + format_exact(s1) + ")");
    Rational chosen = 0;
    for (const auto& a : assets)
        chosen += a.spec.leg(a.leg).weight * a.spec.leg(a.leg).level;
    if (chosen != s1)
        throw DomainError("vector outcome-combine: chosen legs sum to " + format_exact(chosen) +
                          ", constraint requires " + format_exact(s1));

    // aggregate duplicates, then check balances
    std::map<AssetKey, Rational> required;
    for (const auto& a : assets)
        required[AssetKey{vector_share(a.event, a.spec, a.leg), a.history}] += m;
    for (const auto& [key, need] : required) {
        const Rational* held = find_balance(owner, key);
        if (!held || *held < need)
            throw DomainError("insufficient balance of " + key.render() + " for vector outcome-combine");
    }

    // partial leg-set warning: fires unless the assets form whole leg-sets
    std::vector<std::string> warnings;
    std::map<Digest, std::map<int, int>> by_spec;
    std::map<Digest, int> spec_size;
    for (const auto& a : assets) {
        by_spec[a.spec.id()][a.leg] += 1;
        spec_size[a.spec.id()] = a.spec.size();
    }
    for (const auto& [sid, legs] : by_spec) {
        bool whole = static_cast<int>(legs.size()) == spec_size[sid];
        int copies = legs.begin()->second;
        for (const auto& [leg, count] : legs)
            if (count != copies)
                whole = false;
        if (!whole)
            warnings.push_back("combine consumes a partial leg-set of spec " + to_hex(sid).substr(0, 8) +
                               "; constraints hold but the set is incomplete");
    }

    HistorySet merged;
    for (const auto& a : assets)
        merged = HistorySet::union_of(merged, a.history);

    for (const auto& [key, need] : required)
        debit(owner, key, need);
    credit(owner, AssetKey{unbet(), merged}, m);
    for (const auto& a : assets)
        vector_.at({a.event, a.spec.id()}).leg_consumed[static_cast<std::size_t>(a.leg - 1)] += m;
    if (merged.empty())
        clean_supply_ += m;
    tx_log_.push_back({{"op", "vector_combine"},
                       {"owner", owner},
                       {"assets", asset_refs_json(assets)},
                       {"warnings", warnings}});
    return warnings;
}

void Ledger::vector_force(const Address& owner, const std::vector<VectorAssetRef>& assets,
                          const Rational& claimed_settlement, const Rational& tolerance)
{
    if (assets.empty())
        throw DomainError("vector outcome-force needs at least one asset");
    if (tolerance < 0)
        throw DomainError("tolerance must be nonnegative");
    const Rational m = assets.front().amount;
    require_positive(m);
    const EventId event = assets.front().event;
    for (const auto& a : assets) {
        if (a.amount != m)
            throw DomainError("vector outcome-force: asset amounts differ");
        if (a.event != event)
            throw DomainError("vector outcome-force: event ids differ");
        if (a.leg < 1 || a.leg > a.spec.size())
            throw DomainError("vector outcome-force: leg out of range");
    }

    auto desc = event_description(event);
    if (!desc || desc->find(" at date ") == std::string::npos)
        throw DomainError("vector outcome-force requires a dated event id "
                          "(registered description of the form \"baseline asset x at date y\")");

    Rational weight_sum = 0;
    Rational chosen = 0;
    for (const auto& a : assets) {
        weight_sum += a.spec.leg(a.leg).weight;
        chosen += a.spec.leg(a.leg).weight * a.spec.leg(a.leg).level;
    }
    if (!within(weight_sum, Rational(1), tolerance))
        throw DomainError("vector outcome-force: chosen weights sum to " + format_exact(weight_sum) +
                          ", not within tolerance of 1");
    if (!within(chosen, claimed_settlement, tolerance))
        throw DomainError("vector outcome-force: chosen legs sum to " + format_exact(chosen) +
                          ", not within tolerance of the claimed settlement " + format_exact(claimed_settlement));

    std::map<AssetKey, Rational> required;
    for (const auto& a : assets)
        required[AssetKey{vector_share(a.event, a.spec, a.leg), a.history}] += m;
    for (const auto& [key, need] : required) {
        const Rational* held = find_balance(owner, key);
        if (!held || *held < need)
            throw DomainError("insufficient balance of " + key.render() + " for vector outcome-force");
    }

    HistorySet merged;
    for (const auto& a : assets)
        merged = HistorySet::union_of(merged, a.history);
    merged = merged.with(settlement_entry(event, claimed_settlement));

    for (const auto& [key, need] : required)
        debit(owner, key, need);
    credit(owner, AssetKey{unbet(), merged}, m);
    for (const auto& a : assets)
        vector_.at({a.event, a.spec.id()}).leg_consumed[static_cast<std::size_t>(a.leg - 1)] += m;
    tx_log_.push_back({{"op", "vector_force"},
                       {"owner", owner},
                       {"assets", asset_refs_json(assets)},
                       {"claimed_settlement", claimed_settlement},
                       {"tolerance", tolerance}});
}

void Ledger::log_note(const std::string& kind, nlohmann::json data)
{
    tx_log_.push_back({{"op", "note"}, {"kind", kind}, {"data", std::move(data)}});
}

Address Ledger::group_root(const Address& addr, const std::map<Address, Address>& parent) const
{
    Address cur = addr;
    auto it = parent.find(cur);
    while (it != parent.end() && it->second != cur) {
        cur = it->second;
        it = parent.find(cur);
    }
    return cur;
}

std::map<Address, std::map<AssetKey, Rational>> Ledger::public_view() const
{
    // union-find over announcement groups, root = smallest member
    std::map<Address, Address> parent;
    auto find_root = [&](const Address& a) { return group_root(a, parent); };
    for (const auto& [addresses, message] : announcements_) {
        (void)message;
        if (addresses.empty())
            continue;
        Address root = find_root(addresses.front());
        for (const auto& a : addresses) {
            Address r = find_root(a);
            if (r < root)
                std::swap(r, root);
            if (r != root)
                parent[r] = root;
        }
    }

    std::map<Address, std::map<AssetKey, Rational>> view;
    for (const auto& [addr, assets] : balances_) {
        Address owner = find_root(addr);
        for (const auto& [key, amount] : assets)
            view[owner][key] += amount;
    }
    return view;
}

AuditReport Ledger::check_invariants() const
{
    AuditReport report;
    auto error = [&](std::string msg) {
        report.issues.push_back({AuditIssue::Severity::Error, std::move(msg)});
    };
    auto warning = [&](std::string msg) {
        report.issues.push_back({AuditIssue::Severity::Warning, std::move(msg)});
    };

    // structural: positive amounts, no empty entries, duplicate-event histories
    for (const auto& [addr, assets] : balances_) {
        if (assets.empty())
            error("empty balance entry stored for " + addr);
        for (const auto& [key, amount] : assets) {
            if (amount <= 0)
                error("non-positive balance of " + key.render() + " at " + addr);
            if (key.history.has_duplicate_event())
                warning("history with two entries for one event at " + addr + ": " + key.render());
        }
    }

    // per-event leg conservation (indexed)
    for (const auto& [event, ctr] : indexed_) {
        for (int i = 1; i <= ctr.arity; ++i) {
            OutcomeTag tag = indexed_share(event, i, ctr.arity);
            Rational out = outstanding(tag);
            Rational forced_total = 0;
            for (const auto& [subset, amount] : ctr.forced)
                if (std::find(subset.begin(), subset.end(), i) != subset.end())
                    forced_total += amount;
            Rational burned_total = 0;
            if (auto it = burned_.find(tag); it != burned_.end())
                burned_total = it->second;
            if (out + ctr.combined + forced_total + burned_total != ctr.split_created)
                error("leg conservation broken for " + render_tag(tag) + ": outstanding " + format_exact(out) +
                      " + combined " + format_exact(ctr.combined) + " + forced " + format_exact(forced_total) +
                      " + burned " + format_exact(burned_total) + " != created " + format_exact(ctr.split_created));
        }
    }

    // per-(event, spec) leg conservation (vector)
    for (const auto& [key, ctr] : vector_) {
        const auto& [event, spec_id] = key;
        (void)spec_id;
        for (int j = 1; j <= ctr.spec.size(); ++j) {
            OutcomeTag tag = vector_share(event, ctr.spec, j);
            Rational out = outstanding(tag);
            Rational burned_total = 0;
            if (auto it = burned_.find(tag); it != burned_.end())
                burned_total = it->second;
            const Rational& consumed = ctr.leg_consumed[static_cast<std::size_t>(j - 1)];
            if (out + consumed + burned_total != ctr.split_created)
                error("vector leg conservation broken for " + render_tag(tag));
        }
    }

    // clean-coin conservation
    Rational clean = 0;
    for (const auto& [addr, assets] : balances_) {
        (void)addr;
        for (const auto& [key, amount] : assets)
            if (key.is_clean_unbet())
                clean += amount;
    }
    if (clean != clean_supply_)
        error("clean supply counter " + format_exact(clean_supply_) + " != outstanding clean coins " +
              format_exact(clean));
    if (clean_supply_ > genesis_clean_total_)
        error("clean coins exceed the genesis endowment");

    return report;
}

bool Ledger::operator==(const Ledger& other) const
{
    return balances_ == other.balances_ && known_ == other.known_ && genesis_ == other.genesis_ &&
           events_ == other.events_ && indexed_ == other.indexed_ && vector_ == other.vector_ &&
           burned_ == other.burned_ && announcements_ == other.announcements_ && tx_log_ == other.tx_log_ &&
           genesis_clean_total_ == other.genesis_clean_total_ && clean_supply_ == other.clean_supply_;
}

} // namespace pmarket
