#include "pmarket/orderbook.hpp"
#include "pmarket/errors.hpp"
#include "pmarket/ledger_io.hpp"

#include <algorithm>
#include <fstream>
#include <functional>

namespace pmarket::orderbook {

const Address kEscrowAddress = "escrow:orderbook";

namespace {

std::string fmt_tick(long tick)
{
    return "t=" + std::to_string(tick);
}

} // namespace

OrderBook::OrderBook(Ledger& base, SimConfig config) : base_(base), config_(std::move(config))
{
    if (config_.checkpoint_interval < 1)
        throw DomainError("checkpoint interval must be at least 1");
}

void OrderBook::trace_line(std::string line)
{
    trace_.push_back(std::move(line));
}

void OrderBook::note_rejected(const std::string& line)
{
    ++stats_.rejected_actions;
    trace_line(line);
}

Rational OrderBook::offchain_balance(const Address& trader, const AssetKey& key) const
{
    auto t = balances_.find(trader);
    if (t == balances_.end())
        return 0;
    auto k = t->second.find(key);
    return k == t->second.end() ? Rational(0) : k->second;
}

Rational OrderBook::free_balance(const Address& trader, const AssetKey& key) const
{
    Rational free = offchain_balance(trader, key);
    for (const auto& order : orders_)
        if (order.trader == trader && order.offered == key)
            free -= order.remaining_offered;
    return free;
}

long OrderBook::deposit(const Address& trader, const AssetKey& asset, const Rational& amount, long timeout)
{
    if (amount <= 0)
        throw DomainError("deposit amount must be positive");
    if (timeout <= clock_)
        throw DomainError("deposit timeout must lie strictly in the future");
    if (exited_.count(trader))
        throw DomainError("trader already exited the order book");
    if (base_.balance(trader, asset) < amount)
        throw DomainError("insufficient base-ledger balance for deposit");

    base_.transfer(trader, kEscrowAddress, asset, amount);
    balances_[trader][asset] += amount;
    Deposit dep{next_deposit_id_++, trader, asset, amount, timeout, clock_, DepositStatus::Active};
    deposits_.push_back(dep);
    trace_line(fmt_tick(clock_) + " deposit trader=" + trader + " asset=" + asset.render() + " amount=" +
               format_exact(amount) + " timeout=" + std::to_string(timeout) + " id=" + std::to_string(dep.id));
    return dep.id;
}

long OrderBook::place_order(const Address& trader, OrderSide side, const AssetKey& offered,
                            const Rational& offered_amount, const AssetKey& wanted,
                            const Rational& wanted_amount, long expiry)
{
    if (offered_amount <= 0 || wanted_amount <= 0)
        throw DomainError("order amounts must be positive");
    if (offered == wanted)
        throw DomainError("order must exchange two distinct assets");
    if (expiry <= clock_)
        throw DomainError("order expiry must lie strictly in the future");
    if (exited_.count(trader))
        throw DomainError("trader already exited the order book");
    if (free_balance(trader, offered) < offered_amount)
        throw DomainError("order not covered by free off-chain balance");

    Order order{next_order_id_++, trader,        side,   offered, offered_amount, wanted,
                wanted_amount,    expiry,        clock_, offered_amount, wanted_amount};
    orders_.push_back(order);
    trace_line(fmt_tick(clock_) + " order trader=" + trader +
               " side=" + (side == OrderSide::Ask ? "ask" : "bid") + " offered=" + offered.render() + ":" +
               format_exact(offered_amount) + " wanted=" + wanted.render() + ":" + format_exact(wanted_amount) +
               " expiry=" + std::to_string(expiry) + " id=" + std::to_string(order.id));
    return order.id;
}

void OrderBook::execute_trade(Order& resting, Order& incoming)
{
    Order& ask = resting.side == OrderSide::Ask ? resting : incoming;
    Order& bid = resting.side == OrderSide::Ask ? incoming : resting;

    Rational qty = std::min(ask.remaining_base(), bid.remaining_base());
    Rational price = resting.price(); // price-time priority: resting terms
    Rational spend = qty * price;

    // swap inside escrow
    balances_[ask.trader][ask.base()] -= qty;
    balances_[bid.trader][bid.base()] += qty;
    balances_[bid.trader][bid.quote()] -= spend;
    balances_[ask.trader][ask.quote()] += spend;

    ask.remaining_offered -= qty;
    ask.remaining_wanted -= std::min(ask.remaining_wanted, spend);
    bid.remaining_wanted -= qty;
    bid.remaining_offered -= spend;

    ++sequence_no_;
    ++stats_.trades;
    trace_line(fmt_tick(clock_) + " trade seq=" + std::to_string(sequence_no_) + " buyer=" + bid.trader +
               " seller=" + ask.trader + " base=" + ask.base().render() + " qty=" + format_exact(qty) +
               " quote=" + ask.quote().render() + " paid=" + format_exact(spend) + " ask_id=" +
               std::to_string(ask.id) + " bid_id=" + std::to_string(bid.id));
}

void OrderBook::match_and_cosign()
{
    if (!config_.ttp.active_at(clock_))
        return; // a silent TTP is legal TTP behavior

    bool progressed = true;
    while (progressed) {
        progressed = false;
        // best served ask per (base, quote) book, then its best crossing bid
        for (std::size_t i = 0; i < orders_.size(); ++i) {
            Order& a = orders_[i];
            if (a.side != OrderSide::Ask || !config_.ttp.serves(a.trader) || a.remaining_base() <= 0)
                continue;
            // is a the best ask of its book?
            bool best = true;
            for (const Order& other : orders_) {
                if (&other == &a || other.side != OrderSide::Ask || !config_.ttp.serves(other.trader))
                    continue;
                if (other.base() == a.base() && other.quote() == a.quote() && other.remaining_base() > 0 &&
                    (other.price() < a.price() ||
                     (other.price() == a.price() && other.placed_at < a.placed_at) ||
                     (other.price() == a.price() && other.placed_at == a.placed_at && other.id < a.id)))
                    best = false;
            }
            if (!best)
                continue;

            Order* bid = nullptr;
            for (Order& b : orders_) {
                if (b.side != OrderSide::Bid || !config_.ttp.serves(b.trader) || b.remaining_base() <= 0)
                    continue;
                if (!(b.base() == a.base()) || !(b.quote() == a.quote()))
                    continue;
                if (b.trader == a.trader)
                    continue;
                if (b.price() < a.price())
                    continue;
                if (!bid || b.price() > bid->price() ||
                    (b.price() == bid->price() && b.placed_at < bid->placed_at) ||
                    (b.price() == bid->price() && b.placed_at == bid->placed_at && b.id < bid->id))
                    bid = &b;
            }
            if (!bid)
                continue;

            Order& resting = (a.placed_at < bid->placed_at || (a.placed_at == bid->placed_at && a.id < bid->id))
                                 ? a
                                 : *bid;
            Order& incoming = (&resting == &a) ? *bid : a;
            execute_trade(resting, incoming);
            progressed = true;
            break; // indices may shift once filled orders are dropped
        }
        std::erase_if(orders_, [](const Order& o) { return o.remaining_base() <= 0 || o.remaining_offered <= 0; });
    }
}

void OrderBook::checkpoint()
{
    if (!config_.ttp.active_at(clock_))
        return;

    std::map<Address, std::map<AssetKey, Rational>> snapshot;
    for (const auto& [trader, assets] : balances_) {
        if (exited_.count(trader))
            continue;
        for (const auto& [key, amount] : assets)
            if (amount != 0)
                snapshot[trader][key] = amount;
    }
    if (!checkpoints_.empty() && checkpoints_.back().balances == snapshot &&
        checkpoints_.back().sequence_no == sequence_no_)
        return; // nothing new to publish

    Checkpoint cp{clock_, sequence_no_, snapshot};
    checkpoints_.push_back(cp);
    ++stats_.checkpoints;

    nlohmann::json balances = nlohmann::json::object();
    for (const auto& [trader, assets] : cp.balances) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& [key, amount] : assets)
            list.push_back({{"tag", key.tag}, {"history", key.history}, {"amount", amount}});
        balances[trader] = std::move(list);
    }
    base_.log_note("orderbook_checkpoint",
                   {{"tick", cp.tick}, {"sequence_no", cp.sequence_no}, {"balances", std::move(balances)}});
    trace_line(fmt_tick(clock_) + " checkpoint seq=" + std::to_string(sequence_no_) + " traders=" +
               std::to_string(cp.balances.size()));
}

OrderBook::Entitlement OrderBook::entitlement_of(const Address& trader) const
{
    Entitlement ent;
    if (!checkpoints_.empty())
        if (auto it = checkpoints_.back().balances.find(trader); it != checkpoints_.back().balances.end())
            ent.amounts = it->second;
    long cp_tick = checkpoints_.empty() ? -1 : checkpoints_.back().tick;
    for (const auto& dep : deposits_)
        if (dep.trader == trader && dep.status == DepositStatus::Active && dep.deposited_at > cp_tick)
            ent.amounts[dep.asset] += dep.amount;

    std::map<AssetKey, Rational> current;
    if (auto it = balances_.find(trader); it != balances_.end())
        for (const auto& [key, amount] : it->second)
            if (amount != 0)
                current[key] = amount;
    std::erase_if(ent.amounts, [](const auto& kv) { return kv.second == 0; });
    ent.matches_current = current == ent.amounts;
    return ent;
}

void OrderBook::rollback_to_last_checkpoint()
{
    std::map<Address, std::map<AssetKey, Rational>> restored;
    if (!checkpoints_.empty())
        for (const auto& [trader, assets] : checkpoints_.back().balances)
            if (!exited_.count(trader))
                restored[trader] = assets;
    long cp_tick = checkpoints_.empty() ? -1 : checkpoints_.back().tick;
    long cp_seq = checkpoints_.empty() ? 0 : checkpoints_.back().sequence_no;
    for (const auto& dep : deposits_)
        if (dep.status == DepositStatus::Active && dep.deposited_at > cp_tick && !exited_.count(dep.trader))
            restored[dep.trader][dep.asset] += dep.amount;

    balances_ = std::move(restored);
    sequence_no_ = cp_seq;
    if (!orders_.empty())
        trace_line(fmt_tick(clock_) + " rollback cancelled_orders=" + std::to_string(orders_.size()) +
                   " seq=" + std::to_string(sequence_no_));
    orders_.clear();
}

void OrderBook::payout_and_exit(const Address& trader, const std::map<AssetKey, Rational>& amounts,
                                DepositStatus final_status)
{
    for (const auto& [key, amount] : amounts)
        if (amount > 0)
            base_.transfer(kEscrowAddress, trader, key, amount);
    balances_.erase(trader);
    std::erase_if(orders_, [&](const Order& o) { return o.trader == trader; });
    for (auto& dep : deposits_)
        if (dep.trader == trader && dep.status == DepositStatus::Active)
            dep.status = final_status;
    exited_.insert(trader);
}

void OrderBook::reclaim_after_timeout(const Address& trader)
{
    if (exited_.count(trader))
        throw DomainError("trader already exited the order book");
    bool any = false;
    for (const auto& dep : deposits_)
        if (dep.trader == trader && dep.status == DepositStatus::Active) {
            any = true;
            if (clock_ < dep.timeout)
                throw DomainError("deposit " + std::to_string(dep.id) + " is timelocked until t=" +
                                  std::to_string(dep.timeout));
        }
    if (!any)
        throw DomainError("trader has no active deposits to reclaim");

    Entitlement ent = entitlement_of(trader);
    if (!ent.matches_current) {
        // un-checkpointed co-signed trades void for everyone when a trader
        // takes the unilateral chain path
        rollback_to_last_checkpoint();
        ent = entitlement_of(trader);
    }
    payout_and_exit(trader, ent.amounts, DepositStatus::Reclaimed);
    ++stats_.reclaims;
    std::string assets;
    for (const auto& [key, amount] : ent.amounts)
        assets += " " + key.render() + "=" + format_exact(amount);
    trace_line(fmt_tick(clock_) + " reclaim trader=" + trader + (assets.empty() ? " (nothing)" : assets));
    verify_conservation();
}

void OrderBook::cooperative_close()
{
    if (!config_.ttp.active_at(clock_))
        return;
    checkpoint();
    std::vector<Address> traders;
    for (const auto& dep : deposits_)
        if (dep.status == DepositStatus::Active && config_.ttp.serves(dep.trader) && !exited_.count(dep.trader))
            traders.push_back(dep.trader);
    std::sort(traders.begin(), traders.end());
    traders.erase(std::unique(traders.begin(), traders.end()), traders.end());
    for (const auto& trader : traders) {
        std::map<AssetKey, Rational> amounts;
        if (auto it = balances_.find(trader); it != balances_.end())
            amounts = it->second;
        payout_and_exit(trader, amounts, DepositStatus::CheckedOut);
        ++stats_.checkouts;
        trace_line(fmt_tick(clock_) + " checkout trader=" + trader);
    }
    verify_conservation();
}

void OrderBook::purge_expired()
{
    std::erase_if(orders_, [&](const Order& o) {
        if (o.expiry <= clock_) {
            trace_line(fmt_tick(clock_) + " expire order=" + std::to_string(o.id) + " trader=" + o.trader);
            return true;
        }
        return false;
    });
}

void OrderBook::auto_reclaims()
{
    // traders the TTP no longer serves leave on their own once timelocks allow
    std::vector<Address> candidates;
    for (const auto& dep : deposits_) {
        if (dep.status != DepositStatus::Active || exited_.count(dep.trader))
            continue;
        bool abandoned = !config_.ttp.active_at(clock_) || !config_.ttp.serves(dep.trader);
        if (abandoned)
            candidates.push_back(dep.trader);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (const auto& trader : candidates) {
        bool all_matured = true;
        for (const auto& dep : deposits_)
            if (dep.trader == trader && dep.status == DepositStatus::Active && clock_ < dep.timeout)
                all_matured = false;
        if (all_matured)
            reclaim_after_timeout(trader);
    }
}

void OrderBook::begin_tick()
{
    ++clock_;
    purge_expired();
}

void OrderBook::finish_tick()
{
    match_and_cosign();
    if (clock_ % config_.checkpoint_interval == 0)
        checkpoint();
    auto_reclaims();
    verify_conservation();
}

void OrderBook::tick()
{
    begin_tick();
    finish_tick();
}

bool OrderBook::all_deposits_resolved() const
{
    return std::all_of(deposits_.begin(), deposits_.end(),
                       [](const Deposit& d) { return d.status != DepositStatus::Active; });
}

bool OrderBook::has_crossing_orders() const
{
    for (const auto& a : orders_) {
        if (a.side != OrderSide::Ask || !config_.ttp.serves(a.trader))
            continue;
        for (const auto& b : orders_) {
            if (b.side != OrderSide::Bid || !config_.ttp.serves(b.trader) || b.trader == a.trader)
                continue;
            if (b.base() == a.base() && b.quote() == a.quote() && b.price() >= a.price())
                return true;
        }
    }
    return false;
}

void OrderBook::verify_conservation() const
{
    // escrow holds exactly the sum of off-chain balances of live traders
    std::map<AssetKey, Rational> offchain_totals;
    for (const auto& [trader, assets] : balances_) {
        if (exited_.count(trader))
            continue;
        for (const auto& [key, amount] : assets) {
            if (amount < 0)
                throw std::logic_error("negative off-chain balance for " + trader);
            offchain_totals[key] += amount;
        }
    }
    std::erase_if(offchain_totals, [](const auto& kv) { return kv.second == 0; });

    std::map<AssetKey, Rational> escrow;
    if (auto it = base_.balances().find(kEscrowAddress); it != base_.balances().end())
        escrow = it->second;
    if (escrow != offchain_totals)
        throw std::logic_error("order-book conservation broken: escrow diverges from off-chain balances");

    if (base_.check_invariants().has_errors())
        throw std::logic_error("base ledger invariants broken inside the order book");
}

namespace {

TtpPolicy parse_policy(const nlohmann::json& j)
{
    TtpPolicy policy;
    const std::string kind = j.value("behavior", "honest");
    if (kind == "honest") {
        policy.kind = TtpBehaviorKind::Honest;
    } else if (kind == "stall_after") {
        policy.kind = TtpBehaviorKind::StallAfter;
        policy.stall_after = j.at("after").get<long>();
    } else if (kind == "selective_censor") {
        policy.kind = TtpBehaviorKind::SelectiveCensor;
        for (const auto& t : j.at("censored"))
            policy.censored.insert(t.get<std::string>());
    } else {
        throw DomainError("unknown ttp behavior '" + kind + "'");
    }
    return policy;
}

} // namespace

SimResult simulate(const nlohmann::json& script)
{
    SimConfig config;
    config.seed = script.value("seed", 0ull);
    config.checkpoint_interval = script.value("checkpoint_interval", 1l);
    if (script.contains("ttp"))
        config.ttp = parse_policy(script.at("ttp"));

    // base ledger with optional prep ops (e.g. splits that color coins)
    nlohmann::json ledger_script = nlohmann::json::object();
    if (script.contains("genesis"))
        ledger_script["genesis"] = script.at("genesis");
    if (script.contains("events"))
        ledger_script["events"] = script.at("events");
    if (script.contains("specs"))
        ledger_script["specs"] = script.at("specs");
    if (script.contains("prep"))
        ledger_script["ops"] = script.at("prep");
    Ledger ledger = io::run_script(ledger_script);

    std::map<std::string, EventId> events;
    if (script.contains("events"))
        for (const auto& [alias, description] : script.at("events").items())
            events[alias] = derive_event_id(description.get<std::string>());

    OrderBook book(ledger, config);

    std::map<long, std::vector<nlohmann::json>> actions;
    long horizon = script.value("horizon", 0l);
    if (script.contains("actions"))
        for (const auto& action : script.at("actions")) {
            long at = action.at("tick").get<long>();
            horizon = std::max(horizon, at);
            actions[at].push_back(action);
        }

    auto parse_asset = [&](const nlohmann::json& j) -> AssetKey {
        if (j.is_string() && j.get<std::string>() == "unbet")
            return clean_unbet_key();
        nlohmann::json resolved = j;
        // event aliases inside asset objects
        std::function<void(nlohmann::json&)> fix = [&](nlohmann::json& node) {
            if (node.is_array())
                for (auto& item : node)
                    fix(item);
            if (!node.is_object())
                return;
            for (auto& [key, value] : node.items()) {
                if (key == "event" && value.is_string() && value.get<std::string>().size() != 64) {
                    auto it = events.find(value.get<std::string>());
                    if (it == events.end())
                        throw DomainError("unknown event alias '" + value.get<std::string>() + "'");
                    value = it->second.hex();
                } else {
                    fix(value);
                }
            }
        };
        fix(resolved);
        return resolved.get<AssetKey>();
    };

    auto apply_action = [&](const nlohmann::json& action) {
        const std::string type = action.at("type").get<std::string>();
        try {
            if (type == "deposit") {
                book.deposit(action.at("trader").get<std::string>(), parse_asset(action.at("asset")),
                             action.at("amount").get<Rational>(), action.at("timeout").get<long>());
            } else if (type == "order") {
                book.place_order(action.at("trader").get<std::string>(),
                                 action.at("side").get<std::string>() == "bid" ? OrderSide::Bid : OrderSide::Ask,
                                 parse_asset(action.at("offered")), action.at("offered_amount").get<Rational>(),
                                 parse_asset(action.at("wanted")), action.at("wanted_amount").get<Rational>(),
                                 action.at("expiry").get<long>());
            } else if (type == "reclaim") {
                book.reclaim_after_timeout(action.at("trader").get<std::string>());
            } else {
                throw DomainError("unknown action type '" + type + "'");
            }
        } catch (const DomainError& e) {
            book.note_rejected("t=" + std::to_string(book.clock()) + " rejected action=" + type + " trader=" +
                               action.value("trader", std::string("?")) + " reason=\"" + e.what() + "\"");
        }
    };

    // tick 0 actions land before the first TTP pass
    if (auto it = actions.find(0l); it != actions.end())
        for (const auto& action : it->second)
            apply_action(action);
    book.verify_conservation();

    const long hard_cap = horizon + 1'000'000; // guards against runaway timeouts
    while (true) {
        long next = book.clock() + 1;
        if (next > horizon && book.all_deposits_resolved())
            break;
        if (next > hard_cap)
            throw DomainError("simulation exceeded the hard tick cap");

        book.begin_tick();
        if (auto it = actions.find(book.clock()); it != actions.end())
            for (const auto& action : it->second)
                apply_action(action);
        if (book.clock() > horizon && config.ttp.active_at(book.clock()))
            book.cooperative_close(); // the book winds down once the script ends
        book.finish_tick();
    }

    return SimResult{std::move(ledger), book.trace(), book.stats(), book.offchain_balances(),
                     book.checkpoints(), book.exited()};
}

SimResult simulate_file(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override)
{
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot open simulation script " + path.string());
    nlohmann::json script = nlohmann::json::parse(in);
    if (seed_override)
        script["seed"] = *seed_override;
    return simulate(script);
}

std::string trace_text(const SimResult& result)
{
    std::string out;
    for (const auto& line : result.trace) {
        out += line;
        out += '\n';
    }
    return out;
}

} // namespace pmarket::orderbook
