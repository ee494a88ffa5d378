#pragma once

#include "pmarket/ledger.hpp"

#include <cstdint>
#include <filesystem>
#include <set>

namespace pmarket::orderbook {

extern const Address kEscrowAddress;

enum class TtpBehaviorKind { Honest, StallAfter, SelectiveCensor };

/// What the TTP does: honest TTPs co-sign and checkpoint forever, stalled
/// ones stop at a tick, censoring ones refuse to serve chosen traders. A
/// corrupt TTP can only withhold service; it holds no keys that move funds.
struct TtpPolicy {
    TtpBehaviorKind kind = TtpBehaviorKind::Honest;
    long stall_after = 0;        // StallAfter: last tick the TTP acts on
    std::set<Address> censored;  // SelectiveCensor

    bool active_at(long tick) const
    {
        return kind != TtpBehaviorKind::StallAfter || tick <= stall_after;
    }
    bool serves(const Address& trader) const
    {
        return kind != TtpBehaviorKind::SelectiveCensor || censored.count(trader) == 0;
    }
};

struct SimConfig {
    std::uint64_t seed = 0;
    long checkpoint_interval = 1;
    TtpPolicy ttp;
};

enum class DepositStatus { Active, Reclaimed, CheckedOut };

struct Deposit {
    long id = 0;
    Address trader;
    AssetKey asset;
    Rational amount;
    long timeout = 0; // trader may exit alone once clock >= timeout
    long deposited_at = 0;
    DepositStatus status = DepositStatus::Active;
};

enum class OrderSide { Bid, Ask };

/// A resting order: Ask offers the base asset and wants the quote, Bid the
/// reverse. Price is quote per base, fixed by the order's full amounts.
struct Order {
    long id = 0;
    Address trader;
    OrderSide side = OrderSide::Ask;
    AssetKey offered;
    Rational offered_amount;
    AssetKey wanted;
    Rational wanted_amount;
    long expiry = 0;
    long placed_at = 0;
    Rational remaining_offered;
    Rational remaining_wanted;

    const AssetKey& base() const { return side == OrderSide::Ask ? offered : wanted; }
    const AssetKey& quote() const { return side == OrderSide::Ask ? wanted : offered; }
    /// quote per base
    Rational price() const
    {
        return side == OrderSide::Ask ? wanted_amount / offered_amount : offered_amount / wanted_amount;
    }
    /// remaining base capacity
    Rational remaining_base() const { return side == OrderSide::Ask ? remaining_offered : remaining_wanted; }
};

struct Checkpoint {
    long tick = 0;
    long sequence_no = 0;
    std::map<Address, std::map<AssetKey, Rational>> balances;
};

struct SimStats {
    long trades = 0;
    long checkpoints = 0;
    long reclaims = 0;
    long checkouts = 0;
    long rejected_actions = 0;
};

/// Deterministic discrete-event order book over a base ledger. Single
/// threaded; the TTP acts inside tick(). All funds live either on the base
/// ledger or inside the escrow address, mirrored by off-chain balances.
class OrderBook {
public:
    OrderBook(Ledger& base, SimConfig config);

    long clock() const { return clock_; }
    const SimConfig& config() const { return config_; }

    // trader-initiated operations (validated; throw DomainError)
    long deposit(const Address& trader, const AssetKey& asset, const Rational& amount, long timeout);
    long place_order(const Address& trader, OrderSide side, const AssetKey& offered,
                     const Rational& offered_amount, const AssetKey& wanted, const Rational& wanted_amount,
                     long expiry);
    void reclaim_after_timeout(const Address& trader);

    // TTP-side operations
    void match_and_cosign();
    void checkpoint();
    /// Honest TTP pays everyone out at current balances (deposits become
    /// CheckedOut). No-op for traders the policy does not serve.
    void cooperative_close();

    /// One logical tick: expiries, then TTP matching, then checkpointing at
    /// interval boundaries, then automatic timeout reclaims where the TTP has
    /// stopped serving a trader. Scripted runs place trader actions between
    /// begin_tick and finish_tick.
    void begin_tick();
    void finish_tick();
    void tick();

    // queries
    Rational offchain_balance(const Address& trader, const AssetKey& key) const;
    Rational free_balance(const Address& trader, const AssetKey& key) const;
    const std::map<Address, std::map<AssetKey, Rational>>& offchain_balances() const { return balances_; }
    const std::vector<Deposit>& deposits() const { return deposits_; }
    const std::vector<Order>& open_orders() const { return orders_; }
    const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }
    const std::set<Address>& exited() const { return exited_; }
    long sequence_no() const { return sequence_no_; }
    const SimStats& stats() const { return stats_; }
    const std::vector<std::string>& trace() const { return trace_; }
    bool all_deposits_resolved() const;
    /// True if some pair of live, served orders still crosses.
    bool has_crossing_orders() const;

    /// Escrow vs off-chain totals and base-ledger audit; throws on breakage.
    void verify_conservation() const;

    void note_rejected(const std::string& line);

private:
    struct Entitlement {
        std::map<AssetKey, Rational> amounts;
        bool matches_current = false;
    };

    void execute_trade(Order& resting, Order& incoming);
    void purge_expired();
    void auto_reclaims();
    Entitlement entitlement_of(const Address& trader) const;
    void rollback_to_last_checkpoint();
    void payout_and_exit(const Address& trader, const std::map<AssetKey, Rational>& amounts,
                         DepositStatus final_status);
    void trace_line(std::string line);

    Ledger& base_;
    SimConfig config_;
    long clock_ = 0;
    long next_deposit_id_ = 1;
    long next_order_id_ = 1;
    long sequence_no_ = 0;
    std::map<Address, std::map<AssetKey, Rational>> balances_;
    std::vector<Deposit> deposits_;
    std::vector<Order> orders_; // live orders, insertion order
    std::vector<Checkpoint> checkpoints_;
    std::set<Address> exited_;
    SimStats stats_;
    std::vector<std::string> trace_;
};

/// Scripted simulation: builds the base ledger from the script, runs the
/// event loop past the horizon until every deposit is resolved, and returns
/// the trace with the final states.
struct SimResult {
    Ledger ledger;
    std::vector<std::string> trace;
    SimStats stats;
    std::map<Address, std::map<AssetKey, Rational>> final_offchain;
    std::vector<Checkpoint> checkpoints;
    std::set<Address> exited;
};

SimResult simulate(const nlohmann::json& script);
SimResult simulate_file(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override = {});

std::string trace_text(const SimResult& result);

} // namespace pmarket::orderbook
