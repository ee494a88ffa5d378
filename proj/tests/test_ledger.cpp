#include "pmarket/errors.hpp"
#include "pmarket/ledger_io.hpp"

#include <doctest.h>

using namespace pmarket;

namespace {

Ledger fresh(std::map<Address, Rational> genesis = {{"alice", Rational(5000)}, {"bob", Rational(9)}})
{
    return Ledger(genesis);
}

EventId obama()
{
    return derive_event_id("Barack Obama will win re-election in 2012");
}

AssetKey yes_key(EventId e, HistorySet h = {})
{
    return AssetKey{yes_share(e), std::move(h)};
}

AssetKey no_key(EventId e, HistorySet h = {})
{
    return AssetKey{no_share(e), std::move(h)};
}

} // namespace

TEST_CASE("transfer moves exactly the amount")
{
    Ledger l = fresh();
    l.transfer("bob", "alice", clean_unbet_key(), parse_rational("1.2"));
    CHECK(l.balance("bob", clean_unbet_key()) == parse_rational("7.8"));
    CHECK(l.balance("alice", clean_unbet_key()) == parse_rational("5001.2"));
    CHECK(l.check_invariants().clean());
}

TEST_CASE("transfer of the full balance removes the entry")
{
    Ledger l = fresh();
    l.transfer("bob", "alice", clean_unbet_key(), Rational(9));
    CHECK(l.balances().count("bob") == 0);
    CHECK(l.known_address("bob"));
}

TEST_CASE("transfer rejects bad amounts and shortfalls")
{
    Ledger l = fresh();
    Ledger before = l;
    CHECK_THROWS_AS(l.transfer("bob", "alice", clean_unbet_key(), Rational(10)), DomainError);
    CHECK_THROWS_AS(l.transfer("bob", "alice", clean_unbet_key(), Rational(0)), DomainError);
    CHECK_THROWS_AS(l.transfer("bob", "alice", clean_unbet_key(), Rational(-1)), DomainError);
    CHECK(l == before);
}

TEST_CASE("shares transfer like colored coins")
{
    Ledger l = fresh({{"alice", Rational(900)}});
    EventId e = l.register_event("Barack Obama will win re-election in 2012");
    l.outcome_split("alice", Rational(900), e, 2);
    l.transfer("alice", "bob", yes_key(e), Rational(600)); // alice keeps 1/3
    CHECK(l.balance("alice", yes_key(e)) == Rational(300));
    CHECK(l.balance("bob", yes_key(e)) == Rational(600));
    CHECK(l.check_invariants().clean());
}

TEST_CASE("outcome-split mints one share per outcome")
{
    Ledger l = fresh();
    EventId e = obama();
    l.outcome_split("alice", Rational(5000), e, 2);
    CHECK(l.balance("alice", yes_key(e)) == Rational(5000));
    CHECK(l.balance("alice", no_key(e)) == Rational(5000));
    CHECK(l.balance("alice", clean_unbet_key()) == Rational(0));
    CHECK(l.indexed_counters().at(e).split_created == Rational(5000));
    CHECK(l.check_invariants().clean());
}

TEST_CASE("outcome-split(4) mints four legs")
{
    Ledger l = fresh({{"alice", Rational(60)}});
    EventId e = derive_event_id("Percentages for top 24 contestants in American Idol season 99");
    l.outcome_split("alice", Rational(60), e, 4);
    for (int i = 1; i <= 4; ++i)
        CHECK(l.balance("alice", AssetKey{indexed_share(e, i, 4), {}}) == Rational(60));
    CHECK(l.check_invariants().clean());
}

TEST_CASE("outcome-split rejections")
{
    Ledger l = fresh();
    Ledger before = l;
    CHECK_THROWS_AS(l.outcome_split("alice", Rational(0), obama(), 2), DomainError);
    CHECK_THROWS_AS(l.outcome_split("alice", Rational(10), obama(), 1), DomainError);
    CHECK_THROWS_AS(l.outcome_split("alice", Rational(987654), obama(), 2), DomainError);
    CHECK(l == before);

    l.outcome_split("alice", Rational(10), obama(), 2);
    CHECK_THROWS_AS(l.outcome_split("alice", Rational(10), obama(), 3), DomainError); // arity pinned
}

TEST_CASE("outcome-combine redeems a full set")
{
    Ledger l = fresh();
    EventId e = obama();
    l.outcome_split("alice", Rational(5000), e, 2);
    l.outcome_combine("alice", e, Rational(5000));
    CHECK(l.balance("alice", clean_unbet_key()) == Rational(5000));
    CHECK(l.indexed_counters().at(e).combined == Rational(5000));
    CHECK(l.check_invariants().clean());
}

TEST_CASE("outcome-combine unions histories")
{
    Ledger l = fresh({{"alice", Rational(100)}});
    EventId x = derive_event_id("event x");
    EventId y = derive_event_id("event y");
    EventId target = derive_event_id("target event");

    // craft Yes shares carrying {X:1} and No shares carrying {Y:1}
    l.outcome_split("alice", Rational(40), x, 2);
    l.outcome_force("alice", x, {kYes}, Rational(40));
    HistorySet hx({subset_entry(x, {kYes})});
    l.outcome_split("alice", Rational(40), y, 2);
    l.outcome_force("alice", y, {kYes}, Rational(40));
    HistorySet hy({subset_entry(y, {kYes})});

    l.outcome_split("alice", Rational(10), target, 2, hx);
    // only the No leg with hy: bury the hx No leg by splitting a second slice
    l.outcome_split("alice", Rational(10), target, 2, hy);
    std::vector<HistorySet> picks = {hx, hy};
    l.outcome_combine("alice", target, Rational(10), picks);

    HistorySet both = HistorySet::union_of(hx, hy);
    CHECK(l.balance("alice", AssetKey{unbet(), both}) == Rational(10));
    CHECK(l.check_invariants().clean());
}

TEST_CASE("outcome-combine is atomic when a leg is short")
{
    Ledger l = fresh();
    EventId e = obama();
    l.outcome_split("alice", Rational(100), e, 2);
    l.transfer("alice", "bob", no_key(e), Rational(60));
    Ledger before = l;
    CHECK_THROWS_AS(l.outcome_combine("alice", e, Rational(100)), DomainError);
    CHECK(l == before);
    CHECK_THROWS_AS(l.outcome_combine("alice", derive_event_id("never split"), Rational(1)), DomainError);
}

TEST_CASE("outcome-force encumbers the history")
{
    Ledger l = fresh({{"alice", Rational(1000)}});
    EventId e = obama();
    l.outcome_split("alice", Rational(1000), e, 2);
    l.outcome_force("alice", e, {kYes}, Rational(1000));
    HistorySet h({subset_entry(e, {kYes})});
    CHECK(l.balance("alice", AssetKey{unbet(), h}) == Rational(1000));
    CHECK(l.balance("alice", yes_key(e)) == Rational(0));
    CHECK(l.balance("alice", no_key(e)) == Rational(1000));
    CHECK(l.clean_supply() == Rational(0));
    CHECK(l.check_invariants().clean());
}

TEST_CASE("outcome-force on a proper leg subset")
{
    Ledger l = fresh({{"alice", Rational(60)}, {"market", Rational(100)}});
    EventId e = derive_event_id("Percentages for top 24 contestants");
    l.outcome_split("alice", Rational(60), e, 4);
    l.outcome_force("alice", e, {1, 2, 4}, Rational(60));
    HistorySet h({subset_entry(e, {1, 2, 4})});
    CHECK(l.balance("alice", AssetKey{unbet(), h}) == Rational(60));
    CHECK(l.check_invariants().clean());
}

TEST_CASE("outcome-force rejects full sets, mixed histories and duplicate events")
{
    Ledger l = fresh({{"alice", Rational(100)}});
    EventId e = obama();
    l.outcome_split("alice", Rational(100), e, 2);
    Ledger before = l;
    CHECK_THROWS_AS(l.outcome_force("alice", e, {1, 2}, Rational(10)), DomainError);
    CHECK_THROWS_AS(l.outcome_force("alice", e, {}, Rational(10)), DomainError);
    CHECK_THROWS_AS(l.outcome_force("alice", e, {3}, Rational(10)), DomainError);
    CHECK(l == before);

    // duplicate event in history: force the Yes leg, split again onto the
    // encumbered coins, then try forcing the same event once more
    l.outcome_force("alice", e, {kYes}, Rational(100));
    HistorySet h({subset_entry(e, {kYes})});
    l.outcome_split("alice", Rational(50), e, 2, h);
    CHECK_THROWS_AS(l.outcome_force("alice", e, {kYes}, Rational(50), h), DomainError);

    // the escape hatch: combining unions the (deduplicated) histories
    l.outcome_combine("alice", e, Rational(50), std::vector<HistorySet>{h, h});
    CHECK(l.balance("alice", AssetKey{unbet(), h}) == Rational(50));
    CHECK(l.check_invariants().clean());
}

TEST_CASE("split after force is flagged as a warning once histories double up")
{
    Ledger l = fresh({{"alice", Rational(100)}});
    EventId e = obama();
    l.outcome_split("alice", Rational(100), e, 2);
    l.outcome_force("alice", e, {kYes}, Rational(100));
    HistorySet h({subset_entry(e, {kYes})});
    l.outcome_split("alice", Rational(40), e, 2, h);
    l.outcome_force("alice", e, {kNo}, Rational(40), h); // now {Yes:e, No:e} on one coin

    auto report = l.check_invariants();
    CHECK_FALSE(report.clean());
    CHECK_FALSE(report.has_errors()); // warning, not error
}

TEST_CASE("burn removes shares from circulation but keeps the books exact")
{
    Ledger l = fresh({{"alice", Rational(100)}, {"market", Rational(100)}});
    EventId e = obama();
    l.outcome_split("alice", Rational(100), e, 2);
    l.burn("alice", yes_key(e), Rational(16));
    CHECK(l.balance("alice", yes_key(e)) == Rational(84));
    CHECK(l.burned().at(yes_share(e)) == Rational(16));
    CHECK(l.check_invariants().clean());

    // burning unbet coins is permitted
    l.burn("market", clean_unbet_key(), Rational(100));
    CHECK(l.balances().count("market") == 0);
    CHECK(l.check_invariants().clean());

    Ledger before = l;
    CHECK_THROWS_AS(l.burn("alice", yes_key(e), Rational(1000)), DomainError);
    CHECK(l == before);
}

TEST_CASE("announcements consolidate the public view")
{
    Ledger l = fresh({{"a1", Rational(10)}, {"a2", Rational(20)}, {"b", Rational(5)}});
    l.announce_ownership({"a1", "a2"}, "one owner");
    auto view = l.public_view();
    CHECK(view.count("a1") == 1);
    CHECK(view.count("a2") == 0); // folded into a1
    CHECK(view.at("a1").at(clean_unbet_key()) == Rational(30));
    CHECK(view.at("b").at(clean_unbet_key()) == Rational(5));

    CHECK_THROWS_AS(l.announce_ownership({"nobody"}, "x"), DomainError);

    // single-address announcement is a no-op on the view
    Ledger l2 = fresh({{"a1", Rational(10)}});
    auto before = l2.public_view();
    l2.announce_ownership({"a1"}, "just me");
    CHECK(l2.public_view() == before);
}

TEST_CASE("announce-then-burn equals burn-then-announce")
{
    auto build = [](bool announce_first) {
        Ledger l = fresh({{"a1", Rational(60)}, {"a2", Rational(40)}});
        if (announce_first) {
            l.announce_ownership({"a1", "a2"}, "alice owns both");
            l.burn("a1", clean_unbet_key(), Rational(25));
        } else {
            l.burn("a1", clean_unbet_key(), Rational(25));
            l.announce_ownership({"a1", "a2"}, "alice owns both");
        }
        return l.public_view();
    };
    CHECK(build(true) == build(false));
}

TEST_CASE("check_invariants flags corruption")
{
    Ledger l = fresh();
    CHECK(l.check_invariants().clean());

    // corrupt a copy through the snapshot round-trip
    nlohmann::json j = l;
    j["balances"]["alice"][0]["amount"] = "4999";
    Ledger corrupted = Ledger::from_json(j);
    auto report = corrupted.check_invariants();
    CHECK(report.has_errors());
}

TEST_CASE("snapshots round-trip bit-exactly")
{
    Ledger l = fresh({{"alice", Rational(5000)}, {"market", Rational(9000)}});
    EventId e = l.register_event("Barack Obama will win re-election in 2012");
    l.outcome_split("alice", Rational(700), e, 2);
    l.transfer("alice", "market", no_key(e), Rational(700));
    l.outcome_force("alice", e, {kYes}, Rational(700));
    l.burn("market", no_key(e), Rational(1));
    l.announce_ownership({"alice"}, "mine");

    std::string text = io::snapshot_text(l);
    Ledger reloaded = Ledger::from_json(nlohmann::json::parse(text));
    CHECK(reloaded == l);
    CHECK(io::snapshot_text(reloaded) == text);
}

TEST_CASE("replaying the log rebuilds the ledger")
{
    Ledger l = fresh({{"alice", Rational(5000)}, {"market", Rational(9000)}});
    EventId e = l.register_event("Barack Obama will win re-election in 2012");
    l.outcome_split("alice", Rational(5000), e, 2);
    l.transfer("alice", "market", no_key(e), Rational(5000));
    l.transfer("market", "alice", clean_unbet_key(), Rational(1500));
    l.transfer("market", "alice", no_key(e), Rational(5000));
    l.transfer("alice", "market", clean_unbet_key(), Rational(5));
    l.outcome_combine("alice", e, Rational(5000));

    Ledger rebuilt = io::replay(l.genesis(), l.tx_log());
    CHECK(rebuilt == l);
    CHECK(l.check_invariants().clean());
}

TEST_CASE("script files drive the ledger")
{
    nlohmann::json script = {
        {"genesis", {{"alice", "5000"}, {"market", "10000"}}},
        {"events", {{"obama", "Barack Obama will win re-election in 2012"}}},
        {"ops",
         nlohmann::json::array(
             {{{"op", "outcome_split"}, {"owner", "alice"}, {"amount", "5000"}, {"event", "obama"}, {"arity", 2}},
              {{"op", "transfer"},
               {"from", "alice"},
               {"to", "market"},
               {"asset", {{"tag", {{"kind", "no"}, {"event", "obama"}}}, {"history", nlohmann::json::array()}}},
               {"amount", "5000"}}})}};

    Ledger l = io::run_script(script);
    CHECK(l.balance("market", no_key(obama())) == Rational(5000));
    CHECK(l.check_invariants().clean());

    nlohmann::json bad = script;
    bad["ops"].push_back({{"op", "teleport"}});
    CHECK_THROWS_AS(io::run_script(bad), DomainError);
}
