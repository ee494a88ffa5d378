#include "pmarket/cfd.hpp"
#include "pmarket/errors.hpp"

#include <doctest.h>

#include <random>

using namespace pmarket;
using namespace pmarket::cfd;

namespace {

VectorSpec alice_spec()
{
    return VectorSpec({{Rational(75), Rational(1, 3)},
                       {Rational(100), Rational(1, 3)},
                       {Rational(125), Rational(1, 3)}});
}

VectorSpec carol_spec()
{
    return VectorSpec({{Rational(150), Rational(1, 2)},
                       {Rational(40), Rational(1, 4)},
                       {Rational(50), Rational(1, 8)},
                       {Rational(70), Rational(1, 8)}});
}

} // namespace

TEST_CASE("capped CFD prices are linear and complementary")
{
    auto [yes, no] = capped_cfd_price({Rational(30), Rational(20), Rational(40)});
    CHECK(yes == Rational(1, 2));
    CHECK(no == Rational(1, 2));

    auto at_h = capped_cfd_price({Rational(40), Rational(20), Rational(40)});
    CHECK(at_h.first == Rational(1));
    CHECK(at_h.second == Rational(0));

    auto low = capped_cfd_price({Rational(25), Rational(20), Rational(40)});
    CHECK(low.first == Rational(1, 4));
    CHECK(low.second == Rational(3, 4));

    // monotone in c and summing to one across the grid
    Rational prev_yes = -1;
    for (Rational c = Rational(20); c <= 40; c += Rational(1, 4)) {
        auto [y, n] = capped_cfd_price({c, Rational(20), Rational(40)});
        CHECK(y + n == Rational(1));
        CHECK(y >= prev_yes);
        prev_yes = y;
    }

    CHECK_THROWS_AS(capped_cfd_price({Rational(19), Rational(20), Rational(40)}), DomainError);
    CHECK_THROWS_AS(capped_cfd_price({Rational(30), Rational(40), Rational(20)}), DomainError);
}

TEST_CASE("continuous settlement values")
{
    CHECK(continuous_settlement_value(Rational(10), Rational(45, 100)) == parse_rational("4.5"));
    CHECK(continuous_settlement_value(Rational(10), Rational(1)) == Rational(10));
    CHECK(continuous_settlement_value(Rational(10), Rational(0)) == Rational(0));
    CHECK_THROWS_AS(continuous_settlement_value(Rational(10), Rational(2)), DomainError);
}

TEST_CASE("vector specs validate their weights")
{
    CHECK_THROWS_AS(VectorSpec({{Rational(1), Rational(1, 2)}, {Rational(0), Rational(1, 3)}}), DomainError);
    CHECK_THROWS_AS(VectorSpec({{Rational(1), Rational(1)}}), DomainError);
    CHECK_THROWS_AS(VectorSpec({{Rational(1), Rational(3, 2)}, {Rational(0), Rational(-1, 2)}}), DomainError);
    CHECK(alice_spec().settlement_sum() == Rational(100));
    CHECK(carol_spec().settlement_sum() == Rational(100));
}

TEST_CASE("the worked prices at 200 and 110")
{
    VectorAsset z1{Rational(500), EventId{}, alice_spec(), 1, {}};
    CHECK(vector_price(z1, Rational(200)) == Rational(1750, 12));
    CHECK(format_decimal(vector_price(z1, Rational(200)), 4) == "145.8333");
    CHECK(vector_price(z1, Rational(110)) == Rational(1250, 12));
    CHECK(format_decimal(vector_price(z1, Rational(110)), 4) == "104.1667");
}

TEST_CASE("price completeness: legs always sum to m")
{
    for (const auto& c : {Rational(70), Rational(110), Rational(200), Rational(500)}) {
        Rational total = 0;
        for (int j = 1; j <= 3; ++j)
            total += vector_price({Rational(500), EventId{}, alice_spec(), j, {}}, c);
        CHECK(total == Rational(500));
    }

    // seeded random specs keep the identity
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        int k = 2 + static_cast<int>(rng() % 5);
        std::vector<VectorLeg> legs;
        for (int i = 0; i < k; ++i)
            legs.push_back({Rational(static_cast<long>(rng() % 300)), Rational(1, k)});
        VectorSpec spec(std::move(legs));
        Rational c(static_cast<long>(rng() % 300));
        Rational total = 0;
        for (int j = 1; j <= k; ++j)
            total += vector_price({Rational(100), EventId{}, spec, j, {}}, c);
        CHECK(total == Rational(100));
    }
}

TEST_CASE("price' amplifies accuracy and clamps at zero")
{
    VectorAsset z1{Rational(500), EventId{}, alice_spec(), 1, {}};
    CHECK(vector_price_prime(z1, Rational(200)) == Rational(500, 6));

    VectorAsset z3{Rational(500), EventId{}, alice_spec(), 3, {}};
    CHECK(vector_price_prime(z3, Rational(70)) == Rational(0)); // clamped

    // a fully accurate leg earns the full m under price', m/(k-1) under price
    VectorSpec spec({{Rational(100), Rational(1, 2)}, {Rational(80), Rational(1, 4)}, {Rational(10), Rational(1, 4)}});
    VectorAsset exact_leg{Rational(90), EventId{}, spec, 1, {}};
    CHECK(vector_price_prime(exact_leg, Rational(100)) == Rational(90));
    CHECK(vector_price(exact_leg, Rational(100)) == Rational(45)); // m/(k-1)

    // when no clamp activates the primes also sum to m; with a clamp they fall short
    Rational total_no_clamp = 0;
    for (int j = 1; j <= 3; ++j)
        total_no_clamp += vector_price_prime({Rational(500), EventId{}, alice_spec(), j, {}}, Rational(100));
    CHECK(total_no_clamp == Rational(500));
    Rational total_clamped = 0;
    for (int j = 1; j <= 3; ++j)
        total_clamped += vector_price_prime({Rational(500), EventId{}, alice_spec(), j, {}}, Rational(70));
    CHECK(total_clamped < Rational(500));
}

TEST_CASE("all levels equal to c fall back to the symmetric price")
{
    VectorSpec flat({{Rational(50), Rational(1, 2)}, {Rational(50), Rational(1, 2)}});
    CHECK(vector_price({Rational(10), EventId{}, flat, 1, {}}, Rational(50)) == Rational(5));
    CHECK(vector_price_prime({Rational(10), EventId{}, flat, 2, {}}, Rational(50)) == Rational(5));
}

TEST_CASE("binary-style specs pass the full-set combine constraint identically")
{
    // the full-set chosen-leg sum is the settlement sum for every spec
    for (const VectorSpec& spec : {alice_spec(), carol_spec(),
                                   VectorSpec({{Rational(1), Rational(1, 2)}, {Rational(0), Rational(1, 2)}})}) {
        Rational chosen = 0;
        for (int j = 1; j <= spec.size(); ++j)
            chosen += spec.leg(j).weight * spec.leg(j).level;
        CHECK(chosen == spec.settlement_sum());
    }
}

TEST_CASE("vector split mints legs and the combine soaks them")
{
    Ledger ledger(std::map<Address, Rational>{{"alice", Rational(500)}});
    EventId e5 = ledger.register_event(baseline_event_description("x"));
    vector_split(ledger, "alice", Rational(500), e5, alice_spec());
    for (int j = 1; j <= 3; ++j)
        CHECK(ledger.balance("alice", AssetKey{vector_share(e5, alice_spec(), j), {}}) == Rational(500));
    CHECK(ledger.check_invariants().clean());

    std::vector<VectorAssetRef> full;
    for (int j = 1; j <= 3; ++j)
        full.push_back({e5, alice_spec(), j, {}, Rational(500)});
    auto warnings = vector_combine(ledger, "alice", full);
    CHECK(warnings.empty());
    CHECK(ledger.balance("alice", clean_unbet_key()) == Rational(500));
    CHECK(ledger.check_invariants().clean());
}

TEST_CASE("bad specs and shortfalls are rejected")
{
    Ledger ledger(std::map<Address, Rational>{{"alice", Rational(100)}});
    EventId e5 = derive_event_id(baseline_event_description("x"));
    CHECK_THROWS_AS(vector_split(ledger, "alice", Rational(500), e5, alice_spec()), DomainError);
    // weights (1/2, 1/3) cannot even construct
    CHECK_THROWS_AS(VectorSpec({{Rational(1), Rational(1, 2)}, {Rational(2), Rational(1, 3)}}), DomainError);
}

TEST_CASE("cross-spec combine follows the constraints")
{
    Ledger ledger(std::map<Address, Rational>{{"alice", Rational(500)}, {"carol", Rational(400)}});
    EventId e5 = ledger.register_event(baseline_event_description("x"));
    vector_split(ledger, "alice", Rational(500), e5, alice_spec());
    vector_split(ledger, "carol", Rational(400), e5, carol_spec());

    // alice's z1 divides into 100 + 400; carol buys the 400 slice
    ledger.transfer("alice", "carol", AssetKey{vector_share(e5, alice_spec(), 1), {}}, Rational(400));

    // w*b: alice leg1 = 25, carol leg1 = 75; s = s' = 100
    std::vector<VectorAssetRef> cross = {{e5, alice_spec(), 1, {}, Rational(400)},
                                         {e5, carol_spec(), 1, {}, Rational(400)}};
    auto warnings = vector_combine(ledger, "carol", cross);
    CHECK(ledger.balance("carol", clean_unbet_key()) == Rational(400));
    CHECK(warnings.size() == 2); // both sides are partial leg-sets
    CHECK(ledger.check_invariants().clean());
}

TEST_CASE("combine rejects constraint violations distinctly")
{
    Ledger ledger(std::map<Address, Rational>{{"alice", Rational(500)}, {"dave", Rational(300)}});
    EventId e5 = ledger.register_event(baseline_event_description("x"));
    EventId other = ledger.register_event(baseline_event_description("y"));
    vector_split(ledger, "alice", Rational(500), e5, alice_spec());
    vector_split(ledger, "dave", Rational(300), other, alice_spec());
    Ledger before = ledger;

    // z1 + z2 only: 25 + 100/3 != 100
    std::vector<VectorAssetRef> partial = {{e5, alice_spec(), 1, {}, Rational(500)},
                                           {e5, alice_spec(), 2, {}, Rational(500)}};
    CHECK_THROWS_WITH_AS(vector_combine(ledger, "alice", partial),
                         doctest::Contains("chosen legs sum"), DomainError);

    std::vector<VectorAssetRef> mixed_amounts = {{e5, alice_spec(), 1, {}, Rational(500)},
                                                 {e5, alice_spec(), 2, {}, Rational(400)}};
    CHECK_THROWS_WITH_AS(vector_combine(ledger, "alice", mixed_amounts),
                         doctest::Contains("amounts differ"), DomainError);

    std::vector<VectorAssetRef> mixed_events = {{e5, alice_spec(), 1, {}, Rational(100)},
                                                {other, alice_spec(), 2, {}, Rational(100)}};
    CHECK_THROWS_WITH_AS(vector_combine(ledger, "alice", mixed_events),
                         doctest::Contains("event ids differ"), DomainError);

    // unequal settlement sums
    VectorSpec shifted({{Rational(80), Rational(1, 2)}, {Rational(90), Rational(1, 2)}});
    std::vector<VectorAssetRef> bad_s = {{e5, alice_spec(), 1, {}, Rational(100)},
                                         {e5, shifted, 1, {}, Rational(100)}};
    CHECK_THROWS_WITH_AS(vector_combine(ledger, "alice", bad_s),
                         doctest::Contains("settlement sums differ"), DomainError);

    CHECK(ledger == before);
}

TEST_CASE("degenerate single-asset combine is allowed but flagged")
{
    VectorSpec spec({{Rational(100), Rational(1, 2)}, {Rational(60), Rational(1, 4)}, {Rational(140), Rational(1, 4)}});
    // s = 50 + 15 + 35 = 100; leg 1 alone: w*b = 50 != 100 -> cannot combine
    // craft one where a single leg matches: w1*b1 = s means the rest sum to 0
    VectorSpec degen({{Rational(200), Rational(1, 2)}, {Rational(0), Rational(1, 4)}, {Rational(0), Rational(1, 4)}});
    CHECK(degen.settlement_sum() == Rational(100));

    Ledger ledger(std::map<Address, Rational>{{"alice", Rational(10)}});
    EventId e = ledger.register_event(baseline_event_description("z"));
    vector_split(ledger, "alice", Rational(10), e, degen);
    auto warnings = vector_combine(ledger, "alice", {{e, degen, 1, {}, Rational(10)}});
    CHECK(warnings.size() == 1);
    CHECK(ledger.balance("alice", clean_unbet_key()) == Rational(10));
    // the other legs remain in circulation; the books still reconcile
    CHECK(ledger.check_invariants().clean());
    (void)spec;
}

TEST_CASE("vector force needs a dated event and tolerance")
{
    Ledger ledger(std::map<Address, Rational>{{"alice", Rational(500)}});
    EventId undated = ledger.register_event(baseline_event_description("x"));
    EventId dated = ledger.register_event(dated_baseline_event_description("x", "2016-01-01"));

    vector_split(ledger, "alice", Rational(200), undated, alice_spec());
    vector_split(ledger, "alice", Rational(300), dated, alice_spec());

    std::vector<VectorAssetRef> undated_full;
    std::vector<VectorAssetRef> dated_full;
    for (int j = 1; j <= 3; ++j) {
        undated_full.push_back({undated, alice_spec(), j, {}, Rational(200)});
        dated_full.push_back({dated, alice_spec(), j, {}, Rational(300)});
    }

    CHECK_THROWS_WITH_AS(vector_force(ledger, "alice", undated_full, Rational(100), Rational(0)),
                         doctest::Contains("dated"), DomainError);
    // weights of a full set sum to 3, not 1: rejected at epsilon 0
    CHECK_THROWS_AS(vector_force(ledger, "alice", dated_full, Rational(300), Rational(0)), DomainError);

    // exact single-leg claim: w=1/2 within eps=1/2 of 1, w*b = 100 = claim
    VectorSpec half({{Rational(200), Rational(1, 2)}, {Rational(0), Rational(1, 2)}});
    EventId dated2 = ledger.register_event(dated_baseline_event_description("w", "2017-06-30"));
    vector_split(ledger, "alice", Rational(50), dated2, half);
    vector_force(ledger, "alice", {{dated2, half, 1, {}, Rational(50)}}, Rational(100), Rational(1, 2));
    HistorySet h({settlement_entry(dated2, Rational(100))});
    CHECK(ledger.balance("alice", AssetKey{unbet(), h}) == Rational(50));
    CHECK(ledger.check_invariants().clean());

    // claim off by more than the tolerance
    vector_split(ledger, "alice", Rational(10), dated2, half);
    CHECK_THROWS_WITH_AS(
        vector_force(ledger, "alice", {{dated2, half, 1, {}, Rational(10)}}, Rational(150), Rational(1, 2)),
        doctest::Contains("claimed settlement"), DomainError);
}

TEST_CASE("two partial sets force together within a loose tolerance")
{
    Ledger ledger(std::map<Address, Rational>{{"alice", Rational(600)}});
    EventId dated = ledger.register_event(dated_baseline_event_description("x", "2016-01-01"));
    VectorSpec a({{Rational(150), Rational(1, 2)}, {Rational(50), Rational(1, 2)}});   // s = 100
    VectorSpec b({{Rational(49), Rational(1, 2)}, {Rational(151), Rational(1, 2)}});   // s = 100
    vector_split(ledger, "alice", Rational(300), dated, a);
    vector_split(ledger, "alice", Rational(300), dated, b);

    // chosen legs: 150/2 + 49/2 = 99.5; weights sum to 1; claim 99.5 exactly
    std::vector<VectorAssetRef> both = {{dated, a, 1, {}, Rational(300)}, {dated, b, 1, {}, Rational(300)}};
    vector_force(ledger, "alice", both, parse_rational("99.5"), Rational(1, 100));
    HistorySet h({settlement_entry(dated, parse_rational("99.5"))});
    CHECK(ledger.balance("alice", AssetKey{unbet(), h}) == Rational(300));
    CHECK(ledger.check_invariants().clean());
}
