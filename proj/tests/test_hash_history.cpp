#include "pmarket/errors.hpp"
#include "pmarket/history.hpp"

#include <doctest.h>

using namespace pmarket;

namespace {

// SHA-256 of the sentence, computed once out-of-band and frozen.
const std::string kObamaDigest = "5e76268d2466a3a566ebf2e61c63ba314c97196f7175f05dd597db5fcfc65f5e";

EventId ev(const std::string& description)
{
    return derive_event_id(description);
}

} // namespace

TEST_CASE("event ids are the digest of the description")
{
    EventId obama = ev("Barack Obama will win re-election in 2012");
    CHECK(obama.hex() == kObamaDigest);
    CHECK(ev("Barack Obama will win re-election in 2012") == obama);
    CHECK(ev("Barack Obama will win re-election in 2016") != obama);
    CHECK_THROWS_AS(derive_event_id(""), DomainError);
}

TEST_CASE("digest hex round-trips")
{
    EventId obama = ev("Barack Obama will win re-election in 2012");
    CHECK(digest_from_hex(obama.hex()) == obama.digest);
    CHECK_THROWS_AS(digest_from_hex("abc"), DomainError);
    CHECK_THROWS_AS(digest_from_hex(std::string(64, 'z')), DomainError);
}

TEST_CASE("set-id is canonical")
{
    HistoryEntry a = subset_entry(ev("event a"), {1});
    HistoryEntry b = subset_entry(ev("event b"), {2});

    CHECK(canonical_set_id(HistorySet{}) == sha256(""));
    CHECK(canonical_set_id(HistorySet({a, b})) == canonical_set_id(HistorySet({b, a})));
    CHECK(canonical_set_id(HistorySet({a})) != canonical_set_id(HistorySet({a, b})));
}

TEST_CASE("set-id extension needs the right preimage")
{
    HistoryEntry a = subset_entry(ev("event a"), {1});
    HistoryEntry b = subset_entry(ev("event b"), {2});
    HistoryEntry c = subset_entry(ev("event c"), {1, 3});

    HistorySet just_a({a});
    HistorySet just_b({b});
    Digest id_a = canonical_set_id(just_a);

    CHECK(extend_set_id(id_a, just_a, just_b) == canonical_set_id(HistorySet({a, b})));
    CHECK(extend_set_id(canonical_set_id(HistorySet{}), HistorySet{}, HistorySet({a, b})) ==
          canonical_set_id(HistorySet({a, b})));
    CHECK_THROWS_AS(extend_set_id(id_a, just_b, HistorySet({c})), DomainError);
    // overlapping event id between preimage and additions
    HistoryEntry a_other = subset_entry(ev("event a"), {2});
    CHECK_THROWS_AS(extend_set_id(id_a, just_a, HistorySet({a_other})), DomainError);
}

TEST_CASE("histories deduplicate and union")
{
    HistoryEntry a = subset_entry(ev("event a"), {1});
    HistoryEntry a2 = subset_entry(ev("event a"), {1});
    HistorySet s({a, a2});
    CHECK(s.size() == 1);

    HistoryEntry a_no = subset_entry(ev("event a"), {2});
    HistorySet merged = HistorySet::union_of(s, HistorySet({a_no}));
    CHECK(merged.size() == 2);
    CHECK(merged.has_duplicate_event());
    CHECK_FALSE(s.has_duplicate_event());
}

TEST_CASE("settlement entries serialize distinctly from subsets")
{
    EventId e = ev("baseline asset x at date 2016-01-01");
    HistoryEntry settle = settlement_entry(e, parse_rational("110"));
    HistoryEntry sub = subset_entry(e, {1});
    CHECK(canonical_set_id(HistorySet({settle})) != canonical_set_id(HistorySet({sub})));
    CHECK(HistorySet({settle}).contains_event(e));
}

TEST_CASE("subset entries reject empties and normalize order")
{
    EventId e = ev("event a");
    CHECK_THROWS_AS(subset_entry(e, {}), DomainError);
    CHECK(subset_entry(e, {3, 1, 1}).subset() == std::vector<int>{1, 3});
}
