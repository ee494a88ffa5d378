#pragma once

#include "pmarket/history.hpp"

#include <string>
#include <variant>
#include <vector>

namespace pmarket {

/// One leg of a prediction vector: a predicted price level and its weight.
struct VectorLeg {
    Rational level;  // b_i
    Rational weight; // w_i

    bool operator==(const VectorLeg&) const = default;
    bool operator<(const VectorLeg& o) const
    {
        return level != o.level ? level < o.level : weight < o.weight;
    }
};

/// The (b_1, w_1, ..., b_k, w_k) prediction vector of a vector CFD.
/// Valid when k >= 2, every weight is positive, every level nonnegative,
/// and the weights sum to exactly 1.
class VectorSpec {
public:
    VectorSpec() = default;
    explicit VectorSpec(std::vector<VectorLeg> legs);

    int size() const { return static_cast<int>(legs_.size()); }
    const std::vector<VectorLeg>& legs() const { return legs_; }
    const VectorLeg& leg(int j) const { return legs_.at(static_cast<std::size_t>(j - 1)); } // 1-based

    /// s = sum w_i * b_i, the spec's settlement sum.
    Rational settlement_sum() const;

    /// Digest of the canonical serialization; keys the per-series counters.
    Digest id() const;
    std::string canonical_serialization() const;
    std::string render() const;

    bool operator==(const VectorSpec&) const = default;
    bool operator<(const VectorSpec& o) const { return legs_ < o.legs_; }

private:
    std::vector<VectorLeg> legs_;
};

struct UnbetTag {
    bool operator==(const UnbetTag&) const = default;
    bool operator<(const UnbetTag&) const { return false; }
};

/// Share of outcome `index` out of `arity` outcomes of an event. Binary
/// Yes/No is the arity-2 instance (Yes = 1, No = 2); there is no separate
/// binary representation.
struct IndexedTag {
    EventId event;
    int index = 0;
    int arity = 0;

    bool operator==(const IndexedTag&) const = default;
    bool operator<(const IndexedTag& o) const
    {
        if (event != o.event)
            return event < o.event;
        if (arity != o.arity)
            return arity < o.arity;
        return index < o.index;
    }
};

/// Leg J of a vector CFD on a baseline asset.
struct VectorTag {
    EventId event;
    VectorSpec spec;
    int leg = 0; // 1..k

    bool operator==(const VectorTag&) const = default;
    bool operator<(const VectorTag& o) const
    {
        if (event != o.event)
            return event < o.event;
        if (!(spec == o.spec))
            return spec < o.spec;
        return leg < o.leg;
    }
};

using OutcomeTag = std::variant<UnbetTag, IndexedTag, VectorTag>;

constexpr int kYes = 1;
constexpr int kNo = 2;

OutcomeTag unbet();
OutcomeTag yes_share(EventId event);
OutcomeTag no_share(EventId event);
OutcomeTag indexed_share(EventId event, int index, int arity);
OutcomeTag vector_share(EventId event, VectorSpec spec, int leg);

bool tag_less(const OutcomeTag& a, const OutcomeTag& b);
std::string render_tag(const OutcomeTag& tag);

/// Fungibility key: assets merge in a balance iff tag and history are equal.
struct AssetKey {
    OutcomeTag tag;
    HistorySet history;

    bool is_clean_unbet() const
    {
        return std::holds_alternative<UnbetTag>(tag) && history.empty();
    }

    std::string render() const;

    bool operator==(const AssetKey&) const = default;
    bool operator<(const AssetKey& o) const
    {
        if (!(tag == o.tag))
            return tag_less(tag, o.tag);
        return history < o.history;
    }
};

AssetKey clean_unbet_key();

/// An (amount, tag, history) holding. Amounts are always positive; zero
/// balances are erased, never stored.
struct ColoredAsset {
    Rational amount;
    OutcomeTag tag;
    HistorySet history;

    AssetKey key() const { return AssetKey{tag, history}; }
};

} // namespace pmarket
