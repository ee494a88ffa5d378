#include "pmarket/asset.hpp"
#include "pmarket/errors.hpp"

namespace pmarket {

VectorSpec::VectorSpec(std::vector<VectorLeg> legs) : legs_(std::move(legs))
{
    if (legs_.size() < 2)
        throw DomainError("vector spec needs at least two legs");
    Rational total = 0;
    for (const auto& l : legs_) {
        if (l.weight <= 0)
            throw DomainError("vector spec weights must be positive");
        if (l.level < 0)
            throw DomainError("vector spec levels must be nonnegative");
        total += l.weight;
    }
    if (total != 1)
        throw DomainError("vector spec weights must sum to 1 (got " + format_exact(total) + ")");
}

Rational VectorSpec::settlement_sum() const
{
    Rational s = 0;
    for (const auto& l : legs_)
        s += l.weight * l.level;
    return s;
}

std::string VectorSpec::canonical_serialization() const
{
    std::string s;
    for (std::size_t i = 0; i < legs_.size(); ++i) {
        if (i)
            s += ',';
        s += format_exact(legs_[i].level);
        s += ':';
        s += format_exact(legs_[i].weight);
    }
    return s;
}

Digest VectorSpec::id() const
{
    return sha256(canonical_serialization());
}

std::string VectorSpec::render() const
{
    return "(" + canonical_serialization() + ")";
}

OutcomeTag unbet()
{
    return UnbetTag{};
}

OutcomeTag yes_share(EventId event)
{
    return IndexedTag{event, kYes, 2};
}

OutcomeTag no_share(EventId event)
{
    return IndexedTag{event, kNo, 2};
}

OutcomeTag indexed_share(EventId event, int index, int arity)
{
    if (arity < 2)
        throw DomainError("outcome arity must be at least 2");
    if (index < 1 || index > arity)
        throw DomainError("outcome index out of range");
    return IndexedTag{event, index, arity};
}

OutcomeTag vector_share(EventId event, VectorSpec spec, int leg)
{
    if (leg < 1 || leg > spec.size())
        throw DomainError("vector leg out of range");
    return VectorTag{event, std::move(spec), leg};
}

bool tag_less(const OutcomeTag& a, const OutcomeTag& b)
{
    if (a.index() != b.index())
        return a.index() < b.index();
    return std::visit(
        [&](const auto& lhs) {
            using T = std::decay_t<decltype(lhs)>;
            return lhs < std::get<T>(b);
        },
        a);
}

std::string render_tag(const OutcomeTag& tag)
{
    return std::visit(
        [](const auto& t) -> std::string {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, UnbetTag>) {
                return "unbet";
            } else if constexpr (std::is_same_v<T, IndexedTag>) {
                if (t.arity == 2)
                    return (t.index == kYes ? std::string("yes:") : std::string("no:")) + t.event.short_hex();
                return std::to_string(t.index) + "/" + std::to_string(t.arity) + ":" + t.event.short_hex();
            } else {
                return "vec" + std::to_string(t.leg) + "of" + std::to_string(t.spec.size()) + ":" + t.event.short_hex();
            }
        },
        tag);
}

std::string AssetKey::render() const
{
    std::string s = render_tag(tag);
    if (!history.empty())
        s += "+" + history.render();
    return s;
}

AssetKey clean_unbet_key()
{
    return AssetKey{unbet(), HistorySet{}};
}

} // namespace pmarket
