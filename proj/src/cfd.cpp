#include "pmarket/cfd.hpp"
#include "pmarket/errors.hpp"

namespace pmarket::cfd {

std::pair<Rational, Rational> capped_cfd_price(const CappedCfdQuery& query)
{
    if (query.lower < 0 || query.lower >= query.upper)
        throw DomainError("capped CFD needs 0 <= L < H");
    if (query.current < query.lower || query.current > query.upper)
        throw DomainError("current price outside the barrier range");
    Rational yes = (query.current - query.lower) / (query.upper - query.lower);
    return {yes, 1 - yes};
}

Rational continuous_settlement_value(const Rational& amount, const Rational& fraction)
{
    if (fraction < 0 || fraction > 1)
        throw DomainError("settlement fraction must lie in [0,1]");
    return amount * fraction;
}

namespace {

/// d_J and s for the asset's spec at price c; both nonnegative.
std::pair<Rational, Rational> deviations(const VectorAsset& asset, const Rational& c)
{
    if (c < 0)
        throw DomainError("current price must be nonnegative");
    if (asset.leg < 1 || asset.leg > asset.spec.size())
        throw DomainError("vector leg out of range");
    Rational s = 0;
    Rational d_leg = 0;
    for (int i = 1; i <= asset.spec.size(); ++i) {
        const auto& leg = asset.spec.leg(i);
        Rational diff = leg.level - c;
        if (diff < 0)
            diff = -diff;
        Rational d = leg.weight * diff;
        s += d;
        if (i == asset.leg)
            d_leg = d;
    }
    return {d_leg, s};
}

} // namespace

Rational vector_price(const VectorAsset& asset, const Rational& current_price)
{
    auto [d_leg, s] = deviations(asset, current_price);
    const int k = asset.spec.size();
    if (s == 0)
        return asset.amount / k; // every level equals c; symmetric limit
    return asset.amount / (k - 1) * (1 - d_leg / s);
}

Rational vector_price_prime(const VectorAsset& asset, const Rational& current_price)
{
    auto [d_leg, s] = deviations(asset, current_price);
    const int k = asset.spec.size();
    if (s == 0)
        return asset.amount / k;
    Rational value = asset.amount * (1 - (k - 1) * d_leg / s);
    return value < 0 ? Rational(0) : value;
}

void vector_split(Ledger& ledger, const Address& owner, const Rational& amount, const EventId& event,
                  const VectorSpec& spec, const HistorySet& history)
{
    ledger.vector_split(owner, amount, event, spec, history);
}

std::vector<std::string> vector_combine(Ledger& ledger, const Address& owner,
                                        const std::vector<VectorAssetRef>& assets)
{
    return ledger.vector_combine(owner, assets);
}

void vector_force(Ledger& ledger, const Address& owner, const std::vector<VectorAssetRef>& assets,
                  const Rational& claimed_settlement, const Rational& tolerance)
{
    ledger.vector_force(owner, assets, claimed_settlement, tolerance);
}

std::string baseline_event_description(const std::string& asset_name)
{
    return "baseline asset " + asset_name;
}

std::string dated_baseline_event_description(const std::string& asset_name, const std::string& date)
{
    return "baseline asset " + asset_name + " at date " + date;
}

EventId baseline_event_id(const std::string& asset_name)
{
    return derive_event_id(baseline_event_description(asset_name));
}

EventId dated_baseline_event_id(const std::string& asset_name, const std::string& date)
{
    return derive_event_id(dated_baseline_event_description(asset_name, date));
}

} // namespace pmarket::cfd
