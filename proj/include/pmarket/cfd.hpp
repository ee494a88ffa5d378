#pragma once

#include "pmarket/ledger.hpp"

#include <utility>

namespace pmarket::cfd {

/// Barrier query for a capped CFD "x reaches H before L".
struct CappedCfdQuery {
    Rational current; // c
    Rational lower;   // L
    Rational upper;   // H
};

/// Linear barrier prices: yes = (c - L)/(H - L), no = (H - c)/(H - L).
/// yes + no == 1 exactly for every c in [L, H].
std::pair<Rational, Rational> capped_cfd_price(const CappedCfdQuery& query);

/// Recognized value of `amount` forced Yes shares of a continuous-outcome
/// event once `fraction` of the outcome materialized: amount * fraction.
Rational continuous_settlement_value(const Rational& amount, const Rational& fraction);

/// A priced vector holding: amount m of leg J of spec on a baseline event.
struct VectorAsset {
    Rational amount;
    EventId event;
    VectorSpec spec;
    int leg = 0;
    HistorySet history;
};

/// price(z) = m/(k-1) * (1 - d_J/s) with d_i = w_i |b_i - c|, s = sum d_i.
/// When s == 0 (all levels equal c) the symmetric m/k is returned.
Rational vector_price(const VectorAsset& asset, const Rational& current_price);

/// price'(z) = max(0, m (1 - (k-1) d_J/s)); the accuracy-amplified quote.
Rational vector_price_prime(const VectorAsset& asset, const Rational& current_price);

/// Ledger transactions for vector CFDs (the mechanics live on the ledger; the
/// cfd module is their public surface).
void vector_split(Ledger& ledger, const Address& owner, const Rational& amount, const EventId& event,
                  const VectorSpec& spec, const HistorySet& history = HistorySet{});
std::vector<std::string> vector_combine(Ledger& ledger, const Address& owner,
                                        const std::vector<VectorAssetRef>& assets);
void vector_force(Ledger& ledger, const Address& owner, const std::vector<VectorAssetRef>& assets,
                  const Rational& claimed_settlement, const Rational& tolerance = Rational(0));

/// Event-id helpers matching the paper's formats.
EventId baseline_event_id(const std::string& asset_name);
EventId dated_baseline_event_id(const std::string& asset_name, const std::string& date);
std::string baseline_event_description(const std::string& asset_name);
std::string dated_baseline_event_description(const std::string& asset_name, const std::string& date);

} // namespace pmarket::cfd
