#pragma once

#include "pmarket/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pmarket::glove {

/// The matching game: m "+" shareholders, n "-" shareholders, agreement
/// probability p. A coalition holding (k, l) shares is worth
/// p*k + (1-p)*min(k, l).
struct GloveGame {
    long m = 0;
    long n = 0;
    Rational p;
};

struct CoalitionProfile {
    long plus = 0;
    long minus = 0;
};

enum class Side { Plus, Minus };

struct ShapleyResult {
    Rational v_plus;
    Rational v_minus;
    Rational s_plus;  // p = 0 component, v+ = p + (1-p) s+
    Rational s_minus; // p = 0 component, v- = (1-p) s-
};

struct BurnAnalysis {
    Side side;
    long initial_count = 0;
    long keep_count = 0;
    Rational revenue;
};

struct FungibleBurnQuery {
    Rational market_value; // C, total value of the supply
    long total_coins = 0;  // n
    long held_coins = 0;   // m
    long burned_coins = 0; // x
};

struct BrutePlayer {
    std::string label;
    long plus = 0;
    long minus = 0;
};

struct MonteCarloEstimate {
    Rational v_minus;
    Rational v_plus;
    double se_minus = 0; // standard error of the v- estimate
    double se_plus = 0;
    std::uint64_t samples = 0;
};

inline constexpr int kDefaultBruteForceCap = 9;

Rational coalition_value(const CoalitionProfile& profile, const Rational& p);

/// Exact Shapley value of one "-" player via the closed-form double sum,
/// evaluated in big-integer arithmetic. Requires n >= 1.
Rational shapley_minus_exact(long m, long n, const Rational& p);

/// Exact Shapley value of one "+" player via the efficiency identity
/// v+ = (m p - n v- + (1-p) min(m, n)) / m. Requires m >= 1.
Rational shapley_plus_exact(long m, long n, const Rational& p);

ShapleyResult shapley_exact(const GloveGame& game);

/// Defining permutation average over all (#players)! orders; the oracle the
/// closed form is checked against. Players may hold several shares of either
/// type (consolidated owners). Enumeration is capped.
std::vector<Rational> shapley_bruteforce(const std::vector<BrutePlayer>& players, const Rational& p,
                                         int cap = kDefaultBruteForceCap);

/// Seeded permutation sampling of one fixed "-" and one fixed "+" player's
/// marginal contribution. Identical seeds give identical estimates.
MonteCarloEstimate shapley_montecarlo(long m, long n, const Rational& p, std::uint64_t samples,
                                      std::uint64_t seed);

/// Revenue after burning all but `keep` shares, with the market naively
/// re-pricing the kept shares as singleton players at the game with p = 0
/// components: Plus -> keep * (p + (1-p) s+(keep)); Minus -> keep * (1-p) s-(keep).
Rational burn_revenue(Side side, long keep, long opposing_count, const Rational& p);

/// argmax of burn_revenue over keep in 1..initial_count; ties keep more.
BurnAnalysis optimal_burn(Side side, long initial_count, long opposing_count, const Rational& p);

/// Value of one owner holding all m "+" shares against n singleton "-"
/// players, by brute force.
Rational consolidated_owner_value(long m_consolidated, long n_singletons, const Rational& p,
                                  int cap = kDefaultBruteForceCap);

/// (m - x) / (n - x) * C: the total value left after burning x of m held
/// fungible coins out of a supply of n.
Rational fungible_burn_total(const FungibleBurnQuery& query);

struct SurfaceCell {
    Rational p;
    long m = 0;
    Rational value; // burn_revenue(Plus, m, n, p)
};

std::vector<SurfaceCell> value_surface(long n, const std::vector<long>& m_grid,
                                       const std::vector<Rational>& p_grid);

} // namespace pmarket::glove
