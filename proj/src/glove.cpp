#include "pmarket/glove.hpp"
#include "pmarket/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace pmarket::glove {

namespace {

void require_probability(const Rational& p)
{
    if (p < 0 || p > 1)
        throw DomainError("agreement probability must lie in [0,1]");
}

/// Factorials 0!..max! and exact binomials; out-of-range binomials are 0.
class FactorialTable {
public:
    explicit FactorialTable(long max) : table_(static_cast<std::size_t>(max) + 1)
    {
        table_[0] = 1;
        for (long i = 1; i <= max; ++i)
            table_[static_cast<std::size_t>(i)] = table_[static_cast<std::size_t>(i - 1)] * i;
    }

    const BigInt& fact(long n) const { return table_[static_cast<std::size_t>(n)]; }

    BigInt binom(long n, long k) const
    {
        if (k < 0 || n < 0 || k > n)
            return 0;
        return fact(n) / (fact(k) * fact(n - k));
    }

private:
    std::vector<BigInt> table_;
};

/// Uniform draw in [0, bound) by rejection; fixed algorithm so that seeded
/// runs are identical on every platform.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound)
{
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return draw % bound;
}

} // namespace

Rational coalition_value(const CoalitionProfile& profile, const Rational& p)
{
    if (profile.plus < 0 || profile.minus < 0)
        throw DomainError("coalition share counts must be nonnegative");
    require_probability(p);
    return p * profile.plus + (1 - p) * std::min(profile.plus, profile.minus);
}

Rational shapley_minus_exact(long m, long n, const Rational& p)
{
    if (n < 1)
        throw DomainError("shapley_minus_exact needs at least one \"-\" player");
    if (m < 0)
        throw DomainError("negative \"+\" player count");
    require_probability(p);

    const long total = m + n;
    FactorialTable fac(total);
    BigInt sum = 0;
    for (long i = 1; i <= total; ++i) {
        BigInt inner = 0;
        for (long j = 0; j <= i / 2 - 1; ++j) // empty when i = 1
            inner += fac.binom(n - 1, j) * fac.binom(m, i - j - 1);
        if (inner != 0)
            sum += fac.fact(total - i) * fac.fact(i - 1) * inner;
    }
    return (1 - p) * Rational(sum, fac.fact(total));
}

Rational shapley_plus_exact(long m, long n, const Rational& p)
{
    if (m < 1)
        throw DomainError("shapley_plus_exact needs at least one \"+\" player");
    require_probability(p);
    if (n == 0)
        return p; // no pairs can ever form
    Rational v_minus = shapley_minus_exact(m, n, p);
    return (m * p - n * v_minus + (1 - p) * std::min(m, n)) / m;
}

ShapleyResult shapley_exact(const GloveGame& game)
{
    ShapleyResult r;
    r.v_minus = shapley_minus_exact(game.m, game.n, game.p);
    r.v_plus = shapley_plus_exact(game.m, game.n, game.p);
    r.s_minus = shapley_minus_exact(game.m, game.n, Rational(0));
    r.s_plus = shapley_plus_exact(game.m, game.n, Rational(0));
    return r;
}

std::vector<Rational> shapley_bruteforce(const std::vector<BrutePlayer>& players, const Rational& p, int cap)
{
    require_probability(p);
    const std::size_t count = players.size();
    if (count == 0)
        throw DomainError("brute force needs at least one player");
    if (count > static_cast<std::size_t>(cap))
        throw DomainError("brute force limited to " + std::to_string(cap) + " players (got " +
                          std::to_string(count) + ")");
    for (const auto& pl : players)
        if (pl.plus < 0 || pl.minus < 0)
            throw DomainError("share counts must be nonnegative");

    // Accumulate integer marginal components per player: the value of a
    // coalition is (a k + (b - a) min(k, l)) / b with p = a/b, so summing
    // delta-k and delta-min over permutations keeps everything in int64.
    std::vector<long long> delta_plus(count, 0);
    std::vector<long long> delta_match(count, 0);

    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    do {
        long k = 0;
        long l = 0;
        long matched = 0;
        for (std::size_t idx : order) {
            k += players[idx].plus;
            l += players[idx].minus;
            long now = std::min(k, l);
            delta_plus[idx] += players[idx].plus;
            delta_match[idx] += now - matched;
            matched = now;
        }
    } while (std::next_permutation(order.begin(), order.end()));

    BigInt perms = 1;
    for (std::size_t i = 2; i <= count; ++i)
        perms *= i;

    std::vector<Rational> values;
    values.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        values.push_back((p * delta_plus[i] + (1 - p) * delta_match[i]) / Rational(perms));
    return values;
}

MonteCarloEstimate shapley_montecarlo(long m, long n, const Rational& p, std::uint64_t samples,
                                      std::uint64_t seed)
{
    if (m < 1 || n < 1)
        throw DomainError("monte carlo needs at least one player of each type");
    if (samples < 1)
        throw DomainError("monte carlo needs at least one sample");
    require_probability(p);

    // slots: 0 = observed "+", 1 = other "+", 2 = observed "-", 3 = other "-"
    std::vector<std::uint8_t> slots;
    slots.reserve(static_cast<std::size_t>(m + n));
    slots.push_back(0);
    for (long i = 1; i < m; ++i)
        slots.push_back(1);
    slots.push_back(2);
    for (long i = 1; i < n; ++i)
        slots.push_back(3);

    std::mt19937_64 rng(seed);
    std::uint64_t completes_plus = 0;  // observed "+" closes a pair on arrival
    std::uint64_t completes_minus = 0; // observed "-" closes a pair on arrival

    for (std::uint64_t s = 0; s < samples; ++s) {
        // Fisher-Yates
        for (std::size_t i = slots.size() - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(bounded_draw(rng, i + 1));
            std::swap(slots[i], slots[j]);
        }
        long k = 0;
        long l = 0;
        for (std::uint8_t slot : slots) {
            switch (slot) {
            case 0:
                if (l > k)
                    ++completes_plus;
                ++k;
                break;
            case 1:
                ++k;
                break;
            case 2:
                if (k > l)
                    ++completes_minus;
                ++l;
                break;
            default:
                ++l;
                break;
            }
        }
    }

    MonteCarloEstimate est;
    est.samples = samples;
    Rational q_plus = Rational(BigInt(completes_plus), BigInt(samples));
    Rational q_minus = Rational(BigInt(completes_minus), BigInt(samples));
    est.v_plus = p + (1 - p) * q_plus;
    est.v_minus = (1 - p) * q_minus;
    const double scale = to_double(1 - p);
    const double qp = to_double(q_plus);
    const double qm = to_double(q_minus);
    est.se_plus = scale * std::sqrt(qp * (1.0 - qp) / static_cast<double>(samples));
    est.se_minus = scale * std::sqrt(qm * (1.0 - qm) / static_cast<double>(samples));
    return est;
}

Rational burn_revenue(Side side, long keep, long opposing_count, const Rational& p)
{
    if (keep < 1)
        throw DomainError("burn analysis needs at least one kept share");
    if (opposing_count < 1)
        throw DomainError("burn analysis needs at least one opposing share");
    require_probability(p);
    if (side == Side::Plus) {
        Rational s_plus = shapley_plus_exact(keep, opposing_count, Rational(0));
        return keep * (p + (1 - p) * s_plus);
    }
    Rational s_minus = shapley_minus_exact(opposing_count, keep, Rational(0));
    return keep * (1 - p) * s_minus;
}

BurnAnalysis optimal_burn(Side side, long initial_count, long opposing_count, const Rational& p)
{
    if (initial_count < 1)
        throw DomainError("burn analysis needs at least one held share");
    BurnAnalysis best{side, initial_count, 0, Rational(0)};
    for (long keep = 1; keep <= initial_count; ++keep) {
        Rational revenue = burn_revenue(side, keep, opposing_count, p);
        if (best.keep_count == 0 || revenue > best.revenue || (revenue == best.revenue && keep > best.keep_count)) {
            best.keep_count = keep;
            best.revenue = revenue;
        }
    }
    return best;
}

Rational consolidated_owner_value(long m_consolidated, long n_singletons, const Rational& p, int cap)
{
    if (m_consolidated < 1)
        throw DomainError("consolidated owner needs at least one share");
    if (n_singletons < 0)
        throw DomainError("negative opposing player count");
    std::vector<BrutePlayer> players;
    players.push_back({"owner", m_consolidated, 0});
    for (long i = 0; i < n_singletons; ++i)
        players.push_back({"minus" + std::to_string(i + 1), 0, 1});
    return shapley_bruteforce(players, p, cap).front();
}

Rational fungible_burn_total(const FungibleBurnQuery& query)
{
    if (query.market_value <= 0)
        throw DomainError("market value must be positive");
    if (query.held_coins < 0 || query.burned_coins < 0)
        throw DomainError("coin counts must be nonnegative");
    if (query.held_coins >= query.total_coins)
        throw DomainError("held coins must be fewer than the total supply");
    if (query.burned_coins > query.held_coins)
        throw DomainError("cannot burn more coins than held");
    if (query.burned_coins >= query.total_coins)
        throw DomainError("cannot burn the entire supply");
    return Rational(query.held_coins - query.burned_coins, query.total_coins - query.burned_coins) *
           query.market_value;
}

std::vector<SurfaceCell> value_surface(long n, const std::vector<long>& m_grid, const std::vector<Rational>& p_grid)
{
    if (n < 1)
        throw DomainError("value surface needs at least one opposing share");
    if (m_grid.empty() || p_grid.empty())
        throw DomainError("value surface needs nonempty grids");

    std::vector<SurfaceCell> cells;
    cells.reserve(m_grid.size() * p_grid.size());
    for (long m : m_grid) {
        // one s+ per m serves the whole p row: value = m (p + (1-p) s+)
        Rational s_plus = shapley_plus_exact(m, n, Rational(0));
        for (const Rational& p : p_grid) {
            require_probability(p);
            cells.push_back({p, m, m * (p + (1 - p) * s_plus)});
        }
    }
    return cells;
}

} // namespace pmarket::glove
