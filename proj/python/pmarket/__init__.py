"""Arbiter-free prediction market toolkit.

Thin python surface over the C++ core: colored-coin ledger operations,
glove-game Shapley analytics, capped/vector CFD pricing, scenario replays
and the semi-decentralized order-book simulator. Amounts and probabilities
cross the boundary as exact strings ("0.1", "1/10", "7142.8") and results
come back as exact "n/d" strings; use fractions.Fraction for arithmetic.
"""

from pmarket._core import (  # noqa: F401
    DomainError,
    Ledger,
    burn_revenue,
    capped_cfd_price,
    coalition_value,
    consolidated_owner_value,
    continuous_settlement_value,
    dataset_csv,
    derive_event_id,
    format_decimal,
    fungible_burn_total,
    optimal_burn,
    run_scenario,
    scenario_names,
    shapley_bruteforce,
    shapley_exact,
    shapley_montecarlo,
    simulate_orderbook,
    vector_price,
)

__version__ = "0.1.0"
