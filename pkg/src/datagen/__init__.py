"""Synthetic data generation and the Monte Carlo experiment."""
from src.datagen.simulation import (
    StateSpaceModel,
    simulate,
    add_noise,
    state_space_from_poles,
    motivational_data,
    example_poles,
    example_state_space,
    reduced_poles,
    reduced_state_space
)
from src.datagen.montecarlo import (
    MonteCarloConfig,
    SummaryRow,
    TrialMethod,
    TrialRecord,
    montecarlo,
    third_order_config,
    reduced_config,
    records_to_csv,
    summarize,
    summary_to_csv,
    trial_seed
)

__all__ = [
    "StateSpaceModel",
    "simulate",
    "add_noise",
    "state_space_from_poles",
    "motivational_data",
    "example_poles",
    "example_state_space",
    "reduced_poles",
    "reduced_state_space",
    "MonteCarloConfig",
    "SummaryRow",
    "TrialMethod",
    "TrialRecord",
    "montecarlo",
    "third_order_config",
    "reduced_config",
    "records_to_csv",
    "summarize",
    "summary_to_csv",
    "trial_seed"
]
