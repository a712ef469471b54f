//! Closed-form predictions for the detectability transition and the
//! Monte-Carlo sweep that checks them.

mod sweep;
mod theory;

pub use sweep::{
    crossing_bracket, intermediate_width, linear_grid, run_sweep, run_sweep_detailed, run_trial,
    Crossing, DetailedSweep, SbmBase, SweepConfig, SweepRecord, TrialOutcome,
};
pub use theory::{
    eigvec_entry_limits, predicted_lambda_over_n, subcritical_lambda_over_n, theoretical_threshold,
    theory_point, TheoryPoint,
};
