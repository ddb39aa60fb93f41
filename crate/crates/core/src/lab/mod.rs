//! Explicit absorbing radii, decay bounds, entry times, radius classes and
//! steady states, each paired with a measured counterpart.

mod classify;
mod constants;
mod entry;
mod report;
mod steady;

pub use classify::{radius_boundedness, RadiusClass};
pub use constants::{
    absorbing_radius, absorbing_radius_random, absorbing_radius_stochastic, decay_bound, derive_constants, smoothing_bound,
    DerivedConstants, RateChoice,
};
pub use entry::{entry_grid, pullback_entry_time, theoretical_entry_time, EntryRow, EntrySimulation, EntryTime};
pub use report::BoundReport;
pub use steady::{continuity_gap, steady_residual, steady_state, steady_state_with, STALL_LIMIT};
