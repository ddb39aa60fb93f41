//! Time integration: semi-implicit and Euler–Maruyama steppers, Brownian
//! streams, trajectories and energy residuals.

mod brownian;
mod path;
mod stepper;

pub use brownian::{BrownianStream, CounterStream, Normals, StreamPurpose, Uniforms};
pub use path::{energy_residual, run_path, simulate_path, step_count, PathSpec, Trajectory, BLOW_UP_THRESHOLD};
pub use stepper::{step_deterministic, step_stochastic};
