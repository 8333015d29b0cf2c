//! Conservative finite-difference schemes for the inviscid Burgers equation
//! and tools for studying their large-time behaviour: discrete invariants,
//! N-wave and diffusive-wave profiles, the exact entropy solution for
//! piecewise-constant data, and a similarity-variable formulation.

pub mod error;
pub mod evolve;
pub mod flux;
pub mod grid;
pub mod invariants;
pub mod profiles;
pub mod similarity;

pub use error::{Error, Result, Side};
pub use evolve::{run, run_with, step, RunOutput, SimulationConfig, SimulationState};
pub use flux::{FluxFn, NumericalFlux, Rule};
pub use grid::{project_cell_averages, Grid1D, GridFunction, Piece, PiecewiseFn, Snapshot};
pub use invariants::InvariantRecord;
