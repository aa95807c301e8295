//! Incompressible Navier–Stokes projection solver with explicit and
//! semi-implicit membrane coupling.

pub mod krylov;
pub mod momentum;
pub mod poisson;
pub mod sparse;
mod state;
pub mod stencil;
mod step;

pub use krylov::{krylov_solve, tolerance_floor, KrylovMethod, KrylovOptions, SolveStats};
pub use momentum::{assemble_momentum_explicit, assemble_momentum_semi_implicit, MembraneInputs, MomentumInputs};
pub use poisson::{assemble_poisson, balance_outflow, correct, scalar_boundary, solve_poisson};
pub use sparse::{CsrMatrix, RowAccumulator, SparseSystem};
pub use state::{update_material_properties, FlowState, Phases, SchemeMode};
pub use stencil::{div_term_stencil, DivTerm, StencilContext, VelocityLayout};
pub use step::{Maintenance, MembraneSnapshot, Simulation, StepConfig, StepReport};
