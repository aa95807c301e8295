//! Verification oracles: manufactured solutions for the semi-implicit
//! operators and analytic flows for the elastic pipeline.

mod elastic;
mod jet;
mod ms;

pub use elastic::{
    discrete_stress_residual, dual_z_discrepancy, exact_membrane, halving_orders, oracle_grid, symbolic_stress_residual,
    symbolic_stress_residual_max, ExactMembrane, ShearWave, BAND, MEMBRANE,
};
pub use jet::{Jet1, Jet2};
pub use ms::{
    assemble_ms_system, convergence_orders, default_ms_solver, exact_m, exact_unknowns, exact_velocity, l2_error,
    manufactured_source, manufactured_source_fd, ms_operator_row, solve_ms, source_oracle_discrepancy,
    write_convergence_csv, MsResult, MsSystem, DEFAULT_MESHES, FD_STEP, MASS,
};
