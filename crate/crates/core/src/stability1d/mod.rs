//! Linearized 1D coupled model: Von Neumann amplification of the explicit,
//! implicit and semi-implicit couplings and empirical stability by marching.

mod analysis;
mod march;
mod sweep;

pub use analysis::{
    amplification, amplification_for, explicit_dt_bound, explicit_dt_threshold, mode_theta, quadratic_roots,
    spectral_radius_for, spectral_radius_semi_implicit, spectral_sweep, AmplificationPair, Model1DParams, Scheme1D,
    SweepRow,
};
pub use march::{
    classify_stability, cyclic_thomas, marched_amplification, mode_amplitudes, step_1d, Stability, State1D, Stepper1D,
    AMPLITUDE_LIMIT, ENERGY_LIMIT, MIN_HORIZON,
};
pub use sweep::{
    bound_lattice, check_explicit_bound, default_sweep_params, run_spectral_sweep, sweep_preset, write_bound_csv,
    write_sweep_csv, BoundCheck, LATTICE_VALUES, SWEEP_CELLS,
};
