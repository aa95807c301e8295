//! Parameter sweeps of the 1D model and their CSV output.

use std::io::Write;

use super::analysis::{explicit_dt_bound, spectral_sweep, Model1DParams, Scheme1D, SweepRow};
use super::march::{classify_stability, Stability};
use crate::bench::fmt17;
use crate::error::{FsiError, Result};

/// Values used for each of `μ`, `K` and `ε` in [`bound_lattice`].
pub const LATTICE_VALUES: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];

/// Cells of the periodic domain used by the sweeps.
pub const SWEEP_CELLS: usize = 64;

/// `5³` tuples over `μ, K, ε ∈` [`LATTICE_VALUES`] with `Δx = 1/64`; the step
/// is a placeholder set by the caller.
pub fn bound_lattice() -> Vec<Model1DParams<f64>> {
    let dx = 1.0 / SWEEP_CELLS as f64;
    let mut out = Vec::with_capacity(125);
    for &mu in &LATTICE_VALUES {
        for &k in &LATTICE_VALUES {
            for &eps in &LATTICE_VALUES {
                out.push(Model1DParams { mu, k, eps, dx, dt: 1.0, n_cells: SWEEP_CELLS });
            }
        }
    }
    out
}

/// Default spectral sweep: the lattice at three steps `10⁻³, 10⁻¹, 10`.
pub fn default_sweep_params() -> Vec<Model1DParams<f64>> {
    bound_lattice().into_iter().flat_map(|p| [1e-3, 1e-1, 10.0].map(|dt| p.with_dt(dt))).collect()
}

/// Named sweep presets.
pub fn sweep_preset(name: &str) -> Result<Vec<Model1DParams<f64>>> {
    match name {
        "default" => Ok(default_sweep_params()),
        "lattice" => Ok(bound_lattice()),
        _ => Err(FsiError::Config(format!("unknown sweep `{name}` (expected default or lattice)"))),
    }
}

/// Writes `theta,dt,dx,mu,K,eps,rho_semi_implicit`.
pub fn write_sweep_csv(mut w: impl Write, rows: &[SweepRow<f64>]) -> Result<()> {
    writeln!(w, "theta,dt,dx,mu,K,eps,rho_semi_implicit")?;
    for r in rows {
        let p = &r.params;
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            fmt17(r.theta),
            fmt17(p.dt),
            fmt17(p.dx),
            fmt17(p.mu),
            fmt17(p.k),
            fmt17(p.eps),
            fmt17(r.rho_semi_implicit)
        )?;
    }
    Ok(())
}

/// Spectral radii of `params` over `n_theta` wavenumbers.
pub fn run_spectral_sweep(params: &[Model1DParams<f64>], n_theta: usize) -> Result<Vec<SweepRow<f64>>> {
    for p in params {
        p.validate()?;
    }
    Ok(spectral_sweep(params, n_theta))
}

/// Marching verdict for one tuple at `factor ×` the explicit bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub params: Model1DParams<f64>,
    pub factor: f64,
    pub bound: f64,
    pub stability: Stability,
}

/// Marches the explicit scheme at `factor ×` the bound for every tuple.
pub fn check_explicit_bound(lattice: &[Model1DParams<f64>], factor: f64, horizon: usize) -> Result<Vec<BoundCheck>> {
    lattice
        .iter()
        .map(|p| {
            let bound = explicit_dt_bound(p);
            let params = p.with_dt(factor * bound);
            let stability = classify_stability(&params, Scheme1D::Explicit, horizon)?;
            Ok(BoundCheck { params, factor, bound, stability })
        })
        .collect()
}

/// Writes `mu,K,eps,dx,dt,factor,bound,stability`.
pub fn write_bound_csv(mut w: impl Write, rows: &[BoundCheck]) -> Result<()> {
    writeln!(w, "mu,K,eps,dx,dt,factor,bound,stability")?;
    for r in rows {
        let p = &r.params;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            fmt17(p.mu),
            fmt17(p.k),
            fmt17(p.eps),
            fmt17(p.dx),
            fmt17(p.dt),
            fmt17(r.factor),
            fmt17(r.bound),
            r.stability.name()
        )?;
    }
    Ok(())
}
