use std::fmt;
use std::str::FromStr;

use crate::error::{FsiError, Result};
use crate::grid::{fill_ghosts, fill_velocity_ghosts, BoundarySpec, CellField, FaceVectorField, GridSpec};
use crate::kinematics::{smooth_heaviside, LevelSet};
use crate::scalar::Real;

/// Coupling of the membrane force to the momentum equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeMode {
    Explicit,
    SemiImplicit,
}

impl fmt::Display for SchemeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeMode::Explicit => "Explicit",
            SchemeMode::SemiImplicit => "SemiImplicit",
        })
    }
}

impl FromStr for SchemeMode {
    type Err = FsiError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "explicit" | "ex" => Ok(SchemeMode::Explicit),
            "semiimplicit" | "si" => Ok(SchemeMode::SemiImplicit),
            _ => Err(FsiError::Config(format!("unknown scheme `{s}` (expected Explicit or SemiImplicit)"))),
        }
    }
}

/// Density and viscosity outside (1) and inside (2) the membrane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phases<T> {
    pub rho1: T,
    pub rho2: T,
    pub mu1: T,
    pub mu2: T,
}

impl<T: Real> Phases<T> {
    pub fn validate(&self) -> Result<()> {
        if [self.rho1, self.rho2, self.mu1, self.mu2].iter().all(|&v| v > T::zero() && v.is_finite()) {
            Ok(())
        } else {
            Err(FsiError::Config("phase densities and viscosities must be positive".into()))
        }
    }
}

/// `ρ = H(φ/ε)ρ₁ + (1 − H(φ/ε))ρ₂` and likewise `μ`, ghosts filled with `bc`.
pub fn update_material_properties<T: Real>(
    grid: &GridSpec<T>,
    ls: &LevelSet<T>,
    phases: &Phases<T>,
    bc: &BoundarySpec<T>,
) -> Result<(CellField<T>, CellField<T>)> {
    let mut rho = CellField::cell(grid);
    let mut mu = CellField::cell(grid);
    for (i, j) in ls.phi.interior() {
        let h = smooth_heaviside(ls.phi.get(i, j) / ls.epsilon);
        let blend = |a: T, b: T| if h == T::one() { a } else if h == T::zero() { b } else { h * a + (T::one() - h) * b };
        rho.set(i, j, blend(phases.rho1, phases.rho2));
        mu.set(i, j, blend(phases.mu1, phases.mu2));
    }
    fill_ghosts(&mut rho, bc)?;
    fill_ghosts(&mut mu, bc)?;
    Ok((rho, mu))
}

/// Fluid unknowns at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState<T> {
    pub vel: FaceVectorField<T>,
    pub p: CellField<T>,
    pub rho: CellField<T>,
    pub mu: CellField<T>,
    pub t: T,
    pub step_index: usize,
}

impl<T: Real> FlowState<T> {
    /// State at `t = 0` with zero pressure and unit material fields.
    pub fn new(grid: &GridSpec<T>, mut vel: FaceVectorField<T>, vel_bc: &BoundarySpec<T>) -> Result<Self> {
        fill_velocity_ghosts(&mut vel, vel_bc)?;
        let one = CellField::constant(grid, crate::grid::Staggering::Cell, T::one());
        Ok(Self { vel, p: CellField::cell(grid), rho: one.clone(), mu: one, t: T::zero(), step_index: 0 })
    }
}
