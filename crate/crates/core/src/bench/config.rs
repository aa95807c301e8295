//! Flat `key = value` case configuration.
//!
//! Lines are `key = value`; `#` starts a comment and `[section]` headers are
//! accepted for readability only. Keys are unique across sections.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::path::Path;

use crate::error::{FsiError, Result};
use crate::ns_solver::SchemeMode;

/// Krylov method for the momentum system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentumSolver {
    Gmres,
    BiCgStab,
}

impl fmt::Display for MomentumSolver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MomentumSolver::Gmres => "gmres",
            MomentumSolver::BiCgStab => "bicgstab",
        })
    }
}

impl FromStr for MomentumSolver {
    type Err = FsiError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gmres" => Ok(MomentumSolver::Gmres),
            "bicgstab" => Ok(MomentumSolver::BiCgStab),
            _ => Err(FsiError::Config(format!("unknown momentum solver `{s}` (expected gmres or bicgstab)"))),
        }
    }
}

/// Full description of one shear-flow experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseConfig {
    pub nx: usize,
    pub ny: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    /// Membrane radius `a`.
    pub radius: f64,
    /// Imposed shear rate of the initial flow and walls.
    pub gamma_dot: f64,
    /// Reynolds number `ρ a² γ̇ / μ₁`.
    pub re: f64,
    /// Capillary number `μ₁ a γ̇ / K`.
    pub ca: f64,
    /// `μ₂ / μ₁` (inside over outside).
    pub viscosity_ratio: f64,
    pub rho: f64,
    pub scheme: SchemeMode,
    pub dt: f64,
    pub t_final: f64,
    pub momentum_solver: MomentumSolver,
    pub gmres_restart: usize,
    pub momentum_tol: f64,
    pub momentum_max_iter: usize,
    pub poisson_tol: f64,
    pub poisson_max_iter: usize,
    pub reinit_every: usize,
    pub reinit_steps: usize,
    pub reinit_dtau: f64,
    pub extrapolation_steps: usize,
    pub extrapolation_dtau: f64,
    pub cfl: f64,
    /// Snapshot interval in time units (0 disables).
    pub snapshot_every: f64,
    /// Blow-up threshold as a multiple of the reference speed `a γ̇`.
    pub blow_up_factor: f64,
}

impl Default for CaseConfig {
    fn default() -> Self {
        Self {
            nx: 128,
            ny: 64,
            x_min: -4.0,
            x_max: 4.0,
            y_min: -2.0,
            y_max: 2.0,
            radius: 0.5,
            gamma_dot: 1.0,
            re: 0.1,
            ca: 0.01,
            viscosity_ratio: 1.0,
            rho: 1.0,
            scheme: SchemeMode::Explicit,
            dt: 3.0e-2,
            t_final: 1.5,
            momentum_solver: MomentumSolver::Gmres,
            gmres_restart: 30,
            momentum_tol: 1e-8,
            momentum_max_iter: 2000,
            poisson_tol: 1e-10,
            poisson_max_iter: 2000,
            reinit_every: 1,
            reinit_steps: 5,
            reinit_dtau: 0.3,
            extrapolation_steps: 10,
            extrapolation_dtau: 0.5,
            cfl: 0.5,
            snapshot_every: 0.1,
            blow_up_factor: 100.0,
        }
    }
}

/// `(section, key, description)` for every accepted key, in file order.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("grid", "nx", "cells along x"),
    ("grid", "ny", "cells along y"),
    ("grid", "x_min", "domain left edge"),
    ("grid", "x_max", "domain right edge"),
    ("grid", "y_min", "domain bottom edge (moving wall)"),
    ("grid", "y_max", "domain top edge (moving wall)"),
    ("physics", "radius", "membrane radius a"),
    ("physics", "gamma_dot", "shear rate; walls move at gamma_dot * y"),
    ("physics", "re", "Reynolds number rho a^2 gamma_dot / mu_1"),
    ("physics", "ca", "capillary number mu_1 a gamma_dot / K"),
    ("physics", "viscosity_ratio", "mu_2 / mu_1 (inside / outside)"),
    ("physics", "rho", "density of both phases"),
    ("scheme", "scheme", "Explicit or SemiImplicit"),
    ("scheme", "dt", "time step"),
    ("scheme", "t_final", "final time"),
    ("solver", "momentum_solver", "gmres or bicgstab"),
    ("solver", "gmres_restart", "GMRES restart length"),
    ("solver", "momentum_tol", "momentum Krylov relative tolerance"),
    ("solver", "momentum_max_iter", "momentum Krylov iteration cap"),
    ("solver", "poisson_tol", "CG relative tolerance"),
    ("solver", "poisson_max_iter", "CG iteration cap"),
    ("schedule", "reinit_every", "reinitialize every n steps (0 = never)"),
    ("schedule", "reinit_steps", "pseudo-steps per reinitialization"),
    ("schedule", "reinit_dtau", "reinitialization pseudo-step / dx"),
    ("schedule", "extrapolation_steps", "pseudo-steps of Y extrapolation per step"),
    ("schedule", "extrapolation_dtau", "extrapolation pseudo-step / dx"),
    ("schedule", "cfl", "advective CFL number of transport sub-steps"),
    ("output", "snapshot_every", "snapshot interval in time units (0 = none)"),
    ("output", "blow_up_factor", "blow-up threshold in units of a * gamma_dot"),
];

fn valid_keys() -> String {
    KEYS.iter().map(|k| k.1).collect::<Vec<_>>().join(", ")
}

fn parse_num<V: std::str::FromStr>(key: &str, v: &str) -> Result<V> {
    v.parse().map_err(|_| FsiError::Config(format!("invalid value `{v}` for `{key}`")))
}

impl CaseConfig {
    /// Sets one key; unknown keys are rejected with the list of valid keys.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        let key = key.trim();
        let key = key.rsplit_once('.').map_or(key, |(_, k)| k);
        match key {
            "nx" => self.nx = parse_num(key, v)?,
            "ny" => self.ny = parse_num(key, v)?,
            "x_min" => self.x_min = parse_num(key, v)?,
            "x_max" => self.x_max = parse_num(key, v)?,
            "y_min" => self.y_min = parse_num(key, v)?,
            "y_max" => self.y_max = parse_num(key, v)?,
            "radius" => self.radius = parse_num(key, v)?,
            "gamma_dot" => self.gamma_dot = parse_num(key, v)?,
            "re" => self.re = parse_num(key, v)?,
            "ca" => self.ca = parse_num(key, v)?,
            "viscosity_ratio" => self.viscosity_ratio = parse_num(key, v)?,
            "rho" => self.rho = parse_num(key, v)?,
            "scheme" => self.scheme = v.parse()?,
            "dt" => self.dt = parse_num(key, v)?,
            "t_final" => self.t_final = parse_num(key, v)?,
            "momentum_solver" => self.momentum_solver = v.parse()?,
            "gmres_restart" => self.gmres_restart = parse_num(key, v)?,
            "momentum_tol" => self.momentum_tol = parse_num(key, v)?,
            "momentum_max_iter" => self.momentum_max_iter = parse_num(key, v)?,
            "poisson_tol" => self.poisson_tol = parse_num(key, v)?,
            "poisson_max_iter" => self.poisson_max_iter = parse_num(key, v)?,
            "reinit_every" => self.reinit_every = parse_num(key, v)?,
            "reinit_steps" => self.reinit_steps = parse_num(key, v)?,
            "reinit_dtau" => self.reinit_dtau = parse_num(key, v)?,
            "extrapolation_steps" => self.extrapolation_steps = parse_num(key, v)?,
            "extrapolation_dtau" => self.extrapolation_dtau = parse_num(key, v)?,
            "cfl" => self.cfl = parse_num(key, v)?,
            "snapshot_every" => self.snapshot_every = parse_num(key, v)?,
            "blow_up_factor" => self.blow_up_factor = parse_num(key, v)?,
            _ => return Err(FsiError::Config(format!("unknown key `{key}`; valid keys: {}", valid_keys()))),
        }
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, kv: &str) -> Result<()> {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| FsiError::Config(format!("override `{kv}` is not of the form key=value")))?;
        self.set(k, v)
    }

    /// Parses configuration text on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() || (line.starts_with('[') && line.ends_with(']')) {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| FsiError::Config(format!("line {}: expected `key = value`, got `{line}`", n + 1)))?;
            cfg.set(k, v).map_err(|e| match e {
                FsiError::Config(m) => FsiError::Config(format!("line {}: {m}", n + 1)),
                other => other,
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    fn value(&self, key: &str) -> String {
        match key {
            "nx" => self.nx.to_string(),
            "ny" => self.ny.to_string(),
            "x_min" => fmt17(self.x_min),
            "x_max" => fmt17(self.x_max),
            "y_min" => fmt17(self.y_min),
            "y_max" => fmt17(self.y_max),
            "radius" => fmt17(self.radius),
            "gamma_dot" => fmt17(self.gamma_dot),
            "re" => fmt17(self.re),
            "ca" => fmt17(self.ca),
            "viscosity_ratio" => fmt17(self.viscosity_ratio),
            "rho" => fmt17(self.rho),
            "scheme" => self.scheme.to_string(),
            "dt" => fmt17(self.dt),
            "t_final" => fmt17(self.t_final),
            "momentum_solver" => self.momentum_solver.to_string(),
            "gmres_restart" => self.gmres_restart.to_string(),
            "momentum_tol" => fmt17(self.momentum_tol),
            "momentum_max_iter" => self.momentum_max_iter.to_string(),
            "poisson_tol" => fmt17(self.poisson_tol),
            "poisson_max_iter" => self.poisson_max_iter.to_string(),
            "reinit_every" => self.reinit_every.to_string(),
            "reinit_steps" => self.reinit_steps.to_string(),
            "reinit_dtau" => fmt17(self.reinit_dtau),
            "extrapolation_steps" => self.extrapolation_steps.to_string(),
            "extrapolation_dtau" => fmt17(self.extrapolation_dtau),
            "cfl" => fmt17(self.cfl),
            "snapshot_every" => fmt17(self.snapshot_every),
            "blow_up_factor" => fmt17(self.blow_up_factor),
            _ => unreachable!("key table and accessors are in sync"),
        }
    }

    /// Effective configuration in the file format; parses back to `self`.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let mut section = "";
        for &(sec, key, doc) in KEYS {
            if sec != section {
                if !section.is_empty() {
                    out.push('\n');
                }
                let _ = writeln!(out, "[{sec}]");
                section = sec;
            }
            let _ = writeln!(out, "{key} = {}  # {doc}", self.value(key));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(FsiError::Config(m.to_string()));
        if self.nx < 4 || self.ny < 4 {
            return bad("nx and ny must be at least 4");
        }
        if !(self.x_max > self.x_min && self.y_max > self.y_min) {
            return bad("domain bounds must satisfy max > min");
        }
        let (dx, dy) = ((self.x_max - self.x_min) / self.nx as f64, (self.y_max - self.y_min) / self.ny as f64);
        if (dx - dy).abs() > 1e-12 * dx.max(dy) {
            return bad("nx/ny must match the domain aspect ratio (square cells required)");
        }
        for (name, v) in [("radius", self.radius), ("re", self.re), ("ca", self.ca), ("viscosity_ratio", self.viscosity_ratio), ("rho", self.rho), ("dt", self.dt), ("t_final", self.t_final), ("cfl", self.cfl), ("blow_up_factor", self.blow_up_factor)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(FsiError::Config(format!("`{name}` must be positive, got {v}")));
            }
        }
        if self.gamma_dot < 0.0 || !self.gamma_dot.is_finite() {
            return bad("gamma_dot must be non-negative");
        }
        if self.gmres_restart == 0 {
            return bad("gmres_restart must be positive");
        }
        if !(self.momentum_tol > 0.0 && self.poisson_tol > 0.0) {
            return bad("solver tolerances must be positive");
        }
        if self.snapshot_every < 0.0 {
            return bad("snapshot_every must be non-negative");
        }
        Ok(())
    }

    /// Shear rate used to build the dimensional parameters; a quiescent case
    /// keeps the unit reference rate so that `μ` and `K` stay finite.
    pub fn reference_rate(&self) -> f64 {
        if self.gamma_dot > 0.0 {
            self.gamma_dot
        } else {
            1.0
        }
    }

    /// Reference speed `a γ̇`.
    pub fn reference_speed(&self) -> f64 {
        self.radius * self.reference_rate()
    }

    /// Outer viscosity `μ₁ = ρ a² γ̇ / Re`.
    pub fn mu1(&self) -> f64 {
        self.rho * self.radius * self.radius * self.reference_rate() / self.re
    }

    /// Membrane stiffness `K = μ₁ a γ̇ / Ca`.
    pub fn stiffness(&self) -> f64 {
        self.mu1() * self.radius * self.reference_rate() / self.ca
    }
}

/// Round-trip formatting with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_parameters() {
        let mut c = CaseConfig::default();
        c.ca = 0.02;
        assert!((c.mu1() - 2.5).abs() < 1e-14);
        assert!((c.stiffness() - 62.5).abs() < 1e-12);
        c.gamma_dot = 0.0;
        assert_eq!(c.reference_speed(), 0.5);
    }

    #[test]
    fn round_trip_and_overrides() {
        let mut c = CaseConfig::default();
        c.apply_override("scheme=SemiImplicit").unwrap();
        c.apply_override("dt=5.0e-3").unwrap();
        c.apply_override("grid.nx = 256").unwrap();
        c.apply_override("ny=128").unwrap();
        let back = CaseConfig::parse(&c.to_config_string()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_aspect() {
        match CaseConfig::default().set("dtt", "1") {
            Err(FsiError::Config(m)) => assert!(m.contains("valid keys") && m.contains("dt")),
            other => panic!("{other:?}"),
        }
        assert!(CaseConfig::parse("nx = 100\n").is_err());
        assert!(CaseConfig::parse("dt = -1\n").is_err());
        assert!(CaseConfig::parse("this is not a pair\n").is_err());
        let ok = CaseConfig::parse("[grid]\nnx = 256 # finer\nny = 128\n").unwrap();
        assert_eq!((ok.nx, ok.ny), (256, 128));
    }
}
