//! Membrane in a simple shear flow.

use super::config::{CaseConfig, MomentumSolver};
use super::contour::{extract_contour, ContourPolyline};
use crate::elasticity::EvanSkalak;
use crate::error::Result;
use crate::grid::{BcKind, BoundarySpec, FaceVectorField, Field, GridSpec};
use crate::kinematics::{BackwardMap, LevelSet};
use crate::ns_solver::{KrylovMethod, KrylovOptions, Maintenance, Phases, Simulation, StepConfig, StepReport};
use crate::scalar::Real;

/// Velocity boundary conditions of the shear case: zero-gradient on the left
/// and right, walls sliding at `±γ̇ y_wall` at the bottom and top.
pub fn shear_boundaries<T: Real>(cfg: &CaseConfig) -> BoundarySpec<T> {
    BoundarySpec {
        left: BcKind::Neumann,
        right: BcKind::Neumann,
        bottom: BcKind::MovingWall(T::lit(cfg.gamma_dot * cfg.y_min)),
        top: BcKind::MovingWall(T::lit(cfg.gamma_dot * cfg.y_max)),
    }
}

/// Solver settings derived from a case.
pub fn step_config<T: Real>(cfg: &CaseConfig) -> StepConfig<T> {
    let mu1 = cfg.mu1();
    StepConfig {
        mode: cfg.scheme,
        dt: T::lit(cfg.dt),
        phases: Phases { rho1: T::lit(cfg.rho), rho2: T::lit(cfg.rho), mu1: T::lit(mu1), mu2: T::lit(mu1 * cfg.viscosity_ratio) },
        law: EvanSkalak { stiffness: T::lit(cfg.stiffness()) },
        blow_up_speed: T::lit(cfg.blow_up_factor * cfg.reference_speed()),
        maintenance: Maintenance {
            reinit_every: cfg.reinit_every,
            reinit_steps: cfg.reinit_steps,
            reinit_dtau: T::lit(cfg.reinit_dtau),
            extrapolation_steps: cfg.extrapolation_steps,
            extrapolation_dtau: T::lit(cfg.extrapolation_dtau),
            cfl: T::lit(cfg.cfl),
        },
        momentum_solver: KrylovOptions {
            method: match cfg.momentum_solver {
                MomentumSolver::Gmres => KrylovMethod::Gmres { restart: cfg.gmres_restart },
                MomentumSolver::BiCgStab => KrylovMethod::BiCgStab,
            },
            tol: cfg.momentum_tol,
            max_iter: cfg.momentum_max_iter,
        },
        poisson_solver: KrylovOptions::cg(cfg.poisson_tol, cfg.poisson_max_iter),
    }
}

/// Initial state: `u = (γ̇ y, 0)`, circular membrane of radius `a` centred at
/// the origin, identity backward map, zero pressure.
pub fn init_shear_case<T: Real>(cfg: &CaseConfig) -> Result<Simulation<T>> {
    cfg.validate()?;
    let grid = GridSpec::new(cfg.nx, cfg.ny, T::lit(cfg.x_min), T::lit(cfg.x_max), T::lit(cfg.y_min), T::lit(cfg.y_max))?;
    let gd = T::lit(cfg.gamma_dot);
    let vel = FaceVectorField::from_fn(&grid, |_, y| gd * y, |_, _| T::zero());
    let ls = LevelSet::circle(&grid, T::zero(), T::zero(), T::lit(cfg.radius));
    let ymap = BackwardMap::identity(&grid);
    Simulation::new(grid, shear_boundaries(cfg), vel, ls, ymap, step_config(cfg))
}

/// Outcome of a completed run.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub steps: usize,
    pub final_time: f64,
    pub diagnostics: Vec<StepReport>,
    /// `(t, enclosed area)` after every step, starting at `t = 0`.
    pub areas: Vec<(f64, f64)>,
    /// Scheduled contours `(t, contour)`, the initial one included.
    pub snapshots: Vec<(f64, ContourPolyline)>,
    pub initial_contour: ContourPolyline,
    pub final_contour: ContourPolyline,
    /// Tangential speed along the final contour, per vertex.
    pub final_tangential_speed: Vec<f64>,
    /// Final max |u| on the grid.
    pub final_max_speed: f64,
}

impl RunReport {
    /// Largest relative deviation of the enclosed area from its initial value.
    pub fn max_area_drift(&self) -> f64 {
        let a0 = self.areas[0].1;
        self.areas.iter().map(|&(_, a)| ((a - a0) / a0).abs()).fold(0.0, f64::max)
    }
}

/// Bilinear interpolation of one staggered component at `(x, y)`.
fn sample_component<T: Real>(grid: &GridSpec<T>, f: &Field<T>, x: f64, y: f64) -> f64 {
    let (dx, dy) = (grid.dx().to_f64_lossy(), grid.dy().to_f64_lossy());
    let (x0, y0) = f.position(grid, 0, 0);
    let (sx, sy) = ((x - x0.to_f64_lossy()) / dx, (y - y0.to_f64_lossy()) / dy);
    let (i, j) = (sx.floor() as isize, sy.floor() as isize);
    let (tx, ty) = (sx - i as f64, sy - j as f64);
    let g = |a: isize, b: isize| f.get(a, b).to_f64_lossy();
    (1.0 - ty) * ((1.0 - tx) * g(i, j) + tx * g(i + 1, j)) + ty * ((1.0 - tx) * g(i, j + 1) + tx * g(i + 1, j + 1))
}

/// Velocity tangential to a closed counterclockwise contour at each vertex.
pub fn tangential_speed<T: Real>(grid: &GridSpec<T>, vel: &FaceVectorField<T>, c: &ContourPolyline) -> Vec<f64> {
    let n = c.points.len();
    (0..n)
        .map(|k| {
            let (p, q) = (c.points[(k + n - 1) % n], c.points[(k + 1) % n]);
            let (tx, ty) = (q.0 - p.0, q.1 - p.1);
            let len = tx.hypot(ty).max(f64::MIN_POSITIVE);
            let (x, y) = c.points[k];
            let u = sample_component(grid, &vel.u, x, y);
            let v = sample_component(grid, &vel.v, x, y);
            (u * tx + v * ty) / len
        })
        .collect()
}

/// Runs a case to `t_final`, calling `observe` after every step.
pub fn run_with<T: Real>(cfg: &CaseConfig, mut observe: impl FnMut(&StepReport)) -> Result<RunReport> {
    let mut sim = init_shear_case::<T>(cfg)?;
    let initial = extract_contour(&sim.grid, &sim.ls.phi)?;
    let mut areas = vec![(0.0, initial.enclosed_area)];
    let mut snapshots = vec![(0.0, initial.clone())];
    let mut diagnostics = Vec::new();
    let n_steps = ((cfg.t_final / cfg.dt) - 1e-9).ceil().max(1.0) as usize;
    let mut next_snapshot = cfg.snapshot_every;
    let mut contour = initial.clone();
    for k in 0..n_steps {
        let t_now = sim.flow.t.to_f64_lossy();
        let dt = if k + 1 == n_steps { cfg.t_final - t_now } else { cfg.dt };
        sim.config.dt = T::lit(dt);
        let report = sim.step()?;
        observe(&report);
        diagnostics.push(report);
        contour = extract_contour(&sim.grid, &sim.ls.phi)?;
        let t = sim.flow.t.to_f64_lossy();
        areas.push((t, contour.enclosed_area));
        if cfg.snapshot_every > 0.0 && t + 1e-9 >= next_snapshot {
            snapshots.push((t, contour.clone()));
            while next_snapshot <= t + 1e-9 {
                next_snapshot += cfg.snapshot_every;
            }
        }
    }
    let final_tangential_speed = tangential_speed(&sim.grid, &sim.flow.vel, &contour);
    Ok(RunReport {
        steps: n_steps,
        final_time: sim.flow.t.to_f64_lossy(),
        diagnostics,
        areas,
        snapshots,
        initial_contour: initial,
        final_contour: contour,
        final_tangential_speed,
        final_max_speed: sim.flow.vel.max_abs().to_f64_lossy(),
    })
}

pub fn run<T: Real>(cfg: &CaseConfig) -> Result<RunReport> {
    run_with::<T>(cfg, |_| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::divergence;

    #[test]
    fn initial_state() {
        let mut cfg = CaseConfig::default();
        cfg.nx = 64;
        cfg.ny = 32;
        cfg.ca = 0.02;
        let mut sim = init_shear_case::<f64>(&cfg).unwrap();
        assert_eq!(divergence(&sim.grid, &sim.flow.vel).max_abs(), 0.0);
        assert!((sim.config.law.stiffness - 62.5).abs() < 1e-12);
        let z = sim.area_variation().unwrap();
        for (i, j) in z.interior() {
            if sim.ls.phi.get(i, j).abs() < sim.ls.epsilon {
                assert!((z.get(i, j) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_non_square_cells() {
        let mut cfg = CaseConfig::default();
        cfg.nx = 100;
        assert!(init_shear_case::<f64>(&cfg).is_err());
    }

    #[test]
    fn short_run_keeps_area() {
        let mut cfg = CaseConfig::default();
        cfg.nx = 64;
        cfg.ny = 32;
        cfg.t_final = 0.2;
        cfg.dt = 0.05;
        let r = run::<f64>(&cfg).unwrap();
        assert_eq!(r.steps, 4);
        assert!((r.final_time - 0.2).abs() < 1e-12);
        assert!(r.max_area_drift() < 0.02);
    }
}
