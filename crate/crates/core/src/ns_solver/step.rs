//! One full time step of the coupled fluid–membrane system.

use std::fmt;

use super::krylov::{krylov_solve, KrylovOptions, SolveStats};
use super::momentum::{assemble_momentum_explicit, assemble_momentum_semi_implicit, MembraneInputs, MomentumInputs};
use super::poisson::{balance_outflow, correct, scalar_boundary, solve_poisson};
use super::state::{update_material_properties, FlowState, Phases, SchemeMode};
use super::sparse::SparseSystem;
use super::stencil::VelocityLayout;
use crate::elasticity::{compute_stress, deformation_state, elastic_force, DeformationState, EvanSkalak, SymTensorField};
use crate::error::{FsiError, Result};
use crate::grid::{divergence, fill_ghosts, BoundarySpec, CellField, FaceVectorField, GridSpec};
use crate::kinematics::{
    compute_normals, extrapolate_backward_map, fill_linear_ghosts, reinitialize, transport, BackwardMap, LevelSet,
    Normals,
};
use crate::scalar::Real;

/// Level-set maintenance schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maintenance<T> {
    /// Reinitialize every this many steps (0 disables).
    pub reinit_every: usize,
    pub reinit_steps: usize,
    /// Pseudo-time step as a fraction of the mesh size.
    pub reinit_dtau: T,
    pub extrapolation_steps: usize,
    pub extrapolation_dtau: T,
    /// Advective CFL number of the transport sub-steps.
    pub cfl: T,
}

impl<T: Real> Default for Maintenance<T> {
    fn default() -> Self {
        Self {
            reinit_every: 1,
            reinit_steps: 5,
            reinit_dtau: T::lit(0.3),
            extrapolation_steps: 10,
            extrapolation_dtau: T::lit(0.5),
            cfl: T::lit(0.5),
        }
    }
}

/// Everything a step needs besides the state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig<T> {
    pub mode: SchemeMode,
    pub dt: T,
    pub phases: Phases<T>,
    pub law: EvanSkalak<T>,
    /// `max |u|` above which the run is declared unstable.
    pub blow_up_speed: T,
    pub maintenance: Maintenance<T>,
    pub momentum_solver: KrylovOptions,
    pub poisson_solver: KrylovOptions,
}

/// Per-step diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub step: usize,
    pub t: f64,
    pub momentum: SolveStats,
    pub poisson: SolveStats,
    pub max_speed: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub div_max: f64,
    pub outflow_flux: f64,
    pub substeps: usize,
    pub degenerate_normals: usize,
    pub degenerate_cells: usize,
}

impl fmt::Display for StepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step={} t={:.17e} momentum_iters={} momentum_res={:.3e} poisson_iters={} poisson_res={:.3e} \
             max_u={:.17e} z_min={:.17e} z_max={:.17e} div_max={:.3e} outflow_flux={:.3e} substeps={} \
             degenerate_normals={} degenerate_cells={}",
            self.step,
            self.t,
            self.momentum.iterations,
            self.momentum.residual,
            self.poisson.iterations,
            self.poisson.residual,
            self.max_speed,
            self.z_min,
            self.z_max,
            self.div_max,
            self.outflow_flux,
            self.substeps,
            self.degenerate_normals,
            self.degenerate_cells
        )
    }
}

/// Fluid, interface and deformation state advanced together.
#[derive(Debug, Clone)]
pub struct Simulation<T> {
    pub grid: GridSpec<T>,
    pub vel_bc: BoundarySpec<T>,
    pub scalar_bc: BoundarySpec<T>,
    pub layout: VelocityLayout<T>,
    pub flow: FlowState<T>,
    pub ls: LevelSet<T>,
    pub ymap: BackwardMap<T>,
    pub config: StepConfig<T>,
    previous: Option<DeformationState<T>>,
}

/// Membrane-derived fields at the current time level.
pub struct MembraneSnapshot<T> {
    pub normals: Normals<T>,
    pub deformation: DeformationState<T>,
    pub sigma: SymTensorField<T>,
    pub force: FaceVectorField<T>,
}

impl<T: Real> Simulation<T> {
    pub fn new(
        grid: GridSpec<T>,
        vel_bc: BoundarySpec<T>,
        vel: FaceVectorField<T>,
        ls: LevelSet<T>,
        ymap: BackwardMap<T>,
        config: StepConfig<T>,
    ) -> Result<Self> {
        config.phases.validate()?;
        if !(config.dt > T::zero()) {
            return Err(FsiError::Config("time step must be positive".into()));
        }
        let layout = VelocityLayout::new(&grid, &vel_bc)?;
        let scalar_bc = scalar_boundary(&vel_bc);
        let mut flow = FlowState::new(&grid, vel, &vel_bc)?;
        let mut ls = ls;
        fill_ghosts(&mut ls.phi, &scalar_bc)?;
        let (rho, mu) = update_material_properties(&grid, &ls, &config.phases, &scalar_bc)?;
        flow.rho = rho;
        flow.mu = mu;
        fill_ghosts(&mut flow.p, &scalar_bc)?;
        Ok(Self { grid, vel_bc, scalar_bc, layout, flow, ls, ymap, config, previous: None })
    }

    /// Normals, deformation, stress and force at the current level.
    pub fn membrane_snapshot(&mut self) -> Result<MembraneSnapshot<T>> {
        fill_ghosts(&mut self.ls.phi, &self.scalar_bc)?;
        fill_linear_ghosts(&mut self.ymap.y1, [true; 4]);
        fill_linear_ghosts(&mut self.ymap.y2, [true; 4]);
        let normals = compute_normals(&self.grid, &self.ls);
        let deformation = deformation_state(&self.grid, &self.ymap, &normals, self.previous.as_ref());
        let sigma = compute_stress(&self.grid, &deformation.z, &normals, &self.config.law);
        let force = elastic_force(&self.grid, &sigma, &self.ls);
        Ok(MembraneSnapshot { normals, deformation, sigma, force })
    }

    fn assemble_prediction(
        &self,
        snap: &MembraneSnapshot<T>,
        rho: &CellField<T>,
        mu: &CellField<T>,
        mode: SchemeMode,
    ) -> SparseSystem<T> {
        let inputs = MomentumInputs {
            grid: &self.grid,
            layout: &self.layout,
            vel: &self.flow.vel,
            p: &self.flow.p,
            rho,
            mu,
            force: &snap.force,
            dt: self.config.dt,
        };
        match mode {
            SchemeMode::Explicit => assemble_momentum_explicit(&inputs),
            SchemeMode::SemiImplicit => {
                let membrane = MembraneInputs {
                    ls: &self.ls,
                    z: &snap.deformation.z,
                    normals: &snap.normals,
                    sigma: &snap.sigma,
                    law: &self.config.law,
                };
                assemble_momentum_semi_implicit(&inputs, &membrane)
            }
        }
    }

    /// Prediction-step system the next step would solve under `mode`,
    /// without advancing the state.
    pub fn prediction_system(&mut self, mode: SchemeMode) -> Result<SparseSystem<T>> {
        let (rho, mu) = update_material_properties(&self.grid, &self.ls, &self.config.phases, &self.scalar_bc)?;
        let snap = self.membrane_snapshot()?;
        Ok(self.assemble_prediction(&snap, &rho, &mu, mode))
    }

    /// Advances one step of size `config.dt`.
    pub fn step(&mut self) -> Result<StepReport> {
        let dt = self.config.dt;
        let step = self.flow.step_index + 1;
        let eps = self.ls.epsilon;

        let (rho, mu) = update_material_properties(&self.grid, &self.ls, &self.config.phases, &self.scalar_bc)?;
        self.flow.rho = rho;
        self.flow.mu = mu;

        let snap = self.membrane_snapshot()?;
        let in_band = |i: isize, j: isize| self.ls.phi.get(i, j).abs() < eps;
        let bad = snap.deformation.degenerate.iter().filter(|&&(i, j)| in_band(i, j)).count();
        if bad > 0 {
            return Err(FsiError::DegenerateBand { step, count: bad });
        }
        let (mut z_min, mut z_max) = (f64::INFINITY, f64::NEG_INFINITY);
        for (i, j) in snap.deformation.z.interior() {
            if in_band(i, j) {
                let z = snap.deformation.z.get(i, j).to_f64_lossy();
                z_min = z_min.min(z);
                z_max = z_max.max(z);
            }
        }
        if z_min > z_max {
            (z_min, z_max) = (1.0, 1.0);
        }

        let system = self.assemble_prediction(&snap, &self.flow.rho, &self.flow.mu, self.config.mode);
        let mut x = self.layout.gather(&self.flow.vel);
        let momentum = krylov_solve(&system.matrix, &system.rhs, &mut x, &self.config.momentum_solver)?;
        let mut u_star = self.flow.vel.clone();
        self.layout.scatter(&x, &mut u_star)?;
        self.check_speed(&u_star, step, dt)?;

        let outflow = balance_outflow(&self.grid, &mut u_star, &self.vel_bc)?;
        let (psi, poisson) =
            solve_poisson(&self.grid, &self.flow.rho, &u_star, dt, &self.vel_bc, &self.config.poisson_solver)?;
        correct(&self.grid, &mut u_star, &mut self.flow.p, &psi, &self.flow.rho, dt, &self.vel_bc)?;
        self.flow.vel = u_star;
        self.check_speed(&self.flow.vel, step, dt)?;
        let div_max = divergence(&self.grid, &self.flow.vel).max_abs().to_f64_lossy();

        let substeps = transport(
            &self.grid,
            &mut [&mut self.ls.phi, &mut self.ymap.y1, &mut self.ymap.y2],
            &self.scalar_bc,
            &self.flow.vel,
            dt,
            self.config.maintenance.cfl,
        )?;
        let m = self.config.maintenance;
        let h = self.grid.min_spacing();
        if m.reinit_every > 0 && step % m.reinit_every == 0 && m.reinit_steps > 0 {
            reinitialize(&self.grid, &mut self.ls, &self.scalar_bc, m.reinit_steps, m.reinit_dtau * h)?;
        }
        fill_ghosts(&mut self.ls.phi, &self.scalar_bc)?;
        let normals = compute_normals(&self.grid, &self.ls);
        if m.extrapolation_steps > 0 {
            extrapolate_backward_map(&self.grid, &mut self.ymap, &self.ls, &normals, m.extrapolation_steps, m.extrapolation_dtau * h);
        }

        let degenerate_cells = snap.deformation.degenerate.len();
        self.previous = Some(snap.deformation);
        self.flow.t += dt;
        self.flow.step_index = step;
        Ok(StepReport {
            step,
            t: self.flow.t.to_f64_lossy(),
            momentum,
            poisson,
            max_speed: self.flow.vel.max_abs().to_f64_lossy(),
            z_min,
            z_max,
            div_max,
            outflow_flux: outflow.to_f64_lossy(),
            substeps,
            degenerate_normals: snap.normals.degenerate,
            degenerate_cells,
        })
    }

    fn check_speed(&self, vel: &FaceVectorField<T>, step: usize, dt: T) -> Result<()> {
        let speed = vel.max_abs();
        if !vel.all_finite() || speed > self.config.blow_up_speed {
            return Err(FsiError::BlowUp {
                step,
                time: (self.flow.t + dt).to_f64_lossy(),
                max_speed: if speed.is_finite() { speed.to_f64_lossy() } else { f64::INFINITY },
            });
        }
        Ok(())
    }

    /// Area variation at the current level (diagnostic).
    pub fn area_variation(&mut self) -> Result<CellField<T>> {
        Ok(self.membrane_snapshot()?.deformation.z)
    }
}
