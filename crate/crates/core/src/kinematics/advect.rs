use super::weno::weno5_flux_derivative;
use crate::grid::{fill_ghosts, velocity_at_cells, BoundarySpec, CellField, FaceVectorField, GridSpec};
use crate::scalar::Real;
use crate::Result;

/// Cell-centred advecting velocity, frozen over a transport step.
pub struct CellVelocity<T> {
    pub u: CellField<T>,
    pub v: CellField<T>,
}

impl<T: Real> CellVelocity<T> {
    pub fn from_faces(grid: &GridSpec<T>, vel: &FaceVectorField<T>) -> Self {
        let (u, v) = velocity_at_cells(grid, vel);
        Self { u, v }
    }

    pub fn max_speed(&self) -> T {
        self.u.max_abs().max(self.v.max_abs())
    }
}

/// `-(u ∂x q + v ∂y q)` with WENO5 upwinding.
fn rhs<T: Real>(grid: &GridSpec<T>, bc: &BoundarySpec<T>, q: &CellField<T>, vel: &CellVelocity<T>) -> CellField<T> {
    let mut r = weno5_flux_derivative(grid, bc, q, &vel.u, 0);
    let ry = weno5_flux_derivative(grid, bc, q, &vel.v, 1);
    r.map_interior(|i, j, a| -(a + ry.get(i, j)));
    r
}

/// One SSP-RK3 step of `q_t + u·∇q = 0`. A zero velocity leaves `q`
/// bit-identical.
pub fn advect_rk3<T: Real>(
    grid: &GridSpec<T>,
    q: &mut CellField<T>,
    bc: &BoundarySpec<T>,
    vel: &CellVelocity<T>,
    dt: T,
) -> Result<()> {
    fill_ghosts(q, bc)?;
    let q0 = q.clone();
    let k1 = rhs(grid, bc, &q0, vel);

    let mut stage = q0.clone();
    stage.map_interior(|i, j, v| v + dt * k1.get(i, j));
    fill_ghosts(&mut stage, bc)?;
    let k2 = rhs(grid, bc, &stage, vel);

    let quarter = T::lit(0.25);
    stage.map_interior(|i, j, _| q0.get(i, j) + quarter * dt * (k1.get(i, j) + k2.get(i, j)));
    fill_ghosts(&mut stage, bc)?;
    let k3 = rhs(grid, bc, &stage, vel);

    let sixth = T::one() / T::lit(6.0);
    let two_thirds = T::lit(2.0) / T::lit(3.0);
    q.map_interior(|i, j, v| {
        v + dt * (sixth * k1.get(i, j) + sixth * k2.get(i, j) + two_thirds * k3.get(i, j))
    });
    fill_ghosts(q, bc)
}

/// Number of equal sub-steps keeping the advective CFL number at most `cfl`.
pub fn substep_count<T: Real>(grid: &GridSpec<T>, max_speed: T, dt: T, cfl: T) -> usize {
    let courant = max_speed * dt / (cfl * grid.min_spacing());
    courant.ceil().to_usize().unwrap_or(1).max(1)
}

/// Transports every field in `fields` over `dt` with the same velocity,
/// sub-stepping to respect the CFL limit. Returns the number of sub-steps.
pub fn transport<T: Real>(
    grid: &GridSpec<T>,
    fields: &mut [&mut CellField<T>],
    bc: &BoundarySpec<T>,
    vel: &FaceVectorField<T>,
    dt: T,
    cfl: T,
) -> Result<usize> {
    let cv = CellVelocity::from_faces(grid, vel);
    let n = substep_count(grid, cv.max_speed(), dt, cfl);
    let h = dt / T::from_usize_lossy(n);
    for _ in 0..n {
        for f in fields.iter_mut() {
            advect_rk3(grid, f, bc, &cv, h)?;
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Field, Staggering};

    #[test]
    fn zero_velocity_is_identity() {
        let g = GridSpec::<f64>::unit_square(16).unwrap();
        let bc = BoundarySpec::neumann();
        let mut q = Field::from_fn(&g, Staggering::Cell, |x, y| (3.0 * x).sin() * y.exp());
        fill_ghosts(&mut q, &bc).unwrap();
        let before = q.clone();
        let vel = FaceVectorField::zeros(&g);
        transport(&g, &mut [&mut q], &bc, &vel, 0.1, 0.5).unwrap();
        assert_eq!(q, before);
    }

    #[test]
    fn uniform_translation_of_linear_profile() {
        let g = GridSpec::<f64>::unit_square(32).unwrap();
        let bc = BoundarySpec::neumann();
        let mut q = Field::from_fn(&g, Staggering::Cell, |x, _| x);
        let vel = FaceVectorField::from_fn(&g, |_, _| 0.5, |_, _| 0.0);
        let cv = CellVelocity::from_faces(&g, &vel);
        advect_rk3(&g, &mut q, &bc, &cv, 0.01).unwrap();
        // three stages widen the reach of the boundary kink to nine cells
        for j in 0..32 {
            for i in 10..22 {
                let (x, _) = g.cell_center(i, j);
                assert!((q.get(i, j) - (x - 0.005)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn substeps_respect_cfl() {
        let g = GridSpec::<f64>::unit_square(10).unwrap();
        assert_eq!(substep_count(&g, 2.0, 0.1, 0.5), 4);
        assert_eq!(substep_count(&g, 2.0, 0.15, 0.5), 6);
        assert_eq!(substep_count(&g, 0.0, 0.1, 0.5), 1);
    }
}
