//! Pressure-increment Poisson problem and velocity projection.

use super::krylov::{krylov_solve, KrylovOptions, SolveStats};
use super::sparse::CsrMatrix;
use crate::error::{FsiError, Result};
use crate::grid::{divergence, fill_ghosts, fill_velocity_ghosts, BcKind, BoundarySpec, CellField, FaceVectorField, GridSpec};
use crate::scalar::Real;

/// Scalar (pressure, level-set, material) boundary conditions matching a
/// velocity specification: periodic where the flow is periodic, zero-gradient
/// elsewhere.
pub fn scalar_boundary<T: Real>(vel_bc: &BoundarySpec<T>) -> BoundarySpec<T> {
    let map = |k: BcKind<T>| if matches!(k, BcKind::Periodic) { BcKind::Periodic } else { BcKind::Neumann };
    BoundarySpec { left: map(vel_bc.left), right: map(vel_bc.right), bottom: map(vel_bc.bottom), top: map(vel_bc.top) }
}

#[inline]
fn cell_index(grid: &GridSpec<impl Real>, i: isize, j: isize) -> usize {
    (i + j * grid.nx as isize) as usize
}

/// Negated operator `−div((Δt/ρ)∇·)` on cells (x fastest). Faces on
/// non-periodic sides carry no flux. The matrix is symmetric positive
/// semi-definite; constants span its kernel.
pub fn assemble_poisson<T: Real>(grid: &GridSpec<T>, rho: &CellField<T>, dt: T, vel_bc: &BoundarySpec<T>) -> CsrMatrix<T> {
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let (px, py) = (matches!(vel_bc.left, BcKind::Periodic), matches!(vel_bc.bottom, BcKind::Periodic));
    let (ix2, iy2) = (T::one() / (grid.dx() * grid.dx()), T::one() / (grid.dy() * grid.dy()));
    let half = T::lit(0.5);
    let mut rows = Vec::with_capacity((nx * ny) as usize);
    for j in 0..ny {
        for i in 0..nx {
            let mut diag = T::zero();
            let mut row = Vec::with_capacity(5);
            let neighbours = [(-1isize, 0isize, px, ix2), (1, 0, px, ix2), (0, -1, py, iy2), (0, 1, py, iy2)];
            for (di, dj, periodic, inv_h2) in neighbours {
                let (ni, nj) = (i + di, j + dj);
                let outside = ni < 0 || ni >= nx || nj < 0 || nj >= ny;
                if outside && !periodic {
                    continue;
                }
                let rho_f = half * (rho.get(i, j) + rho.get(ni, nj));
                let w = dt / rho_f * inv_h2;
                diag += w;
                row.push((cell_index(grid, ni.rem_euclid(nx), nj.rem_euclid(ny)), -w));
            }
            row.insert(0, (cell_index(grid, i, j), diag));
            rows.push(row);
        }
    }
    CsrMatrix::from_rows(rows)
}

/// Removes the net boundary flux of `vel` by shifting the outward normal
/// velocity uniformly on zero-gradient (outflow) sides, so that the Neumann
/// pressure problem is compatible. Returns the net flux before balancing.
pub fn balance_outflow<T: Real>(grid: &GridSpec<T>, vel: &mut FaceVectorField<T>, vel_bc: &BoundarySpec<T>) -> Result<T> {
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let (dx, dy) = (grid.dx(), grid.dy());
    let open = |k: BcKind<T>| matches!(k, BcKind::Neumann);
    let mut flux = T::zero();
    let mut area = T::zero();
    if !matches!(vel_bc.left, BcKind::Periodic) {
        for j in 0..ny {
            flux += (vel.u.get(nx, j) - vel.u.get(0, j)) * dy;
        }
    }
    if !matches!(vel_bc.bottom, BcKind::Periodic) {
        for i in 0..nx {
            flux += (vel.v.get(i, ny) - vel.v.get(i, 0)) * dx;
        }
    }
    for (kind, len) in [(vel_bc.left, grid.y_max - grid.y_min), (vel_bc.right, grid.y_max - grid.y_min)] {
        if open(kind) {
            area += len;
        }
    }
    for (kind, len) in [(vel_bc.bottom, grid.x_max - grid.x_min), (vel_bc.top, grid.x_max - grid.x_min)] {
        if open(kind) {
            area += len;
        }
    }
    if area == T::zero() || flux == T::zero() {
        return Ok(flux);
    }
    let c = flux / area;
    for j in 0..ny {
        if open(vel_bc.left) {
            *vel.u.get_mut(0, j) += c;
        }
        if open(vel_bc.right) {
            *vel.u.get_mut(nx, j) -= c;
        }
    }
    for i in 0..nx {
        if open(vel_bc.bottom) {
            *vel.v.get_mut(i, 0) += c;
        }
        if open(vel_bc.top) {
            *vel.v.get_mut(i, ny) -= c;
        }
    }
    fill_velocity_ghosts(vel, vel_bc)?;
    Ok(flux)
}

/// Solves `div((Δt/ρ)∇ψ) = div(u⋆)` with zero-flux walls. The right-hand side
/// is projected to zero mean and the returned `ψ` has zero mean, with ghosts
/// filled.
pub fn solve_poisson<T: Real>(
    grid: &GridSpec<T>,
    rho: &CellField<T>,
    u_star: &FaceVectorField<T>,
    dt: T,
    vel_bc: &BoundarySpec<T>,
    opts: &KrylovOptions,
) -> Result<(CellField<T>, SolveStats)> {
    let a = assemble_poisson(grid, rho, dt, vel_bc);
    let div = divergence(grid, u_star);
    let mut b: Vec<T> = div.interior_values().into_iter().map(|v| -v).collect();
    let n = T::from_usize_lossy(b.len());
    let mean = b.iter().fold(T::zero(), |s, &v| s + v) / n;
    b.iter_mut().for_each(|v| *v -= mean);
    let mut x = vec![T::zero(); b.len()];
    let stats = krylov_solve(&a, &b, &mut x, opts)?;
    let xm = x.iter().fold(T::zero(), |s, &v| s + v) / n;
    let mut psi = CellField::cell(grid);
    for (k, (i, j)) in div.interior().enumerate() {
        psi.set(i, j, x[k] - xm);
    }
    fill_ghosts(&mut psi, &scalar_boundary(vel_bc))?;
    if !psi.all_finite() {
        return Err(FsiError::NonConvergence { iterations: stats.iterations, residual: f64::NAN });
    }
    Ok((psi, stats))
}

/// Projection `u ← u⋆ − (Δt/ρ)∇ψ`, `p ← p + ψ`. `psi` and `rho` need ghosts;
/// fixed boundary samples and ghosts of `vel` are refreshed.
pub fn correct<T: Real>(
    grid: &GridSpec<T>,
    vel: &mut FaceVectorField<T>,
    p: &mut CellField<T>,
    psi: &CellField<T>,
    rho: &CellField<T>,
    dt: T,
    vel_bc: &BoundarySpec<T>,
) -> Result<()> {
    let half = T::lit(0.5);
    let (dx, dy) = (grid.dx(), grid.dy());
    vel.u.map_interior(|i, j, u| {
        let g = (psi.get(i, j) - psi.get(i - 1, j)) / dx;
        u - dt / (half * (rho.get(i, j) + rho.get(i - 1, j))) * g
    });
    vel.v.map_interior(|i, j, v| {
        let g = (psi.get(i, j) - psi.get(i, j - 1)) / dy;
        v - dt / (half * (rho.get(i, j) + rho.get(i, j - 1))) * g
    });
    fill_velocity_ghosts(vel, vel_bc)?;
    p.map_interior(|i, j, v| v + psi.get(i, j));
    fill_ghosts(p, &scalar_boundary(vel_bc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Staggering;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ones(g: &GridSpec<f64>) -> CellField<f64> {
        CellField::constant(g, Staggering::Cell, 1.0)
    }

    fn wall_bc() -> BoundarySpec<f64> {
        BoundarySpec { left: BcKind::Neumann, right: BcKind::Neumann, bottom: BcKind::MovingWall(-2.0), top: BcKind::MovingWall(2.0) }
    }

    #[test]
    fn divergence_free_input_gives_zero_increment() {
        let g = GridSpec::new(16, 8, -4.0, 4.0, -2.0, 2.0).unwrap();
        let bc = wall_bc();
        let mut vel = FaceVectorField::from_fn(&g, |_, y| y, |_, _| 0.0);
        fill_velocity_ghosts(&mut vel, &bc).unwrap();
        let (psi, _) = solve_poisson(&g, &ones(&g), &vel, 0.1, &bc, &KrylovOptions::cg(1e-10, 2000)).unwrap();
        assert!(psi.max_abs() == 0.0);
    }

    #[test]
    fn operator_is_symmetric() {
        let g = GridSpec::new(12, 10, 0.0, 1.2, 0.0, 1.0).unwrap();
        let rho = CellField::from_fn(&g, Staggering::Cell, |x, y| 1.0 + x * y);
        let a = assemble_poisson(&g, &rho, 0.3, &BoundarySpec::neumann());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x: Vec<f64> = (0..a.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..a.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let dot = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(a, b)| a * b).sum::<f64>();
        assert!((dot(&a.mul(&x), &y) - dot(&x, &a.mul(&y))).abs() < 1e-12 * dot(&x, &x).sqrt() * 1e3);
        for r in 0..a.dim() {
            assert!(a.row(r).map(|(_, v)| v).sum::<f64>().abs() < 1e-9);
        }
    }

    #[test]
    fn manufactured_cosine_is_second_order() {
        let err = |n: usize| {
            let g = GridSpec::new(n, n, 0.0, 1.0, 0.0, 1.0).unwrap();
            let bc = BoundarySpec::neumann();
            let dt = 1.0;
            let pi = std::f64::consts::PI;
            // u⋆ = ∇cos(πx) so that ψ = cos(πx) solves the problem exactly
            let mut vel = FaceVectorField::from_fn(&g, |x, _| -pi * (pi * x).sin(), |_, _| 0.0);
            fill_velocity_ghosts(&mut vel, &bc).unwrap();
            let (psi, _) = solve_poisson(&g, &ones(&g), &vel, dt, &bc, &KrylovOptions::cg(1e-12, 5000)).unwrap();
            let mut e: f64 = 0.0;
            for (i, j) in psi.interior() {
                let (x, _) = g.cell_center(i, j);
                e = e.max((psi.get(i, j) - (pi * x).cos()).abs());
            }
            e
        };
        let (a, b) = (err(16), err(32));
        assert!(b < 1e-2 && (a / b).log2() > 1.8, "{a} {b}");
    }

    #[test]
    fn projection_removes_divergence() {
        let g = GridSpec::new(32, 16, -4.0, 4.0, -2.0, 2.0).unwrap();
        let bc = wall_bc();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut vel = FaceVectorField::from_fn(&g, |_, y| y, |_, _| 0.0);
        vel.u.map_interior(|_, _, u| u + rng.gen_range(-0.5..0.5));
        vel.v.map_interior(|_, _, v| v + rng.gen_range(-0.5..0.5));
        fill_velocity_ghosts(&mut vel, &bc).unwrap();
        balance_outflow(&g, &mut vel, &bc).unwrap();
        let rho = CellField::from_fn(&g, Staggering::Cell, |x, y| if x * x + y * y < 1.0 { 3.0 } else { 1.0 });
        let mut p = CellField::cell(&g);
        let tol = 1e-10;
        let (psi, _) = solve_poisson(&g, &rho, &vel, 0.05, &bc, &KrylovOptions::cg(tol, 2000)).unwrap();
        correct(&g, &mut vel, &mut p, &psi, &rho, 0.05, &bc).unwrap();
        let div = divergence(&g, &vel);
        assert!(div.max_abs() <= 10.0 * tol / g.min_spacing(), "{}", div.max_abs());
        assert_eq!(p, psi);
    }

    #[test]
    fn uniform_increment_leaves_velocity() {
        let g = GridSpec::<f64>::new(8, 8, 0.0, 1.0, 0.0, 1.0).unwrap();
        let bc = BoundarySpec::periodic();
        let mut vel = FaceVectorField::from_fn(&g, |x, _| x.sin(), |_, y| y.cos());
        fill_velocity_ghosts(&mut vel, &bc).unwrap();
        let before = vel.clone();
        let psi = CellField::constant(&g, Staggering::Cell, 2.0);
        let mut p = CellField::cell(&g);
        correct(&g, &mut vel, &mut p, &psi, &ones(&g), 0.1, &bc).unwrap();
        assert_eq!(vel, before);
        assert_eq!(p.get(3, 3), 2.0);
    }

    #[test]
    fn outflow_balance_closes_the_flux() {
        let g = GridSpec::new(16, 8, -4.0, 4.0, -2.0, 2.0).unwrap();
        let bc = wall_bc();
        let mut vel = FaceVectorField::from_fn(&g, |x, _| 0.1 * x, |_, _| 0.0);
        fill_velocity_ghosts(&mut vel, &bc).unwrap();
        let q = balance_outflow(&g, &mut vel, &bc).unwrap();
        assert!((q - 0.1 * 8.0 * 4.0).abs() < 1e-12);
        let total: f64 = divergence(&g, &vel).interior_values().iter().sum();
        assert!(total.abs() < 1e-10);
    }
}
