use super::ghosts::fill_linear_ghosts;
use super::weno::{one_sided, EdgeGuard};
use crate::grid::{fill_ghosts, BcKind, BoundarySpec, CellField, GridSpec};
use crate::scalar::Real;
use crate::Result;

/// Level-set function with its fixed interface half-width.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSet<T> {
    pub phi: CellField<T>,
    pub epsilon: T,
}

impl<T: Real> LevelSet<T> {
    /// Samples `phi(x, y)` everywhere (ghosts included) with `ε = 2 dx`.
    pub fn from_fn(grid: &GridSpec<T>, phi: impl Fn(T, T) -> T) -> Self {
        let phi = CellField::from_fn(grid, crate::grid::Staggering::Cell, phi);
        Self { phi, epsilon: T::lit(2.0) * grid.dx() }
    }

    /// Signed distance to a circle, negative inside.
    pub fn circle(grid: &GridSpec<T>, cx: T, cy: T, radius: T) -> Self {
        Self::from_fn(grid, |x, y| ((x - cx).powi(2) + (y - cy).powi(2)).sqrt() - radius)
    }
}

/// Godunov upwind gradient magnitude for a front moving with sign `s`.
#[inline]
fn godunov_norm<T: Real>(s: T, (ax, bx): (T, T), (ay, by): (T, T)) -> T {
    let z = T::zero();
    let axis = |a: T, b: T| {
        if s >= z {
            a.max(z).powi(2).max(b.min(z).powi(2))
        } else {
            a.min(z).powi(2).max(b.max(z).powi(2))
        }
    };
    (axis(ax, bx) + axis(ay, by)).sqrt()
}

/// Whether cell `(i, j)` has a neighbour across the zero level of `phi0`.
#[inline]
fn touches_interface<T: Real>(phi0: &CellField<T>, i: isize, j: isize) -> bool {
    let p = phi0.get(i, j);
    [(1, 0), (-1, 0), (0, 1), (0, -1)].iter().any(|&(di, dj)| p * phi0.get(i + di, j + dj) < T::zero())
}

/// Sub-cell distance estimate `φ0 / |∇φ0|` at a cell touching the interface.
fn subcell_distance<T: Real>(grid: &GridSpec<T>, phi0: &CellField<T>, i: isize, j: isize) -> T {
    let (dx, dy) = (grid.dx(), grid.dy());
    let p = phi0.get(i, j);
    let (e, w, n, s) = (phi0.get(i + 1, j), phi0.get(i - 1, j), phi0.get(i, j + 1), phi0.get(i, j - 1));
    let half = T::lit(0.5);
    let central = ((half * (e - w) / dx).powi(2) + (half * (n - s) / dy).powi(2)).sqrt();
    let grad = central
        .max((e - p).abs() / dx)
        .max((p - w).abs() / dx)
        .max((n - p).abs() / dy)
        .max((p - s).abs() / dy)
        .max(T::lit(1e-12));
    p / grad
}

/// Periodic sides wrap; every other side is extended linearly, which keeps
/// distance functions exact up to the boundary.
fn fill_phi_ghosts<T: Real>(phi: &mut CellField<T>, bc: &BoundarySpec<T>) -> Result<()> {
    fill_ghosts(phi, bc)?;
    let open = |k: BcKind<T>| !matches!(k, BcKind::Periodic);
    fill_linear_ghosts(phi, [open(bc.left), open(bc.right), open(bc.bottom), open(bc.top)]);
    Ok(())
}

/// Relaxes `ls.phi` toward a signed-distance function by marching
/// `φ_τ + S(φ0)(|∇φ| − 1) = 0` for `n_steps` pseudo-steps of size `dtau`.
/// Cells adjacent to the zero level use a sub-cell fix that keeps the
/// interface in place.
pub fn reinitialize<T: Real>(
    grid: &GridSpec<T>,
    ls: &mut LevelSet<T>,
    bc: &BoundarySpec<T>,
    n_steps: usize,
    dtau: T,
) -> Result<()> {
    fill_phi_ghosts(&mut ls.phi, bc)?;
    let phi0 = ls.phi.clone();
    let (dx, dy) = (grid.dx(), grid.dy());
    let h = grid.min_spacing();
    let guard = EdgeGuard::new(grid, bc);

    let mut near = Vec::new();
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            if touches_interface(&phi0, i, j) {
                near.push((i, j, subcell_distance(grid, &phi0, i, j)));
            }
        }
    }

    for _ in 0..n_steps {
        let cur = ls.phi.clone();
        ls.phi.map_interior(|i, j, p| {
            let p0 = phi0.get(i, j);
            let s = p0 / (p0 * p0 + h * h).sqrt();
            let gx = one_sided(&cur, i, j, 0, dx, &guard);
            let gy = one_sided(&cur, i, j, 1, dy, &guard);
            p - dtau * s * (godunov_norm(s, gx, gy) - T::one())
        });
        for &(i, j, d) in &near {
            let p0 = phi0.get(i, j);
            let sign = if p0 > T::zero() { T::one() } else { -T::one() };
            let p = cur.get(i, j);
            ls.phi.set(i, j, p - dtau / h * (sign * p.abs() - d));
        }
        fill_phi_ghosts(&mut ls.phi, bc)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_distance_plane_is_fixed() {
        let g = GridSpec::<f64>::new(32, 32, -1.0, 1.0, -1.0, 1.0).unwrap();
        let mut ls = LevelSet::from_fn(&g, |x, y| (3.0 * x + 4.0 * y) / 5.0);
        let bc = BoundarySpec::neumann();
        let before = ls.phi.clone();
        reinitialize(&g, &mut ls, &bc, 1, 0.3 * g.dx()).unwrap();
        for (i, j) in before.interior() {
            assert!((ls.phi.get(i, j) - before.get(i, j)).abs() < 1e-12, "({i}, {j})");
        }
    }

    #[test]
    fn removes_scaling() {
        let g = GridSpec::<f64>::new(64, 8, -1.0, 1.0, 0.0, 0.25).unwrap();
        let mut ls = LevelSet::from_fn(&g, |x, _| 2.0 * x);
        let bc = BoundarySpec::neumann();
        reinitialize(&g, &mut ls, &bc, 60, 0.3 * g.dx()).unwrap();
        for (i, j) in ls.phi.interior() {
            let (x, _) = g.cell_center(i, j);
            if x.abs() < 0.3 {
                assert!((ls.phi.get(i, j) - x).abs() < 1e-3, "x = {x}: {}", ls.phi.get(i, j));
            }
        }
    }
}
