use super::normals::Normals;
use super::reinit::LevelSet;
use super::smoothing::smooth_heaviside;
use super::ghosts::fill_linear_ghosts;
use crate::grid::{CellField, GridSpec, Staggering};
use crate::scalar::Real;

/// Backward characteristics `Y = (y1, y2)` at cell centres.
#[derive(Debug, Clone, PartialEq)]
pub struct BackwardMap<T> {
    pub y1: CellField<T>,
    pub y2: CellField<T>,
}

impl<T: Real> BackwardMap<T> {
    /// `Y(x) = x`, ghosts included.
    pub fn identity(grid: &GridSpec<T>) -> Self {
        Self {
            y1: CellField::from_fn(grid, Staggering::Cell, |x, _| x),
            y2: CellField::from_fn(grid, Staggering::Cell, |_, y| y),
        }
    }
}

/// Upwind `n·∇q` with `n` pointing away from the membrane.
#[inline]
fn upwind_normal_derivative<T: Real>(q: &CellField<T>, n1: T, n2: T, i: isize, j: isize, dx: T, dy: T) -> T {
    let c = q.get(i, j);
    let ddx = if n1 > T::zero() { (c - q.get(i - 1, j)) / dx } else { (q.get(i + 1, j) - c) / dx };
    let ddy = if n2 > T::zero() { (c - q.get(i, j - 1)) / dy } else { (q.get(i, j + 1) - c) / dy };
    n1 * ddx + n2 * ddy
}

/// Replaces `Y` outside the membrane by its linear extension from the
/// interface region, acting on the displacement `Y − x` so that the identity
/// map is an exact fixed point. Cells with `φ ≤ 0` are never touched.
pub fn extrapolate_backward_map<T: Real>(
    grid: &GridSpec<T>,
    ymap: &mut BackwardMap<T>,
    ls: &LevelSet<T>,
    normals: &Normals<T>,
    n_steps: usize,
    dtau: T,
) {
    let (dx, dy) = (grid.dx(), grid.dy());
    let (two_dx, two_dy) = (T::lit(2.0) * dx, T::lit(2.0) * dy);
    let gate = {
        let mut w = CellField::cell(grid);
        w.map_interior(|i, j, _| {
            let p = ls.phi.get(i, j);
            if p > T::zero() {
                smooth_heaviside(p / ls.epsilon)
            } else {
                T::zero()
            }
        });
        w
    };
    if gate.interior().all(|(i, j)| gate.get(i, j) == T::zero()) {
        return;
    }
    let (n1, n2) = (&normals.n1, &normals.n2);

    for (comp, axis) in [(&mut ymap.y1, 0usize), (&mut ymap.y2, 1usize)] {
        let mut disp = CellField::cell(grid);
        disp.map_interior(|i, j, _| {
            let (x, y) = grid.cell_center(i, j);
            comp.get(i, j) - if axis == 0 { x } else { y }
        });
        fill_linear_ghosts(&mut disp, [true; 4]);

        let mut dn = CellField::cell(grid);
        dn.map_interior(|i, j, _| {
            n1.get(i, j) * (disp.get(i + 1, j) - disp.get(i - 1, j)) / two_dx
                + n2.get(i, j) * (disp.get(i, j + 1) - disp.get(i, j - 1)) / two_dy
        });
        fill_linear_ghosts(&mut dn, [true; 4]);
        for _ in 0..n_steps {
            let cur = dn.clone();
            dn.map_interior(|i, j, v| {
                let w = gate.get(i, j);
                if w == T::zero() {
                    return v;
                }
                v - dtau * w * upwind_normal_derivative(&cur, n1.get(i, j), n2.get(i, j), i, j, dx, dy)
            });
            fill_linear_ghosts(&mut dn, [true; 4]);
        }

        for _ in 0..n_steps {
            let cur = disp.clone();
            disp.map_interior(|i, j, v| {
                let w = gate.get(i, j);
                if w == T::zero() {
                    return v;
                }
                let d = upwind_normal_derivative(&cur, n1.get(i, j), n2.get(i, j), i, j, dx, dy);
                v - dtau * w * (d - dn.get(i, j))
            });
            fill_linear_ghosts(&mut disp, [true; 4]);
        }

        comp.map_interior(|i, j, v| {
            if gate.get(i, j) == T::zero() {
                return v;
            }
            let (x, y) = grid.cell_center(i, j);
            (if axis == 0 { x } else { y }) + disp.get(i, j)
        });
    }
}
