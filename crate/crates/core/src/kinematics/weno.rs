//! Fifth-order WENO one-sided derivatives (Jiang–Peng form).

use crate::grid::{BcKind, BoundarySpec, CellField, GridSpec, GHOST};
use crate::scalar::Real;

const WENO_EPS: f64 = 1e-6;

/// Weighted combination of the five one-sided differences `v1..v5`.
#[inline]
pub(crate) fn weno5<T: Real>(v1: T, v2: T, v3: T, v4: T, v5: T) -> T {
    let c = |x: f64| T::lit(x);
    let p1 = v1 / c(3.0) - c(7.0) * v2 / c(6.0) + c(11.0) * v3 / c(6.0);
    let p2 = -v2 / c(6.0) + c(5.0) * v3 / c(6.0) + v4 / c(3.0);
    let p3 = v3 / c(3.0) + c(5.0) * v4 / c(6.0) - v5 / c(6.0);
    let k = c(13.0 / 12.0);
    let q = c(0.25);
    let s1 = k * (v1 - c(2.0) * v2 + v3).powi(2) + q * (v1 - c(4.0) * v2 + c(3.0) * v3).powi(2);
    let s2 = k * (v2 - c(2.0) * v3 + v4).powi(2) + q * (v2 - v4).powi(2);
    let s3 = k * (v3 - c(2.0) * v4 + v5).powi(2) + q * (c(3.0) * v3 - c(4.0) * v4 + v5).powi(2);
    let e = c(WENO_EPS);
    let a1 = c(0.1) / (s1 + e).powi(2);
    let a2 = c(0.6) / (s2 + e).powi(2);
    let a3 = c(0.3) / (s3 + e).powi(2);
    (a1 * p1 + a2 * p2 + a3 * p3) / (a1 + a2 + a3)
}

/// Marks the interior cells whose WENO stencil would reach into the ghosts of
/// a non-periodic side; there the derivative falls back to first-order
/// upwinding.
#[derive(Debug, Clone, Copy)]
pub(crate) struct EdgeGuard {
    low: [bool; 2],
    high: [bool; 2],
    n: [isize; 2],
}

impl EdgeGuard {
    pub(crate) fn new<T: Real>(grid: &GridSpec<T>, bc: &BoundarySpec<T>) -> Self {
        let open = |k: BcKind<T>| !matches!(k, BcKind::Periodic);
        Self {
            low: [open(bc.left), open(bc.bottom)],
            high: [open(bc.right), open(bc.top)],
            n: [grid.nx as isize, grid.ny as isize],
        }
    }

    #[inline]
    fn first_order(&self, k: isize, axis: usize) -> bool {
        let reach = GHOST as isize;
        (self.low[axis] && k < reach) || (self.high[axis] && k >= self.n[axis] - reach)
    }
}

/// Left-biased (`minus`) and right-biased (`plus`) derivatives of `q` at
/// cell `(i, j)` along `axis`.
#[inline]
pub(crate) fn one_sided<T: Real>(q: &CellField<T>, i: isize, j: isize, axis: usize, h: T, guard: &EdgeGuard) -> (T, T) {
    let at = |k: isize| if axis == 0 { q.get(i + k, j) } else { q.get(i, j + k) };
    let d = |k: isize| (at(k) - at(k - 1)) / h; // backward difference ending at offset k
    if guard.first_order(if axis == 0 { i } else { j }, axis) {
        return (d(0), d(1));
    }
    let minus = weno5(d(-2), d(-1), d(0), d(1), d(2));
    let plus = weno5(d(3), d(2), d(1), d(0), d(-1));
    (minus, plus)
}

/// Upwind WENO5 approximation of `a ∂q/∂axis` at every cell, the upwind side
/// chosen by the sign of the cell-centred advecting speed `a`.
pub fn weno5_flux_derivative<T: Real>(
    grid: &GridSpec<T>,
    bc: &BoundarySpec<T>,
    q: &CellField<T>,
    speed: &CellField<T>,
    axis: usize,
) -> CellField<T> {
    let h = if axis == 0 { grid.dx() } else { grid.dy() };
    let guard = EdgeGuard::new(grid, bc);
    let mut out = CellField::cell(grid);
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            let a = speed.get(i, j);
            if a == T::zero() {
                continue;
            }
            let (minus, plus) = one_sided(q, i, j, axis, h, &guard);
            out.set(i, j, if a > T::zero() { a * minus } else { a * plus });
        }
    }
    out
}
