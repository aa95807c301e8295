//! Interpolations between staggering locations and the discrete MAC operators.

use super::{CellField, FaceVectorField, Field, GridSpec};
use crate::scalar::Real;

/// Mean of the four cells around corner `(i, j)` (lower-left corner of cell `(i, j)`).
#[inline]
pub fn interp_cell_to_corner<T: Real>(m: &CellField<T>, i: isize, j: isize) -> T {
    T::lit(0.25) * (m.get(i, j) + m.get(i - 1, j) + m.get(i, j - 1) + m.get(i - 1, j - 1))
}

/// `v` interpolated to vertical face `(i, j)` from its four neighbours.
#[inline]
pub fn v_at_uface<T: Real>(vel: &FaceVectorField<T>, i: isize, j: isize) -> T {
    let v = &vel.v;
    T::lit(0.25) * (v.get(i, j) + v.get(i, j + 1) + v.get(i - 1, j + 1) + v.get(i - 1, j))
}

/// `u` interpolated to horizontal face `(i, j)` from its four neighbours.
#[inline]
pub fn u_at_vface<T: Real>(vel: &FaceVectorField<T>, i: isize, j: isize) -> T {
    let u = &vel.u;
    T::lit(0.25) * (u.get(i + 1, j - 1) + u.get(i + 1, j) + u.get(i, j) + u.get(i, j - 1))
}

#[inline]
pub fn u_at_cell<T: Real>(vel: &FaceVectorField<T>, i: isize, j: isize) -> T {
    T::lit(0.5) * (vel.u.get(i, j) + vel.u.get(i + 1, j))
}

#[inline]
pub fn v_at_cell<T: Real>(vel: &FaceVectorField<T>, i: isize, j: isize) -> T {
    T::lit(0.5) * (vel.v.get(i, j) + vel.v.get(i, j + 1))
}

/// `u` at corner `(i, j)`: mean of the faces directly above and below.
#[inline]
pub fn u_at_corner<T: Real>(vel: &FaceVectorField<T>, i: isize, j: isize) -> T {
    T::lit(0.5) * (vel.u.get(i, j - 1) + vel.u.get(i, j))
}

#[inline]
pub fn v_at_corner<T: Real>(vel: &FaceVectorField<T>, i: isize, j: isize) -> T {
    T::lit(0.5) * (vel.v.get(i - 1, j) + vel.v.get(i, j))
}

/// Cell-centred velocity components (ghost layers included where the face
/// data allows it).
pub fn velocity_at_cells<T: Real>(grid: &GridSpec<T>, vel: &FaceVectorField<T>) -> (CellField<T>, CellField<T>) {
    let mut uc = Field::cell(grid);
    let mut vc = Field::cell(grid);
    let g = super::GHOST as isize;
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    for j in -g..ny + g {
        for i in -g..nx + g {
            uc.set(i, j, u_at_cell(vel, i, j));
            vc.set(i, j, v_at_cell(vel, i, j));
        }
    }
    (uc, vc)
}

/// Standard MAC divergence on every cell.
pub fn divergence<T: Real>(grid: &GridSpec<T>, vel: &FaceVectorField<T>) -> CellField<T> {
    let (dx, dy) = (grid.dx(), grid.dy());
    let mut out = Field::cell(grid);
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            let d = (vel.u.get(i + 1, j) - vel.u.get(i, j)) / dx + (vel.v.get(i, j + 1) - vel.v.get(i, j)) / dy;
            out.set(i, j, d);
        }
    }
    out
}

/// Central difference of adjacent cell values on every stored face
/// (boundary faces read the ghost cells of `p`).
pub fn gradient_at_faces<T: Real>(grid: &GridSpec<T>, p: &CellField<T>) -> FaceVectorField<T> {
    let (dx, dy) = (grid.dx(), grid.dy());
    let mut out = FaceVectorField::zeros(grid);
    for j in 0..grid.ny as isize {
        for i in 0..=grid.nx as isize {
            out.u.set(i, j, (p.get(i, j) - p.get(i - 1, j)) / dx);
        }
    }
    for j in 0..=grid.ny as isize {
        for i in 0..grid.nx as isize {
            out.v.set(i, j, (p.get(i, j) - p.get(i, j - 1)) / dy);
        }
    }
    out
}

/// Five-point Laplacian with constant coefficients.
pub fn laplacian_5pt<T: Real>(grid: &GridSpec<T>, p: &CellField<T>) -> CellField<T> {
    let (dx2, dy2) = (grid.dx() * grid.dx(), grid.dy() * grid.dy());
    let two = T::lit(2.0);
    let mut out = Field::cell(grid);
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            let c = p.get(i, j);
            let l = (p.get(i + 1, j) - two * c + p.get(i - 1, j)) / dx2 + (p.get(i, j + 1) - two * c + p.get(i, j - 1)) / dy2;
            out.set(i, j, l);
        }
    }
    out
}
