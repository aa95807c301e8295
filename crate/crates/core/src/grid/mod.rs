//! Uniform staggered (MAC) Cartesian grid and the field containers living on it.
//!
//! Scalars sit at cell centres, the x-velocity on vertical faces and the
//! y-velocity on horizontal faces. Every field carries [`GHOST`] ghost layers
//! on each side and is stored row-major with the x index fastest.

mod boundary;
mod ops;
pub mod snapshot;

pub(crate) use boundary::resolve_2d;
pub use boundary::{fill_ghosts, fill_velocity_ghosts, AxisResolve, BcKind, BoundarySpec, Side};
pub use ops::{
    divergence, gradient_at_faces, interp_cell_to_corner, laplacian_5pt, u_at_cell, u_at_corner,
    u_at_vface, v_at_cell, v_at_corner, v_at_uface, velocity_at_cells,
};

use crate::error::{FsiError, Result};
use crate::scalar::Real;

/// Ghost layer width shared by all fields (WENO5 needs three).
pub const GHOST: usize = 3;

/// Uniform Cartesian mesh description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub nx: usize,
    pub ny: usize,
    pub x_min: T,
    pub x_max: T,
    pub y_min: T,
    pub y_max: T,
}

impl<T: Real> GridSpec<T> {
    pub fn new(nx: usize, ny: usize, x_min: T, x_max: T, y_min: T, y_max: T) -> Result<Self> {
        if nx < 4 || ny < 4 {
            return Err(FsiError::Config(format!("grid must have at least 4x4 cells, got {nx}x{ny}")));
        }
        if !(x_max > x_min) || !(y_max > y_min) {
            return Err(FsiError::Config("grid bounds must satisfy max > min".into()));
        }
        Ok(Self { nx, ny, x_min, x_max, y_min, y_max })
    }

    /// Unit square `[0,1]^2` with `n x n` cells.
    pub fn unit_square(n: usize) -> Result<Self> {
        Self::new(n, n, T::zero(), T::one(), T::zero(), T::one())
    }

    #[inline]
    pub fn dx(&self) -> T {
        (self.x_max - self.x_min) / T::from_usize_lossy(self.nx)
    }

    #[inline]
    pub fn dy(&self) -> T {
        (self.y_max - self.y_min) / T::from_usize_lossy(self.ny)
    }

    #[inline]
    pub fn min_spacing(&self) -> T {
        self.dx().min(self.dy())
    }

    /// Whether `dx == dy` up to round-off.
    pub fn has_square_cells(&self) -> bool {
        let (dx, dy) = (self.dx(), self.dy());
        (dx - dy).abs() <= T::lit(1e-12) * dx.max(dy)
    }

    /// Physical coordinates of a point given in doubled lattice coordinates.
    ///
    /// Cell `(i, j)` centre is `(2i+1, 2j+1)`, vertical face `(i, j)` is
    /// `(2i, 2j+1)`, horizontal face `(i, j)` is `(2i+1, 2j)` and the corner
    /// below-left of cell `(i, j)` is `(2i, 2j)`.
    #[inline]
    pub fn lattice_point(&self, x2: i64, y2: i64) -> (T, T) {
        let half = T::lit(0.5);
        (
            self.x_min + T::lit(x2 as f64) * half * self.dx(),
            self.y_min + T::lit(y2 as f64) * half * self.dy(),
        )
    }

    #[inline]
    pub fn cell_center(&self, i: isize, j: isize) -> (T, T) {
        self.lattice_point(2 * i as i64 + 1, 2 * j as i64 + 1)
    }
}

/// Where the samples of a field live on the staggered lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Staggering {
    Cell,
    /// Vertical faces (x-velocity).
    XFace,
    /// Horizontal faces (y-velocity).
    YFace,
}

impl Staggering {
    /// Doubled lattice coordinates of stored sample `(i, j)`.
    #[inline]
    pub fn lattice(self, i: isize, j: isize) -> (i64, i64) {
        let (i, j) = (i as i64, j as i64);
        match self {
            Staggering::Cell => (2 * i + 1, 2 * j + 1),
            Staggering::XFace => (2 * i, 2 * j + 1),
            Staggering::YFace => (2 * i + 1, 2 * j),
        }
    }

    /// Whether the boundary of the given axis (0 = x, 1 = y) coincides with stored samples.
    #[inline]
    pub fn on_boundary(self, axis: usize) -> bool {
        matches!((self, axis), (Staggering::XFace, 0) | (Staggering::YFace, 1))
    }
}

/// Scalar samples on one staggering location, with ghost layers.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    stag: Staggering,
    ni: usize,
    nj: usize,
    data: Vec<T>,
}

/// Cell-centred scalar field.
pub type CellField<T> = Field<T>;

impl<T: Real> Field<T> {
    pub fn zeros(grid: &GridSpec<T>, stag: Staggering) -> Self {
        let (ni, nj) = match stag {
            Staggering::Cell => (grid.nx, grid.ny),
            Staggering::XFace => (grid.nx + 1, grid.ny),
            Staggering::YFace => (grid.nx, grid.ny + 1),
        };
        let len = (ni + 2 * GHOST) * (nj + 2 * GHOST);
        Self { stag, ni, nj, data: vec![T::zero(); len] }
    }

    pub fn cell(grid: &GridSpec<T>) -> Self {
        Self::zeros(grid, Staggering::Cell)
    }

    pub fn constant(grid: &GridSpec<T>, stag: Staggering, value: T) -> Self {
        let mut f = Self::zeros(grid, stag);
        f.data.iter_mut().for_each(|v| *v = value);
        f
    }

    /// Samples `f(x, y)` at every stored location, ghosts included.
    pub fn from_fn(grid: &GridSpec<T>, stag: Staggering, f: impl Fn(T, T) -> T) -> Self {
        let mut out = Self::zeros(grid, stag);
        let g = GHOST as isize;
        for j in -g..out.nj as isize + g {
            for i in -g..out.ni as isize + g {
                let (x2, y2) = stag.lattice(i, j);
                let (x, y) = grid.lattice_point(x2, y2);
                out.set(i, j, f(x, y));
            }
        }
        out
    }

    #[inline]
    pub fn staggering(&self) -> Staggering {
        self.stag
    }

    /// Number of stored non-ghost samples along x.
    #[inline]
    pub fn ni(&self) -> usize {
        self.ni
    }

    #[inline]
    pub fn nj(&self) -> usize {
        self.nj
    }

    #[inline(always)]
    fn index(&self, i: isize, j: isize) -> usize {
        let g = GHOST as isize;
        debug_assert!(i >= -g && i < self.ni as isize + g, "i = {i} out of range");
        debug_assert!(j >= -g && j < self.nj as isize + g, "j = {j} out of range");
        ((i + g) + (j + g) * (self.ni as isize + 2 * g)) as usize
    }

    #[inline(always)]
    pub fn get(&self, i: isize, j: isize) -> T {
        self.data[self.index(i, j)]
    }

    #[inline(always)]
    pub fn set(&mut self, i: isize, j: isize, v: T) {
        let k = self.index(i, j);
        self.data[k] = v;
    }

    #[inline(always)]
    pub fn get_mut(&mut self, i: isize, j: isize) -> &mut T {
        let k = self.index(i, j);
        &mut self.data[k]
    }

    /// Raw storage including ghosts.
    pub fn raw(&self) -> &[T] {
        &self.data
    }

    /// Iterator over stored non-ghost indices, x fastest.
    pub fn interior(&self) -> impl Iterator<Item = (isize, isize)> {
        let (ni, nj) = (self.ni as isize, self.nj as isize);
        (0..nj).flat_map(move |j| (0..ni).map(move |i| (i, j)))
    }

    pub fn interior_values(&self) -> Vec<T> {
        self.interior().map(|(i, j)| self.get(i, j)).collect()
    }

    pub fn max_abs(&self) -> T {
        self.interior().fold(T::zero(), |m, (i, j)| m.max(self.get(i, j).abs()))
    }

    pub fn all_finite(&self) -> bool {
        self.interior().all(|(i, j)| self.get(i, j).is_finite())
    }

    /// Copies non-ghost values from `other` (same layout).
    pub fn copy_interior_from(&mut self, other: &Self) {
        debug_assert_eq!((self.ni, self.nj, self.stag), (other.ni, other.nj, other.stag));
        for (i, j) in other.interior() {
            self.set(i, j, other.get(i, j));
        }
    }

    pub fn map_interior(&mut self, mut f: impl FnMut(isize, isize, T) -> T) {
        for j in 0..self.nj as isize {
            for i in 0..self.ni as isize {
                let v = self.get(i, j);
                self.set(i, j, f(i, j, v));
            }
        }
    }

    /// Stored non-ghost sample positions in physical coordinates.
    pub fn position(&self, grid: &GridSpec<T>, i: isize, j: isize) -> (T, T) {
        let (x2, y2) = self.stag.lattice(i, j);
        grid.lattice_point(x2, y2)
    }
}

/// Staggered velocity: `u` on vertical faces, `v` on horizontal faces.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceVectorField<T> {
    pub u: Field<T>,
    pub v: Field<T>,
}

impl<T: Real> FaceVectorField<T> {
    pub fn zeros(grid: &GridSpec<T>) -> Self {
        Self { u: Field::zeros(grid, Staggering::XFace), v: Field::zeros(grid, Staggering::YFace) }
    }

    pub fn from_fn(grid: &GridSpec<T>, fu: impl Fn(T, T) -> T, fv: impl Fn(T, T) -> T) -> Self {
        Self {
            u: Field::from_fn(grid, Staggering::XFace, fu),
            v: Field::from_fn(grid, Staggering::YFace, fv),
        }
    }

    pub fn component(&self, axis: usize) -> &Field<T> {
        if axis == 0 {
            &self.u
        } else {
            &self.v
        }
    }

    pub fn component_mut(&mut self, axis: usize) -> &mut Field<T> {
        if axis == 0 {
            &mut self.u
        } else {
            &mut self.v
        }
    }

    pub fn max_abs(&self) -> T {
        self.u.max_abs().max(self.v.max_abs())
    }

    pub fn all_finite(&self) -> bool {
        self.u.all_finite() && self.v.all_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_lattice() {
        let g = GridSpec::new(128, 64, -4.0, 4.0, -2.0, 2.0).unwrap();
        assert_eq!(g.dx(), 0.0625);
        assert_eq!(g.dy(), 0.0625);
        assert!(g.has_square_cells());
        assert_eq!(g.cell_center(0, 0), (-4.0 + 0.03125, -2.0 + 0.03125));
        assert_eq!(g.lattice_point(0, 0), (-4.0, -2.0));
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(GridSpec::new(8, 8, 1.0, 0.0, 0.0, 1.0).is_err());
        assert!(GridSpec::<f64>::new(2, 8, 0.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn storage_is_x_fastest() {
        let g = GridSpec::<f64>::unit_square(4).unwrap();
        let mut f = Field::cell(&g);
        f.set(0, 0, 1.0);
        f.set(1, 0, 2.0);
        let k0 = f.raw().iter().position(|&v| v == 1.0).unwrap();
        let k1 = f.raw().iter().position(|&v| v == 2.0).unwrap();
        assert_eq!(k1, k0 + 1);
    }

    #[test]
    fn face_field_shapes() {
        let g = GridSpec::<f64>::new(6, 5, 0.0, 1.0, 0.0, 1.0).unwrap();
        let vel = FaceVectorField::zeros(&g);
        assert_eq!((vel.u.ni(), vel.u.nj()), (7, 5));
        assert_eq!((vel.v.ni(), vel.v.nj()), (6, 6));
    }
}
