use crate::grid::{fill_ghosts, BoundarySpec, CellField, GridSpec};
use crate::scalar::Real;

/// General 2×2 tensor, `m[c][d]` stored as `xx, xy, yx, yy`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2<T> {
    pub xx: T,
    pub xy: T,
    pub yx: T,
    pub yy: T,
}

impl<T: Real> Mat2<T> {
    pub fn new(xx: T, xy: T, yx: T, yy: T) -> Self {
        Self { xx, xy, yx, yy }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn det(&self) -> T {
        self.xx * self.yy - self.xy * self.yx
    }

    pub fn trace(&self) -> T {
        self.xx + self.yy
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.xx, self.yx, self.xy, self.yy)
    }

    /// Inverse, or `None` when `|det| < tol`.
    pub fn inverse(&self, tol: T) -> Option<Self> {
        let d = self.det();
        if d.abs() < tol {
            return None;
        }
        Some(Self::new(self.yy / d, -self.xy / d, -self.yx / d, self.xx / d))
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.xx * o.xx + self.xy * o.yx,
            self.xx * o.xy + self.xy * o.yy,
            self.yx * o.xx + self.yy * o.yx,
            self.yx * o.xy + self.yy * o.yy,
        )
    }

    pub fn apply(&self, v: [T; 2]) -> [T; 2] {
        [self.xx * v[0] + self.xy * v[1], self.yx * v[0] + self.yy * v[1]]
    }

    /// Double contraction `Σ m_cd o_cd`.
    pub fn ddot(&self, o: &Self) -> T {
        self.xx * o.xx + self.xy * o.xy + self.yx * o.yx + self.yy * o.yy
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.xx * s, self.xy * s, self.yx * s, self.yy * s)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.xx + o.xx, self.xy + o.xy, self.yx + o.yx, self.yy + o.yy)
    }

    pub fn get(&self, c: usize, d: usize) -> T {
        match (c, d) {
            (0, 0) => self.xx,
            (0, 1) => self.xy,
            (1, 0) => self.yx,
            _ => self.yy,
        }
    }
}

/// Symmetric 2×2 tensor.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sym2<T> {
    pub xx: T,
    pub xy: T,
    pub yy: T,
}

impl<T: Real> Sym2<T> {
    pub fn new(xx: T, xy: T, yy: T) -> Self {
        Self { xx, xy, yy }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::one())
    }

    /// `n ⊗ n`.
    pub fn outer(n: [T; 2]) -> Self {
        Self::new(n[0] * n[0], n[0] * n[1], n[1] * n[1])
    }

    /// Tangential projector `I − n ⊗ n`.
    pub fn projector(n: [T; 2]) -> Self {
        Self::identity().sub(&Self::outer(n))
    }

    /// Symmetric part of a general tensor.
    pub fn sym(m: &Mat2<T>) -> Self {
        Self::new(m.xx, T::lit(0.5) * (m.xy + m.yx), m.yy)
    }

    pub fn to_mat(&self) -> Mat2<T> {
        Mat2::new(self.xx, self.xy, self.xy, self.yy)
    }

    pub fn trace(&self) -> T {
        self.xx + self.yy
    }

    pub fn det(&self) -> T {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn apply(&self, v: [T; 2]) -> [T; 2] {
        [self.xx * v[0] + self.xy * v[1], self.xy * v[0] + self.yy * v[1]]
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.xx * s, self.xy * s, self.yy * s)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.xx + o.xx, self.xy + o.xy, self.yy + o.yy)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.xx - o.xx, self.xy - o.xy, self.yy - o.yy)
    }

    pub fn norm_sq(&self) -> T {
        self.xx * self.xx + T::lit(2.0) * self.xy * self.xy + self.yy * self.yy
    }

    pub fn get(&self, c: usize, d: usize) -> T {
        match (c, d) {
            (0, 0) => self.xx,
            (1, 1) => self.yy,
            _ => self.xy,
        }
    }
}

/// Cell-centred field of general 2×2 tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField<T> {
    pub xx: CellField<T>,
    pub xy: CellField<T>,
    pub yx: CellField<T>,
    pub yy: CellField<T>,
}

impl<T: Real> TensorField<T> {
    pub fn zeros(grid: &GridSpec<T>) -> Self {
        let z = CellField::cell(grid);
        Self { xx: z.clone(), xy: z.clone(), yx: z.clone(), yy: z }
    }

    #[inline]
    pub fn get(&self, i: isize, j: isize) -> Mat2<T> {
        Mat2::new(self.xx.get(i, j), self.xy.get(i, j), self.yx.get(i, j), self.yy.get(i, j))
    }

    #[inline]
    pub fn set(&mut self, i: isize, j: isize, m: Mat2<T>) {
        self.xx.set(i, j, m.xx);
        self.xy.set(i, j, m.xy);
        self.yx.set(i, j, m.yx);
        self.yy.set(i, j, m.yy);
    }
}

/// Cell-centred field of symmetric 2×2 tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensorField<T> {
    pub xx: CellField<T>,
    pub xy: CellField<T>,
    pub yy: CellField<T>,
}

impl<T: Real> SymTensorField<T> {
    pub fn zeros(grid: &GridSpec<T>) -> Self {
        let z = CellField::cell(grid);
        Self { xx: z.clone(), xy: z.clone(), yy: z }
    }

    pub fn identity(grid: &GridSpec<T>) -> Self {
        let mut s = Self::zeros(grid);
        s.xx = CellField::constant(grid, crate::grid::Staggering::Cell, T::one());
        s.yy = s.xx.clone();
        s
    }

    #[inline]
    pub fn get(&self, i: isize, j: isize) -> Sym2<T> {
        Sym2::new(self.xx.get(i, j), self.xy.get(i, j), self.yy.get(i, j))
    }

    #[inline]
    pub fn set(&mut self, i: isize, j: isize, s: Sym2<T>) {
        self.xx.set(i, j, s.xx);
        self.xy.set(i, j, s.xy);
        self.yy.set(i, j, s.yy);
    }

    pub fn component(&self, c: usize, d: usize) -> &CellField<T> {
        match (c, d) {
            (0, 0) => &self.xx,
            (1, 1) => &self.yy,
            _ => &self.xy,
        }
    }

    pub fn fill_ghosts(&mut self, bc: &BoundarySpec<T>) -> crate::Result<()> {
        fill_ghosts(&mut self.xx, bc)?;
        fill_ghosts(&mut self.xy, bc)?;
        fill_ghosts(&mut self.yy, bc)
    }

    pub fn max_abs(&self) -> T {
        self.xx.max_abs().max(self.xy.max_abs()).max(self.yy.max_abs())
    }
}
