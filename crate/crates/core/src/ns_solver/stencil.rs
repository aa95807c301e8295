//! Stencil assembly on the staggered lattice.
//!
//! Points are addressed in doubled lattice coordinates: cell `(i, j)` is
//! `(2i+1, 2j+1)`, the u-face `(i, j)` is `(2i, 2j+1)`, the v-face `(i, j)` is
//! `(2i+1, 2j)` and the corner `(i, j)` is `(2i, 2j)`. A velocity component
//! requested away from its own location is interpolated with the two- or
//! four-point means of the staggered scheme, and every stored sample is then
//! resolved through the boundary conditions into an unknown plus a constant.

use std::str::FromStr;

use super::sparse::RowAccumulator;
use crate::error::{FsiError, Result};
use crate::grid::{
    fill_velocity_ghosts, resolve_2d, BoundarySpec, CellField, FaceVectorField, Field, GridSpec,
    Staggering,
};
use crate::scalar::Real;

/// Numbering of the velocity unknowns: u faces first, then v faces, each x
/// fastest. Fixed wall samples and periodic duplicates are not unknowns.
#[derive(Debug, Clone)]
pub struct VelocityLayout<T> {
    bc: BoundarySpec<T>,
    templates: [Field<T>; 2],
    index: [Vec<Option<usize>>; 2],
    samples: Vec<(usize, isize, isize)>,
}

impl<T: Real> VelocityLayout<T> {
    pub fn new(grid: &GridSpec<T>, bc: &BoundarySpec<T>) -> Result<Self> {
        bc.validate()?;
        let templates = [Field::zeros(grid, Staggering::XFace), Field::zeros(grid, Staggering::YFace)];
        let mut index = [Vec::new(), Vec::new()];
        let mut samples = Vec::new();
        for c in 0..2 {
            let t = &templates[c];
            index[c] = vec![None; t.ni() * t.nj()];
            for (i, j) in t.interior() {
                let (si, sj, scale, offset) = resolve_2d(t, bc, i, j);
                if (si, sj) == (i, j) && scale == T::one() && offset == T::zero() {
                    index[c][(i + j * t.ni() as isize) as usize] = Some(samples.len());
                    samples.push((c, i, j));
                }
            }
        }
        Ok(Self { bc: *bc, templates, index, samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn boundary(&self) -> &BoundarySpec<T> {
        &self.bc
    }

    /// `(component, i, j)` of unknown `k`.
    pub fn sample(&self, k: usize) -> (usize, isize, isize) {
        self.samples[k]
    }

    pub fn unknown(&self, comp: usize, i: isize, j: isize) -> Option<usize> {
        let t = &self.templates[comp];
        if i < 0 || j < 0 || i >= t.ni() as isize || j >= t.nj() as isize {
            return None;
        }
        self.index[comp][(i + j * t.ni() as isize) as usize]
    }

    pub fn gather(&self, vel: &FaceVectorField<T>) -> Vec<T> {
        self.samples.iter().map(|&(c, i, j)| vel.component(c).get(i, j)).collect()
    }

    /// Writes the unknowns into `vel` and refreshes fixed samples and ghosts.
    pub fn scatter(&self, x: &[T], vel: &mut FaceVectorField<T>) -> Result<()> {
        for (&(c, i, j), &v) in self.samples.iter().zip(x) {
            vel.component_mut(c).set(i, j, v);
        }
        fill_velocity_ghosts(vel, &self.bc)
    }

    /// Adds `w · (stored sample (i, j) of component c)` to `acc`, resolving
    /// ghosts and fixed samples.
    #[inline]
    fn add_stored(&self, acc: &mut RowAccumulator<T>, comp: usize, i: isize, j: isize, w: T) {
        let (si, sj, scale, offset) = resolve_2d(&self.templates[comp], &self.bc, i, j);
        acc.add_constant(w * offset);
        if scale != T::zero() {
            let k = self.unknown(comp, si, sj).expect("resolved sample must be an unknown");
            acc.add(k, w * scale);
        }
    }
}

#[inline]
fn is_native(comp: usize, x2: i64, y2: i64) -> bool {
    let (ex, ey) = (x2.rem_euclid(2) == 0, y2.rem_euclid(2) == 0);
    if comp == 0 {
        ex && !ey
    } else {
        !ex && ey
    }
}

#[inline]
fn native_index(comp: usize, x2: i64, y2: i64) -> (isize, isize) {
    if comp == 0 {
        ((x2 / 2) as isize, ((y2 - 1).div_euclid(2)) as isize)
    } else {
        (((x2 - 1).div_euclid(2)) as isize, (y2 / 2) as isize)
    }
}

/// Neighbouring native points averaged to sample `comp` at `(x2, y2)`.
fn interpolation_points(comp: usize, x2: i64, y2: i64) -> ([(i64, i64); 4], usize) {
    let (ox, oy) = (x2.rem_euclid(2) == 1, y2.rem_euclid(2) == 1);
    let pair_x = [(x2 - 1, y2), (x2 + 1, y2), (0, 0), (0, 0)];
    let pair_y = [(x2, y2 - 1), (x2, y2 + 1), (0, 0), (0, 0)];
    let quad = [(x2 - 1, y2 - 1), (x2 + 1, y2 - 1), (x2 - 1, y2 + 1), (x2 + 1, y2 + 1)];
    match (comp, ox, oy) {
        // u at cells / corners / v-faces
        (0, true, true) => (pair_x, 2),
        (0, false, false) => (pair_y, 2),
        (0, true, false) => (quad, 4),
        // v at cells / corners / u-faces
        (1, true, true) => (pair_y, 2),
        (1, false, false) => (pair_x, 2),
        (1, false, true) => (quad, 4),
        _ => unreachable!("native points are not interpolated"),
    }
}

/// Value of velocity component `comp` at a lattice point, from stored data
/// and ghosts.
pub fn sample_velocity<T: Real>(vel: &FaceVectorField<T>, comp: usize, x2: i64, y2: i64) -> T {
    if is_native(comp, x2, y2) {
        let (i, j) = native_index(comp, x2, y2);
        return vel.component(comp).get(i, j);
    }
    let (pts, n) = interpolation_points(comp, x2, y2);
    let s = pts[..n].iter().fold(T::zero(), |s, &(px, py)| {
        let (i, j) = native_index(comp, px, py);
        s + vel.component(comp).get(i, j)
    });
    s / T::from_usize_lossy(n)
}

/// Cell field evaluated at a cell or corner lattice point (four-cell mean at
/// corners).
#[inline]
pub fn cell_or_corner<T: Real>(f: &CellField<T>, x2: i64, y2: i64) -> T {
    at_cell_or_corner(x2, y2, |i, j| f.get(i, j))
}

/// `g` evaluated at a cell, or averaged over the four cells around a corner.
#[inline]
pub fn at_cell_or_corner<T: Real>(x2: i64, y2: i64, g: impl Fn(isize, isize) -> T) -> T {
    if x2.rem_euclid(2) == 1 {
        debug_assert!(y2.rem_euclid(2) == 1, "({x2}, {y2}) is neither a cell nor a corner");
        g(((x2 - 1) / 2) as isize, ((y2 - 1).div_euclid(2)) as isize)
    } else {
        debug_assert!(y2.rem_euclid(2) == 0, "({x2}, {y2}) is neither a cell nor a corner");
        let (i, j) = ((x2 / 2) as isize, (y2 / 2) as isize);
        T::lit(0.25) * (g(i, j) + g(i - 1, j) + g(i, j - 1) + g(i - 1, j - 1))
    }
}

/// Central derivative `∂_axis f` of a cell field at a cell or corner point.
pub fn cell_derivative_at<T: Real>(grid: &GridSpec<T>, f: &CellField<T>, axis: usize, x2: i64, y2: i64) -> T {
    let h = if axis == 0 { grid.dx() } else { grid.dy() };
    if x2.rem_euclid(2) == 1 {
        let (i, j) = (((x2 - 1) / 2) as isize, ((y2 - 1).div_euclid(2)) as isize);
        let (a, b) = if axis == 0 { (f.get(i + 1, j), f.get(i - 1, j)) } else { (f.get(i, j + 1), f.get(i, j - 1)) };
        (a - b) / (T::lit(2.0) * h)
    } else {
        let (i, j) = ((x2 / 2) as isize, (y2 / 2) as isize);
        let half = T::lit(0.5);
        if axis == 0 {
            half * ((f.get(i, j) + f.get(i, j - 1)) - (f.get(i - 1, j) + f.get(i - 1, j - 1))) / h
        } else {
            half * ((f.get(i, j) + f.get(i - 1, j)) - (f.get(i, j - 1) + f.get(i - 1, j - 1))) / h
        }
    }
}

/// Grid plus unknown numbering; builds row contributions.
pub struct StencilContext<'a, T> {
    pub grid: &'a GridSpec<T>,
    pub layout: &'a VelocityLayout<T>,
}

impl<'a, T: Real> StencilContext<'a, T> {
    pub fn new(grid: &'a GridSpec<T>, layout: &'a VelocityLayout<T>) -> Self {
        Self { grid, layout }
    }

    #[inline]
    fn spacing(&self, axis: usize) -> T {
        if axis == 0 {
            self.grid.dx()
        } else {
            self.grid.dy()
        }
    }

    /// Adds `w · comp(x2, y2)`.
    #[inline]
    pub fn add_point(&self, acc: &mut RowAccumulator<T>, comp: usize, x2: i64, y2: i64, w: T) {
        if w == T::zero() {
            return;
        }
        if is_native(comp, x2, y2) {
            let (i, j) = native_index(comp, x2, y2);
            self.layout.add_stored(acc, comp, i, j, w);
            return;
        }
        let (pts, n) = interpolation_points(comp, x2, y2);
        let wn = w / T::from_usize_lossy(n);
        for &(px, py) in &pts[..n] {
            let (i, j) = native_index(comp, px, py);
            self.layout.add_stored(acc, comp, i, j, wn);
        }
    }

    /// Adds `scale · ∂_outer( coef · [∂_inner] comp )` evaluated at `row`,
    /// with `coef` sampled at the two points half a cell away along `outer`.
    #[allow(clippy::too_many_arguments)]
    pub fn add_div_term(
        &self,
        acc: &mut RowAccumulator<T>,
        row: (i64, i64),
        outer: usize,
        coef: impl Fn(i64, i64) -> T,
        comp: usize,
        inner: Option<usize>,
        scale: T,
    ) {
        let ho = self.spacing(outer);
        for sgn in [1i64, -1] {
            let p = if outer == 0 { (row.0 + sgn, row.1) } else { (row.0, row.1 + sgn) };
            let c = coef(p.0, p.1);
            let w = scale * T::lit(sgn as f64) * c / ho;
            if w == T::zero() {
                continue;
            }
            match inner {
                None => self.add_point(acc, comp, p.0, p.1, w),
                Some(d) => {
                    let hd = self.spacing(d);
                    let (e, f) = if d == 0 { ((p.0 + 1, p.1), (p.0 - 1, p.1)) } else { ((p.0, p.1 + 1), (p.0, p.1 - 1)) };
                    self.add_point(acc, comp, e.0, e.1, w / hd);
                    self.add_point(acc, comp, f.0, f.1, -w / hd);
                }
            }
        }
    }

    /// `scale · Σ_b Σ_c [∂_b(G_ac ∂_b u_c) + ∂_b(G_cb ∂_a u_c)]` for row
    /// component `a`, i.e. row `a` of `div(G∇u + ∇uᵀG)`.
    pub fn add_tensor_viscosity(
        &self,
        acc: &mut RowAccumulator<T>,
        row: (i64, i64),
        a: usize,
        g: &[[&CellField<T>; 2]; 2],
        scale: T,
    ) {
        for b in 0..2 {
            for c in 0..2 {
                self.add_div_term(acc, row, b, |x, y| cell_or_corner(g[a][c], x, y), c, Some(b), scale);
                self.add_div_term(acc, row, b, |x, y| cell_or_corner(g[c][b], x, y), c, Some(a), scale);
            }
        }
    }

    /// `scale · Σ_{b,c,d} ∂_b(m_abcd ∂_d u_c)` with `m(a, b, c, d, i, j)`
    /// evaluated at cells.
    pub fn add_fourth_order(
        &self,
        acc: &mut RowAccumulator<T>,
        row: (i64, i64),
        a: usize,
        m: &impl Fn(usize, usize, usize, usize, isize, isize) -> T,
        scale: T,
    ) {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    self.add_div_term(acc, row, b, |x, y| at_cell_or_corner(x, y, |i, j| m(a, b, c, d, i, j)), c, Some(d), scale);
                }
            }
        }
    }

    /// `scale · Σ_{b,d} ∂_b(∂_d S_ab · u_d)`, row `a` of `div((u·∇)S)`.
    pub fn add_tensor_transport(
        &self,
        acc: &mut RowAccumulator<T>,
        row: (i64, i64),
        a: usize,
        s: &[[&CellField<T>; 2]; 2],
        scale: T,
    ) {
        for b in 0..2 {
            for d in 0..2 {
                let f = s[a][b];
                self.add_div_term(acc, row, b, |x, y| cell_derivative_at(self.grid, f, d, x, y), d, None, scale);
            }
        }
    }
}

/// A single `∂_outer(m ∂_inner w)` (or `∂_outer(m w)`) term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivTerm {
    pub outer: usize,
    pub inner: Option<usize>,
    pub unknown: usize,
}

impl FromStr for DivTerm {
    type Err = FsiError;

    /// Parses names such as `dx(m dy v)` or `dy(m u)`.
    fn from_str(s: &str) -> Result<Self> {
        let err = || FsiError::Config(format!("unknown stencil term `{s}` (expected e.g. `dx(m dy v)` or `dy(m u)`)"));
        let axis = |t: &str| match t {
            "dx" => Some(0),
            "dy" => Some(1),
            _ => None,
        };
        let comp = |t: &str| match t {
            "u" => Some(0),
            "v" => Some(1),
            _ => None,
        };
        let t = s.trim();
        let open = t.find('(').ok_or_else(err)?;
        if !t.ends_with(')') {
            return Err(err());
        }
        let outer = axis(t[..open].trim()).ok_or_else(err)?;
        let words: Vec<&str> = t[open + 1..t.len() - 1].split_whitespace().collect();
        match words.as_slice() {
            ["m", w] => Ok(Self { outer, inner: None, unknown: comp(w).ok_or_else(err)? }),
            ["m", d, w] => Ok(Self { outer, inner: Some(axis(d).ok_or_else(err)?), unknown: comp(w).ok_or_else(err)? }),
            _ => Err(err()),
        }
    }
}

/// Row contributions of one `DivTerm` with cell-centred coefficient `m`, for
/// the momentum row of component `row_comp` at stored face `(i, j)`.
pub fn div_term_stencil<T: Real>(
    ctx: &StencilContext<'_, T>,
    term: DivTerm,
    m: &CellField<T>,
    row_comp: usize,
    i: isize,
    j: isize,
) -> RowAccumulator<T> {
    let stag = if row_comp == 0 { Staggering::XFace } else { Staggering::YFace };
    let row = stag.lattice(i, j);
    let mut acc = RowAccumulator::new();
    ctx.add_div_term(&mut acc, row, term.outer, |x, y| cell_or_corner(m, x, y), term.unknown, term.inner, T::one());
    acc
}

/// Applies a row to a velocity field (`Σ coeff · unknown + constant`).
pub fn apply_row<T: Real>(layout: &VelocityLayout<T>, acc: &RowAccumulator<T>, vel: &FaceVectorField<T>) -> T {
    acc.entries().iter().fold(acc.constant(), |s, &(k, w)| {
        let (c, i, j) = layout.sample(k);
        s + w * vel.component(c).get(i, j)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BcKind;

    fn setup(n: usize) -> (GridSpec<f64>, VelocityLayout<f64>) {
        let g = GridSpec::<f64>::new(n, n, 0.0, 1.0, 0.0, 1.0).unwrap();
        let l = VelocityLayout::new(&g, &BoundarySpec::periodic()).unwrap();
        (g, l)
    }

    #[test]
    fn layout_counts() {
        let g = GridSpec::<f64>::new(8, 4, 0.0, 2.0, 0.0, 1.0).unwrap();
        let per = VelocityLayout::new(&g, &BoundarySpec::periodic()).unwrap();
        assert_eq!(per.len(), 2 * 8 * 4);
        let wall = BoundarySpec { left: BcKind::Neumann, right: BcKind::Neumann, bottom: BcKind::MovingWall(-2.0), top: BcKind::MovingWall(2.0) };
        let l = VelocityLayout::new(&g, &wall).unwrap();
        // all 9×4 u faces; v faces minus the two wall rows
        assert_eq!(l.len(), 9 * 4 + 8 * 3);
        assert!(l.unknown(1, 3, 0).is_none());
        assert!(l.unknown(0, 8, 3).is_some());
    }

    #[test]
    fn unit_coefficient_gives_three_point_difference() {
        let (g, l) = setup(8);
        let ctx = StencilContext::new(&g, &l);
        let one = CellField::constant(&g, Staggering::Cell, 1.0);
        let term: DivTerm = "dx(m dx u)".parse().unwrap();
        let acc = div_term_stencil(&ctx, term, &one, 0, 3, 2);
        let h2 = 64.0;
        let mut e: Vec<(usize, f64)> = acc.entries().to_vec();
        e.sort_by_key(|p| p.0);
        let mut want = vec![(l.unknown(0, 2, 2).unwrap(), h2), (l.unknown(0, 3, 2).unwrap(), -2.0 * h2), (l.unknown(0, 4, 2).unwrap(), h2)];
        want.sort_by_key(|p| p.0);
        assert_eq!(e, want);
    }

    #[test]
    fn product_rule_oracle() {
        // ∂x(m ∂x u) with m = x, u = x² equals 4x
        let err = |n: usize| {
            let g = GridSpec::<f64>::new(n, n, 0.0, 1.0, 0.0, 1.0).unwrap();
            let bc = BoundarySpec::neumann();
            let l = VelocityLayout::new(&g, &bc).unwrap();
            let ctx = StencilContext::new(&g, &l);
            let m = CellField::from_fn(&g, Staggering::Cell, |x, _| x);
            let vel = FaceVectorField::from_fn(&g, |x, _| x * x, |_, _| 0.0);
            let term: DivTerm = "dx(m dx u)".parse().unwrap();
            let mut worst: f64 = 0.0;
            for j in 0..n as isize {
                for i in 2..n as isize - 1 {
                    let acc = div_term_stencil(&ctx, term, &m, 0, i, j);
                    let (x, _) = vel.u.position(&g, i, j);
                    worst = worst.max((apply_row(&l, &acc, &vel) - 4.0 * x).abs());
                }
            }
            worst
        };
        assert!(err(16) < 1e-12 || (err(16) / err(32)).log2() > 1.9);
    }

    #[test]
    fn cross_term_uses_four_point_means() {
        let (g, l) = setup(8);
        let ctx = StencilContext::new(&g, &l);
        let one = CellField::constant(&g, Staggering::Cell, 1.0);
        // ∂x(∂y v) at a u face: differences of v on the neighbouring corners
        // reduce to the four surrounding v samples
        let acc = div_term_stencil(&ctx, "dx(m dy v)".parse().unwrap(), &one, 0, 3, 3);
        assert_eq!(acc.entries().len(), 4);
        let h2 = 64.0;
        for &(k, w) in acc.entries() {
            let (c, i, j) = l.sample(k);
            assert_eq!(c, 1);
            let sx = if i == 3 { 1.0 } else { -1.0 };
            let sy = if j == 4 { 1.0 } else { -1.0 };
            assert_eq!(w, sx * sy * h2);
        }
    }

    #[test]
    fn rejects_unknown_terms() {
        for bad in ["dz(m dx u)", "dx(m dx w)", "dx m dx u", "dx(q dx u)", "dx()"] {
            assert!(matches!(bad.parse::<DivTerm>(), Err(FsiError::Config(_))), "{bad}");
        }
        assert_eq!("dy(m u)".parse::<DivTerm>().unwrap(), DivTerm { outer: 1, inner: None, unknown: 0 });
    }

    #[test]
    fn quadratic_exact_with_unit_coefficient() {
        let g = GridSpec::<f64>::new(10, 10, 0.0, 1.0, 0.0, 1.0).unwrap();
        let bc = BoundarySpec::neumann();
        let l = VelocityLayout::new(&g, &bc).unwrap();
        let ctx = StencilContext::new(&g, &l);
        let one = CellField::constant(&g, Staggering::Cell, 1.0);
        let vel = FaceVectorField::from_fn(&g, |x, y| 3.0 * x * x + x * y, |_, _| 0.0);
        for i in 2..8 {
            let acc = div_term_stencil(&ctx, "dx(m dx u)".parse().unwrap(), &one, 0, i, 4);
            assert!((apply_row(&l, &acc, &vel) - 6.0).abs() < 1e-9);
        }
    }
}
