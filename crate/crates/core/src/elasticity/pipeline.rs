//! Deformation tensors and area variation from the backward map.

use super::tensor::{Mat2, Sym2, SymTensorField, TensorField};
use crate::grid::{fill_ghosts, BoundarySpec, CellField, GridSpec};
use crate::kinematics::{AnalyticLevelSet, BackwardMap, LevelSet, Normals};
use crate::scalar::Real;

/// `|det ∇Y|` below this marks a cell as degenerate.
pub const DET_FLOOR: f64 = 1e-10;
/// `(Bn)·n` below this marks a cell as degenerate.
pub const BNN_FLOOR: f64 = 1e-12;

/// Everything derived from `∇Y` and the normals in one step.
#[derive(Debug, Clone)]
pub struct DeformationState<T> {
    pub grad_y: TensorField<T>,
    pub b: SymTensorField<T>,
    pub a: SymTensorField<T>,
    pub z: CellField<T>,
    /// `J = 1 / det ∇Y`.
    pub jacobian: CellField<T>,
    /// Cells that inherited the previous tensors.
    pub degenerate: Vec<(isize, isize)>,
}

/// Central-difference `∂_d Y_c` at cell centres. `ymap` ghosts must be filled.
pub fn compute_grad_y<T: Real>(grid: &GridSpec<T>, ymap: &BackwardMap<T>) -> TensorField<T> {
    let (hx, hy) = (T::lit(2.0) * grid.dx(), T::lit(2.0) * grid.dy());
    let mut g = TensorField::zeros(grid);
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            let d = |f: &CellField<T>| ((f.get(i + 1, j) - f.get(i - 1, j)) / hx, (f.get(i, j + 1) - f.get(i, j - 1)) / hy);
            let (a, b) = d(&ymap.y1);
            let (c, e) = d(&ymap.y2);
            g.set(i, j, Mat2::new(a, b, c, e));
        }
    }
    g
}

/// `B = ∇Y⁻¹ ∇Y⁻ᵀ`. Near-singular cells reuse `previous` (or the identity)
/// and are reported.
pub fn compute_b<T: Real>(
    grid: &GridSpec<T>,
    grad_y: &TensorField<T>,
    previous: Option<&SymTensorField<T>>,
) -> (SymTensorField<T>, Vec<(isize, isize)>) {
    let mut b = SymTensorField::zeros(grid);
    let mut bad = Vec::new();
    let tol = T::lit(DET_FLOOR);
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            let v = match grad_y.get(i, j).inverse(tol) {
                Some(g) => Sym2::new(
                    g.xx * g.xx + g.xy * g.xy,
                    g.xx * g.yx + g.xy * g.yy,
                    g.yx * g.yx + g.yy * g.yy,
                ),
                None => {
                    bad.push((i, j));
                    previous.map_or_else(Sym2::identity, |p| p.get(i, j))
                }
            };
            b.set(i, j, v);
        }
    }
    (b, bad)
}

/// Pointwise surface tensor `B − (Bn)⊗(Bn)/((Bn)·n)`, `None` when `(Bn)·n`
/// is too small.
#[inline]
pub fn surface_tensor<T: Real>(b: Sym2<T>, n: [T; 2]) -> Option<Sym2<T>> {
    let bn = b.apply(n);
    let bnn = bn[0] * n[0] + bn[1] * n[1];
    if bnn < T::lit(BNN_FLOOR) {
        return None;
    }
    Some(b.sub(&Sym2::outer(bn).scale(T::one() / bnn)))
}

/// Surface tensor field; degenerate cells reuse `previous` (or `I − n⊗n`).
pub fn compute_a<T: Real>(
    grid: &GridSpec<T>,
    b: &SymTensorField<T>,
    normals: &Normals<T>,
    previous: Option<&SymTensorField<T>>,
) -> (SymTensorField<T>, Vec<(isize, isize)>) {
    let mut a = SymTensorField::zeros(grid);
    let mut bad = Vec::new();
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            let n = [normals.n1.get(i, j), normals.n2.get(i, j)];
            let v = surface_tensor(b.get(i, j), n).unwrap_or_else(|| {
                bad.push((i, j));
                previous.map_or_else(|| Sym2::projector(n), |p| p.get(i, j))
            });
            a.set(i, j, v);
        }
    }
    (a, bad)
}

/// `Z = √Tr 𝒜`, round-off negatives clamped to zero. Ghosts are zero-gradient.
pub fn compute_z<T: Real>(grid: &GridSpec<T>, a: &SymTensorField<T>) -> CellField<T> {
    let mut z = CellField::cell(grid);
    z.map_interior(|i, j, _| a.get(i, j).trace().max(T::zero()).sqrt());
    let _ = fill_ghosts(&mut z, &BoundarySpec::neumann());
    z
}

/// `J = 1 / det ∇Y`; cells with a degenerate gradient get 1.
pub fn compute_jacobian<T: Real>(grid: &GridSpec<T>, grad_y: &TensorField<T>) -> CellField<T> {
    let mut jac = CellField::cell(grid);
    let tol = T::lit(DET_FLOOR);
    jac.map_interior(|i, j, _| {
        let d = grad_y.get(i, j).det();
        if d.abs() < tol {
            T::one()
        } else {
            T::one() / d
        }
    });
    jac
}

/// Alternative area variation `Z = J |∇φ| / |∇φ0(Y)|` with `φ0` in closed
/// form. `ls.phi` ghosts must be filled.
pub fn compute_z_alt<T: Real>(
    grid: &GridSpec<T>,
    ls: &LevelSet<T>,
    ymap: &BackwardMap<T>,
    grad_y: &TensorField<T>,
    phi0: &impl AnalyticLevelSet<T>,
) -> CellField<T> {
    let jac = compute_jacobian(grid, grad_y);
    let (hx, hy) = (T::lit(2.0) * grid.dx(), T::lit(2.0) * grid.dy());
    let phi = &ls.phi;
    let mut z = CellField::cell(grid);
    z.map_interior(|i, j, _| {
        let gx = (phi.get(i + 1, j) - phi.get(i - 1, j)) / hx;
        let gy = (phi.get(i, j + 1) - phi.get(i, j - 1)) / hy;
        let (ax, ay) = phi0.gradient(ymap.y1.get(i, j), ymap.y2.get(i, j));
        let denom = ax.hypot(ay);
        if denom == T::zero() {
            T::one()
        } else {
            jac.get(i, j) * gx.hypot(gy) / denom
        }
    });
    z
}

/// Runs `∇Y → B → 𝒜 → Z` in one go.
pub fn deformation_state<T: Real>(
    grid: &GridSpec<T>,
    ymap: &BackwardMap<T>,
    normals: &Normals<T>,
    previous: Option<&DeformationState<T>>,
) -> DeformationState<T> {
    let grad_y = compute_grad_y(grid, ymap);
    let (b, mut degenerate) = compute_b(grid, &grad_y, previous.map(|p| &p.b));
    let (a, bad_a) = compute_a(grid, &b, normals, previous.map(|p| &p.a));
    degenerate.extend(bad_a);
    degenerate.sort_unstable();
    degenerate.dedup();
    let z = compute_z(grid, &a);
    let jacobian = compute_jacobian(grid, &grad_y);
    DeformationState { grad_y, b, a, z, jacobian, degenerate }
}
