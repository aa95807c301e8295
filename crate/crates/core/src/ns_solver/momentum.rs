//! Prediction-step momentum systems for the explicit and semi-implicit
//! couplings.

use super::sparse::{CsrMatrix, RowAccumulator, SparseSystem};
use super::stencil::{cell_or_corner, sample_velocity, StencilContext, VelocityLayout};
use crate::elasticity::{ConstitutiveLaw, SymTensorField};
use crate::grid::{fill_ghosts, BoundarySpec, CellField, FaceVectorField, GridSpec, Staggering};
use crate::kinematics::{smooth_delta, LevelSet, Normals};
use crate::scalar::Real;

/// Time-level-n flow data entering the prediction step. All fields must
/// have their ghosts filled.
pub struct MomentumInputs<'a, T> {
    pub grid: &'a GridSpec<T>,
    pub layout: &'a VelocityLayout<T>,
    /// Advecting velocity `uⁿ`.
    pub vel: &'a FaceVectorField<T>,
    pub p: &'a CellField<T>,
    pub rho: &'a CellField<T>,
    pub mu: &'a CellField<T>,
    /// Explicit elastic force `δ_ε div σⁿ` on faces.
    pub force: &'a FaceVectorField<T>,
    pub dt: T,
}

/// Membrane data at time n needed by the tensorial viscosity terms. All
/// fields must have their ghosts filled.
pub struct MembraneInputs<'a, T, L> {
    pub ls: &'a LevelSet<T>,
    pub z: &'a CellField<T>,
    pub normals: &'a Normals<T>,
    pub sigma: &'a SymTensorField<T>,
    pub law: &'a L,
}

/// Face-averaged cell quantity at the face holding row component `a`.
#[inline]
fn face_mean<T: Real>(f: &CellField<T>, a: usize, i: isize, j: isize) -> T {
    let (pi, pj) = if a == 0 { (i - 1, j) } else { (i, j - 1) };
    T::lit(0.5) * (f.get(pi, pj) + f.get(i, j))
}

fn stag(a: usize) -> Staggering {
    if a == 0 {
        Staggering::XFace
    } else {
        Staggering::YFace
    }
}

/// `ρ/Δt u + ρ div(uⁿ⊗u) − div(2μ D(u))` row and its explicit right-hand side.
fn explicit_row<T: Real>(inp: &MomentumInputs<'_, T>, ctx: &StencilContext<'_, T>, k: usize) -> (RowAccumulator<T>, T) {
    let (a, i, j) = inp.layout.sample(k);
    let row = stag(a).lattice(i, j);
    let rho = face_mean(inp.rho, a, i, j);
    let mut acc = RowAccumulator::new();
    acc.add(k, rho / inp.dt);
    for b in 0..2 {
        ctx.add_div_term(&mut acc, row, b, |x, y| sample_velocity(inp.vel, b, x, y), a, None, rho);
    }
    for b in 0..2 {
        ctx.add_div_term(&mut acc, row, b, |x, y| cell_or_corner(inp.mu, x, y), a, Some(b), -T::one());
        ctx.add_div_term(&mut acc, row, b, |x, y| cell_or_corner(inp.mu, x, y), b, Some(a), -T::one());
    }
    let (h, (pi, pj)) = if a == 0 { (inp.grid.dx(), (i - 1, j)) } else { (inp.grid.dy(), (i, j - 1)) };
    let grad_p = (inp.p.get(i, j) - inp.p.get(pi, pj)) / h;
    let rhs = rho / inp.dt * inp.vel.component(a).get(i, j) - grad_p + inp.force.component(a).get(i, j);
    (acc, rhs)
}

fn finish<T: Real>(rows: Vec<(RowAccumulator<T>, T)>) -> SparseSystem<T> {
    let mut rhs = Vec::with_capacity(rows.len());
    let mut entries = Vec::with_capacity(rows.len());
    for (acc, r) in rows {
        let (e, c) = acc.into_parts();
        rhs.push(r - c);
        entries.push(e);
    }
    SparseSystem { matrix: CsrMatrix::from_rows(entries), rhs }
}

/// Linear system for `u⋆` of the explicit coupling: centred convection by
/// the frozen `uⁿ`, implicit `2μD(u⋆)`, with `∇pⁿ` and the elastic force on
/// the right-hand side.
pub fn assemble_momentum_explicit<T: Real>(inp: &MomentumInputs<'_, T>) -> SparseSystem<T> {
    let ctx = StencilContext::new(inp.grid, inp.layout);
    finish((0..inp.layout.len()).map(|k| explicit_row(inp, &ctx, k)).collect())
}

/// Cell coefficient fields shared by the tensorial viscosity terms.
struct BandCoefficients<T> {
    /// `f(Z) n⊗n` at cells.
    g: [CellField<T>; 3],
    f: CellField<T>,
    fpz: CellField<T>,
}

impl<T: Real> BandCoefficients<T> {
    fn new<L: ConstitutiveLaw<T>>(grid: &GridSpec<T>, m: &MembraneInputs<'_, T, L>) -> Self {
        let mut g = [CellField::cell(grid), CellField::cell(grid), CellField::cell(grid)];
        let mut f = CellField::cell(grid);
        let mut fpz = CellField::cell(grid);
        let neumann = BoundarySpec::neumann();
        for j in 0..grid.ny as isize {
            for i in 0..grid.nx as isize {
                let z = m.z.get(i, j);
                let (fz, fp) = (m.law.f(z), m.law.f_prime(z));
                f.set(i, j, fz);
                fpz.set(i, j, fp * z);
                let (n1, n2) = (m.normals.n1.get(i, j), m.normals.n2.get(i, j));
                g[0].set(i, j, fz * n1 * n1);
                g[1].set(i, j, fz * n1 * n2);
                g[2].set(i, j, fz * n2 * n2);
            }
        }
        for c in g.iter_mut().chain([&mut f, &mut fpz]) {
            fill_ghosts(c, &neumann).expect("neumann spec is valid");
        }
        Self { g, f, fpz }
    }

    fn g(&self, a: usize, c: usize) -> &CellField<T> {
        &self.g[a + c]
    }
}

/// Linear system for `u⋆` of the semi-implicit coupling: the explicit system
/// plus, inside the interface band, the implicit tensorial viscosity
/// `−δ_ε Δt div[G∇u⋆ + ∇u⋆ᵀG]` with `G = f(Zⁿ) n⊗n`, the implicit
/// `−δ_ε Δt div 𝒯(Zⁿ, ∇u⋆, n)` and `+δ_ε Δt div[(u⋆·∇)σⁿ]`. Like the
/// elastic force, `δ_ε` is evaluated on the row's face.
///
/// Terms with a vanishing coefficient are never inserted, so a zero-stiffness
/// law reproduces [`assemble_momentum_explicit`] bit for bit.
pub fn assemble_momentum_semi_implicit<T: Real, L: ConstitutiveLaw<T>>(
    inp: &MomentumInputs<'_, T>,
    membrane: &MembraneInputs<'_, T, L>,
) -> SparseSystem<T> {
    let ctx = StencilContext::new(inp.grid, inp.layout);
    let coef = BandCoefficients::new(inp.grid, membrane);
    let g = [[coef.g(0, 0), coef.g(0, 1)], [coef.g(1, 0), coef.g(1, 1)]];
    let n = [&membrane.normals.n1, &membrane.normals.n2];
    let s = [
        [membrane.sigma.component(0, 0), membrane.sigma.component(0, 1)],
        [membrane.sigma.component(1, 0), membrane.sigma.component(1, 1)],
    ];
    let m4 = |a: usize, b: usize, c: usize, d: usize, i: isize, j: isize| {
        let nv = [n[0].get(i, j), n[1].get(i, j)];
        let proj = |p: usize, q: usize| if p == q { T::one() - nv[p] * nv[q] } else { -nv[p] * nv[q] };
        coef.fpz.get(i, j) * proj(a, b) * proj(c, d) - T::lit(2.0) * coef.f.get(i, j) * nv[a] * nv[b] * nv[c] * nv[d]
    };
    let rows = (0..inp.layout.len())
        .map(|k| {
            let (mut acc, rhs) = explicit_row(inp, &ctx, k);
            let (a, i, j) = inp.layout.sample(k);
            let row = stag(a).lattice(i, j);
            let delta = smooth_delta(face_mean(&membrane.ls.phi, a, i, j), membrane.ls.epsilon);
            if delta != T::zero() {
                let w = delta * inp.dt;
                ctx.add_tensor_viscosity(&mut acc, row, a, &g, -w);
                ctx.add_fourth_order(&mut acc, row, a, &m4, -w);
                ctx.add_tensor_transport(&mut acc, row, a, &s, w);
            }
            (acc, rhs)
        })
        .collect();
    finish(rows)
}
