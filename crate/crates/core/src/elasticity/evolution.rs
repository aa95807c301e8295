//! Stress evolution right-hand side, its semi-implicit split, and residual
//! checks of the transport identities satisfied by `Z` and `σ`.

use super::law::ConstitutiveLaw;
use super::tensor::{Mat2, Sym2, SymTensorField, TensorField};
use crate::grid::{velocity_at_cells, CellField, FaceVectorField, GridSpec};
use crate::kinematics::Normals;
use crate::scalar::Real;

/// `[∇u]_{cd} = ∂_d u_c` at cell centres from a staggered velocity with
/// filled ghosts.
pub fn velocity_gradient_at_cells<T: Real>(grid: &GridSpec<T>, vel: &FaceVectorField<T>) -> TensorField<T> {
    let (dx, dy) = (grid.dx(), grid.dy());
    let (two_dx, two_dy) = (T::lit(2.0) * dx, T::lit(2.0) * dy);
    let (uc, vc) = velocity_at_cells(grid, vel);
    let mut g = TensorField::zeros(grid);
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            g.set(
                i,
                j,
                Mat2::new(
                    (vel.u.get(i + 1, j) - vel.u.get(i, j)) / dx,
                    (uc.get(i, j + 1) - uc.get(i, j - 1)) / two_dy,
                    (vc.get(i + 1, j) - vc.get(i - 1, j)) / two_dx,
                    (vel.v.get(i, j + 1) - vel.v.get(i, j)) / dy,
                ),
            );
        }
    }
    g
}

/// `𝒯 = (f′(Z) Z [∇u]:𝒞) 𝒞 − 2 f(Z) ([∇u]n·n) (n⊗n)` with `𝒞 = I − n⊗n`.
pub fn t_operator<T: Real>(z: T, n: [T; 2], grad_u: &Mat2<T>, law: &impl ConstitutiveLaw<T>) -> Sym2<T> {
    let c = Sym2::projector(n);
    let gc = grad_u.ddot(&c.to_mat());
    let gn = grad_u.apply(n);
    let gnn = gn[0] * n[0] + gn[1] * n[1];
    c.scale(law.f_prime(z) * z * gc).sub(&Sym2::outer(n).scale(T::lit(2.0) * law.f(z) * gnn))
}

/// Right-hand side of `∂tσ + (u·∇)σ = …`:
/// `𝒯 + f(Z) ([∇u]ᵀ(n⊗n) + (n⊗n)[∇u])`.
pub fn stress_evolution_rhs<T: Real>(z: T, n: [T; 2], grad_u: &Mat2<T>, law: &impl ConstitutiveLaw<T>) -> Sym2<T> {
    let nn = Sym2::outer(n).to_mat();
    let m = grad_u.transpose().mul(&nn).add(&nn.mul(grad_u));
    t_operator(z, n, grad_u, law).add(&Sym2::sym(&m).scale(law.f(z)))
}

/// [`stress_evolution_rhs`] at every cell.
pub fn stress_evolution_rhs_field<T: Real>(
    grid: &GridSpec<T>,
    z: &CellField<T>,
    normals: &Normals<T>,
    grad_u: &TensorField<T>,
    law: &impl ConstitutiveLaw<T>,
) -> SymTensorField<T> {
    let mut out = SymTensorField::zeros(grid);
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            let n = [normals.n1.get(i, j), normals.n2.get(i, j)];
            out.set(i, j, stress_evolution_rhs(z.get(i, j), n, &grad_u.get(i, j), law));
        }
    }
    out
}

/// `(u·∇)q` at cell centres by central differences.
fn advective_derivative<T: Real>(grid: &GridSpec<T>, q: &CellField<T>, uc: &CellField<T>, vc: &CellField<T>, i: isize, j: isize) -> T {
    let (two_dx, two_dy) = (T::lit(2.0) * grid.dx(), T::lit(2.0) * grid.dy());
    uc.get(i, j) * (q.get(i + 1, j) - q.get(i - 1, j)) / two_dx + vc.get(i, j) * (q.get(i, j + 1) - q.get(i, j - 1)) / two_dy
}

/// Residual of `∂tZ + u·∇Z = Z [∇u]:𝒞` from two states `h` apart.
/// `z0` needs one ghost layer.
pub fn z_evolution_residual<T: Real>(
    grid: &GridSpec<T>,
    z0: &CellField<T>,
    z1: &CellField<T>,
    h: T,
    vel: &FaceVectorField<T>,
    normals: &Normals<T>,
) -> CellField<T> {
    let (uc, vc) = velocity_at_cells(grid, vel);
    let gu = velocity_gradient_at_cells(grid, vel);
    let mut r = CellField::cell(grid);
    r.map_interior(|i, j, _| {
        let n = [normals.n1.get(i, j), normals.n2.get(i, j)];
        let c = Sym2::projector(n).to_mat();
        let z = z0.get(i, j);
        (z1.get(i, j) - z) / h + advective_derivative(grid, z0, &uc, &vc, i, j) - z * gu.get(i, j).ddot(&c)
    });
    r
}

/// Residual of the stress evolution equation from two states `h` apart,
/// with the right-hand side evaluated at the first state. `sigma0` needs one
/// ghost layer.
#[allow(clippy::too_many_arguments)]
pub fn stress_evolution_residual<T: Real>(
    grid: &GridSpec<T>,
    sigma0: &SymTensorField<T>,
    sigma1: &SymTensorField<T>,
    h: T,
    vel: &FaceVectorField<T>,
    z0: &CellField<T>,
    normals0: &Normals<T>,
    law: &impl ConstitutiveLaw<T>,
) -> SymTensorField<T> {
    let (uc, vc) = velocity_at_cells(grid, vel);
    let gu = velocity_gradient_at_cells(grid, vel);
    let rhs = stress_evolution_rhs_field(grid, z0, normals0, &gu, law);
    let mut r = SymTensorField::zeros(grid);
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            let comp = |a: &CellField<T>, b: &CellField<T>, c: &CellField<T>| {
                (b.get(i, j) - a.get(i, j)) / h + advective_derivative(grid, a, &uc, &vc, i, j) - c.get(i, j)
            };
            r.set(
                i,
                j,
                Sym2::new(
                    comp(&sigma0.xx, &sigma1.xx, &rhs.xx),
                    comp(&sigma0.xy, &sigma1.xy, &rhs.xy),
                    comp(&sigma0.yy, &sigma1.yy, &rhs.yy),
                ),
            );
        }
    }
    r
}
