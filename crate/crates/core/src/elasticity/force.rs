use super::law::ConstitutiveLaw;
use super::tensor::{Sym2, SymTensorField};
use crate::grid::{BoundarySpec, CellField, FaceVectorField, GridSpec};
use crate::kinematics::{smooth_delta, LevelSet, Normals};
use crate::scalar::Real;

/// `σ = f(Z) (I − n⊗n)` per cell, ghosts zero-gradient.
pub fn compute_stress<T: Real>(
    grid: &GridSpec<T>,
    z: &CellField<T>,
    normals: &Normals<T>,
    law: &impl ConstitutiveLaw<T>,
) -> SymTensorField<T> {
    let mut s = SymTensorField::zeros(grid);
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            let n = [normals.n1.get(i, j), normals.n2.get(i, j)];
            s.set(i, j, Sym2::projector(n).scale(law.f(z.get(i, j))));
        }
    }
    let _ = s.fill_ghosts(&BoundarySpec::neumann());
    s
}

/// `F = δ_ε(φ) div σ` on every stored face. `δ_ε` uses φ averaged to the
/// face; `σ` and `φ` need one ghost layer.
pub fn elastic_force<T: Real>(grid: &GridSpec<T>, sigma: &SymTensorField<T>, ls: &LevelSet<T>) -> FaceVectorField<T> {
    let (dx, dy) = (grid.dx(), grid.dy());
    let (two_dx, two_dy) = (T::lit(2.0) * dx, T::lit(2.0) * dy);
    let half = T::lit(0.5);
    let phi = &ls.phi;
    let mut f = FaceVectorField::zeros(grid);

    f.u.map_interior(|i, j, _| {
        let delta = smooth_delta(half * (phi.get(i - 1, j) + phi.get(i, j)), ls.epsilon);
        if delta == T::zero() {
            return T::zero();
        }
        let sxy = |jj: isize| half * (sigma.xy.get(i - 1, jj) + sigma.xy.get(i, jj));
        let div = (sigma.xx.get(i, j) - sigma.xx.get(i - 1, j)) / dx + (sxy(j + 1) - sxy(j - 1)) / two_dy;
        delta * div
    });
    f.v.map_interior(|i, j, _| {
        let delta = smooth_delta(half * (phi.get(i, j - 1) + phi.get(i, j)), ls.epsilon);
        if delta == T::zero() {
            return T::zero();
        }
        let sxy = |ii: isize| half * (sigma.xy.get(ii, j - 1) + sigma.xy.get(ii, j));
        let div = (sxy(i + 1) - sxy(i - 1)) / two_dx + (sigma.yy.get(i, j) - sigma.yy.get(i, j - 1)) / dy;
        delta * div
    });
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elasticity::EvanSkalak;
    use crate::grid::Staggering;
    use crate::kinematics::compute_normals;

    #[test]
    fn stress_hand_value_and_normal_annihilation() {
        let g = GridSpec::<f64>::unit_square(8).unwrap();
        let ls = LevelSet::from_fn(&g, |_, y| y - 0.5);
        let n = compute_normals(&g, &ls);
        let z = CellField::constant(&g, Staggering::Cell, 2.0);
        let s = compute_stress(&g, &z, &n, &EvanSkalak { stiffness: 1.0 });
        assert_eq!(s.get(2, 3), Sym2::new(2.0, 0.0, 0.0));
        let unit = compute_stress(&g, &CellField::constant(&g, Staggering::Cell, 1.0), &n, &EvanSkalak { stiffness: 1.0 });
        assert_eq!(unit.max_abs(), 0.0);
    }

    #[test]
    fn force_of_constant_and_linear_stress() {
        let g = GridSpec::<f64>::unit_square(8).unwrap();
        let ls = LevelSet::from_fn(&g, |_, _| 0.0);
        let mut s = SymTensorField::zeros(&g);
        s.xx = CellField::constant(&g, Staggering::Cell, 3.0);
        s.xy = CellField::constant(&g, Staggering::Cell, -1.0);
        let f = elastic_force(&g, &s, &ls);
        assert_eq!(f.max_abs(), 0.0);

        s.xx = CellField::from_fn(&g, Staggering::Cell, |x, _| x);
        s.xy = CellField::cell(&g);
        let f = elastic_force(&g, &s, &ls);
        for (i, j) in f.u.interior() {
            assert!((f.u.get(i, j) - 1.0 / ls.epsilon).abs() < 1e-10);
        }
        assert_eq!(f.v.max_abs(), 0.0);
    }
}
