use crate::grid::{CellField, GHOST};
use crate::scalar::Real;

/// Linear extrapolation into the ghost layers of the sides flagged in
/// `sides` (left, right, bottom, top). Other ghosts are left as they are.
pub(crate) fn fill_linear_ghosts<T: Real>(f: &mut CellField<T>, sides: [bool; 4]) {
    let (ni, nj) = (f.ni() as isize, f.nj() as isize);
    let g = GHOST as isize;
    let two = T::lit(2.0);
    for j in 0..nj {
        for k in 1..=g {
            if sides[0] {
                let v = two * f.get(1 - k, j) - f.get(2 - k, j);
                f.set(-k, j, v);
            }
            if sides[1] {
                let v = two * f.get(ni - 2 + k, j) - f.get(ni - 3 + k, j);
                f.set(ni - 1 + k, j, v);
            }
        }
    }
    for i in -g..ni + g {
        for k in 1..=g {
            if sides[2] {
                let v = two * f.get(i, 1 - k) - f.get(i, 2 - k);
                f.set(i, -k, v);
            }
            if sides[3] {
                let v = two * f.get(i, nj - 2 + k) - f.get(i, nj - 3 + k);
                f.set(i, nj - 1 + k, v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{GridSpec, Staggering};

    #[test]
    fn linear_data_extends_exactly() {
        let g = GridSpec::<f64>::unit_square(8).unwrap();
        let exact = CellField::from_fn(&g, Staggering::Cell, |x, y| 2.0 * x - y + 0.5);
        let mut f = CellField::cell(&g);
        f.copy_interior_from(&exact);
        fill_linear_ghosts(&mut f, [true; 4]);
        for (a, b) in f.raw().iter().zip(exact.raw()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
