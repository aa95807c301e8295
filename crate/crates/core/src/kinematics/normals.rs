use super::reinit::LevelSet;
use crate::grid::{fill_ghosts, BoundarySpec, CellField, GridSpec};
use crate::scalar::Real;

/// Gradient magnitudes below this are treated as degenerate.
pub const NORMAL_FLOOR: f64 = 1e-8;

/// Unit normal field `∇φ/|∇φ|` at cell centres.
#[derive(Debug, Clone)]
pub struct Normals<T> {
    pub n1: CellField<T>,
    pub n2: CellField<T>,
    /// Cells whose gradient fell below [`NORMAL_FLOOR`] and were patched
    /// from a neighbour.
    pub degenerate: usize,
}

/// Central-difference normals. `ls.phi` must have its ghosts filled.
pub fn compute_normals<T: Real>(grid: &GridSpec<T>, ls: &LevelSet<T>) -> Normals<T> {
    let phi = &ls.phi;
    let (dx2, dy2) = (T::lit(2.0) * grid.dx(), T::lit(2.0) * grid.dy());
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let mut n1 = CellField::cell(grid);
    let mut n2 = CellField::cell(grid);
    let mut valid = vec![false; grid.nx * grid.ny];
    let floor = T::lit(NORMAL_FLOOR);
    for j in 0..ny {
        for i in 0..nx {
            let gx = (phi.get(i + 1, j) - phi.get(i - 1, j)) / dx2;
            let gy = (phi.get(i, j + 1) - phi.get(i, j - 1)) / dy2;
            let norm = gx.hypot(gy);
            if norm >= floor {
                n1.set(i, j, gx / norm);
                n2.set(i, j, gy / norm);
                valid[(i + j * nx) as usize] = true;
            }
        }
    }
    let mut degenerate = 0;
    for j in 0..ny {
        for i in 0..nx {
            if valid[(i + j * nx) as usize] {
                continue;
            }
            degenerate += 1;
            let (a, b) = nearest_valid(&valid, nx, ny, i, j)
                .map(|(si, sj)| (n1.get(si, sj), n2.get(si, sj)))
                .unwrap_or((T::one(), T::zero()));
            n1.set(i, j, a);
            n2.set(i, j, b);
        }
    }
    if degenerate > 0 {
        log::debug!("{degenerate} degenerate normal(s) substituted");
    }
    let bc = BoundarySpec::neumann();
    // Neumann ghosts cannot fail validation.
    let _ = fill_ghosts(&mut n1, &bc);
    let _ = fill_ghosts(&mut n2, &bc);
    Normals { n1, n2, degenerate }
}

/// Closest valid cell in growing square rings, scanning in row order.
fn nearest_valid(valid: &[bool], nx: isize, ny: isize, i: isize, j: isize) -> Option<(isize, isize)> {
    for r in 1..nx.max(ny) {
        let mut best: Option<((isize, isize), isize)> = None;
        for sj in (j - r).max(0)..=(j + r).min(ny - 1) {
            for si in (i - r).max(0)..=(i + r).min(nx - 1) {
                if (si - i).abs().max((sj - j).abs()) != r || !valid[(si + sj * nx) as usize] {
                    continue;
                }
                let d = (si - i).pow(2) + (sj - j).pow(2);
                if best.map_or(true, |(_, bd)| d < bd) {
                    best = Some(((si, sj), d));
                }
            }
        }
        if let Some((p, _)) = best {
            return Some(p);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_normals() {
        let g = GridSpec::<f64>::unit_square(16).unwrap();
        let n = compute_normals(&g, &LevelSet::from_fn(&g, |x, _| x));
        assert!(n.n1.interior_values().iter().all(|&v| v == 1.0));
        assert!(n.n2.interior_values().iter().all(|&v| v == 0.0));
        let n = compute_normals(&g, &LevelSet::from_fn(&g, |x, y| (3.0 * x + 4.0 * y) / 5.0));
        for (i, j) in n.n1.interior() {
            assert!((n.n1.get(i, j) - 0.6).abs() < 1e-12 && (n.n2.get(i, j) - 0.8).abs() < 1e-12);
        }
        assert_eq!(n.degenerate, 0);
    }

    #[test]
    fn radial_normals_second_order() {
        let err = |m: usize| {
            let g = GridSpec::<f64>::new(m, m, -1.0, 1.0, -1.0, 1.0).unwrap();
            let n = compute_normals(&g, &LevelSet::circle(&g, 0.0, 0.0, 0.5));
            n.n1.interior()
                .filter_map(|(i, j)| {
                    let (x, y) = g.cell_center(i, j);
                    let r = x.hypot(y);
                    // truncation error scales like dx²/r²
                    (r > 0.3).then(|| r * r * (n.n1.get(i, j) - x / r).abs().max((n.n2.get(i, j) - y / r).abs()))
                })
                .fold(0.0, f64::max)
        };
        let rate = (err(32) / err(64)).log2();
        assert!(rate > 1.8, "rate {rate}");
    }

    #[test]
    fn degenerate_cells_are_patched() {
        let g = GridSpec::<f64>::unit_square(8).unwrap();
        let ls = LevelSet::from_fn(&g, |x, _| if x < 0.5 { 0.0 } else { x - 0.5 });
        let n = compute_normals(&g, &ls);
        assert!(n.degenerate > 0);
        for (i, j) in n.n1.interior() {
            assert!((n.n1.get(i, j).hypot(n.n2.get(i, j)) - 1.0).abs() < 1e-12);
        }
    }
}
