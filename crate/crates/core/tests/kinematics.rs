use membrane_fsi::grid::{fill_ghosts, BoundarySpec, CellField, FaceVectorField, GridSpec, Staggering};
use membrane_fsi::kinematics::{
    advect_rk3, compute_normals, extrapolate_backward_map, reinitialize, BackwardMap, CellVelocity, LevelSet,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn translation_error(steps: usize) -> f64 {
    let g = GridSpec::<f64>::new(512, 4, 0.0, 1.0, 0.0, 4.0 / 512.0).unwrap();
    let bc = BoundarySpec::periodic();
    let mut q = CellField::from_fn(&g, Staggering::Cell, |x, _| (2.0 * PI * x).sin());
    let exact = q.clone();
    let vel = CellVelocity::from_faces(&g, &FaceVectorField::from_fn(&g, |_, _| 1.0, |_, _| 0.0));
    let dt = 1.0 / steps as f64;
    for _ in 0..steps {
        advect_rk3(&g, &mut q, &bc, &vel, dt).unwrap();
    }
    let n = (g.nx * g.ny) as f64;
    (q.interior().map(|(i, j)| (q.get(i, j) - exact.get(i, j)).powi(2)).sum::<f64>() / n).sqrt()
}

#[test]
fn translation_is_third_order_in_time() {
    let e: Vec<f64> = [512, 1024, 2048].iter().map(|&s| translation_error(s)).collect();
    for w in e.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 2.8, "errors {e:?}");
    }
}

/// Zero crossings of `phi` along grid rows and columns, by linear interpolation.
fn crossings(g: &GridSpec<f64>, phi: &CellField<f64>) -> Vec<(f64, f64)> {
    let mut pts = Vec::new();
    for j in 0..g.ny as isize {
        for i in 0..g.nx as isize {
            let (x, y) = g.cell_center(i, j);
            let p = phi.get(i, j);
            if i + 1 < g.nx as isize {
                let q = phi.get(i + 1, j);
                if p * q < 0.0 {
                    pts.push((x + g.dx() * p / (p - q), y));
                }
            }
            if j + 1 < g.ny as isize {
                let q = phi.get(i, j + 1);
                if p * q < 0.0 {
                    pts.push((x, y + g.dy() * p / (p - q)));
                }
            }
        }
    }
    pts
}

#[test]
fn reinit_repairs_squared_distance() {
    let g = GridSpec::<f64>::new(64, 64, -1.0, 1.0, -1.0, 1.0).unwrap();
    let a = 0.5;
    let mut ls = LevelSet::from_fn(&g, |x, y| x * x + y * y - a * a);
    reinitialize(&g, &mut ls, &BoundarySpec::neumann(), 120, 0.3 * g.dx()).unwrap();
    let band = 3.0 * ls.epsilon;
    let (dx, dy) = (g.dx(), g.dy());
    for (i, j) in ls.phi.interior() {
        if ls.phi.get(i, j).abs() > band {
            continue;
        }
        let gx = (ls.phi.get(i + 1, j) - ls.phi.get(i - 1, j)) / (2.0 * dx);
        let gy = (ls.phi.get(i, j + 1) - ls.phi.get(i, j - 1)) / (2.0 * dy);
        let norm = gx.hypot(gy);
        assert!((0.95..=1.05).contains(&norm), "|grad| = {norm} at ({i}, {j})");
    }
    for (x, y) in crossings(&g, &ls.phi) {
        assert!((x.hypot(y) - a).abs() <= dx * dx, "radius {}", x.hypot(y));
    }
}

#[test]
fn extrapolation_recovers_linear_extension() {
    let g = GridSpec::<f64>::new(64, 64, -1.0, 1.0, -1.0, 1.0).unwrap();
    let ls = LevelSet::from_fn(&g, |x, y| 0.28 * x + 0.96 * y - 0.05);
    let normals = compute_normals(&g, &ls);
    let lin = BackwardMap {
        y1: CellField::from_fn(&g, Staggering::Cell, |x, y| 1.2 * x + 0.3 * y + 0.4),
        y2: CellField::from_fn(&g, Staggering::Cell, |x, y| -0.2 * x + 0.8 * y + 0.7),
    };
    let mut y = lin.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (i, j) in lin.y1.interior() {
        if ls.phi.get(i, j) > ls.epsilon {
            *y.y1.get_mut(i, j) += rng.gen_range(-0.3..0.3);
            *y.y2.get_mut(i, j) += rng.gen_range(-0.3..0.3);
        }
    }
    extrapolate_backward_map(&g, &mut y, &ls, &normals, 40, 0.3 * g.dx());
    let (mut err, mut norm) = (0.0, 0.0);
    for (i, j) in lin.y1.interior() {
        if ls.phi.get(i, j).abs() <= 3.0 * ls.epsilon {
            err += (y.y1.get(i, j) - lin.y1.get(i, j)).powi(2) + (y.y2.get(i, j) - lin.y2.get(i, j)).powi(2);
            norm += lin.y1.get(i, j).powi(2) + lin.y2.get(i, j).powi(2);
        }
    }
    let rel = (err / norm).sqrt();
    assert!(rel <= 0.05, "relative error {rel}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn advection_preserves_constants(c in -5.0f64..5.0, ux in -1.0f64..1.0, uy in -1.0f64..1.0) {
        let g = GridSpec::<f64>::unit_square(12).unwrap();
        let bc = BoundarySpec::neumann();
        let mut q = CellField::constant(&g, Staggering::Cell, c);
        let vel = CellVelocity::from_faces(&g, &FaceVectorField::from_fn(&g, |_, _| ux, |_, _| uy));
        advect_rk3(&g, &mut q, &bc, &vel, 0.02).unwrap();
        prop_assert!(q.interior_values().iter().all(|&v| v == c));
    }

    #[test]
    fn advection_respects_maximum_principle(theta in 0.0f64..(2.0 * PI), width in 0.1f64..0.3, cfl in 0.05f64..0.5) {
        let g = GridSpec::<f64>::unit_square(64).unwrap();
        let bc = BoundarySpec::neumann();
        let mut q = CellField::from_fn(&g, Staggering::Cell, |x, _| ((x - 0.5) / width).tanh());
        fill_ghosts(&mut q, &bc).unwrap();
        let (lo, hi) = q.interior_values().iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
        let vel = CellVelocity::from_faces(&g, &FaceVectorField::from_fn(&g, |_, _| theta.cos(), |_, _| theta.sin()));
        let dt = cfl * g.dx();
        for _ in 0..10 {
            advect_rk3(&g, &mut q, &bc, &vel, dt).unwrap();
        }
        for v in q.interior_values() {
            prop_assert!(v >= lo - 1e-10 && v <= hi + 1e-10, "{v} outside [{lo}, {hi}]");
        }
    }

    #[test]
    fn normals_have_unit_length(cx in -0.2f64..0.2, cy in -0.2f64..0.2, ax in 0.3f64..0.6, ay in 0.3f64..0.6) {
        let g = GridSpec::<f64>::new(24, 24, -1.0, 1.0, -1.0, 1.0).unwrap();
        let ls = LevelSet::from_fn(&g, |x, y| ((x - cx) / ax).powi(2) + ((y - cy) / ay).powi(2) - 1.0);
        let n = compute_normals(&g, &ls);
        for (i, j) in n.n1.interior() {
            prop_assert!((n.n1.get(i, j).hypot(n.n2.get(i, j)) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn reinit_keeps_contour_within_a_cell(cx in -0.1f64..0.1, cy in -0.1f64..0.1, ax in 0.35f64..0.6, ay in 0.35f64..0.6) {
        let g = GridSpec::<f64>::new(48, 48, -1.0, 1.0, -1.0, 1.0).unwrap();
        let f = |x: f64, y: f64| ((x - cx) / ax).powi(2) + ((y - cy) / ay).powi(2) - 1.0;
        let mut ls = LevelSet::from_fn(&g, f);
        let before = crossings(&g, &ls.phi);
        reinitialize(&g, &mut ls, &BoundarySpec::neumann(), 60, 0.3 * g.dx()).unwrap();
        let after = crossings(&g, &ls.phi);
        for &(x, y) in &after {
            let d = before.iter().map(|&(a, b)| (x - a).hypot(y - b)).fold(f64::MAX, f64::min);
            prop_assert!(d <= g.dx(), "contour moved by {d}");
        }
    }

    #[test]
    fn extrapolation_never_touches_interior(seed in 0u64..1000) {
        let g = GridSpec::<f64>::new(24, 24, -1.0, 1.0, -1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rng.gen_range(0.3..0.6);
        let ls = LevelSet::circle(&g, 0.0, 0.0, r);
        let normals = compute_normals(&g, &ls);
        let mut y = BackwardMap::identity(&g);
        for (i, j) in ls.phi.interior() {
            *y.y1.get_mut(i, j) += rng.gen_range(-0.1..0.1);
            *y.y2.get_mut(i, j) += rng.gen_range(-0.1..0.1);
        }
        let before = y.clone();
        extrapolate_backward_map(&g, &mut y, &ls, &normals, 10, 0.3 * g.dx());
        for (i, j) in ls.phi.interior() {
            if ls.phi.get(i, j) <= 0.0 {
                prop_assert_eq!(y.y1.get(i, j), before.y1.get(i, j));
                prop_assert_eq!(y.y2.get(i, j), before.y2.get(i, j));
            }
        }
    }
}
