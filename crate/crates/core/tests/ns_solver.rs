use membrane_fsi::bench::{init_shear_case, step_config, CaseConfig};
use membrane_fsi::grid::{fill_ghosts, BoundarySpec, CellField, FaceVectorField, GridSpec, Staggering};
use membrane_fsi::kinematics::{BackwardMap, LevelSet};
use membrane_fsi::ns_solver::{assemble_poisson, SchemeMode, Simulation};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_case(dt: f64, ca: f64) -> CaseConfig {
    let mut cfg = CaseConfig::default();
    cfg.nx = 32;
    cfg.ny = 16;
    cfg.dt = dt;
    cfg.ca = ca;
    cfg
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn zero_stiffness_steps_are_bit_identical(dt in 0.01f64..0.1, ca in 0.005f64..0.05) {
        let mut runs = Vec::new();
        for mode in [SchemeMode::Explicit, SchemeMode::SemiImplicit] {
            let mut cfg = small_case(dt, ca);
            cfg.scheme = mode;
            let mut sim = init_shear_case::<f64>(&cfg).unwrap();
            sim.config.law.stiffness = 0.0;
            for _ in 0..3 {
                sim.step().unwrap();
            }
            runs.push(sim);
        }
        prop_assert_eq!(&runs[0].flow.vel, &runs[1].flow.vel);
        prop_assert_eq!(&runs[0].flow.p, &runs[1].flow.p);
        prop_assert_eq!(&runs[0].ls.phi, &runs[1].ls.phi);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// On a periodic box with uniform properties a constant velocity is
    /// annihilated by everything except the mass term.
    #[test]
    fn constant_velocity_feels_only_the_mass_term(
        c1 in -2.0f64..2.0,
        c2 in -2.0f64..2.0,
        dt in 0.005f64..0.5,
        ca in 0.001f64..0.1,
        semi in any::<bool>(),
    ) {
        let cfg = small_case(dt, ca);
        let grid = GridSpec::new(24, 24, -1.0, 1.0, -1.0, 1.0).unwrap();
        let vel = FaceVectorField::from_fn(&grid, |_, _| c1, |_, _| c2);
        let mut config = step_config::<f64>(&cfg);
        config.mode = if semi { SchemeMode::SemiImplicit } else { SchemeMode::Explicit };
        let ls = LevelSet::circle(&grid, 0.0, 0.0, 0.5);
        let mut sim = Simulation::new(grid, BoundarySpec::periodic(), vel, ls, BackwardMap::identity(&grid), config).unwrap();
        let sys = sim.prediction_system(config.mode).unwrap();
        let rho = config.phases.rho1;
        let x: Vec<f64> = (0..sim.layout.len()).map(|k| if sim.layout.sample(k).0 == 0 { c1 } else { c2 }).collect();
        let ax = sys.matrix.mul(&x);
        for (k, (&got, &xk)) in ax.iter().zip(&x).enumerate() {
            prop_assert!((got - rho / dt * xk).abs() <= 1e-9 * (1.0 + rho / dt), "row {}: {} vs {}", k, got, rho / dt * xk);
        }
    }

    #[test]
    fn poisson_operator_is_symmetric(nx in 4usize..20, ny in 4usize..20, dt in 0.01f64..1.0, seed in any::<u64>(), periodic in any::<bool>()) {
        let g = GridSpec::new(nx, ny, 0.0, 1.0, 0.0, 0.8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rho = CellField::constant(&g, Staggering::Cell, 1.0);
        rho.map_interior(|_, _, _| rng.gen_range(0.5..5.0));
        let bc = if periodic { BoundarySpec::periodic() } else { BoundarySpec::neumann() };
        fill_ghosts(&mut rho, &bc).unwrap();
        let a = assemble_poisson(&g, &rho, dt, &bc);
        for r in 0..a.dim() {
            for (c, v) in a.row(r) {
                prop_assert_eq!(v.to_bits(), a.get(c, r).to_bits());
            }
        }
    }
}

#[test]
fn single_precision_shear_step_runs() {
    let mut sim = init_shear_case::<f32>(&small_case(0.02, 0.01)).unwrap();
    for _ in 0..3 {
        let r = sim.step().unwrap();
        assert!(r.max_speed.is_finite() && r.max_speed < 3.0, "{r}");
    }
    assert!(sim.flow.vel.u.all_finite() && sim.flow.vel.v.all_finite());
}
