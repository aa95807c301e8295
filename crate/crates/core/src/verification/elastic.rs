//! Analytic-flow oracles for the elastic pipeline: a sinusoidal shear wave
//! with a closed-form backward map, the exact membrane state it produces,
//! and discrete-vs-exact residual measurements.

use super::jet::{Jet1, Jet2};
use crate::elasticity::{
    compute_stress, compute_z_alt, deformation_state, stress_evolution_residual, stress_evolution_rhs,
    ConstitutiveLaw, Mat2, Sym2,
};
use crate::error::Result;
use crate::grid::{CellField, FaceVectorField, GridSpec, Staggering};
use crate::kinematics::{compute_normals, BackwardMap, Circle, LevelSet};

/// Incompressible parallel flow `u = A sin(κ k·x) t̂` with `k = (cos θ, sin θ)`
/// and `t̂ = (−sin θ, cos θ)`. Speed is constant along each streamline, so
/// the backward map is `Y(x, t) = x − t u(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShearWave {
    pub amplitude: f64,
    pub wavenumber: f64,
    pub angle: f64,
}

impl Default for ShearWave {
    fn default() -> Self {
        Self { amplitude: 0.4, wavenumber: 2.0, angle: 0.3 }
    }
}

/// Membrane used with [`ShearWave`]: circle of radius 0.5 at the origin.
pub const MEMBRANE: Circle<f64> = Circle { cx: 0.0, cy: 0.0, radius: 0.5 };

/// Cells with `|φ| ≤ BAND` are compared; the band is fixed across meshes.
pub const BAND: f64 = 0.2;

impl ShearWave {
    fn dirs(&self) -> ([f64; 2], [f64; 2]) {
        let (s, c) = self.angle.sin_cos();
        ([c, s], [-s, c])
    }

    pub fn velocity(&self, x: f64, y: f64) -> [f64; 2] {
        let (k, t) = self.dirs();
        let a = self.amplitude * (self.wavenumber * (k[0] * x + k[1] * y)).sin();
        [a * t[0], a * t[1]]
    }

    /// `[∇u]_{cd} = ∂_d u_c`.
    pub fn velocity_gradient(&self, x: f64, y: f64) -> Mat2<f64> {
        let (k, t) = self.dirs();
        let d = self.amplitude * self.wavenumber * (self.wavenumber * (k[0] * x + k[1] * y)).cos();
        Mat2::new(d * t[0] * k[0], d * t[0] * k[1], d * t[1] * k[0], d * t[1] * k[1])
    }

    pub fn backward_map(&self, x: f64, y: f64, t: f64) -> [f64; 2] {
        let u = self.velocity(x, y);
        [x - t * u[0], y - t * u[1]]
    }

    fn backward_map_jets(&self, x: f64, y: f64, t: f64) -> [Jet2; 2] {
        let (k, d) = self.dirs();
        let (jx, jy) = (Jet2::var(x, 0), Jet2::var(y, 1));
        let a = (jx.scale(k[0]) + jy.scale(k[1])).scale(self.wavenumber).sin().scale(self.amplitude * t);
        [jx - a.scale(d[0]), jy - a.scale(d[1])]
    }

    /// Exact level set `φ0(Y(x, t))`.
    pub fn phi(&self, x: f64, y: f64, t: f64) -> f64 {
        let [y1, y2] = self.backward_map(x, y, t);
        (y1 - MEMBRANE.cx).hypot(y2 - MEMBRANE.cy) - MEMBRANE.radius
    }
}

/// Exact `Z`, `n` and `σ` with their spatial gradients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactMembrane {
    pub z: Jet1,
    pub n: [Jet1; 2],
    /// `σ_xx`, `σ_xy`, `σ_yy`.
    pub sigma: [Jet1; 3],
}

/// Evaluates `∇Y → B → 𝒜 → Z → σ` in jet arithmetic.
pub fn exact_membrane(flow: &ShearWave, law: &impl ConstitutiveLaw<f64>, x: f64, y: f64, t: f64) -> ExactMembrane {
    let yj = flow.backward_map_jets(x, y, t);
    let g = [[yj[0].derivative(0), yj[0].derivative(1)], [yj[1].derivative(0), yj[1].derivative(1)]];
    let inv_det = (g[0][0] * g[1][1] - g[0][1] * g[1][0]).recip();
    let inv = [[g[1][1] * inv_det, (Jet1::zero() - g[0][1]) * inv_det], [(Jet1::zero() - g[1][0]) * inv_det, g[0][0] * inv_det]];
    let b = |p: usize, q: usize| inv[p][0] * inv[q][0] + inv[p][1] * inv[q][1];
    let shifted = [yj[0] - Jet2::constant(MEMBRANE.cx), yj[1] - Jet2::constant(MEMBRANE.cy)];
    let phi = (shifted[0] * shifted[0] + shifted[1] * shifted[1]).sqrt();
    let grad = [phi.derivative(0), phi.derivative(1)];
    let inv_norm = (grad[0] * grad[0] + grad[1] * grad[1]).sqrt().recip();
    let n = [grad[0] * inv_norm, grad[1] * inv_norm];
    let bn = [b(0, 0) * n[0] + b(0, 1) * n[1], b(1, 0) * n[0] + b(1, 1) * n[1]];
    let nbn = n[0] * bn[0] + n[1] * bn[1];
    let trace_a = b(0, 0) + b(1, 1) - (bn[0] * bn[0] + bn[1] * bn[1]) * nbn.recip();
    let z = trace_a.sqrt();
    let f = z.map(law.f(z.v), law.f_prime(z.v));
    let one = Jet1::constant(1.0);
    let sigma = [f * (one - n[0] * n[0]), Jet1::zero() - f * n[0] * n[1], f * (one - n[1] * n[1])];
    ExactMembrane { z, n, sigma }
}

/// Pointwise residual `(σ(t+h) − σ(t))/h + u·∇σ(t) − R(Z, n, ∇u)` from the
/// exact state; it vanishes like `O(h)`.
pub fn symbolic_stress_residual(flow: &ShearWave, law: &impl ConstitutiveLaw<f64>, x: f64, y: f64, t: f64, h: f64) -> f64 {
    let s0 = exact_membrane(flow, law, x, y, t);
    let s1 = exact_membrane(flow, law, x, y, t + h);
    let u = flow.velocity(x, y);
    let rhs = stress_evolution_rhs(s0.z.v, [s0.n[0].v, s0.n[1].v], &flow.velocity_gradient(x, y), law);
    let expected = [rhs.xx, rhs.xy, rhs.yy];
    (0..3)
        .map(|c| {
            let adv = u[0] * s0.sigma[c].g[0] + u[1] * s0.sigma[c].g[1];
            ((s1.sigma[c].v - s0.sigma[c].v) / h + adv - expected[c]).abs()
        })
        .fold(0.0, f64::max)
}

/// Largest [`symbolic_stress_residual`] over sample points on the membrane.
pub fn symbolic_stress_residual_max(flow: &ShearWave, law: &impl ConstitutiveLaw<f64>, t: f64, h: f64) -> f64 {
    (0..16)
        .map(|k| {
            let a = std::f64::consts::TAU * (k as f64 + 0.25) / 16.0;
            let r = MEMBRANE.radius + 0.05 * ((k % 3) as f64 - 1.0);
            symbolic_stress_residual(flow, law, r * a.cos(), r * a.sin(), t, h)
        })
        .fold(0.0, f64::max)
}

/// Square mesh of `[−1, 1]²` used by the discrete checks.
pub fn oracle_grid(n: usize) -> Result<GridSpec<f64>> {
    GridSpec::new(n, n, -1.0, 1.0, -1.0, 1.0)
}

fn discrete_inputs(flow: &ShearWave, grid: &GridSpec<f64>, t: f64) -> (BackwardMap<f64>, LevelSet<f64>) {
    let ymap = BackwardMap {
        y1: CellField::from_fn(grid, Staggering::Cell, |x, y| flow.backward_map(x, y, t)[0]),
        y2: CellField::from_fn(grid, Staggering::Cell, |x, y| flow.backward_map(x, y, t)[1]),
    };
    let ls = LevelSet::from_fn(grid, |x, y| flow.phi(x, y, t));
    (ymap, ls)
}

fn band_max(grid: &GridSpec<f64>, flow: &ShearWave, t: f64, value: impl Fn(isize, isize) -> f64) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            let (x, y) = grid.cell_center(i, j);
            if flow.phi(x, y, t).abs() <= BAND {
                worst = worst.max(value(i, j).abs());
            }
        }
    }
    worst
}

/// Largest `|Z − J|∇φ|/|∇φ0(Y)||` in the band, both computed discretely on an
/// `n × n` mesh from the exact `Y` and `φ` samples.
pub fn dual_z_discrepancy(flow: &ShearWave, n: usize, t: f64) -> Result<f64> {
    let grid = oracle_grid(n)?;
    let (ymap, ls) = discrete_inputs(flow, &grid, t);
    let normals = compute_normals(&grid, &ls);
    let state = deformation_state(&grid, &ymap, &normals, None);
    let alt = compute_z_alt(&grid, &ls, &ymap, &state.grad_y, &MEMBRANE);
    Ok(band_max(&grid, flow, t, |i, j| state.z.get(i, j) - alt.get(i, j)))
}

/// Largest discrete stress-evolution residual in the band on an `n × n`
/// mesh, from exact samples at `t` and `t + h`.
pub fn discrete_stress_residual(flow: &ShearWave, law: &impl ConstitutiveLaw<f64>, n: usize, t: f64, h: f64) -> Result<f64> {
    let grid = oracle_grid(n)?;
    let stress = |time: f64| {
        let (ymap, ls) = discrete_inputs(flow, &grid, time);
        let normals = compute_normals(&grid, &ls);
        let state = deformation_state(&grid, &ymap, &normals, None);
        let sigma = compute_stress(&grid, &state.z, &normals, law);
        (sigma, state.z, normals)
    };
    let (s0, z0, n0) = stress(t);
    let (s1, _, _) = stress(t + h);
    let vel = FaceVectorField::from_fn(&grid, |x, y| flow.velocity(x, y)[0], |x, y| flow.velocity(x, y)[1]);
    let r = stress_evolution_residual(&grid, &s0, &s1, h, &vel, &z0, &n0, law);
    Ok(band_max(&grid, flow, t, |i, j| {
        let v: Sym2<f64> = r.get(i, j);
        v.xx.abs().max(v.xy.abs()).max(v.yy.abs())
    }))
}

/// `log₂` ratios of successive errors under mesh or step halving.
pub fn halving_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|e| (e[0] / e[1]).log2()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elasticity::EvanSkalak;
    use approx::assert_relative_eq;

    const LAW: EvanSkalak<f64> = EvanSkalak { stiffness: 1.0 };

    #[test]
    fn identity_map_is_unstretched() {
        let s = exact_membrane(&ShearWave::default(), &LAW, 0.5, 0.0, 0.0);
        assert_relative_eq!(s.z.v, 1.0, epsilon = 1e-14);
        assert!(s.sigma.iter().all(|c| c.v.abs() < 1e-14));
        assert_relative_eq!(s.n[0].v, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn velocity_is_divergence_free_and_map_consistent() {
        let f = ShearWave::default();
        let g = f.velocity_gradient(0.3, -0.2);
        assert!((g.xx + g.yy).abs() < 1e-15);
        let (x, y, t, h) = (0.3, -0.2, 0.4, 1e-6);
        let [a1, a2] = f.backward_map(x, y, t + h);
        let [b1, b2] = f.backward_map(x, y, t);
        let u = f.velocity(x, y);
        // ∂t Y + (u·∇)Y = 0 with ∇Y = I − t∇u
        let grad = [[1.0 - t * g.xx, -t * g.xy], [-t * g.yx, 1.0 - t * g.yy]];
        let r1 = (a1 - b1) / h + u[0] * grad[0][0] + u[1] * grad[0][1];
        let r2 = (a2 - b2) / h + u[0] * grad[1][0] + u[1] * grad[1][1];
        assert!(r1.abs() < 1e-8 && r2.abs() < 1e-8, "{r1} {r2}");
    }

    #[test]
    fn symbolic_residual_is_first_order_in_time() {
        let f = ShearWave::default();
        let e: Vec<f64> = [1e-2, 5e-3, 2.5e-3].iter().map(|&h| symbolic_stress_residual_max(&f, &LAW, 0.5, h)).collect();
        for o in halving_orders(&e) {
            assert!(o > 0.9, "{e:?}");
        }
    }

    #[test]
    fn dual_z_converges() {
        let f = ShearWave::default();
        let e: Vec<f64> = [32, 64].iter().map(|&n| dual_z_discrepancy(&f, n, 0.5).unwrap()).collect();
        assert!(halving_orders(&e)[0] > 1.8, "{e:?}");
    }
}
