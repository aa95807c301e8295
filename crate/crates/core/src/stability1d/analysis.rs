//! Closed-form Von Neumann analysis of the linearized 1D coupled model.

use crate::error::{FsiError, Result};
use crate::scalar::Real;

/// Parameters of the periodic linearized model
/// `∂t u − μ ∂xx u = −(K/ε) ∂xx Y`, `∂t Y + u = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model1DParams<T> {
    pub mu: T,
    pub k: T,
    pub eps: T,
    pub dx: T,
    pub dt: T,
    pub n_cells: usize,
}

impl<T: Real> Model1DParams<T> {
    pub fn new(mu: T, k: T, eps: T, dx: T, dt: T, n_cells: usize) -> Result<Self> {
        let p = Self { mu, k, eps, dx, dt, n_cells };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: T| v > T::zero() && v.is_finite();
        if !(positive(self.mu) && positive(self.k) && positive(self.eps) && positive(self.dx) && positive(self.dt)) {
            return Err(FsiError::Config("1D model parameters must be finite and strictly positive".into()));
        }
        if self.n_cells < 3 {
            return Err(FsiError::Config(format!("1D model needs at least 3 cells, got {}", self.n_cells)));
        }
        Ok(())
    }

    pub fn with_dt(self, dt: T) -> Self {
        Self { dt, ..self }
    }

    /// Periodic domain length `n_cells · dx`.
    pub fn length(&self) -> T {
        T::from_usize_lossy(self.n_cells) * self.dx
    }
}

/// Time-discretization of the 1D coupled model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme1D {
    /// Implicit viscosity, explicit elastic term.
    Explicit,
    /// Elastic term at the new time level, solved as a coupled system.
    Implicit,
    /// Explicit elastic term plus the augmented viscosity `Δt K/ε`.
    SemiImplicit,
}

impl Scheme1D {
    pub const ALL: [Scheme1D; 3] = [Scheme1D::Explicit, Scheme1D::Implicit, Scheme1D::SemiImplicit];

    pub fn name(self) -> &'static str {
        match self {
            Scheme1D::Explicit => "explicit",
            Scheme1D::Implicit => "implicit",
            Scheme1D::SemiImplicit => "semi-implicit",
        }
    }
}

/// `α_θ`, `β_θ` and the matrices of `A_θ x̂ⁿ⁺¹ = B_θ x̂ⁿ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplificationPair<T> {
    pub alpha_theta: T,
    pub beta_theta: T,
    pub a_matrix: [[T; 2]; 2],
    pub b_matrix: [[T; 2]; 2],
    /// `α_θ − 1 − Δt β_θ`, kept separately so that the characteristic
    /// polynomial can be formed without cancellation.
    shift: T,
}

impl<T: Real> AmplificationPair<T> {
    fn build(alpha: T, beta: T, dt: T, shift: T) -> Self {
        let (o, z) = (T::one(), T::zero());
        Self { alpha_theta: alpha, beta_theta: beta, a_matrix: [[alpha, z], [dt, o]], b_matrix: [[o, beta], [z, o]], shift }
    }

    /// `A_θ⁻¹ B_θ`.
    pub fn propagator(&self, dt: T) -> [[T; 2]; 2] {
        let (a, b) = (self.alpha_theta, self.beta_theta);
        [[T::one() / a, b / a], [-dt / a, T::one() - dt * b / a]]
    }

    /// Roots of `α λ² − (1 + α − Δt β) λ + 1 = 0` as `(re, im)` pairs. With
    /// `s = α − 1 − Δt β` the linear coefficient is `2 + s` and the
    /// discriminant `s² − 4 Δt β`, both free of cancellation.
    pub fn eigenvalues(&self, dt: T) -> [(T, T); 2] {
        let two = T::lit(2.0);
        let (a, s, db) = (self.alpha_theta, self.shift, dt * self.beta_theta);
        let b = two + s;
        let disc = s * s - T::lit(4.0) * db;
        if disc >= T::zero() {
            let q = (b + b.signum() * disc.sqrt()) / two;
            if q == T::zero() {
                return [(T::zero(), T::zero()); 2];
            }
            [(q / a, T::zero()), (T::one() / q, T::zero())]
        } else {
            let (re, im) = (b / (two * a), (-disc).sqrt() / (two * a));
            [(re, im), (re, -im)]
        }
    }

    pub fn spectral_radius(&self, dt: T) -> T {
        let [l1, l2] = self.eigenvalues(dt);
        if l1.1 != T::zero() {
            // complex pair: |λ|² is the product of the roots, 1/α
            return (T::one() / self.alpha_theta).sqrt();
        }
        modulus(l1).max(modulus(l2))
    }
}

fn modulus<T: Real>((re, im): (T, T)) -> T {
    re.hypot(im)
}

/// Roots of `a λ² + b λ + c` (a ≠ 0), computed without cancellation.
pub fn quadratic_roots<T: Real>(a: T, b: T, c: T) -> [(T, T); 2] {
    let two = T::lit(2.0);
    let disc = b * b - T::lit(4.0) * a * c;
    if disc >= T::zero() {
        let q = -(b + b.signum() * disc.sqrt()) / two;
        if q == T::zero() {
            return [(T::zero(), T::zero()); 2];
        }
        [(q / a, T::zero()), (c / q, T::zero())]
    } else {
        let re = -b / (two * a);
        let im = (-disc).sqrt() / (two * a).abs();
        [(re, im), (re, -im)]
    }
}

/// Sufficient explicit-coupling bound `(με + max(με, √(Kε) Δx)) / K`.
pub fn explicit_dt_bound<T: Real>(p: &Model1DParams<T>) -> T {
    let me = p.mu * p.eps;
    (me + me.max((p.k * p.eps).sqrt() * p.dx)) / p.k
}

/// Exact threshold of the explicit Von Neumann analysis at `θ = π`:
/// `(με + √((με)² + Kε Δx²)) / K`.
pub fn explicit_dt_threshold<T: Real>(p: &Model1DParams<T>) -> T {
    let me = p.mu * p.eps;
    (me + (me * me + p.k * p.eps * p.dx * p.dx).sqrt()) / p.k
}

fn sin2_half<T: Real>(theta: T) -> T {
    let s = (theta * T::lit(0.5)).sin();
    s * s
}

/// Amplification data of the semi-implicit scheme (equal to that of the
/// implicit scheme for this linear model).
pub fn amplification<T: Real>(p: &Model1DParams<T>, theta: T) -> AmplificationPair<T> {
    amplification_for(p, Scheme1D::SemiImplicit, theta)
}

/// Amplification data for any scheme: the explicit one omits `Δt K/ε` from `α_θ`.
pub fn amplification_for<T: Real>(p: &Model1DParams<T>, scheme: Scheme1D, theta: T) -> AmplificationPair<T> {
    let r = T::lit(4.0) * p.dt / (p.dx * p.dx) * sin2_half(theta);
    let stiff = p.k / p.eps;
    let visc = match scheme {
        Scheme1D::Explicit => p.mu,
        Scheme1D::Implicit | Scheme1D::SemiImplicit => p.mu + p.dt * stiff,
    };
    let (r_visc, dt_beta) = (r * visc, p.dt * r * stiff);
    let shift = match scheme {
        Scheme1D::Explicit => r_visc - dt_beta,
        Scheme1D::Implicit | Scheme1D::SemiImplicit => r * p.mu,
    };
    AmplificationPair::build(T::one() + r_visc, r * stiff, p.dt, shift)
}

pub fn spectral_radius_semi_implicit<T: Real>(p: &Model1DParams<T>, theta: T) -> T {
    amplification(p, theta).spectral_radius(p.dt)
}

pub fn spectral_radius_for<T: Real>(p: &Model1DParams<T>, scheme: Scheme1D, theta: T) -> T {
    amplification_for(p, scheme, theta).spectral_radius(p.dt)
}

/// Wavenumber `θ = 2π m / n` of the `m`-th Fourier mode on `n` cells.
pub fn mode_theta<T: Real>(mode: usize, n_cells: usize) -> T {
    T::TAU() * T::from_usize_lossy(mode) / T::from_usize_lossy(n_cells)
}

/// One row of a spectral-radius sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<T> {
    pub theta: T,
    pub params: Model1DParams<T>,
    pub rho_semi_implicit: T,
}

/// Semi-implicit spectral radius for every parameter tuple and every
/// `θ_k = 2π k / n_theta`.
pub fn spectral_sweep<T: Real>(params: &[Model1DParams<T>], n_theta: usize) -> Vec<SweepRow<T>> {
    params
        .iter()
        .flat_map(|p| {
            (0..n_theta).map(move |k| {
                let theta = mode_theta(k, n_theta);
                SweepRow { theta, params: *p, rho_semi_implicit: spectral_radius_semi_implicit(p, theta) }
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit() -> Model1DParams<f64> {
        Model1DParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 8).unwrap()
    }

    #[test]
    fn bound_examples() {
        let p = Model1DParams::new(1.0, 10.0, 0.1, 0.1, 1.0, 8).unwrap();
        assert_relative_eq!(explicit_dt_bound(&p), 0.02, max_relative = 1e-14);
        let p = Model1DParams::new(1.0, 1.0, 1.0, 0.1, 1.0, 8).unwrap();
        assert_relative_eq!(explicit_dt_bound(&p), 2.0, max_relative = 1e-14);
        let p = Model1DParams::new(1.0, 1e-8, 1.0, 1.0, 1.0, 8).unwrap();
        assert!(explicit_dt_bound(&p) > 1e7);
    }

    #[test]
    fn threshold_between_bound_and_sqrt2_bound() {
        for &(mu, k, eps, dx) in &[(1.0, 10.0, 0.1, 0.1), (0.01, 100.0, 0.03, 0.01), (5.0, 0.1, 1.0, 0.5)] {
            let p = Model1DParams::new(mu, k, eps, dx, 1.0, 8).unwrap();
            let (b, t) = (explicit_dt_bound(&p), explicit_dt_threshold(&p));
            assert!(t >= b && t <= 2f64.sqrt() * b + 1e-15, "{b} {t}");
        }
    }

    #[test]
    fn zero_mode_is_neutral() {
        let a = amplification(&unit(), 0.0);
        assert_eq!((a.alpha_theta, a.beta_theta), (1.0, 0.0));
        let [l1, l2] = a.eigenvalues(1.0);
        assert_eq!((l1, l2), ((1.0, 0.0), (1.0, 0.0)));
        assert_eq!(spectral_radius_semi_implicit(&unit(), 0.0), 1.0);
    }

    #[test]
    fn double_root_example() {
        let a = amplification(&unit(), std::f64::consts::PI);
        assert_relative_eq!(a.alpha_theta, 9.0, max_relative = 1e-15);
        assert_relative_eq!(a.beta_theta, 4.0, max_relative = 1e-15);
        assert_eq!(a.a_matrix, [[a.alpha_theta, 0.0], [1.0, 1.0]]);
        assert_eq!(a.b_matrix, [[1.0, a.beta_theta], [0.0, 1.0]]);
        assert_relative_eq!(spectral_radius_semi_implicit(&unit(), std::f64::consts::PI), 1.0 / 3.0, epsilon = 1e-7);
    }

    #[test]
    fn propagator_matches_characteristic_polynomial() {
        let p = Model1DParams::new(0.3, 7.0, 0.2, 0.05, 0.01, 16).unwrap();
        let a = amplification(&p, 1.1);
        let g = a.propagator(p.dt);
        let tr = g[0][0] + g[1][1];
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        assert_relative_eq!(det, 1.0 / a.alpha_theta, max_relative = 1e-12);
        assert_relative_eq!(tr, (1.0 + a.alpha_theta - p.dt * a.beta_theta) / a.alpha_theta, max_relative = 1e-12);
    }

    #[test]
    fn quadratic_roots_complex_and_real() {
        let [r1, r2] = quadratic_roots(1.0f64, -3.0, 2.0);
        assert_relative_eq!(r1.0.max(r2.0), 2.0);
        assert_relative_eq!(r1.0.min(r2.0), 1.0);
        let [c1, c2] = quadratic_roots(1.0f64, 0.0, 1.0);
        assert_eq!((c1.0, c1.1.abs(), c2.1.abs()), (0.0, 1.0, 1.0));
    }

    #[test]
    fn sweep_rows() {
        let rows = spectral_sweep(&[unit()], 4);
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.rho_semi_implicit <= 1.0 + 1e-12));
    }
}
