//! Time marching of the periodic 1D model and empirical stability classification.

use super::analysis::{Model1DParams, Scheme1D};
use crate::error::{FsiError, Result};
use crate::scalar::Real;

/// Velocity `u` and backward characteristics `Y` at cell points `x_j = j Δx`.
#[derive(Debug, Clone, PartialEq)]
pub struct State1D<T> {
    pub u: Vec<T>,
    pub y: Vec<T>,
}

impl<T: Real> State1D<T> {
    /// `u = amplitude · sin(2π m x / L)`, `Y = x`.
    pub fn single_mode(p: &Model1DParams<T>, mode: usize, amplitude: T) -> Self {
        let n = p.n_cells;
        let u = (0..n)
            .map(|j| amplitude * (T::TAU() * T::from_usize_lossy(mode * j % n) / T::from_usize_lossy(n)).sin())
            .collect();
        let y = (0..n).map(|j| T::from_usize_lossy(j) * p.dx).collect();
        Self { u, y }
    }

    /// Displacement `Y_j − x_j`, which is periodic.
    pub fn displacement(&self, dx: T) -> Vec<T> {
        self.y.iter().enumerate().map(|(j, &y)| y - T::from_usize_lossy(j) * dx).collect()
    }

    pub fn max_abs_u(&self) -> T {
        self.u.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Discrete energy `½ Σ Δx (u² + (K/ε) ((w_{j+1} − w_j)/Δx)²)` with `w = Y − x`.
    pub fn energy(&self, p: &Model1DParams<T>) -> T {
        let w = self.displacement(p.dx);
        let n = w.len();
        let stiff = p.k / p.eps;
        let half = T::lit(0.5);
        (0..n)
            .map(|j| {
                let g = (w[(j + 1) % n] - w[j]) / p.dx;
                half * p.dx * (self.u[j] * self.u[j] + stiff * g * g)
            })
            .sum()
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().chain(&self.y).all(|v| v.is_finite())
    }
}

/// `Σ_j D²w_j` stencil `(w_{j+1} − 2w_j + w_{j−1}) / Δx²` on a periodic grid.
fn laplacian<T: Real>(w: &[T], dx: T) -> Vec<T> {
    let n = w.len();
    let inv = T::one() / (dx * dx);
    (0..n).map(|j| (w[(j + 1) % n] - T::lit(2.0) * w[j] + w[(j + n - 1) % n]) * inv).collect()
}

/// Solves the cyclic tridiagonal system `b x_j + a x_{j−1} + c x_{j+1} = d_j`
/// with constant coefficients (Thomas plus Sherman–Morrison).
pub fn cyclic_thomas<T: Real>(a: T, b: T, c: T, d: &[T]) -> Result<Vec<T>> {
    let n = d.len();
    if n < 3 {
        return Err(FsiError::SingularSystem);
    }
    let gamma = -b;
    let mut diag = vec![b; n];
    diag[0] = b - gamma;
    diag[n - 1] = b - a * c / gamma;
    let x = thomas(a, &diag, c, d)?;
    let mut rhs_u = vec![T::zero(); n];
    rhs_u[0] = gamma;
    rhs_u[n - 1] = c;
    let z = thomas(a, &diag, c, &rhs_u)?;
    let factor = (x[0] + a * x[n - 1] / gamma) / (T::one() + z[0] + a * z[n - 1] / gamma);
    if !factor.is_finite() {
        return Err(FsiError::SingularSystem);
    }
    Ok(x.iter().zip(&z).map(|(&xi, &zi)| xi - factor * zi).collect())
}

fn thomas<T: Real>(a: T, diag: &[T], c: T, d: &[T]) -> Result<Vec<T>> {
    let n = d.len();
    let mut cp = vec![T::zero(); n];
    let mut dp = vec![T::zero(); n];
    let mut piv = diag[0];
    if piv == T::zero() {
        return Err(FsiError::SingularSystem);
    }
    cp[0] = c / piv;
    dp[0] = d[0] / piv;
    for i in 1..n {
        piv = diag[i] - a * cp[i - 1];
        if piv == T::zero() || !piv.is_finite() {
            return Err(FsiError::SingularSystem);
        }
        cp[i] = c / piv;
        dp[i] = (d[i] - a * dp[i - 1]) / piv;
    }
    let mut x = dp;
    for i in (0..n - 1).rev() {
        let next = x[i + 1];
        x[i] -= cp[i] * next;
    }
    Ok(x)
}

/// Dense LU factorization with partial pivoting, used for the coupled
/// implicit system.
#[derive(Debug, Clone)]
struct DenseLu<T> {
    n: usize,
    lu: Vec<T>,
    perm: Vec<usize>,
}

impl<T: Real> DenseLu<T> {
    fn factor(n: usize, mut m: Vec<T>) -> Result<Self> {
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&r, &s| m[r * n + k].abs().partial_cmp(&m[s * n + k].abs()).unwrap_or(std::cmp::Ordering::Equal))
                .unwrap_or(k);
            if m[p * n + k] == T::zero() || !m[p * n + k].is_finite() {
                return Err(FsiError::SingularSystem);
            }
            if p != k {
                for col in 0..n {
                    m.swap(k * n + col, p * n + col);
                }
                perm.swap(k, p);
            }
            let piv = m[k * n + k];
            for r in k + 1..n {
                let l = m[r * n + k] / piv;
                if l == T::zero() {
                    continue;
                }
                m[r * n + k] = l;
                for col in k + 1..n {
                    let v = m[k * n + col];
                    m[r * n + col] -= l * v;
                }
            }
        }
        Ok(Self { n, lu: m, perm })
    }

    fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            let s = (0..r).fold(x[r], |s, c| s - self.lu[r * n + c] * x[c]);
            x[r] = s;
        }
        for r in (0..n).rev() {
            let s = (r + 1..n).fold(x[r], |s, c| s - self.lu[r * n + c] * x[c]);
            x[r] = s / self.lu[r * n + r];
        }
        x
    }
}

/// Precomputed one-step propagator for a scheme and parameter set.
#[derive(Debug, Clone)]
pub struct Stepper1D<T> {
    params: Model1DParams<T>,
    scheme: Scheme1D,
    /// Viscosity multiplying the implicit `∂xx u`.
    implicit_viscosity: T,
    coupled: Option<DenseLu<T>>,
}

impl<T: Real> Stepper1D<T> {
    pub fn new(params: Model1DParams<T>, scheme: Scheme1D) -> Result<Self> {
        params.validate()?;
        let stiff = params.k / params.eps;
        let aug = match scheme {
            Scheme1D::SemiImplicit => params.dt * stiff,
            _ => T::zero(),
        };
        Self::with_augmentation(params, scheme, aug)
    }

    /// Like [`Stepper1D::new`] with an explicit augmented viscosity; a zero
    /// augmentation turns the semi-implicit path into the explicit one.
    pub fn with_augmentation(params: Model1DParams<T>, scheme: Scheme1D, augmentation: T) -> Result<Self> {
        params.validate()?;
        let coupled = match scheme {
            Scheme1D::Implicit => Some(Self::factor_coupled(&params)?),
            _ => None,
        };
        Ok(Self { params, scheme, implicit_viscosity: params.mu + augmentation, coupled })
    }

    /// Unknowns `[u_0..u_n, w_0..w_n]` of
    /// `u − Δt μ D²u + Δt (K/ε) D²w = uⁿ`, `w + Δt u = wⁿ`.
    fn factor_coupled(p: &Model1DParams<T>) -> Result<DenseLu<T>> {
        let n = p.n_cells;
        let size = 2 * n;
        let mut m = vec![T::zero(); size * size];
        let r = p.dt / (p.dx * p.dx);
        let stiff = p.k / p.eps;
        for j in 0..n {
            let (jm, jp) = ((j + n - 1) % n, (j + 1) % n);
            let row = j * size;
            m[row + j] += T::one() + T::lit(2.0) * r * p.mu;
            m[row + jm] -= r * p.mu;
            m[row + jp] -= r * p.mu;
            m[row + n + j] -= T::lit(2.0) * r * stiff;
            m[row + n + jm] += r * stiff;
            m[row + n + jp] += r * stiff;
            let row = (n + j) * size;
            m[row + n + j] = T::one();
            m[row + j] = p.dt;
        }
        DenseLu::factor(size, m)
    }

    pub fn params(&self) -> &Model1DParams<T> {
        &self.params
    }

    pub fn scheme(&self) -> Scheme1D {
        self.scheme
    }

    pub fn step(&self, s: &State1D<T>) -> Result<State1D<T>> {
        let p = &self.params;
        let n = p.n_cells;
        if s.u.len() != n || s.y.len() != n {
            return Err(FsiError::Config(format!("state length {} / {} does not match {n} cells", s.u.len(), s.y.len())));
        }
        let (u, w) = self.step_displacement(&s.u, &s.displacement(p.dx))?;
        let y = w.iter().enumerate().map(|(j, &w)| w + T::from_usize_lossy(j) * p.dx).collect();
        Ok(State1D { u, y })
    }

    /// One step on `(u, w)` with the periodic displacement `w = Y − x`.
    pub fn step_displacement(&self, u: &[T], w: &[T]) -> Result<(Vec<T>, Vec<T>)> {
        let p = &self.params;
        let n = p.n_cells;
        if u.len() != n || w.len() != n {
            return Err(FsiError::Config(format!("state length {} / {} does not match {n} cells", u.len(), w.len())));
        }
        match &self.coupled {
            Some(lu) => {
                let rhs: Vec<T> = u.iter().chain(w).copied().collect();
                let x = lu.solve(&rhs);
                Ok((x[..n].to_vec(), x[n..].to_vec()))
            }
            None => {
                let stiff = p.k / p.eps;
                let lw = laplacian(w, p.dx);
                let rhs: Vec<T> = u.iter().zip(&lw).map(|(&u, &l)| u - p.dt * stiff * l).collect();
                let r = p.dt * self.implicit_viscosity / (p.dx * p.dx);
                let u_new = cyclic_thomas(-r, T::one() + T::lit(2.0) * r, -r, &rhs)?;
                let w_new = w.iter().zip(&u_new).map(|(&w, &u)| w - p.dt * u).collect();
                Ok((u_new, w_new))
            }
        }
    }
}

/// One step of the selected scheme.
pub fn step_1d<T: Real>(state: &State1D<T>, params: &Model1DParams<T>, scheme: Scheme1D) -> Result<State1D<T>> {
    Stepper1D::new(*params, scheme)?.step(state)
}

/// Empirical outcome of a long marching run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
}

impl Stability {
    pub fn name(self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
        }
    }
}

/// Amplitude growth factor beyond which a run counts as unstable.
pub const AMPLITUDE_LIMIT: f64 = 1e6;
/// Final-to-initial energy ratio beyond which a run counts as unstable.
pub const ENERGY_LIMIT: f64 = 10.0;
/// Shortest horizon accepted by [`classify_stability`].
pub const MIN_HORIZON: usize = 500;

/// Marches `u = sin(2πx/L)`, `Y = x` and reports whether max |u| stays below
/// `10⁶ ×` its initial value and the final energy below `10 ×` the initial one.
pub fn classify_stability<T: Real>(params: &Model1DParams<T>, scheme: Scheme1D, horizon_steps: usize) -> Result<Stability> {
    if horizon_steps < MIN_HORIZON {
        return Err(FsiError::Config(format!("classification horizon must be at least {MIN_HORIZON} steps")));
    }
    let stepper = Stepper1D::new(*params, scheme)?;
    let mut s = State1D::single_mode(params, 1, T::one());
    let amp0 = s.max_abs_u();
    let e0 = s.energy(params);
    let limit = T::lit(AMPLITUDE_LIMIT) * amp0;
    for _ in 0..horizon_steps {
        s = stepper.step(&s)?;
        if !s.is_finite() || s.max_abs_u() > limit {
            return Ok(Stability::Unstable);
        }
    }
    Ok(if s.energy(params) <= T::lit(ENERGY_LIMIT) * e0 { Stability::Stable } else { Stability::Unstable })
}

/// Sine-mode amplitudes `(Σ u_j sin(jθ), Σ w_j sin(jθ))`.
pub fn mode_amplitudes<T: Real>(s: &State1D<T>, p: &Model1DParams<T>, mode: usize) -> [T; 2] {
    let n = p.n_cells;
    let w = s.displacement(p.dx);
    let basis = |j: usize| (T::TAU() * T::from_usize_lossy(mode * j % n) / T::from_usize_lossy(n)).sin();
    let mut acc = [T::zero(); 2];
    for j in 0..n {
        let b = basis(j);
        acc[0] += s.u[j] * b;
        acc[1] += w[j] * b;
    }
    acc
}

/// Per-step amplification measured by marching: both basis states
/// `(sin, 0)` and `(0, sin)` of the given mode are marched `steps` times, their
/// mode amplitudes form the columns of the measured `Gᴺ`, and the result is
/// `ρ(Gᴺ)^{1/N}`. After every step the states are projected back onto the
/// mode and rescaled by a common factor, which removes round-off in the
/// other modes and keeps strongly damped modes representable.
pub fn marched_amplification<T: Real>(
    params: &Model1DParams<T>,
    scheme: Scheme1D,
    mode: usize,
    steps: usize,
) -> Result<T> {
    if steps == 0 {
        return Err(FsiError::Config("amplification needs at least one step".into()));
    }
    let stepper = Stepper1D::new(*params, scheme)?;
    let n = params.n_cells;
    let sine: Vec<T> =
        (0..n).map(|j| (T::TAU() * T::from_usize_lossy(mode * j % n) / T::from_usize_lossy(n)).sin()).collect();
    let project = |f: &[T]| f.iter().zip(&sine).fold(T::zero(), |acc, (&a, &b)| acc + a * b);
    let norm = project(&sine);
    let zero = vec![T::zero(); n];
    let mut cols = [(sine.clone(), zero.clone()), (zero, sine.clone())];
    let mut log_scale = T::zero();
    for _ in 0..steps {
        let mut amps = [[T::zero(); 2]; 2];
        for (col, (u, w)) in cols.iter().enumerate() {
            let (u1, w1) = stepper.step_displacement(u, w)?;
            amps[col] = [project(&u1) / norm, project(&w1) / norm];
        }
        let m = amps.iter().flatten().fold(T::zero(), |m, v| m.max(v.abs()));
        if m == T::zero() || !m.is_finite() {
            return Err(FsiError::Config("mode amplitude vanished or overflowed while marching".into()));
        }
        log_scale += m.ln();
        for (col, amp) in amps.iter().enumerate() {
            cols[col] = (sine.iter().map(|&s| s * amp[0] / m).collect(), sine.iter().map(|&s| s * amp[1] / m).collect());
        }
    }
    let mut g = [[T::zero(); 2]; 2];
    for (col, (u, w)) in cols.iter().enumerate() {
        g[0][col] = project(u) / norm;
        g[1][col] = project(w) / norm;
    }
    let tr = g[0][0] + g[1][1];
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let [l1, l2] = super::analysis::quadratic_roots(T::one(), -tr, det);
    let rho = l1.0.hypot(l1.1).max(l2.0.hypot(l2.1));
    let steps = T::from_usize_lossy(steps);
    Ok((rho.ln() / steps + log_scale / steps).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability1d::analysis::{explicit_dt_bound, mode_theta, spectral_radius_for};
    use approx::assert_relative_eq;

    fn params(dt: f64) -> Model1DParams<f64> {
        Model1DParams::new(0.5, 20.0, 0.1, 1.0 / 32.0, dt, 32).unwrap()
    }

    #[test]
    fn cyclic_thomas_matches_dense_product() {
        let d: Vec<f64> = (0..7).map(|j| (j as f64 * 0.7).cos()).collect();
        let (a, b, c) = (-0.3, 1.9, -0.4);
        let x = cyclic_thomas(a, b, c, &d).unwrap();
        let n = d.len();
        for j in 0..n {
            let r = a * x[(j + n - 1) % n] + b * x[j] + c * x[(j + 1) % n];
            assert_relative_eq!(r, d[j], epsilon = 1e-13);
        }
    }

    #[test]
    fn equilibrium_is_stationary() {
        let p = params(0.01);
        let s = State1D { u: vec![0.0; 32], y: (0..32).map(|j| j as f64 * p.dx).collect() };
        for scheme in Scheme1D::ALL {
            let t = step_1d(&s, &p, scheme).unwrap();
            assert!(t.u.iter().all(|&v| v == 0.0));
            assert!(t.displacement(p.dx).iter().all(|v| v.abs() < 1e-15));
        }
    }

    #[test]
    fn implicit_and_semi_implicit_agree() {
        let p = params(0.05);
        let mut a = State1D::single_mode(&p, 3, 1.0);
        let mut b = a.clone();
        let (si, im) = (Stepper1D::new(p, Scheme1D::SemiImplicit).unwrap(), Stepper1D::new(p, Scheme1D::Implicit).unwrap());
        for _ in 0..20 {
            a = si.step(&a).unwrap();
            b = im.step(&b).unwrap();
        }
        for (x, y) in a.u.iter().zip(&b.u) {
            assert_relative_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_augmentation_is_explicit_path() {
        let p = params(0.01);
        let s = State1D::single_mode(&p, 2, 1.0);
        let ex = Stepper1D::new(p, Scheme1D::Explicit).unwrap().step(&s).unwrap();
        let si = Stepper1D::with_augmentation(p, Scheme1D::SemiImplicit, 0.0).unwrap().step(&s).unwrap();
        assert_eq!(ex, si);
    }

    #[test]
    fn measured_amplification_matches_analysis() {
        for (scheme, dt) in [(Scheme1D::SemiImplicit, 0.3), (Scheme1D::Explicit, 0.002), (Scheme1D::Implicit, 0.1)] {
            let p = params(dt);
            let measured = marched_amplification(&p, scheme, 1, 100).unwrap();
            let exact = spectral_radius_for(&p, scheme, mode_theta(1, p.n_cells));
            assert_relative_eq!(measured, exact, max_relative = 1e-8);
        }
    }

    #[test]
    fn explicit_energy_grows_beyond_bound() {
        let p0 = params(1.0);
        let p = p0.with_dt(1.5 * explicit_dt_bound(&p0));
        assert_eq!(classify_stability(&p, Scheme1D::Explicit, 500).unwrap(), Stability::Unstable);
        let p = p0.with_dt(0.9 * explicit_dt_bound(&p0));
        assert_eq!(classify_stability(&p, Scheme1D::Explicit, 500).unwrap(), Stability::Stable);
        let p = p0.with_dt(50.0);
        assert_eq!(classify_stability(&p, Scheme1D::SemiImplicit, 500).unwrap(), Stability::Stable);
    }

    #[test]
    fn short_horizon_rejected() {
        assert!(classify_stability(&params(0.01), Scheme1D::Explicit, 10).is_err());
    }
}
