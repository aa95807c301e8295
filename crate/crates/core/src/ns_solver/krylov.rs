//! Jacobi-preconditioned Krylov solvers.

use super::sparse::CsrMatrix;
use crate::error::{FsiError, Result};
use crate::scalar::Real;

/// Which Krylov method to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KrylovMethod {
    /// Restarted GMRES with the given restart length.
    Gmres { restart: usize },
    BiCgStab,
    /// Conjugate gradients; the matrix must be symmetric positive (semi-)definite.
    Cg,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovOptions {
    pub method: KrylovMethod,
    /// Relative residual target `‖b − Ax‖ / ‖b‖`.
    pub tol: f64,
    pub max_iter: usize,
}

impl KrylovOptions {
    pub fn gmres(tol: f64, max_iter: usize) -> Self {
        Self { method: KrylovMethod::Gmres { restart: 30 }, tol, max_iter }
    }

    pub fn cg(tol: f64, max_iter: usize) -> Self {
        Self { method: KrylovMethod::Cg, tol, max_iter }
    }

    pub fn bicgstab(tol: f64, max_iter: usize) -> Self {
        Self { method: KrylovMethod::BiCgStab, tol, max_iter }
    }
}

/// Outcome of a converged solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    /// Final relative residual.
    pub residual: f64,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

fn jacobi<T: Real>(a: &CsrMatrix<T>) -> Vec<T> {
    a.diagonal().into_iter().map(|d| if d == T::zero() { T::one() } else { T::one() / d }).collect()
}

fn residual<T: Real>(a: &CsrMatrix<T>, b: &[T], x: &[T]) -> Vec<T> {
    let ax = a.mul(x);
    b.iter().zip(ax).map(|(&bi, axi)| bi - axi).collect()
}

/// Smallest relative residual requested from a solve in precision `T`;
/// tighter targets are raised to it.
pub fn tolerance_floor<T: Real>() -> f64 {
    100.0 * T::epsilon().to_f64_lossy()
}

/// Solves `A x = b` starting from `x` (overwritten with the solution). The
/// tolerance is clamped to [`tolerance_floor`] so that single-precision
/// solves stay attainable.
pub fn krylov_solve<T: Real>(a: &CsrMatrix<T>, b: &[T], x: &mut [T], opts: &KrylovOptions) -> Result<SolveStats> {
    let opts = &KrylovOptions { tol: opts.tol.max(tolerance_floor::<T>()), ..*opts };
    assert_eq!(a.dim(), b.len());
    assert_eq!(b.len(), x.len());
    let bnorm = norm(b);
    if bnorm == T::zero() {
        x.iter_mut().for_each(|v| *v = T::zero());
        return Ok(SolveStats { iterations: 0, residual: 0.0 });
    }
    let stats = match opts.method {
        KrylovMethod::Gmres { restart } => gmres(a, b, x, bnorm, restart.max(1), opts)?,
        KrylovMethod::BiCgStab => bicgstab(a, b, x, bnorm, opts)?,
        KrylovMethod::Cg => cg(a, b, x, bnorm, opts)?,
    };
    log::trace!("krylov {:?}: {} iterations, residual {:.3e}", opts.method, stats.iterations, stats.residual);
    Ok(stats)
}

fn non_convergence<T: Real>(iterations: usize, res: T, bnorm: T) -> FsiError {
    FsiError::NonConvergence { iterations, residual: (res / bnorm).to_f64_lossy() }
}

fn breakdown<T: Real>(iterations: usize, res: T, bnorm: T) -> FsiError {
    FsiError::Breakdown { iterations, residual: (res / bnorm).to_f64_lossy() }
}

fn gmres<T: Real>(a: &CsrMatrix<T>, b: &[T], x: &mut [T], bnorm: T, m: usize, opts: &KrylovOptions) -> Result<SolveStats> {
    let n = b.len();
    let minv = jacobi(a);
    let tol = T::lit(opts.tol) * bnorm;
    let mut total = 0;
    let mut r = residual(a, b, x);
    let mut beta = norm(&r);
    if beta <= tol {
        return Ok(SolveStats { iterations: 0, residual: (beta / bnorm).to_f64_lossy() });
    }
    let mut v: Vec<Vec<T>> = Vec::with_capacity(m + 1);
    let mut h = vec![vec![T::zero(); m]; m + 1];
    let (mut cs, mut sn) = (vec![T::zero(); m], vec![T::zero(); m]);
    let mut w = vec![T::zero(); n];
    let mut z = vec![T::zero(); n];
    loop {
        v.clear();
        v.push(r.iter().map(|&ri| ri / beta).collect());
        let mut g = vec![T::zero(); m + 1];
        g[0] = beta;
        let mut k_used = 0;
        for k in 0..m {
            for ((zi, &vi), &mi) in z.iter_mut().zip(&v[k]).zip(&minv) {
                *zi = vi * mi;
            }
            a.matvec(&z, &mut w);
            for (i, vi) in v.iter().enumerate() {
                let hik = dot(&w, vi);
                h[i][k] = hik;
                for (wj, &vj) in w.iter_mut().zip(vi) {
                    *wj -= hik * vj;
                }
            }
            let hn = norm(&w);
            h[k + 1][k] = hn;
            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let denom = h[k][k].hypot(h[k + 1][k]);
            if denom == T::zero() {
                return Err(breakdown(total, g[k].abs(), bnorm));
            }
            cs[k] = h[k][k] / denom;
            sn[k] = h[k + 1][k] / denom;
            h[k][k] = denom;
            h[k + 1][k] = T::zero();
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];
            total += 1;
            k_used = k + 1;
            if g[k + 1].abs() <= tol || total >= opts.max_iter || hn == T::zero() {
                break;
            }
            v.push(w.iter().map(|&wi| wi / hn).collect());
        }
        // back substitution for the least-squares coefficients
        let mut y = vec![T::zero(); k_used];
        for i in (0..k_used).rev() {
            let mut s = g[i];
            for (jj, &yj) in y.iter().enumerate().skip(i + 1) {
                s -= h[i][jj] * yj;
            }
            y[i] = s / h[i][i];
        }
        let mut update = vec![T::zero(); n];
        for (vi, &yi) in v.iter().zip(&y) {
            for (u, &vij) in update.iter_mut().zip(vi) {
                *u += yi * vij;
            }
        }
        for ((xi, &ui), &mi) in x.iter_mut().zip(&update).zip(&minv) {
            *xi += ui * mi;
        }
        r = residual(a, b, x);
        beta = norm(&r);
        if !beta.is_finite() {
            return Err(non_convergence(total, beta, bnorm));
        }
        if beta <= tol {
            return Ok(SolveStats { iterations: total, residual: (beta / bnorm).to_f64_lossy() });
        }
        if total >= opts.max_iter {
            return Err(non_convergence(total, beta, bnorm));
        }
    }
}

fn bicgstab<T: Real>(a: &CsrMatrix<T>, b: &[T], x: &mut [T], bnorm: T, opts: &KrylovOptions) -> Result<SolveStats> {
    let n = b.len();
    let minv = jacobi(a);
    let tol = T::lit(opts.tol) * bnorm;
    let mut r = residual(a, b, x);
    let r_hat = r.clone();
    let (mut rho, mut alpha, mut omega) = (T::one(), T::one(), T::one());
    let mut v = vec![T::zero(); n];
    let mut p = vec![T::zero(); n];
    let mut y = vec![T::zero(); n];
    let mut z = vec![T::zero(); n];
    let mut t = vec![T::zero(); n];
    let tiny = T::min_positive_value();
    for it in 1..=opts.max_iter {
        let rho_new = dot(&r_hat, &r);
        if rho_new.abs() < tiny || omega.abs() < tiny {
            return Err(breakdown(it, norm(&r), bnorm));
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
            y[i] = p[i] * minv[i];
        }
        a.matvec(&y, &mut v);
        let rv = dot(&r_hat, &v);
        if rv.abs() < tiny {
            return Err(breakdown(it, norm(&r), bnorm));
        }
        alpha = rho / rv;
        let mut s = r.clone();
        for i in 0..n {
            s[i] -= alpha * v[i];
        }
        if norm(&s) <= tol {
            for i in 0..n {
                x[i] += alpha * y[i];
            }
            let res = norm(&residual(a, b, x));
            return Ok(SolveStats { iterations: it, residual: (res / bnorm).to_f64_lossy() });
        }
        for i in 0..n {
            z[i] = s[i] * minv[i];
        }
        a.matvec(&z, &mut t);
        let tt = dot(&t, &t);
        omega = if tt == T::zero() { T::zero() } else { dot(&t, &s) / tt };
        for i in 0..n {
            x[i] += alpha * y[i] + omega * z[i];
            r[i] = s[i] - omega * t[i];
        }
        let rn = norm(&r);
        if !rn.is_finite() {
            return Err(non_convergence(it, rn, bnorm));
        }
        if rn <= tol {
            let res = norm(&residual(a, b, x));
            return Ok(SolveStats { iterations: it, residual: (res / bnorm).to_f64_lossy() });
        }
    }
    let res = norm(&residual(a, b, x));
    Err(non_convergence(opts.max_iter, res, bnorm))
}

fn cg<T: Real>(a: &CsrMatrix<T>, b: &[T], x: &mut [T], bnorm: T, opts: &KrylovOptions) -> Result<SolveStats> {
    let n = b.len();
    let minv = jacobi(a);
    let tol = T::lit(opts.tol) * bnorm;
    let mut r = residual(a, b, x);
    let mut z: Vec<T> = r.iter().zip(&minv).map(|(&ri, &mi)| ri * mi).collect();
    let mut p = z.clone();
    let mut q = vec![T::zero(); n];
    let mut rz = dot(&r, &z);
    if norm(&r) <= tol {
        return Ok(SolveStats { iterations: 0, residual: (norm(&r) / bnorm).to_f64_lossy() });
    }
    for it in 1..=opts.max_iter {
        a.matvec(&p, &mut q);
        let pq = dot(&p, &q);
        if pq <= T::zero() {
            return Err(breakdown(it, norm(&r), bnorm));
        }
        let alpha = rz / pq;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        let rn = norm(&r);
        if !rn.is_finite() {
            return Err(non_convergence(it, rn, bnorm));
        }
        if rn <= tol {
            return Ok(SolveStats { iterations: it, residual: (rn / bnorm).to_f64_lossy() });
        }
        for i in 0..n {
            z[i] = r[i] * minv[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(non_convergence(opts.max_iter, norm(&r), bnorm))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> CsrMatrix<f64> {
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![(i, 2.0)];
                if i > 0 {
                    r.push((i - 1, -1.0));
                }
                if i + 1 < n {
                    r.push((i + 1, -1.0));
                }
                r
            })
            .collect();
        CsrMatrix::from_rows(rows)
    }

    /// Thomas algorithm for the constant (−1, 2, −1) tridiagonal matrix.
    fn thomas(b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let (mut c, mut d) = (vec![0.0; n], vec![0.0; n]);
        c[0] = -1.0 / 2.0;
        d[0] = b[0] / 2.0;
        for i in 1..n {
            let m = 2.0 + c[i - 1];
            c[i] = -1.0 / m;
            d[i] = (b[i] + d[i - 1]) / m;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = d[i] - c[i] * x[i + 1];
        }
        x
    }

    #[test]
    fn identity_in_one_iteration() {
        let a = CsrMatrix::identity(5);
        let b = vec![1.0, -2.0, 3.0, 0.5, 4.0];
        for opts in [KrylovOptions::gmres(1e-12, 10), KrylovOptions::bicgstab(1e-12, 10), KrylovOptions::cg(1e-12, 10)] {
            let mut x = vec![0.0; 5];
            let s = krylov_solve(&a, &b, &mut x, &opts).unwrap();
            assert_eq!(s.iterations, 1);
            assert_eq!(x, b);
        }
    }

    #[test]
    fn laplacian_matches_thomas() {
        let n = 100;
        let a = laplacian_1d(n);
        let b: Vec<f64> = (0..n).map(|i| ((i as f64) * 0.37).sin()).collect();
        let exact = thomas(&b);
        for opts in [KrylovOptions::gmres(1e-10, 5000), KrylovOptions::bicgstab(1e-10, 5000), KrylovOptions::cg(1e-10, 5000)] {
            let mut x = vec![0.0; n];
            krylov_solve(&a, &b, &mut x, &opts).unwrap();
            let err = x.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let scale = exact.iter().map(|v| v.abs()).fold(0.0, f64::max);
            assert!(err <= 1e-7 * scale, "{:?}: {err}", opts.method);
        }
    }

    #[test]
    fn reports_non_convergence() {
        let a = laplacian_1d(200);
        let b = vec![1.0; 200];
        let mut x = vec![0.0; 200];
        match krylov_solve(&a, &b, &mut x, &KrylovOptions::gmres(1e-12, 5)) {
            Err(FsiError::NonConvergence { iterations, residual }) => {
                assert_eq!(iterations, 5);
                assert!(residual > 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let a = laplacian_1d(10);
        let mut x = vec![1.0; 10];
        krylov_solve(&a, &[0.0; 10], &mut x, &KrylovOptions::gmres(1e-8, 10)).unwrap();
        assert!(x.iter().all(|&v| v == 0.0));
    }
}
