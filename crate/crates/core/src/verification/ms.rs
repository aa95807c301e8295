//! Manufactured-solution harness for the semi-implicit membrane operators:
//! `10u + div((u·∇)M − M[∇u] − [∇u]ᵀM − ([∇u]:M)M) = S` on the unit square.

use std::f64::consts::PI;
use std::io::Write;

use super::jet::{Jet1, Jet2};
use crate::error::{FsiError, Result};
use crate::grid::{BcKind, BoundarySpec, CellField, FaceVectorField, GridSpec, Staggering};
use crate::ns_solver::{krylov_solve, CsrMatrix, KrylovOptions, RowAccumulator, SolveStats, SparseSystem, StencilContext, VelocityLayout};
use crate::scalar::Real;

/// Mass coefficient of the manufactured operator.
pub const MASS: f64 = 10.0;

/// Nested meshes of the convergence study (cells per side).
pub const DEFAULT_MESHES: [usize; 5] = [20, 40, 80, 160, 320];

/// Exact velocity `sin(πx) sin(πy)` in both components.
pub fn exact_velocity(x: f64, y: f64) -> [f64; 2] {
    let w = (PI * x).sin() * (PI * y).sin();
    [w, w]
}

/// Every entry of the exact tensor `M`: `1 + sin(πxy)`.
pub fn exact_m(x: f64, y: f64) -> f64 {
    1.0 + (PI * x * y).sin()
}

fn velocity_jets(x: f64, y: f64) -> [Jet2; 2] {
    let (jx, jy) = (Jet2::var(x, 0), Jet2::var(y, 1));
    let w = jx.scale(PI).sin() * jy.scale(PI).sin();
    [w, w]
}

fn m_jet(x: f64, y: f64) -> Jet2 {
    let (jx, jy) = (Jet2::var(x, 0), Jet2::var(y, 1));
    Jet2::constant(1.0) + (jx * jy).scale(PI).sin()
}

/// Flux `(u·∇)M − M[∇u] − [∇u]ᵀM − ([∇u]:M)M` given `u_c`, `∂_d u_c`,
/// `M_ab` and `∂_d M_ab` in any arithmetic.
fn flux<V: Copy + std::ops::Add<Output = V> + std::ops::Sub<Output = V> + std::ops::Mul<Output = V>>(
    zero: V,
    u: [V; 2],
    du: [[V; 2]; 2],
    m: [[V; 2]; 2],
    dm: [[[V; 2]; 2]; 2],
) -> [[V; 2]; 2] {
    let mut contraction = zero;
    for c in 0..2 {
        for d in 0..2 {
            contraction = contraction + du[c][d] * m[c][d];
        }
    }
    let mut t = [[zero; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let mut v = zero;
            for d in 0..2 {
                v = v + u[d] * dm[a][b][d];
            }
            for c in 0..2 {
                v = v - m[a][c] * du[c][b] - du[c][a] * m[c][b];
            }
            t[a][b] = v - contraction * m[a][b];
        }
    }
    t
}

/// Manufactured source at `(x, y)` by exact forward-mode differentiation.
pub fn manufactured_source(x: f64, y: f64) -> [f64; 2] {
    let uj = velocity_jets(x, y);
    let mj = m_jet(x, y);
    let u = [uj[0].first(), uj[1].first()];
    let du = [[uj[0].derivative(0), uj[0].derivative(1)], [uj[1].derivative(0), uj[1].derivative(1)]];
    let m = [[mj.first(); 2]; 2];
    let dm = [[[mj.derivative(0), mj.derivative(1)]; 2]; 2];
    let t = flux(Jet1::zero(), u, du, m, dm);
    let mut s = [0.0; 2];
    for a in 0..2 {
        s[a] = MASS * u[a].v + t[a][0].g[0] + t[a][1].g[1];
    }
    s
}

/// Sixth-order central first derivative of `f` along `axis`.
fn d6(f: impl Fn(f64, f64) -> f64, x: f64, y: f64, axis: usize, h: f64) -> f64 {
    let at = |k: f64| if axis == 0 { f(x + k * h, y) } else { f(x, y + k * h) };
    (-at(-3.0) + 9.0 * at(-2.0) - 45.0 * at(-1.0) + 45.0 * at(1.0) - 9.0 * at(2.0) + at(3.0)) / (60.0 * h)
}

fn flux_fd(x: f64, y: f64, h: f64) -> [[f64; 2]; 2] {
    let u = exact_velocity(x, y);
    let mut du = [[0.0; 2]; 2];
    for (c, row) in du.iter_mut().enumerate() {
        for (d, e) in row.iter_mut().enumerate() {
            *e = d6(|x, y| exact_velocity(x, y)[c], x, y, d, h);
        }
    }
    let mv = exact_m(x, y);
    let dmv = [d6(exact_m, x, y, 0, h), d6(exact_m, x, y, 1, h)];
    flux(0.0, u, du, [[mv; 2]; 2], [[dmv; 2]; 2])
}

/// Manufactured source by nested sixth-order finite differences with step `h`.
pub fn manufactured_source_fd(x: f64, y: f64, h: f64) -> [f64; 2] {
    let u = exact_velocity(x, y);
    let mut s = [0.0; 2];
    for a in 0..2 {
        s[a] = MASS * u[a];
        for b in 0..2 {
            s[a] += d6(|x, y| flux_fd(x, y, h)[a][b], x, y, b, h);
        }
    }
    s
}

/// Step of the finite-difference oracle.
pub const FD_STEP: f64 = 4e-3;

/// Largest discrepancy between the two source oracles over an `n × n`
/// lattice of points in the unit square.
pub fn source_oracle_discrepancy(n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..=n {
        for i in 0..=n {
            let (x, y) = (i as f64 / n as f64, j as f64 / n as f64);
            let (a, b) = (manufactured_source(x, y), manufactured_source_fd(x, y, FD_STEP));
            worst = worst.max((a[0] - b[0]).abs()).max((a[1] - b[1]).abs());
        }
    }
    worst
}

/// Assembled manufactured system on an `n × n` mesh of the unit square.
pub struct MsSystem<T> {
    pub grid: GridSpec<T>,
    pub layout: VelocityLayout<T>,
    pub system: SparseSystem<T>,
}

fn stag(a: usize) -> Staggering {
    if a == 0 {
        Staggering::XFace
    } else {
        Staggering::YFace
    }
}

/// Row `k` of `mass·u + div((u·∇)M − M[∇u] − [∇u]ᵀM − ([∇u]:M)M)` with
/// every entry of `M` given by the cell field `m`.
pub fn ms_operator_row<T: Real>(ctx: &StencilContext<'_, T>, m: &CellField<T>, mass: T, k: usize) -> RowAccumulator<T> {
    let (a, i, j) = ctx.layout.sample(k);
    let row = stag(a).lattice(i, j);
    let mut acc = RowAccumulator::new();
    ctx.add_point(&mut acc, a, row.0, row.1, mass);
    let s = [[m, m], [m, m]];
    ctx.add_tensor_transport(&mut acc, row, a, &s, T::one());
    ctx.add_tensor_viscosity(&mut acc, row, a, &s, -T::one());
    let m4 = |_a: usize, _b: usize, _c: usize, _d: usize, i: isize, j: isize| {
        let v = m.get(i, j);
        v * v
    };
    ctx.add_fourth_order(&mut acc, row, a, &m4, -T::one());
    acc
}

fn dirichlet_zero<T: Real>() -> BoundarySpec<T> {
    BoundarySpec::uniform(BcKind::Dirichlet(T::zero()))
}

/// Staggered assembly with Dirichlet-zero walls, `M` sampled analytically at
/// cells (ghosts included) and `S` sampled at faces.
pub fn assemble_ms_system<T: Real>(n: usize) -> Result<MsSystem<T>> {
    let grid = GridSpec::<T>::unit_square(n)?;
    let layout = VelocityLayout::new(&grid, &dirichlet_zero())?;
    let m = CellField::from_fn(&grid, Staggering::Cell, |x, y| T::lit(exact_m(x.to_f64_lossy(), y.to_f64_lossy())));
    let ctx = StencilContext::new(&grid, &layout);
    let mut rows = Vec::with_capacity(layout.len());
    let mut rhs = Vec::with_capacity(layout.len());
    for k in 0..layout.len() {
        let (a, i, j) = layout.sample(k);
        let (x2, y2) = stag(a).lattice(i, j);
        let (x, y) = grid.lattice_point(x2, y2);
        let s = manufactured_source(x.to_f64_lossy(), y.to_f64_lossy())[a];
        let (entries, constant) = ms_operator_row(&ctx, &m, T::lit(MASS), k).into_parts();
        rows.push(entries);
        rhs.push(T::lit(s) - constant);
    }
    let system = SparseSystem { matrix: CsrMatrix::from_rows(rows), rhs };
    Ok(MsSystem { grid, layout, system })
}

/// Exact velocity sampled at the unknowns of `layout`.
pub fn exact_unknowns<T: Real>(grid: &GridSpec<T>, layout: &VelocityLayout<T>) -> Vec<T> {
    (0..layout.len())
        .map(|k| {
            let (a, i, j) = layout.sample(k);
            let (x2, y2) = stag(a).lattice(i, j);
            let (x, y) = grid.lattice_point(x2, y2);
            T::lit(exact_velocity(x.to_f64_lossy(), y.to_f64_lossy())[a])
        })
        .collect()
}

/// Cell-area-weighted discrete L2 norm of the face-sampled difference.
pub fn l2_error<T: Real>(grid: &GridSpec<T>, u_h: &[T], exact: &[T]) -> T {
    assert_eq!(u_h.len(), exact.len());
    let area = grid.dx() * grid.dy();
    let sum: T = u_h.iter().zip(exact).map(|(&a, &b)| (a - b) * (a - b)).sum();
    (area * sum).sqrt()
}

/// Observed orders `log(e_k / e_{k+1}) / log(n_{k+1} / n_k)`.
pub fn convergence_orders(errors: &[f64], meshes: &[usize]) -> Result<Vec<f64>> {
    if errors.len() != meshes.len() || errors.len() < 2 {
        return Err(FsiError::Config("convergence orders need at least two meshes with one error each".into()));
    }
    Ok(errors
        .windows(2)
        .zip(meshes.windows(2))
        .map(|(e, m)| (e[0] / e[1]).ln() / (m[1] as f64 / m[0] as f64).ln())
        .collect())
}

/// Outcome of one manufactured solve.
#[derive(Debug, Clone)]
pub struct MsResult<T> {
    pub n: usize,
    pub dx: f64,
    pub error: f64,
    pub stats: SolveStats,
    pub u_h: FaceVectorField<T>,
}

/// Solver settings used by the convergence study.
pub fn default_ms_solver() -> KrylovOptions {
    KrylovOptions::bicgstab(1e-11, 20_000)
}

/// Assembles and solves the manufactured problem on an `n × n` mesh.
pub fn solve_ms<T: Real>(n: usize, opts: &KrylovOptions) -> Result<MsResult<T>> {
    let ms = assemble_ms_system::<T>(n)?;
    let mut x = vec![T::zero(); ms.layout.len()];
    let stats = krylov_solve(&ms.system.matrix, &ms.system.rhs, &mut x, opts)?;
    let exact = exact_unknowns(&ms.grid, &ms.layout);
    let error = l2_error(&ms.grid, &x, &exact).to_f64_lossy();
    let mut u_h = FaceVectorField::zeros(&ms.grid);
    ms.layout.scatter(&x, &mut u_h)?;
    Ok(MsResult { n, dx: 1.0 / n as f64, error, stats, u_h })
}

/// Writes the `elem,error` table (cells per side and L2 error).
pub fn write_convergence_csv<T>(out: &mut impl Write, results: &[MsResult<T>]) -> Result<()> {
    writeln!(out, "elem,error")?;
    for r in results {
        writeln!(out, "{},{}", r.n, crate::bench::fmt17(r.error))?;
    }
    Ok(())
}
