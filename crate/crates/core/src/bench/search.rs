//! Largest stable time step by bisection on full shear runs.

use super::config::CaseConfig;
use super::contour::is_simple;
use super::shear::{run, RunReport};
use crate::error::{FsiError, Result};
use crate::ns_solver::SchemeMode;

/// Outcome of one trial run.
#[derive(Debug, Clone)]
pub struct Probe {
    pub dt: f64,
    pub stable: bool,
    /// Why the run was rejected, if it was.
    pub reason: Option<String>,
    pub report: Option<RunReport>,
}

/// Runs `template` with the given scheme and step. Numerical failures and
/// tangled or open final contours count as unstable; configuration and I/O
/// errors are returned.
pub fn probe(template: &CaseConfig, scheme: SchemeMode, dt: f64) -> Result<Probe> {
    let mut cfg = template.clone();
    cfg.scheme = scheme;
    cfg.dt = dt;
    match run::<f64>(&cfg) {
        Ok(report) => {
            let c = &report.final_contour;
            let reason = if !c.closed {
                Some("final contour is open".to_string())
            } else if !is_simple(&c.points) {
                Some("final contour self-intersects".to_string())
            } else {
                None
            };
            Ok(Probe { dt, stable: reason.is_none(), reason, report: Some(report) })
        }
        Err(e) if e.is_numerical() => Ok(Probe { dt, stable: false, reason: Some(e.to_string()), report: None }),
        Err(e) => Err(e),
    }
}

/// Result of [`max_stable_dt_search`].
#[derive(Debug, Clone)]
pub struct DtSearch {
    pub scheme: SchemeMode,
    /// Largest step that passed.
    pub max_dt: f64,
    /// Smallest step that failed.
    pub min_failing_dt: f64,
    /// Every trial in the order it was run.
    pub probes: Vec<Probe>,
}

/// Bisects `[dt_lo, dt_hi]` until `(hi − lo)/lo ≤ rel_tol`. Both ends are
/// run first; the bracket is rejected unless `dt_lo` passes and `dt_hi` fails.
pub fn max_stable_dt_search(
    template: &CaseConfig,
    scheme: SchemeMode,
    dt_lo: f64,
    dt_hi: f64,
    rel_tol: f64,
) -> Result<DtSearch> {
    if !(dt_lo > 0.0 && dt_hi > dt_lo && dt_hi.is_finite()) {
        return Err(FsiError::Config(format!("invalid time-step bracket [{dt_lo}, {dt_hi}]")));
    }
    if !(rel_tol > 0.0) {
        return Err(FsiError::Config(format!("rel_tol must be positive, got {rel_tol}")));
    }
    let mut probes = Vec::new();
    let lo_probe = probe(template, scheme, dt_lo)?;
    let lo_ok = lo_probe.stable;
    probes.push(lo_probe);
    if !lo_ok {
        return Err(FsiError::Config(format!("bracket invalid: lower step {dt_lo} is not stable")));
    }
    let hi_probe = probe(template, scheme, dt_hi)?;
    let hi_ok = hi_probe.stable;
    probes.push(hi_probe);
    if hi_ok {
        return Err(FsiError::Config(format!("bracket invalid: upper step {dt_hi} is stable")));
    }
    let (mut lo, mut hi) = (dt_lo, dt_hi);
    while (hi - lo) / lo > rel_tol {
        let mid = 0.5 * (lo + hi);
        let p = probe(template, scheme, mid)?;
        log::info!("{scheme} dt = {mid:.6e}: {}", p.reason.as_deref().unwrap_or("stable"));
        if p.stable {
            lo = mid;
        } else {
            hi = mid;
        }
        probes.push(p);
    }
    Ok(DtSearch { scheme, max_dt: lo, min_failing_dt: hi, probes })
}

/// Re-runs `dt/2, dt/4, …` (`levels` halvings) and reports whether every
/// one of them passes.
pub fn halving_monotone(template: &CaseConfig, scheme: SchemeMode, dt: f64, levels: usize) -> Result<bool> {
    let mut h = dt;
    for _ in 0..levels {
        h *= 0.5;
        if !probe(template, scheme, h)?.stable {
            return Ok(false);
        }
    }
    Ok(true)
}
