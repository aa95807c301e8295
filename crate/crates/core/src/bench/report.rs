//! CSV artifacts: maximum-step tables, contours and area series.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::config::fmt17;
use super::contour::{shoelace_area, ContourPolyline};
use crate::error::{FsiError, Result};

/// Reference maximum steps `(nx, ny, Ca, explicit, semi-implicit)` of the
/// shear benchmark to `t = 1.5`.
pub const REFERENCE_MAX_DT: [(usize, usize, f64, f64, f64); 12] = [
    (128, 64, 0.001, 6.0e-3, 6.0e-2),
    (128, 64, 0.008, 2.5e-2, 1.0e-1),
    (128, 64, 0.01, 3.0e-2, 1.0e-1),
    (128, 64, 0.02, 5.0e-2, 1.5e-1),
    (256, 128, 0.001, 1.0e-3, 2.5e-2),
    (256, 128, 0.008, 1.0e-2, 8.5e-2),
    (256, 128, 0.01, 1.5e-2, 9.5e-2),
    (256, 128, 0.02, 2.5e-2, 1.0e-1),
    (512, 256, 0.001, 2.0e-4, 5.0e-3),
    (512, 256, 0.008, 6.0e-3, 6.0e-2),
    (512, 256, 0.01, 5.0e-3, 5.0e-2),
    (512, 256, 0.02, 1.0e-2, 7.5e-2),
];

/// Reference entry for a mesh and capillary number.
pub fn reference_max_dt(nx: usize, ny: usize, ca: f64) -> Option<(f64, f64)> {
    REFERENCE_MAX_DT.iter().find(|r| r.0 == nx && r.1 == ny && r.2 == ca).map(|r| (r.3, r.4))
}

/// Maximum stable steps of both couplings for one mesh and `Ca`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DtTableRow {
    pub nx: usize,
    pub ny: usize,
    pub ca: f64,
    pub explicit: f64,
    pub semi_implicit: f64,
}

impl DtTableRow {
    /// `Δt_SI / Δt_EX`.
    pub fn ratio(&self) -> f64 {
        self.semi_implicit / self.explicit
    }
}

/// Writes `mesh,ca,scheme,max_dt,ratio`, one line per scheme.
pub fn write_dt_table(mut w: impl Write, rows: &[DtTableRow]) -> Result<()> {
    writeln!(w, "mesh,ca,scheme,max_dt,ratio")?;
    for r in rows {
        let mesh = format!("{}x{}", r.nx, r.ny);
        for (scheme, dt) in [("Explicit", r.explicit), ("SemiImplicit", r.semi_implicit)] {
            writeln!(w, "{mesh},{},{scheme},{},{}", fmt17(r.ca), fmt17(dt), fmt17(r.ratio()))?;
        }
    }
    Ok(())
}

/// Writes the vertices under an `x,y` header.
pub fn write_contour_csv(mut w: impl Write, c: &ContourPolyline) -> Result<()> {
    writeln!(w, "x,y")?;
    for &(x, y) in &c.points {
        writeln!(w, "{},{}", fmt17(x), fmt17(y))?;
    }
    Ok(())
}

/// Reads an `x,y` file as a closed contour.
pub fn read_contour_csv(r: impl BufRead) -> Result<ContourPolyline> {
    let mut lines = r.lines();
    match lines.next().transpose()? {
        Some(h) if h.trim() == "x,y" => {}
        other => return Err(FsiError::Parse(format!("expected `x,y` header, found {other:?}"))),
    }
    let mut points = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = || FsiError::Parse(format!("line {}: malformed `x,y` row `{line}`", k + 2));
        let (x, y) = line.split_once(',').ok_or_else(bad)?;
        points.push((x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?));
    }
    let enclosed_area = shoelace_area(&points);
    Ok(ContourPolyline { points, closed: true, enclosed_area })
}

/// Writes `t,area`.
pub fn write_area_series(mut w: impl Write, series: &[(f64, f64)]) -> Result<()> {
    writeln!(w, "t,area")?;
    for &(t, a) in series {
        writeln!(w, "{},{}", fmt17(t), fmt17(a))?;
    }
    Ok(())
}

/// Creates `path` and hands a buffered writer to `body`.
pub fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    body(&mut w)?;
    w.flush()?;
    Ok(())
}

pub fn read_contour_file(path: &Path) -> Result<ContourPolyline> {
    read_contour_csv(BufReader::new(File::open(path)?))
}
