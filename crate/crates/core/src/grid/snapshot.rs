//! Plain-text field snapshots.
//!
//! Header line `# nx ny x_min x_max y_min y_max t`, then the `nx*ny` cell
//! values in row-major order (x fastest), one row of the grid per line.

use std::io::{BufRead, Write};

use super::{CellField, GridSpec, Staggering};
use crate::error::{FsiError, Result};
use crate::scalar::Real;

pub fn write_snapshot<T: Real, W: Write>(mut w: W, grid: &GridSpec<T>, field: &CellField<T>, t: T) -> Result<()> {
    if field.staggering() != Staggering::Cell {
        return Err(FsiError::Config("snapshots hold cell-centred fields only".into()));
    }
    writeln!(
        w,
        "# {} {} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e}",
        grid.nx, grid.ny, grid.x_min, grid.x_max, grid.y_min, grid.y_max, t
    )?;
    for j in 0..grid.ny as isize {
        let row: Vec<String> = (0..grid.nx as isize).map(|i| format!("{:.16e}", field.get(i, j))).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

pub fn read_snapshot<T: Real, R: BufRead>(r: R) -> Result<(GridSpec<T>, T, CellField<T>)> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| FsiError::Parse("empty snapshot".into()))??;
    let toks: Vec<&str> = header.trim_start_matches('#').split_whitespace().collect();
    if toks.len() != 7 {
        return Err(FsiError::Parse(format!("bad snapshot header `{header}`")));
    }
    let pu = |s: &str| s.parse::<usize>().map_err(|_| FsiError::Parse(format!("bad integer `{s}`")));
    let pf = |s: &str| s.parse::<f64>().map(T::lit).map_err(|_| FsiError::Parse(format!("bad number `{s}`")));
    let grid = GridSpec::new(pu(toks[0])?, pu(toks[1])?, pf(toks[2])?, pf(toks[3])?, pf(toks[4])?, pf(toks[5])?)?;
    let t = pf(toks[6])?;
    let mut values = Vec::with_capacity(grid.nx * grid.ny);
    for line in lines {
        for tok in line?.split_whitespace() {
            values.push(pf(tok)?);
        }
    }
    if values.len() != grid.nx * grid.ny {
        return Err(FsiError::Parse(format!("expected {} values, found {}", grid.nx * grid.ny, values.len())));
    }
    let mut field = CellField::cell(&grid);
    for (k, v) in values.into_iter().enumerate() {
        field.set((k % grid.nx) as isize, (k / grid.nx) as isize, v);
    }
    Ok((grid, t, field))
}
