//! Zero-isoline extraction, enclosed area and contour distances.

use std::collections::{HashMap, HashSet};

use crate::error::{FsiError, Result};
use crate::grid::{CellField, GridSpec};
use crate::scalar::Real;

/// Ordered vertices of a level-set isoline.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourPolyline {
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
    /// Shoelace area (positive for counterclockwise order).
    pub enclosed_area: f64,
}

/// Signed shoelace area of a closed polygon.
pub fn shoelace_area(points: &[(f64, f64)]) -> f64 {
    let n = points.len();
    let mut s = 0.0;
    for k in 0..n {
        let (x0, y0) = points[k];
        let (x1, y1) = points[(k + 1) % n];
        s += x0 * y1 - x1 * y0;
    }
    0.5 * s
}

/// Edge between two neighbouring cell centres: `(axis, i, j)` joins
/// `(i, j)` to `(i + 1, j)` for axis 0 and to `(i, j + 1)` for axis 1.
type EdgeId = (u8, isize, isize);

/// Marching squares on the cell-centre lattice of `phi` at level `level`.
/// Inside is `φ < level`. Returns every connected component.
fn components<T: Real>(grid: &GridSpec<T>, phi: &CellField<T>, level: f64) -> (Vec<Vec<(f64, f64)>>, bool) {
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let val = |i: isize, j: isize| phi.get(i, j).to_f64_lossy() - level;
    let centre = |i: isize, j: isize| {
        let (x, y) = grid.cell_center(i, j);
        (x.to_f64_lossy(), y.to_f64_lossy())
    };
    let point = |e: EdgeId| {
        let (a, b) = if e.0 == 0 { ((e.1, e.2), (e.1 + 1, e.2)) } else { ((e.1, e.2), (e.1, e.2 + 1)) };
        let (fa, fb) = (val(a.0, a.1), val(b.0, b.1));
        let t = fa / (fa - fb);
        let (pa, pb) = (centre(a.0, a.1), centre(b.0, b.1));
        (pa.0 + t * (pb.0 - pa.0), pa.1 + t * (pb.1 - pa.1))
    };
    let mut links: HashMap<EdgeId, Vec<EdgeId>> = HashMap::new();
    let mut link = |a: EdgeId, b: EdgeId| {
        links.entry(a).or_default().push(b);
        links.entry(b).or_default().push(a);
    };
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let c = [val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)];
            let inside = c.map(|v| v < 0.0);
            let code = inside.iter().enumerate().fold(0u8, |s, (k, &b)| s | ((b as u8) << k));
            // square edges: bottom, right, top, left
            let e = [(0u8, i, j), (1u8, i + 1, j), (0u8, i, j + 1), (1u8, i, j)];
            match code {
                0 | 15 => {}
                1 | 14 => link(e[3], e[0]),
                2 | 13 => link(e[0], e[1]),
                3 | 12 => link(e[3], e[1]),
                4 | 11 => link(e[1], e[2]),
                6 | 9 => link(e[0], e[2]),
                7 | 8 => link(e[2], e[3]),
                5 | 10 => {
                    // saddle: decide with the centre average
                    let centre_inside = (c.iter().sum::<f64>() < 0.0) == (code == 5);
                    if centre_inside {
                        link(e[3], e[2]);
                        link(e[0], e[1]);
                    } else {
                        link(e[3], e[0]);
                        link(e[1], e[2]);
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    let mut keys: Vec<EdgeId> = links.keys().copied().collect();
    keys.sort_unstable();
    let mut visited: HashSet<EdgeId> = HashSet::new();
    let walk = |first: EdgeId, visited: &mut HashSet<EdgeId>| {
        let mut chain = vec![first];
        visited.insert(first);
        let mut cur = first;
        while let Some(n) = links[&cur].iter().copied().find(|n| !visited.contains(n)) {
            visited.insert(n);
            chain.push(n);
            cur = n;
        }
        let closed = chain.len() > 2 && links[&cur].contains(&first);
        (chain, closed)
    };
    let mut out = Vec::new();
    let mut open = false;
    // open chains first, starting from their free ends
    let ends: Vec<EdgeId> = keys.iter().copied().filter(|k| links[k].len() == 1).collect();
    for e in ends.into_iter().chain(keys.iter().copied()) {
        if visited.contains(&e) {
            continue;
        }
        let (chain, closed) = walk(e, &mut visited);
        open |= !closed;
        out.push(chain.into_iter().map(point).collect());
    }
    (out, open)
}

/// Extracts the single closed zero isoline of `phi`, ordered
/// counterclockwise, with its enclosed area.
pub fn extract_contour<T: Real>(grid: &GridSpec<T>, phi: &CellField<T>) -> Result<ContourPolyline> {
    extract_level(grid, phi, 0.0)
}

/// As [`extract_contour`] for the isoline `φ = level`.
pub fn extract_level<T: Real>(grid: &GridSpec<T>, phi: &CellField<T>, level: f64) -> Result<ContourPolyline> {
    if !phi.all_finite() {
        return Err(FsiError::Contour("level set contains non-finite values".into()));
    }
    let (mut comps, open) = components(grid, phi, level);
    match comps.len() {
        0 => return Err(FsiError::Contour("no zero isoline found".into())),
        1 if !open => {}
        n => {
            return Err(FsiError::Contour(format!(
                "expected one closed isoline, found {n} component(s){}",
                if open { " including open ones" } else { "" }
            )))
        }
    }
    let mut points = comps.pop().expect("one component");
    let mut area = shoelace_area(&points);
    if area < 0.0 {
        points.reverse();
        area = -area;
    }
    if !is_simple(&points) {
        return Err(FsiError::Contour("isoline self-intersects".into()));
    }
    Ok(ContourPolyline { points, closed: true, enclosed_area: area })
}

fn segments_cross(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let orient = |p: (f64, f64), q: (f64, f64), r: (f64, f64)| (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0);
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

/// Whether a closed polygon has no properly crossing non-adjacent edges.
pub fn is_simple(points: &[(f64, f64)]) -> bool {
    let n = points.len();
    if n < 3 {
        return false;
    }
    for a in 0..n {
        let (p, q) = (points[a], points[(a + 1) % n]);
        for b in a + 2..n {
            if a == 0 && b == n - 1 {
                continue;
            }
            if segments_cross(p, q, points[b], points[(b + 1) % n]) {
                return false;
            }
        }
    }
    true
}

fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) };
    let (qx, qy) = (a.0 + t * dx, a.1 + t * dy);
    (p.0 - qx).hypot(p.1 - qy)
}

fn directed(c1: &ContourPolyline, c2: &ContourPolyline) -> f64 {
    let n = c2.points.len();
    let segs = if c2.closed { n } else { n.saturating_sub(1) };
    c1.points
        .iter()
        .map(|&p| {
            if segs == 0 {
                return c2.points.first().map_or(f64::INFINITY, |&q| (p.0 - q.0).hypot(p.1 - q.1));
            }
            (0..segs).map(|k| point_segment_distance(p, c2.points[k], c2.points[(k + 1) % n])).fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between the vertex sets of two polylines,
/// each measured against the other's segments.
pub fn hausdorff_distance(c1: &ContourPolyline, c2: &ContourPolyline) -> f64 {
    directed(c1, c2).max(directed(c2, c1))
}

/// Mean distance of the vertices from their centroid.
pub fn mean_radius(c: &ContourPolyline) -> f64 {
    let n = c.points.len() as f64;
    let (cx, cy) = c.points.iter().fold((0.0, 0.0), |s, p| (s.0 + p.0 / n, s.1 + p.1 / n));
    c.points.iter().map(|p| (p.0 - cx).hypot(p.1 - cy)).sum::<f64>() / n
}
