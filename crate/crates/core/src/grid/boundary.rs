use std::fmt;
use std::str::FromStr;

use super::{FaceVectorField, Field, GHOST};
use crate::error::{FsiError, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

/// Boundary condition on one side of the domain.
///
/// For velocity fields the same condition is shared by both components; a
/// moving wall imposes its speed on the tangential component and zero on the
/// normal one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BcKind<T> {
    /// Zero-gradient copy of the nearest stored value.
    Neumann,
    Dirichlet(T),
    /// Wall sliding with the given tangential speed.
    MovingWall(T),
    Periodic,
}

impl<T: Real> BcKind<T> {
    /// Value imposed on a component, given whether the component is normal to the side.
    fn imposed(&self, normal: bool) -> T {
        match *self {
            BcKind::Dirichlet(g) => g,
            BcKind::MovingWall(s) => {
                if normal {
                    T::zero()
                } else {
                    s
                }
            }
            _ => T::zero(),
        }
    }
}

impl<T: Real> fmt::Display for BcKind<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BcKind::Neumann => write!(f, "neumann"),
            BcKind::Dirichlet(g) => write!(f, "dirichlet:{g}"),
            BcKind::MovingWall(s) => write!(f, "moving_wall:{s}"),
            BcKind::Periodic => write!(f, "periodic"),
        }
    }
}

impl<T: Real> FromStr for BcKind<T> {
    type Err = FsiError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k.trim().to_string(), Some(a.trim().to_string())),
            None => (s.clone(), None),
        };
        let value = |a: Option<String>| -> Result<T> {
            let a = a.ok_or_else(|| FsiError::Config(format!("boundary kind `{kind}` needs a value")))?;
            a.parse::<f64>()
                .map(T::lit)
                .map_err(|_| FsiError::Config(format!("bad boundary value `{a}`")))
        };
        match kind.as_str() {
            "neumann" => Ok(BcKind::Neumann),
            "periodic" => Ok(BcKind::Periodic),
            "dirichlet" => Ok(BcKind::Dirichlet(value(arg)?)),
            "moving_wall" | "movingwall" => Ok(BcKind::MovingWall(value(arg)?)),
            other => Err(FsiError::Config(format!(
                "unknown boundary condition `{other}` (expected neumann, dirichlet:<v>, moving_wall:<v>, periodic)"
            ))),
        }
    }
}

/// One condition per side for a field family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySpec<T> {
    pub left: BcKind<T>,
    pub right: BcKind<T>,
    pub bottom: BcKind<T>,
    pub top: BcKind<T>,
}

impl<T: Real> BoundarySpec<T> {
    pub fn uniform(kind: BcKind<T>) -> Self {
        Self { left: kind, right: kind, bottom: kind, top: kind }
    }

    pub fn neumann() -> Self {
        Self::uniform(BcKind::Neumann)
    }

    pub fn periodic() -> Self {
        Self::uniform(BcKind::Periodic)
    }

    pub fn side(&self, side: Side) -> BcKind<T> {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
            Side::Bottom => self.bottom,
            Side::Top => self.top,
        }
    }

    /// Periodicity must be paired across opposite sides.
    pub fn validate(&self) -> Result<()> {
        let lr = matches!(self.left, BcKind::Periodic) == matches!(self.right, BcKind::Periodic);
        let bt = matches!(self.bottom, BcKind::Periodic) == matches!(self.top, BcKind::Periodic);
        if lr && bt {
            Ok(())
        } else {
            Err(FsiError::Config("periodic boundaries must be set on both opposite sides".into()))
        }
    }

    fn axis(&self, axis: usize) -> (BcKind<T>, BcKind<T>) {
        if axis == 0 {
            (self.left, self.right)
        } else {
            (self.bottom, self.top)
        }
    }
}

/// How a possibly out-of-range index along one axis maps onto stored data:
/// `value = scale * f[index] + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisResolve<T> {
    pub index: isize,
    pub scale: T,
    pub offset: T,
}

impl<T: Real> AxisResolve<T> {
    fn direct(index: isize) -> Self {
        Self { index, scale: T::one(), offset: T::zero() }
    }

    fn fixed(value: T) -> Self {
        Self { index: 0, scale: T::zero(), offset: value }
    }

    fn reflect(index: isize, wall: T) -> Self {
        Self { index, scale: -T::one(), offset: wall + wall }
    }

    /// Resolves index `k` along an axis holding `n` stored samples.
    ///
    /// `on_boundary` tells whether the first and last stored samples lie on
    /// the domain boundary (normal velocity component) or half a cell inside.
    pub fn resolve(k: isize, n: usize, on_boundary: bool, low: BcKind<T>, high: BcKind<T>) -> Self {
        let n = n as isize;
        if matches!(low, BcKind::Periodic) {
            let period = if on_boundary { n - 1 } else { n };
            return Self::direct(k.rem_euclid(period));
        }
        let last = n - 1;
        let at_low = if on_boundary { k <= 0 } else { k < 0 };
        let at_high = if on_boundary { k >= last } else { k > last };
        if !at_low && !at_high {
            return Self::direct(k);
        }
        let (kind, mirror, on_wall) = if at_low {
            let mirror = if on_boundary { -k } else { -k - 1 };
            (low, mirror, on_boundary && k == 0)
        } else {
            let mirror = if on_boundary { 2 * last - k } else { 2 * n - 1 - k };
            (high, mirror, on_boundary && k == last)
        };
        match kind {
            BcKind::Neumann => Self::direct(k.clamp(0, last)),
            BcKind::Dirichlet(_) | BcKind::MovingWall(_) => {
                let wall = kind.imposed(on_boundary);
                if on_wall {
                    Self::fixed(wall)
                } else {
                    Self::reflect(mirror.clamp(0, last), wall)
                }
            }
            BcKind::Periodic => unreachable!("periodic handled above"),
        }
    }
}

/// Resolves a 2D stored index through the boundary rules of `spec`.
/// Returns `(i, j, scale, offset)`.
pub(crate) fn resolve_2d<T: Real>(
    f: &Field<T>,
    spec: &BoundarySpec<T>,
    i: isize,
    j: isize,
) -> (isize, isize, T, T) {
    let stag = f.staggering();
    let (xl, xh) = spec.axis(0);
    let (yl, yh) = spec.axis(1);
    let rx = AxisResolve::resolve(i, f.ni(), stag.on_boundary(0), xl, xh);
    let ry = AxisResolve::resolve(j, f.nj(), stag.on_boundary(1), yl, yh);
    (rx.index, ry.index, rx.scale * ry.scale, rx.scale * ry.offset + rx.offset)
}

/// Populates ghost layers (and Dirichlet boundary samples) according to `spec`.
/// Interior samples off the boundary are left untouched.
pub fn fill_ghosts<T: Real>(field: &mut Field<T>, spec: &BoundarySpec<T>) -> Result<()> {
    spec.validate()?;
    let stag = field.staggering();
    let (ni, nj) = (field.ni() as isize, field.nj() as isize);
    let g = GHOST as isize;

    // Boundary samples carrying an imposed value come first; ghosts mirror them.
    for (axis, n) in [(0usize, ni), (1usize, nj)] {
        if !stag.on_boundary(axis) {
            continue;
        }
        let (low, high) = spec.axis(axis);
        for (kind, k) in [(low, 0), (high, n - 1)] {
            if matches!(kind, BcKind::Dirichlet(_) | BcKind::MovingWall(_)) {
                let val = kind.imposed(true);
                let m = if axis == 0 { nj } else { ni };
                for t in 0..m {
                    let (i, j) = if axis == 0 { (k, t) } else { (t, k) };
                    field.set(i, j, val);
                }
            }
        }
        if matches!(low, BcKind::Periodic) {
            // last stored face duplicates the first
            let m = if axis == 0 { nj } else { ni };
            for t in 0..m {
                let (src, dst) = if axis == 0 { ((0, t), (n - 1, t)) } else { ((t, 0), (t, n - 1)) };
                let v = field.get(src.0, src.1);
                field.set(dst.0, dst.1, v);
            }
        }
    }

    for j in -g..nj + g {
        for i in -g..ni + g {
            if i >= 0 && i < ni && j >= 0 && j < nj {
                continue;
            }
            let (si, sj, scale, offset) = resolve_2d(field, spec, i, j);
            let v = if scale == T::zero() { offset } else { scale * field.get(si, sj) + offset };
            field.set(i, j, v);
        }
    }
    Ok(())
}

/// Applies the side conditions to both velocity components.
pub fn fill_velocity_ghosts<T: Real>(vel: &mut FaceVectorField<T>, spec: &BoundarySpec<T>) -> Result<()> {
    fill_ghosts(&mut vel.u, spec)?;
    fill_ghosts(&mut vel.v, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{GridSpec, Staggering};

    fn grid() -> GridSpec<f64> {
        GridSpec::new(8, 4, -4.0, 4.0, -2.0, 2.0).unwrap()
    }

    #[test]
    fn neumann_preserves_constant() {
        let g = grid();
        let mut f = Field::constant(&g, Staggering::Cell, 0.0);
        f.map_interior(|_, _, _| 3.5);
        fill_ghosts(&mut f, &BoundarySpec::neumann()).unwrap();
        assert!(f.raw().iter().all(|&v| v == 3.5));
    }

    #[test]
    fn dirichlet_zero_on_wall_face() {
        let g = grid();
        let mut vel = FaceVectorField::from_fn(&g, |_, _| 1.0, |_, _| 1.0);
        fill_velocity_ghosts(&mut vel, &BoundarySpec::uniform(BcKind::Dirichlet(0.0))).unwrap();
        for i in 0..vel.v.ni() as isize {
            assert_eq!(vel.v.get(i, 0), 0.0);
            assert_eq!(vel.v.get(i, vel.v.nj() as isize - 1), 0.0);
            // odd reflection beyond the wall
            assert_eq!(vel.v.get(i, -1), -1.0);
        }
        for j in 0..vel.u.nj() as isize {
            assert_eq!(vel.u.get(0, j), 0.0);
        }
    }

    #[test]
    fn moving_wall_linear_extrapolation() {
        // u = gamma_dot * y with gamma_dot = 1, top wall speed 2 at y = 2.
        let g = grid();
        let mut vel = FaceVectorField::from_fn(&g, |_, y| y, |_, _| 0.0);
        let spec = BoundarySpec {
            left: BcKind::Neumann,
            right: BcKind::Neumann,
            bottom: BcKind::MovingWall(-2.0),
            top: BcKind::MovingWall(2.0),
        };
        fill_velocity_ghosts(&mut vel, &spec).unwrap();
        let top = vel.u.nj() as isize - 1;
        for i in 0..vel.u.ni() as isize {
            let inner = vel.u.get(i, top);
            let ghost = vel.u.get(i, top + 1);
            // wall value is the mean of the two straddling samples
            assert!((0.5 * (inner + ghost) - 2.0).abs() < 1e-14);
            // linear field continues exactly
            assert!((ghost - 2.5).abs() < 1e-14);
            assert!((vel.u.get(i, top + 2) - 3.5).abs() < 1e-14);
            assert!((vel.u.get(i, -1) + 2.5).abs() < 1e-14);
        }
        // normal component vanishes on the moving wall
        for i in 0..vel.v.ni() as isize {
            assert_eq!(vel.v.get(i, vel.v.nj() as isize - 1), 0.0);
        }
    }

    #[test]
    fn periodic_wraps() {
        let g = grid();
        let mut f = Field::from_fn(&g, Staggering::Cell, |x, y| x + 10.0 * y);
        let orig = f.clone();
        fill_ghosts(&mut f, &BoundarySpec::periodic()).unwrap();
        assert_eq!(f.get(-1, 0), orig.get(7, 0));
        assert_eq!(f.get(8, 3), orig.get(0, 3));
        assert_eq!(f.get(-2, -1), orig.get(6, 3));
    }

    #[test]
    fn unpaired_periodic_is_config_error() {
        let spec = BoundarySpec { left: BcKind::Periodic, ..BoundarySpec::<f64>::neumann() };
        let mut f = Field::cell(&grid());
        assert!(matches!(fill_ghosts(&mut f, &spec), Err(FsiError::Config(_))));
    }

    #[test]
    fn parse_kinds() {
        assert_eq!("neumann".parse::<BcKind<f64>>().unwrap(), BcKind::Neumann);
        assert_eq!("moving_wall:2".parse::<BcKind<f64>>().unwrap(), BcKind::MovingWall(2.0));
        assert_eq!("Dirichlet: -1.5".parse::<BcKind<f64>>().unwrap(), BcKind::Dirichlet(-1.5));
        assert!(matches!("robin:1".parse::<BcKind<f64>>(), Err(FsiError::Config(_))));
    }

    #[test]
    fn interior_untouched() {
        let g = grid();
        let mut f = Field::from_fn(&g, Staggering::Cell, |x, y| x * y);
        let before = f.interior_values();
        fill_ghosts(&mut f, &BoundarySpec::uniform(BcKind::Dirichlet(1.0))).unwrap();
        assert_eq!(before, f.interior_values());
    }
}
