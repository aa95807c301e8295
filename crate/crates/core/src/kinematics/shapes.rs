use crate::scalar::Real;

/// Closed-form initial level set, used to evaluate `φ0(Y)`.
pub trait AnalyticLevelSet<T: Real> {
    fn value(&self, x: T, y: T) -> T;
    fn gradient(&self, x: T, y: T) -> (T, T);
}

/// Signed distance to a circle, negative inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle<T> {
    pub cx: T,
    pub cy: T,
    pub radius: T,
}

impl<T: Real> AnalyticLevelSet<T> for Circle<T> {
    fn value(&self, x: T, y: T) -> T {
        (x - self.cx).hypot(y - self.cy) - self.radius
    }

    fn gradient(&self, x: T, y: T) -> (T, T) {
        let (dx, dy) = (x - self.cx, y - self.cy);
        let r = dx.hypot(dy);
        if r == T::zero() {
            (T::one(), T::zero())
        } else {
            (dx / r, dy / r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_distance_and_gradient() {
        let c = Circle { cx: 1.0, cy: 0.0, radius: 0.5 };
        assert_eq!(c.value(1.0, 1.0), 0.5);
        assert_eq!(c.gradient(1.0, 2.0), (0.0, 1.0));
        assert_eq!(c.gradient(1.0, 0.0), (1.0, 0.0));
    }
}
