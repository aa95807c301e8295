use crate::scalar::Real;

/// Cut-off profile `½(1 + cos πr)` on `[-1, 1]`, zero elsewhere.
#[inline]
pub fn cutoff<T: Real>(r: T) -> T {
    if r.abs() >= T::one() {
        T::zero()
    } else {
        T::lit(0.5) * (T::one() + (T::PI() * r).cos())
    }
}

/// Antiderivative of [`cutoff`]: 0 below −1, 1 above 1.
#[inline]
pub fn smooth_heaviside<T: Real>(r: T) -> T {
    if r <= -T::one() {
        T::zero()
    } else if r >= T::one() {
        T::one()
    } else {
        T::lit(0.5) * (T::one() + r + (T::PI() * r).sin() / T::PI())
    }
}

/// Regularised Dirac mass `ζ(φ/ε)/ε`.
#[inline]
pub fn smooth_delta<T: Real>(phi: T, epsilon: T) -> T {
    cutoff(phi / epsilon) / epsilon
}
