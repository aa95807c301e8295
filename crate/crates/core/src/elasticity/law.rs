use crate::scalar::Real;

/// Membrane constitutive law through `f(Z) = E′(Z) Z` and its derivative.
pub trait ConstitutiveLaw<T: Real> {
    fn f(&self, z: T) -> T;
    fn f_prime(&self, z: T) -> T;
}

/// Evan–Skalak law `E′(Z) = K (Z − 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvanSkalak<T> {
    pub stiffness: T,
}

impl<T: Real> ConstitutiveLaw<T> for EvanSkalak<T> {
    #[inline]
    fn f(&self, z: T) -> T {
        self.stiffness * (z - T::one()) * z
    }

    #[inline]
    fn f_prime(&self, z: T) -> T {
        self.stiffness * (T::lit(2.0) * z - T::one())
    }
}

/// `(f(Z), f′(Z))` for the Evan–Skalak law with stiffness `k`.
pub fn evan_skalak<T: Real>(z: T, k: T) -> (T, T) {
    let law = EvanSkalak { stiffness: k };
    (law.f(z), law.f_prime(z))
}
