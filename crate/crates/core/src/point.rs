//! Evaluation points on the circle.
//!
//! A `CirclePoint` is either a primitive root of unity `g = e^{2 pi i k/n}`
//! or the generic point: `g = e^{2 pi i t}` with `t` irrational and `g`
//! transcendental, so a Laurent polynomial vanishes there only when it is
//! the zero polynomial. Root-of-unity vanishing is decided exactly through
//! cyclotomic divisibility over Z; floating point never enters.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::laurent::HalfLaurent;
use crate::poly::{cyclotomic, laurent_to_zpoly, laurent_to_zpoly_g};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CirclePoint {
    /// `g = e^{2 pi i k/n}` with `gcd(k, n) = 1` and `0 <= k < n`.
    RootOfUnity { n: u32, k: u32 },
    Generic,
}

impl CirclePoint {
    /// Normalized root of unity `e^{2 pi i k/n}`; reduces the fraction and
    /// the residue so the stored order is exact.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n > 0, "order must be positive");
        let k = k.rem_euclid(n as i64) as u32;
        let d = k.gcd(&n);
        CirclePoint::RootOfUnity { n: n / d, k: k / d }
    }

    pub fn generic() -> Self {
        CirclePoint::Generic
    }

    /// Order of the point as a root of unity, `None` for the generic point.
    pub fn order(&self) -> Option<u32> {
        match self {
            CirclePoint::RootOfUnity { n, .. } => Some(*n),
            CirclePoint::Generic => None,
        }
    }

    /// Angle parameter `t` with `g = e^{2 pi i t}` for numeric cross-checks.
    /// The generic point gets an arbitrary irrational-looking proxy.
    pub fn angle(&self) -> f64 {
        match self {
            CirclePoint::RootOfUnity { n, k } => *k as f64 / *n as f64,
            CirclePoint::Generic => std::f64::consts::FRAC_1_SQRT_2 / 3.0,
        }
    }

    /// Does `g^v = 1` hold at this point?
    pub fn is_torsion_of(&self, v: i64) -> bool {
        match self {
            CirclePoint::RootOfUnity { n, .. } => v.rem_euclid(*n as i64) == 0,
            CirclePoint::Generic => v == 0,
        }
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CirclePoint::RootOfUnity { n, k } => write!(f, "{}/{}", k, n),
            CirclePoint::Generic => write!(f, "generic"),
        }
    }
}

/// Exact vanishing test for a Laurent polynomial at a circle point.
///
/// At `RootOfUnity{n,k}` an integral polynomial is rewritten in `g` and
/// tested for divisibility by the n-th cyclotomic polynomial. When
/// half-integer exponents are present the test runs at the `q`-level with
/// `q = e^{2 pi i k / 2n}`, whose minimal polynomial is the cyclotomic
/// polynomial of order `2n / gcd(k, 2n)`.
pub fn vanishes_at(p: &HalfLaurent, pt: &CirclePoint) -> bool {
    match pt {
        CirclePoint::Generic => p.is_zero(),
        CirclePoint::RootOfUnity { n, k } => {
            if p.is_zero() {
                return true;
            }
            if p.is_integral() {
                let (_, poly) = laurent_to_zpoly_g(p).unwrap();
                cyclotomic(*n).divides(&poly)
            } else {
                let (_, poly) = laurent_to_zpoly(p).unwrap();
                let ord = 2 * n / (2 * n).gcd(k);
                cyclotomic(ord).divides(&poly)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_cubed_minus_one_roots() {
        let p = HalfLaurent::from_g_terms(&[(3, 1), (0, -1)]);
        assert!(vanishes_at(&p, &CirclePoint::root_of_unity(3, 1)));
        assert!(!vanishes_at(&p, &CirclePoint::root_of_unity(2, 1)));
        assert!(vanishes_at(&p, &CirclePoint::root_of_unity(1, 0)));
    }

    #[test]
    fn generic_point_is_transcendental() {
        let p = HalfLaurent::from_g_terms(&[(0, -2), (1, 1)]); // g - 2
        assert!(!vanishes_at(&p, &CirclePoint::Generic));
        assert!(vanishes_at(&HalfLaurent::zero(), &CirclePoint::Generic));
    }

    #[test]
    fn half_power_vanishing() {
        // q^2 - 1 = g - 1 vanishes at g = 1; q - 1 does not vanish at the
        // point g = 1 reached as q = e^{i pi} = -1.
        let q = HalfLaurent::q_pow(1);
        let one = HalfLaurent::one();
        let p = q.mul(&q).sub(&one);
        assert!(vanishes_at(&p, &CirclePoint::root_of_unity(1, 0)));
        // g = 1 with k = 0: q = 1, so q - 1 does vanish here.
        assert!(vanishes_at(&q.sub(&one), &CirclePoint::root_of_unity(1, 0)));
        // at g = -1 (n = 2, k = 1): q = i, and q^2 + 1 vanishes.
        let p2 = q.mul(&q).add(&one);
        assert!(vanishes_at(&p2, &CirclePoint::root_of_unity(2, 1)));
        assert!(!vanishes_at(&q.sub(&one), &CirclePoint::root_of_unity(2, 1)));
    }

    #[test]
    fn normalization() {
        assert_eq!(CirclePoint::root_of_unity(6, 4), CirclePoint::RootOfUnity { n: 3, k: 2 });
        assert_eq!(CirclePoint::root_of_unity(4, -1), CirclePoint::RootOfUnity { n: 4, k: 3 });
    }

    #[test]
    fn torsion() {
        let p = CirclePoint::root_of_unity(3, 1);
        assert!(p.is_torsion_of(3));
        assert!(p.is_torsion_of(6));
        assert!(!p.is_torsion_of(2));
        assert!(!CirclePoint::Generic.is_torsion_of(5));
    }
}
