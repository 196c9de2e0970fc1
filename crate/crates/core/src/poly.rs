//! Dense univariate polynomials over Z and Q, cyclotomic polynomials, and
//! the exact divisibility tests built on them.
//!
//! These are working types for gcd computation, cyclotomic vanishing tests
//! and rational reconstruction; the public Laurent API lives in `laurent`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::laurent::HalfLaurent;

/// Dense polynomial over Z, coefficients in ascending degree order.
/// Canonical form: empty vector for zero, nonzero leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPoly {
    pub coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        ZPoly { coeffs: vec![BigInt::one()] }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = ZPoly { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::from_coeffs(out)
    }

    /// Exact division; returns `None` when the division leaves a remainder
    /// or is not possible over Z.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(ZPoly::zero());
        }
        let dd = d.degree().unwrap();
        let nd = self.degree()?;
        if nd < dd {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        let lead = d.coeffs.last().unwrap().clone();
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            let (q, r) = num_integer::Integer::div_rem(&c, &lead);
            if !r.is_zero() {
                return None;
            }
            quot[k] = q.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &q * dc;
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(ZPoly::from_coeffs(quot))
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_some()
    }

    /// Gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = num_integer::Integer::gcd(&g, c);
        }
        g
    }

    /// The polynomial divided by its content, with positive leading
    /// coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.coeffs.last().unwrap().is_negative() {
            c = -c;
        }
        ZPoly::from_coeffs(self.coeffs.iter().map(|v| v / &c).collect())
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::from_coeffs(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

/// The n-th cyclotomic polynomial, computed by exact division of `x^n - 1`
/// by all lower cyclotomic factors.
pub fn cyclotomic(n: u32) -> ZPoly {
    assert!(n >= 1);
    // x^n - 1
    let mut coeffs = vec![BigInt::zero(); n as usize + 1];
    coeffs[0] = BigInt::from(-1);
    coeffs[n as usize] = BigInt::one();
    let mut p = ZPoly::from_coeffs(coeffs);
    for d in 1..n {
        if n % d == 0 {
            p = p.div_exact(&cyclotomic(d)).expect("cyclotomic division is exact");
        }
    }
    p
}

/// Dense polynomial over Q in ascending degree order, canonical form as ZPoly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    pub coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        QPoly { coeffs: vec![BigRational::one()] }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = QPoly { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        QPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        QPoly::from_coeffs(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        QPoly::from_coeffs(self.coeffs.iter().map(|v| v * c).collect())
    }

    /// Euclidean division: returns `(quotient, remainder)`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let lead = d.coeffs.last().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            let q = c / lead.clone();
            quot[k] = q.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &q * dc;
            }
        }
        (QPoly::from_coeffs(quot), QPoly::from_coeffs(rem))
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.coeffs.last().unwrap().clone();
        a.scale(&lead.recip())
    }

    /// Clear denominators and content: the unique primitive integer
    /// polynomial with positive leading coefficient spanning the same line.
    pub fn to_primitive_zpoly(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = num_integer::Integer::lcm(&den, c.denom());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        let mut content = BigInt::zero();
        for c in &ints {
            content = num_integer::Integer::gcd(&content, c);
        }
        let mut out: Vec<BigInt> = ints.iter().map(|c| c / &content).collect();
        if out.last().unwrap().is_negative() {
            for c in &mut out {
                *c = -c.clone();
            }
        }
        ZPoly::from_coeffs(out)
    }
}

/// Turn a `HalfLaurent` into `(q-shift, ZPoly in q)` with nonzero constant
/// term: `p = q^shift * poly(q)`.
pub fn laurent_to_zpoly(p: &HalfLaurent) -> Option<(i64, ZPoly)> {
    let min = p.min_exp_q()?;
    let max = p.max_exp_q()?;
    let mut coeffs = vec![BigInt::zero(); (max - min) as usize + 1];
    for (&e, c) in p.terms() {
        coeffs[(e - min) as usize] = c.clone();
    }
    Some((min, ZPoly::from_coeffs(coeffs)))
}

/// Inverse of `laurent_to_zpoly`.
pub fn zpoly_to_laurent(shift: i64, p: &ZPoly) -> HalfLaurent {
    HalfLaurent::from_terms(
        p.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (shift + i as i64, c.clone())),
    )
}

/// Like `laurent_to_zpoly`, but in the variable `g` directly.
/// Requires the input to be integral (even `q`-exponents).
pub fn laurent_to_zpoly_g(p: &HalfLaurent) -> Option<(i64, ZPoly)> {
    assert!(p.is_integral(), "polynomial has half-integer exponents of g");
    let (shift, poly) = laurent_to_zpoly(p)?;
    debug_assert!(shift % 2 == 0);
    let mut coeffs = vec![BigInt::zero(); poly.coeffs.len() / 2 + 1];
    for (i, c) in poly.coeffs.iter().enumerate() {
        if !c.is_zero() {
            debug_assert!(i % 2 == 0);
            coeffs[i / 2] = c.clone();
        }
    }
    Some((shift / 2, ZPoly::from_coeffs(coeffs)))
}
