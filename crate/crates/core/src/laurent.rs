//! Exact Laurent polynomials with half-integer exponents of `g`.
//!
//! `HalfLaurent` models the ring Z[g^{1/2}, g^{-1/2}]. Internally every
//! exponent is stored as an integer power of the base variable `q` with
//! `g = q^2`, so `g^{3/2}` is the monomial `q^3`. The coefficient map is
//! canonical: no zero coefficients are ever stored, which makes structural
//! equality ring equality.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::RingError;

/// Laurent polynomial in `q` (`g = q^2`) with arbitrary-precision integer
/// coefficients. Exponents are powers of `q`, i.e. twice the `g`-exponent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfLaurent {
    coeffs: BTreeMap<i64, BigInt>,
}

impl HalfLaurent {
    pub fn zero() -> Self {
        HalfLaurent { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial_q(0, BigInt::one())
    }

    /// The monomial `c * q^e` (so `c * g^{e/2}`).
    pub fn monomial_q(e: i64, c: BigInt) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(e, c);
        }
        HalfLaurent { coeffs }
    }

    /// The monomial `c * g^e`.
    pub fn monomial_g(e: i64, c: i64) -> Self {
        Self::monomial_q(2 * e, BigInt::from(c))
    }

    /// `g^e` with unit coefficient.
    pub fn g_pow(e: i64) -> Self {
        Self::monomial_g(e, 1)
    }

    /// `g^{e/2}`: a `q`-power.
    pub fn q_pow(e: i64) -> Self {
        Self::monomial_q(e, BigInt::one())
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial_q(0, BigInt::from(c))
    }

    pub fn constant_big(c: BigInt) -> Self {
        Self::monomial_q(0, c)
    }

    /// Build from `(q-exponent, coefficient)` pairs; repeated exponents add.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigInt)>>(terms: I) -> Self {
        let mut p = HalfLaurent::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Build `sum c_i g^{e_i}` from integer pairs.
    pub fn from_g_terms(terms: &[(i64, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(e, c)| (2 * e, BigInt::from(c))))
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).map_or(false, |c| c.is_one())
    }

    /// True iff every exponent is an integer power of `g` (even `q`-power).
    pub fn is_integral(&self) -> bool {
        self.coeffs.keys().all(|e| e % 2 == 0)
    }

    /// True iff this is `±q^e`, the units of the Laurent ring.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.values().next().unwrap().abs().is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty() || (self.coeffs.len() == 1 && self.coeffs.contains_key(&0))
    }

    /// Coefficient of `q^e` (zero when absent).
    pub fn coeff_q(&self, e: i64) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Coefficient of `g^e`.
    pub fn coeff_g(&self, e: i64) -> BigInt {
        self.coeff_q(2 * e)
    }

    pub fn min_exp_q(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp_q(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (&e, c) in &other.coeffs {
            r.add_term(e, c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (&e, c) in &other.coeffs {
            r.add_term(e, -c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        HalfLaurent {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut r = HalfLaurent::zero();
        for (&ea, ca) in &self.coeffs {
            for (&eb, cb) in &other.coeffs {
                r.add_term(ea + eb, ca * cb);
            }
        }
        r
    }

    pub fn mul_scalar(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return HalfLaurent::zero();
        }
        HalfLaurent {
            coeffs: self.coeffs.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    /// Multiply by `q^e` (shift all exponents).
    pub fn shift_q(&self, e: i64) -> Self {
        HalfLaurent {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k + e, c.clone())).collect(),
        }
    }

    /// Integer power. Negative exponents are defined only for units `±q^e`.
    pub fn pow(&self, n: i64) -> Result<Self, RingError> {
        if n < 0 {
            if !self.is_unit() {
                return Err(RingError::NotInvertible);
            }
            let (&e, c) = self.coeffs.iter().next().unwrap();
            // (c q^e)^{-1} = c q^{-e} since c = ±1
            let inv = HalfLaurent::monomial_q(-e, c.clone());
            return inv.pow(-n);
        }
        let mut acc = HalfLaurent::one();
        let mut base = self.clone();
        let mut n = n as u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Content: gcd of all coefficients (zero polynomial has content 0).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.coeffs.values() {
            g = num_integer::Integer::gcd(&g, c);
        }
        g
    }

    /// Exact division by an integer; panics when not exact.
    pub fn div_scalar_exact(&self, c: &BigInt) -> Self {
        assert!(!c.is_zero(), "division by zero scalar");
        HalfLaurent {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, v)| {
                    let (q, r) = num_integer::Integer::div_rem(v, c);
                    assert!(r.is_zero(), "inexact scalar division");
                    (e, q)
                })
                .collect(),
        }
    }

    /// Evaluate at `g = e^{2 pi i t}` via the principal branch `q = e^{i pi t}`.
    pub fn eval_unit_circle(&self, t: f64) -> Complex64 {
        self.eval_q(Complex64::from_polar(1.0, std::f64::consts::PI * t))
    }

    /// Evaluate at an arbitrary nonzero complex value of `q`.
    pub fn eval_q(&self, q: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&e, c) in &self.coeffs {
            let cf = c.to_f64().unwrap_or(f64::NAN);
            acc += cf * q.powi(e as i32);
        }
        acc
    }

    /// Substitute `g -> g^-1` (conjugation on the circle).
    pub fn bar(&self) -> Self {
        HalfLaurent {
            coeffs: self.coeffs.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    /// `1 - g^v`.
    pub fn one_minus_g_pow(v: i64) -> Self {
        Self::from_g_terms(&[(0, 1), (v, -1)])
    }

    /// `g^v - 1`.
    pub fn g_pow_minus_one(v: i64) -> Self {
        Self::from_g_terms(&[(v, 1), (0, -1)])
    }
}

impl fmt::Display for HalfLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in &self.coeffs {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let unit_coeff = abs.is_one();
            if e == 0 {
                write!(f, "{}", abs)?;
            } else {
                if !unit_coeff {
                    write!(f, "{}*", abs)?;
                }
                if e == 2 {
                    write!(f, "g")?;
                } else if e % 2 == 0 {
                    write!(f, "g^{}", e / 2)?;
                } else {
                    write!(f, "g^({}/2)", e)?;
                }
            }
        }
        Ok(())
    }
}
