//! Rational functions in `g` over the integers.
//!
//! `RationalFn` is a fraction of `HalfLaurent`s kept in a canonical reduced
//! form: the denominator is an integer polynomial in `q` with nonzero
//! constant term and positive leading coefficient, coprime to the numerator
//! polynomial part, with no integer content shared between the two. Values
//! of integral rational functions at circle points are exactly the scalars
//! the localization calculus works modulo.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::RingError;
use crate::laurent::HalfLaurent;
use crate::point::{vanishes_at, CirclePoint};
use crate::poly::{laurent_to_zpoly, zpoly_to_laurent, ZPoly};

#[derive(Clone, Debug)]
pub struct RationalFn {
    num: HalfLaurent,
    den: HalfLaurent,
}

impl RationalFn {
    /// Canonical fraction `num / den`. Errors when `den` is zero.
    pub fn new(num: HalfLaurent, den: HalfLaurent) -> Result<Self, RingError> {
        if den.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RationalFn { num, den: HalfLaurent::one() });
        }
        let (b, dpoly) = laurent_to_zpoly(&den).unwrap();
        let (a, npoly) = laurent_to_zpoly(&num).unwrap();
        // pull the q-shift of the denominator into the numerator
        let shift = a - b;

        let ncont = npoly_content(&npoly);
        let dcont = npoly_content(&dpoly);
        let nprim = divide_content(&npoly, &ncont);
        let dprim = divide_content(&dpoly, &dcont);
        let g = nprim.to_qpoly().gcd(&dprim.to_qpoly()).to_primitive_zpoly();
        let mut nred = nprim.div_exact(&g).expect("gcd divides numerator");
        let mut dred = dprim.div_exact(&g).expect("gcd divides denominator");

        let cg = num_integer::Integer::gcd(&ncont, &dcont);
        let mut nc = &ncont / &cg;
        let dc = &dcont / &cg;
        if dred.coeffs.last().unwrap().is_negative() {
            nc = -nc;
            dred = ZPoly::from_coeffs(dred.coeffs.iter().map(|c| -c).collect());
        }
        nred = ZPoly::from_coeffs(nred.coeffs.iter().map(|c| c * &nc).collect());
        dred = ZPoly::from_coeffs(dred.coeffs.iter().map(|c| c * &dc).collect());

        Ok(RationalFn {
            num: zpoly_to_laurent(shift, &nred),
            den: zpoly_to_laurent(0, &dred),
        })
    }

    pub fn zero() -> Self {
        RationalFn { num: HalfLaurent::zero(), den: HalfLaurent::one() }
    }

    pub fn one() -> Self {
        RationalFn { num: HalfLaurent::one(), den: HalfLaurent::one() }
    }

    pub fn from_laurent(p: HalfLaurent) -> Self {
        RationalFn { num: p, den: HalfLaurent::one() }
    }

    pub fn from_integer(c: i64) -> Self {
        Self::from_laurent(HalfLaurent::constant(c))
    }

    pub fn from_big_rational(r: &BigRational) -> Self {
        RationalFn::new(
            HalfLaurent::constant_big(r.numer().clone()),
            HalfLaurent::constant_big(r.denom().clone()),
        )
        .unwrap()
    }

    /// `g^e` as a rational function.
    pub fn g_pow(e: i64) -> Self {
        Self::from_laurent(HalfLaurent::g_pow(e))
    }

    pub fn numerator(&self) -> &HalfLaurent {
        &self.num
    }

    pub fn denominator(&self) -> &HalfLaurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True iff all exponents of numerator and denominator are integral in `g`.
    pub fn is_integral(&self) -> bool {
        self.num.is_integral() && self.den.is_integral()
    }

    /// The underlying Laurent polynomial when the denominator is 1.
    pub fn as_laurent(&self) -> Option<&HalfLaurent> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// True when this is a Laurent polynomial with rational coefficients,
    /// i.e. the denominator is a positive integer constant.
    pub fn is_rational_laurent(&self) -> bool {
        self.den.is_constant()
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        RationalFn::new(num, self.den.mul(&other.den)).unwrap()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalFn::new(self.num.mul(&other.num), self.den.mul(&other.den)).unwrap()
    }

    pub fn div(&self, other: &Self) -> Result<Self, RingError> {
        if other.is_zero() {
            return Err(RingError::ZeroDenominator);
        }
        RationalFn::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn recip(&self) -> Result<Self, RingError> {
        RationalFn::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, n: i64) -> Result<Self, RingError> {
        if n < 0 {
            return self.recip()?.pow(-n);
        }
        let mut acc = RationalFn::one();
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

    pub fn scale(&self, c: &BigRational) -> Self {
        let num = self.num.mul_scalar(c.numer());
        let den = self.den.mul_scalar(c.denom());
        RationalFn::new(num, den).unwrap()
    }

    /// Whether the denominator vanishes at a circle point.
    pub fn has_pole_at(&self, pt: &CirclePoint) -> bool {
        vanishes_at(&self.den, pt)
    }

    /// Evaluate at `g = e^{2 pi i t}` (principal `q`).
    pub fn eval_unit_circle(&self, t: f64) -> Complex64 {
        self.num.eval_unit_circle(t) / self.den.eval_unit_circle(t)
    }

    /// Exact value at `g = 1` when defined.
    pub fn eval_g_one(&self) -> Option<BigRational> {
        let den: BigInt = self.den.terms().map(|(_, c)| c.clone()).sum();
        if den.is_zero() {
            return None;
        }
        let num: BigInt = self.num.terms().map(|(_, c)| c.clone()).sum();
        Some(BigRational::new(num, den))
    }

    /// Exact constant value when the fraction is a constant.
    pub fn as_rational_constant(&self) -> Option<BigRational> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(BigRational::new(self.num.coeff_q(0), self.den.coeff_q(0)))
        } else {
            None
        }
    }

    /// Coefficients of the expansion in descending powers of `g` down to
    /// `g^k_min`, valid in the region |g| > 1. Requires integral exponents.
    /// Returns `(exponent, coefficient)` pairs in descending order.
    pub fn expand_descending(&self, k_min: i64) -> Vec<(i64, BigRational)> {
        assert!(self.is_integral(), "expansion requires integral exponents");
        let mut num: std::collections::BTreeMap<i64, BigRational> = self
            .num
            .terms()
            .map(|(&e, c)| (e / 2, BigRational::from_integer(c.clone())))
            .collect();
        let den: Vec<(i64, BigInt)> = self.den.terms().map(|(&e, c)| (e / 2, c.clone())).collect();
        let dmax = den.last().unwrap().0;
        let dlead = den.last().unwrap().1.clone();
        let mut out = Vec::new();
        while let Some(nmax) = num.keys().next_back().copied() {
            let k = nmax - dmax;
            if k < k_min {
                break;
            }
            let c = num[&nmax].clone() / BigRational::from_integer(dlead.clone());
            out.push((k, c.clone()));
            for (e, d) in &den {
                let entry = num.entry(e + k).or_insert_with(BigRational::zero);
                *entry -= &c * BigRational::from_integer(d.clone());
                if entry.is_zero() {
                    num.remove(&(e + k));
                }
            }
        }
        out
    }
}

fn npoly_content(p: &ZPoly) -> BigInt {
    let mut g = BigInt::zero();
    for c in &p.coeffs {
        g = num_integer::Integer::gcd(&g, c);
    }
    g
}

fn divide_content(p: &ZPoly, c: &BigInt) -> ZPoly {
    ZPoly::from_coeffs(p.coeffs.iter().map(|v| v / c).collect())
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        // cross-multiplication: exact on any representatives
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RationalFn {}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        // canonical storage keeps the denominator's leading coefficient
        // positive; flip both signs when that leaves a negative-leading
        // numerator so "1/(1-g^2)" prints in its familiar shape
        let flip = self
            .num
            .max_exp_q()
            .map_or(false, |e| self.num.coeff_q(e).is_negative());
        let (n, d) = if flip {
            (self.num.neg(), self.den.neg())
        } else {
            (self.num.clone(), self.den.clone())
        };
        if n.num_terms() > 1 {
            write!(f, "({})/({})", n, d)
        } else {
            write!(f, "{}/({})", n, d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(num: &[(i64, i64)], den: &[(i64, i64)]) -> RationalFn {
        RationalFn::new(HalfLaurent::from_g_terms(num), HalfLaurent::from_g_terms(den)).unwrap()
    }

    #[test]
    fn reduces_common_factor() {
        // (g^2 - 1)/(g - 1) = g + 1
        let f = rf(&[(2, 1), (0, -1)], &[(1, 1), (0, -1)]);
        assert_eq!(f.as_laurent().unwrap(), &HalfLaurent::from_g_terms(&[(1, 1), (0, 1)]));
    }

    #[test]
    fn removes_shared_content() {
        let f = rf(&[(1, 2)], &[(0, 2)]);
        assert_eq!(f, RationalFn::g_pow(1));
        assert!(f.as_laurent().is_some());
    }

    #[test]
    fn zero_numerator_normalizes() {
        let f = rf(&[], &[(1, 1), (0, -1)]);
        assert!(f.is_zero());
        assert!(f.den.is_one());
    }

    #[test]
    fn idempotent_normalization() {
        let f = rf(&[(3, 2), (1, -2)], &[(2, 4), (0, -4)]);
        let g = RationalFn::new(f.num.clone(), f.den.clone()).unwrap();
        assert_eq!(f.num, g.num);
        assert_eq!(f.den, g.den);
    }

    #[test]
    fn arithmetic_partial_fractions() {
        // g/(g-1) + 1/(1-g) = 1
        let a = rf(&[(1, 1)], &[(1, 1), (0, -1)]);
        let b = rf(&[(0, 1)], &[(0, 1), (1, -1)]);
        assert!(a.add(&b).is_one());
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(
            RationalFn::new(HalfLaurent::one(), HalfLaurent::zero()),
            Err(RingError::ZeroDenominator)
        ));
    }

    #[test]
    fn rational_constant() {
        let half = RationalFn::from_big_rational(&BigRational::new(1.into(), 2.into()));
        assert_eq!(half.as_rational_constant().unwrap(), BigRational::new(1.into(), 2.into()));
        assert!(half.is_rational_laurent());
        assert!(half.as_laurent().is_none());
    }

    #[test]
    fn display() {
        let f = rf(&[(0, 1)], &[(0, 1), (2, -1)]);
        assert_eq!(f.to_string(), "1/(1-g^2)");
        let g = rf(&[(0, 1), (1, 1), (2, 1), (3, 1)], &[(0, 1)]);
        assert_eq!(g.to_string(), "1+g+g^2+g^3");
    }
}
