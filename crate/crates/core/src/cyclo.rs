//! Exact arithmetic in cyclotomic fields Q(zeta_m).
//!
//! Elements are residues of Q[x] modulo the m-th cyclotomic polynomial.
//! Used for sampling rational functions exactly at roots of unity.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::laurent::HalfLaurent;
use crate::poly::{cyclotomic, QPoly};
use crate::ratfn::RationalFn;

/// The field Q(zeta_m) with its fixed modulus.
#[derive(Clone, Debug)]
pub struct CycloField {
    order: u32,
    modulus: Arc<QPoly>,
}

/// An element of a `CycloField`: a residue polynomial of degree < phi(m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclo {
    pub order: u32,
    pub rep: QPoly,
}

impl CycloField {
    pub fn new(order: u32) -> Self {
        CycloField {
            order,
            modulus: Arc::new(cyclotomic(order).to_qpoly()),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn zero(&self) -> Cyclo {
        Cyclo { order: self.order, rep: QPoly::zero() }
    }

    pub fn one(&self) -> Cyclo {
        Cyclo { order: self.order, rep: QPoly::one() }
    }

    pub fn from_rational(&self, r: &BigRational) -> Cyclo {
        Cyclo { order: self.order, rep: QPoly::from_coeffs(vec![r.clone()]) }
    }

    fn reduce(&self, p: &QPoly) -> Cyclo {
        let (_, r) = p.div_rem(&self.modulus);
        Cyclo { order: self.order, rep: r }
    }

    /// `zeta_m^e` for any integer exponent.
    pub fn root_pow(&self, e: i64) -> Cyclo {
        let e = e.rem_euclid(self.order as i64) as usize;
        let mut coeffs = vec![BigRational::zero(); e + 1];
        coeffs[e] = BigRational::one();
        self.reduce(&QPoly::from_coeffs(coeffs))
    }

    pub fn add(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        Cyclo { order: self.order, rep: a.rep.add(&b.rep) }
    }

    pub fn sub(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        Cyclo { order: self.order, rep: a.rep.sub(&b.rep) }
    }

    pub fn mul(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        self.reduce(&a.rep.mul(&b.rep))
    }

    pub fn scale(&self, a: &Cyclo, c: &BigRational) -> Cyclo {
        Cyclo { order: self.order, rep: a.rep.scale(c) }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    /// Returns `None` for zero.
    pub fn inv(&self, a: &Cyclo) -> Option<Cyclo> {
        if a.rep.is_zero() {
            return None;
        }
        // extended gcd of (a.rep, modulus): s*a + t*mod = gcd = const
        let (mut r0, mut r1) = (a.rep.clone(), (*self.modulus).clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 = gcd: nonzero constant since the modulus is irreducible
        debug_assert_eq!(r0.degree(), Some(0));
        let c = r0.coeff(0);
        Some(self.reduce(&s0.scale(&c.recip())))
    }

    pub fn div(&self, a: &Cyclo, b: &Cyclo) -> Option<Cyclo> {
        Some(self.mul(a, &self.inv(b)?))
    }

    /// Evaluate a Laurent polynomial at `g = zeta_n^k` inside this field.
    /// Requires `n | order` and, for half-integer exponents, `2n | order`.
    pub fn eval_laurent(&self, p: &HalfLaurent, n: u32, k: u32) -> Cyclo {
        let mut acc = self.zero();
        for (&e, c) in p.terms() {
            // g^{e/2} = zeta_{2n}^{e k}; as a power of zeta_m this is
            // zeta_m^{e k m / 2n}, which must be integral.
            let num = e as i128 * k as i128 * self.order as i128;
            let den = 2 * n as i128;
            assert!(
                num % den == 0,
                "field order {} cannot express g^({}/2) at point {}/{}",
                self.order,
                e,
                k,
                n
            );
            let term = self.root_pow((num / den) as i64);
            acc = self.add(&acc, &self.scale(&term, &BigRational::from_integer(c.clone())));
        }
        acc
    }

    /// Exact value of a rational function at `g = zeta_n^k`.
    /// Returns `None` when the denominator vanishes there.
    pub fn eval_ratfn(&self, f: &RationalFn, n: u32, k: u32) -> Option<Cyclo> {
        let den = self.eval_laurent(f.denominator(), n, k);
        let num = self.eval_laurent(f.numerator(), n, k);
        self.div(&num, &den)
    }
}

impl Cyclo {
    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    /// Rational coordinates over the power basis `1, zeta, ..., zeta^{d-1}`.
    pub fn coords(&self, dim: usize) -> Vec<BigRational> {
        (0..dim).map(|i| self.rep.coeff(i)).collect()
    }

    /// Numeric value for cross-checks.
    pub fn to_complex(&self) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        let z = num_complex::Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / self.order as f64);
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (i, c) in self.rep.coeffs.iter().enumerate() {
            acc += c.to_f64().unwrap() * z.powi(i as i32);
        }
        acc
    }
}

/// Content-cleared integer checked to be exactly representable: used by
/// reconstruction postconditions.
pub fn rational_is_integer(r: &BigRational) -> Option<BigInt> {
    if r.denom().abs().is_one() {
        Some(r.numer().clone() * r.denom().signum())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::HalfLaurent;

    #[test]
    fn primitive_root_relations() {
        let f = CycloField::new(5);
        // 1 + z + z^2 + z^3 + z^4 = 0
        let mut s = f.one();
        for e in 1..5 {
            s = f.add(&s, &f.root_pow(e));
        }
        assert!(s.is_zero());
        assert_eq!(f.root_pow(7).rep, f.root_pow(2).rep);
    }

    #[test]
    fn inverse() {
        let f = CycloField::new(7);
        let a = f.add(&f.one(), &f.root_pow(3));
        let inv = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), f.one());
    }

    #[test]
    fn eval_rational_function() {
        // 1/(1 - g^2) at g = zeta_11: compare numerically
        let f = CycloField::new(11);
        let rf = RationalFn::new(
            HalfLaurent::one(),
            HalfLaurent::one_minus_g_pow(2),
        )
        .unwrap();
        let v = f.eval_ratfn(&rf, 11, 1).unwrap();
        let expect = rf.eval_unit_circle(1.0 / 11.0);
        assert!((v.to_complex() - expect).norm() < 1e-9);
    }
}
