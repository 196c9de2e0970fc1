//! Independent oracle: dense truncated polynomials in explicit root
//! variables over Q. Everything here expands definitions directly, with no
//! use of the power-sum machinery under test.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use lambdak_core::symfun::SymSeries;

/// Dense multivariate polynomial, truncated at a total degree cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitPoly {
    pub nvars: usize,
    pub cutoff: u32,
    pub terms: BTreeMap<Vec<u8>, BigRational>,
}

impl ExplicitPoly {
    pub fn zero(nvars: usize, cutoff: u32) -> Self {
        ExplicitPoly { nvars, cutoff, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, cutoff: u32, c: BigRational) -> Self {
        let mut p = Self::zero(nvars, cutoff);
        p.insert(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize, cutoff: u32) -> Self {
        Self::constant(nvars, cutoff, BigRational::one())
    }

    pub fn var(nvars: usize, cutoff: u32, i: usize) -> Self {
        let mut exps = vec![0u8; nvars];
        exps[i] = 1;
        let mut p = Self::zero(nvars, cutoff);
        p.insert(exps, BigRational::one());
        p
    }

    fn insert(&mut self, exps: Vec<u8>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let total: u32 = exps.iter().map(|&e| e as u32).sum();
        if total > self.cutoff {
            return;
        }
        let became_zero = {
            let entry = self.terms.entry(exps.clone()).or_insert_with(BigRational::zero);
            *entry += c;
            entry.is_zero()
        };
        if became_zero {
            self.terms.remove(&exps);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars, self.cutoff);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u8> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(exps, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.nvars, self.cutoff);
        for (e, v) in &self.terms {
            out.insert(e.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars, self.cutoff);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Apply a univariate power series to one variable: `f(u_i)` truncated.
    pub fn series_of_var(nvars: usize, cutoff: u32, i: usize, coeffs: &[BigRational]) -> Self {
        let v = Self::var(nvars, cutoff, i);
        let mut acc = Self::constant(nvars, cutoff, coeffs[0].clone());
        let mut pow = Self::one(nvars, cutoff);
        for c in coeffs.iter().skip(1) {
            pow = pow.mul(&v);
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow.scale(c));
        }
        acc
    }
}

/// Coefficients of `exp(s x)` through the cutoff.
pub fn exp_coeffs(s: i64, den: i64, cutoff: u32) -> Vec<BigRational> {
    let scale = BigRational::new(s.into(), den.into());
    let mut out = vec![BigRational::one()];
    let mut pow = BigRational::one();
    for m in 1..=cutoff as i64 {
        pow = pow * &scale / BigRational::from_integer(m.into());
        out.push(pow.clone());
    }
    out
}

/// Elementary symmetric polynomial of explicit polynomials, expanded as the
/// coefficient of `t^k` in the product of `(1 + t p_j)`.
pub fn elementary_of(polys: &[ExplicitPoly], k: usize) -> ExplicitPoly {
    let nvars = polys[0].nvars;
    let cutoff = polys[0].cutoff;
    // t-polynomial with ExplicitPoly coefficients
    let mut coeffs = vec![ExplicitPoly::one(nvars, cutoff)];
    for p in polys {
        let mut next = Vec::with_capacity(coeffs.len() + 1);
        next.push(coeffs[0].clone());
        for i in 1..=coeffs.len() {
            let mut v = coeffs.get(i).cloned().unwrap_or_else(|| ExplicitPoly::zero(nvars, cutoff));
            v = v.add(&coeffs[i - 1].mul(p));
            next.push(v);
        }
        coeffs = next;
    }
    coeffs.get(k).cloned().unwrap_or_else(|| ExplicitPoly::zero(nvars, cutoff))
}

/// Expand a single-alphabet symmetric series into explicit variables by
/// substituting `p_k = sum_j u_j^k`.
pub fn expand_sym(s: &SymSeries) -> ExplicitPoly {
    assert_eq!(s.ranks().len(), 1, "single alphabet expected");
    let r = s.ranks()[0] as usize;
    let cutoff = s.cutoff();
    let mut acc = ExplicitPoly::zero(r, cutoff);
    for (mono, c) in s.terms() {
        let mut term = ExplicitPoly::constant(r, cutoff, c.clone());
        for (i, &e) in mono[0].iter().enumerate() {
            let k = (i + 1) as u32;
            // p_k = sum_j u_j^k
            let mut pk = ExplicitPoly::zero(r, cutoff);
            for j in 0..r {
                pk = pk.add(&ExplicitPoly::var(r, cutoff, j).pow(k));
            }
            for _ in 0..e {
                term = term.mul(&pk);
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// Scale helper for integer fractions.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
