//! Formal integer combinations of tensor words in exterior powers of
//! bundle atoms, with their two evaluation views.
//!
//! An atom is a bundle symbol with a rank, a character weight and a private
//! root alphabet. A `VirtualBundle` is a Laurent-coefficient combination of
//! words `Lambda^{k_1}(A_1) ox ... ox Lambda^{k_m}(A_m)`; the character view
//! sends an atom to a sum of lines of its weight, the Chern view sends it
//! to elementary symmetric functions of exponentiated roots in its own
//! alphabet. Both views are ring morphisms.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::chern::exp_series;
use crate::laurent::HalfLaurent;
use crate::ratfn::RationalFn;
use crate::symfun::{EquivSymSeries, MultiSym};

#[derive(Clone, Debug)]
pub struct BundleAtom {
    pub name: String,
    pub rank: u32,
    /// Character weight: the circle acts by `g^weight` on every line.
    /// Zero models a bundle with the action forgotten.
    pub weight: i64,
    /// Optional explicit rational Chern roots (length = rank), standing in
    /// for geometric Chern data when a specialization is wanted.
    pub chern_roots: Option<Vec<BigRational>>,
}

impl BundleAtom {
    pub fn new(name: &str, rank: u32, weight: i64) -> Self {
        assert!(rank >= 1, "atoms have positive rank");
        BundleAtom { name: name.into(), rank, weight, chern_roots: None }
    }

    pub fn with_roots(mut self, roots: Vec<BigRational>) -> Self {
        assert_eq!(roots.len(), self.rank as usize);
        self.chern_roots = Some(roots);
        self
    }
}

/// Sorted multiset of `(atom index, exterior power)` factors.
pub type Word = Vec<(usize, u32)>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VirtualBundle {
    terms: BTreeMap<Word, HalfLaurent>,
}

impl VirtualBundle {
    pub fn zero() -> Self {
        VirtualBundle { terms: BTreeMap::new() }
    }

    /// The trivial line (empty tensor word).
    pub fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), HalfLaurent::one());
        VirtualBundle { terms }
    }

    pub fn constant(c: i64) -> Self {
        Self::one().scale_laurent(&HalfLaurent::constant(c))
    }

    /// `Lambda^k` of an atom as a single word; `k = 0` is the unit.
    pub fn atom_power(atom: usize, k: u32) -> Self {
        if k == 0 {
            return Self::one();
        }
        let mut terms = BTreeMap::new();
        terms.insert(vec![(atom, k)], HalfLaurent::one());
        VirtualBundle { terms }
    }

    pub fn atom(atom: usize) -> Self {
        Self::atom_power(atom, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &HalfLaurent)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert(&mut self, w: Word, c: HalfLaurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.insert(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        VirtualBundle {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                w.sort_unstable();
                out.insert(w, ca.mul(cb));
            }
        }
        out
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        VirtualBundle {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v.mul_scalar(c))).collect(),
        }
    }

    pub fn scale_laurent(&self, c: &HalfLaurent) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        VirtualBundle {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v.mul(c))).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Split an integer combination into its positive and negative parts
    /// over the word basis; panics on non-constant coefficients.
    pub fn split_signs(&self) -> (Self, Self) {
        let mut plus = Self::zero();
        let mut minus = Self::zero();
        for (w, c) in &self.terms {
            assert!(c.is_constant(), "sign split needs integer coefficients");
            let v = c.coeff_q(0);
            if v.is_positive() {
                plus.insert(w.clone(), c.clone());
            } else {
                minus.insert(w.clone(), c.neg());
            }
        }
        (plus, minus)
    }

    /// Character view: each atom contributes a sum of `rank` lines of its
    /// weight, so `Lambda^k` maps to `C(rank, k) g^{k weight}`.
    pub fn char_view(&self, atoms: &[BundleAtom]) -> HalfLaurent {
        let mut acc = HalfLaurent::zero();
        for (w, c) in &self.terms {
            let mut term = c.clone();
            for &(ai, k) in w {
                let a = &atoms[ai];
                let factor = HalfLaurent::monomial_q(
                    2 * k as i64 * a.weight,
                    binomial_big(a.rank, k),
                );
                term = term.mul(&factor);
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Chern view into the shared alphabet with one group per atom:
    /// `Lambda^k(A)` maps to `g^{k weight} sigma_k(e^{roots of A})`.
    pub fn chern_view(&self, atoms: &[BundleAtom], cutoff: u32) -> EquivSymSeries {
        let ranks: Vec<u32> = atoms.iter().map(|a| a.rank).collect();
        let exp: Vec<RationalFn> = exp_series(&BigRational::one(), cutoff)
            .into_iter()
            .map(|c| RationalFn::from_big_rational(&c))
            .collect();
        let mut cache: BTreeMap<(usize, u32), EquivSymSeries> = BTreeMap::new();
        let mut acc = MultiSym::zero(ranks.clone(), cutoff);
        for (w, c) in &self.terms {
            let mut term = MultiSym::constant(
                ranks.clone(),
                cutoff,
                RationalFn::from_laurent(c.clone()),
            );
            for &(ai, k) in w {
                let factor = cache.entry((ai, k)).or_insert_with(|| {
                    let sigma =
                        MultiSym::elementary_of_roots(&ranks, cutoff, ai, &exp, k);
                    sigma.scale(&RationalFn::g_pow(k as i64 * atoms[ai].weight))
                });
                term = term.mul(factor);
            }
            acc = acc.add(&term);
        }
        acc
    }
}

pub fn binomial_big(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut v = BigInt::one();
    for i in 0..k as u64 {
        v = v * BigInt::from(n as u64 - i) / BigInt::from(i + 1);
    }
    v
}
