//! Truncated symmetric functions in formal Chern roots.
//!
//! A `MultiSym<C>` is a polynomial in the power sums of one or more private
//! root alphabets, truncated at a total degree cutoff (one unit of root
//! degree corresponds to form degree two). Within each alphabet of rank `r`
//! only `p_1..p_min(r, cutoff)` are free generators; higher power sums are
//! rewritten through Newton's identities at construction, so structural
//! equality is ring equality.
//!
//! Coefficients are any exact field: plain rationals for ordinary
//! characteristic forms, rational functions of `g` for their equivariant
//! twists.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::ratfn::RationalFn;

/// Exact coefficient field.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn from_rat(r: &BigRational) -> Self;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn from_int(n: i64) -> Self {
        Self::from_rat(&BigRational::from_integer(n.into()))
    }
}

impl Coeff for BigRational {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn from_rat(r: &BigRational) -> Self {
        r.clone()
    }
}

impl Coeff for RationalFn {
    fn zero() -> Self {
        RationalFn::zero()
    }
    fn one() -> Self {
        RationalFn::one()
    }
    fn is_zero(&self) -> bool {
        RationalFn::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RationalFn::add(self, o)
    }
    fn neg(&self) -> Self {
        RationalFn::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        RationalFn::mul(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        RationalFn::div(self, o).expect("division by zero coefficient")
    }
    fn from_rat(r: &BigRational) -> Self {
        RationalFn::from_big_rational(r)
    }
}

/// Monomial in the free generators: per group, exponents of `p_1..p_s`
/// (trailing zeros trimmed, so the empty vector is the constant monomial).
pub type MultiMono = Vec<Vec<u32>>;

fn mono_degree(m: &MultiMono) -> u32 {
    m.iter()
        .map(|g| g.iter().enumerate().map(|(i, &e)| (i as u32 + 1) * e).sum::<u32>())
        .sum()
}

fn trim(mut m: MultiMono) -> MultiMono {
    for g in &mut m {
        while g.last() == Some(&0) {
            g.pop();
        }
    }
    m
}

fn mono_mul(a: &MultiMono, b: &MultiMono) -> MultiMono {
    let mut out = Vec::with_capacity(a.len());
    for (ga, gb) in a.iter().zip(b.iter()) {
        let n = ga.len().max(gb.len());
        let mut g = vec![0u32; n];
        for (i, &e) in ga.iter().enumerate() {
            g[i] += e;
        }
        for (i, &e) in gb.iter().enumerate() {
            g[i] += e;
        }
        out.push(g);
    }
    trim(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiSym<C: Coeff> {
    ranks: Vec<u32>,
    cutoff: u32,
    terms: BTreeMap<MultiMono, C>,
}

pub type SymSeries = MultiSym<BigRational>;
pub type EquivSymSeries = MultiSym<RationalFn>;

impl<C: Coeff> MultiSym<C> {
    pub fn zero(ranks: Vec<u32>, cutoff: u32) -> Self {
        MultiSym { ranks, cutoff, terms: BTreeMap::new() }
    }

    pub fn constant(ranks: Vec<u32>, cutoff: u32, c: C) -> Self {
        let mut s = Self::zero(ranks, cutoff);
        s.insert(vec![vec![]; s.ranks.len()], c);
        s
    }

    pub fn one(ranks: Vec<u32>, cutoff: u32) -> Self {
        Self::constant(ranks, cutoff, C::one())
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiMono, &C)> {
        self.terms.iter()
    }

    fn insert(&mut self, mono: MultiMono, c: C) {
        if c.is_zero() {
            return;
        }
        let mono = trim(mono);
        if mono_degree(&mono) > self.cutoff {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&mono);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    fn shape_check(&self, other: &Self) {
        assert_eq!(self.ranks, other.ranks, "mismatched root alphabets");
        assert_eq!(self.cutoff, other.cutoff, "mismatched cutoffs");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.shape_check(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MultiSym {
            ranks: self.ranks.clone(),
            cutoff: self.cutoff,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.shape_check(other);
        let mut out = Self::zero(self.ranks.clone(), self.cutoff);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if mono_degree(ma) + mono_degree(mb) > self.cutoff {
                    continue;
                }
                out.insert(mono_mul(ma, mb), ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.ranks.clone(), self.cutoff);
        }
        MultiSym {
            ranks: self.ranks.clone(),
            cutoff: self.cutoff,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.mul(c))).collect(),
        }
    }

    pub fn constant_term(&self) -> C {
        self.terms
            .get(&vec![vec![]; self.ranks.len()])
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Component of exact total degree `d`.
    pub fn degree_component(&self, d: u32) -> Self {
        MultiSym {
            ranks: self.ranks.clone(),
            cutoff: self.cutoff,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| mono_degree(m) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Lowest total degree with a nonzero term.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(mono_degree).min()
    }

    /// Substitute `u -> -u` on every root of one group: the degree-`d`
    /// part of that group picks up `(-1)^d`.
    pub fn negate_roots(&self, group: usize) -> Self {
        let mut out = Self::zero(self.ranks.clone(), self.cutoff);
        for (m, c) in &self.terms {
            let d: u32 = m[group]
                .iter()
                .enumerate()
                .map(|(i, &e)| (i as u32 + 1) * e)
                .sum();
            let v = if d % 2 == 0 { c.clone() } else { c.neg() };
            out.insert(m.clone(), v);
        }
        out
    }

    /// Scale the degree-`d` part by `k^d` for every `d` (the Adams action
    /// `u -> k u` on every root).
    pub fn adams(&self, k: i64) -> Self {
        let mut out = Self::zero(self.ranks.clone(), self.cutoff);
        for (m, c) in &self.terms {
            let d = mono_degree(m);
            let f = C::from_rat(&BigRational::from_integer(num_bigint::BigInt::from(k).pow(d)));
            out.insert(m.clone(), c.mul(&f));
        }
        out
    }

    /// The reduced power sum `p_k` of one group as an element.
    pub fn power_sum(ranks: &[u32], cutoff: u32, group: usize, k: u32) -> Self {
        assert!(k >= 1);
        let mut out = Self::zero(ranks.to_vec(), cutoff);
        if k > cutoff {
            return out;
        }
        let table = newton_reduced_power_sums(ranks[group], cutoff);
        for (mono, coeff) in &table[k as usize] {
            let mut m = vec![vec![]; ranks.len()];
            m[group] = mono.clone();
            out.insert(m, C::from_rat(coeff));
        }
        out
    }

    /// `sum_j f(u_j)` over the roots of `group`, for a univariate series
    /// `f = f[0] + f[1] x + ...` truncated at the cutoff.
    pub fn sum_over_roots(ranks: &[u32], cutoff: u32, group: usize, f: &[C]) -> Self {
        let r = ranks[group] as i64;
        let mut out = Self::constant(
            ranks.to_vec(),
            cutoff,
            f.first().cloned().unwrap_or_else(C::zero).mul(&C::from_int(r)),
        );
        for (m, c) in f.iter().enumerate().skip(1) {
            if m as u32 > cutoff || c.is_zero() {
                continue;
            }
            out = out.add(&Self::power_sum(ranks, cutoff, group, m as u32).scale(c));
        }
        out
    }

    /// `prod_j f(u_j)` over the roots of `group`; `f[0]` must be invertible.
    pub fn prod_over_roots(ranks: &[u32], cutoff: u32, group: usize, f: &[C]) -> Self {
        let c0 = f.first().cloned().unwrap_or_else(C::zero);
        assert!(!c0.is_zero(), "product over roots needs an invertible constant term");
        let normalized: Vec<C> = f.iter().map(|c| c.div(&c0)).collect();
        let lg = series_log(&normalized, cutoff);
        let s = Self::sum_over_roots(ranks, cutoff, group, &lg);
        let mut c0r = C::one();
        for _ in 0..ranks[group] {
            c0r = c0r.mul(&c0);
        }
        s.exp().scale(&c0r)
    }

    /// Exponential of an element with zero constant term.
    pub fn exp(&self) -> Self {
        assert!(self.constant_term().is_zero(), "exp needs zero constant term");
        let mut out = Self::one(self.ranks.clone(), self.cutoff);
        let mut pow = Self::one(self.ranks.clone(), self.cutoff);
        let mut fact = BigRational::one();
        for n in 1..=self.cutoff as u64 {
            pow = pow.mul(self);
            if pow.is_zero() {
                break;
            }
            fact = fact * BigRational::from_integer(n.into());
            out = out.add(&pow.scale(&C::from_rat(&fact.recip())));
        }
        out
    }

    /// Multiplicative inverse; the constant term must be invertible.
    pub fn inv(&self) -> Self {
        let c0 = self.constant_term();
        assert!(!c0.is_zero(), "inverse needs an invertible constant term");
        let u = self.scale(&C::one().div(&c0)).sub(&Self::one(self.ranks.clone(), self.cutoff));
        // (1+u)^-1 = sum (-u)^n, nilpotent beyond the cutoff
        let mut out = Self::one(self.ranks.clone(), self.cutoff);
        let mut pow = Self::one(self.ranks.clone(), self.cutoff);
        for _ in 1..=self.cutoff {
            pow = pow.mul(&u).neg();
            if pow.is_zero() {
                break;
            }
            out = out.add(&pow);
        }
        out.scale(&C::one().div(&c0))
    }

    /// Elementary symmetric function `sigma_k` of the transformed roots
    /// `f(u_1), ..., f(u_r)` of `group`, via Newton's identities on their
    /// power sums. Vanishes identically for `k > rank`.
    pub fn elementary_of_roots(
        ranks: &[u32],
        cutoff: u32,
        group: usize,
        f: &[C],
        k: u32,
    ) -> Self {
        let mut es: Vec<Self> = vec![Self::one(ranks.to_vec(), cutoff)];
        let mut qs: Vec<Self> = vec![Self::zero(ranks.to_vec(), cutoff)]; // q_0 unused
        let mut fpow: Vec<C> = f.to_vec();
        for m in 1..=k {
            if m > 1 {
                fpow = series_mul(&fpow, f, cutoff);
            }
            qs.push(Self::sum_over_roots(ranks, cutoff, group, &fpow));
            // e_m = (1/m) sum_{i=1}^m (-1)^{i-1} e_{m-i} q_i
            let mut acc = Self::zero(ranks.to_vec(), cutoff);
            for i in 1..=m {
                let t = es[(m - i) as usize].mul(&qs[i as usize]);
                acc = if i % 2 == 1 { acc.add(&t) } else { acc.sub(&t) };
            }
            es.push(acc.scale(&C::from_rat(&BigRational::new(1.into(), m.into()))));
        }
        es[k as usize].clone()
    }

    /// Map coefficients into another field.
    pub fn map_coeff<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MultiSym<D> {
        MultiSym {
            ranks: self.ranks.clone(),
            cutoff: self.cutoff,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect(),
        }
    }

    /// Map coefficients fallibly (e.g. specialization at a circle point).
    pub fn try_map_coeff<D: Coeff, E>(
        &self,
        f: impl Fn(&C) -> Result<D, E>,
    ) -> Result<MultiSym<D>, E> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = f(c)?;
            if !v.is_zero() {
                terms.insert(m.clone(), v);
            }
        }
        Ok(MultiSym { ranks: self.ranks.clone(), cutoff: self.cutoff, terms })
    }

    /// Re-embed into a larger product of alphabets: source group `j` becomes
    /// target group `group_map[j]` (ranks must match).
    pub fn embed(&self, target_ranks: &[u32], group_map: &[usize]) -> Self {
        assert_eq!(group_map.len(), self.ranks.len());
        for (j, &t) in group_map.iter().enumerate() {
            assert_eq!(self.ranks[j], target_ranks[t], "rank mismatch in embedding");
        }
        let mut out = Self::zero(target_ranks.to_vec(), self.cutoff);
        for (m, c) in &self.terms {
            let mut nm = vec![vec![]; target_ranks.len()];
            for (j, g) in m.iter().enumerate() {
                nm[group_map[j]] = g.clone();
            }
            out.insert(nm, c.clone());
        }
        out
    }

    /// Rewrite in the elementary-symmetric (Chern class) basis:
    /// a map from per-group `c`-exponent monomials to coefficients.
    pub fn to_chern_basis(&self) -> BTreeMap<MultiMono, C> {
        let tables: Vec<Vec<BTreeMap<Vec<u32>, BigRational>>> = self
            .ranks
            .iter()
            .map(|&r| power_sums_in_elementary(r, self.cutoff))
            .collect();
        let mut out: BTreeMap<MultiMono, C> = BTreeMap::new();
        for (mono, c) in &self.terms {
            // expand each group's p-monomial into e-monomials, then take the
            // product across groups
            let mut acc: BTreeMap<MultiMono, C> = BTreeMap::new();
            acc.insert(vec![vec![]; self.ranks.len()], c.clone());
            for (gi, g) in mono.iter().enumerate() {
                for (i, &e) in g.iter().enumerate() {
                    for _ in 0..e {
                        let pk = &tables[gi][i + 1];
                        let mut next: BTreeMap<MultiMono, C> = BTreeMap::new();
                        for (m0, c0) in &acc {
                            for (em, ec) in pk {
                                let mut nm = m0.clone();
                                let n = nm[gi].len().max(em.len());
                                nm[gi].resize(n, 0);
                                for (ix, &ee) in em.iter().enumerate() {
                                    nm[gi][ix] += ee;
                                }
                                let nm = trim(nm);
                                if mono_degree(&nm) > self.cutoff {
                                    continue;
                                }
                                let v = c0.mul(&C::from_rat(ec));
                                next.entry(nm)
                                    .and_modify(|x| *x = x.add(&v))
                                    .or_insert(v);
                            }
                        }
                        next.retain(|_, v| !v.is_zero());
                        acc = next;
                    }
                }
            }
            for (m, v) in acc {
                let entry = out.entry(m).or_insert_with(C::zero);
                *entry = entry.add(&v);
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Build from a Chern-basis map (inverse of `to_chern_basis`).
    pub fn from_chern_basis(
        ranks: Vec<u32>,
        cutoff: u32,
        chern: &BTreeMap<MultiMono, C>,
    ) -> Self {
        let tables: Vec<Vec<BTreeMap<Vec<u32>, BigRational>>> = ranks
            .iter()
            .map(|&r| elementary_in_power_sums(r, cutoff))
            .collect();
        let mut out = Self::zero(ranks.clone(), cutoff);
        for (mono, c) in chern {
            let mut acc = Self::constant(ranks.clone(), cutoff, c.clone());
            for (gi, g) in mono.iter().enumerate() {
                for (i, &e) in g.iter().enumerate() {
                    for _ in 0..e {
                        let ek = &tables[gi][i + 1];
                        let mut factor = Self::zero(ranks.clone(), cutoff);
                        for (pm, pc) in ek {
                            let mut m = vec![vec![]; ranks.len()];
                            m[gi] = pm.clone();
                            factor.insert(m, C::from_rat(pc));
                        }
                        acc = acc.mul(&factor);
                    }
                }
            }
            out = out.add(&acc);
        }
        out
    }
}

impl SymSeries {
    /// Numeric specialization: substitute explicit rational root values
    /// (one vector per group, length = rank), with all terms above the
    /// cutoff dropped as in the model.
    pub fn substitute_roots(&self, roots: &[Vec<BigRational>]) -> BigRational {
        let mut acc = BigRational::zero();
        for (mono, c) in &self.terms {
            let mut term = c.clone();
            for (gi, g) in mono.iter().enumerate() {
                for (i, &e) in g.iter().enumerate() {
                    let k = i + 1;
                    let pk: BigRational = roots[gi]
                        .iter()
                        .map(|u| {
                            let mut v = BigRational::one();
                            for _ in 0..k {
                                v = v * u;
                            }
                            v
                        })
                        .sum();
                    for _ in 0..e {
                        term = term * pk.clone();
                    }
                }
            }
            acc += term;
        }
        acc
    }
}

// ---- univariate series helpers over C ----

pub fn series_mul<C: Coeff>(a: &[C], b: &[C], cutoff: u32) -> Vec<C> {
    let n = (cutoff + 1) as usize;
    let mut out = vec![C::zero(); n.min(a.len() + b.len()).max(1)];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() || i >= n {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j >= n || y.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out.truncate(n);
    out
}

/// log of a series with constant term 1.
pub fn series_log<C: Coeff>(f: &[C], cutoff: u32) -> Vec<C> {
    let n = (cutoff + 1) as usize;
    assert!(f.first().map_or(false, |c| *c == C::one()), "log needs constant term 1");
    let get = |v: &[C], i: usize| v.get(i).cloned().unwrap_or_else(C::zero);
    let mut l = vec![C::zero(); n];
    for m in 1..n {
        // m*l_m = m*f_m - sum_{j=1}^{m-1} j l_j f_{m-j}
        let mut acc = get(f, m).mul(&C::from_int(m as i64));
        for j in 1..m {
            acc = acc.sub(&l[j].mul(&get(f, m - j)).mul(&C::from_int(j as i64)));
        }
        l[m] = acc.div(&C::from_int(m as i64));
    }
    l
}

/// exp of a series with zero constant term.
pub fn series_exp<C: Coeff>(s: &[C], cutoff: u32) -> Vec<C> {
    let n = (cutoff + 1) as usize;
    assert!(s.first().map_or(true, |c| c.is_zero()), "exp needs zero constant term");
    let get = |v: &[C], i: usize| v.get(i).cloned().unwrap_or_else(C::zero);
    let mut e = vec![C::zero(); n];
    e[0] = C::one();
    for m in 1..n {
        // m*e_m = sum_{j=1}^{m} j s_j e_{m-j}
        let mut acc = C::zero();
        for j in 1..=m {
            acc = acc.add(&get(s, j).mul(&e[m - j]).mul(&C::from_int(j as i64)));
        }
        e[m] = acc.div(&C::from_int(m as i64));
    }
    e
}

/// inverse of a series with invertible constant term.
pub fn series_inv<C: Coeff>(f: &[C], cutoff: u32) -> Vec<C> {
    let n = (cutoff + 1) as usize;
    let c0 = f.first().cloned().unwrap_or_else(C::zero);
    assert!(!c0.is_zero(), "series inverse needs nonzero constant term");
    let get = |v: &[C], i: usize| v.get(i).cloned().unwrap_or_else(C::zero);
    let mut out = vec![C::zero(); n];
    out[0] = C::one().div(&c0);
    for m in 1..n {
        let mut acc = C::zero();
        for j in 1..=m {
            acc = acc.add(&get(f, j).mul(&out[m - j]));
        }
        out[m] = acc.neg().div(&c0);
    }
    out
}

// ---- Newton identity tables (single alphabet, rational coefficients) ----

type Poly1 = BTreeMap<Vec<u32>, BigRational>;

fn p1_mul(a: &Poly1, b: &Poly1, cutoff: u32) -> Poly1 {
    let deg = |m: &Vec<u32>| -> u32 { m.iter().enumerate().map(|(i, &e)| (i as u32 + 1) * e).sum() };
    let mut out = Poly1::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let n = ma.len().max(mb.len());
            let mut m = vec![0u32; n];
            for (i, &e) in ma.iter().enumerate() {
                m[i] += e;
            }
            for (i, &e) in mb.iter().enumerate() {
                m[i] += e;
            }
            while m.last() == Some(&0) {
                m.pop();
            }
            if deg(&m) > cutoff {
                continue;
            }
            let v = ca * cb;
            let entry = out.entry(m).or_insert_with(BigRational::zero);
            *entry += v;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn p1_add_scaled(a: &mut Poly1, b: &Poly1, s: &BigRational) {
    for (m, c) in b {
        let entry = a.entry(m.clone()).or_insert_with(BigRational::zero);
        *entry += c * s;
    }
    a.retain(|_, v| !v.is_zero());
}

fn p1_monomial_pk(k: u32) -> Poly1 {
    let mut m = vec![0u32; k as usize];
    m[k as usize - 1] = 1;
    let mut out = Poly1::new();
    out.insert(m, BigRational::one());
    out
}

/// Elementary symmetric `e_0..e_min(r,cutoff)` written in `p_1..p_s`.
fn elementary_in_power_sums(r: u32, cutoff: u32) -> Vec<Poly1> {
    let s = r.min(cutoff);
    let mut es: Vec<Poly1> = Vec::with_capacity(s as usize + 1);
    let mut e0 = Poly1::new();
    e0.insert(vec![], BigRational::one());
    es.push(e0);
    for k in 1..=cutoff.min(r) {
        // e_k = (1/k) sum_{i=1}^k (-1)^{i-1} e_{k-i} p_i
        let mut acc = Poly1::new();
        for i in 1..=k {
            let pi = p1_monomial_pk(i); // p_i is free here since i <= k <= s
            let term = p1_mul(&es[(k - i) as usize], &pi, cutoff);
            let sign = if i % 2 == 1 { BigRational::one() } else { -BigRational::one() };
            p1_add_scaled(&mut acc, &term, &sign);
        }
        let inv_k = BigRational::new(1.into(), k.into());
        let scaled: Poly1 = acc.into_iter().map(|(m, c)| (m, c * &inv_k)).collect();
        es.push(scaled);
    }
    es
}

/// `p_0..p_cutoff` expressed in the free generators `p_1..p_min(r,cutoff)`;
/// higher power sums are reduced through the vanishing of `e_k`, `k > r`.
fn newton_reduced_power_sums(r: u32, cutoff: u32) -> Vec<Poly1> {
    let s = r.min(cutoff);
    let es = elementary_in_power_sums(r, cutoff);
    let mut ps: Vec<Poly1> = Vec::with_capacity(cutoff as usize + 1);
    let mut p0 = Poly1::new();
    p0.insert(vec![], BigRational::from_integer(r.into()));
    ps.push(p0);
    for k in 1..=cutoff {
        if k <= s {
            ps.push(p1_monomial_pk(k));
        } else {
            // p_k = sum_{j=1}^{r} (-1)^{j-1} e_j p_{k-j}
            let mut acc = Poly1::new();
            for j in 1..=r.min(k) {
                let term = p1_mul(&es[j as usize], &ps[(k - j) as usize], cutoff);
                let sign = if j % 2 == 1 { BigRational::one() } else { -BigRational::one() };
                p1_add_scaled(&mut acc, &term, &sign);
            }
            ps.push(acc);
        }
    }
    ps
}

/// `p_0..p_cutoff` written in the elementary basis `e_1..e_min(r,cutoff)`.
fn power_sums_in_elementary(r: u32, cutoff: u32) -> Vec<Poly1> {
    // p_k = sum_{i=1}^{k-1} (-1)^{i-1} e_i p_{k-i} + (-1)^{k-1} k e_k
    // where e_j = 0 for j > r; here the basis monomials are e-exponents.
    let deg_ok = |k: u32| k <= cutoff;
    let e_mono = |j: u32| -> Poly1 {
        let mut out = Poly1::new();
        if j <= r && deg_ok(j) {
            let mut m = vec![0u32; j as usize];
            m[j as usize - 1] = 1;
            out.insert(m, BigRational::one());
        }
        out
    };
    let mut ps: Vec<Poly1> = Vec::with_capacity(cutoff as usize + 1);
    let mut p0 = Poly1::new();
    p0.insert(vec![], BigRational::from_integer(r.into()));
    ps.push(p0);
    for k in 1..=cutoff {
        let mut acc = Poly1::new();
        for i in 1..k {
            let term = p1_mul(&e_mono(i), &ps[(k - i) as usize], cutoff);
            let sign = if i % 2 == 1 { BigRational::one() } else { -BigRational::one() };
            p1_add_scaled(&mut acc, &term, &sign);
        }
        let sign = if k % 2 == 1 { BigRational::one() } else { -BigRational::one() };
        p1_add_scaled(&mut acc, &e_mono(k), &(sign * BigRational::from_integer(k.into())));
        ps.push(acc);
    }
    ps
}

/// Deterministic text form of a Chern-basis map, for reports and goldens.
pub fn chern_basis_to_string<C: Coeff + fmt::Display>(
    chern: &BTreeMap<MultiMono, C>,
    group_names: &[&str],
) -> String {
    if chern.is_empty() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (mono, c) in chern {
        let mut factors = Vec::new();
        for (gi, g) in mono.iter().enumerate() {
            for (i, &e) in g.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = if group_names.len() == 1 && group_names[0].is_empty() {
                    format!("c{}", i + 1)
                } else {
                    format!("c{}({})", i + 1, group_names[gi])
                };
                if e == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{}^{}", name, e));
                }
            }
        }
        if factors.is_empty() {
            parts.push(format!("{}", c));
        } else {
            parts.push(format!("({})*{}", c, factors.join("*")));
        }
    }
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn p(ranks: &[u32], cutoff: u32, group: usize, k: u32) -> SymSeries {
        MultiSym::power_sum(ranks, cutoff, group, k)
    }

    #[test]
    fn high_power_sums_reduce() {
        // rank 1: p_2 = p_1^2, p_3 = p_1^3
        let p2 = p(&[1], 4, 0, 2);
        let p1 = p(&[1], 4, 0, 1);
        assert_eq!(p2, p1.mul(&p1));
        assert_eq!(p(&[1], 4, 0, 3), p1.mul(&p1).mul(&p1));
        // rank 2: p_3 = e1 p2 - e2 p1 with e1 = p1, e2 = (p1^2 - p2)/2
        let p1 = p(&[2], 4, 0, 1);
        let p2 = p(&[2], 4, 0, 2);
        let e2 = p1.mul(&p1).sub(&p2).scale(&q(1, 2));
        let expect = p1.mul(&p2).sub(&e2.mul(&p1));
        assert_eq!(p(&[2], 4, 0, 3), expect);
    }

    #[test]
    fn chern_basis_round_trip() {
        let s = p(&[3], 5, 0, 2)
            .mul(&p(&[3], 5, 0, 1))
            .add(&p(&[3], 5, 0, 4).scale(&q(7, 3)));
        let chern = s.to_chern_basis();
        let back = MultiSym::from_chern_basis(vec![3], 5, &chern);
        assert_eq!(s, back);
    }

    #[test]
    fn top_elementary_of_exponentials_is_exp_of_trace() {
        // sigma_2(e^{u1}, e^{u2}) = e^{u1+u2} = exp(p_1) for rank 2
        let exp_series = [q(1, 1), q(1, 1), q(1, 2), q(1, 6), q(1, 24)];
        let s = MultiSym::<BigRational>::elementary_of_roots(&[2], 4, 0, &exp_series, 2);
        let expect = p(&[2], 4, 0, 1).exp();
        assert_eq!(s, expect);
    }

    #[test]
    fn substitution_matches_polynomial_evaluation() {
        let s = p(&[2], 6, 0, 2).mul(&p(&[2], 6, 0, 1)).scale(&q(5, 7));
        let roots = vec![vec![q(1, 3), q(-1, 2)]];
        let u1 = &roots[0][0];
        let u2 = &roots[0][1];
        let p1 = u1 + u2;
        let p2 = u1 * u1 + u2 * u2;
        assert_eq!(s.substitute_roots(&roots), p2 * p1 * q(5, 7));
    }

    #[test]
    fn elementary_vanishes_above_rank() {
        let exp_series = [q(1, 1), q(1, 1), q(1, 2), q(1, 6), q(1, 24)];
        let s = MultiSym::<BigRational>::elementary_of_roots(&[2], 4, 0, &exp_series, 3);
        assert!(s.is_zero());
    }

    #[test]
    fn inverse_of_unit() {
        let one_plus = MultiSym::<BigRational>::one(vec![2], 4)
            .add(&p(&[2], 4, 0, 1).scale(&q(3, 1)));
        let inv = one_plus.inv();
        assert_eq!(one_plus.mul(&inv), MultiSym::one(vec![2], 4));
    }
}
