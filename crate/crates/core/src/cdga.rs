//! Finite graded-commutative differential algebras.
//!
//! A `Cdga` is a finite monomial model of a form algebra: generators with
//! degrees, graded-commutative products truncated above a top degree, and a
//! degree +1 differential extended from the generators by the Leibniz rule.
//! Construction validates graded commutativity, associativity, `d o d = 0`
//! and Leibniz over the whole basis, and fixes once and for all a canonical
//! complement of the image of `d` in each odd degree so the odd quotient
//! has decidable equality.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Deserialize;

use crate::error::ModelError;

/// Element of a `Cdga`: coordinates over the monomial basis.
pub type Element = Vec<BigRational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relations {
    /// Every generator squares to zero.
    Exterior,
    /// Odd generators square to zero (forced by graded commutativity);
    /// even generators are free up to the top-degree truncation.
    TruncatedPolynomial,
}

#[derive(Debug, Deserialize)]
pub struct CdgaSpec {
    pub generators: Vec<GeneratorSpec>,
    pub relations: Relations,
    #[serde(default)]
    pub top_degree: Option<u32>,
    #[serde(default)]
    pub d: Vec<DifferentialSpec>,
}

#[derive(Debug, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: u32,
}

#[derive(Debug, Deserialize)]
pub struct DifferentialSpec {
    pub from: String,
    /// Target monomial: generator names joined by `*`.
    pub to: String,
    #[serde(default = "one_string")]
    pub coeff: String,
}

fn one_string() -> String {
    "1".into()
}

#[derive(Debug)]
pub struct Cdga {
    name: String,
    /// Monomial exponents over the generators, basis[0] = 1.
    monomials: Vec<Vec<u32>>,
    gen_names: Vec<String>,
    gen_degrees: Vec<u32>,
    degrees: Vec<u32>,
    top_degree: u32,
    /// mult[i][j] = coefficient list of basis products.
    mult: Vec<Vec<Vec<(usize, BigRational)>>>,
    /// d on basis elements.
    diff: Vec<Vec<(usize, BigRational)>>,
    /// Reduction rows for the odd part of Im d: (pivot index, row).
    odd_image_rows: Vec<(usize, Element)>,
}

impl Cdga {
    /// Build and validate a model from generator data.
    pub fn new(
        name: &str,
        generators: &[(&str, u32)],
        relations: Relations,
        top_degree: u32,
        d_gens: &[(&str, &str, BigRational)],
    ) -> Result<Arc<Cdga>, ModelError> {
        let gen_names: Vec<String> = generators.iter().map(|(n, _)| n.to_string()).collect();
        let gen_degrees: Vec<u32> = generators.iter().map(|&(_, d)| d).collect();
        for (i, (n, d)) in generators.iter().enumerate() {
            if *d == 0 {
                return Err(ModelError::InvalidAlgebra(format!(
                    "generator {} has degree 0",
                    n
                )));
            }
            if gen_names[..i].contains(&n.to_string()) {
                return Err(ModelError::InvalidAlgebra(format!("duplicate generator {}", n)));
            }
        }

        // enumerate monomials of total degree <= top_degree
        let caps: Vec<u32> = gen_degrees
            .iter()
            .map(|&d| {
                if d % 2 == 1 || relations == Relations::Exterior {
                    1
                } else {
                    top_degree / d
                }
            })
            .collect();
        let mut monomials = vec![vec![0u32; generators.len()]];
        for i in 0..generators.len() {
            let mut next = Vec::new();
            for m in &monomials {
                for e in 0..=caps[i] {
                    let deg: u32 = m
                        .iter()
                        .zip(&gen_degrees)
                        .map(|(&a, &d)| a * d)
                        .sum::<u32>()
                        + e * gen_degrees[i];
                    if deg > top_degree {
                        break;
                    }
                    let mut mm = m.clone();
                    mm[i] = e;
                    next.push(mm);
                }
            }
            monomials = next;
        }
        let degree_of = |m: &Vec<u32>| -> u32 {
            m.iter().zip(&gen_degrees).map(|(&a, &d)| a * d).sum()
        };
        monomials.sort_by_key(|m| (degree_of(m), m.clone()));
        let degrees: Vec<u32> = monomials.iter().map(degree_of).collect();
        let index: BTreeMap<Vec<u32>, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();

        // product of two monomials with the Koszul sign
        let mono_mul = |a: &Vec<u32>, b: &Vec<u32>| -> Option<(usize, BigRational)> {
            let mut exps = vec![0u32; a.len()];
            for i in 0..a.len() {
                exps[i] = a[i] + b[i];
                if exps[i] > caps[i] {
                    return None;
                }
            }
            let m = index.get(&exps)?;
            // sign: move every b-factor of odd degree past the a-factors of
            // odd degree that sit to its right in generator order
            let mut swaps = 0u64;
            for (j, &bj) in b.iter().enumerate() {
                if gen_degrees[j] % 2 == 0 || bj == 0 {
                    continue;
                }
                for (i, &ai) in a.iter().enumerate().skip(j + 1) {
                    if gen_degrees[i] % 2 == 1 && ai > 0 {
                        swaps += (ai as u64) * (bj as u64);
                    }
                }
            }
            let sign = if swaps % 2 == 0 { BigRational::one() } else { -BigRational::one() };
            Some((*m, sign))
        };

        let n = monomials.len();
        let mut mult = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                if let Some((k, s)) = mono_mul(&monomials[i], &monomials[j]) {
                    mult[i][j] = vec![(k, s)];
                }
            }
        }

        // differential on generators
        let mut d_on_gen: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); generators.len()];
        for (from, to, coeff) in d_gens {
            let gi = gen_names
                .iter()
                .position(|g| g == from)
                .ok_or_else(|| ModelError::InvalidAlgebra(format!("unknown generator {}", from)))?;
            let mut exps = vec![0u32; generators.len()];
            for part in to.split('*') {
                let part = part.trim();
                let ti = gen_names.iter().position(|g| g == part).ok_or_else(|| {
                    ModelError::InvalidAlgebra(format!("unknown generator {} in d target", part))
                })?;
                exps[ti] += 1;
            }
            let target = index.get(&exps).ok_or_else(|| {
                ModelError::InvalidAlgebra(format!("d target {} not in basis", to))
            })?;
            if degrees[*target] != gen_degrees[gi] + 1 {
                return Err(ModelError::InvalidAlgebra(format!(
                    "d({}) must raise degree by one",
                    from
                )));
            }
            d_on_gen[gi].push((*target, coeff.clone()));
        }

        // extend d to monomials by the Leibniz rule
        let mut diff: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); n];
        let mut algebra = Cdga {
            name: name.to_string(),
            monomials: monomials.clone(),
            gen_names,
            gen_degrees: gen_degrees.clone(),
            degrees: degrees.clone(),
            top_degree,
            mult,
            diff: vec![Vec::new(); n],
            odd_image_rows: Vec::new(),
        };
        let ngen = algebra.gen_names.len();
        for (bi, mono) in monomials.iter().enumerate() {
            // write the monomial as an ordered word of single factors and
            // differentiate one factor at a time
            let mut word = Vec::new();
            for (gi, &e) in mono.iter().enumerate() {
                for _ in 0..e {
                    word.push(gi);
                }
            }
            let mut acc = vec![BigRational::zero(); n];
            for p in 0..word.len() {
                let gi = word[p];
                if d_on_gen[gi].is_empty() {
                    continue;
                }
                let mut pre = vec![0u32; ngen];
                for &g in &word[..p] {
                    pre[g] += 1;
                }
                let mut suf = vec![0u32; ngen];
                for &g in &word[p + 1..] {
                    suf[g] += 1;
                }
                let pre_deg: u32 = word[..p].iter().map(|&g| gen_degrees[g]).sum();
                let sign = if pre_deg % 2 == 1 { -BigRational::one() } else { BigRational::one() };
                let lv = algebra.monomial_element(&pre);
                let rv = algebra.monomial_element(&suf);
                let mut dv = vec![BigRational::zero(); n];
                for (t, c) in &d_on_gen[gi] {
                    dv[*t] += c;
                }
                let term = algebra.mul(&lv, &algebra.mul(&dv, &rv));
                for (k, c) in term.iter().enumerate() {
                    acc[k] += c * &sign;
                }
            }
            diff[bi] = acc
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c.clone()))
                .collect();
        }
        algebra.diff = diff;

        algebra.validate()?;
        algebra.odd_image_rows = algebra.compute_odd_image_rows();
        Ok(Arc::new(algebra))
    }

    /// Load from the JSON description format.
    pub fn from_json(name: &str, json: &str) -> Result<Arc<Cdga>, ModelError> {
        let spec: CdgaSpec = serde_json::from_str(json)
            .map_err(|e| ModelError::InvalidAlgebra(format!("bad JSON: {}", e)))?;
        let gens: Vec<(&str, u32)> =
            spec.generators.iter().map(|g| (g.name.as_str(), g.degree)).collect();
        let default_top: u32 = spec.generators.iter().map(|g| g.degree).sum();
        let top = spec.top_degree.unwrap_or(default_top);
        let mut d_gens = Vec::new();
        for d in &spec.d {
            let coeff: BigRational = parse_rational(&d.coeff)
                .ok_or_else(|| ModelError::InvalidAlgebra(format!("bad coeff {}", d.coeff)))?;
            d_gens.push((d.from.as_str(), d.to.as_str(), coeff));
        }
        let d_refs: Vec<(&str, &str, BigRational)> =
            d_gens.iter().map(|(f, t, c)| (*f, *t, c.clone())).collect();
        Cdga::new(name, &gens, spec.relations, top, &d_refs)
    }

    fn validate(&self) -> Result<(), ModelError> {
        let n = self.dim();
        // unit
        for i in 0..n {
            if self.mult[0][i] != vec![(i, BigRational::one())]
                || self.mult[i][0] != vec![(i, BigRational::one())]
            {
                return Err(ModelError::InvalidAlgebra("unit fails".into()));
            }
        }
        // graded commutativity and degree additivity
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul(&self.basis_element(i), &self.basis_element(j));
                let ji = self.mul(&self.basis_element(j), &self.basis_element(i));
                let sign = if self.degrees[i] % 2 == 1 && self.degrees[j] % 2 == 1 {
                    -BigRational::one()
                } else {
                    BigRational::one()
                };
                let flipped: Element = ji.iter().map(|c| c * &sign).collect();
                if ij != flipped {
                    return Err(ModelError::InvalidAlgebra("graded commutativity fails".into()));
                }
                for (k, c) in ij.iter().enumerate() {
                    if !c.is_zero() && self.degrees[k] != self.degrees[i] + self.degrees[j] {
                        return Err(ModelError::InvalidAlgebra("degree additivity fails".into()));
                    }
                }
            }
        }
        // associativity on basis triples
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul(&self.basis_element(i), &self.basis_element(j));
                for k in 0..n {
                    let left = self.mul(&ij, &self.basis_element(k));
                    let jk = self.mul(&self.basis_element(j), &self.basis_element(k));
                    let right = self.mul(&self.basis_element(i), &jk);
                    if left != right {
                        return Err(ModelError::InvalidAlgebra("associativity fails".into()));
                    }
                }
            }
        }
        // d o d = 0 and Leibniz on basis pairs
        for i in 0..n {
            let ddi = self.d(&self.d(&self.basis_element(i)));
            if ddi.iter().any(|c| !c.is_zero()) {
                return Err(ModelError::InvalidAlgebra("d o d != 0".into()));
            }
            for j in 0..n {
                let a = self.basis_element(i);
                let b = self.basis_element(j);
                let lhs = self.d(&self.mul(&a, &b));
                let da_b = self.mul(&self.d(&a), &b);
                let a_db = self.mul(&a, &self.d(&b));
                let sign = if self.degrees[i] % 2 == 1 {
                    -BigRational::one()
                } else {
                    BigRational::one()
                };
                let rhs: Element = da_b
                    .iter()
                    .zip(&a_db)
                    .map(|(x, y)| x + y * &sign)
                    .collect();
                if lhs != rhs {
                    return Err(ModelError::InvalidAlgebra("Leibniz fails".into()));
                }
            }
        }
        Ok(())
    }

    /// Reduction rows for the odd-degree span of `d(even basis elements)`.
    fn compute_odd_image_rows(&self) -> Vec<(usize, Element)> {
        let n = self.dim();
        let mut rows: Vec<Element> = Vec::new();
        for i in 0..n {
            if self.degrees[i] % 2 == 0 {
                let di = self.d(&self.basis_element(i));
                if di.iter().any(|c| !c.is_zero()) {
                    rows.push(di);
                }
            }
        }
        // row reduce
        let mut reduced: Vec<(usize, Element)> = Vec::new();
        for mut row in rows {
            for (p, r) in &reduced {
                if !row[*p].is_zero() {
                    let f = row[*p].clone();
                    for (k, c) in r.iter().enumerate() {
                        row[k] -= c * &f;
                    }
                }
            }
            if let Some(p) = row.iter().position(|c| !c.is_zero()) {
                let inv = row[p].clone().recip();
                for c in row.iter_mut() {
                    *c *= &inv;
                }
                // back-substitute into earlier rows
                for (_, r) in reduced.iter_mut() {
                    if !r[p].is_zero() {
                        let f = r[p].clone();
                        for (k, c) in row.iter().enumerate() {
                            r[k] -= c * &f;
                        }
                    }
                }
                reduced.push((p, row));
            }
        }
        reduced
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    pub fn degree_of_basis(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn basis_name(&self, i: usize) -> String {
        let m = &self.monomials[i];
        let mut parts = Vec::new();
        for (gi, &e) in m.iter().enumerate() {
            if e == 1 {
                parts.push(self.gen_names[gi].clone());
            } else if e > 1 {
                parts.push(format!("{}^{}", self.gen_names[gi], e));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn zero(&self) -> Element {
        vec![BigRational::zero(); self.dim()]
    }

    pub fn unit(&self) -> Element {
        self.basis_element(0)
    }

    pub fn basis_element(&self, i: usize) -> Element {
        let mut v = self.zero();
        v[i] = BigRational::one();
        v
    }

    fn monomial_element(&self, exps: &[u32]) -> Element {
        let mut v = self.zero();
        if let Some(i) = self.monomials.iter().position(|m| m == exps) {
            v[i] = BigRational::one();
        }
        v
    }

    pub fn generator_degree(&self, name: &str) -> Option<u32> {
        let gi = self.gen_names.iter().position(|g| g == name)?;
        Some(self.gen_degrees[gi])
    }

    /// Generator as an element, by name.
    pub fn generator(&self, name: &str) -> Option<Element> {
        let gi = self.gen_names.iter().position(|g| g == name)?;
        let mut exps = vec![0u32; self.gen_names.len()];
        exps[gi] = 1;
        Some(self.monomial_element(&exps))
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn scale(&self, a: &Element, c: &BigRational) -> Element {
        a.iter().map(|x| x * c).collect()
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                for (k, c) in &self.mult[i][j] {
                    out[*k] += x * y * c;
                }
            }
        }
        out
    }

    pub fn d(&self, a: &Element) -> Element {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (k, c) in &self.diff[i] {
                out[*k] += x * c;
            }
        }
        out
    }

    pub fn is_zero_element(&self, a: &Element) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    pub fn is_closed(&self, a: &Element) -> bool {
        self.is_zero_element(&self.d(a))
    }

    /// True when every nonzero coordinate sits in even degree.
    pub fn is_even(&self, a: &Element) -> bool {
        a.iter().enumerate().all(|(i, c)| c.is_zero() || self.degrees[i] % 2 == 0)
    }

    pub fn is_odd(&self, a: &Element) -> bool {
        a.iter().enumerate().all(|(i, c)| c.is_zero() || self.degrees[i] % 2 == 1)
    }

    /// Component in a single degree.
    pub fn degree_component(&self, a: &Element, deg: u32) -> Element {
        a.iter()
            .enumerate()
            .map(|(i, c)| if self.degrees[i] == deg { c.clone() } else { BigRational::zero() })
            .collect()
    }

    /// Canonical representative of an odd form modulo the image of `d`.
    pub fn project_odd(&self, a: &Element) -> Element {
        let mut v = a.clone();
        for (p, row) in &self.odd_image_rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (k, c) in row.iter().enumerate() {
                    v[k] -= c * &f;
                }
            }
        }
        v
    }

    /// Do two odd forms agree modulo exact forms?
    pub fn equal_mod_exact(&self, a: &Element, b: &Element) -> bool {
        self.project_odd(a) == self.project_odd(b)
    }

    pub fn format_element(&self, a: &Element) -> String {
        let mut parts = Vec::new();
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i == 0 {
                parts.push(format!("{}", c));
            } else if c.is_one() {
                parts.push(self.basis_name(i));
            } else {
                parts.push(format!("({})*{}", c, self.basis_name(i)));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: num_bigint::BigInt = n.trim().parse().ok()?;
        let d: num_bigint::BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: num_bigint::BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

/// Exterior algebra on two degree-1 generators with zero differential:
/// the form model of a 2-torus.
pub fn torus_model() -> Arc<Cdga> {
    Cdga::new(
        "torus",
        &[("e1", 1), ("e2", 1)],
        Relations::Exterior,
        2,
        &[],
    )
    .expect("torus model is valid")
}

/// Contractible-type model with a nonzero differential: `dx = y` plus a
/// closed degree-1 generator `w`, truncated in degree 6. Both parities of
/// the image of `d` are nonzero here.
pub fn contractible_model() -> Arc<Cdga> {
    Cdga::new(
        "contractible",
        &[("x", 1), ("w", 1), ("y", 2)],
        Relations::TruncatedPolynomial,
        6,
        &[("x", "y", BigRational::one())],
    )
    .expect("contractible model is valid")
}

impl fmt::Display for Cdga {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {}, top degree {})", self.name, self.dim(), self.top_degree)
    }
}
