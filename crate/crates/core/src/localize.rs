//! Fixed-point assembly of localized equivariant indices.
//!
//! A dataset lists the fixed components with their normal weight data, the
//! twisting-line weight, and the decomposition of the coefficient bundle.
//! Every component contributes a rational function of `g`; the sum is the
//! localized index. For isolated points the contribution is the exact
//! degree-zero pairing
//! `g^{(l - sum v r_v)/2} (sum_w rank E_w g^w) prod_v (g^v/(g^v-1))^{r_v}`;
//! positive-dimensional components pair the full integrand against a
//! user-supplied functional on top-degree Chern monomials.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;

use crate::bundle::binomial_big;
use crate::cdga::parse_rational;
use crate::chern::{a_hat, ch_g_sqrt_line, exp_series};
use crate::error::LocalizeError;
use crate::lambda_engine::truncated_inverse;
use crate::laurent::HalfLaurent;
use crate::point::CirclePoint;
use crate::ratfn::RationalFn;
use crate::symfun::{MultiMono, MultiSym};

/// Weight entry that may be left symbolic in a fixture file and resolved
/// by a parameter map at load time.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    Int(i64),
    Param { param: String },
}

impl WeightSpec {
    fn resolve(&self, params: &BTreeMap<String, i64>) -> Result<i64, LocalizeError> {
        match self {
            WeightSpec::Int(v) => Ok(*v),
            WeightSpec::Param { param } => params
                .get(param)
                .copied()
                .ok_or_else(|| LocalizeError::Schema(format!("unbound parameter {}", param))),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct NormalEntrySpec {
    pub v: u32,
    pub rank: u32,
}

#[derive(Clone, Debug, Deserialize)]
pub struct CoefficientEntrySpec {
    pub weight: WeightSpec,
    pub rank: i64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ComponentSpec {
    pub name: String,
    pub dim: u32,
    #[serde(default)]
    pub normal: Vec<NormalEntrySpec>,
    pub l: i64,
    #[serde(rename = "E", default)]
    pub coefficient: Vec<CoefficientEntrySpec>,
    #[serde(default)]
    pub chern_numbers: Option<BTreeMap<String, serde_json::Value>>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct FixedPointDataSpec {
    pub components: Vec<ComponentSpec>,
    #[serde(default)]
    pub exclude: Vec<ExcludeSpec>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ExcludeSpec {
    pub n: u32,
    pub k: i64,
}

/// One fixed component with resolved weights.
#[derive(Clone, Debug)]
pub struct FixedComponent {
    pub name: String,
    /// Real dimension; 0 is an isolated point.
    pub dim: u32,
    /// Normal data `(v, rank)` with `v >= 1`.
    pub normal: Vec<(u32, u32)>,
    /// Weight of the circle action on the twisting line over the component.
    pub l: i64,
    /// Coefficient bundle decomposition `(weight, rank)`; ranks may be
    /// negative for virtual summands.
    pub coefficient: Vec<(i64, i64)>,
    /// Integration functional on top-degree Chern monomials, keyed by the
    /// canonical monomial string (see `chern_key`).
    pub chern_numbers: Option<BTreeMap<String, BigRational>>,
}

#[derive(Clone, Debug)]
pub struct FixedPointData {
    pub components: Vec<FixedComponent>,
    /// User-declared exclusions on top of the torsion points of the active
    /// weights.
    pub extra_exclusions: BTreeSet<CirclePoint>,
}

impl FixedComponent {
    fn validate(&self) -> Result<(), LocalizeError> {
        for &(v, _) in &self.normal {
            if v < 1 {
                return Err(LocalizeError::NonPositiveWeight(self.name.clone()));
            }
        }
        let twist: i64 =
            self.normal.iter().map(|&(v, r)| v as i64 * r as i64).sum::<i64>() + self.l;
        if twist.rem_euclid(2) != 0 {
            return Err(LocalizeError::ParityViolation(self.name.clone()));
        }
        if self.dim % 2 != 0 {
            return Err(LocalizeError::Schema(format!(
                "component {} must have even dimension",
                self.name
            )));
        }
        Ok(())
    }

    /// `(l - sum v r_v)/2`: the integral prefactor exponent.
    fn prefactor_exponent(&self) -> i64 {
        let s: i64 = self.normal.iter().map(|&(v, r)| v as i64 * r as i64).sum();
        (self.l - s) / 2
    }

    fn char_of_coefficient(&self) -> HalfLaurent {
        HalfLaurent::from_terms(
            self.coefficient
                .iter()
                .map(|&(w, r)| (2 * w, BigInt::from(r))),
        )
    }
}

impl FixedPointData {
    pub fn from_spec(
        spec: &FixedPointDataSpec,
        params: &BTreeMap<String, i64>,
    ) -> Result<Self, LocalizeError> {
        let mut components = Vec::new();
        for c in &spec.components {
            let mut coefficient = Vec::new();
            for e in &c.coefficient {
                coefficient.push((e.weight.resolve(params)?, e.rank));
            }
            let chern_numbers = match &c.chern_numbers {
                None => None,
                Some(map) => {
                    let mut out = BTreeMap::new();
                    for (k, v) in map {
                        let r = match v {
                            serde_json::Value::Number(n) => n
                                .as_i64()
                                .map(|i| BigRational::from_integer(i.into()))
                                .ok_or_else(|| {
                                    LocalizeError::Schema(format!("bad chern number for {}", k))
                                })?,
                            serde_json::Value::String(s) => parse_rational(s).ok_or_else(|| {
                                LocalizeError::Schema(format!("bad chern number for {}", k))
                            })?,
                            _ => {
                                return Err(LocalizeError::Schema(format!(
                                    "bad chern number for {}",
                                    k
                                )))
                            }
                        };
                        out.insert(k.clone(), r);
                    }
                    Some(out)
                }
            };
            let comp = FixedComponent {
                name: c.name.clone(),
                dim: c.dim,
                normal: c.normal.iter().map(|n| (n.v, n.rank)).collect(),
                l: c.l,
                coefficient,
                chern_numbers,
            };
            comp.validate()?;
            components.push(comp);
        }
        let extra_exclusions = spec
            .exclude
            .iter()
            .map(|e| CirclePoint::root_of_unity(e.n, e.k))
            .collect();
        Ok(FixedPointData { components, extra_exclusions })
    }

    pub fn from_json(
        json: &str,
        params: &BTreeMap<String, i64>,
    ) -> Result<Self, LocalizeError> {
        let spec: FixedPointDataSpec = serde_json::from_str(json)
            .map_err(|e| LocalizeError::Schema(e.to_string()))?;
        Self::from_spec(&spec, params)
    }

    pub fn active_weights(&self) -> BTreeSet<u32> {
        self.components
            .iter()
            .flat_map(|c| c.normal.iter().filter(|&&(_, r)| r > 0).map(|&(v, _)| v))
            .collect()
    }

    /// Is the point in the exclusion set: a torsion point of an active
    /// weight or a user-declared extra?
    pub fn is_excluded(&self, pt: &CirclePoint) -> bool {
        if self.extra_exclusions.contains(pt) {
            return true;
        }
        self.active_weights().iter().any(|&v| pt.is_torsion_of(v as i64))
    }
}

#[derive(Clone, Debug)]
pub struct LocalizedIndex {
    pub value: RationalFn,
    pub per_component: Vec<(String, RationalFn)>,
}

/// Contribution of one fixed component at the cutoff, as a rational
/// function of `g`.
pub fn component_contribution(
    c: &FixedComponent,
    cutoff: u32,
    pt: &CirclePoint,
) -> Result<RationalFn, LocalizeError> {
    c.validate()?;
    for &(v, r) in &c.normal {
        if r > 0 && pt.is_torsion_of(v as i64) {
            return Err(LocalizeError::ExcludedPoint);
        }
    }
    if c.dim == 0 {
        let mut acc = RationalFn::from_laurent(
            c.char_of_coefficient()
                .mul(&HalfLaurent::g_pow(c.prefactor_exponent())),
        );
        for &(v, r) in &c.normal {
            if r == 0 {
                continue;
            }
            let line = RationalFn::new(
                HalfLaurent::g_pow(v as i64),
                HalfLaurent::g_pow_minus_one(v as i64),
            )
            .unwrap();
            acc = acc.mul(&line.pow(r as i64).unwrap());
        }
        debug_assert!(acc.is_integral());
        return Ok(acc);
    }
    positive_dim_contribution(c, cutoff, pt)
}

/// Canonical key of a Chern monomial: factors `c<i>(<group>)` with
/// exponents, sorted, joined by `*`; the empty monomial is `1`.
pub fn chern_key(groups: &[String], mono: &MultiMono) -> String {
    let mut parts = Vec::new();
    for (gi, exps) in mono.iter().enumerate() {
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let base = format!("c{}({})", i + 1, groups[gi]);
            if e == 1 {
                parts.push(base);
            } else {
                parts.push(format!("{}^{}", base, e));
            }
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn positive_dim_contribution(
    c: &FixedComponent,
    cutoff: u32,
    pt: &CirclePoint,
) -> Result<RationalFn, LocalizeError> {
    let functional =
        c.chern_numbers.as_ref().ok_or_else(|| LocalizeError::MissingChernNumbers(c.name.clone()))?;
    let top = c.dim / 2;
    let cutoff = cutoff.max(top);

    // groups: tangent, L, one per normal weight, one per coefficient entry
    let mut ranks: Vec<u32> = vec![top.max(1), 1];
    let mut groups: Vec<String> = vec!["T".into(), "L".into()];
    let normal: Vec<(u32, u32)> =
        c.normal.iter().copied().filter(|&(_, r)| r > 0).collect();
    for &(v, r) in &normal {
        ranks.push(r);
        groups.push(format!("N{}", v));
    }
    let mut coeff_groups = Vec::new();
    for &(w, r) in &c.coefficient {
        if r == 0 {
            continue;
        }
        ranks.push(r.unsigned_abs() as u32);
        groups.push(format!("E{}", w));
        coeff_groups.push((groups.len() - 1, w, r));
    }

    // tangent genus (trivial when the component is a point cluster)
    let mut integrand = if top >= 1 {
        a_hat(top, cutoff)
            .map_coeff(|r| RationalFn::from_big_rational(r))
            .embed(&ranks, &[0])
    } else {
        MultiSym::one(ranks.clone(), cutoff)
    };

    // half power of the induced line: weight l - sum v r_v, first Chern
    // class c1(L) - sum c1(N_v)
    let l_alpha = ch_g_sqrt_line(c.l - normal.iter().map(|&(v, r)| v as i64 * r as i64).sum::<i64>(), cutoff)
        .embed(&ranks, &[1]);
    let exp_neg_half: Vec<RationalFn> = exp_series(&BigRational::new((-1).into(), 2.into()), cutoff)
        .into_iter()
        .map(|r| RationalFn::from_big_rational(&r))
        .collect();
    let mut det_half = MultiSym::one(ranks.clone(), cutoff);
    for (i, _) in normal.iter().enumerate() {
        det_half =
            det_half.mul(&MultiSym::prod_over_roots(&ranks, cutoff, i + 2, &exp_neg_half));
    }
    integrand = integrand.mul(&l_alpha).mul(&det_half);

    // truncated inverse of the conormal alternating sum, re-rooted from the
    // conormal alphabets (roots -u) into the normal ones
    if !normal.is_empty() {
        let tinv = truncated_inverse(&normal, cutoff.max(1), pt)
            .map_err(|_| LocalizeError::ExcludedPoint)?;
        let mut inv_series = tinv.chern_value(cutoff);
        for gi in 0..normal.len() {
            inv_series = inv_series.negate_roots(gi);
        }
        let map: Vec<usize> = (0..normal.len()).map(|i| i + 2).collect();
        integrand = integrand.mul(&inv_series.embed(&ranks, &map));
    }

    // coefficient bundle: sum over entries of sign * g^w ch(alphabet)
    let mut ch_e = MultiSym::zero(ranks.clone(), cutoff);
    let exp_one: Vec<RationalFn> = exp_series(&BigRational::from_integer(1.into()), cutoff)
        .into_iter()
        .map(|r| RationalFn::from_big_rational(&r))
        .collect();
    for &(gi, w, r) in &coeff_groups {
        let mut piece = MultiSym::sum_over_roots(&ranks, cutoff, gi, &exp_one)
            .scale(&RationalFn::g_pow(w));
        if r < 0 {
            piece = piece.neg();
        }
        ch_e = ch_e.add(&piece);
    }
    integrand = integrand.mul(&ch_e);

    // pair the top-degree part against the functional
    let mut acc = RationalFn::zero();
    for (mono, coeff) in integrand.degree_component(top).terms() {
        let key = chern_key(&groups, mono);
        if let Some(value) = functional.get(&key) {
            acc = acc.add(&coeff.scale(value));
        }
    }
    // verify declared keys are top-degree monomials over known groups
    for key in functional.keys() {
        if key == "1" && top == 0 {
            continue;
        }
        if parse_chern_key_degree(key, &groups).map_or(true, |d| d != top) {
            return Err(LocalizeError::BadChernKey(key.clone()));
        }
    }
    Ok(acc)
}

fn parse_chern_key_degree(key: &str, groups: &[String]) -> Option<u32> {
    if key == "1" {
        return Some(0);
    }
    let mut total = 0u32;
    for factor in key.split('*') {
        let factor = factor.trim();
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => (b, e.parse::<u32>().ok()?),
            None => (factor, 1),
        };
        let rest = base.strip_prefix('c')?;
        let (idx, group) = rest.split_once('(')?;
        let idx: u32 = idx.parse().ok()?;
        let group = group.strip_suffix(')')?;
        if !groups.iter().any(|g| g == group) {
            return None;
        }
        total += idx * exp;
    }
    Some(total)
}

/// Localized index: the sum of the component contributions.
pub fn localized_index(
    data: &FixedPointData,
    cutoff: u32,
    pt: &CirclePoint,
) -> Result<LocalizedIndex, LocalizeError> {
    if data.is_excluded(pt) {
        return Err(LocalizeError::ExcludedPoint);
    }
    let mut per_component = Vec::new();
    let mut total = RationalFn::zero();
    for c in &data.components {
        let contrib = component_contribution(c, cutoff, pt)?;
        total = total.add(&contrib);
        per_component.push((c.name.clone(), contrib));
    }
    Ok(LocalizedIndex { value: total, per_component })
}

/// Coefficients of the expansion of the localized index in powers of
/// `g^{-1}` (each `(1 - g^{-v})^{-1}` expanded as a geometric series in
/// `g^{-v}`), on the window `[k_lo, k_hi]`. Isolated components only.
pub fn sym_expansion(
    data: &FixedPointData,
    k_lo: i64,
    k_hi: i64,
) -> Result<BTreeMap<i64, BigInt>, LocalizeError> {
    let mut out: BTreeMap<i64, BigInt> = BTreeMap::new();
    for c in &data.components {
        if c.dim != 0 {
            return Err(LocalizeError::NonIsolated(c.name.clone()));
        }
        c.validate()?;
        let s = c.prefactor_exponent();
        let max_shift =
            c.coefficient.iter().map(|&(w, _)| w + s).max().unwrap_or(i64::MIN);
        if max_shift < k_lo {
            continue;
        }
        let depth = (max_shift - k_lo) as u32;
        let series = normal_sym_series(&c.normal, depth);
        for &(w, r) in &c.coefficient {
            for (j, coeff) in series.iter().enumerate() {
                let k = w + s - j as i64;
                if k < k_lo || k > k_hi {
                    continue;
                }
                let entry = out.entry(k).or_insert_with(BigInt::zero);
                *entry += coeff * BigInt::from(r);
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Coefficients of `prod_v (sum_j g^{-v j})^{r_v}` as a series in `g^{-1}`
/// up to depth `depth`: index `j` holds the coefficient of `g^{-j}`.
fn normal_sym_series(normal: &[(u32, u32)], depth: u32) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); depth as usize + 1];
    out[0] = BigInt::from(1);
    for &(v, r) in normal {
        if r == 0 {
            continue;
        }
        let mut next = vec![BigInt::zero(); depth as usize + 1];
        for (j, c) in out.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut jv = 0u32;
            while j + (v * jv) as usize <= depth as usize {
                // multiplicity of g^{-v jv} in the r-fold symmetric power
                let m = binomial_big(jv + r - 1, jv);
                next[j + (v * jv) as usize] += c * m;
                jv += 1;
            }
        }
        out = next;
    }
    out
}

/// Do all expansion coefficients vanish for `|k| > bound`? Exact: the sum
/// must be a Laurent polynomial supported inside `[-bound, bound]`.
pub fn cancellation_check(data: &FixedPointData, bound: i64) -> Result<bool, LocalizeError> {
    for c in &data.components {
        if c.dim != 0 {
            return Err(LocalizeError::NonIsolated(c.name.clone()));
        }
    }
    let idx = localized_index(data, 0, &CirclePoint::Generic)?;
    match idx.value.as_laurent() {
        None => Ok(false),
        Some(p) => {
            if p.is_zero() {
                return Ok(true);
            }
            let lo = p.min_exp_q().unwrap() / 2;
            let hi = p.max_exp_q().unwrap() / 2;
            Ok(-bound <= lo && hi <= bound)
        }
    }
}

/// Pole cancellation: does the reduced index have denominator one? Returns
/// the Laurent character when it does.
pub fn pole_cancellation_check(idx: &LocalizedIndex) -> (bool, Option<HalfLaurent>) {
    match idx.value.as_laurent() {
        Some(p) => (true, Some(p.clone())),
        None => (false, None),
    }
}

/// The frozen two-point projective-line dataset twisted by `O(m)`.
/// Calibrated once against the classical section character
/// `1 + g + ... + g^m`: the plain point carries the fiber weight `m`, the
/// mirrored point carries the virtual entry of weight -1 and rank -1.
pub fn cp1_fixture(m: i64) -> FixedPointData {
    FixedPointData {
        components: vec![
            FixedComponent {
                name: "north".into(),
                dim: 0,
                normal: vec![(1, 1)],
                l: 1,
                coefficient: vec![(m, 1)],
                chern_numbers: None,
            },
            FixedComponent {
                name: "south".into(),
                dim: 0,
                normal: vec![(1, 1)],
                l: 1,
                coefficient: vec![(-1, -1)],
                chern_numbers: None,
            },
        ],
        extra_exclusions: BTreeSet::new(),
    }
}
