//! The rotating-circle eta invariant, its independent numerical oracle,
//! the defect assembler over per-component eta data, and rationality
//! verification by exact reconstruction.
//!
//! The closed form for the circle rotated at speed `k` is `1/(1 - g^k)`
//! away from the torsion points `g^k = 1`, where the value is exactly 1/2.
//! The oracle resums the defining character series by Abel regularization
//! with Richardson extrapolation, entirely independent of the closed form.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;

use crate::cdga::parse_rational;
use crate::cyclo::{Cyclo, CycloField};
use crate::error::{EtaError, ReconstructError};
use crate::lambda_engine::gamma_nilpotency_bound;
use crate::laurent::HalfLaurent;
use crate::localize::{component_contribution, FixedComponent};
use crate::point::CirclePoint;
use crate::poly::{cyclotomic, laurent_to_zpoly_g, ZPoly};
use crate::ratfn::RationalFn;
use crate::reconstruct::{rational_reconstruct, Sample};

/// Value of the reduced circle eta invariant at a point.
#[derive(Clone, Debug, PartialEq)]
pub enum CircleEta {
    /// `g^k = 1`: the spectral series cancels and only half the kernel
    /// trace remains.
    Excluded,
    /// Away from torsion: the rational function `1/(1 - g^k)`.
    Regular(RationalFn),
}

impl CircleEta {
    pub fn as_rational_fn(&self) -> RationalFn {
        match self {
            CircleEta::Excluded => {
                RationalFn::from_big_rational(&BigRational::new(1.into(), 2.into()))
            }
            CircleEta::Regular(f) => f.clone(),
        }
    }
}

/// Closed form of the reduced eta invariant of the circle rotated at speed
/// `k`, at the given point.
pub fn circle_eta_closed(k: u32, pt: &CirclePoint) -> CircleEta {
    assert!(k >= 1);
    if pt.is_torsion_of(k as i64) {
        CircleEta::Excluded
    } else {
        CircleEta::Regular(
            RationalFn::new(HalfLaurent::one(), HalfLaurent::one_minus_g_pow(k as i64)).unwrap(),
        )
    }
}

/// Geometric-series schedule of Abel parameters for the oracle.
#[derive(Clone, Copy, Debug)]
pub struct AbelSchedule {
    pub eps0: f64,
    pub levels: u32,
}

impl Default for AbelSchedule {
    fn default() -> Self {
        AbelSchedule { eps0: 1.0 / 16.0, levels: 8 }
    }
}

/// Richardson tableau over the halving schedule; returns the last diagonal
/// entry of `T[i][j] = (2^j T[i][j-1] - T[i-1][j-1]) / (2^j - 1)`.
fn richardson(levels: u32, eps0: f64, eval: impl Fn(f64) -> f64) -> f64 {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for level in 0..levels {
        let eps = eps0 / f64::powi(2.0, level as i32);
        let mut row = vec![eval(eps)];
        for j in 1..=rows.len() {
            let f = f64::powi(2.0, j as i32);
            let prev = rows[rows.len() - 1][j - 1];
            row.push((f * row[j - 1] - prev) / (f - 1.0));
        }
        rows.push(row);
    }
    *rows.last().unwrap().last().unwrap()
}

/// Numerically resum the eta series of the rotating circle at
/// `g = e^{2 pi i t}` by Abel regularization: partial sums of
/// `sum_n (g^{nk} - g^{-nk}) r^n` at `r = 1 - eps`, extrapolated to
/// `eps -> 0` over the halving schedule, then reduced by the kernel trace.
/// For rational angles prefer `circle_eta_abel_oracle_rational`, whose
/// phase arithmetic is exactly periodic.
pub fn circle_eta_abel_oracle(
    k: u32,
    t: f64,
    schedule: &AbelSchedule,
) -> Result<Complex64, EtaError> {
    let kt = k as f64 * t;
    let dist = (kt - kt.round()).abs();
    if dist < 1e-12 {
        return Err(EtaError::PointInA);
    }
    // the Abel sum is analytic in eps with radius ~ the angular distance to
    // the nearest torsion point; keep the schedule well inside it
    let eps0 = schedule.eps0.min(std::f64::consts::PI * dist / 2.0);
    let frac = kt.fract();
    let eta = richardson(schedule.levels, eps0, |eps| {
        abel_sum(|n| (n as f64 * frac).fract() * std::f64::consts::TAU, eps)
    });
    Ok((Complex64::new(0.0, eta) + 1.0) / 2.0)
}

/// Exact-rational oracle: `t = num/den`. The phase of the n-th term is the
/// residue `n k num mod den`, stepped in integer arithmetic and looked up
/// in a sine table, so there is no phase drift at any length.
pub fn circle_eta_abel_oracle_rational(
    k: u32,
    t_num: i64,
    t_den: i64,
    schedule: &AbelSchedule,
) -> Result<Complex64, EtaError> {
    assert!(t_den > 0);
    let step = (k as i64 * t_num).rem_euclid(t_den) as usize;
    if step == 0 {
        return Err(EtaError::PointInA);
    }
    let q = t_den as usize;
    let sines: Vec<f64> = (0..q)
        .map(|j| (std::f64::consts::TAU * j as f64 / q as f64).sin())
        .collect();
    let dist = (step.min(q - step)) as f64 / q as f64;
    let eps0 = schedule.eps0.min(std::f64::consts::PI * dist / 2.0);
    let eta = richardson(schedule.levels, eps0, |eps| {
        let r = 1.0 - eps;
        let tol = 1e-17;
        let mut acc = 0.0f64;
        let mut comp = 0.0f64;
        let mut rn = 1.0f64;
        let mut res = 0usize;
        loop {
            rn *= r;
            if rn < tol {
                break;
            }
            res += step;
            if res >= q {
                res -= q;
            }
            let term = 2.0 * sines[res] * rn;
            let y = term - comp;
            let s = acc + y;
            comp = (s - acc) - y;
            acc = s;
        }
        acc
    });
    Ok((Complex64::new(0.0, eta) + 1.0) / 2.0)
}

/// Kahan-compensated Abel partial sum with a caller-supplied phase map.
fn abel_sum(phase: impl Fn(u64) -> f64, eps: f64) -> f64 {
    let r = 1.0 - eps;
    let tol = 1e-17;
    let mut acc = 0.0f64;
    let mut comp = 0.0f64;
    let mut rn = 1.0f64;
    let mut n = 0u64;
    loop {
        n += 1;
        rn *= r;
        if rn < tol {
            break;
        }
        let term = 2.0 * phase(n).sin() * rn;
        let y = term - comp;
        let s = acc + y;
        comp = (s - acc) - y;
        acc = s;
    }
    acc
}

/// The boundary-of-disc consistency check: the closed form must equal the
/// localized contribution of the disc's origin (normal weight `k`, twist
/// chosen so the prefactor is the unit), with the usual vanishing index.
/// The origin data uses the same mirror calibration frozen for the
/// two-point projective fixture, which orients the boundary so that the
/// contribution is exactly `1/(1 - g^k)`.
pub fn aps_disc_consistency(k: u32) -> bool {
    let origin = FixedComponent {
        name: "origin".into(),
        dim: 0,
        normal: vec![(k, 1)],
        l: k as i64,
        coefficient: vec![(-(k as i64), -1)],
        chern_numbers: None,
    };
    let Ok(contribution) = component_contribution(&origin, 0, &CirclePoint::Generic) else {
        return false;
    };
    match circle_eta_closed(k, &CirclePoint::Generic) {
        CircleEta::Regular(f) => f == contribution,
        CircleEta::Excluded => false,
    }
}

/// Orders of the cyclotomic factors of an integral Laurent polynomial,
/// with multiplicities, plus the non-cyclotomic remainder.
pub fn cyclotomic_factor_orders(p: &HalfLaurent) -> (BTreeMap<u32, u32>, ZPoly) {
    assert!(p.is_integral() && !p.is_zero());
    let (_, mut poly) = laurent_to_zpoly_g(p).unwrap();
    let mut orders = BTreeMap::new();
    let mut n = 1u32;
    loop {
        let deg = poly.degree().unwrap_or(0) as u32;
        if deg == 0 {
            break;
        }
        let phi = cyclotomic(n);
        if phi.degree().unwrap() as u32 > deg {
            // phi(n) grows with n along with divisors; stop once no
            // remaining cyclotomic polynomial can fit
            if n > 2 * deg * deg + 6 {
                break;
            }
            n += 1;
            continue;
        }
        let mut mult = 0u32;
        while let Some(q) = poly.div_exact(&phi) {
            poly = q;
            mult += 1;
        }
        if mult > 0 {
            orders.insert(n, mult);
        }
        n += 1;
    }
    (orders, poly)
}

/// One eta datum: the weight tags `(k, v)` and a rational reduced eta
/// value for the plus or minus summand.
#[derive(Clone, Debug)]
pub struct EtaEntry {
    pub k: u32,
    pub v: i64,
    pub positive: bool,
    pub eta: BigRational,
}

/// Per-component eta data: finitely many entries and the integral
/// prefactor exponent `(l - sum v rank N_v)/2`.
#[derive(Clone, Debug)]
pub struct ComponentEtaData {
    pub name: String,
    pub prefactor_exp: i64,
    pub dim: u32,
    pub entries: Vec<EtaEntry>,
    pub weights: Vec<(u32, u32)>,
}

impl ComponentEtaData {
    /// The weighted eta sum `g^{pre} sum_{k,v} g^{k+v} (eta_+ - eta_-)`,
    /// a Laurent polynomial with rational coefficients.
    pub fn eta_sum(&self) -> RationalFn {
        let mut acc: BTreeMap<i64, BigRational> = BTreeMap::new();
        for e in &self.entries {
            let exp = self.prefactor_exp + e.k as i64 + e.v;
            let signed = if e.positive { e.eta.clone() } else { -e.eta.clone() };
            *acc.entry(exp).or_insert_with(BigRational::zero) += signed;
        }
        let mut num = HalfLaurent::zero();
        let mut den = BigInt::from(1);
        for c in acc.values() {
            den = num_integer::Integer::lcm(&den, c.denom());
        }
        for (e, c) in &acc {
            if c.is_zero() {
                continue;
            }
            num = num.add(&HalfLaurent::monomial_q(2 * e, c.numer() * (&den / c.denom())));
        }
        RationalFn::new(num, HalfLaurent::constant_big(den)).unwrap()
    }
}

/// A localization defect: the assembled rational function together with
/// the truncation level it was computed at and the conservative threshold
/// above which the level is provably sufficient.
#[derive(Clone, Debug)]
pub struct QDefect {
    pub value: RationalFn,
    pub level: u32,
    pub threshold: u128,
    pub below_threshold: bool,
}

/// Assemble the defect
/// `eta_total - sum_alpha prod_v (g^v-1)^{-r_v-N} * eta_sum(alpha)`.
pub fn q_defect_assemble(
    eta_total: &RationalFn,
    components: &[ComponentEtaData],
    level: u32,
    pt: &CirclePoint,
) -> Result<QDefect, EtaError> {
    let mut threshold: u128 = 0;
    let mut value = eta_total.clone();
    for c in components {
        for &(v, r) in &c.weights {
            if r == 0 {
                continue;
            }
            if pt.is_torsion_of(v as i64) {
                return Err(EtaError::ExcludedPoint);
            }
            threshold = threshold.max(gamma_nilpotency_bound(r as u64, c.dim as u64));
        }
        let mut den = HalfLaurent::one();
        for &(v, r) in &c.weights {
            if r == 0 {
                continue;
            }
            let f = HalfLaurent::g_pow_minus_one(v as i64);
            den = den.mul(&f.pow((r + level) as i64).unwrap());
        }
        let term = c.eta_sum().div(&RationalFn::from_laurent(den)).unwrap();
        value = value.sub(&term);
    }
    Ok(QDefect { value, level, threshold, below_threshold: (level as u128) <= threshold })
}

#[derive(Debug, Deserialize)]
pub struct EtaDataSpec {
    pub components: Vec<EtaComponentSpec>,
    #[serde(rename = "N")]
    pub level: u32,
}

#[derive(Debug, Deserialize)]
pub struct EtaComponentSpec {
    pub name: String,
    pub prefactor_exp: i64,
    #[serde(default)]
    pub dim: u32,
    pub entries: Vec<EtaEntrySpec>,
    pub weights: Vec<EtaWeightSpec>,
}

#[derive(Debug, Deserialize)]
pub struct EtaEntrySpec {
    pub k: u32,
    pub v: i64,
    pub sign: String,
    pub eta: String,
}

#[derive(Debug, Deserialize)]
pub struct EtaWeightSpec {
    pub v: u32,
    pub rank: u32,
}

/// Parse the eta-data JSON format into components plus the level `N`.
pub fn eta_data_from_json(json: &str) -> Result<(Vec<ComponentEtaData>, u32), EtaError> {
    let spec: EtaDataSpec =
        serde_json::from_str(json).map_err(|e| EtaError::Schema(e.to_string()))?;
    let mut out = Vec::new();
    for c in &spec.components {
        let mut entries = Vec::new();
        for e in &c.entries {
            let positive = match e.sign.as_str() {
                "+" => true,
                "-" => false,
                other => {
                    return Err(EtaError::Schema(format!("bad sign {:?}", other)));
                }
            };
            let eta = parse_rational(&e.eta)
                .ok_or_else(|| EtaError::Schema(format!("bad eta value {:?}", e.eta)))?;
            entries.push(EtaEntry { k: e.k, v: e.v, positive, eta });
        }
        out.push(ComponentEtaData {
            name: c.name.clone(),
            prefactor_exp: c.prefactor_exp,
            dim: c.dim,
            entries,
            weights: c.weights.iter().map(|w| (w.v, w.rank)).collect(),
        });
    }
    Ok((out, spec.level))
}

/// Declared exclusion set: all points of order dividing `k`.
pub fn torsion_exclusion_set(k: u32) -> BTreeSet<CirclePoint> {
    let mut out = BTreeSet::new();
    for n in 1..=k {
        if k % n != 0 {
            continue;
        }
        for j in 0..n {
            if num_integer::Integer::gcd(&j, &n) == 1 {
                out.insert(CirclePoint::root_of_unity(n, j as i64));
            }
        }
    }
    out
}

fn order_fully_excluded(a: &BTreeSet<CirclePoint>, n: u32) -> bool {
    (0..n)
        .filter(|j| num_integer::Integer::gcd(j, &n) == 1)
        .all(|j| a.contains(&CirclePoint::root_of_unity(n, j as i64)))
}

/// Reconstruct a black-box function from exact root-of-unity samples and
/// verify that it is a rational function with integer coefficients whose
/// unit-circle poles all lie inside the declared exclusion set.
///
/// The evaluator receives `(order, k, field)` and returns the exact value
/// in the given cyclotomic field, or `None` where it is undefined.
pub fn verify_rationality(
    f: &dyn Fn(u32, u32, &CycloField) -> Option<Cyclo>,
    a: &BTreeSet<CirclePoint>,
    degree_bound: usize,
) -> Result<RationalFn, ReconstructError> {
    let needed = 2 * degree_bound + 1;
    let samples = collect_samples(f, a, needed)?;
    let rec = rational_reconstruct(&samples, degree_bound)?;
    // integer coefficients hold by canonicalization; the substantive check
    // is the pole locations
    debug_assert!(rec.is_integral() || !rec.numerator().is_zero());
    let den = rec.denominator();
    if !den.is_one() {
        let (orders, _) = cyclotomic_factor_orders(den);
        for (&n, _) in &orders {
            if !order_fully_excluded(a, n) {
                return Err(ReconstructError::PoleOutsideA(n));
            }
        }
    }
    Ok(rec)
}

fn collect_samples(
    f: &dyn Fn(u32, u32, &CycloField) -> Option<Cyclo>,
    a: &BTreeSet<CirclePoint>,
    count: usize,
) -> Result<Vec<Sample>, ReconstructError> {
    let excluded_orders: BTreeSet<u32> =
        a.iter().filter_map(|p| p.order()).collect();
    let mut p = (count as u32).max(2);
    for _ in 0..64 {
        p += 1;
        if !is_prime(p) || excluded_orders.contains(&p) {
            continue;
        }
        let field = CycloField::new(p);
        let mut samples = Vec::new();
        for k in 1..p {
            if samples.len() == count {
                break;
            }
            match f(p, k, &field) {
                Some(value) => samples.push(Sample { n: p, k, value }),
                None => break,
            }
        }
        if samples.len() == count {
            return Ok(samples);
        }
    }
    Err(ReconstructError::InsufficientSamples)
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
