//! Characteristic series in formal Chern roots and their circle-equivariant
//! twists.
//!
//! All series are truncated at a total-degree cutoff `D` with the dictionary
//! "one unit of root degree = form degree two"; the 2-pi-i normalization is
//! baked into the stored rational data, so everything here is exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::RingError;
use crate::laurent::HalfLaurent;
use crate::point::{vanishes_at, CirclePoint};
use crate::ratfn::RationalFn;
use crate::symfun::{series_inv, EquivSymSeries, MultiSym, SymSeries};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn factorial(n: u32) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}

/// Coefficients of `exp(s x)` up to degree `cutoff` for rational `s`.
pub fn exp_series(s: &BigRational, cutoff: u32) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(cutoff as usize + 1);
    let mut pow = BigRational::one();
    out.push(pow.clone());
    for m in 1..=cutoff {
        pow = pow * s / BigRational::from_integer(m.into());
        out.push(pow.clone());
    }
    out
}

/// `ch(E) = sum_j exp(u_j)` for a rank-`r` bundle with its own alphabet.
pub fn chern_character(r: u32, cutoff: u32) -> SymSeries {
    MultiSym::sum_over_roots(&[r], cutoff, 0, &exp_series(&BigRational::one(), cutoff))
}

/// `ch` of the k-th exterior power: the k-th elementary symmetric function
/// of the exponentials of the roots. Zero for `k > r`.
pub fn lambda_ch(k: u32, r: u32, cutoff: u32) -> SymSeries {
    if k == 0 {
        return MultiSym::one(vec![r], cutoff);
    }
    MultiSym::elementary_of_roots(&[r], cutoff, 0, &exp_series(&BigRational::one(), cutoff), k)
}

/// Adams operation on a symmetric series: roots scale by `k`, so the
/// degree-`l` part scales by `k^l`.
pub fn adams_ch(k: i64, s: &SymSeries) -> SymSeries {
    s.adams(k)
}

/// `ch` of the reduced gamma operation: the i-th elementary symmetric
/// function of `exp(u_j) - 1`. Its lowest degree is at least `i`.
pub fn gamma_ch_reduced(i: u32, r: u32, cutoff: u32) -> SymSeries {
    if i == 0 {
        return MultiSym::one(vec![r], cutoff);
    }
    let mut em1 = exp_series(&BigRational::one(), cutoff);
    em1[0] = rat(0, 1);
    MultiSym::elementary_of_roots(&[r], cutoff, 0, &em1, i)
}

fn binomial(n: u32, k: u32) -> i64 {
    if k > n {
        return 0;
    }
    let mut v: i64 = 1;
    for i in 0..k as i64 {
        v = v * (n as i64 - i) / (i + 1);
    }
    v
}

/// Check that the two expansions of the gamma-basis generating polynomial
/// agree: `sum_i sigma_i(e^u) t^i (1-t)^{r-i} = sum_i sigma_i(e^u - 1) t^i`,
/// exactly, coefficient by coefficient in `t`.
pub fn verify_gamma_basis_identity(r: u32, cutoff: u32) -> bool {
    let mut lhs = vec![MultiSym::zero(vec![r], cutoff); r as usize + 1];
    for i in 0..=r {
        let sigma = lambda_ch(i, r, cutoff);
        for j in 0..=(r - i) {
            let c = binomial(r - i, j) * if j % 2 == 0 { 1 } else { -1 };
            let k = (i + j) as usize;
            lhs[k] = lhs[k].add(&sigma.scale(&BigRational::from_integer(c.into())));
        }
    }
    lhs.iter()
        .enumerate()
        .all(|(i, coeff)| *coeff == gamma_ch_reduced(i as u32, r, cutoff))
}

/// The multiplicative genus `prod_j (u_j/2)/sinh(u_j/2)`.
pub fn a_hat(r: u32, cutoff: u32) -> SymSeries {
    // sinh(x/2)/(x/2) = sum x^{2m} / (4^m (2m+1)!)
    let mut sh = vec![rat(0, 1); cutoff as usize + 1];
    let mut m = 0u32;
    while 2 * m <= cutoff {
        let denom = BigInt::from(4).pow(m) * factorial(2 * m + 1);
        sh[(2 * m) as usize] = BigRational::new(1.into(), denom);
        m += 1;
    }
    let inv = series_inv(&sh, cutoff);
    MultiSym::prod_over_roots(&[r], cutoff, 0, &inv)
}

// ---- equivariant series ----

fn rf_rat(r: BigRational) -> RationalFn {
    RationalFn::from_big_rational(&r)
}

/// `g^{e/2}` as a rational-function coefficient.
fn g_half_pow(e: i64) -> RationalFn {
    RationalFn::from_laurent(HalfLaurent::q_pow(e))
}

/// Reject points where some active `g^v - 1` vanishes.
pub fn check_point(weights: &[(u32, u32)], pt: &CirclePoint) -> Result<(), RingError> {
    for &(v, r) in weights {
        if r == 0 {
            continue;
        }
        if vanishes_at(&HalfLaurent::g_pow_minus_one(v as i64), pt) {
            return Err(RingError::ExcludedPoint);
        }
    }
    Ok(())
}

/// Coefficients of `1/(g^{v/2} e^{u/2} - g^{-v/2} e^{-u/2})` as a series in
/// the root `u`: one line of the equivariant genus of the normal bundle.
fn a_hat_g_line(v: u32, cutoff: u32) -> Vec<RationalFn> {
    let mut den = Vec::with_capacity(cutoff as usize + 1);
    for m in 0..=cutoff {
        // (g^{v/2} - (-1)^m g^{-v/2}) / (2^m m!)
        let q_pos = HalfLaurent::q_pow(v as i64);
        let q_neg = HalfLaurent::q_pow(-(v as i64));
        let num = if m % 2 == 0 { q_pos.sub(&q_neg) } else { q_pos.add(&q_neg) };
        let scale = BigRational::new(1.into(), BigInt::from(2).pow(m) * factorial(m));
        den.push(RationalFn::from_laurent(num).mul(&rf_rat(scale)));
    }
    series_inv(&den, cutoff)
}

/// Equivariant genus of a positively-weighted normal bundle: the product
/// over weights `v` and roots `u` of `1/(g^{v/2}e^{u/2} - g^{-v/2}e^{-u/2})`,
/// whose degree-zero part is `prod_v (g^{v/2}/(g^v - 1))^{r_v}`.
pub fn a_hat_g_normal(
    weights: &[(u32, u32)],
    cutoff: u32,
    pt: &CirclePoint,
) -> Result<EquivSymSeries, RingError> {
    check_point(weights, pt)?;
    let ranks: Vec<u32> = weights.iter().map(|&(_, r)| r).collect();
    let mut out = MultiSym::one(ranks.clone(), cutoff);
    for (gi, &(v, _)) in weights.iter().enumerate() {
        let f = a_hat_g_line(v, cutoff);
        out = out.mul(&MultiSym::prod_over_roots(&ranks, cutoff, gi, &f));
    }
    Ok(out)
}

/// `g^v ch(E)` on a rank-`r` alphabet: one isotypic piece of an equivariant
/// Chern character.
pub fn ch_g_bundle(v: i64, r: u32, cutoff: u32) -> EquivSymSeries {
    let exp: Vec<RationalFn> = exp_series(&BigRational::one(), cutoff)
        .into_iter()
        .map(rf_rat)
        .collect();
    MultiSym::sum_over_roots(&[r], cutoff, 0, &exp).scale(&RationalFn::g_pow(v))
}

/// `g^{l/2} exp(u/2)`: the square-root line with weight `l`.
pub fn ch_g_sqrt_line(l: i64, cutoff: u32) -> EquivSymSeries {
    let exp: Vec<RationalFn> = exp_series(&rat(1, 2), cutoff).into_iter().map(rf_rat).collect();
    MultiSym::prod_over_roots(&[1], cutoff, 0, &exp).scale(&g_half_pow(l))
}

/// Independent expansion of the equivariant Chern character of the
/// alternating sum of conormal exterior powers:
/// `prod_v prod_j (1 - g^{-v} e^{-u_{v,j}})`.
pub fn ch_g_lambda_conormal(weights: &[(u32, u32)], cutoff: u32) -> EquivSymSeries {
    let ranks: Vec<u32> = weights.iter().map(|&(_, r)| r).collect();
    let mut out = MultiSym::one(ranks.clone(), cutoff);
    for (gi, &(v, _)) in weights.iter().enumerate() {
        let mut f: Vec<RationalFn> = exp_series(&rat(-1, 1), cutoff)
            .into_iter()
            .map(|c| rf_rat(-c).mul(&RationalFn::g_pow(-(v as i64))))
            .collect();
        f[0] = RationalFn::one().add(&f[0]);
        out = out.mul(&MultiSym::prod_over_roots(&ranks, cutoff, gi, &f));
    }
    out
}

/// Verify the two normal-bundle twisting identities at cutoff `D`: the
/// duality between the conormal alternating sum and the inverse equivariant
/// genus twisted by the half determinant, and the matching statement for
/// the full spin-c integrand restricted to the fixed component. The
/// component carries a rank-1 tangent alphabet, the weight-`l` line and one
/// alphabet per normal weight; both sides are expanded through independent
/// code paths and compared exactly.
pub fn verify_twisting_identities(
    weights: &[(u32, u32)],
    l: i64,
    cutoff: u32,
    pt: &CirclePoint,
) -> Result<bool, RingError> {
    check_point(weights, pt)?;
    // group 0 = tangent (rank 1), group 1 = L (rank 1), groups 2.. = normal
    let mut ranks = vec![1u32, 1u32];
    ranks.extend(weights.iter().map(|&(_, r)| r));
    let normal_map: Vec<usize> = (0..weights.len()).map(|i| i + 2).collect();

    let lambda_conormal = ch_g_lambda_conormal(weights, cutoff).embed(&ranks, &normal_map);

    // det(N)^{-1/2}: per weight group, g^{-v r/2} exp(-(sum of roots)/2)
    let mut det_inv_half = MultiSym::one(ranks.clone(), cutoff);
    let exp_neg_half: Vec<RationalFn> =
        exp_series(&rat(-1, 2), cutoff).into_iter().map(rf_rat).collect();
    for (i, &(v, r)) in weights.iter().enumerate() {
        let factor = MultiSym::prod_over_roots(&ranks, cutoff, normal_map[i], &exp_neg_half)
            .scale(&g_half_pow(-(v as i64) * r as i64));
        det_inv_half = det_inv_half.mul(&factor);
    }

    let ahat_g = a_hat_g_normal(weights, cutoff, pt)?.embed(&ranks, &normal_map);

    let rhs1 = ahat_g.inv().mul(&det_inv_half);
    if lambda_conormal != rhs1 {
        return Ok(false);
    }

    let ahat_tangent = a_hat(1, cutoff)
        .map_coeff(RationalFn::from_big_rational)
        .embed(&ranks, &[0]);
    let l_half = ch_g_sqrt_line(l, cutoff).embed(&ranks, &[1]);
    let lhs2 = ahat_tangent.mul(&ahat_g).mul(&l_half).mul(&lambda_conormal);
    // L_alpha = L tensor (det N)^{-1}: its half power splits accordingly
    let rhs2 = ahat_tangent.mul(&l_half).mul(&det_inv_half);
    Ok(lhs2 == rhs2)
}

/// Specialize `g = 1` when no coefficient denominator vanishes there.
pub fn eval_g_one(s: &EquivSymSeries) -> Option<SymSeries> {
    s.try_map_coeff(|c| c.eval_g_one().ok_or(())).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    use crate::symfun::MultiMono;

    fn chern_map(s: &SymSeries) -> BTreeMap<MultiMono, BigRational> {
        s.to_chern_basis()
    }

    fn c_mono(exps: &[u32]) -> MultiMono {
        vec![exps.to_vec()]
    }

    #[test]
    fn chern_character_small() {
        // r=1, D=2: 1 + c1 + c1^2/2
        let m = chern_map(&chern_character(1, 2));
        assert_eq!(m[&c_mono(&[])], rat(1, 1));
        assert_eq!(m[&c_mono(&[1])], rat(1, 1));
        assert_eq!(m[&c_mono(&[2])], rat(1, 2));
        // r=2, D=2: 2 + c1 + (c1^2 - 2 c2)/2
        let m = chern_map(&chern_character(2, 2));
        assert_eq!(m[&c_mono(&[])], rat(2, 1));
        assert_eq!(m[&c_mono(&[1])], rat(1, 1));
        assert_eq!(m[&c_mono(&[2])], rat(1, 2));
        assert_eq!(m[&c_mono(&[0, 1])], rat(-1, 1));
        // r=3, D=1: 3 + c1
        let m = chern_map(&chern_character(3, 1));
        assert_eq!(m[&c_mono(&[])], rat(3, 1));
        assert_eq!(m[&c_mono(&[1])], rat(1, 1));
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn lambda_ch_edges() {
        assert_eq!(lambda_ch(0, 3, 4), MultiSym::one(vec![3], 4));
        assert_eq!(lambda_ch(1, 3, 4), chern_character(3, 4));
        assert!(lambda_ch(4, 3, 4).is_zero());
        // top exterior power is the determinant line: sigma_r(e^u) = e^{c1}
        let top = lambda_ch(2, 2, 4);
        let det = MultiSym::power_sum(&[2], 4, 0, 1).exp();
        assert_eq!(top, det);
    }

    #[test]
    fn adams_scales_degrees() {
        let ch = chern_character(1, 2);
        let m = chern_map(&adams_ch(2, &ch));
        assert_eq!(m[&c_mono(&[1])], rat(2, 1));
        assert_eq!(m[&c_mono(&[2])], rat(2, 1)); // 4 * 1/2
    }

    #[test]
    fn gamma_reduced_values() {
        assert_eq!(gamma_ch_reduced(0, 2, 3), MultiSym::one(vec![2], 3));
        // i=1: ch - rank
        let expect = chern_character(2, 2).sub(&MultiSym::constant(vec![2], 2, rat(2, 1)));
        assert_eq!(gamma_ch_reduced(1, 2, 2), expect);
        // i=2, D=2: just c2
        let m = chern_map(&gamma_ch_reduced(2, 2, 2));
        assert_eq!(m.len(), 1);
        assert_eq!(m[&c_mono(&[0, 1])], rat(1, 1));
    }

    #[test]
    fn gamma_basis_identity_small_ranks() {
        assert!(verify_gamma_basis_identity(1, 3));
        assert!(verify_gamma_basis_identity(2, 4));
        assert!(verify_gamma_basis_identity(3, 5));
    }

    #[test]
    fn a_hat_values() {
        let m = chern_map(&a_hat(1, 2));
        assert_eq!(m[&c_mono(&[])], rat(1, 1));
        assert_eq!(m[&c_mono(&[2])], rat(-1, 24));
        assert_eq!(a_hat(1, 1), MultiSym::one(vec![1], 1));
        let m = chern_map(&a_hat(2, 2));
        assert_eq!(m[&c_mono(&[2])], rat(-1, 24));
        assert_eq!(m[&c_mono(&[0, 1])], rat(1, 12)); // -(c1^2 - 2 c2)/24
    }

    #[test]
    fn a_hat_g_degree_zero_convention() {
        // one line of weight 1 at cutoff 0: g^{1/2}/(g-1)
        let s = a_hat_g_normal(&[(1, 1)], 0, &CirclePoint::Generic).unwrap();
        let expect =
            RationalFn::new(HalfLaurent::q_pow(1), HalfLaurent::g_pow_minus_one(1)).unwrap();
        assert_eq!(s.constant_term(), expect);
        // two lines of weights 1 and 2: g^{1/2} g / ((g-1)(g^2-1))
        let s = a_hat_g_normal(&[(1, 1), (2, 1)], 0, &CirclePoint::Generic).unwrap();
        let expect = RationalFn::new(
            HalfLaurent::q_pow(3),
            HalfLaurent::g_pow_minus_one(1).mul(&HalfLaurent::g_pow_minus_one(2)),
        )
        .unwrap();
        assert_eq!(s.constant_term(), expect);
    }

    #[test]
    fn a_hat_g_rejects_excluded_points() {
        let err = a_hat_g_normal(&[(2, 1)], 2, &CirclePoint::root_of_unity(2, 1));
        assert!(matches!(err, Err(RingError::ExcludedPoint)));
    }

    #[test]
    fn ch_g_values() {
        // v=0 reduces to the plain character
        let plain = ch_g_bundle(0, 2, 3);
        let expect = chern_character(2, 3).map_coeff(RationalFn::from_big_rational);
        assert_eq!(plain, expect);
        // v=3, r=1, D=1: g^3 (1 + c1)
        let s = ch_g_bundle(3, 1, 1);
        assert_eq!(s.constant_term(), RationalFn::g_pow(3));
        // l=2, D=1: g (1 + c1(L)/2)
        let line = ch_g_sqrt_line(2, 1);
        assert_eq!(line.constant_term(), RationalFn::g_pow(1));
        let c1_part = line.degree_component(1);
        let (_, coeff) = c1_part.terms().next().unwrap();
        assert_eq!(*coeff, rf_rat(rat(1, 2)).mul(&RationalFn::g_pow(1)));
    }

    #[test]
    fn twisting_identities_hold() {
        assert!(verify_twisting_identities(&[(1, 1)], 1, 3, &CirclePoint::Generic).unwrap());
        assert!(
            verify_twisting_identities(&[(1, 1), (2, 2)], 3, 4, &CirclePoint::Generic).unwrap()
        );
        // empty normal bundle: both sides are the bare integrand
        assert!(verify_twisting_identities(&[], 2, 3, &CirclePoint::Generic).unwrap());
    }

    #[test]
    fn g_one_specialization() {
        let s = ch_g_bundle(2, 2, 3);
        let back = eval_g_one(&s).unwrap();
        assert_eq!(back, chern_character(2, 3));
        // a pole at g = 1 blocks specialization
        let pole = a_hat_g_normal(&[(1, 1)], 1, &CirclePoint::Generic).unwrap();
        assert!(eval_g_one(&pole).is_none());
    }
}
