//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Expected values come from independent oracles in `common` (direct
//! expansion over explicit roots, series composition in the free word ring,
//! Abel resummation) or are frozen exact constants.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lambdak_core::bundle::{binomial_big, BundleAtom, VirtualBundle};
use lambdak_core::cdga::{contractible_model, torus_model};
use lambdak_core::chern::{gamma_ch_reduced, lambda_ch, verify_gamma_basis_identity, verify_twisting_identities};
use lambdak_core::cyclo::CycloField;
use lambdak_core::eta::{
    aps_disc_consistency, circle_eta_abel_oracle_rational, circle_eta_closed,
    torsion_exclusion_set, verify_rationality, AbelSchedule, CircleEta,
};
use lambdak_core::gamma_ring::{cs_product_identity_check, odd_chern_matrix, GammaElement};
use lambdak_core::lambda_engine::{
    gamma_k_closed, gamma_nilpotency_bound, inverse_expansion_parts, verify_unit_identity,
};
use lambdak_core::localize::{
    cancellation_check, cp1_fixture, localized_index, pole_cancellation_check, sym_expansion,
};
use lambdak_core::point::CirclePoint;
use lambdak_core::ratfn::RationalFn;
use lambdak_core::reconstruct::{rational_reconstruct, sample_ratfn};
use lambdak_core::HalfLaurent;

use common::{elementary_of, exp_coeffs, expand_sym, q, ExplicitPoly};

const WEIGHT_SETS: &[&[(u32, u32)]] = &[
    &[(1, 1)],
    &[(1, 2)],
    &[(2, 1)],
    &[(1, 1), (2, 1)],
    &[(1, 1), (3, 2)],
];

fn report(criterion: u32, label: &str, pass: bool) {
    println!(
        "criterion {:02} {}: {}",
        criterion,
        if pass { "PASS" } else { "FAIL" },
        label
    );
    assert!(pass, "criterion {:02} failed: {}", criterion, label);
}

#[test]
fn criterion_01_unit_identity() {
    let started = Instant::now();
    let mut pass = true;
    for ws in WEIGHT_SETS {
        for d in 2..=4u32 {
            match verify_unit_identity(ws, d, d, &CirclePoint::Generic) {
                Ok(true) => {}
                _ => pass = false,
            }
        }
    }
    let elapsed = started.elapsed();
    report(1, "truncated inverse unit identity, five weight sets, D in 2..4", pass);
    assert!(elapsed.as_secs() < 30, "unit identity too slow: {:?}", elapsed);
}

#[test]
fn criterion_02_gamma_closed_form() {
    // independent route: expand lambda_{t/(1-t)}(E) (1-t)^r by binomial
    // series composition in the free word ring and read off t^k
    let mut pass = true;
    for r in 1..=4u32 {
        for k in 0..=6u32 {
            let mut coeffs = vec![VirtualBundle::zero(); 7];
            for i in 0..=r {
                for j in 0..=(r - i).min(6 - i) {
                    let c = binomial_big(r - i, j);
                    let c = if j % 2 == 0 { c } else { -c };
                    let idx = (i + j) as usize;
                    coeffs[idx] =
                        coeffs[idx].add(&VirtualBundle::atom_power(0, i).scale_int(&c));
                }
            }
            if gamma_k_closed(k, 0, r) != coeffs[k as usize] {
                pass = false;
            }
        }
    }
    report(2, "gamma closed form equals series composition, r <= 4, k <= 6", pass);
}

#[test]
fn criterion_03_lambda_of_chern_character() {
    let mut pass = true;
    for r in 1..=3u32 {
        for d in 1..=6u32 {
            let exps: Vec<ExplicitPoly> = (0..r as usize)
                .map(|j| ExplicitPoly::series_of_var(r as usize, d, j, &exp_coeffs(1, 1, d)))
                .collect();
            for k in 0..=r {
                // direct expansion of the k-th elementary symmetric function
                // of the exponentials: the product formula's t^k coefficient
                let oracle = elementary_of(&exps, k as usize);
                let implementation = expand_sym(&lambda_ch(k, r, d));
                if oracle != implementation {
                    pass = false;
                }
            }
            // the exponential generating route, assembled in the explicit
            // ring: exp(sum_j (-1)^{j-1} Psi^j(ch) t^j / j)
            if !lambda_exponential_route_matches(r, d) {
                pass = false;
            }
        }
    }
    report(3, "exterior powers of the character series, both routes, r <= 3, D <= 6", pass);
}

/// t-series exponential assembly in the explicit-root ring.
fn lambda_exponential_route_matches(r: u32, d: u32) -> bool {
    let n = r as usize;
    let t_order = r as usize;
    // log term: L_j = (-1)^{j-1}/j * sum_i exp(j u_i)
    let mut log_terms: Vec<ExplicitPoly> = vec![ExplicitPoly::zero(n, d)];
    for j in 1..=t_order as i64 {
        let mut psi = ExplicitPoly::zero(n, d);
        for i in 0..n {
            psi = psi.add(&ExplicitPoly::series_of_var(n, d, i, &exp_coeffs(j, 1, d)));
        }
        let sign = if j % 2 == 1 { q(1, j) } else { q(-1, j) };
        log_terms.push(psi.scale(&sign));
    }
    // exponentiate as a t-series
    let mut series: Vec<ExplicitPoly> = vec![ExplicitPoly::zero(n, d); t_order + 1];
    series[0] = ExplicitPoly::one(n, d);
    let mut pow = series.clone();
    let mut fact = BigRational::one();
    for m in 1..=t_order {
        let mut next = vec![ExplicitPoly::zero(n, d); t_order + 1];
        for i in 0..=t_order {
            for j in 1..=t_order {
                if i + j > t_order {
                    break;
                }
                next[i + j] = next[i + j].add(&pow[i].mul(&log_terms[j]));
            }
        }
        pow = next;
        fact = fact * BigRational::from_integer((m as i64).into());
        let inv = fact.clone().recip();
        for i in 0..=t_order {
            series[i] = series[i].add(&pow[i].scale(&inv));
        }
    }
    (0..=r).all(|k| series[k as usize] == expand_sym(&lambda_ch(k, r, d)))
}

#[test]
fn criterion_04_gamma_basis_identity() {
    let mut pass = true;
    for r in 1..=3u32 {
        for d in 1..=5u32 {
            // explicit bilateral expansion
            let n = r as usize;
            let exps: Vec<ExplicitPoly> = (0..n)
                .map(|j| ExplicitPoly::series_of_var(n, d, j, &exp_coeffs(1, 1, d)))
                .collect();
            let exps_minus_one: Vec<ExplicitPoly> =
                exps.iter().map(|e| e.sub(&ExplicitPoly::one(n, d))).collect();
            for k in 0..=r as usize {
                // lhs t^k coefficient: sum_i e_i(exp) * C(r-i, k-i) (-1)^{k-i}
                let mut lhs = ExplicitPoly::zero(n, d);
                for i in 0..=k.min(r as usize) {
                    let c = binomial_big((r as usize - i) as u32, (k - i) as u32);
                    let c = if (k - i) % 2 == 0 { c } else { -c };
                    lhs = lhs.add(
                        &elementary_of(&exps, i)
                            .scale(&BigRational::from_integer(c)),
                    );
                }
                let rhs = elementary_of(&exps_minus_one, k);
                if lhs != rhs {
                    pass = false;
                }
            }
            if !verify_gamma_basis_identity(r, d) {
                pass = false;
            }
        }
    }
    report(4, "gamma-basis generating identity, r <= 3, D <= 5", pass);
}

#[test]
fn criterion_05_gamma_degree_bound() {
    let mut pass = true;
    for r in 1..=3u32 {
        for i in 0..=3u32 {
            for d in 1..=6u32 {
                let s = gamma_ch_reduced(i.min(r), r, d);
                if let Some(min) = s.min_degree() {
                    if min < i.min(r) {
                        pass = false;
                    }
                }
                // explicit check: every monomial of the expansion
                let explicit = expand_sym(&s);
                for (exps, _) in &explicit.terms {
                    let total: u32 = exps.iter().map(|&e| e as u32).sum();
                    if total < i.min(r) {
                        pass = false;
                    }
                }
            }
        }
    }
    report(5, "reduced gamma characters start in degree >= i", pass);
}

#[test]
fn criterion_06_inverse_recursion_both_views() {
    let mut pass = true;
    for r in 1..=3u32 {
        for l in 1..=8u32 {
            let mut acc = VirtualBundle::zero();
            for i in 0..=r.min(l) {
                let g = gamma_k_closed(i, 0, r);
                let (p, m) = inverse_expansion_parts(l - i, 0, r);
                acc = acc.add(&g.mul(&p.sub(&m)));
            }
            for v in [0i64, 1, 2] {
                let atom = BundleAtom::new("E", r, v);
                if !acc.char_view(std::slice::from_ref(&atom)).is_zero() {
                    pass = false;
                }
                if !acc.chern_view(std::slice::from_ref(&atom), 4).is_zero() {
                    pass = false;
                }
            }
        }
    }
    report(6, "inverse-expansion recursion vanishes in character and Chern views", pass);
}

#[test]
fn criterion_07_nilpotency_bound_constants() {
    let pass = gamma_nilpotency_bound(1, 1) == 10
        && gamma_nilpotency_bound(2, 1) == 736
        && gamma_nilpotency_bound(1, 0) == 0;
    report(7, "nilpotency threshold constants", pass);
}

#[test]
fn criterion_08_two_point_localization() {
    let started = Instant::now();
    let mut pass = true;
    for m in 0..=10i64 {
        let data = cp1_fixture(m);
        let idx = localized_index(&data, 0, &CirclePoint::Generic).unwrap();
        let expect = HalfLaurent::from_terms((0..=m).map(|j| (2 * j, BigInt::one())));
        let (cancelled, chr) = pole_cancellation_check(&idx);
        if !cancelled || chr != Some(expect) {
            pass = false;
        }
        let coeffs = sym_expansion(&data, -10, m + 10).unwrap();
        let support: BTreeMap<i64, BigInt> = (0..=m).map(|j| (j, BigInt::one())).collect();
        if coeffs != support {
            pass = false;
        }
        if !cancellation_check(&data, m).unwrap() {
            pass = false;
        }
        if m >= 1 && cancellation_check(&data, m - 1).unwrap() {
            pass = false;
        }
    }
    let elapsed = started.elapsed();
    report(8, "two-point fixture character, expansion support and cancellation", pass);
    assert!(elapsed.as_secs() < 5, "localization too slow: {:?}", elapsed);
}

#[test]
fn criterion_09_twisting_identities() {
    let mut pass = true;
    for ws in WEIGHT_SETS {
        let twist: i64 = ws.iter().map(|&(v, r)| (v * r) as i64).sum();
        let l = if twist % 2 == 0 { 2 } else { 1 };
        match verify_twisting_identities(ws, l, 4, &CirclePoint::Generic) {
            Ok(true) => {}
            _ => pass = false,
        }
    }
    report(9, "normal-bundle twisting identities, five weight sets", pass);
}

#[test]
fn criterion_10_circle_eta() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20260809);
    let sched = AbelSchedule::default();
    let mut pass = true;
    for k in 1..=5u32 {
        let mut done = 0;
        while done < 20 {
            let den = 997i64;
            let num = rng.gen_range(1..den);
            if (k as i64 * num) % den == 0 {
                continue;
            }
            done += 1;
            let est = circle_eta_abel_oracle_rational(k, num, den, &sched).unwrap();
            let closed = match circle_eta_closed(k, &CirclePoint::Generic) {
                CircleEta::Regular(f) => f.eval_unit_circle(num as f64 / den as f64),
                CircleEta::Excluded => unreachable!(),
            };
            if (est - closed).norm() >= 1e-9 {
                pass = false;
            }
        }
        for pt in torsion_exclusion_set(k) {
            if circle_eta_closed(k, &pt) != CircleEta::Excluded {
                pass = false;
            }
        }
        if !aps_disc_consistency(k) {
            pass = false;
        }
    }
    let elapsed = started.elapsed();
    report(10, "circle eta closed form vs Abel oracle, torsion halves, disc consistency", pass);
    assert!(elapsed.as_secs() < 10, "eta oracle too slow: {:?}", elapsed);
}

#[test]
fn criterion_11_reconstruction() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut pass = true;
    for _ in 0..5 {
        // random rational function with integer coefficients in [-20, 20]
        // and degrees <= 8
        let num_deg = rng.gen_range(0..=8usize);
        let den_deg = rng.gen_range(0..=8usize);
        let num = HalfLaurent::from_terms(
            (0..=num_deg).map(|i| (2 * i as i64, BigInt::from(rng.gen_range(-20i64..=20)))),
        );
        let mut den = HalfLaurent::from_terms(
            (0..=den_deg).map(|i| (2 * i as i64, BigInt::from(rng.gen_range(-20i64..=20)))),
        );
        if den.is_zero() {
            den = HalfLaurent::one();
        }
        let f = match RationalFn::new(num, den) {
            Ok(f) => f,
            Err(_) => continue,
        };
        // 17 samples at 19th roots of unity (19 is prime and > 2*8+1)
        let samples = match sample_ratfn(&f, 19, 17) {
            Ok(s) => s,
            Err(_) => continue,
        };
        match rational_reconstruct(&samples, 8) {
            Ok(rec) if rec == f => {}
            _ => pass = false,
        }
    }
    // planted pole outside the declared exclusion set is flagged
    let planted = RationalFn::new(HalfLaurent::one(), HalfLaurent::one_minus_g_pow(3)).unwrap();
    let a: BTreeSet<CirclePoint> = torsion_exclusion_set(2);
    let eval = move |n: u32, k: u32, field: &CycloField| field.eval_ratfn(&planted, n, k);
    if !matches!(
        verify_rationality(&eval, &a, 3),
        Err(lambdak_core::error::ReconstructError::PoleOutsideA(3))
    ) {
        pass = false;
    }
    report(11, "rational reconstruction round trip and pole-set flag", pass);
}

#[test]
fn criterion_12_form_model_ring_and_lambda() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut pass = true;
    for algebra in [torus_model(), contractible_model()] {
        // commutativity and associativity on 100 random triples
        for _ in 0..100 {
            let x = random_gamma(&mut rng, &algebra);
            let y = random_gamma(&mut rng, &algebra);
            let z = random_gamma(&mut rng, &algebra);
            if x.star(&y).unwrap() != y.star(&x).unwrap() {
                pass = false;
            }
            if x.star(&y).unwrap().star(&z).unwrap() != x.star(&y.star(&z).unwrap()).unwrap() {
                pass = false;
            }
        }
        // lambda additivity through the top nilpotency order
        for _ in 0..10 {
            let x = random_gamma(&mut rng, &algebra);
            let y = random_gamma(&mut rng, &algebra);
            let top = algebra.top_degree() / 2 + 2;
            let sx = x.lambda_series(top).unwrap();
            let sy = y.lambda_series(top).unwrap();
            let sxy = x.add(&y).unwrap().lambda_series(top).unwrap();
            for k in 0..=top as usize {
                let mut cauchy = GammaElement::zero(algebra.clone());
                for i in 0..=k {
                    cauchy = cauchy.add(&sx[i].star(&sy[k - i]).unwrap()).unwrap();
                }
                if cauchy != sxy[k] {
                    pass = false;
                }
            }
        }
    }
    // transgression product identity on 50 generated instances
    let c = contractible_model();
    for _ in 0..50 {
        let alpha = random_odd(&mut rng, &c);
        let beta = random_odd(&mut rng, &c);
        let a0 = random_closed_even(&mut rng, &c);
        let b0 = random_closed_even(&mut rng, &c);
        let a1 = c.add(&a0, &c.d(&alpha));
        let b1 = c.add(&b0, &c.d(&beta));
        if cs_product_identity_check(&c, &a0, &a1, &b0, &b1, &alpha, &beta) != Ok(true) {
            pass = false;
        }
    }
    // odd character of a constant invertible matrix vanishes
    let t = torus_model();
    let f = vec![
        vec![t.unit(), t.zero()],
        vec![t.zero(), t.scale(&t.unit(), &q(3, 1))],
    ];
    let weights = vec![HalfLaurent::g_pow(1), HalfLaurent::g_pow(-2)];
    match odd_chern_matrix(&t, &f, &weights) {
        Ok(coeffs) => {
            if coeffs.iter().any(|x| !x.is_zero()) {
                pass = false;
            }
        }
        Err(_) => pass = false,
    }
    report(12, "form-model ring axioms, lambda additivity, product identity, odd character", pass);
}

// random generators for the form model, local to the acceptance suite

fn random_closed_even(
    rng: &mut ChaCha8Rng,
    algebra: &std::sync::Arc<lambdak_core::cdga::Cdga>,
) -> lambdak_core::cdga::Element {
    let mut acc = algebra.zero();
    for i in 0..algebra.dim() {
        if algebra.degree_of_basis(i) % 2 != 0 {
            continue;
        }
        let b = algebra.basis_element(i);
        if algebra.is_closed(&b) && rng.gen_bool(0.5) {
            let c = BigRational::from_integer(rng.gen_range(-3i64..=3).into());
            acc = algebra.add(&acc, &algebra.scale(&b, &c));
        }
    }
    acc
}

fn random_odd(
    rng: &mut ChaCha8Rng,
    algebra: &std::sync::Arc<lambdak_core::cdga::Cdga>,
) -> lambdak_core::cdga::Element {
    let mut acc = algebra.zero();
    for i in 0..algebra.dim() {
        if algebra.degree_of_basis(i) % 2 == 1 && rng.gen_bool(0.5) {
            let c = BigRational::from_integer(rng.gen_range(-3i64..=3).into());
            acc = algebra.add(&acc, &algebra.scale(&algebra.basis_element(i), &c));
        }
    }
    acc
}

fn random_gamma(
    rng: &mut ChaCha8Rng,
    algebra: &std::sync::Arc<lambdak_core::cdga::Cdga>,
) -> GammaElement {
    let mut omega = random_closed_even(rng, algebra);
    omega[0] = BigRational::from_integer(rng.gen_range(-2i64..=3).into());
    let phi = random_odd(rng, algebra);
    GammaElement::new(algebra.clone(), omega, phi).unwrap()
}
