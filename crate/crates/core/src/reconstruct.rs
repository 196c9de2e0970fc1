//! Cauchy rational interpolation from exact samples at roots of unity.
//!
//! Pins down the unique rational function of bounded degree through a set
//! of exact cyclotomic samples by solving the homogeneous linear system
//! `P(x_i) - y_i Q(x_i) = 0` over Q, then re-verifying every sample against
//! the reduced candidate.

use num_rational::BigRational;
use num_traits::Zero;

use crate::cyclo::{Cyclo, CycloField};
use crate::error::ReconstructError;
use crate::laurent::HalfLaurent;
use crate::linalg::kernel_basis;
use crate::point::CirclePoint;
use crate::ratfn::RationalFn;

/// One exact sample: the value of the target function at `e^{2 pi i k/n}`,
/// expressed in a common cyclotomic field whose order `n` divides.
#[derive(Clone, Debug)]
pub struct Sample {
    pub n: u32,
    pub k: u32,
    pub value: Cyclo,
}

/// Reconstruct the unique rational function with numerator and denominator
/// degrees `<= degree_bound` (in `g`, nonnegative powers) matching all
/// samples. Needs at least `2*degree_bound + 1` pairwise distinct points.
pub fn rational_reconstruct(
    samples: &[Sample],
    degree_bound: usize,
) -> Result<RationalFn, ReconstructError> {
    if samples.len() < 2 * degree_bound + 1 {
        return Err(ReconstructError::InsufficientSamples);
    }
    let mut seen = std::collections::BTreeSet::new();
    for s in samples {
        let pt = CirclePoint::root_of_unity(s.n, s.k as i64);
        if !seen.insert(pt) {
            return Err(ReconstructError::DuplicatePoints);
        }
    }
    let order = samples
        .iter()
        .map(|s| s.value.order)
        .max()
        .ok_or(ReconstructError::InsufficientSamples)?;
    let field = CycloField::new(order);
    let dim = field.degree();
    let b = degree_bound;
    let unknowns = 2 * (b + 1);

    // rows: phi(order) rational equations per sample
    let mut rows = Vec::with_capacity(samples.len() * dim);
    for s in samples {
        assert_eq!(s.value.order, order, "samples must share one field");
        // powers x^j for j = 0..b at this sample point
        let x_pows: Vec<Cyclo> = (0..=b)
            .map(|j| field.root_pow(j as i64 * (order / s.n) as i64 * s.k as i64))
            .collect();
        let mut row_block = vec![vec![BigRational::zero(); unknowns]; dim];
        for (j, xp) in x_pows.iter().enumerate() {
            for (d, c) in xp.coords(dim).into_iter().enumerate() {
                row_block[d][j] = c;
            }
            let yx = field.mul(&s.value, xp);
            for (d, c) in yx.coords(dim).into_iter().enumerate() {
                row_block[d][b + 1 + j] = -c;
            }
        }
        rows.extend(row_block);
    }

    let kernel = kernel_basis(rows, unknowns);
    let Some(vec) = kernel.first() else {
        return Err(ReconstructError::InconsistentSamples);
    };
    // scale the whole kernel vector to integers at once so the fraction is
    // preserved; the canonical form then clears any common content
    let mut lcm = num_bigint::BigInt::from(1);
    for c in vec {
        lcm = num_integer::Integer::lcm(&lcm, c.denom());
    }
    let ints: Vec<num_bigint::BigInt> =
        vec.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let num = laurent_from_integers(&ints[..=b]);
    let den = laurent_from_integers(&ints[b + 1..]);
    if den.is_zero() {
        return Err(ReconstructError::InconsistentSamples);
    }
    let f = RationalFn::new(num, den).map_err(|_| ReconstructError::InconsistentSamples)?;

    // the kernel vector fits by construction only up to shared roots at the
    // sample points; re-verify the reduced function against every sample
    for s in samples {
        match field.eval_ratfn(&f, s.n, s.k) {
            Some(v) if v == s.value => {}
            _ => return Err(ReconstructError::InconsistentSamples),
        }
    }
    Ok(f)
}

fn laurent_from_integers(coeffs: &[num_bigint::BigInt]) -> HalfLaurent {
    HalfLaurent::from_terms(
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (2 * i as i64, c.clone())),
    )
}

/// Sample a rational function exactly at `count` distinct primitive points
/// of order `n` (skipping `k` with `gcd(k,n) != 1` or poles).
pub fn sample_ratfn(
    f: &RationalFn,
    n: u32,
    count: usize,
) -> Result<Vec<Sample>, ReconstructError> {
    let field = CycloField::new(n);
    let mut out = Vec::new();
    for k in 1..n {
        if out.len() == count {
            break;
        }
        if num_integer::Integer::gcd(&k, &n) != 1 {
            continue;
        }
        match field.eval_ratfn(f, n, k) {
            Some(value) => out.push(Sample { n, k, value }),
            None => continue,
        }
    }
    if out.len() < count {
        return Err(ReconstructError::InsufficientSamples);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::HalfLaurent;

    fn rf(num: &[(i64, i64)], den: &[(i64, i64)]) -> RationalFn {
        RationalFn::new(HalfLaurent::from_g_terms(num), HalfLaurent::from_g_terms(den)).unwrap()
    }

    #[test]
    fn recovers_simple_pole() {
        // 1/(1 - g^2) from 5 samples at 11th roots of unity, bound 2
        let f = rf(&[(0, 1)], &[(0, 1), (2, -1)]);
        let samples = sample_ratfn(&f, 11, 5).unwrap();
        let rec = rational_reconstruct(&samples, 2).unwrap();
        assert_eq!(rec, f);
    }

    #[test]
    fn recovers_constant_half() {
        let f = rf(&[(0, 1)], &[(0, 2)]);
        let samples = sample_ratfn(&f, 5, 1).unwrap();
        let rec = rational_reconstruct(&samples, 0).unwrap();
        assert_eq!(rec, f);
    }

    #[test]
    fn recovers_monomial() {
        let f = rf(&[(3, 1)], &[(0, 1)]);
        let samples = sample_ratfn(&f, 11, 7).unwrap();
        let rec = rational_reconstruct(&samples, 3).unwrap();
        assert_eq!(rec, f);
    }

    #[test]
    fn insufficient_samples_rejected() {
        let f = rf(&[(1, 1)], &[(0, 1)]);
        let samples = sample_ratfn(&f, 11, 4).unwrap();
        assert!(matches!(
            rational_reconstruct(&samples, 2),
            Err(ReconstructError::InsufficientSamples)
        ));
    }

    #[test]
    fn inconsistent_when_bound_too_small() {
        // g^3 cannot be matched with bound 1 once enough samples pin it down
        let f = rf(&[(3, 1)], &[(0, 1)]);
        let samples = sample_ratfn(&f, 13, 9).unwrap();
        assert!(matches!(
            rational_reconstruct(&samples[..3], 1),
            Err(ReconstructError::InconsistentSamples)
        ));
    }
}
