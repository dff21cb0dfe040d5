//! Counts over imaginary quadratic fields of class number one.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::ring::{QInt, Ring};
use crate::arith::{isqrt, Sieve};
use crate::geometry::{classify_pattern, Locus};
use crate::qfield::FieldDescriptor;
use crate::zeta;
use crate::Result;

pub(crate) fn p1_count(field: &FieldDescriptor, b: u64) -> Result<u64> {
    Ok(zeta::p1_height_distribution(field, b as usize)?.iter().sum())
}

/// Prefix counts A*(x) = #{z ≠ 0 : N z ≤ x} for x ≤ n.
pub(crate) fn nonzero_norm_counts(field: &FieldDescriptor, n: u64) -> Vec<i128> {
    let reps = zeta::norm_representations(field, n as usize);
    let mut acc = -1i128;
    reps.iter()
        .map(|&r| {
            acc += r as i128;
            acc
        })
        .collect()
}

/// Torsor count on U. Coprime pairs (y0, y1) with max norm κ are weighted by
/// the Möbius-sieved count of coprime (y2, y3) with κ N y3 ≤ B, κ² N y2 ≤ B,
/// and the result is divided by ω² for the unit action on the torsor.
pub(crate) fn parametrized_u(field: &FieldDescriptor, b: u64) -> Result<u64> {
    zeta::check_counting_field(field)?;
    if b == 0 {
        return Ok(0);
    }
    let a = nonzero_norm_counts(field, b);
    let sieve = Sieve::new(b as usize);
    let m = zeta::inverse_dedekind_coefficients(field.disc, b as usize, &sieve);
    let kmax = isqrt(b as u128) as u64;
    let t = |k: u64| a[k as usize] * a[k as usize] - a[k as usize - 1] * a[k as usize - 1];
    let total: i128 = (1..=kmax)
        .into_par_iter()
        .map(|k| {
            let mut p = 0i128;
            for d in 1..=k {
                if k % d == 0 && m[d as usize] != 0 {
                    p += m[d as usize] as i128 * t(k / d);
                }
            }
            if p == 0 {
                return 0;
            }
            let (x, y) = (b / k, b / (k * k));
            let g: i128 = (1..=y)
                .filter(|&j| m[j as usize] != 0)
                .map(|j| m[j as usize] as i128 * a[(x / j) as usize] * a[(y / j) as usize])
                .sum();
            p * g
        })
        .sum();
    let w = field.omega as i128;
    Ok((total / (w * w)) as u64)
}

/// Enumerates primitive integral coordinate tuples with all norms ≤ B and
/// divides by the number of units.
pub(crate) fn brute_force(field: &FieldDescriptor, b: u64) -> Result<BTreeMap<Locus, u64>> {
    zeta::check_counting_field(field)?;
    let ring = Ring::of(field)?;
    let bb = b as i128;
    let elems = ring.elements_up_to(bb);
    let partial: Vec<BTreeMap<Locus, u64>> = elems
        .par_iter()
        .map(|&t0| {
            let mut m = BTreeMap::new();
            let mut record = |t: [QInt; 4]| {
                if ring.ideal_norm(&t) == 1 {
                    let z = [t[0].is_zero(), t[1].is_zero(), t[2].is_zero(), t[3].is_zero()];
                    *m.entry(classify_pattern(z)).or_insert(0u64) += 1;
                }
            };
            for &t1 in &elems {
                if t1.is_zero() {
                    if t0.is_zero() {
                        continue;
                    }
                    for &t3 in &elems {
                        record([t0, t1, QInt::ZERO, t3]);
                    }
                    continue;
                }
                let d = ring.mul(t1, t1);
                let t00 = ring.mul(t0, t0);
                for &t2 in &elems {
                    if let Some(t3) = ring.div_exact(ring.mul(t00, t2), d) {
                        if ring.norm(t3) <= bb {
                            record([t0, t1, t2, t3]);
                        }
                    }
                }
            }
            m
        })
        .collect();
    let mut out = BTreeMap::new();
    for m in partial {
        for (k, v) in m {
            *out.entry(k).or_insert(0) += v;
        }
    }
    let w = field.omega as u64;
    Ok(out.into_iter().map(|(k, v)| (k, v / w)).collect())
}
