//! Counts over Q.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::arith::{gcd, isqrt, Sieve};
use crate::geometry::{locus_of_ints, Locus};

/// N_{P¹,Q}(B) = 4 + 4 Σ_{2≤n≤B} φ(n), or 0 below height 1.
pub(crate) fn p1_count(b: u64) -> u64 {
    if b == 0 {
        return 0;
    }
    let sieve = Sieve::new(b as usize);
    4 + (2..=b as usize).map(|n| 4 * sieve.phi[n] as u64).sum::<u64>()
}

/// Coprime pairs in [1, x] × [1, y].
pub(crate) fn coprime_box(x: u64, y: u64, mu: &[i8]) -> i128 {
    let top = x.min(y);
    (1..=top)
        .filter(|&d| mu[d as usize] != 0)
        .map(|d| mu[d as usize] as i128 * (x / d) as i128 * (y / d) as i128)
        .sum()
}

/// Points on U of height at most B, via the torsor: for each κ = max(|y0|,|y1|)
/// the fibre contributes the coprime pairs (y2, y3) with κ|y3| ≤ B, κ²|y2| ≤ B.
pub(crate) fn parametrized_u(b: u64) -> u64 {
    if b == 0 {
        return 0;
    }
    let sieve = Sieve::new(b as usize);
    let kmax = isqrt(b as u128) as u64;
    let total: i128 = (1..=kmax)
        .into_par_iter()
        .map(|k| {
            let w: i128 = if k == 1 { 4 } else { 8 * sieve.phi[k as usize] as i128 };
            w * coprime_box(b / k, b / (k * k), &sieve.mu)
        })
        .sum();
    total as u64
}

/// Primitive solutions with |t_i| ≤ B, first nonzero coordinate positive, by locus.
pub(crate) fn brute_force(b: u64) -> BTreeMap<Locus, u64> {
    let b = b as i64;
    let partial: Vec<BTreeMap<Locus, u64>> = (0..=b)
        .into_par_iter()
        .map(|t0| {
            let mut m = BTreeMap::new();
            let mut record = |t: [i64; 4]| {
                if gcd(gcd(t[0], t[1]), gcd(t[2], t[3])) == 1 {
                    *m.entry(locus_of_ints(&t)).or_insert(0) += 1;
                }
            };
            let t1_range = if t0 == 0 { 1..=b } else { -b..=b };
            for t1 in t1_range {
                if t1 == 0 {
                    // t0 ≠ 0 forces t2 = 0 with t3 free.
                    for t3 in -b..=b {
                        record([t0, 0, 0, t3]);
                    }
                    continue;
                }
                let d = t1 * t1;
                for t2 in -b..=b {
                    let num = t0 * t0 * t2;
                    if num % d == 0 {
                        let t3 = num / d;
                        if t3.abs() <= b {
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
    out
}
