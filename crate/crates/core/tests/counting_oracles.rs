//! Counting engines against enumerations written from the definitions.

use std::collections::BTreeMap;

use cubelab::counting::{brute_force_count, count_p1, count_v, parametrized_count_u, LocusFilter};
use cubelab::geometry::{locus_of_ints, Locus};
use cubelab::qfield::{field_invariants, FieldDescriptor};

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Primitive integer solutions of t0² t2 = t1² t3 with max |t_i| ≤ b, off
/// t0 = t1 = 0, up to sign.
fn rational_points(b: i64) -> BTreeMap<Locus, u64> {
    let mut out = BTreeMap::new();
    let r = -b..=b;
    for t0 in r.clone() {
        for t1 in r.clone() {
            if t0 == 0 && t1 == 0 {
                continue;
            }
            for t2 in r.clone() {
                for t3 in r.clone() {
                    if t0 * t0 * t2 != t1 * t1 * t3 || gcd(gcd(t0, t1), gcd(t2, t3)) != 1 {
                        continue;
                    }
                    *out.entry(locus_of_ints(&[t0, t1, t2, t3])).or_insert(0) += 1;
                }
            }
        }
    }
    out.values_mut().for_each(|n| *n /= 2);
    out
}

#[test]
fn rational_counts_match_direct_enumeration() {
    let q = FieldDescriptor::rational();
    for b in [1i64, 2, 3, 5, 8, 13] {
        let want = rational_points(b);
        let got = count_v(&q, b as f64).unwrap();
        assert_eq!(got.by_locus, want, "B = {b}");
        assert_eq!(brute_force_count(&q, b as f64, LocusFilter::V).unwrap().by_locus, want);
        assert_eq!(parametrized_count_u(&q, b as f64).unwrap().total, want[&Locus::UOpen]);
    }
}

#[test]
fn non_integer_cutoffs_floor() {
    let q = FieldDescriptor::rational();
    assert_eq!(count_v(&q, 7.9).unwrap().total, count_v(&q, 7.0).unwrap().total);
}

type Gauss = (i64, i64);

fn gmul(a: Gauss, b: Gauss) -> Gauss {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn gnorm(a: Gauss) -> i64 {
    a.0 * a.0 + a.1 * a.1
}

/// Euclid in Z[i] with rounded quotients.
fn ggcd(mut a: Gauss, mut b: Gauss) -> Gauss {
    while b != (0, 0) {
        let n = gnorm(b) as f64;
        let num = gmul(a, (b.0, -b.1));
        let quot = ((num.0 as f64 / n).round() as i64, (num.1 as f64 / n).round() as i64);
        let qb = gmul(quot, b);
        let r = (a.0 - qb.0, a.1 - qb.1);
        a = b;
        b = r;
    }
    a
}

/// Points of W(Q(i)) with max N(t_i) ≤ b over primitive Gaussian tuples, up
/// to the four units.
fn gaussian_points(b: i64) -> BTreeMap<Locus, u64> {
    let r = (b as f64).sqrt() as i64;
    let elems: Vec<Gauss> = (-r..=r).flat_map(|x| (-r..=r).map(move |y| (x, y))).filter(|&z| gnorm(z) <= b).collect();
    let mut out = BTreeMap::new();
    for &t0 in &elems {
        for &t1 in &elems {
            if t0 == (0, 0) && t1 == (0, 0) {
                continue;
            }
            let g01 = ggcd(t0, t1);
            let lhs0 = gmul(t0, t0);
            let rhs0 = gmul(t1, t1);
            for &t2 in &elems {
                let lhs = gmul(lhs0, t2);
                for &t3 in &elems {
                    if lhs != gmul(rhs0, t3) || gnorm(ggcd(ggcd(g01, t2), t3)) != 1 {
                        continue;
                    }
                    let zero = |z: Gauss| if z == (0, 0) { 0 } else { 1 };
                    let l = locus_of_ints(&[zero(t0), zero(t1), zero(t2), zero(t3)]);
                    *out.entry(l).or_insert(0) += 1;
                }
            }
        }
    }
    out.values_mut().for_each(|n| *n /= 4);
    out
}

#[test]
fn gaussian_counts_match_direct_enumeration() {
    let k = field_invariants(-4).unwrap();
    for b in [1i64, 2, 4, 5, 8] {
        let want = gaussian_points(b);
        assert_eq!(count_v(&k, b as f64).unwrap().by_locus, want, "B = {b}");
    }
}

#[test]
fn p1_counts_match_direct_enumeration() {
    let q = FieldDescriptor::rational();
    for b in [1i64, 2, 10, 57] {
        let mut n = 0;
        for x in -b..=b {
            for y in 0..=b {
                if (y > 0 || x == 1) && gcd(x, y) == 1 {
                    n += 1;
                }
            }
        }
        assert_eq!(count_p1(&q, b as f64).unwrap(), n, "B = {b}");
    }
    let k = field_invariants(-4).unwrap();
    for b in [1i64, 2, 5, 10, 25] {
        let r = (b as f64).sqrt() as i64;
        let elems: Vec<Gauss> = (-r..=r).flat_map(|x| (-r..=r).map(move |y| (x, y))).filter(|&z| gnorm(z) <= b).collect();
        let mut n = 0;
        for &a in &elems {
            for &c in &elems {
                if (a, c) != ((0, 0), (0, 0)) && gnorm(ggcd(a, c)) == 1 {
                    n += 1;
                }
            }
        }
        assert_eq!(count_p1(&k, b as f64).unwrap(), n / 4, "B = {b}");
    }
}

#[test]
fn unsupported_fields_are_rejected() {
    let real = field_invariants(5).unwrap();
    assert!(count_v(&real, 10.0).is_err());
    let h3 = field_invariants(-23).unwrap();
    assert!(count_v(&h3, 10.0).is_err());
}

#[test]
fn brute_force_has_a_ceiling() {
    let q = FieldDescriptor::rational();
    assert!(brute_force_count(&q, 301.0, LocusFilter::V).is_err());
}
