//! Integral ideals and sublattices of O_K in the basis (1, ω), with point
//! enumeration in norm discs (imaginary fields) and embedding boxes (real fields).

use super::ring::{QInt, Ring};
use crate::arith::gcd128;

/// The ideal with Z-basis a, b + cω (Hermite normal form, c | a, c | b).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ideal {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl Ideal {
    pub fn norm(&self) -> i128 {
        self.a * self.c
    }

    pub fn basis(&self) -> [QInt; 2] {
        [QInt::new(self.a, 0), QInt::new(self.b, self.c)]
    }
}

/// All integral ideals of norm at most x, ordered by norm.
pub fn ideals_up_to(ring: &Ring, x: i128) -> Vec<Ideal> {
    let mut out = Vec::new();
    for n in 1..=x {
        let mut c = 1;
        while c * c <= n {
            if n % (c * c) == 0 {
                let a = n / c;
                let mut b = 0;
                while b < a {
                    // ω(b + cω) = c·nr + (b + c·tr)ω must lie in the lattice
                    let k = (b + c * ring.tr) / c;
                    if (c * ring.nr - k * b).rem_euclid(a) == 0 {
                        out.push(Ideal { a, b, c });
                    }
                    b += c;
                }
            }
            c += 1;
        }
    }
    out
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        return if a < 0 { (-a, -1, 0) } else { (a, 1, 0) };
    }
    let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
    (g, y, x - (a.div_euclid(b)) * y)
}

/// A Z-basis, in Hermite form, of the full-rank lattice spanned by `gens`.
pub fn lattice_basis(gens: &[QInt]) -> [QInt; 2] {
    let mut row = QInt::ZERO;
    let mut first = 0i128;
    for &g in gens {
        if g.v == 0 {
            first = gcd128(first, g.u);
            continue;
        }
        if row.v == 0 {
            row = if g.v < 0 { QInt::new(-g.u, -g.v) } else { g };
            continue;
        }
        let (d, x, y) = ext_gcd(row.v, g.v);
        let new_row = QInt::new(x * row.u + y * g.u, d);
        // the combination with vanishing ω-part
        let (p, q) = (g.v / d, row.v / d);
        first = gcd128(first, p * row.u - q * g.u);
        row = new_row;
    }
    let first = first.abs();
    if first != 0 {
        row.u = row.u.rem_euclid(first);
    }
    [QInt::new(first, 0), row]
}

/// Calls `f` on every nonzero λ = k1 e1 + k2 e2 with N λ ≤ t (imaginary fields).
pub fn enumerate_norm(ring: &Ring, basis: [QInt; 2], t: i128, mut f: impl FnMut(QInt)) {
    if t <= 0 {
        return;
    }
    let [mut e1, mut e2] = basis;
    // Gauss reduction of the binary form N(k1 e1 + k2 e2).
    loop {
        if ring.norm(e1) > ring.norm(e2) {
            std::mem::swap(&mut e1, &mut e2);
        }
        let a = ring.norm(e1);
        let bxy = ring.norm(ring.add(e1, e2)) - a - ring.norm(e2);
        if bxy.abs() <= a {
            break;
        }
        let mu = ((bxy as f64) / (2.0 * a as f64)).round() as i128;
        e2 = QInt::new(e2.u - mu * e1.u, e2.v - mu * e1.v);
    }
    let a = ring.norm(e1) as f64;
    let c = ring.norm(e2) as f64;
    let bxy = (ring.norm(ring.add(e1, e2)) - ring.norm(e1) - ring.norm(e2)) as f64;
    let det = 4.0 * a * c - bxy * bxy;
    let k2max = ((4.0 * a * t as f64) / det).sqrt().floor() as i128 + 1;
    for k2 in -k2max..=k2max {
        let k2f = k2 as f64;
        let disc = (bxy * k2f).powi(2) - 4.0 * a * (c * k2f * k2f - t as f64);
        if disc < 0.0 {
            continue;
        }
        let r = disc.sqrt();
        let lo = ((-bxy * k2f - r) / (2.0 * a)).floor() as i128 - 1;
        let hi = ((-bxy * k2f + r) / (2.0 * a)).ceil() as i128 + 1;
        for k1 in lo..=hi {
            let lam = QInt::new(k1 * e1.u + k2 * e2.u, k1 * e1.v + k2 * e2.v);
            if !lam.is_zero() && ring.norm(lam) <= t {
                f(lam);
            }
        }
    }
}

/// Calls `f` on every nonzero λ of the lattice with |σ1 λ| ≤ r1, |σ2 λ| ≤ r2,
/// plus possibly a few just outside (real fields; callers test exactly).
pub fn enumerate_box(ring: &Ring, basis: [QInt; 2], r1: f64, r2: f64, mut f: impl FnMut(QInt)) {
    if r1 <= 0.0 || r2 <= 0.0 {
        return;
    }
    let vec_of = |e: QInt| {
        let (s1, s2) = ring.sigma(e);
        (s1 / r1, s2 / r2)
    };
    let dot = |p: (f64, f64), q: (f64, f64)| p.0 * q.0 + p.1 * q.1;
    let [mut e1, mut e2] = basis;
    for _ in 0..200 {
        let (v1, v2) = (vec_of(e1), vec_of(e2));
        if dot(v1, v1) > dot(v2, v2) {
            std::mem::swap(&mut e1, &mut e2);
            continue;
        }
        let t = dot(v1, v2) / dot(v1, v1);
        if t.abs() <= 0.5 {
            break;
        }
        let mu = t.round() as i128;
        e2 = QInt::new(e2.u - mu * e1.u, e2.v - mu * e1.v);
    }
    let (v1, v2) = (vec_of(e1), vec_of(e2));
    let det = v1.0 * v2.1 - v1.1 * v2.0;
    let slack = 1e-7;
    let k2max = ((v1.0.abs() + v1.1.abs()) / det.abs() + slack).floor() as i128;
    for k2 in -k2max..=k2max {
        let k2f = k2 as f64;
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (p, q) in [(v1.0, v2.0), (v1.1, v2.1)] {
            // |k1 p + k2 q| ≤ 1
            if p.abs() < 1e-300 {
                if (k2f * q).abs() > 1.0 + slack {
                    lo = f64::INFINITY;
                }
                continue;
            }
            let (x, y) = ((-1.0 - k2f * q) / p, (1.0 - k2f * q) / p);
            lo = lo.max(x.min(y));
            hi = hi.min(x.max(y));
        }
        if lo > hi + 2.0 * slack {
            continue;
        }
        let (lo, hi) = ((lo - slack).ceil() as i128, (hi + slack).floor() as i128);
        for k1 in lo..=hi {
            let lam = QInt::new(k1 * e1.u + k2 * e2.u, k1 * e1.v + k2 * e2.v);
            if !lam.is_zero() {
                f(lam);
            }
        }
    }
}
