//! Quadratic points of V, counted one per conjugate pair.
//!
//! Three families: points whose fibre coordinate φ(x) is rational (the fibres
//! over P¹(Q), including the two lines over (1:0) and (0:1)), quadratic points
//! of the base line, and points with φ(x) quadratic, all of which lie in U.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::ideals::{enumerate_box, enumerate_norm, ideals_up_to, lattice_basis};
use super::ring::{QInt, Ring};
use crate::arith::{gcd, gcd128, isqrt, Sieve};
use crate::heights::{self, mahler_at_most, mahler_measure, ProjectivePoint, QuadraticPoint};
use crate::qfield::{self, FieldDescriptor, FieldElement};
use crate::{Error, Result};

/// Largest cutoff accepted by the quadratic-point engines.
pub const QUADRATIC_CEILING: f64 = 2000.0;

/// An exact nonnegative rational cutoff num/den.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cutoff {
    pub num: i128,
    pub den: i128,
}

impl Cutoff {
    /// The binary fraction equal to `b`, or `b` rounded down to a multiple of
    /// 2^-20 when it has more bits than that.
    pub fn from_f64(b: f64) -> Result<Self> {
        if !b.is_finite() || b < 0.0 {
            return Err(Error::Domain(format!("cutoff must be a nonnegative number, got {b}")));
        }
        if b > 1e12 {
            return Err(Error::Domain(format!("cutoff {b} too large for exact arithmetic")));
        }
        let mut den = 1i128;
        while den < 1 << 20 && (b * den as f64).fract() != 0.0 {
            den *= 2;
        }
        Ok(Cutoff { num: (b * den as f64).floor() as i128, den })
    }

    pub fn integer(n: i128) -> Self {
        Cutoff { num: n, den: 1 }
    }

    /// This cutoff divided by an integer.
    pub fn div(&self, k: i128) -> Self {
        Cutoff { num: self.num, den: self.den * k }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn floor(&self) -> i128 {
        self.num.div_euclid(self.den)
    }

    /// v ≤ B for an integer v.
    pub fn admits(&self, v: i128) -> bool {
        v * self.den <= self.num
    }
}

fn squarefree_divisors(mut n: usize, sieve: &Sieve) -> Vec<(i128, i128)> {
    let mut out = vec![(1i128, 1i128)];
    while n > 1 {
        let p = sieve.spf[n] as usize;
        while n.is_multiple_of(p) {
            n /= p;
        }
        let more: Vec<(i128, i128)> = out.iter().map(|&(d, m)| (d * p as i128, -m)).collect();
        out.extend(more);
    }
    out
}

/// ℓ[g] = #{(r, s) : r ≥ 1, s ≠ 0, gcd(r, s) = 1, max(|s|, κr) = g}, g ≤ top.
fn linear_form_layers(kappa: i128, top: usize) -> Vec<u64> {
    let mut l = vec![0u64; top + 1];
    for (g, slot) in l.iter_mut().enumerate().skip(1) {
        let g = g as i128;
        let mut n = 0u64;
        let mut r = 1;
        while kappa * r < g {
            if gcd128(r, g) == 1 {
                n += 2;
            }
            r += 1;
        }
        if g % kappa == 0 {
            let r = g / kappa;
            // #{1 ≤ s ≤ g : gcd(s, r) = 1} = κ φ(r)
            let phi = (1..=r).filter(|&s| gcd128(s, r) == 1).count() as u64;
            n += 2 * kappa as u64 * phi;
        }
        *slot = n;
    }
    l
}

/// Number of primitive irreducible aT² + bT + c (a > 0, c ≠ 0) with
/// κ²·M(aκ²T² + bκT + c) ≤ B: the conjugate pairs on the fibre over a point
/// of height κ.
pub fn fiber_family_count(kappa: i64, cut: Cutoff) -> u64 {
    let k = kappa as i128;
    let (p, q) = (cut.num, cut.den);
    let (k2, k3) = (k * k, k * k * k);
    let amax = p / (q * k2 * k2);
    let cmax = p / (q * k2);
    if amax < 1 || cmax < 1 {
        return 0;
    }
    let sieve = Sieve::new(amax as usize + 1);
    let primitive: i128 = (1..=amax)
        .into_par_iter()
        .map(|a| {
            let mut s = 0i128;
            for c in (-cmax..=cmax).filter(|&c| c != 0) {
                // Bκ³|b| ≤ B² + aκ⁶c, scaled by q²
                let numer = p * p + a * c * q * q * k3 * k3;
                if numer < 0 {
                    continue;
                }
                let r = numer / (p * q * k3);
                let g = gcd128(a, c.abs());
                if g == 1 {
                    s += 2 * r + 1;
                } else {
                    for (d, mu) in squarefree_divisors(g as usize, &sieve) {
                        s += mu * (2 * (r / d) + 1);
                    }
                }
            }
            s
        })
        .sum();
    // reducible: (pT + q)(rT + s) with κ²·max(|q|, κp)·max(|s|, κr) ≤ B
    let top = (p / (q * k3)) as usize;
    let layers = linear_form_layers(k, top);
    let mut cumulative = vec![0u64; top + 1];
    for g in 1..=top {
        cumulative[g] = cumulative[g - 1] + layers[g];
    }
    let mut ordered = 0u64;
    for g1 in 1..=top {
        if layers[g1] > 0 {
            let g2 = (p / (q * k2 * g1 as i128)) as usize;
            ordered += layers[g1] * cumulative[g2.min(top)];
        }
    }
    let gd = isqrt((p / (q * k2)) as u128) as usize;
    let diagonal = cumulative[gd.min(top)];
    let reducible = (ordered + diagonal) / 2;
    primitive as u64 - reducible
}

/// Conjugate pairs of quadratic points of P¹ with Mahler measure ≤ B.
pub fn quadratic_p1_count(cut: Cutoff) -> u64 {
    fiber_family_count(1, cut)
}

/// Number of points of P¹(Q) of height exactly κ.
pub fn p1_multiplicity(kappa: i64) -> u64 {
    if kappa == 1 {
        4
    } else {
        4 * (1..=kappa).filter(|&r| gcd(r, kappa) == 1).count() as u64
    }
}

/// Conjugate pairs with φ(x) rational: Σ_κ #P¹(Q)_κ · F(κ, B).
pub fn rational_fiber_total(cut: Cutoff) -> u64 {
    let mut total = 0;
    let mut k = 1i64;
    while cut.admits((k as i128).pow(4)) {
        total += p1_multiplicity(k) * fiber_family_count(k, cut);
        k += 1;
    }
    total
}

/// A minimal polynomial with a > 0, grouped by its splitting field.
#[derive(Debug, Clone, Copy)]
struct EtaPoly {
    a: i128,
    b: i128,
    c: i128,
    measure: f64,
}

fn primitive_irreducible_up_to(bound: f64) -> Vec<(i64, EtaPoly)> {
    let top = (bound * (1.0 + 1e-9)).floor() as i64;
    let mut out = Vec::new();
    for a in 1..=top {
        for c in -top..=top {
            for b in -2 * top..=2 * top {
                if gcd(gcd(a, b), c) != 1 {
                    continue;
                }
                let disc = (b as i128) * (b as i128) - 4 * (a as i128) * (c as i128);
                if crate::arith::is_square(disc) {
                    continue;
                }
                let m = mahler_measure(a, b, c);
                if m <= bound * (1.0 + 1e-9) {
                    let qp = QuadraticPoint::new(a, b, c).expect("irreducible");
                    out.push((qp.field_discriminant(), EtaPoly { a: a as i128, b: b as i128, c: c as i128, measure: m }));
                }
            }
        }
    }
    out
}

/// aη = u + fω for the root η = (−b + √(b² − 4ac))/(2a).
fn scaled_root(ring: &Ring, e: &EtaPoly) -> QInt {
    let qp = QuadraticPoint::new(e.a as i64, e.b as i64, e.c as i64).expect("irreducible");
    let (f0, _) = qp.disc_decomposition();
    let f0 = f0 as i128;
    if ring.tr == 1 {
        QInt::new((-e.b - f0) / 2, f0)
    } else {
        QInt::new(-e.b / 2, f0 / 2)
    }
}

fn scale(x: QInt, k: i128) -> QInt {
    QInt::new(x.u * k, x.v * k)
}

/// Points (ηα : α : 1 : η²) with η from one field, α ∈ K*.
fn phi_quadratic_in_field(ring: &Ring, etas: &[EtaPoly], cut: Cutoff) -> u64 {
    let b = cut.value();
    let max_c = etas.iter().map(|e| (b / (e.measure * e.measure) * (1.0 + 1e-9)).floor() as i128).max().unwrap_or(0);
    if max_c < 1 {
        return 0;
    }
    let ideals = ideals_up_to(ring, max_c);
    let mut total = 0u64;
    for e in etas {
        let a_eta = scaled_root(ring, e);
        let nc_max = (b / (e.measure * e.measure) * (1.0 + 1e-9)).floor() as i128;
        for id in ideals.iter().take_while(|i| i.norm() <= nc_max) {
            let nc = id.norm();
            let [c1, c2] = id.basis();
            let (c1, c2) = (ring.conj(c1), ring.conj(c2));
            let lat = lattice_basis(&[scale(c1, e.a), scale(c2, e.a), ring.mul(a_eta, c1), ring.mul(a_eta, c2)]);
            let anc = e.a * nc;
            let primitive = |lam: QInt| ring.ideal_norm(&[lam, QInt::new(anc, 0), scale(a_eta, nc)]) == anc;
            if ring.is_real() {
                let (s1, s2) = ring.sigma(a_eta);
                let m1 = 1f64.max((s1 / e.a as f64).abs());
                let m2 = 1f64.max((s2 / e.a as f64).abs());
                let r1 = b / (e.a as f64 * m1 * m2 * m2) * (1.0 + 1e-9);
                let r2 = b / (e.a as f64 * m2 * m1 * m1) * (1.0 + 1e-9);
                let limit = cut.num * e.a * e.a * nc;
                let scale_f = e.a as f64 * e.a as f64 * nc as f64;
                enumerate_box(ring, lat, r1, r2, |lam| {
                    let xs = [ring.mul(a_eta, lam), scale(lam, e.a), QInt::new(e.a * e.a * nc, 0), scale(ring.mul(a_eta, a_eta), nc)];
                    let (mut h1, mut h2) = (0f64, 0f64);
                    for &x in &xs {
                        let (p, q) = ring.sigma(x);
                        h1 = h1.max(p.abs());
                        h2 = h2.max(q.abs());
                    }
                    let h = h1 * h2 / scale_f;
                    let inside = if h < b * (1.0 - 1e-9) {
                        true
                    } else if h > b * (1.0 + 1e-9) {
                        false
                    } else {
                        xs.iter().all(|&xi| xs.iter().all(|&xj| ring.abs_sigma1_le(scale(ring.mul(xi, ring.conj(xj)), cut.den), limit)))
                    };
                    if inside && primitive(lam) {
                        total += 1;
                    }
                });
            } else {
                let mx = e.a.max(e.c);
                // N𝔠·max(a, c)² ≤ B and Nλ·max(a, c) ≤ B·a·N𝔠
                if !cut.admits(nc * mx * mx) {
                    continue;
                }
                let t = cut.num * e.a * nc / (mx * cut.den);
                enumerate_norm(ring, lat, t, |lam| {
                    if primitive(lam) {
                        total += 1;
                    }
                });
            }
        }
    }
    total
}

/// Conjugate pairs with φ(x) quadratic, and the largest |Δ_K| met.
pub fn phi_quadratic_total(cut: Cutoff) -> Result<(u64, i64)> {
    let b = cut.value();
    let mut by_field: BTreeMap<i64, Vec<EtaPoly>> = BTreeMap::new();
    for (d, e) in primitive_irreducible_up_to(b.sqrt()) {
        by_field.entry(d).or_default().push(e);
    }
    let fields: Vec<(i64, Vec<EtaPoly>)> = by_field.into_iter().collect();
    let parts: Vec<(u64, i64)> = fields
        .par_iter()
        .map(|(d, etas)| {
            let ring = Ring::from_disc(*d).expect("fundamental discriminant");
            let n = phi_quadratic_in_field(&ring, etas, cut);
            (n, if n > 0 { d.abs() } else { 0 })
        })
        .collect();
    let total = parts.iter().map(|p| p.0).sum();
    let max_disc = parts.iter().map(|p| p.1).max().unwrap_or(0);
    if max_disc as f64 > 4.0 * b {
        return Err(Error::Domain(format!("field discriminant {max_disc} exceeds 4B")));
    }
    Ok((total, max_disc))
}

/// Quadratic points of V of height at most B, one per conjugate pair.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticCount {
    pub cutoff_b: f64,
    /// φ(x) ∈ P¹(Q), including the lines over (1:0) and (0:1).
    pub phi_rational: u64,
    /// Quadratic points of the base line t2 = t3 = 0.
    pub base_line: u64,
    /// φ(x) quadratic.
    pub phi_quadratic: u64,
    /// Largest |Δ_K| among fields carrying a point with φ(x) quadratic.
    pub max_field_disc: i64,
}

impl QuadraticCount {
    pub fn total(&self) -> u64 {
        self.phi_rational + self.base_line + self.phi_quadratic
    }
}

fn check_ceiling(b: f64) -> Result<()> {
    if b > QUADRATIC_CEILING {
        return Err(Error::CeilingExceeded { b, ceiling: QUADRATIC_CEILING });
    }
    Ok(())
}

/// Counts quadratic points of V by family.
pub fn count_quadratic_points_v(b: f64) -> Result<QuadraticCount> {
    check_ceiling(b)?;
    let cut = Cutoff::from_f64(b)?;
    let (phi_quadratic, max_field_disc) = phi_quadratic_total(cut)?;
    Ok(QuadraticCount {
        cutoff_b: b,
        phi_rational: rational_fiber_total(cut),
        base_line: quadratic_p1_count(cut),
        phi_quadratic,
        max_field_disc,
    })
}

/// Slow oracle: every family enumerated from minimal polynomials, with
/// heights from the generic exact height routine. Meant for B ≤ 8.
pub fn slow_quadratic_oracle(b: u64) -> Result<QuadraticCount> {
    if b > 8 {
        return Err(Error::CeilingExceeded { b: b as f64, ceiling: 8.0 });
    }
    let bound = BigRational::from_integer(BigInt::from(b));
    let bi = b as i64;
    // all primitive irreducible polynomials with M ≤ B, a > 0
    let mut polys: Vec<QuadraticPoint> = Vec::new();
    for a in 1..=bi {
        for c in -bi..=bi {
            for bb in -2 * bi..=2 * bi {
                if gcd(gcd(a, bb), c) == 1 {
                    if let Ok(qp) = QuadraticPoint::new(a, bb, c) {
                        if mahler_at_most(a as i128, bb as i128, c as i128, b as i128, 1) {
                            polys.push(qp);
                        }
                    }
                }
            }
        }
    }
    let mut fields: HashMap<i64, FieldDescriptor> = HashMap::new();
    for p in &polys {
        let d = p.field_discriminant();
        if let std::collections::hash_map::Entry::Vacant(v) = fields.entry(d) {
            v.insert(qfield::field_invariants(d)?);
        }
    }
    let point = |coords: Vec<FieldElement>, d: i64| ProjectivePoint::new(coords, fields[&d].clone());
    let rat = |v: i64, m: i64| FieldElement::new(v, 0, m);

    let base_line = polys.len() as u64;

    let mut phi_rational = 0u64;
    for y0 in -bi..=bi {
        for y1 in -bi..=bi {
            // one representative per point of P¹(Q)
            let first_positive = y0 > 0 || (y0 == 0 && y1 > 0);
            if !first_positive || gcd(y0, y1) != 1 {
                continue;
            }
            for p in &polys {
                let (d, alpha) = (p.field_discriminant(), p.root());
                let m = alpha.m;
                let coords = vec![&rat(y0, m) * &alpha, &rat(y1, m) * &alpha, rat(y1 * y1, m), rat(y0 * y0, m)];
                if heights::height_at_most(&point(coords, d)?, &bound)? {
                    phi_rational += 1;
                }
            }
        }
    }

    let mut phi_quadratic = 0u64;
    for e in &polys {
        let (d, eta) = (e.field_discriminant(), e.root());
        let m = eta.m;
        let mut alphas: Vec<FieldElement> = Vec::new();
        for r in -bi..=bi {
            for s in 1..=bi {
                if r != 0 && gcd(r, s) == 1 {
                    alphas.push(FieldElement::from_ratios(BigRational::new(r.into(), s.into()), BigRational::from_integer(0.into()), m));
                }
            }
        }
        for p in polys.iter().filter(|p| p.field_discriminant() == d) {
            let root = p.root();
            alphas.push(root.clone());
            alphas.push(root.conj());
        }
        for alpha in alphas {
            let coords = vec![&eta * &alpha, alpha.clone(), rat(1, m), &eta * &eta];
            if heights::height_at_most(&point(coords, d)?, &bound)? {
                phi_quadratic += 1;
            }
        }
    }
    Ok(QuadraticCount { cutoff_b: b as f64, phi_rational, base_line, phi_quadratic, max_field_disc: 0 })
}

/// An element θ = λ/N𝔠 ∈ K \ Q with its height H_K(θ : 1), where 𝔠 is the
/// denominator ideal of θ.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ElementHeight {
    pub height: f64,
    /// numerator and denominator of the height (imaginary fields only)
    pub exact: Option<(i128, i128)>,
    pub lambda: QInt,
    pub denom_norm: i128,
}

/// All θ ∈ K \ Q with H_K(θ : 1) ≤ x, via the denominator ideal 𝔠:
/// θ ∈ 𝔠⁻¹ = 𝔠̄/N𝔠 with θO + O = 𝔠⁻¹ and H = N𝔠·∏_v max(|θ|_v, 1).
pub(crate) fn field_elements_up_to(ring: &Ring, x: f64) -> Vec<ElementHeight> {
    let mut out = Vec::new();
    let nc_max = (x * (1.0 + 1e-9)).floor() as i128;
    if nc_max < 1 {
        return out;
    }
    for id in ideals_up_to(ring, nc_max) {
        let nc = id.norm();
        let [c1, c2] = id.basis();
        let lat = lattice_basis(&[ring.conj(c1), ring.conj(c2)]);
        let mut push = |lam: QInt, height: f64, exact: Option<(i128, i128)>| {
            if lam.v != 0 && ring.ideal_norm(&[lam, QInt::new(nc, 0)]) == nc {
                out.push(ElementHeight { height, exact, lambda: lam, denom_norm: nc });
            }
        };
        if ring.is_real() {
            // max(|σ1λ|, N)·max(|σ2λ|, N) ≤ xN is hyperbolic: cover it by the
            // slab |σ1λ| ≤ N and dyadic slabs a/2 < |σ1λ| ≤ a, each point
            // kept only in its own slab
            let xs = x * (1.0 + 1e-9);
            let ncf = nc as f64;
            let mut lo = 0.0;
            let mut hi = ncf;
            loop {
                let r2 = if lo == 0.0 { xs } else { xs * ncf / lo };
                enumerate_box(ring, lat, hi, r2, |lam| {
                    let (s1, s2) = ring.sigma(lam);
                    if s1.abs() <= lo || s1.abs() > hi {
                        return;
                    }
                    let h = s1.abs().max(ncf) * s2.abs().max(ncf) / ncf;
                    if h <= xs {
                        // λ ∉ Q, so |σ_i λ| ≠ N and the sides are strict
                        let small1 = ring.abs_sigma1_le(lam, nc);
                        let small2 = ring.abs_sigma1_le(ring.conj(lam), nc);
                        let exact = match (small1, small2) {
                            (true, true) => Some((nc, 1)),
                            (false, false) => Some((ring.norm(lam).abs(), nc)),
                            _ => None,
                        };
                        push(lam, h, exact);
                    }
                });
                if hi >= xs {
                    break;
                }
                lo = hi;
                hi = (2.0 * hi).min(xs);
            }
        } else {
            // H = max(Nλ, N𝔠²)/N𝔠 ≤ x
            let t = (x * nc as f64 * (1.0 + 1e-9)).floor() as i128;
            enumerate_norm(ring, lat, t, |lam| {
                let num = ring.norm(lam).max(nc * nc);
                push(lam, num as f64 / nc as f64, Some((num, nc)));
            });
        }
    }
    out
}

/// θ as an element of Q(√m).
pub(crate) fn element_value(ring: &Ring, e: &ElementHeight) -> FieldElement {
    let m = ring.m() as i64;
    let (u, v, n) = (BigInt::from(e.lambda.u), BigInt::from(e.lambda.v), BigInt::from(e.denom_norm));
    if ring.tr == 1 {
        let two_n: BigInt = &n * 2;
        FieldElement::from_ratios(BigRational::new(u * 2 + &v, two_n.clone()), BigRational::new(v, two_n), m)
    } else {
        FieldElement::from_ratios(BigRational::new(u, n.clone()), BigRational::new(v, n), m)
    }
}
