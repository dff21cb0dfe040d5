//! Lattice-point counts in the fibre boxes max{κ|y3|, κ²|y2|} ≤ B, and the
//! Möbius inversion that turns coprime counts into unrestricted ones.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::ring::{QInt, Ring};
use crate::arith::{gcd, isqrt, mobius, divisors};
use crate::qfield::FieldDescriptor;
use crate::zeta;
use crate::{Error, Result};

/// A fibre box. Over an imaginary quadratic field the one
/// complex place uses the normalized absolute value |y|² = N y.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeBox {
    pub kappa_per_place: Vec<f64>,
    pub a2_norm: u64,
    pub a3_norm: u64,
    pub b: f64,
}

impl LatticeBox {
    pub fn new(kappa_per_place: Vec<f64>, a2_norm: u64, a3_norm: u64, b: f64) -> Result<Self> {
        if kappa_per_place.is_empty() || kappa_per_place.iter().any(|&k| !(k > 0.0 && k.is_finite())) {
            return Err(Error::Domain("every κ_v must be positive".into()));
        }
        if a2_norm == 0 || a3_norm == 0 {
            return Err(Error::ZeroInput("ideal norm"));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::Domain(format!("cutoff must be positive, got {b}")));
        }
        Ok(LatticeBox { kappa_per_place, a2_norm, a3_norm, b })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa_per_place.iter().product()
    }

    pub fn with_b(&self, b: f64) -> Self {
        LatticeBox { b, ..self.clone() }
    }

    /// Bounds on the norms of the cofactors z3 = y3/g3 and z2 = y2/g2.
    fn cofactor_bounds(&self) -> (u64, u64) {
        let k = self.kappa();
        let x = (self.b / (k * self.a3_norm as f64)).floor();
        let y = (self.b / (k * k * self.a2_norm as f64)).floor();
        (x.max(0.0) as u64, y.max(0.0) as u64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeReport {
    pub count: u64,
    pub main_term: f64,
    /// sup of |count − main term| over cutoffs sampled in [B, 1.1 B].
    pub deviation: f64,
}

/// 2^{r+s−1} 2^{2r} (2π)^{2s} R / (|Δ| κ³ N𝔞2 N𝔞3) · B².
pub fn lattice_main_term(field: &FieldDescriptor, bx: &LatticeBox) -> f64 {
    let (r, s) = (field.r as i32, field.s as i32);
    let k = bx.kappa();
    2f64.powi(r + s - 1) * 2f64.powi(2 * r) * (2.0 * PI).powi(2 * s) * field.regulator * bx.b * bx.b
        / (field.disc.abs() as f64 * k * k * k * bx.a2_norm as f64 * bx.a3_norm as f64)
}

fn check_field(field: &FieldDescriptor, bx: &LatticeBox) -> Result<()> {
    zeta::check_counting_field(field)?;
    if bx.kappa_per_place.len() != 1 {
        return Err(Error::Domain(format!("expected one κ per place, got {}", bx.kappa_per_place.len())));
    }
    if !field.is_rational() {
        let ring = Ring::of(field)?;
        for n in [bx.a2_norm, bx.a3_norm] {
            if !is_norm(&ring, n) {
                return Err(Error::Domain(format!("no ideal of norm {n} in the field of discriminant {}", field.disc)));
            }
        }
    }
    Ok(())
}

fn is_norm(ring: &Ring, n: u64) -> bool {
    ring.elements_up_to(n as i128).iter().any(|&x| ring.norm(x) == n as i128)
}

/// #{z ∈ O_K : N z ≤ x}, zero included, row by row in the norm form.
pub(crate) fn norm_form_count(ring: &Ring, x: u64) -> u64 {
    // N(u + vω) ≤ x  ⟺  (2u + tr·v)² ≤ 4x + Δv².
    let d = ring.disc as i128;
    let x = x as i128;
    let vmax = isqrt((4 * x / -d) as u128) as i128;
    let mut total = 0i128;
    for v in -vmax..=vmax {
        let rhs = 4 * x + d * v * v;
        if rhs < 0 {
            continue;
        }
        let w = isqrt(rhs as u128) as i128;
        // w' ∈ [−w, w] with w' ≡ tr·v (mod 2)
        total += if ring.tr * v % 2 == 0 { 2 * (w / 2) + 1 } else { 2 * ((w + 1) / 2) };
    }
    total as u64
}

fn raw_count(field: &FieldDescriptor, bx: &LatticeBox) -> Result<u64> {
    let (x, y) = bx.cofactor_bounds();
    if field.is_rational() {
        // each nonzero y2 row holds 2⌊B/(κ a3)⌋ values of y3
        return Ok((1..=y).map(|_| 2 * 2 * x).sum());
    }
    let ring = Ring::of(field)?;
    let per_row = norm_form_count(&ring, x) - 1;
    Ok((norm_form_count(&ring, y) - 1) * per_row)
}

/// Counts the nonzero pairs (y2, y3) ∈ 𝔞2 × 𝔞3 in the box and compares with
/// the main term.
pub fn lattice_count_m1(bx: &LatticeBox, field: &FieldDescriptor) -> Result<LatticeReport> {
    check_field(field, bx)?;
    let count = raw_count(field, bx)?;
    let main_term = lattice_main_term(field, bx);
    let mut deviation = 0f64;
    for i in 0..=16 {
        let b = bx.b * (1.0 + 0.1 * i as f64 / 16.0);
        let sub = bx.with_b(b);
        let c = raw_count(field, &sub)?;
        deviation = deviation.max((c as f64 - lattice_main_term(field, &sub)).abs());
    }
    Ok(LatticeReport { count, main_term, deviation })
}

/// The coprimality condition imposed on the cofactor pair (z2, z3).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoprimalityTarget {
    /// (z2, z3) = O_K.
    Full,
    /// (z2, z3, n) = O_K.
    To(i64),
}

/// The coprime count in the box, directly and via Σ_𝔡 μ(𝔡)·#{𝔡-divisible pairs}.
pub fn mobius_inversion_check(field: &FieldDescriptor, bx: &LatticeBox, target: CoprimalityTarget) -> Result<(u64, u64)> {
    check_field(field, bx)?;
    if let CoprimalityTarget::To(0) = target {
        return Err(Error::ZeroInput("coprimality modulus"));
    }
    let (x, y) = bx.cofactor_bounds();
    if field.is_rational() {
        Ok(mobius_q(x as i64, y as i64, target))
    } else {
        mobius_imag(&Ring::of(field)?, x, y, target)
    }
}

fn mobius_q(x: i64, y: i64, target: CoprimalityTarget) -> (u64, u64) {
    let mut direct = 0u64;
    for z2 in (-y..=y).filter(|&v| v != 0) {
        for z3 in (-x..=x).filter(|&v| v != 0) {
            let g = gcd(z2, z3);
            let ok = match target {
                CoprimalityTarget::Full => g == 1,
                CoprimalityTarget::To(n) => gcd(g, n) == 1,
            };
            direct += ok as u64;
        }
    }
    let ds: Vec<i64> = match target {
        CoprimalityTarget::Full => (1..=x.min(y).max(0)).collect(),
        CoprimalityTarget::To(n) => divisors(n.abs()),
    };
    let inverted: i64 = ds.iter().map(|&d| mobius(d) as i64 * (2 * (x / d)) * (2 * (y / d))).sum();
    (direct, inverted as u64)
}

/// Ideals up to norm `n`, as unit-normalized generators, with μ from the
/// divisor-poset recursion μ(𝔡) = −Σ_{𝔢 | 𝔡, 𝔢 ≠ 𝔡} μ(𝔢).
fn ideals_with_mu(ring: &Ring, n: u64) -> Vec<(QInt, i64)> {
    let units = ring.units();
    let mut gens: Vec<QInt> = ring
        .elements_up_to(n as i128)
        .into_iter()
        .filter(|x| !x.is_zero())
        .map(|x| ring.unit_normalize(x, &units))
        .collect();
    gens.sort_by_key(|&x| (ring.norm(x), x));
    gens.dedup();
    let mut out: Vec<(QInt, i64)> = Vec::with_capacity(gens.len());
    for &g in &gens {
        let mu = if ring.norm(g) == 1 {
            1
        } else {
            -out.iter().filter(|(e, _)| ring.divides(*e, g)).map(|(_, m)| m).sum::<i64>()
        };
        out.push((g, mu));
    }
    out
}

fn mobius_imag(ring: &Ring, x: u64, y: u64, target: CoprimalityTarget) -> Result<(u64, u64)> {
    let zs3: Vec<QInt> = ring.elements_up_to(x as i128).into_iter().filter(|z| !z.is_zero()).collect();
    let zs2: Vec<QInt> = ring.elements_up_to(y as i128).into_iter().filter(|z| !z.is_zero()).collect();
    let extra = match target {
        CoprimalityTarget::Full => None,
        CoprimalityTarget::To(n) => Some(QInt::new(n as i128, 0)),
    };
    let mut direct = 0u64;
    for &a in &zs2 {
        for &b in &zs3 {
            let mut gens = vec![a, b];
            gens.extend(extra);
            direct += (ring.ideal_norm(&gens) == 1) as u64;
        }
    }
    let ideals = match extra {
        None => ideals_with_mu(ring, x.min(y)),
        Some(n) => ideals_with_mu(ring, ring.norm(n) as u64).into_iter().filter(|(d, _)| ring.divides(*d, n)).collect(),
    };
    let mut inverted = 0i64;
    for (d, mu) in ideals {
        if mu == 0 {
            continue;
        }
        let c2 = zs2.iter().filter(|&&z| ring.divides(d, z)).count() as i64;
        let c3 = zs3.iter().filter(|&&z| ring.divides(d, z)).count() as i64;
        inverted += mu * c2 * c3;
    }
    Ok((direct, inverted as u64))
}

/// μ of the ideals of norm ≤ n, keyed by generator.
pub fn ideal_mobius_table(field: &FieldDescriptor, n: u64) -> Result<BTreeMap<(i128, i128), i64>> {
    let ring = Ring::of(field)?;
    Ok(ideals_with_mu(&ring, n).into_iter().map(|(g, m)| ((g.u, g.v), m)).collect())
}
