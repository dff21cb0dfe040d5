//! Real and p-adic local densities, and their dependence on the fibre.
//!
//! All real integrals run over the whole line or plane. Unbounded pieces are
//! mapped onto [0, 1) by x = a + u/(1 - u); integrands decay at least like
//! |x|^-2, so the mapped integrands stay bounded.

use quadrature::double_exponential::integrate;
use rayon::prelude::*;

use crate::arith::is_prime;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Place {
    Real,
    Complex,
    Prime(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalDensity {
    pub place: Place,
    pub value: f64,
    /// Quadrature estimate plus the change under a thousandfold tighter
    /// tolerance; for p-adic densities the omitted residue cell.
    pub error_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sym2Exponent {
    /// Both roots scaled by the fibre coordinates.
    Nine,
    /// Fibre height as a factor outside.
    Six,
}

impl Sym2Exponent {
    pub fn from_int(e: u32) -> Result<Self> {
        match e {
            9 => Ok(Sym2Exponent::Nine),
            6 => Ok(Sym2Exponent::Six),
            _ => Err(Error::Domain(format!("exponent target must be 9 or 6, got {e}"))),
        }
    }

    pub fn as_int(self) -> u32 {
        match self {
            Sym2Exponent::Nine => 9,
            Sym2Exponent::Six => 6,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Quad {
    value: f64,
    error: f64,
}

impl std::ops::Add for Quad {
    type Output = Quad;
    fn add(self, o: Quad) -> Quad {
        Quad { value: self.value + o.value, error: self.error + o.error }
    }
}

const ZERO: Quad = Quad { value: 0.0, error: 0.0 };

/// ∫ f over [a, b], b possibly infinite.
fn segment<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Quad {
    let out = if b.is_finite() {
        integrate(&f, a, b, tol)
    } else {
        integrate(
            |u| {
                let w = 1.0 - u;
                f(a + u / w) / (w * w)
            },
            0.0,
            1.0,
            tol,
        )
    };
    Quad { value: out.integral, error: out.error_estimate }
}

/// ∫ f over [lo, hi] split at the given interior points.
fn pieces<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, breaks: &[f64], tol: f64) -> Quad {
    let mut cuts = vec![lo];
    cuts.extend(breaks.iter().copied().filter(|&x| x > lo && x < hi));
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2).map(|w| segment(&f, w[0], w[1], tol)).fold(ZERO, |a, b| a + b)
}

/// Integrates with a tolerance relative to a first rough pass, then again a
/// thousand times tighter; the difference enters the error estimate.
fn refined<F: Fn(f64) -> Quad>(run: F, rel_tol: f64) -> Quad {
    let rough = run(f64::MAX).value.abs().max(f64::MIN_POSITIVE);
    let coarse = run(rough * rel_tol * 1e3);
    let fine = run(rough * rel_tol);
    Quad { value: fine.value, error: fine.error + (fine.value - coarse.value).abs() }
}

fn check_pair(y: (i64, i64)) -> Result<()> {
    if y == (0, 0) {
        return Err(Error::ZeroInput("fibre coordinates"));
    }
    if crate::arith::gcd(y.0, y.1) != 1 {
        return Err(Error::NotCoprime);
    }
    Ok(())
}

/// sup(|y0 τ|, |y1 τ|, y0², y1²) at τ ≥ 0.
fn fiber_sup(y: (i64, i64), tau: f64) -> f64 {
    let (a, b) = (y.0.unsigned_abs() as f64, y.1.unsigned_abs() as f64);
    (a * tau).max(b * tau).max(a * a).max(b * b)
}

/// The values of |τ| where the maximum in [`fiber_sup`] changes term.
fn fiber_kinks(y: (i64, i64)) -> Vec<f64> {
    let (a, b) = (y.0.unsigned_abs() as f64, y.1.unsigned_abs() as f64);
    [a * a / a, b * b / a, a * a / b, b * b / b].into_iter().filter(|x| x.is_finite() && *x > 0.0).collect()
}

/// ∫_R max(|τ|, 1)^-2 dτ.
pub fn tau_inf_p1() -> LocalDensity {
    let q = refined(|tol| pieces(|t| t.max(1.0).powi(-2), 0.0, f64::INFINITY, &[1.0], tol / 2.0), 1e-12);
    LocalDensity { place: Place::Real, value: 2.0 * q.value, error_estimate: 2.0 * q.error }
}

/// Real density of the fibre over y: ∫_R sup(|y0 τ|, |y1 τ|, y0², y1²)^-2 dτ.
pub fn tau_inf_v_fiber(y: (i64, i64)) -> Result<LocalDensity> {
    check_pair(y)?;
    let kinks = fiber_kinks(y);
    let q = refined(|tol| pieces(|t| fiber_sup(y, t).powi(-2), 0.0, f64::INFINITY, &kinks, tol / 2.0), 1e-12);
    Ok(LocalDensity { place: Place::Real, value: 2.0 * q.value, error_estimate: 2.0 * q.error })
}

/// p-adic density of P¹ from the points of P¹(Z/p^k): the chart τ ∈ Z_p and
/// the chart τ = 1/s, s ∈ pZ_p, each residue cell weighted by its measure
/// p^-k times the integrand. The cell s ≡ 0 is left out.
pub fn tau_p_p1(p: u64, k: u32) -> Result<LocalDensity> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if k == 0 || k > 12 {
        return Err(Error::Domain(format!("precision exponent must lie in 1..=12, got {k}")));
    }
    let modulus = p.checked_pow(k).filter(|&m| m <= 1 << 27).ok_or_else(|| {
        Error::Domain(format!("{p}^{k} residues is more than this routine enumerates"))
    })?;
    let cell = (modulus as f64).recip();
    let valuation = |mut x: u64| {
        let mut v = 0;
        while x.is_multiple_of(p) && v < k {
            x /= p;
            v += 1;
        }
        v
    };
    let abs_p = |v: u32| (p as f64).powi(-(v as i32));
    let mut total = 0.0;
    // τ ∈ Z_p: max(|τ|, 1) = 1
    for _ in 0..modulus {
        total += cell;
    }
    // τ = 1/s: max(|τ|,1)^-2 = |s|², dτ = |s|^-2 ds
    for s in (p..modulus).step_by(p as usize) {
        let a = abs_p(valuation(s));
        total += cell * a * a / (a * a);
    }
    Ok(LocalDensity { place: Place::Prime(p), value: total, error_estimate: cell })
}

/// Real density of the Sym² fibre over y, as a double integral over the
/// coefficients (t1, t2) of T² - t1 T + t2 of the product over its roots of
/// the per-root weight, cubed and inverted.
pub fn tau_inf_sym2_fiber(y: (i64, i64), target: Sym2Exponent) -> Result<LocalDensity> {
    check_pair(y)?;
    let h = y.0.unsigned_abs().max(y.1.unsigned_abs()) as f64;
    let weight = move |tau: f64| -> f64 {
        match target {
            Sym2Exponent::Nine => fiber_sup(y, tau).powi(-3),
            Sym2Exponent::Six => (h * tau.max(1.0)).powi(-3),
        }
    };
    let kinks = match target {
        Sym2Exponent::Nine => fiber_kinks(y),
        Sym2Exponent::Six => vec![1.0],
    };
    let q = refined(|tol| sym2_integral(&weight, &kinks, tol), 1e-9);
    if !q.value.is_finite() || q.value <= 0.0 {
        return Ok(LocalDensity { place: Place::Real, value: q.value, error_estimate: f64::INFINITY });
    }
    Ok(LocalDensity { place: Place::Real, value: q.value, error_estimate: q.error })
}

/// 2∫_{t1 ≥ 0} ∫_{t2} w(|τ1|) w(|τ2|), the factor 2 from t1 → -t1.
fn sym2_integral<W: Fn(f64) -> f64 + Sync>(weight: &W, kinks: &[f64], tol: f64) -> Quad {
    let integrand = |t1: f64, t2: f64| {
        let disc = t1 * t1 - 4.0 * t2;
        if disc >= 0.0 {
            let r = disc.sqrt();
            weight(((t1 + r) / 2.0).abs()) * weight(((t1 - r) / 2.0).abs())
        } else {
            let m = t2.sqrt();
            weight(m) * weight(m)
        }
    };
    let mut outer_breaks: Vec<f64> = kinks.iter().map(|s| 2.0 * s).collect();
    outer_breaks.sort_by(f64::total_cmp);
    outer_breaks.dedup();
    let mut cuts = vec![0.0];
    cuts.extend(outer_breaks);
    cuts.push(f64::INFINITY);
    let inner_tol = tol / 16.0;
    // real roots: t2 ≤ t1²/4, kinks where a root equals ±s
    let real_roots = |t1: f64| {
        let top = t1 * t1 / 4.0;
        let breaks: Vec<f64> = kinks.iter().flat_map(|&s| [t1 * s - s * s, -t1 * s - s * s]).collect();
        let f = |u: f64| integrand(t1, top - u);
        let shifted: Vec<f64> = breaks.iter().map(|b| top - b).collect();
        pieces(f, 0.0, f64::INFINITY, &shifted, inner_tol).value
    };
    // complex roots: t2 > t1²/4, kink where |τ| = √t2 = s
    let complex_roots = |t1: f64| {
        let low = t1 * t1 / 4.0;
        let breaks: Vec<f64> = kinks.iter().map(|&s| s * s).collect();
        pieces(|t2| integrand(t1, t2), low, f64::INFINITY, &breaks, inner_tol).value
    };
    let parts: Vec<Quad> = cuts
        .windows(2)
        .collect::<Vec<_>>()
        .par_iter()
        .flat_map_iter(|w| [segment(real_roots, w[0], w[1], tol / 8.0), segment(complex_roots, w[0], w[1], tol / 8.0)])
        .collect();
    let q = parts.into_iter().fold(ZERO, |a, b| a + b);
    Quad { value: 2.0 * q.value, error: 2.0 * q.error }
}
