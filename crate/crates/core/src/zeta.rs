//! Special values: ζ, Dirichlet L-series of Kronecker characters, Dedekind ζ
//! of quadratic fields, height zeta functions of P¹, Schanuel constants and
//! the predicted leading constants of every count in the crate.

use std::f64::consts::PI;

use rayon::prelude::*;
use libm::erfc;
use statrs::function::gamma::digamma;

use crate::arith::Sieve;
use crate::qfield::{self, FieldDescriptor};
use crate::{Error, Result};

/// A series evaluation with an estimate of the neglected remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    pub terms_used: u64,
}

// B_2, B_4, ..., B_18
const BERNOULLI: [f64; 9] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
];

const EM_TERMS: u64 = 12;

/// Hurwitz ζ(s, x) for s > 1, x > 0 by Euler–Maclaurin summation.
pub fn hurwitz_zeta(s: f64, x: f64) -> Result<SeriesValue> {
    if s <= 1.0 {
        return Err(Error::Domain(format!("hurwitz zeta needs s > 1, got {s}")));
    }
    if x <= 0.0 {
        return Err(Error::Domain(format!("hurwitz zeta needs x > 0, got {x}")));
    }
    let n = EM_TERMS as f64;
    let mut sum = 0.0;
    for k in (0..EM_TERMS).rev() {
        sum += (k as f64 + x).powf(-s);
    }
    let big = n + x;
    sum += big.powf(1.0 - s) / (s - 1.0) + 0.5 * big.powf(-s);
    // rising factorial s(s+1)...(s+2j-2) over (2j)!
    let mut coef = s / 2.0;
    let mut power = big.powf(-s - 1.0);
    let mut last = 0.0;
    for (j, b) in BERNOULLI.iter().enumerate() {
        let term = b * coef * power;
        sum += term;
        last = term.abs();
        let k = 2.0 * j as f64 + 2.0;
        coef *= (s + k - 1.0) * (s + k) / ((k + 1.0) * (k + 2.0));
        power /= big * big;
    }
    Ok(SeriesValue { value: sum, tail_bound: last, terms_used: EM_TERMS })
}

pub fn riemann_zeta(s: f64) -> Result<SeriesValue> {
    if s <= 1.0 {
        return Err(Error::Domain(format!("zeta needs s > 1, got {s}")));
    }
    hurwitz_zeta(s, 1.0)
}

fn zeta_value(s: f64) -> f64 {
    riemann_zeta(s).expect("s > 1").value
}

/// L(s, Δ) = Σ (Δ/n) n^{-s} summed over complete periods: through ψ at s = 1
/// and through Hurwitz ζ for s > 1.
pub fn dirichlet_l(s: f64, d: i64) -> Result<SeriesValue> {
    if !qfield::is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    if s < 1.0 {
        return Err(Error::Domain(format!("L-series needs s >= 1, got {s}")));
    }
    let q = d.unsigned_abs();
    let qf = q as f64;
    let mut sum = 0.0;
    let mut tail = 0.0;
    for a in 1..q {
        let chi = qfield::kronecker_unchecked(d, a as i64);
        if chi == 0 {
            continue;
        }
        let x = a as f64 / qf;
        if s == 1.0 {
            sum -= chi as f64 * digamma(x);
        } else {
            let h = hurwitz_zeta(s, x)?;
            sum += chi as f64 * h.value;
            tail += h.tail_bound;
        }
    }
    let (value, tail_bound) = if s == 1.0 {
        (sum / qf, 1e-15 * qf.ln().max(1.0))
    } else {
        (sum * qf.powf(-s), tail * qf.powf(-s))
    };
    Ok(SeriesValue { value, tail_bound, terms_used: q })
}

/// Exponential integral E1 by its power series near zero and a Lentz
/// continued fraction elsewhere.
fn e1(x: f64) -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    if x <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..60 {
            term *= -x / k as f64;
            let add = term / k as f64;
            sum += add;
            if add.abs() < 1e-18 {
                break;
            }
        }
        return -EULER_GAMMA - x.ln() - sum;
    }
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-x).exp()
}

/// L(1, Δ) or L(2, Δ) from the rapidly convergent series obtained by splitting
/// the Mellin integral of the character theta function at t = 1. Cost is
/// O(√|Δ|) terms, which makes sweeps over many discriminants cheap.
pub fn l_value_fast(s: u32, d: i64) -> Result<f64> {
    if !qfield::is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    if s != 1 && s != 2 {
        return Err(Error::Domain(format!("fast L-values only for s = 1, 2, got {s}")));
    }
    let q = d.unsigned_abs() as f64;
    let odd = d < 0;
    let sqrt_pi = PI.sqrt();
    let n_max = (46.0 * q / PI).sqrt().ceil() as i64 + 1;
    let mut sum = 0.0;
    for n in 1..=n_max {
        let chi = qfield::kronecker_unchecked(d, n);
        if chi == 0 {
            continue;
        }
        let nf = n as f64;
        let a = PI * nf * nf / q;
        let ra = a.sqrt();
        let ea = (-a).exp();
        let ec = sqrt_pi * erfc(ra);
        let term = match (s, odd) {
            (1, false) => ec / ra + e1(a),
            (1, true) => nf * (ea / a + ec / ra),
            (2, false) => ea / a + 2.0 * ra * (ea / ra - ec),
            _ => nf * ((0.5 * ec + ra * ea) / (a * ra) + e1(a)),
        };
        sum += chi as f64 * term;
    }
    Ok(match (s, odd) {
        (1, false) => sum / q.sqrt(),
        (1, true) | (2, false) => sum * PI / q,
        _ => sum / ((q / PI).powf(1.5) * 0.5 * sqrt_pi),
    })
}

/// ζ_K(s) = ζ(s) L(s, Δ) for a quadratic field, ζ(s) for Q.
pub fn dedekind_zeta(s: f64, field: &FieldDescriptor) -> Result<SeriesValue> {
    let z = riemann_zeta(s)?;
    if field.is_rational() {
        return Ok(z);
    }
    let l = dirichlet_l(s, field.disc)?;
    Ok(SeriesValue {
        value: z.value * l.value,
        tail_bound: z.tail_bound * l.value.abs() + l.tail_bound * z.value,
        terms_used: z.terms_used + l.terms_used,
    })
}

/// Number of elements of O_K (zero included) with norm exactly n, n ≤ x_max.
pub(crate) fn norm_representations(field: &FieldDescriptor, x_max: usize) -> Vec<u64> {
    let m = field.m();
    let mut r = vec![0u64; x_max + 1];
    // N(u + vω) as an integer quadratic form in (u, v).
    let (qa, qb, qc) = if m.rem_euclid(4) == 1 { (1i64, 1i64, (1 - m) / 4) } else { (1, 0, -m) };
    let x = x_max as i64;
    let vmax = ((4 * qa * x) as f64 / (4 * qa * qc - qb * qb) as f64).sqrt() as i64 + 1;
    for v in -vmax..=vmax {
        // u² + qb·u·v + qc·v² ≤ x
        let disc = (qb * v) * (qb * v) - 4 * (qc * v * v - x);
        if disc < 0 {
            continue;
        }
        let root = (disc as f64).sqrt();
        let lo = ((-qb * v) as f64 - root) / 2.0;
        let hi = ((-qb * v) as f64 + root) / 2.0;
        for u in (lo.floor() as i64 - 1)..=(hi.ceil() as i64 + 1) {
            let n = qa * u * u + qb * u * v + qc * v * v;
            if n >= 0 && n <= x {
                r[n as usize] += 1;
            }
        }
    }
    r
}

/// Dirichlet coefficients of 1/ζ_K: M(n) = Σ_{N𝔡 = n} μ(𝔡).
pub fn inverse_dedekind_coefficients(disc: i64, n_max: usize, sieve: &Sieve) -> Vec<i64> {
    let mut m = vec![0i64; n_max + 1];
    m[1] = 1;
    for n in 2..=n_max {
        let mut v = 1i64;
        for (p, e) in sieve.factor(n) {
            let chi = if disc == 1 { 1 } else { qfield::kronecker_unchecked(disc, p as i64) as i64 };
            v *= match e {
                1 => -1 - chi,
                2 => chi,
                _ => 0,
            };
            if v == 0 {
                break;
            }
        }
        m[n] = v;
    }
    m
}

/// Counts of P¹(K)-points of height exactly n for n ≤ n_max, K = Q or an
/// imaginary quadratic field of class number one.
pub fn p1_height_distribution(field: &FieldDescriptor, n_max: usize) -> Result<Vec<u64>> {
    if field.is_rational() {
        let sieve = Sieve::new(n_max.max(2));
        let mut out = vec![0u64; n_max + 1];
        for n in 1..=n_max {
            out[n] = if n == 1 { 4 } else { 4 * sieve.phi[n] as u64 };
        }
        return Ok(out);
    }
    check_counting_field(field)?;
    let reps = norm_representations(field, n_max);
    let mut a0 = vec![0i128; n_max + 1];
    let mut acc = 0i128;
    for n in 0..=n_max {
        acc += reps[n] as i128;
        a0[n] = acc;
    }
    let t: Vec<i128> = (0..=n_max)
        .map(|n| if n == 0 { 0 } else { a0[n] * a0[n] - a0[n - 1] * a0[n - 1] })
        .collect();
    let sieve = Sieve::new(n_max.max(2));
    let mu_k = inverse_dedekind_coefficients(field.disc, n_max, &sieve);
    let mut p = vec![0i128; n_max + 1];
    for d in 1..=n_max {
        if mu_k[d] == 0 {
            continue;
        }
        let md = mu_k[d] as i128;
        let mut k = d;
        let mut j = 1;
        while k <= n_max {
            p[k] += md * t[j];
            k += d;
            j += 1;
        }
    }
    let omega = field.omega as i128;
    Ok(p.iter().map(|&v| (v / omega) as u64).collect())
}

pub(crate) fn check_counting_field(field: &FieldDescriptor) -> Result<()> {
    if field.is_rational() || (field.is_imaginary() && field.class_number == 1) {
        Ok(())
    } else {
        Err(Error::UnsupportedField(format!(
            "discriminant {} (need Q or an imaginary quadratic field with h = 1)",
            field.disc
        )))
    }
}

/// Terms used when the height zeta function is summed to infinity.
pub const HEIGHT_ZETA_TERMS: usize = 100_000;

/// Z_K(P¹, s) = Σ H(x)^{-s}, summed over heights ≤ `cutoff` (None: the full
/// series, completed by the Schanuel-growth tail).
pub fn height_zeta_p1(field: &FieldDescriptor, s: f64, cutoff: Option<f64>) -> Result<SeriesValue> {
    if cutoff.is_none() && s <= 2.0 {
        return Err(Error::Domain(format!("height zeta of P1 diverges at s = {s}")));
    }
    let n_max = match cutoff {
        Some(c) if c < 1.0 => return Ok(SeriesValue { value: 0.0, tail_bound: f64::INFINITY, terms_used: 0 }),
        Some(c) => c.floor() as usize,
        None => HEIGHT_ZETA_TERMS,
    };
    let dist = p1_height_distribution(field, n_max)?;
    let mut value = 0.0;
    let mut count = 0u64;
    for n in (1..=n_max).rev() {
        value += dist[n] as f64 * (n as f64).powf(-s);
    }
    for d in &dist {
        count += d;
    }
    let c = schanuel_constant(field)?;
    let x = n_max as f64;
    // Abel summation with N(u) ≈ c u² beyond x.
    let tail = if s > 2.0 { -(count as f64) * x.powf(-s) + s * c * x.powf(2.0 - s) / (s - 2.0) } else { f64::INFINITY };
    match cutoff {
        None => {
            let err_scale = if field.degree() == 1 { x.ln() / x } else { x.powf(-0.5) * x.ln() };
            Ok(SeriesValue {
                value: value + tail,
                tail_bound: s * c * x.powf(2.0 - s) * err_scale,
                terms_used: n_max as u64,
            })
        }
        Some(_) => Ok(SeriesValue { value, tail_bound: tail.abs(), terms_used: n_max as u64 }),
    }
}

/// Schanuel's constant c with N_{P¹,K}(B) ~ c B².
pub fn schanuel_constant(field: &FieldDescriptor) -> Result<f64> {
    let zk2 = dedekind_zeta(2.0, field)?.value;
    let (r, s) = (field.r as i32, field.s as i32);
    Ok(2f64.powi(r + s - 1)
        * 2f64.powi(2 * r)
        * (2.0 * PI).powi(2 * s)
        * field.class_number as f64
        * field.regulator
        / (field.disc.abs() as f64 * field.omega as f64 * zk2))
}

/// Leading constant of N_{V,K}(B) ~ c B².
pub fn surface_constant(field: &FieldDescriptor) -> Result<f64> {
    let z = height_zeta_p1(field, 3.0, None)?.value;
    Ok(schanuel_constant(field)? * (z + 1.0))
}

/// Leading constant of the count on the open set U, i.e. without the lines.
pub fn open_set_constant(field: &FieldDescriptor) -> Result<f64> {
    let z = height_zeta_p1(field, 3.0, None)?.value;
    Ok(schanuel_constant(field)? * (z - 2.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedConstant {
    pub name: String,
    pub value: f64,
    pub tail_bound: f64,
    pub inputs: Vec<(String, f64)>,
}

fn named(name: &str, value: f64, tail_bound: f64, inputs: &[(&str, f64)]) -> NamedConstant {
    NamedConstant {
        name: name.to_string(),
        value,
        tail_bound,
        inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
    }
}

/// Every predicted leading constant, with the special values that feed it.
pub fn predicted_constants() -> Result<Vec<NamedConstant>> {
    let q = FieldDescriptor::rational();
    let qi = qfield::field_invariants(-4)?;
    let zeta2 = zeta_value(2.0);
    let zeta3 = zeta_value(3.0);
    let c_p1 = schanuel_constant(&q)?;
    let z3 = height_zeta_p1(&q, 3.0, None)?;
    let z6 = height_zeta_p1(&q, 6.0, None)?;
    let z9 = height_zeta_p1(&q, 9.0, None)?;
    let c_p1_i = schanuel_constant(&qi)?;
    let z3_i = height_zeta_p1(&qi, 3.0, None)?;
    let l2_i = dirichlet_l(2.0, -4)?.value;
    let zk32 = dedekind_zeta(1.5, &qi)?.value;
    let c_sym2_p1 = 4.0 / zeta3;
    Ok(vec![
        named("c_P1_Q", c_p1, 1e-15, &[("zeta(2)", zeta2)]),
        named("Z_P1_Q(3)", z3.value, z3.tail_bound, &[("zeta(2)", zeta2), ("zeta(3)", zeta3)]),
        named("c_U_Q", c_p1 * (z3.value - 2.0), c_p1 * z3.tail_bound, &[("c_P1_Q", c_p1), ("Z_P1_Q(3)", z3.value)]),
        named("c_V_Q", c_p1 * (z3.value + 1.0), c_p1 * z3.tail_bound, &[("c_P1_Q", c_p1), ("Z_P1_Q(3)", z3.value)]),
        named("c_P1_Q(i)", c_p1_i, 1e-12, &[("zeta(2)", zeta2), ("L(2,-4)", l2_i)]),
        named("Z_P1_Q(i)(3)", z3_i.value, z3_i.tail_bound, &[("c_P1_Q(i)", c_p1_i)]),
        named(
            "c_V_Q(i)",
            c_p1_i * (z3_i.value + 1.0),
            c_p1_i * z3_i.tail_bound,
            &[("c_P1_Q(i)", c_p1_i), ("Z_P1_Q(i)(3)", z3_i.value)],
        ),
        named("chat_V_Q(i)", c_p1_i / zk32, 1e-10, &[("c_P1_Q(i)", c_p1_i), ("zeta_Q(i)(3/2)", zk32)]),
        named("c_Sym2P1_Q", c_sym2_p1, 1e-15, &[("zeta(3)", zeta3)]),
        named(
            "c_Sym2V_Q",
            c_sym2_p1 * (z9.value + 1.0),
            c_sym2_p1 * z9.tail_bound,
            &[("c_Sym2P1_Q", c_sym2_p1), ("Z_P1_Q(9)", z9.value)],
        ),
        named(
            "c_Sym2(P1xP1)_Q",
            2.0 * c_sym2_p1 * z6.value,
            2.0 * c_sym2_p1 * z6.tail_bound,
            &[("c_Sym2P1_Q", c_sym2_p1), ("Z_P1_Q(6)", z6.value)],
        ),
    ])
}

pub fn constant(name: &str) -> Result<f64> {
    predicted_constants()?
        .into_iter()
        .find(|c| c.name == name)
        .map(|c| c.value)
        .ok_or_else(|| Error::Domain(format!("unknown constant {name}")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LSumRow {
    pub y: f64,
    pub discriminants: usize,
    pub s1: f64,
    pub s2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LSumReport {
    pub rows: Vec<LSumRow>,
    /// Least-squares slope of log S1 against log Y.
    pub s1_exponent: f64,
    /// Least-squares slope of S2 against log Y.
    pub s2_log_slope: f64,
    /// Least-squares slope of log S2 against log Y.
    pub s2_exponent: f64,
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    slope(&lx, &ly)
}

/// S1(Y) = Σ L(1,Δ)/(√|Δ| L(2,Δ)) and S2(Y) = Σ L(1,Δ)²/(|Δ| L(2,Δ)²) over
/// fundamental discriminants with |Δ| ≤ Y, for each Y in `ys`.
pub fn discriminant_l_sums(ys: &[f64]) -> Result<LSumReport> {
    let y_max = ys.iter().cloned().fold(0.0, f64::max);
    if y_max > 1e6 {
        return Err(Error::CeilingExceeded { b: y_max, ceiling: 1e6 });
    }
    let discs = qfield::fundamental_discriminants(y_max);
    let terms: Vec<(i64, f64, f64)> = discs
        .par_iter()
        .map(|&d| {
            let l1 = l_value_fast(1, d).expect("fundamental");
            let l2 = l_value_fast(2, d).expect("fundamental");
            let q = d.abs() as f64;
            (d, l1 / (q.sqrt() * l2), l1 * l1 / (q * l2 * l2))
        })
        .collect();
    let mut rows = Vec::new();
    for &y in ys {
        let mut row = LSumRow { y, discriminants: 0, s1: 0.0, s2: 0.0 };
        for &(d, t1, t2) in &terms {
            if (d.abs() as f64) <= y {
                row.discriminants += 1;
                row.s1 += t1;
                row.s2 += t2;
            }
        }
        rows.push(row);
    }
    let yv: Vec<f64> = rows.iter().map(|r| r.y).collect();
    let s1: Vec<f64> = rows.iter().map(|r| r.s1).collect();
    let s2: Vec<f64> = rows.iter().map(|r| r.s2).collect();
    let lx: Vec<f64> = yv.iter().map(|y| y.ln()).collect();
    Ok(LSumReport {
        s1_exponent: log_log_slope(&yv, &s1),
        s2_log_slope: slope(&lx, &s2),
        s2_exponent: log_log_slope(&yv, &s2),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_examples() {
        assert!((riemann_zeta(2.0).unwrap().value - PI * PI / 6.0).abs() < 1e-12);
        assert!((riemann_zeta(3.0).unwrap().value - 1.2020569031595942).abs() < 1e-12);
        assert!((riemann_zeta(9.0).unwrap().value - 1.0020083928260822).abs() < 1e-12);
        assert!(riemann_zeta(1.0).is_err());
    }

    #[test]
    fn l_series_examples() {
        assert!((dirichlet_l(1.0, -4).unwrap().value - PI / 4.0).abs() < 1e-12);
        let catalan = 0.915_965_594_177_219;
        assert!((dirichlet_l(2.0, -4).unwrap().value - catalan).abs() < 1e-12);
        assert!(dirichlet_l(2.0, 20).is_err());
    }

    #[test]
    fn fast_route_matches_period_sums() {
        for d in [-3, -4, -7, -8, -23, -163, 5, 8, 12, 13, 229, -1019, 1001] {
            for s in [1u32, 2] {
                let slow = dirichlet_l(s as f64, d).unwrap().value;
                let fast = l_value_fast(s, d).unwrap();
                assert!((slow - fast).abs() < 1e-11, "d={d} s={s}: {slow} vs {fast}");
            }
        }
    }

    #[test]
    fn height_zeta_small_cutoffs() {
        let q = FieldDescriptor::rational();
        assert_eq!(height_zeta_p1(&q, 3.0, Some(1.0)).unwrap().value, 4.0);
        let qi = qfield::field_invariants(-4).unwrap();
        assert_eq!(p1_height_distribution(&qi, 1).unwrap()[1], 6);
        assert!(height_zeta_p1(&q, 2.0, None).is_err());
    }

    #[test]
    fn schanuel_constants() {
        let q = FieldDescriptor::rational();
        assert!((schanuel_constant(&q).unwrap() - 12.0 / (PI * PI)).abs() < 1e-14);
        let qi = qfield::field_invariants(-4).unwrap();
        assert!((schanuel_constant(&qi).unwrap() - 1.6376).abs() < 1e-4);
    }
}
