use std::collections::BTreeMap;
use std::time::Instant;

use cubelab::counting::{self, with_workers, CoprimalityTarget, CountResult, LatticeBox, LocusFilter};
use cubelab::qfield::{self, FieldDescriptor};
use cubelab::sym2::{self, Sym2Count};
use cubelab::tamagawa::{self, Sym2Exponent};
use cubelab::zeta;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cache::Cache;
use crate::error::CliError;
use crate::report::{ConstantRow, Measurement, Report, Row, Value};
use crate::spec::{ExperimentSpec, Kind};

/// Accepted range of the fitted growth exponent of S1(Y).
pub const S1_EXPONENT_RANGE: (f64, f64) = (0.4, 0.6);

pub fn field_for(kind: Kind, disc: i64) -> Result<FieldDescriptor, CliError> {
    let unsupported = || CliError::Unsupported { kind: kind.name().into(), disc };
    if disc != 1 && !kind.allows_imaginary() {
        return Err(unsupported());
    }
    let field = qfield::field_invariants(disc).map_err(|_| unsupported())?;
    if !field.is_rational() && !(field.is_imaginary() && field.class_number == 1) {
        return Err(unsupported());
    }
    Ok(field)
}

fn breakdown(pairs: impl IntoIterator<Item = (String, Value)>) -> BTreeMap<String, Value> {
    pairs.into_iter().collect()
}

fn from_count(c: &CountResult) -> Measurement {
    Measurement {
        count: Value::Int(c.total),
        predicted: Some(c.predicted_main),
        rel_err: Some(c.relative_error),
        locus_breakdown: breakdown(c.by_locus.iter().map(|(l, n)| (l.name().to_string(), Value::Int(*n)))),
        exact_ok: true,
    }
}

fn from_sym2(c: &Sym2Count) -> Measurement {
    let mut parts = vec![
        ("total".to_string(), Value::Int(c.total)),
        ("type1".to_string(), Value::Int(c.type1)),
        ("type2".to_string(), Value::Int(c.type2)),
        ("diagonal".to_string(), Value::Int(c.diagonal)),
    ];
    if let Some(z) = &c.z {
        let b = c.cutoff_b;
        parts.extend([
            ("in_z".to_string(), Value::Int(z.in_z)),
            ("off_z".to_string(), Value::Int(z.off_z)),
            ("type1_in_z".to_string(), Value::Int(z.type1_in_z)),
            ("type2_in_z".to_string(), Value::Int(z.type2_in_z)),
        ]);
        if b > 1.0 {
            parts.push(("off_z_per_b2logb".to_string(), Value::Real(z.off_z as f64 / (b * b * b.ln()))));
        }
    }
    Measurement {
        count: Value::Int(c.compared()),
        predicted: Some(c.predicted_main),
        rel_err: Some(c.relative_error),
        locus_breakdown: breakdown(parts),
        exact_ok: true,
    }
}

/// A primitive pair with max(|y0|, |y1|) = h, drawn from `rng`.
pub fn random_fibre(h: i64, rng: &mut impl Rng) -> (i64, i64) {
    loop {
        let other = rng.gen_range(-h..=h);
        if cubelab::arith::gcd(h, other) != 1 {
            continue;
        }
        let sign = if rng.gen_bool(0.5) { -1 } else { 1 };
        return if rng.gen_bool(0.5) { (sign * h, other) } else { (other, sign * h) };
    }
}

fn tamagawa_row(b: f64, seed: u64) -> Result<Measurement, CliError> {
    let h = b.floor().max(1.0) as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (h as u64).rotate_left(32));
    let y = random_fibre(h, &mut rng);
    let hf = h as f64;
    let v = tamagawa::tau_inf_v_fiber(y)?;
    let scaled = v.value * hf.powi(3);
    let mut parts = vec![
        ("y0".to_string(), Value::Real(y.0 as f64)),
        ("y1".to_string(), Value::Real(y.1 as f64)),
        ("v_error".to_string(), Value::Real(v.error_estimate)),
    ];
    let mut worst = (scaled - 4.0).abs() / 4.0;
    for (target, power) in [(Sym2Exponent::Nine, 9), (Sym2Exponent::Six, 6)] {
        let base = tamagawa::tau_inf_sym2_fiber((1, 1), target)?.value;
        let ratio = tamagawa::tau_inf_sym2_fiber(y, target)?.value * hf.powi(power) / base;
        worst = worst.max((ratio - 1.0).abs());
        parts.push((format!("sym2_h{power}_ratio"), Value::Real(ratio)));
    }
    Ok(Measurement {
        count: Value::Real(scaled),
        predicted: Some(4.0),
        rel_err: Some(worst),
        locus_breakdown: breakdown(parts),
        exact_ok: true,
    })
}

/// One cutoff of one experiment.
pub fn measure(kind: Kind, field: &FieldDescriptor, b: f64, seed: u64) -> Result<Measurement, CliError> {
    Ok(match kind {
        Kind::CountV => from_count(&counting::count_v(field, b)?),
        Kind::CountU => from_count(&counting::parametrized_count_u(field, b)?),
        Kind::OracleDiff => {
            let brute = counting::brute_force_count(field, b, LocusFilter::V)?;
            let fast = counting::count_v(field, b)?;
            let mut m = from_count(&brute);
            m.predicted = Some(fast.total as f64);
            m.rel_err = Some((brute.total as f64 - fast.total as f64).abs() / (fast.total.max(1) as f64));
            for (l, n) in &fast.by_locus {
                m.locus_breakdown.insert(format!("parametrized_{}", l.name()), Value::Int(*n));
            }
            m.exact_ok = brute.same_counts(&fast);
            m
        }
        Kind::Lattice => {
            let bx = LatticeBox::new(vec![1.0], 1, 1, b)?;
            let report = counting::lattice_count_m1(&bx, field)?;
            let (direct, inverted) = counting::mobius_inversion_check(field, &bx, CoprimalityTarget::Full)?;
            Measurement {
                count: Value::Int(report.count),
                predicted: Some(report.main_term),
                rel_err: Some((report.count as f64 - report.main_term).abs() / report.main_term),
                locus_breakdown: breakdown([
                    ("deviation".to_string(), Value::Real(report.deviation)),
                    ("mobius_direct".to_string(), Value::Int(direct)),
                    ("mobius_inverted".to_string(), Value::Int(inverted)),
                ]),
                exact_ok: direct == inverted,
            }
        }
        Kind::Zeta => {
            let n = counting::count_p1(field, b)?;
            let predicted = zeta::schanuel_constant(field)? * b * b;
            let z3 = zeta::height_zeta_p1(field, 3.0, None)?;
            let dedekind = zeta::dedekind_zeta(2.0, field)?;
            Measurement {
                count: Value::Int(n),
                predicted: Some(predicted),
                rel_err: Some((n as f64 - predicted).abs() / predicted),
                locus_breakdown: breakdown([
                    ("height_zeta_p1_at_3".to_string(), Value::Real(z3.value)),
                    ("dedekind_zeta_at_2".to_string(), Value::Real(dedekind.value)),
                ]),
                exact_ok: true,
            }
        }
        Kind::Tamagawa => tamagawa_row(b, seed)?,
        Kind::Sym2V => from_sym2(&sym2::count_sym2_v(b)?),
        Kind::Sym2P1 => from_sym2(&sym2::count_sym2_p1(b)?),
        Kind::Sym2P1xp1 => from_sym2(&sym2::count_sym2_p1xp1(b)?),
        Kind::LSums => {
            let report = zeta::discriminant_l_sums(&[b])?;
            let row = &report.rows[0];
            Measurement {
                count: Value::Real(row.s1),
                predicted: None,
                rel_err: None,
                locus_breakdown: breakdown([
                    ("s2".to_string(), Value::Real(row.s2)),
                    ("discriminants".to_string(), Value::Int(row.discriminants as u64)),
                ]),
                exact_ok: true,
            }
        }
        Kind::Constants => unreachable!("constants have no cutoff"),
    })
}

/// Square-root growth from the first row, and the fitted exponents.
fn finish_l_sums(rows: &mut [Row]) {
    let ys: Vec<f64> = rows.iter().map(|r| r.b).collect();
    let s1: Vec<f64> = rows.iter().map(|r| r.count.as_f64()).collect();
    let s2: Vec<f64> = rows.iter().map(|r| r.locus_breakdown["s2"].as_f64()).collect();
    let exponent = if rows.len() > 1 { zeta::log_log_slope(&ys, &s1) } else { 0.5 };
    let s2_exponent = if rows.len() > 1 { zeta::log_log_slope(&ys, &s2) } else { 0.0 };
    let ok = (S1_EXPONENT_RANGE.0..=S1_EXPONENT_RANGE.1).contains(&exponent);
    let (y0, first) = (ys[0], s1[0]);
    for r in rows.iter_mut() {
        let predicted = first * (r.b / y0).sqrt();
        r.predicted = Some(predicted);
        r.rel_err = Some((r.count.as_f64() - predicted).abs() / predicted);
        r.locus_breakdown.insert("s1_exponent".into(), Value::Real(exponent));
        r.locus_breakdown.insert("s2_exponent".into(), Value::Real(s2_exponent));
        r.pass = ok;
    }
}

pub struct RunOptions<'a> {
    pub cache: Option<&'a Cache>,
    /// Wall-clock lines go here, never into the report.
    pub log: &'a mut dyn FnMut(String),
}

pub fn run(spec: &ExperimentSpec, opts: RunOptions<'_>) -> Result<Report, CliError> {
    spec.validate()?;
    let field = field_for(spec.kind, spec.field_disc)?;
    if spec.kind == Kind::Constants {
        let constants = with_workers(spec.workers, zeta::predicted_constants)?
            .into_iter()
            .map(|c| ConstantRow { name: c.name, value: c.value, tail_bound: c.tail_bound })
            .collect();
        return Ok(Report::new(spec, Vec::new(), constants));
    }
    let seed = (spec.kind == Kind::Tamagawa).then_some(spec.seed);
    let mut rows = Vec::new();
    for &b in &spec.b_schedule {
        let started = Instant::now();
        let path = opts.cache.map(|c| c.path(spec.kind, spec.field_disc, b, seed));
        let cached = match (opts.cache, &path) {
            (Some(c), Some(p)) => c.load(p)?,
            _ => None,
        };
        let hit = cached.is_some();
        let m = match cached {
            Some(m) => m,
            None => {
                let m = with_workers(spec.workers, || measure(spec.kind, &field, b, spec.seed))?;
                if let (Some(c), Some(p)) = (opts.cache, &path) {
                    c.store(p, &m)?;
                }
                m
            }
        };
        let pass = m.exact_ok && m.rel_err.is_none_or(|e| e <= spec.tolerance);
        (opts.log)(format!(
            "{} B={b} count={} {:.3}s{}",
            spec.kind,
            m.count,
            started.elapsed().as_secs_f64(),
            if hit { " (cached)" } else { "" }
        ));
        rows.push(Row { b, count: m.count, predicted: m.predicted, rel_err: m.rel_err, locus_breakdown: m.locus_breakdown, pass });
    }
    if spec.kind == Kind::LSums {
        finish_l_sums(&mut rows);
    }
    Ok(Report::new(spec, rows, Vec::new()))
}
