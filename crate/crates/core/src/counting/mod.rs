//! Counting engines for points of bounded height on W: a brute-force oracle,
//! the torsor-parametrized sieved count, the lattice-point count, Möbius inversion
//! checks, and quadratic points.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::geometry::Locus;
use crate::qfield::FieldDescriptor;
use crate::zeta;
use crate::{Error, Result};

mod ideals;
mod imag;
pub mod lattice;
pub mod quadratic;
mod rational;
pub use quadratic::{count_quadratic_points_v, Cutoff, QuadraticCount};
pub use lattice::{lattice_count_m1, mobius_inversion_check, CoprimalityTarget, LatticeBox, LatticeReport};
pub mod ring;




/// Cutoff above which the cubic brute-force oracle refuses to run over Q.
pub const ORACLE_CEILING_Q: f64 = 300.0;
/// Same, over imaginary quadratic fields.
pub const ORACLE_CEILING_IMAG: f64 = 60.0;

/// Which part of V a count is restricted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocusFilter {
    V,
    U,
    Lines,
    Only(Locus),
}

impl LocusFilter {
    pub fn admits(&self, l: Locus) -> bool {
        match self {
            LocusFilter::V => l != Locus::SingularLine,
            LocusFilter::U => l == Locus::UOpen,
            LocusFilter::Lines => matches!(l, Locus::BaseLine | Locus::LineT0T3 | Locus::LineT1T2),
            LocusFilter::Only(x) => *x == l,
        }
    }
}

/// Outcome of a count at one cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct CountResult {
    pub cutoff_b: f64,
    pub total: u64,
    pub by_locus: BTreeMap<Locus, u64>,
    pub predicted_main: f64,
    pub relative_error: f64,
    pub wall_time: f64,
}

impl CountResult {
    fn build(cutoff_b: f64, by_locus: BTreeMap<Locus, u64>, filter: LocusFilter, constant: f64, started: Instant) -> Self {
        let by_locus: BTreeMap<Locus, u64> = by_locus.into_iter().filter(|(l, _)| filter.admits(*l)).collect();
        let total = by_locus.values().sum();
        let predicted_main = constant * cutoff_b * cutoff_b;
        let relative_error = if predicted_main > 0.0 { (total as f64 - predicted_main).abs() / predicted_main } else { f64::NAN };
        CountResult { cutoff_b, total, by_locus, predicted_main, relative_error, wall_time: started.elapsed().as_secs_f64() }
    }

    /// Equality of everything except the timing.
    pub fn same_counts(&self, other: &CountResult) -> bool {
        self.cutoff_b == other.cutoff_b && self.total == other.total && self.by_locus == other.by_locus
    }
}

fn heights_floor(b: f64) -> Result<u64> {
    if !(b.is_finite()) || b < 0.0 {
        return Err(Error::Domain(format!("cutoff must be a nonnegative number, got {b}")));
    }
    Ok(b.floor() as u64)
}

fn filter_constant(field: &FieldDescriptor, filter: LocusFilter) -> Result<f64> {
    let c = zeta::schanuel_constant(field)?;
    Ok(match filter {
        LocusFilter::V => zeta::surface_constant(field)?,
        LocusFilter::U => zeta::open_set_constant(field)?,
        LocusFilter::Lines => 3.0 * c,
        LocusFilter::Only(Locus::SingularLine) => 0.0,
        LocusFilter::Only(Locus::UOpen) => zeta::open_set_constant(field)?,
        LocusFilter::Only(_) => c,
    })
}

/// Direct enumeration of primitive coordinate tuples.
pub fn brute_force_count(field: &FieldDescriptor, b: f64, filter: LocusFilter) -> Result<CountResult> {
    let started = Instant::now();
    zeta::check_counting_field(field)?;
    let ceiling = if field.is_rational() { ORACLE_CEILING_Q } else { ORACLE_CEILING_IMAG };
    if b > ceiling {
        return Err(Error::CeilingExceeded { b, ceiling });
    }
    let n = heights_floor(b)?;
    let by_locus = if field.is_rational() { rational::brute_force(n) } else { imag::brute_force(field, n)? };
    Ok(CountResult::build(b, by_locus, filter, filter_constant(field, filter)?, started))
}

/// Number of points of P¹(K) of height at most B.
pub fn count_p1(field: &FieldDescriptor, b: f64) -> Result<u64> {
    let n = heights_floor(b)?;
    if field.is_rational() {
        return Ok(rational::p1_count(n));
    }
    imag::p1_count(field, n)
}

/// Torsor-parametrized count on U.
pub fn parametrized_count_u(field: &FieldDescriptor, b: f64) -> Result<CountResult> {
    let started = Instant::now();
    zeta::check_counting_field(field)?;
    let n = heights_floor(b)?;
    let u = if field.is_rational() { rational::parametrized_u(n) } else { imag::parametrized_u(field, n)? };
    let by_locus = BTreeMap::from([(Locus::UOpen, u)]);
    Ok(CountResult::build(b, by_locus, LocusFilter::U, zeta::open_set_constant(field)?, started))
}

/// Count on V: the parametrized count on U plus the three coordinate lines,
/// whose pairwise intersections are assigned to the base line.
pub fn count_v(field: &FieldDescriptor, b: f64) -> Result<CountResult> {
    let started = Instant::now();
    let u = parametrized_count_u(field, b)?;
    let mut by_locus = u.by_locus;
    by_locus.extend(line_counts(field, b)?);
    Ok(CountResult::build(b, by_locus, LocusFilter::V, zeta::surface_constant(field)?, started))
}

/// Exact counts on the three lines of V.
pub fn line_counts(field: &FieldDescriptor, b: f64) -> Result<BTreeMap<Locus, u64>> {
    let p1 = count_p1(field, b)?;
    let other = p1.saturating_sub(2);
    Ok(BTreeMap::from([(Locus::BaseLine, p1), (Locus::LineT0T3, other), (Locus::LineT1T2, other)]))
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build().expect("thread pool");
    pool.install(f)
}
