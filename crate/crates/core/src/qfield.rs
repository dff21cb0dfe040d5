//! Exact arithmetic in Q and Q(√m), Kronecker characters, ideal norms and
//! the invariants (Δ, h, R, ω, fundamental unit) of quadratic fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, Sieve};
use crate::zeta;
use crate::{Error, Result};

/// Largest |Δ| accepted by [`field_invariants`].
pub const MAX_FIELD_DISC: i64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Quadratic { m: i64 },
}

/// An element a + b√m with exact rational coordinates. Over Q, `m == 0` and
/// `b == 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub a: BigRational,
    pub b: BigRational,
    pub m: i64,
}

fn ratio(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl FieldElement {
    pub fn rational(a: i64) -> Self {
        FieldElement { a: ratio(a), b: BigRational::zero(), m: 0 }
    }

    pub fn new(a: i64, b: i64, m: i64) -> Self {
        FieldElement { a: ratio(a), b: ratio(b), m }
    }

    pub fn from_ratios(a: BigRational, b: BigRational, m: i64) -> Self {
        FieldElement { a, b, m }
    }

    pub fn zero(m: i64) -> Self {
        FieldElement { a: BigRational::zero(), b: BigRational::zero(), m }
    }

    pub fn one(m: i64) -> Self {
        FieldElement { a: BigRational::one(), b: BigRational::zero(), m }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// a² − m b².
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - ratio(self.m) * &self.b * &self.b
    }

    pub fn trace(&self) -> BigRational {
        &self.a + &self.a
    }

    pub fn conj(&self) -> Self {
        FieldElement { a: self.a.clone(), b: -self.b.clone(), m: self.m }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInput("inverse of zero"));
        }
        let n = self.norm();
        Ok(FieldElement { a: &self.a / &n, b: -(&self.b / &n), m: self.m })
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        FieldElement { a: &self.a * q, b: &self.b * q, m: self.m }
    }

    /// Coordinates in the integral basis (1, ω) of the ring of integers.
    pub fn basis_coords(&self) -> (BigRational, BigRational) {
        if self.m != 0 && self.m.rem_euclid(4) == 1 {
            (&self.a - &self.b, &self.b + &self.b)
        } else {
            (self.a.clone(), self.b.clone())
        }
    }

    pub fn is_integral(&self) -> bool {
        let (u, v) = self.basis_coords();
        u.is_integer() && v.is_integer()
    }

    /// Values under the archimedean embeddings: one real value for Q, two for
    /// a real quadratic field, and a single (re, im) pair for an imaginary one.
    pub fn embeddings(&self) -> Vec<(f64, f64)> {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        if self.m == 0 {
            vec![(a, 0.0)]
        } else if self.m > 0 {
            let r = (self.m as f64).sqrt();
            vec![(a + b * r, 0.0), (a - b * r, 0.0)]
        } else {
            vec![(a, b * (-self.m as f64).sqrt())]
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.m)
        }
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        debug_assert!(self.m == o.m || self.b.is_zero() || o.b.is_zero());
        let m = if self.m != 0 { self.m } else { o.m };
        FieldElement { a: &self.a + &o.a, b: &self.b + &o.b, m }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        self + &(-o)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { a: -self.a.clone(), b: -self.b.clone(), m: self.m }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        let m = if self.m != 0 { self.m } else { o.m };
        FieldElement {
            a: &self.a * &o.a + ratio(m) * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            m,
        }
    }
}

/// A base field together with its arithmetic invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldDescriptor {
    pub kind: FieldKind,
    pub disc: i64,
    pub r: u32,
    pub s: u32,
    pub omega: u32,
    pub class_number: u64,
    pub regulator: f64,
    pub fundamental_unit: Option<FieldElement>,
}

impl FieldDescriptor {
    pub fn rational() -> Self {
        FieldDescriptor {
            kind: FieldKind::Rational,
            disc: 1,
            r: 1,
            s: 0,
            omega: 2,
            class_number: 1,
            regulator: 1.0,
            fundamental_unit: None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.r + 2 * self.s
    }

    /// The m of Q(√m), or 0 for Q.
    pub fn m(&self) -> i64 {
        match self.kind {
            FieldKind::Rational => 0,
            FieldKind::Quadratic { m } => m,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.kind == FieldKind::Rational
    }

    pub fn is_imaginary(&self) -> bool {
        self.m() < 0
    }
}

/// Discriminant of Q(√m).
pub fn discriminant(m: i64) -> Result<i64> {
    if m == 0 || m == 1 {
        return Err(Error::InvalidFieldParameter(m));
    }
    if !arith::is_squarefree(m) {
        return Err(Error::NotSquarefree(m));
    }
    Ok(if m.rem_euclid(4) == 1 { m } else { 4 * m })
}

pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => arith::is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && arith::is_squarefree(m)
        }
        _ => false,
    }
}

/// The squarefree m with Q(√m) of discriminant `d`.
pub fn field_parameter(d: i64) -> Result<i64> {
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    Ok(if d.rem_euclid(4) == 1 { d } else { d / 4 })
}

/// Jacobi symbol (a/n) for odd positive n.
fn jacobi(a: i64, n: i64) -> i8 {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol (d/n) for n ≥ 1.
pub fn kronecker_symbol(d: i64, n: u64) -> Result<i8> {
    if d == 0 {
        return Err(Error::ZeroInput("kronecker modulus"));
    }
    if n == 0 {
        return Err(Error::Domain("kronecker argument must be positive".into()));
    }
    Ok(kronecker_unchecked(d, n as i64))
}

pub(crate) fn kronecker_unchecked(d: i64, n: i64) -> i8 {
    let mut n = n;
    let mut t = 1i8;
    let tz = n.trailing_zeros();
    if tz > 0 {
        if d % 2 == 0 {
            return 0;
        }
        if tz % 2 == 1 && matches!(d.rem_euclid(8), 3 | 5) {
            t = -t;
        }
        n >>= tz;
    }
    t * jacobi(d, n)
}

/// All fundamental discriminants with 1 < |Δ| ≤ Y, ordered by |Δ| with the
/// negative one first on ties.
pub fn fundamental_discriminants(y: f64) -> Vec<i64> {
    let top = y.floor() as i64;
    if top < 3 {
        return Vec::new();
    }
    let sieve = Sieve::new(top as usize);
    let sqfree = |n: i64| sieve.mu[n.unsigned_abs() as usize] != 0;
    let fundamental = |d: i64| match d.rem_euclid(4) {
        1 => sqfree(d),
        0 => matches!((d / 4).rem_euclid(4), 2 | 3) && sqfree(d / 4),
        _ => false,
    };
    let mut out = Vec::new();
    for n in 3..=top {
        for d in [-n, n] {
            if fundamental(d) {
                out.push(d);
            }
        }
    }
    out
}

fn common_denominator(qs: &[BigRational]) -> BigInt {
    qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Absolute norm of the ideal generated by `xs`, computed as the index in
/// O_K of the Z-lattice spanned by all x and xω.
pub fn ideal_gcd_norm(xs: &[FieldElement], field: &FieldDescriptor) -> Result<BigRational> {
    if xs.is_empty() || xs.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroInput("ideal generators"));
    }
    if field.is_rational() {
        let den = common_denominator(&xs.iter().map(|x| x.a.clone()).collect::<Vec<_>>());
        let g = xs
            .iter()
            .map(|x| (&x.a * BigRational::from_integer(den.clone())).to_integer())
            .fold(BigInt::zero(), |g, v| g.gcd(&v));
        return Ok(BigRational::new(g, den));
    }
    let m = field.m();
    let omega = if m.rem_euclid(4) == 1 {
        FieldElement::from_ratios(BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into()), m)
    } else {
        FieldElement::new(0, 1, m)
    };
    let mut vecs = Vec::with_capacity(2 * xs.len());
    for x in xs {
        let x = FieldElement { m, ..x.clone() };
        vecs.push(x.basis_coords());
        vecs.push((&x * &omega).basis_coords());
    }
    let flat: Vec<BigRational> = vecs.iter().flat_map(|(u, v)| [u.clone(), v.clone()]).collect();
    let den = common_denominator(&flat);
    let dq = BigRational::from_integer(den.clone());
    let ints: Vec<(BigInt, BigInt)> = vecs
        .iter()
        .map(|(u, v)| ((u * &dq).to_integer(), (v * &dq).to_integer()))
        .collect();
    let mut g = BigInt::zero();
    for i in 0..ints.len() {
        for j in i + 1..ints.len() {
            let minor = &ints[i].0 * &ints[j].1 - &ints[i].1 * &ints[j].0;
            g = g.gcd(&minor);
        }
    }
    Ok(BigRational::new(g, &den * &den))
}

/// Fundamental unit ε > 1 of the real quadratic order of discriminant `d`,
/// from the period of the continued fraction of (b + √d)/2.
pub fn fundamental_unit(d: i64) -> Result<FieldElement> {
    let m = field_parameter(d)?;
    if d < 0 {
        return Err(Error::Domain("imaginary fields have no fundamental unit".into()));
    }
    let root = arith::isqrt(d as u128) as i64;
    let mut b = root;
    if (b - d).rem_euclid(2) != 0 {
        b -= 1;
    }
    let (p0, q0) = (b, 2i64);
    let (mut p, mut q) = (p0, q0);
    let (mut qa, mut qb) = (BigInt::one(), BigInt::zero());
    loop {
        let a = (p + root) / q;
        let next = &qb * a + &qa;
        qa = qb;
        qb = next;
        p = a * q - p;
        q = (d - p * p) / q;
        if p == p0 && q == q0 {
            break;
        }
    }
    // ε = q_{n-1} x0 + q_{n-2} with x0 = (b + √d)/2.
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let sqrt_scale = if d == m { half.clone() } else { BigRational::one() };
    let a = BigRational::from_integer(&qb * b) * &half + BigRational::from_integer(qa);
    let bb = BigRational::from_integer(qb) * sqrt_scale;
    Ok(FieldElement::from_ratios(a, bb, m))
}

fn ln_rational(q: &BigRational) -> f64 {
    let ln_big = |n: &BigInt| {
        let bits = n.bits();
        if bits < 1000 {
            n.to_f64().unwrap().abs().ln()
        } else {
            let shift = bits - 64;
            let top: BigInt = n.abs() >> shift;
            top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
        }
    };
    ln_big(q.numer()) - ln_big(q.denom())
}

/// log of a real quadratic number greater than 1, robust to huge coordinates.
fn ln_real_unit(e: &FieldElement) -> f64 {
    // e = a + b√m with a, b > 0, so log e = log b + log(a/b + √m).
    let m = e.m as f64;
    let ab = (&e.a / &e.b).to_f64().unwrap();
    ln_rational(&e.b) + (ab + m.sqrt()).ln()
}

pub fn regulator_of(unit: &FieldElement) -> f64 {
    ln_real_unit(unit)
}

/// Invariants of the field of discriminant `d` (d = 1 gives Q).
pub fn field_invariants(d: i64) -> Result<FieldDescriptor> {
    if d == 1 {
        return Ok(FieldDescriptor::rational());
    }
    let m = field_parameter(d)?;
    if d.abs() > MAX_FIELD_DISC {
        return Err(Error::DiscriminantTooLarge { disc: d, bound: MAX_FIELD_DISC });
    }
    let l1 = zeta::l_value_fast(1, d)?;
    let sqrt_d = (d.abs() as f64).sqrt();
    let (r, s, omega, regulator, unit) = if d < 0 {
        let omega = match d {
            -3 => 6,
            -4 => 4,
            _ => 2,
        };
        (0, 1, omega, 1.0, None)
    } else {
        let e = fundamental_unit(d)?;
        (2, 0, 2, ln_real_unit(&e), Some(e))
    };
    let hr = omega as f64 * sqrt_d * l1
        / (2f64.powi(r as i32) * (2.0 * std::f64::consts::PI).powi(s as i32));
    let h = hr / regulator;
    let rounded = h.round();
    if rounded < 1.0 || (h - rounded).abs() >= 1e-6 {
        return Err(Error::ClassNumberRounding { disc: d, value: h });
    }
    Ok(FieldDescriptor {
        kind: FieldKind::Quadratic { m },
        disc: d,
        r,
        s,
        omega,
        class_number: rounded as u64,
        regulator,
        fundamental_unit: unit,
    })
}

fn pow_elem(x: &FieldElement, k: u32) -> FieldElement {
    let mut acc = FieldElement::one(x.m);
    for _ in 0..k {
        acc = &acc * x;
    }
    acc
}

/// Canonical representative of the orbit of `pair` under multiplication by
/// powers of the fundamental unit.
pub fn unit_reduce(
    pair: (FieldElement, FieldElement),
    field: &FieldDescriptor,
) -> Result<(FieldElement, FieldElement)> {
    if pair.0.is_zero() && pair.1.is_zero() {
        return Err(Error::ZeroInput("pair"));
    }
    let unit = match (&field.fundamental_unit, field.m() > 0) {
        (Some(u), true) => u,
        _ => return Ok(pair),
    };
    let (e0, e1) = (pair.0.embeddings(), pair.1.embeddings());
    let m1 = e0[0].0.abs().max(e1[0].0.abs());
    let m2 = e0[1].0.abs().max(e1[1].0.abs());
    let t = (m1 / m2).ln() / (2.0 * field.regulator);
    let mut f = t.floor();
    if t - f > 1.0 - 1e-9 {
        f += 1.0;
    }
    let k = -(f as i64);
    if k == 0 {
        return Ok(pair);
    }
    let base = if k > 0 { unit.clone() } else { unit.inverse()? };
    let scale = pow_elem(&base, k.unsigned_abs() as u32);
    Ok((&pair.0 * &scale, &pair.1 * &scale))
}
