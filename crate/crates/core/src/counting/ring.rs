//! Integers of a quadratic field in the basis (1, ω), with i128 arithmetic.

use crate::arith::gcd128;
use crate::qfield::{self, FieldDescriptor};
use crate::{Error, Result};

/// The ring O_K, ω² = tr·ω + nr.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ring {
    pub disc: i64,
    pub tr: i128,
    pub nr: i128,
}

/// u + vω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QInt {
    pub u: i128,
    pub v: i128,
}

impl QInt {
    pub const ZERO: QInt = QInt { u: 0, v: 0 };
    pub const ONE: QInt = QInt { u: 1, v: 0 };

    pub fn new(u: i128, v: i128) -> Self {
        QInt { u, v }
    }

    pub fn is_zero(&self) -> bool {
        self.u == 0 && self.v == 0
    }
}

impl Ring {
    pub fn of(field: &FieldDescriptor) -> Result<Ring> {
        if field.is_rational() {
            return Err(Error::UnsupportedField("ring arithmetic needs a quadratic field".into()));
        }
        Self::from_disc(field.disc)
    }

    pub fn from_disc(disc: i64) -> Result<Ring> {
        let m = qfield::field_parameter(disc)? as i128;
        Ok(if disc.rem_euclid(4) == 1 { Ring { disc, tr: 1, nr: (m - 1) / 4 } } else { Ring { disc, tr: 0, nr: m } })
    }

    /// The squarefree m with K = Q(√m).
    pub fn m(&self) -> i128 {
        if self.tr == 1 {
            4 * self.nr + 1
        } else {
            self.nr
        }
    }

    pub fn is_real(&self) -> bool {
        self.disc > 0
    }

    /// The two real embeddings, √m ↦ ±√m (real fields).
    pub fn sigma(&self, x: QInt) -> (f64, f64) {
        let r = (self.m() as f64).sqrt();
        let (w1, w2) = if self.tr == 1 { ((1.0 + r) / 2.0, (1.0 - r) / 2.0) } else { (r, -r) };
        (x.u as f64 + x.v as f64 * w1, x.u as f64 + x.v as f64 * w2)
    }

    /// Exact test of |σ1(x)| ≤ bound for a real field.
    pub fn abs_sigma1_le(&self, x: QInt, bound: i128) -> bool {
        // 2σ1(x) = p + q√m
        let (p, q) = if self.tr == 1 { (2 * x.u + x.v, x.v) } else { (2 * x.u, 2 * x.v) };
        let r = 2 * bound;
        let m = self.m();
        lin_sqrt_le(p, q, m, r) && lin_sqrt_le(-p, -q, m, r)
    }

    pub fn norm(&self, x: QInt) -> i128 {
        x.u * x.u + self.tr * x.u * x.v - self.nr * x.v * x.v
    }

    pub fn mul(&self, x: QInt, y: QInt) -> QInt {
        QInt { u: x.u * y.u + self.nr * x.v * y.v, v: x.u * y.v + x.v * y.u + self.tr * x.v * y.v }
    }

    pub fn add(&self, x: QInt, y: QInt) -> QInt {
        QInt { u: x.u + y.u, v: x.v + y.v }
    }

    pub fn neg(&self, x: QInt) -> QInt {
        QInt { u: -x.u, v: -x.v }
    }

    pub fn conj(&self, x: QInt) -> QInt {
        QInt { u: x.u + self.tr * x.v, v: -x.v }
    }

    /// x / y when y divides x in O_K.
    pub fn div_exact(&self, x: QInt, y: QInt) -> Option<QInt> {
        let n = self.norm(y);
        if n == 0 {
            return None;
        }
        let p = self.mul(x, self.conj(y));
        if p.u % n == 0 && p.v % n == 0 {
            Some(QInt { u: p.u / n, v: p.v / n })
        } else {
            None
        }
    }

    pub fn divides(&self, y: QInt, x: QInt) -> bool {
        if y.is_zero() {
            return x.is_zero();
        }
        self.div_exact(x, y).is_some()
    }

    /// Norm of the ideal generated by `xs` (0 if all vanish): the index of the
    /// lattice spanned by every x and xω.
    pub fn ideal_norm(&self, xs: &[QInt]) -> i128 {
        let omega = QInt::new(0, 1);
        let mut vecs: Vec<QInt> = Vec::with_capacity(2 * xs.len());
        for &x in xs {
            if !x.is_zero() {
                vecs.push(x);
                vecs.push(self.mul(x, omega));
            }
        }
        let mut g = 0i128;
        for i in 0..vecs.len() {
            for j in i + 1..vecs.len() {
                g = gcd128(g, vecs[i].u * vecs[j].v - vecs[i].v * vecs[j].u);
                if g == 1 {
                    return 1;
                }
            }
        }
        g
    }

    /// Units of O_K (imaginary fields only).
    pub fn units(&self) -> Vec<QInt> {
        self.elements_up_to(1).into_iter().filter(|&x| self.norm(x) == 1).collect()
    }

    /// All elements with norm at most `x`, zero included, for imaginary fields.
    pub fn elements_up_to(&self, x: i128) -> Vec<QInt> {
        let mut out = Vec::new();
        if x < 0 {
            return out;
        }
        // N = (u + tr v/2)² + |Δ| v²/4 ≥ |Δ| v² / 4.
        let d = self.disc.unsigned_abs() as i128;
        let vmax = crate::arith::isqrt((4 * x / d) as u128) as i128 + 1;
        for v in -vmax..=vmax {
            let umax = crate::arith::isqrt(x as u128) as i128 + vmax.abs() + 1;
            for u in -umax..=umax {
                let n = self.norm(QInt::new(u, v));
                if n <= x {
                    out.push(QInt::new(u, v));
                }
            }
        }
        out
    }

    /// A canonical associate of x: the least unit multiple in (u, v) order.
    pub fn unit_normalize(&self, x: QInt, units: &[QInt]) -> QInt {
        units.iter().map(|&e| self.mul(e, x)).max().unwrap_or(x)
    }
}

/// p + q√m ≤ r for m > 0.
fn lin_sqrt_le(p: i128, q: i128, m: i128, r: i128) -> bool {
    let rhs = r - p;
    if q <= 0 {
        rhs >= 0 || q * q * m >= rhs * rhs
    } else {
        rhs >= 0 && q * q * m <= rhs * rhs
    }
}
