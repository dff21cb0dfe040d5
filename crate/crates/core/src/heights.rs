//! Heights of points over Q and quadratic fields, Mahler measures of
//! quadratic points, the twisted fiber heights of the surface, and the height
//! on the symmetric square.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::qfield::{self, FieldDescriptor, FieldElement};
use crate::{Error, Result};

/// A point of projective space over Q or a quadratic field.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint {
    pub coords: Vec<FieldElement>,
    pub field: FieldDescriptor,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<FieldElement>, field: FieldDescriptor) -> Result<Self> {
        if coords.is_empty() || coords.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroInput("projective coordinates"));
        }
        let m = field.m();
        let coords = coords.into_iter().map(|c| FieldElement { m, ..c }).collect();
        Ok(ProjectivePoint { coords, field })
    }

    pub fn rational(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| FieldElement::rational(c)).collect(), FieldDescriptor::rational())
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Primitive integer coordinates with the first nonzero one positive
    /// (rational points only).
    pub fn primitive_integers(&self) -> Option<Vec<BigInt>> {
        if !self.field.is_rational() {
            return None;
        }
        let den = self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.a.denom()));
        let dq = BigRational::from_integer(den);
        let ints: Vec<BigInt> = self.coords.iter().map(|c| (&c.a * &dq).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
        let first_negative = ints.iter().find(|v| !v.is_zero()).map(|v| v.is_negative()).unwrap_or(false);
        Some(
            ints.into_iter()
                .map(|v| {
                    let q = v / &g;
                    if first_negative {
                        -q
                    } else {
                        q
                    }
                })
                .collect(),
        )
    }

    /// Canonical representative: primitive integers over Q; over a quadratic
    /// field, the coordinates divided by the first nonzero one.
    pub fn normalized(&self) -> Self {
        if let Some(ints) = self.primitive_integers() {
            let coords = ints.into_iter().map(|v| FieldElement::from_ratios(BigRational::from_integer(v), BigRational::zero(), 0)).collect();
            return ProjectivePoint { coords, field: self.field.clone() };
        }
        let lead = self.coords.iter().find(|c| !c.is_zero()).expect("nonzero point");
        let inv = lead.inverse().expect("nonzero");
        ProjectivePoint { coords: self.coords.iter().map(|c| c * &inv).collect(), field: self.field.clone() }
    }

    pub fn scaled(&self, lambda: &FieldElement) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::ZeroInput("scaling factor"));
        }
        let lambda = FieldElement { m: self.field.m(), ..lambda.clone() };
        Ok(ProjectivePoint { coords: self.coords.iter().map(|c| c * &lambda).collect(), field: self.field.clone() })
    }

    pub fn conj(&self) -> Self {
        ProjectivePoint { coords: self.coords.iter().map(|c| c.conj()).collect(), field: self.field.clone() }
    }

    /// Norm of the fractional ideal generated by the coordinates.
    pub fn coordinate_ideal_norm(&self) -> BigRational {
        qfield::ideal_gcd_norm(&self.coords, &self.field).expect("nonzero point")
    }
}

/// A height value; `exact` is present whenever the height is rational.
#[derive(Debug, Clone, PartialEq)]
pub struct Height {
    pub exact: Option<BigRational>,
    pub value: f64,
}

fn abs_f64(q: &BigRational) -> f64 {
    q.abs().to_f64().unwrap_or(f64::INFINITY)
}

/// H_K(p) = N(coordinate ideal)^{-1} · ∏_v max_i |x_i|_v.
pub fn height(p: &ProjectivePoint) -> Result<Height> {
    let norm = p.coordinate_ideal_norm();
    if p.field.is_rational() {
        let mx = p.coords.iter().map(|c| c.a.abs()).max().expect("nonempty");
        let h = mx / norm;
        return Ok(Height { value: abs_f64(&h), exact: Some(h) });
    }
    if p.field.is_imaginary() {
        let mx = p.coords.iter().map(|c| c.norm()).max().expect("nonempty");
        let h = mx / norm;
        return Ok(Height { value: abs_f64(&h), exact: Some(h) });
    }
    let (mut m1, mut m2) = (0f64, 0f64);
    for c in &p.coords {
        let e = c.embeddings();
        m1 = m1.max(e[0].0.abs());
        m2 = m2.max(e[1].0.abs());
    }
    Ok(Height { exact: None, value: m1 * m2 / norm.to_f64().unwrap() })
}

/// Exact test of `p + q√m ≤ r` for integers, m > 0.
pub fn sqrt_lin_le(p: &BigInt, q: &BigInt, m: i64, r: &BigInt) -> bool {
    // q√m ≤ r − p
    let rhs = r - p;
    let q2m = q * q * BigInt::from(m);
    if q.is_negative() || q.is_zero() {
        !rhs.is_negative() || q2m >= &rhs * &rhs
    } else {
        !rhs.is_negative() && q2m <= &rhs * &rhs
    }
}

/// Exact test of |σ(x)| ≤ bound for the real embedding σ(√m) = sign·√m.
pub fn abs_embedding_le(x: &FieldElement, positive_root: bool, bound: &BigRational) -> bool {
    let den = x.a.denom().lcm(x.b.denom()).lcm(bound.denom());
    let dq = BigRational::from_integer(den);
    let p = (&x.a * &dq).to_integer();
    let mut q = (&x.b * &dq).to_integer();
    if !positive_root {
        q = -q;
    }
    let r = (bound * &dq).to_integer();
    if x.m == 0 || q.is_zero() {
        return p.abs() <= r;
    }
    sqrt_lin_le(&p, &q, x.m, &r) && sqrt_lin_le(&(-&p), &(-&q), x.m, &r)
}

/// Exact test of H_K(p) ≤ bound.
pub fn height_at_most(p: &ProjectivePoint, bound: &BigRational) -> Result<bool> {
    if p.field.is_rational() || p.field.is_imaginary() {
        return Ok(height(p)?.exact.expect("exact height") <= *bound);
    }
    // max_i |σ1 x_i| · max_j |σ2 x_j| ≤ bound·N ⟺ every |σ1(x_i · conj(x_j))| ≤ bound·N
    let scaled = bound * p.coordinate_ideal_norm();
    for xi in &p.coords {
        for xj in &p.coords {
            if !abs_embedding_le(&(xi * &xj.conj()), true, &scaled) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Which coordinate the root of the minimal polynomial occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Frame {
    /// The point (θ : 1).
    Affine,
    /// The point (1 : θ).
    Reciprocal,
}

/// A degree-two point of P¹, keyed by the primitive minimal polynomial
/// aT² + bT + c of θ (a > 0), so that both conjugates share one value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticPoint {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub frame: Frame,
}

impl QuadraticPoint {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::with_frame(a, b, c, Frame::Affine)
    }

    pub fn with_frame(a: i64, b: i64, c: i64, frame: Frame) -> Result<Self> {
        if a == 0 {
            return Err(Error::Reducible);
        }
        let g = arith::gcd(arith::gcd(a, b), c);
        let s = if a < 0 { -g } else { g };
        let (a, b, c) = (a / s, b / s, c / s);
        if arith::is_square((b as i128) * (b as i128) - 4 * (a as i128) * (c as i128)) {
            return Err(Error::Reducible);
        }
        Ok(QuadraticPoint { a, b, c, frame })
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// (f, m) with b² − 4ac = f² m and m squarefree.
    pub fn disc_decomposition(&self) -> (i64, i64) {
        let d = self.discriminant();
        let mut f = 1i64;
        let mut m = d.signum();
        for (p, e) in arith::factorize(d) {
            f *= p.pow(e / 2);
            if e % 2 == 1 {
                m *= p;
            }
        }
        (f, m)
    }

    /// Discriminant of the field Q(θ).
    pub fn field_discriminant(&self) -> i64 {
        let (_, m) = self.disc_decomposition();
        qfield::discriminant(m).expect("squarefree part")
    }

    pub fn field(&self) -> Result<FieldDescriptor> {
        qfield::field_invariants(self.field_discriminant())
    }

    /// The root (−b + f√m)/(2a) as an element of Q(√m).
    pub fn root(&self) -> FieldElement {
        let (f, m) = self.disc_decomposition();
        let two_a = BigInt::from(2 * self.a);
        FieldElement::from_ratios(
            BigRational::new(BigInt::from(-self.b), two_a.clone()),
            BigRational::new(BigInt::from(f), two_a),
            m,
        )
    }

    /// Both roots as complex numbers (re, im).
    pub fn roots_f64(&self) -> [(f64, f64); 2] {
        let (a, b, d) = (self.a as f64, self.b as f64, self.discriminant() as f64);
        if d >= 0.0 {
            let s = d.sqrt();
            // avoid cancellation in the smaller root
            let sg = if b >= 0.0 { 1.0 } else { -1.0 };
            let q = -0.5 * (b + sg * s);
            let r1 = q / a;
            let r2 = if q != 0.0 { self.c as f64 / q } else { -r1 };
            [(r1, 0.0), (r2, 0.0)]
        } else {
            let im = (-d).sqrt() / (2.0 * a);
            [(-b / (2.0 * a), im), (-b / (2.0 * a), -im)]
        }
    }

    pub fn projective(&self) -> Result<ProjectivePoint> {
        let field = self.field()?;
        let theta = self.root();
        let m = field.m();
        let one = FieldElement::one(m);
        let coords = match self.frame {
            Frame::Affine => vec![theta, one],
            Frame::Reciprocal => vec![one, theta],
        };
        ProjectivePoint::new(coords, field)
    }
}

/// Mahler measure |a|·∏ max(1, |θ_i|) of aT² + bT + c.
pub fn mahler_measure(a: i64, b: i64, c: i64) -> f64 {
    let (a, b, c) = (a.abs() as f64, if a < 0 { -b } else { b } as f64, if a < 0 { -c } else { c } as f64);
    let d = b * b - 4.0 * a * c;
    if d < 0.0 {
        return a.max(c);
    }
    // M = max(a, |c|, max_i |aθ_i|) with max_i |aθ_i| = (|b| + √d)/2.
    a.max(c.abs()).max((b.abs() + d.sqrt()) / 2.0)
}

/// Exact test of M(aT² + bT + c) ≤ x_num / x_den for a > 0, x_num, x_den > 0.
pub fn mahler_at_most(a: i128, b: i128, c: i128, x_num: i128, x_den: i128) -> bool {
    debug_assert!(a > 0 && x_den > 0);
    // max(a, |c|) ≤ X and X|b| ≤ X² + ac, scaled by x_den².
    a * x_den <= x_num
        && c.abs() * x_den <= x_num
        && x_num * x_den * b.abs() <= x_num * x_num + a * c * x_den * x_den
}

/// Relative height over Q(θ) of a quadratic point, via the Mahler measure.
pub fn quadratic_point_height(q: &QuadraticPoint) -> f64 {
    mahler_measure(q.a, q.b, q.c)
}

/// The same height computed from the embeddings and the coordinate ideal.
pub fn quadratic_point_height_by_ideal(q: &QuadraticPoint) -> Result<f64> {
    Ok(height(&q.projective()?)?.value)
}

/// The fiber coordinate α = y3/y2 of a point above (y0 : y1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberCoordinate {
    Rational { y2: i64, y3: i64 },
    Quadratic(QuadraticPoint),
}

fn check_base_pair(y0: i64, y1: i64) -> Result<()> {
    if y0 == 0 && y1 == 0 {
        return Err(Error::ZeroInput("base pair"));
    }
    if arith::gcd(y0, y1) != 1 {
        return Err(Error::NotCoprime);
    }
    Ok(())
}

/// H(y0y3, y1y3, y1²y2, y0²y2) computed from the four coordinates.
pub fn twisted_fiber_height(y0: i64, y1: i64, alpha: &FiberCoordinate) -> Result<f64> {
    check_base_pair(y0, y1)?;
    match *alpha {
        FiberCoordinate::Rational { y2, y3 } => {
            if y2 == 0 || y3 == 0 {
                return Err(Error::ZeroInput("fiber coordinate"));
            }
            let p = ProjectivePoint::rational(&[y0 * y3, y1 * y3, y1 * y1 * y2, y0 * y0 * y2])?;
            Ok(height(&p)?.value)
        }
        FiberCoordinate::Quadratic(q) => {
            let field = q.field()?;
            let m = field.m();
            let alpha = q.root();
            let s = |v: i64| FieldElement::new(v, 0, m);
            let coords = vec![&s(y0) * &alpha, &s(y1) * &alpha, s(y1 * y1), s(y0 * y0)];
            Ok(height(&ProjectivePoint::new(coords, field)?)?.value)
        }
    }
}

/// N(𝔍(α,1))^e · ∏_i max(κ|α^{(i)}|, κ²), the factored form of the fiber
/// height. The exponent e = −1 reproduces [`twisted_fiber_height`].
pub fn twisted_fiber_height_factored(y0: i64, y1: i64, alpha: &FiberCoordinate, exponent: i32) -> Result<f64> {
    check_base_pair(y0, y1)?;
    let kappa = y0.abs().max(y1.abs()) as f64;
    match *alpha {
        FiberCoordinate::Rational { y2, y3 } => {
            if y2 == 0 || y3 == 0 {
                return Err(Error::ZeroInput("fiber coordinate"));
            }
            let g = arith::gcd(y2, y3);
            let (y2, y3) = (y2 / g, y3 / g);
            let ideal_norm = 1.0 / y2.abs() as f64;
            let a = y3 as f64 / y2 as f64;
            Ok(ideal_norm.powi(exponent) * (kappa * a.abs()).max(kappa * kappa))
        }
        FiberCoordinate::Quadratic(q) => {
            let ideal_norm = 1.0 / q.a as f64;
            let prod: f64 = q
                .roots_f64()
                .iter()
                .map(|&(re, im)| (kappa * re.hypot(im)).max(kappa * kappa))
                .product();
            Ok(ideal_norm.powi(exponent) * prod)
        }
    }
}

/// (H_K(x1) H_K(x2))^{1/d} for two points over a common field of degree d.
pub fn sym2_height(x1: &ProjectivePoint, x2: &ProjectivePoint) -> Result<f64> {
    if x1.field.disc != x2.field.disc || x1.coords.len() != x2.coords.len() {
        return Err(Error::FieldMismatch);
    }
    let d = x1.field.degree() as f64;
    Ok((height(x1)?.value * height(x2)?.value).powf(1.0 / d))
}

/// Height of an integer point of P^n(Q).
pub fn height_q(coords: &[i64]) -> u64 {
    let g = coords.iter().fold(0i64, |g, &c| arith::gcd(g, c));
    if g == 0 {
        return 0;
    }
    coords.iter().map(|c| (c / g).unsigned_abs()).max().unwrap_or(0)
}
