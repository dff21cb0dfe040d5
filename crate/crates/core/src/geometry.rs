//! The surface W: t0² t2 = t1² t3, its loci, the resolution ρ from the
//! incidence variety in P² × P¹, the fibration φ and the torsor
//! parametrization t = (y0y3, y1y3, y1²y2, y0²y2).

use std::fmt;

use crate::arith;
use crate::heights::ProjectivePoint;
use crate::{Error, Result};

/// Loci of W, listed in classification precedence: a point on two lines is
/// assigned to the first one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Locus {
    SingularLine,
    BaseLine,
    LineT0T3,
    LineT1T2,
    UOpen,
}

impl Locus {
    pub const ALL: [Locus; 5] = [Locus::SingularLine, Locus::BaseLine, Locus::LineT0T3, Locus::LineT1T2, Locus::UOpen];

    pub fn name(&self) -> &'static str {
        match self {
            Locus::SingularLine => "singular_line",
            Locus::BaseLine => "base_line",
            Locus::LineT0T3 => "line_t0_t3",
            Locus::LineT1T2 => "line_t1_t2",
            Locus::UOpen => "U_open",
        }
    }
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Classification from the vanishing pattern of (t0, t1, t2, t3).
pub fn classify_pattern(zero: [bool; 4]) -> Locus {
    match zero {
        [true, true, _, _] => Locus::SingularLine,
        [_, _, true, true] => Locus::BaseLine,
        [true, _, _, true] => Locus::LineT0T3,
        [_, true, true, _] => Locus::LineT1T2,
        _ => Locus::UOpen,
    }
}

pub fn locus_of_ints(t: &[i64; 4]) -> Locus {
    classify_pattern([t[0] == 0, t[1] == 0, t[2] == 0, t[3] == 0])
}

/// A point of W together with its locus.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePoint {
    pub point: ProjectivePoint,
    pub locus: Locus,
}

impl SurfacePoint {
    pub fn new(point: ProjectivePoint) -> Result<Self> {
        if point.coords.len() != 4 || !on_surface(&point) {
            return Err(Error::NotOnSurface);
        }
        let c = &point.coords;
        let locus = classify_pattern([c[0].is_zero(), c[1].is_zero(), c[2].is_zero(), c[3].is_zero()]);
        Ok(SurfacePoint { point, locus })
    }

    pub fn from_ints(t: [i64; 4]) -> Result<Self> {
        Self::new(ProjectivePoint::rational(&t)?)
    }
}

/// Exact test of t0² t2 = t1² t3.
pub fn on_surface(p: &ProjectivePoint) -> bool {
    if p.coords.len() != 4 {
        return false;
    }
    let t = &p.coords;
    let lhs = &(&t[0] * &t[0]) * &t[2];
    let rhs = &(&t[1] * &t[1]) * &t[3];
    lhs == rhs
}

pub fn on_surface_ints(t: &[i64; 4]) -> bool {
    let t: Vec<i128> = t.iter().map(|&v| v as i128).collect();
    t[0] * t[0] * t[2] == t[1] * t[1] * t[3]
}

/// ρ(x | y) = (x2y0 : x2y1 : x1y1 : x0y0).
pub fn rho(x: &ProjectivePoint, y: &ProjectivePoint) -> Result<ProjectivePoint> {
    if x.coords.len() != 3 || y.coords.len() != 2 {
        return Err(Error::Domain("rho expects a point of P2 and a point of P1".into()));
    }
    let (x0, x1, x2) = (&x.coords[0], &x.coords[1], &x.coords[2]);
    let (y0, y1) = (&y.coords[0], &y.coords[1]);
    if x0 * y1 != x1 * y0 {
        return Err(Error::Incidence);
    }
    ProjectivePoint::new(vec![x2 * y0, x2 * y1, x1 * y1, x0 * y0], x.field.clone())
}

/// Preimage of a point of V under ρ, normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub x: ProjectivePoint,
    pub y: ProjectivePoint,
}

/// ρ⁻¹(t) = ((t3t1 : t2t0 : t1t0) | (t0 : t1)), with the charts t1 = 0 and
/// t0 = 0 handled separately.
pub fn rho_inverse(t: &SurfacePoint) -> Result<Resolved> {
    if t.locus == Locus::SingularLine {
        return Err(Error::SingularLine);
    }
    let c = &t.point.coords;
    let field = t.point.field.clone();
    let x = if c[1].is_zero() {
        vec![c[3].clone(), c[1].clone(), c[0].clone()]
    } else if c[0].is_zero() {
        vec![c[0].clone(), c[2].clone(), c[1].clone()]
    } else {
        vec![&c[3] * &c[1], &c[2] * &c[0], &c[1] * &c[0]]
    };
    let x = ProjectivePoint::new(x, field.clone())?.normalized();
    let y = ProjectivePoint::new(vec![c[0].clone(), c[1].clone()], field)?.normalized();
    Ok(Resolved { x, y })
}

/// φ(t) = (t0 : t1).
pub fn fibration(t: &SurfacePoint) -> Result<ProjectivePoint> {
    if t.locus == Locus::SingularLine {
        return Err(Error::SingularLine);
    }
    let c = &t.point.coords;
    Ok(ProjectivePoint::new(vec![c[0].clone(), c[1].clone()], t.point.field.clone())?.normalized())
}

/// A torsor point over Z with (y0, y1) and (y2, y3) coprime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsorTuple {
    pub y: [i64; 4],
}

impl TorsorTuple {
    pub fn new(y0: i64, y1: i64, y2: i64, y3: i64) -> Result<Self> {
        if y0 == 0 || y1 == 0 || y2 == 0 || y3 == 0 {
            return Err(Error::ZeroInput("torsor coordinate"));
        }
        if arith::gcd(y0, y1) != 1 || arith::gcd(y2, y3) != 1 {
            return Err(Error::NotCoprime);
        }
        Ok(TorsorTuple { y: [y0, y1, y2, y3] })
    }

    /// κ = max(|y0|, |y1|).
    pub fn kappa(&self) -> i64 {
        self.y[0].abs().max(self.y[1].abs())
    }

    /// max(κ|y3|, κ²|y2|), the height of the parametrized point.
    pub fn height(&self) -> i64 {
        let k = self.kappa();
        (k * self.y[3].abs()).max(k * k * self.y[2].abs())
    }

    pub fn coords(&self) -> [i64; 4] {
        let [y0, y1, y2, y3] = self.y;
        [y0 * y3, y1 * y3, y1 * y1 * y2, y0 * y0 * y2]
    }
}

/// The point of U attached to a torsor tuple. Its integer coordinates are
/// already primitive.
pub fn parametrize(y: &TorsorTuple) -> Result<SurfacePoint> {
    SurfacePoint::from_ints(y.coords())
}

/// Primitive integer coordinates with the first nonzero one positive.
pub fn normalize_ints(t: &[i64; 4]) -> [i64; 4] {
    let g = t.iter().fold(0i64, |g, &v| arith::gcd(g, v));
    let sign = if t.iter().find(|&&v| v != 0).copied().unwrap_or(1) < 0 { -1 } else { 1 };
    t.map(|v| sign * v / g)
}

/// All torsor tuples mapping to the rational point t of U.
pub fn fibers_over(t: &[i64; 4]) -> Result<Vec<TorsorTuple>> {
    if !on_surface_ints(t) {
        return Err(Error::NotOnSurface);
    }
    if t.contains(&0) {
        return Err(Error::NotInOpen);
    }
    let t = normalize_ints(t);
    let g = arith::gcd(t[0], t[1]);
    let mut out = Vec::new();
    for s in [1i64, -1] {
        let (y0, y1) = (s * t[0] / g, s * t[1] / g);
        for lambda in [1i64, -1] {
            // t = λ·(y0y3, y1y3, y1²y2, y0²y2)
            if (lambda * t[0]) % y0 != 0 || (lambda * t[3]) % (y0 * y0) != 0 {
                continue;
            }
            let (y3, y2) = (lambda * t[0] / y0, lambda * t[3] / (y0 * y0));
            if let Ok(tuple) = TorsorTuple::new(y0, y1, y2, y3) {
                if tuple.coords().map(|v| lambda * v) == t {
                    out.push(tuple);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Convenience: (x0,x1,x2) and (y0,y1) as rational points.
pub fn rho_ints(x: [i64; 3], y: [i64; 2]) -> Result<[i64; 4]> {
    let xp = ProjectivePoint::rational(&x)?;
    let yp = ProjectivePoint::rational(&y)?;
    let t = rho(&xp, &yp)?.normalized();
    let v: Vec<i64> = t.coords.iter().map(|c| i64::try_from(c.a.to_integer()).expect("small")).collect();
    Ok([v[0], v[1], v[2], v[3]])
}

pub fn element_ints(p: &ProjectivePoint) -> Option<Vec<i64>> {
    p.primitive_integers()?.into_iter().map(|v| i64::try_from(v).ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(t: [i64; 4]) -> SurfacePoint {
        SurfacePoint::from_ints(t).unwrap()
    }

    #[test]
    fn surface_membership() {
        assert!(on_surface_ints(&[1, 1, 1, 1]));
        assert!(on_surface_ints(&[5, 10, 12, 3]));
        assert!(!on_surface_ints(&[1, 1, 1, 2]));
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho_ints([1, 1, 1], [1, 1]).unwrap(), [1, 1, 1, 1]);
        assert_eq!(rho_ints([2, 3, 7], [2, 3]).unwrap(), [14, 21, 9, 4]);
        assert_eq!(rho_ints([0, 0, 1], [1, 0]).unwrap(), [1, 0, 0, 0]);
        assert_eq!(rho_ints([1, 2, 1], [1, 1]), Err(Error::Incidence));
    }

    #[test]
    fn inverse_examples() {
        let r = rho_inverse(&sp([14, 21, 9, 4])).unwrap();
        assert_eq!(element_ints(&r.x).unwrap(), vec![2, 3, 7]);
        assert_eq!(element_ints(&r.y).unwrap(), vec![2, 3]);
        let r = rho_inverse(&sp([1, 0, 0, 0])).unwrap();
        assert_eq!(element_ints(&r.x).unwrap(), vec![0, 0, 1]);
        assert_eq!(element_ints(&r.y).unwrap(), vec![1, 0]);
        assert_eq!(rho_inverse(&sp([0, 0, 1, 5])), Err(Error::SingularLine));
    }

    #[test]
    fn fibration_examples() {
        assert_eq!(element_ints(&fibration(&sp([5, 10, 12, 3])).unwrap()).unwrap(), vec![1, 2]);
        assert_eq!(element_ints(&fibration(&sp([1, 2, 0, 0])).unwrap()).unwrap(), vec![1, 2]);
    }

    #[test]
    fn parametrize_examples() {
        let t = TorsorTuple::new(1, 2, 3, 5).unwrap();
        assert_eq!((t.coords(), t.height()), ([5, 10, 12, 3], 12));
        let t = TorsorTuple::new(1, -1, 2, 3).unwrap();
        assert_eq!((t.coords(), t.height()), ([3, -3, 2, 2], 3));
        assert_eq!(TorsorTuple::new(2, 4, 1, 1), Err(Error::NotCoprime));
    }

    #[test]
    fn fiber_of_the_unit_point() {
        let f = fibers_over(&[1, 1, 1, 1]).unwrap();
        let mut expected: Vec<TorsorTuple> = [[1, 1, 1, 1], [-1, -1, 1, -1], [-1, -1, -1, 1], [1, 1, -1, -1]]
            .iter()
            .map(|y| TorsorTuple::new(y[0], y[1], y[2], y[3]).unwrap())
            .collect();
        expected.sort();
        assert_eq!(f, expected);
    }

    #[test]
    fn locus_precedence() {
        assert_eq!(locus_of_ints(&[0, 0, 1, 0]), Locus::SingularLine);
        assert_eq!(locus_of_ints(&[0, 1, 0, 0]), Locus::BaseLine);
        assert_eq!(locus_of_ints(&[1, 0, 0, 0]), Locus::BaseLine);
        assert_eq!(locus_of_ints(&[0, 1, 2, 0]), Locus::LineT0T3);
        assert_eq!(locus_of_ints(&[1, 0, 0, 2]), Locus::LineT1T2);
        assert_eq!(locus_of_ints(&[1, 1, 1, 1]), Locus::UOpen);
    }
}
