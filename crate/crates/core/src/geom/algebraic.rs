//! Exact signs of expressions with square roots.
//!
//! Two layers: [`Surd3`] is closed arithmetic in `Q(√3)`, enough for the
//! disk patterns; [`Expr`] handles sums of square roots of arbitrary
//! rationals, deciding zero symbolically and nonzero signs by interval
//! refinement.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::point::Point;
use super::scalar::{fmt_scalar, int, is_perfect_square, sqrt_exact, to_f64, Scalar};
use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: &Scalar) -> Sign {
        if x.is_positive() {
            Sign::Positive
        } else if x.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// Sign of `a + b·√d` for a rational `d ≥ 0`.
pub fn sign_surd(a: &Scalar, b: &Scalar, d: &Scalar) -> Sign {
    let (sa, sb) = (Sign::of(a), Sign::of(b));
    if sb == Sign::Zero || d.is_zero() {
        return sa;
    }
    if sa == Sign::Zero || sa == sb {
        return sb;
    }
    let lhs = a * a;
    let rhs = b * b * d;
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => sa,
        std::cmp::Ordering::Less => sb,
        std::cmp::Ordering::Equal => Sign::Zero,
    }
}

/// Element `a + b√3` of `Q(√3)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Surd3 {
    pub a: Scalar,
    pub b: Scalar,
}

impl Surd3 {
    pub fn new(a: Scalar, b: Scalar) -> Self {
        Surd3 { a, b }
    }

    pub fn rat(a: Scalar) -> Self {
        Surd3::new(a, Scalar::zero())
    }

    pub fn zero() -> Self {
        Surd3::rat(Scalar::zero())
    }

    pub fn sign(&self) -> Sign {
        sign_surd(&self.a, &self.b, &int(3))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scale(&self, k: &Scalar) -> Surd3 {
        Surd3::new(&self.a * k, &self.b * k)
    }

    pub fn square(&self) -> Surd3 {
        self * self
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Surd3> {
        let n = &self.a * &self.a - int(3) * &self.b * &self.b;
        if n.is_zero() {
            return None;
        }
        Some(Surd3::new(&self.a / &n, -&self.b / &n))
    }

    pub fn div(&self, o: &Surd3) -> Option<Surd3> {
        o.recip().map(|r| self * &r)
    }

    /// Nonnegative square root inside `Q(√3)` when one exists.
    pub fn sqrt(&self) -> Option<Surd3> {
        match self.sign() {
            Sign::Negative => return None,
            Sign::Zero => return Some(Surd3::zero()),
            Sign::Positive => {}
        }
        let norm = &self.a * &self.a - int(3) * &self.b * &self.b;
        let s = sqrt_exact(&norm)?;
        let two = int(2);
        for xx in [(&self.a + &s) / &two, (&self.a - &s) / &two] {
            let x = match sqrt_exact(&xx) {
                Some(x) => x,
                None => continue,
            };
            let cand = if x.is_zero() {
                // b = 0 and a = 3y²
                match sqrt_exact(&(&self.a / int(3))) {
                    Some(y) => Surd3::new(Scalar::zero(), y),
                    None => continue,
                }
            } else {
                let y = &self.b / (int(2) * &x);
                Surd3::new(x, y)
            };
            for c in [cand.clone(), -cand] {
                if c.sign() != Sign::Negative && &c.square() == self {
                    return Some(c);
                }
            }
        }
        None
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * 3f64.sqrt()
    }
}

impl fmt::Debug for Surd3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}√3", fmt_scalar(&self.a), fmt_scalar(&self.b))
    }
}

impl Add for &Surd3 {
    type Output = Surd3;
    fn add(self, o: &Surd3) -> Surd3 {
        Surd3::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub for &Surd3 {
    type Output = Surd3;
    fn sub(self, o: &Surd3) -> Surd3 {
        Surd3::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Mul for &Surd3 {
    type Output = Surd3;
    fn mul(self, o: &Surd3) -> Surd3 {
        Surd3::new(
            &self.a * &o.a + int(3) * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}

impl Neg for Surd3 {
    type Output = Surd3;
    fn neg(self) -> Surd3 {
        Surd3::new(-self.a, -self.b)
    }
}

/// Irrational part of an [`ExactPoint`]: coordinate `i` is
/// `base[i] + coeffs[i]·√radicand`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurdPart {
    #[serde(with = "super::serde_scalar")]
    pub radicand: Scalar,
    #[serde(with = "super::serde_scalar::vec")]
    pub coeffs: Vec<Scalar>,
}

/// A point with coordinates in `Q(√D)` for a single rational `D`.
///
/// Piercing points are usually rational; disk patterns and circle
/// intersections need one square root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "RawPoint", into = "RawPoint")]
pub struct ExactPoint {
    pub base: Vec<Scalar>,
    pub surd: Option<SurdPart>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawPoint {
    Rational(#[serde(with = "super::serde_scalar::vec")] Vec<Scalar>),
    Surd {
        #[serde(with = "super::serde_scalar::vec")]
        base: Vec<Scalar>,
        #[serde(with = "super::serde_scalar")]
        radicand: Scalar,
        #[serde(with = "super::serde_scalar::vec")]
        sqrt_coeffs: Vec<Scalar>,
    },
}

impl From<RawPoint> for ExactPoint {
    fn from(r: RawPoint) -> Self {
        match r {
            RawPoint::Rational(base) => ExactPoint::rational(base),
            RawPoint::Surd { base, radicand, sqrt_coeffs } => ExactPoint::with_surd(base, radicand, sqrt_coeffs),
        }
    }
}

impl From<ExactPoint> for RawPoint {
    fn from(p: ExactPoint) -> Self {
        match p.surd {
            None => RawPoint::Rational(p.base),
            Some(s) => RawPoint::Surd {
                base: p.base,
                radicand: s.radicand,
                sqrt_coeffs: s.coeffs,
            },
        }
    }
}

impl From<Point> for ExactPoint {
    fn from(p: Point) -> Self {
        ExactPoint::rational(vec![p.x, p.y])
    }
}

impl From<&Point> for ExactPoint {
    fn from(p: &Point) -> Self {
        ExactPoint::from(p.clone())
    }
}

impl ExactPoint {
    pub fn rational(base: Vec<Scalar>) -> Self {
        ExactPoint { base, surd: None }
    }

    /// Builds `base + coeffs·√radicand`, folding perfect-square radicands.
    pub fn with_surd(base: Vec<Scalar>, radicand: Scalar, coeffs: Vec<Scalar>) -> Self {
        assert_eq!(base.len(), coeffs.len(), "coordinate count mismatch");
        assert!(!radicand.is_negative(), "negative radicand");
        if coeffs.iter().all(|c| c.is_zero()) {
            return ExactPoint::rational(base);
        }
        if let Some(r) = sqrt_exact(&radicand) {
            let base = base.iter().zip(&coeffs).map(|(a, c)| a + c * &r).collect();
            return ExactPoint::rational(base);
        }
        ExactPoint {
            base,
            surd: Some(SurdPart { radicand, coeffs }),
        }
    }

    pub fn from_surd3(x: &Surd3, y: &Surd3) -> Self {
        ExactPoint::with_surd(vec![x.a.clone(), y.a.clone()], int(3), vec![x.b.clone(), y.b.clone()])
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn is_rational(&self) -> bool {
        self.surd.is_none()
    }

    /// The planar rational point, if this is one.
    pub fn as_point(&self) -> Option<Point> {
        if self.is_rational() && self.dim() == 2 {
            Some(Point::new(self.base[0].clone(), self.base[1].clone()))
        } else {
            None
        }
    }

    pub fn radicand(&self) -> Scalar {
        self.surd.as_ref().map(|s| s.radicand.clone()).unwrap_or_else(Scalar::zero)
    }

    /// Coordinate `i` as `(a, b)` meaning `a + b·√radicand`.
    pub fn coord(&self, i: usize) -> (Scalar, Scalar) {
        let b = self.surd.as_ref().map(|s| s.coeffs[i].clone()).unwrap_or_else(Scalar::zero);
        (self.base[i].clone(), b)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        let r = to_f64(&self.radicand()).sqrt();
        (0..self.dim())
            .map(|i| {
                let (a, b) = self.coord(i);
                to_f64(&a) + to_f64(&b) * r
            })
            .collect()
    }

    pub fn translate(&self, t: &[Scalar]) -> ExactPoint {
        ExactPoint {
            base: self.base.iter().zip(t).map(|(a, b)| a + b).collect(),
            surd: self.surd.clone(),
        }
    }

    pub fn scale(&self, k: &Scalar) -> ExactPoint {
        if k.is_one() {
            return self.clone();
        }
        ExactPoint {
            base: self.base.iter().map(|a| a * k).collect(),
            surd: self.surd.as_ref().map(|s| SurdPart {
                radicand: s.radicand.clone(),
                coeffs: s.coeffs.iter().map(|c| c * k).collect(),
            }),
        }
    }

    /// Sign of the affine form `w · x + c`.
    pub fn affine_sign(&self, w: &[Scalar], c: &Scalar) -> Sign {
        let mut a = c.clone();
        let mut b = Scalar::zero();
        for (i, wi) in w.iter().enumerate() {
            let (xa, xb) = self.coord(i);
            a += wi * xa;
            b += wi * xb;
        }
        sign_surd(&a, &b, &self.radicand())
    }

    /// Sign of `|x − center|² − r2` for a planar point.
    pub fn circle_sign(&self, center: &Point, r2: &Scalar) -> Sign {
        let d = self.radicand();
        let (xa, xb) = self.coord(0);
        let (ya, yb) = self.coord(1);
        let (dx, dy) = (xa - &center.x, ya - &center.y);
        let a = &dx * &dx + &dy * &dy + (&xb * &xb + &yb * &yb) * &d - r2;
        let b = int(2) * (&dx * &xb + &dy * &yb);
        sign_surd(&a, &b, &d)
    }

    /// Sign of `x_i − v`.
    pub fn coord_sign(&self, i: usize, v: &Scalar) -> Sign {
        let (a, b) = self.coord(i);
        sign_surd(&(a - v), &b, &self.radicand())
    }
}

impl fmt::Display for ExactPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.dim())
            .map(|i| {
                let (a, b) = self.coord(i);
                if b.is_zero() {
                    fmt_scalar(&a)
                } else {
                    format!("{} + {}√{}", fmt_scalar(&a), fmt_scalar(&b), fmt_scalar(&self.radicand()))
                }
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Expression over the rationals with square roots of nonnegative rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Rat(Scalar),
    Sqrt(Scalar),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

impl Expr {
    pub fn rat(x: Scalar) -> Expr {
        Expr::Rat(x)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Rat(int(n))
    }

    pub fn sqrt(x: Scalar) -> Expr {
        Expr::Sqrt(x)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Expr::Rat(x) => to_f64(x),
            Expr::Sqrt(x) => to_f64(x).sqrt(),
            Expr::Add(a, b) => a.to_f64() + b.to_f64(),
            Expr::Sub(a, b) => a.to_f64() - b.to_f64(),
            Expr::Mul(a, b) => a.to_f64() * b.to_f64(),
            Expr::Neg(a) => -a.to_f64(),
        }
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, o: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(o))
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, o: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(o))
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, o: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(o))
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

/// `Σ coef·√m` over positive integers `m`, no two of which have a square
/// product. Square roots of such integers are linearly independent over
/// the rationals, so the form is zero iff every coefficient is.
#[derive(Clone, Debug, Default)]
struct RootSum {
    terms: BTreeMap<BigInt, Scalar>,
}

impl RootSum {
    fn rational(x: Scalar) -> Self {
        let mut s = RootSum::default();
        s.insert(BigInt::one(), x);
        s
    }

    fn sqrt_of(x: &Scalar) -> Result<Self> {
        if x.is_negative() {
            return Err(Error::DegenerateInput("square root of a negative number".into()));
        }
        let mut s = RootSum::default();
        if x.is_zero() {
            return Ok(s);
        }
        // √(p/q) = √(pq) / q
        let m = x.numer() * x.denom();
        s.insert(m, Scalar::new(BigInt::one(), x.denom().clone()));
        Ok(s)
    }

    fn insert(&mut self, m: BigInt, coef: Scalar) {
        if coef.is_zero() {
            return;
        }
        if is_perfect_square(&m) {
            let r = Scalar::from_integer(m.sqrt());
            *self.terms.entry(BigInt::one()).or_insert_with(Scalar::zero) += coef * r;
            return;
        }
        let key = self.terms.keys().find(|k| is_perfect_square(&(*k * &m))).cloned();
        match key {
            Some(k) => {
                // √m = √(mk) / k · √k
                let f = Scalar::new((&m * &k).sqrt(), k.clone());
                *self.terms.get_mut(&k).expect("present") += coef * f;
            }
            None => {
                self.terms.insert(m, coef);
            }
        }
    }

    fn add(mut self, o: RootSum) -> RootSum {
        for (m, c) in o.terms {
            self.insert(m, c);
        }
        self
    }

    fn neg(mut self) -> RootSum {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }

    fn mul(&self, o: &RootSum) -> RootSum {
        let mut out = RootSum::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.insert(m1 * m2, c1 * c2);
            }
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    /// Enclosure of the value using `√m` bounds at `bits` of precision.
    fn bounds(&self, bits: u32) -> (Scalar, Scalar) {
        let scale = BigInt::one() << bits;
        let sq = &scale * &scale;
        let (mut lo, mut hi) = (Scalar::zero(), Scalar::zero());
        for (m, c) in &self.terms {
            if c.is_zero() {
                continue;
            }
            let s = (m * &sq).sqrt();
            let exact = &s * &s == m * &sq;
            let r_lo = Scalar::new(s.clone(), scale.clone());
            let r_hi = if exact { r_lo.clone() } else { Scalar::new(s + 1, scale.clone()) };
            if c.is_positive() {
                lo += c * r_lo;
                hi += c * r_hi;
            } else {
                lo += c * r_hi;
                hi += c * r_lo;
            }
        }
        (lo, hi)
    }
}

fn canonical(e: &Expr) -> Result<RootSum> {
    Ok(match e {
        Expr::Rat(x) => RootSum::rational(x.clone()),
        Expr::Sqrt(x) => RootSum::sqrt_of(x)?,
        Expr::Add(a, b) => canonical(a)?.add(canonical(b)?),
        Expr::Sub(a, b) => canonical(a)?.add(canonical(b)?.neg()),
        Expr::Mul(a, b) => canonical(a)?.mul(&canonical(b)?),
        Expr::Neg(a) => canonical(a)?.neg(),
    })
}

/// Refinement depth used by [`refine_sign`].
pub const DEFAULT_MAX_BITS: u32 = 1 << 14;

/// Exact sign of an expression; see [`refine_sign_with`].
pub fn refine_sign(e: &Expr) -> Result<Sign> {
    refine_sign_with(e, DEFAULT_MAX_BITS)
}

/// Zero is detected symbolically; otherwise the enclosure is refined by
/// doubling the bit precision until it excludes zero or `max_bits` is hit.
pub fn refine_sign_with(e: &Expr, max_bits: u32) -> Result<Sign> {
    let form = canonical(e)?;
    if form.is_zero() {
        return Ok(Sign::Zero);
    }
    let mut bits = 16;
    loop {
        let (lo, hi) = form.bounds(bits);
        if lo.is_positive() {
            return Ok(Sign::Positive);
        }
        if hi.is_negative() {
            return Ok(Sign::Negative);
        }
        if bits >= max_bits {
            return Err(Error::PrecisionExhausted(bits));
        }
        bits = (bits * 2).min(max_bits);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::scalar::rat;

    fn sq(n: i64) -> Expr {
        Expr::sqrt(int(n))
    }

    #[test]
    fn refine_sign_examples() {
        assert_eq!(refine_sign(&(sq(2) - Expr::int(1))).unwrap(), Sign::Positive);
        assert_eq!(refine_sign(&(sq(4) - Expr::int(2))).unwrap(), Sign::Zero);
        assert_eq!(refine_sign(&(sq(3) + sq(12) - sq(27))).unwrap(), Sign::Zero);
        assert_eq!(refine_sign(&(sq(2) * sq(8) - Expr::int(4))).unwrap(), Sign::Zero);
        assert_eq!(
            refine_sign(&(Expr::sqrt(rat(1, 2)) - sq(2) * Expr::rat(rat(1, 2)))).unwrap(),
            Sign::Zero
        );
    }

    #[test]
    fn refine_sign_close_values() {
        // √10001 − 100 − 1/200 is about −1.25e−7
        let e = sq(10001) - Expr::int(100) - Expr::rat(rat(1, 200));
        assert_eq!(refine_sign(&e).unwrap(), Sign::Negative);
        let e = sq(2) + sq(3) - sq(5) - sq(6) + Expr::int(2);
        let expect = if e.to_f64() > 0.0 { Sign::Positive } else { Sign::Negative };
        assert_eq!(refine_sign(&e).unwrap(), expect);
    }

    #[test]
    fn refine_sign_exhausts_when_asked_too_little() {
        let e = sq(10001) - Expr::int(100) - Expr::rat(rat(1, 200));
        assert_eq!(refine_sign_with(&e, 16), Err(Error::PrecisionExhausted(16)));
    }

    #[test]
    fn surd_sign() {
        assert_eq!(sign_surd(&int(-2), &int(1), &int(3)), Sign::Negative);
        assert_eq!(sign_surd(&int(-1), &int(1), &int(3)), Sign::Positive);
        assert_eq!(sign_surd(&int(-3), &int(1), &int(9)), Sign::Zero);
    }

    #[test]
    fn surd3_sqrt() {
        // (1 + √3)² = 4 + 2√3
        let z = Surd3::new(int(4), int(2));
        assert_eq!(z.sqrt(), Some(Surd3::new(int(1), int(1))));
        // (√3 − 1)² = 4 − 2√3
        let z = Surd3::new(int(4), int(-2));
        assert_eq!(z.sqrt(), Some(Surd3::new(int(-1), int(1))));
        assert_eq!(Surd3::rat(int(3)).sqrt(), Some(Surd3::new(int(0), int(1))));
        assert_eq!(Surd3::rat(rat(9, 4)).sqrt(), Some(Surd3::rat(rat(3, 2))));
        assert_eq!(Surd3::rat(int(2)).sqrt(), None);
        let x = Surd3::new(rat(2, 3), rat(-5, 7));
        let y = x.recip().unwrap();
        assert_eq!(&x * &y, Surd3::rat(int(1)));
    }

    #[test]
    fn exact_point_predicates() {
        // (0, √3) lies on the circle of radius 2 about (1, 0)
        let p = ExactPoint::with_surd(vec![int(0), int(0)], int(3), vec![int(0), int(1)]);
        assert_eq!(p.circle_sign(&Point::new(int(1), int(0)), &int(4)), Sign::Zero);
        assert_eq!(p.coord_sign(1, &rat(17, 10)), Sign::Positive);
        assert_eq!(p.coord_sign(1, &rat(18, 10)), Sign::Negative);
        let folded = ExactPoint::with_surd(vec![int(1)], int(4), vec![int(1)]);
        assert_eq!(folded, ExactPoint::rational(vec![int(3)]));
        let json = serde_json::to_string(&p).unwrap();
        let back: ExactPoint = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
