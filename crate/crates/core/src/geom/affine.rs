use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::point::Point;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Planar affine map `x ↦ M·x + t` with `M = [[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Affine2 {
    #[serde(with = "super::serde_scalar::vec")]
    pub m: Vec<Scalar>,
    pub t: Point,
}

impl Affine2 {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar, t: Point) -> Self {
        Affine2 { m: vec![a, b, c, d], t }
    }

    pub fn linear(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Self {
        Affine2::new(a, b, c, d, Point::origin())
    }

    pub fn identity() -> Self {
        Affine2::linear(Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::one())
    }

    pub fn translation(t: Point) -> Self {
        Affine2::new(Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::one(), t)
    }

    /// Linear map sending `e1 ↦ u`, `e2 ↦ v`.
    pub fn from_columns(u: &Point, v: &Point) -> Self {
        Affine2::linear(u.x.clone(), v.x.clone(), u.y.clone(), v.y.clone())
    }

    pub fn det(&self) -> Scalar {
        &self.m[0] * &self.m[3] - &self.m[1] * &self.m[2]
    }

    pub fn apply_linear(&self, p: &Point) -> Point {
        Point::new(
            &self.m[0] * &p.x + &self.m[1] * &p.y,
            &self.m[2] * &p.x + &self.m[3] * &p.y,
        )
    }

    pub fn apply(&self, p: &Point) -> Point {
        &self.apply_linear(p) + &self.t
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Affine2) -> Affine2 {
        let [a, b, c, d] = [&self.m[0], &self.m[1], &self.m[2], &self.m[3]];
        let [e, f, g, h] = [&other.m[0], &other.m[1], &other.m[2], &other.m[3]];
        Affine2::new(
            a * e + b * g,
            a * f + b * h,
            c * e + d * g,
            c * f + d * h,
            self.apply(&other.t),
        )
    }

    pub fn inverse(&self) -> Result<Affine2> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::SingularMap);
        }
        let lin = Affine2::linear(
            &self.m[3] / &det,
            -&self.m[1] / &det,
            -&self.m[2] / &det,
            &self.m[0] / &det,
        );
        let t = -lin.apply_linear(&self.t);
        Ok(Affine2 { t, ..lin })
    }

    /// Scale factor if the linear part is a similarity (rotation or
    /// reflection times a rational scale); `None` otherwise.
    pub fn similarity_scale(&self) -> Option<Scalar> {
        let [a, b, c, d] = [&self.m[0], &self.m[1], &self.m[2], &self.m[3]];
        let conformal = (a == d && *b == -c) || (*a == -d && b == c);
        if !conformal {
            return None;
        }
        super::scalar::sqrt_exact(&(a * a + c * c)).filter(|s| !s.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        self.m[1].is_zero() && self.m[2].is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::point::pt;
    use crate::geom::scalar::{int, rat};

    #[test]
    fn inverse_round_trip() {
        let m = Affine2::new(int(2), int(1), int(-1), int(3), pt(5, -7));
        let inv = m.inverse().unwrap();
        for p in [pt(0, 0), pt(1, 2), pt(-3, 4)] {
            assert_eq!(inv.apply(&m.apply(&p)), p);
            assert_eq!(m.compose(&inv).apply(&p), p);
        }
        assert!(Affine2::linear(int(1), int(2), int(2), int(4)).inverse().is_err());
    }

    #[test]
    fn similarity_detection() {
        let rot = Affine2::linear(rat(3, 5), rat(-4, 5), rat(4, 5), rat(3, 5));
        assert_eq!(rot.similarity_scale(), Some(int(1)));
        let z = Affine2::linear(int(2), int(0), int(0), int(2));
        assert_eq!(z.similarity_scale(), Some(int(2)));
        assert_eq!(Affine2::linear(int(1), int(1), int(0), int(1)).similarity_scale(), None);
        assert_eq!(Affine2::linear(int(1), int(-1), int(1), int(1)).similarity_scale(), None);
    }
}
