use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::{fmt_scalar, to_f64, Scalar};

/// Planar point or vector with exact rational coordinates.
///
/// Ordering is lexicographic on `(x, y)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [fmt_scalar(&self.x), fmt_scalar(&self.y)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw(#[serde(with = "super::serde_scalar::vec")] Vec<Scalar>);
        let Raw(v) = Raw::deserialize(d)?;
        match <[Scalar; 2]>::try_from(v) {
            Ok([x, y]) => Ok(Point { x, y }),
            Err(v) => Err(serde::de::Error::custom(format!(
                "expected 2 coordinates, got {}",
                v.len()
            ))),
        }
    }
}

pub type Vector = Point;

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }

    pub fn origin() -> Self {
        Point::new(Scalar::zero(), Scalar::zero())
    }

    pub fn scale(&self, k: &Scalar) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    pub fn dot(&self, o: &Point) -> Scalar {
        &self.x * &o.x + &self.y * &o.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(&self, o: &Point) -> Scalar {
        &self.x * &o.y - &self.y * &o.x
    }

    /// Counterclockwise quarter turn.
    pub fn perp(&self) -> Point {
        Point::new(-&self.y, self.x.clone())
    }

    pub fn norm2(&self) -> Scalar {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn midpoint(&self, o: &Point) -> Point {
        let h = super::scalar::half();
        Point::new((&self.x + &o.x) * &h, (&self.y + &o.y) * &h)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }
}

/// Sign of the turn `a -> b -> c`: positive for a left turn.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Scalar {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

pub fn orient_sign(a: &Point, b: &Point, c: &Point) -> i8 {
    let o = orient(a, b, c);
    if o.is_positive() {
        1
    } else if o.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_scalar(&self.x), fmt_scalar(&self.y))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<'a> Add<&'a Point> for &'a Point {
    type Output = Point;
    fn add(self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl<'a> Sub<&'a Point> for &'a Point {
    type Output = Point;
    fn sub(self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-&self.x, -&self.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Shorthand for tests and constructions: `pt(1, 2)`.
pub fn pt(x: i64, y: i64) -> Point {
    Point::new(super::scalar::int(x), super::scalar::int(y))
}

/// `ptq((1, 2), (3, 4))` is the point `(1/2, 3/4)`.
pub fn ptq(x: (i64, i64), y: (i64, i64)) -> Point {
    Point::new(super::scalar::rat(x.0, x.1), super::scalar::rat(y.0, y.1))
}
