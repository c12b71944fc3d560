//! Exact planar geometry over the rationals.

pub mod affine;
pub mod algebraic;
pub mod point;
pub mod polygon;
pub mod scalar;

pub use affine::Affine2;
pub use algebraic::{refine_sign, sign_surd, Expr, ExactPoint, Sign, SurdPart};
pub use point::{orient, orient_sign, pt, ptq, Point, Vector};
pub use polygon::{convex_hull, intersection, minkowski_sum, reflect, Clipped, ConvexPolygon};
pub use scalar::{fmt_scalar, parse_scalar, Interval, Scalar};

/// Serde adapter writing scalars as `"p/q"` strings and reading strings or
/// JSON integers.
pub mod serde_scalar {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::scalar::{fmt_scalar, parse_scalar, Scalar};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Str(String),
        Int(i64),
    }

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_scalar(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Str(s) => parse_scalar(&s).map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(super::scalar::int(n)),
        }
    }

    pub mod vec {
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        use super::super::scalar::{fmt_scalar, Scalar};

        pub fn serialize<S: Serializer>(xs: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&fmt_scalar(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Scalar>, D::Error> {
            #[derive(Deserialize)]
            struct Wrap(#[serde(with = "super")] Scalar);
            let v: Vec<Wrap> = Vec::deserialize(d)?;
            Ok(v.into_iter().map(|w| w.0).collect())
        }
    }
}
