//! Instance and certificate JSON.
//!
//! ```json
//! {"base": {"type": "polygon", "vertices": [["0","0"], ["1","0"], ["0","1"]]},
//!  "kind": "translates",
//!  "members": [{"t": ["1/2", 0]}, {"t": [3, "-1/4"], "s": "1"}]}
//! ```
//!
//! Rationals are `"p/q"` strings or JSON integers; `s` defaults to 1 and
//! `reference` to the body's default reference point.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::bodies::{ConvexBody, Family, FamilyKind, Member, Shape};
use crate::certificate::PierceCertificate;
use crate::error::{Error, Result};
use crate::geom::{ConvexPolygon, Point, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BaseFile {
    Polygon {
        vertices: Vec<Point>,
        #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_vec")]
        reference: Option<Vec<Scalar>>,
    },
    Disk {
        center: Point,
        #[serde(with = "crate::geom::serde_scalar")]
        radius: Scalar,
        #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_vec")]
        reference: Option<Vec<Scalar>>,
    },
    Box {
        #[serde(with = "crate::geom::serde_scalar::vec")]
        sides: Vec<Scalar>,
        #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_vec")]
        reference: Option<Vec<Scalar>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberFile {
    #[serde(with = "crate::geom::serde_scalar::vec")]
    pub t: Vec<Scalar>,
    #[serde(default = "Scalar::one", skip_serializing_if = "Scalar::is_one", with = "crate::geom::serde_scalar")]
    pub s: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindFile {
    Translates,
    Homothets,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub base: BaseFile,
    pub kind: KindFile,
    pub members: Vec<MemberFile>,
}

/// A certificate bundled with its instance, so it re-verifies on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub instance: InstanceFile,
    pub certificate: PierceCertificate,
}

mod opt_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::geom::Scalar;

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "crate::geom::serde_scalar::vec")] Vec<Scalar>);

    pub fn serialize<S: Serializer>(v: &Option<Vec<Scalar>>, s: S) -> Result<S::Ok, S::Error> {
        v.clone().map(Wrap).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Scalar>>, D::Error> {
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

impl InstanceFile {
    pub fn from_family(f: &Family) -> InstanceFile {
        let reference = Some(f.base.reference.clone());
        let base = match &f.base.shape {
            Shape::Polygon(p) => BaseFile::Polygon { vertices: p.vertices().to_vec(), reference },
            Shape::Disk { center, radius } => BaseFile::Disk { center: center.clone(), radius: radius.clone(), reference },
            Shape::Box { sides } => BaseFile::Box { sides: sides.clone(), reference },
        };
        let kind = match f.kind {
            FamilyKind::Translates => KindFile::Translates,
            FamilyKind::Homothets => KindFile::Homothets,
        };
        let members = f.members.iter().map(|m| MemberFile { t: m.t.clone(), s: m.s.clone() }).collect();
        InstanceFile { base, kind, members }
    }

    pub fn to_family(&self) -> Result<Family> {
        let (body, reference) = match &self.base {
            BaseFile::Polygon { vertices, reference } => {
                let p = ConvexPolygon::new(vertices.clone())
                    .map_err(|e| Error::Parse(format!("base polygon: {e}")))?;
                (ConvexBody::polygon(p), reference)
            }
            BaseFile::Disk { center, radius, reference } => (ConvexBody::disk(center.clone(), radius.clone())?, reference),
            BaseFile::Box { sides, reference } => (ConvexBody::axis_box(sides.clone())?, reference),
        };
        let body = match reference {
            Some(r) => body.with_reference(r.clone())?,
            None => body,
        };
        let kind = match self.kind {
            KindFile::Translates => FamilyKind::Translates,
            KindFile::Homothets => FamilyKind::Homothets,
        };
        let members = self.members.iter().map(|m| Member { t: m.t.clone(), s: m.s.clone() }).collect();
        Family::new(body, kind, members)
    }
}

pub fn family_from_json(s: &str) -> Result<Family> {
    let file: InstanceFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_family()
}

pub fn family_to_json(f: &Family) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_family(f)).expect("serializable")
}

pub fn certificate_to_json(f: &Family, c: &PierceCertificate) -> String {
    let file = CertificateFile { instance: InstanceFile::from_family(f), certificate: c.clone() };
    serde_json::to_string_pretty(&file).expect("serializable")
}

pub fn certificate_from_json(s: &str) -> Result<(Family, PierceCertificate)> {
    let file: CertificateFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((file.instance.to_family()?, file.certificate))
}
