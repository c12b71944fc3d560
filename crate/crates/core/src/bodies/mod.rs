//! Convex bodies, families of translates and homothets, and their
//! intersection graphs.

mod graph;
mod grid;

pub use graph::{intersection_graph, intersection_graph_brute, FamilyIndex, IntersectionGraph};
pub use grid::{BBox, SpatialGrid};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geom::algebraic::Sign;
use crate::geom::scalar::{fmt_scalar, int, to_f64};
use crate::geom::{Affine2, ConvexPolygon, ExactPoint, Point, Scalar};

/// The shape of a base body. Boxes have their minimum corner at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Polygon(ConvexPolygon),
    Disk { center: Point, radius: Scalar },
    Box { sides: Vec<Scalar> },
}

/// A base body `C` with a chosen reference point inside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexBody {
    pub shape: Shape,
    pub reference: Vec<Scalar>,
}

impl ConvexBody {
    /// Polygon with the default reference point: the center for centrally
    /// symmetric polygons, the lowest-leftmost vertex otherwise.
    pub fn polygon(p: ConvexPolygon) -> ConvexBody {
        let r = match p.symmetry_center() {
            Some(c) => c,
            None => p.vertex(p.bottom_index()).clone(),
        };
        ConvexBody {
            reference: vec![r.x, r.y],
            shape: Shape::Polygon(p),
        }
    }

    pub fn disk(center: Point, radius: Scalar) -> Result<ConvexBody> {
        if !radius.is_positive() {
            return Err(Error::DegenerateInput("disk radius must be positive".into()));
        }
        Ok(ConvexBody {
            reference: vec![center.x.clone(), center.y.clone()],
            shape: Shape::Disk { center, radius },
        })
    }

    pub fn unit_disk() -> ConvexBody {
        ConvexBody::disk(Point::origin(), Scalar::one()).expect("valid")
    }

    /// Axis box `[0, s_1] × … × [0, s_d]` referenced at its minimum corner.
    pub fn axis_box(sides: Vec<Scalar>) -> Result<ConvexBody> {
        if sides.len() < 2 {
            return Err(Error::DegenerateInput("boxes need dimension at least 2".into()));
        }
        if sides.iter().any(|s| !s.is_positive()) {
            return Err(Error::DegenerateInput("box sides must be positive".into()));
        }
        Ok(ConvexBody {
            reference: vec![Scalar::zero(); sides.len()],
            shape: Shape::Box { sides },
        })
    }

    pub fn unit_square() -> ConvexBody {
        ConvexBody::polygon(ConvexPolygon::rect(int(0), int(0), int(1), int(1)).expect("valid"))
    }

    pub fn unit_triangle() -> ConvexBody {
        let t = ConvexPolygon::new(vec![
            crate::geom::pt(0, 0),
            crate::geom::pt(1, 0),
            crate::geom::pt(0, 1),
        ])
        .expect("valid");
        ConvexBody::polygon(t)
    }

    /// Replaces the reference point; it must lie in the body.
    pub fn with_reference(mut self, r: Vec<Scalar>) -> Result<ConvexBody> {
        if r.len() != self.dim() {
            return Err(Error::DegenerateInput("reference point has wrong dimension".into()));
        }
        let inside = self.realize(&Member::unit(self.dim())).contains(&ExactPoint::rational(r.clone()));
        if !inside {
            return Err(Error::DegenerateInput("reference point outside the body".into()));
        }
        self.reference = r;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        match &self.shape {
            Shape::Box { sides } => sides.len(),
            _ => 2,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.shape {
            Shape::Polygon(_) => "polygon",
            Shape::Disk { .. } => "disk",
            Shape::Box { .. } => "box",
        }
    }

    pub fn as_polygon(&self) -> Option<&ConvexPolygon> {
        match &self.shape {
            Shape::Polygon(p) => Some(p),
            _ => None,
        }
    }

    /// Short human description used in errors and reports.
    pub fn describe(&self) -> String {
        match &self.shape {
            Shape::Polygon(p) => {
                let sym = if p.is_centrally_symmetric() { "symmetric " } else { "" };
                format!("{sym}{}-gon", p.len())
            }
            Shape::Disk { radius, .. } => format!("disk r={}", fmt_scalar(radius)),
            Shape::Box { sides } => format!("{}-box", sides.len()),
        }
    }

    pub fn is_centrally_symmetric(&self) -> bool {
        match &self.shape {
            Shape::Polygon(p) => p.is_centrally_symmetric(),
            _ => true,
        }
    }

    pub fn reference_point(&self) -> Point {
        Point::new(self.reference[0].clone(), self.reference[1].clone())
    }

    /// The body `s·C + t`.
    pub fn realize(&self, m: &Member) -> Body {
        match &self.shape {
            Shape::Polygon(p) => Body::Polygon(p.scale_translate(&m.s, &m.point())),
            Shape::Disk { center, radius } if m.s.is_one() => Body::Disk {
                center: if center.is_zero() { m.point() } else { center + &m.point() },
                radius: radius.clone(),
            },
            Shape::Disk { center, radius } => Body::Disk {
                center: &center.scale(&m.s) + &m.point(),
                radius: radius * &m.s,
            },
            Shape::Box { sides } => Body::Box {
                lo: m.t.clone(),
                hi: sides.iter().zip(&m.t).map(|(s, t)| s * &m.s + t).collect(),
            },
        }
    }

    /// Largest value of the linear functional `w` over the body.
    pub fn support(&self, w: &[Scalar]) -> Scalar {
        match &self.shape {
            Shape::Polygon(p) => p.support(&Point::new(w[0].clone(), w[1].clone())),
            Shape::Disk { center, radius } => {
                // Only axis functionals keep the support rational.
                assert!(
                    w[0].is_zero() || w[1].is_zero(),
                    "disk support is taken along coordinate axes"
                );
                let norm = w[0].abs() + w[1].abs();
                &center.x * &w[0] + &center.y * &w[1] + radius * norm
            }
            Shape::Box { sides } => sides
                .iter()
                .zip(w)
                .map(|(s, wi)| if wi.is_positive() { s * wi } else { Scalar::zero() })
                .sum(),
        }
    }
}

/// A member `s·C + t` of a family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Member {
    pub t: Vec<Scalar>,
    pub s: Scalar,
}

impl Member {
    pub fn translate(t: Vec<Scalar>) -> Member {
        Member { t, s: Scalar::one() }
    }

    pub fn at(p: &Point) -> Member {
        Member::translate(vec![p.x.clone(), p.y.clone()])
    }

    pub fn homothet(t: Vec<Scalar>, s: Scalar) -> Member {
        Member { t, s }
    }

    pub fn unit(dim: usize) -> Member {
        Member::translate(vec![Scalar::zero(); dim])
    }

    /// Planar translation vector.
    pub fn point(&self) -> Point {
        Point::new(self.t[0].clone(), self.t[1].clone())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Translates,
    Homothets,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Translates => "translates",
            FamilyKind::Homothets => "homothets",
        }
    }
}

/// A finite family of translates or homothets of one base body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub base: ConvexBody,
    pub kind: FamilyKind,
    pub members: Vec<Member>,
}

impl Family {
    pub fn new(base: ConvexBody, kind: FamilyKind, members: Vec<Member>) -> Result<Family> {
        if members.is_empty() {
            return Err(Error::InvalidFamily("family has no members".into()));
        }
        let d = base.dim();
        for (i, m) in members.iter().enumerate() {
            if m.t.len() != d {
                return Err(Error::InvalidFamily(format!(
                    "member {i} has {} coordinates, base has {d}",
                    m.t.len()
                )));
            }
            if !m.s.is_positive() {
                return Err(Error::InvalidFamily(format!("member {i} has nonpositive scale")));
            }
            if kind == FamilyKind::Translates && !m.s.is_one() {
                return Err(Error::InvalidFamily(format!("member {i} of a translate family has scale ≠ 1")));
            }
        }
        Ok(Family { base, kind, members })
    }

    pub fn translates(base: ConvexBody, ts: Vec<Vec<Scalar>>) -> Result<Family> {
        Family::new(base, FamilyKind::Translates, ts.into_iter().map(Member::translate).collect())
    }

    pub fn translates_at(base: ConvexBody, ts: &[Point]) -> Result<Family> {
        Family::new(base, FamilyKind::Translates, ts.iter().map(Member::at).collect())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn realize(&self, i: usize) -> Body {
        self.base.realize(&self.members[i])
    }

    /// Reference point of member `i`: `s·r + t`.
    pub fn reference_of(&self, i: usize) -> Vec<Scalar> {
        let m = &self.members[i];
        self.base.reference.iter().zip(&m.t).map(|(r, t)| r * &m.s + t).collect()
    }

    pub fn subfamily(&self, idx: &[usize]) -> Family {
        Family {
            base: self.base.clone(),
            kind: self.kind,
            members: idx.iter().map(|&i| self.members[i].clone()).collect(),
        }
    }

    pub fn intersects(&self, i: usize, j: usize) -> bool {
        self.realize(i).intersects(&self.realize(j)).expect("same kind")
    }

    /// Applies `x ↦ M·x + b` to every member.
    pub fn map(&self, m: &Affine2) -> Result<Family> {
        normalize_affine(self, m)
    }
}

/// Image of a family under a nonsingular affine map.
///
/// The base moves by the linear part and translations by the full map, so
/// `M(s·C + t) + b = s·(M·C) + (M·t + b)`.
pub fn normalize_affine(f: &Family, m: &Affine2) -> Result<Family> {
    let det = m.det();
    if det.is_zero() {
        return Err(Error::SingularMap);
    }
    if f.dim() != 2 {
        return Err(Error::BoxesNotClosedUnderAffine);
    }
    let lin = Affine2 {
        t: Point::origin(),
        ..m.clone()
    };
    let ref_img = lin.apply(&f.base.reference_point());
    let moved = |mem: &Member| m.apply(&mem.point());
    match &f.base.shape {
        Shape::Polygon(p) => {
            let base = ConvexBody {
                shape: Shape::Polygon(p.map(&lin)?),
                reference: vec![ref_img.x, ref_img.y],
            };
            let members = f.members.iter().map(|mem| Member::homothet(to_vec(&moved(mem)), mem.s.clone())).collect();
            Family::new(base, f.kind, members)
        }
        Shape::Disk { center, radius } => {
            let k = m.similarity_scale().ok_or(Error::DisksNotClosedUnderAffine)?;
            let base = ConvexBody {
                shape: Shape::Disk {
                    center: lin.apply(center),
                    radius: radius * &k,
                },
                reference: vec![ref_img.x, ref_img.y],
            };
            let members = f.members.iter().map(|mem| Member::homothet(to_vec(&moved(mem)), mem.s.clone())).collect();
            Family::new(base, f.kind, members)
        }
        Shape::Box { sides } => {
            if !m.is_diagonal() {
                return Err(Error::BoxesNotClosedUnderAffine);
            }
            let diag = [m.m[0].clone(), m.m[3].clone()];
            let new_sides: Vec<Scalar> = sides.iter().zip(&diag).map(|(s, d)| s * d.abs()).collect();
            let base = ConvexBody::axis_box(new_sides)?;
            let members = f
                .members
                .iter()
                .map(|mem| {
                    let img = moved(mem);
                    let mut t = to_vec(&img);
                    for k in 0..2 {
                        // a flipped axis sends the minimum corner to the far end
                        if diag[k].is_negative() {
                            t[k] += &diag[k] * &sides[k] * &mem.s;
                        }
                    }
                    Member::homothet(t, mem.s.clone())
                })
                .collect();
            Family::new(base, f.kind, members)
        }
    }
}

fn to_vec(p: &Point) -> Vec<Scalar> {
    vec![p.x.clone(), p.y.clone()]
}

/// A concrete body in the plane or an axis box in `R^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    Polygon(ConvexPolygon),
    Disk { center: Point, radius: Scalar },
    Box { lo: Vec<Scalar>, hi: Vec<Scalar> },
}

impl Body {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Body::Polygon(_) => "polygon",
            Body::Disk { .. } => "disk",
            Body::Box { .. } => "box",
        }
    }

    /// Closed containment of an exact point.
    pub fn contains(&self, p: &ExactPoint) -> bool {
        match self {
            Body::Polygon(poly) => poly.edges().all(|(a, b)| {
                let w = [&a.y - &b.y, &b.x - &a.x];
                let c = -(&w[0] * &a.x + &w[1] * &a.y);
                p.affine_sign(&w, &c) != Sign::Negative
            }),
            Body::Disk { center, radius } => p.circle_sign(center, &(radius * radius)) != Sign::Positive,
            Body::Box { lo, hi } => (0..lo.len())
                .all(|i| p.coord_sign(i, &lo[i]) != Sign::Negative && p.coord_sign(i, &hi[i]) != Sign::Positive),
        }
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        match self {
            Body::Polygon(poly) => poly.contains_point(p),
            Body::Disk { center, radius } => (p - center).norm2() <= radius * radius,
            Body::Box { lo, hi } => {
                lo[0] <= p.x && p.x <= hi[0] && lo[1] <= p.y && p.y <= hi[1]
            }
        }
    }

    /// Closed intersection test; bodies must be of the same kind.
    pub fn intersects(&self, other: &Body) -> Result<bool> {
        match (self, other) {
            (Body::Polygon(a), Body::Polygon(b)) => Ok(a.intersects(b)),
            (Body::Disk { center: c1, radius: r1 }, Body::Disk { center: c2, radius: r2 }) => {
                let r = r1 + r2;
                Ok((c1 - c2).norm2() <= &r * &r)
            }
            (Body::Box { lo: l1, hi: h1 }, Body::Box { lo: l2, hi: h2 }) => {
                if l1.len() != l2.len() {
                    return Err(Error::DegenerateInput("boxes of different dimension".into()));
                }
                Ok((0..l1.len()).all(|i| l1[i] <= h2[i] && l2[i] <= h1[i]))
            }
            (a, b) => Err(Error::MixedKinds(a.kind_name(), b.kind_name())),
        }
    }

    /// Whether `other ⊆ self`.
    pub fn contains_body(&self, other: &Body) -> Result<bool> {
        match (self, other) {
            (Body::Polygon(a), Body::Polygon(b)) => Ok(a.contains_polygon(b)),
            (Body::Disk { center: c1, radius: r1 }, Body::Disk { center: c2, radius: r2 }) => {
                if r2 > r1 {
                    return Ok(false);
                }
                let r = r1 - r2;
                Ok((c1 - c2).norm2() <= &r * &r)
            }
            (Body::Box { lo: l1, hi: h1 }, Body::Box { lo: l2, hi: h2 }) => {
                Ok((0..l1.len()).all(|i| l1[i] <= l2[i] && h2[i] <= h1[i]))
            }
            (a, b) => Err(Error::MixedKinds(a.kind_name(), b.kind_name())),
        }
    }

    /// Some point of `self ∩ other` when the intersection is nonempty.
    pub fn common_point(&self, other: &Body) -> Option<Vec<Scalar>> {
        match (self, other) {
            (Body::Polygon(a), Body::Polygon(b)) => {
                crate::geom::intersection(a, b).any_point().map(|p| vec![p.x, p.y])
            }
            (Body::Disk { center: c1, radius: r1 }, Body::Disk { center: c2, radius: r2 }) => {
                if !self.intersects(other).ok()? {
                    return None;
                }
                // on the center segment, where the two disks meet proportionally
                let k = r1 / (r1 + r2);
                let p = c1 + &(c2 - c1).scale(&k);
                Some(vec![p.x, p.y])
            }
            (Body::Box { lo: l1, hi: h1 }, Body::Box { lo: l2, hi: h2 }) => {
                let p: Vec<Scalar> = l1.iter().zip(l2).map(|(a, b)| a.max(b).clone()).collect();
                let ok = (0..p.len()).all(|i| p[i] <= h1[i] && p[i] <= h2[i]);
                ok.then_some(p)
            }
            _ => None,
        }
    }

    /// Bounding box in floating point, padded outward.
    pub fn bbox(&self) -> BBox {
        let (lo, hi): (Vec<f64>, Vec<f64>) = match self {
            Body::Polygon(p) => {
                let (a, b) = p.bbox();
                (vec![to_f64(&a.x), to_f64(&a.y)], vec![to_f64(&b.x), to_f64(&b.y)])
            }
            Body::Disk { center, radius } => {
                let (cx, cy, r) = (to_f64(&center.x), to_f64(&center.y), to_f64(radius));
                (vec![cx - r, cy - r], vec![cx + r, cy + r])
            }
            Body::Box { lo, hi } => (lo.iter().map(to_f64).collect(), hi.iter().map(to_f64).collect()),
        };
        BBox::padded(lo, hi)
    }

    /// `p + k·(self − p)`.
    pub fn homothety(&self, p: &[Scalar], k: &Scalar) -> Body {
        match self {
            Body::Polygon(poly) => {
                let c = Point::new(p[0].clone(), p[1].clone());
                let shift = &c - &c.scale(k);
                Body::Polygon(poly.scale_translate(k, &shift))
            }
            Body::Disk { center, radius } => {
                let c = Point::new(p[0].clone(), p[1].clone());
                Body::Disk {
                    center: &c + &(center - &c).scale(k),
                    radius: radius * k,
                }
            }
            Body::Box { lo, hi } => Body::Box {
                lo: lo.iter().zip(p).map(|(l, q)| q + (l - q) * k).collect(),
                hi: hi.iter().zip(p).map(|(h, q)| q + (h - q) * k).collect(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::scalar::rat;
    use crate::geom::{pt, ptq};

    #[test]
    fn realize_conventions() {
        let d = ConvexBody::unit_disk();
        let m = Member::homothet(vec![int(1), int(0)], int(2));
        assert_eq!(
            d.realize(&m),
            Body::Disk {
                center: pt(1, 0),
                radius: int(2)
            }
        );
        let sq = ConvexBody::unit_square();
        assert_eq!(sq.realize(&Member::unit(2)), Body::Polygon(sq.as_polygon().unwrap().clone()));
        if let Body::Polygon(p) = sq.realize(&Member::homothet(vec![int(5), int(-1)], int(3))) {
            assert_eq!(p.area(), int(9));
        } else {
            panic!("polygon expected");
        }
    }

    #[test]
    fn default_references() {
        assert_eq!(ConvexBody::unit_square().reference_point(), ptq((1, 2), (1, 2)));
        assert_eq!(ConvexBody::unit_triangle().reference_point(), pt(0, 0));
        let b = ConvexBody::axis_box(vec![int(1), int(2), int(3)]).unwrap();
        assert_eq!(b.reference, vec![int(0); 3]);
        assert!(ConvexBody::unit_triangle().with_reference(vec![int(1), int(1)]).is_err());
    }

    #[test]
    fn closed_intersections() {
        let a = Body::Disk { center: pt(0, 0), radius: int(1) };
        let b = Body::Disk { center: pt(2, 0), radius: int(1) };
        assert!(a.intersects(&b).unwrap());
        let sq = ConvexBody::unit_square();
        let x = sq.realize(&Member::at(&pt(0, 0)));
        let y = sq.realize(&Member::at(&pt(3, 0)));
        assert!(!x.intersects(&y).unwrap());
        assert!(matches!(a.intersects(&x), Err(Error::MixedKinds(_, _))));
    }

    #[test]
    fn exact_point_containment() {
        let sq = ConvexBody::unit_square().realize(&Member::unit(2));
        let p = ExactPoint::with_surd(vec![int(0), int(0)], int(2), vec![rat(1, 2), rat(1, 2)]);
        assert!(sq.contains(&p));
        let q = ExactPoint::with_surd(vec![int(0), int(0)], int(2), vec![rat(3, 4), int(0)]);
        assert!(!sq.contains(&q));
        let bx = Body::Box { lo: vec![int(0); 3], hi: vec![int(1); 3] };
        assert!(bx.contains(&ExactPoint::rational(vec![int(1), int(0), rat(1, 2)])));
        assert!(!bx.contains(&ExactPoint::rational(vec![int(1), int(0), rat(3, 2)])));
    }

    #[test]
    fn family_validation() {
        let sq = ConvexBody::unit_square();
        assert!(Family::new(sq.clone(), FamilyKind::Translates, vec![]).is_err());
        let bad = Member::homothet(vec![int(0), int(0)], int(2));
        assert!(Family::new(sq.clone(), FamilyKind::Translates, vec![bad.clone()]).is_err());
        assert!(Family::new(sq.clone(), FamilyKind::Homothets, vec![bad]).is_ok());
        let zero = Member::homothet(vec![int(0), int(0)], int(0));
        assert!(Family::new(sq, FamilyKind::Homothets, vec![zero]).is_err());
    }

    #[test]
    fn affine_normalization_rules() {
        let f = Family::translates_at(ConvexBody::unit_square(), &[pt(0, 0), pt(1, 0), pt(3, 0)]).unwrap();
        let id = Affine2::identity();
        assert_eq!(normalize_affine(&f, &id).unwrap(), f);
        let shear = Affine2::new(int(1), int(1), int(0), int(1), pt(2, 3));
        let g = normalize_affine(&f, &shear).unwrap();
        assert_eq!(intersection_graph(&g).adj, intersection_graph(&f).adj);
        assert!(matches!(
            normalize_affine(&f, &Affine2::linear(int(1), int(1), int(1), int(1))),
            Err(Error::SingularMap)
        ));
        let disks = Family::translates_at(ConvexBody::unit_disk(), &[pt(0, 0)]).unwrap();
        assert!(matches!(normalize_affine(&disks, &shear), Err(Error::DisksNotClosedUnderAffine)));
        let rot = Affine2::linear(int(0), int(-2), int(2), int(0));
        assert!(normalize_affine(&disks, &rot).is_ok());
    }

    #[test]
    fn flipped_boxes_keep_their_graph() {
        let b = ConvexBody::axis_box(vec![int(2), int(1)]).unwrap();
        let f = Family::new(
            b,
            FamilyKind::Homothets,
            vec![
                Member::homothet(vec![int(0), int(0)], int(1)),
                Member::homothet(vec![int(2), int(0)], int(2)),
                Member::homothet(vec![int(5), int(1)], int(1)),
                Member::homothet(vec![rat(9, 2), int(3)], rat(1, 2)),
            ],
        )
        .unwrap();
        let flip = Affine2::new(int(-3), int(0), int(0), rat(1, 2), pt(1, 1));
        let g = normalize_affine(&f, &flip).unwrap();
        assert_eq!(intersection_graph(&g).adj, intersection_graph(&f).adj);
    }

    #[test]
    fn homothety_about_common_point() {
        let c = ConvexBody::unit_square();
        let big = c.realize(&Member::homothet(vec![int(0), int(0)], int(3)));
        let small = c.realize(&Member::homothet(vec![int(2), int(2)], int(1)));
        let p = big.common_point(&small).unwrap();
        let shrunk = big.homothety(&p, &rat(1, 3));
        assert!(big.contains_body(&shrunk).unwrap());
        assert!(shrunk.intersects(&small).unwrap());
    }
}
