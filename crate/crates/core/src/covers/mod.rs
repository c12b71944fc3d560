//! Covering patterns `R ⊆ ⋃ (B + v_j)` with exact verification, and the
//! piercing patterns derived from them.
//!
//! A piercing pattern stores offsets `w_j` with `R ⊆ ⋃ (−C + w_j)`, where
//! `R` is the set of relative positions `t − t_seed` a cluster member can
//! take. Then `C + t` contains `t_seed + w_j` for some `j`, so the cluster
//! is pierced by the seed translation plus the offsets (scaled by the
//! seed's scale for homothets).

mod disk;
mod search;

use std::collections::VecDeque;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Signed, Zero};

use crate::bodies::{Body, ConvexBody, Member, Shape};
use crate::error::{Error, Result};
use crate::geom::algebraic::Surd3;
use crate::geom::polygon::clip_halfplanes;
use crate::geom::scalar::{ceil, int, rat, Scalar};
use crate::geom::{minkowski_sum, reflect, Affine2, ConvexPolygon, ExactPoint, Point};
use crate::sandwich::{inscribed_hexagon, sandwich_search, Objective};

pub use search::{greedy_cover, search_cover};

use disk::{verify_disk_cover, Circle, P3};

/// The set a pattern must cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    Polygon(ConvexPolygon),
    /// A disk, or its half below the horizontal line through the center.
    Disk { center: Point, radius: Scalar, lower_half: bool },
    Box { lo: Vec<Scalar>, hi: Vec<Scalar> },
}

/// A claim `region ⊆ ⋃_j (cover + offsets_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverPattern {
    pub region: Region,
    pub cover: Body,
    pub offsets: Vec<ExactPoint>,
    /// Inner normal of the half-plane the region was cut with, if any.
    pub halfplane: Option<Point>,
}

impl CoverPattern {
    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    /// Exact check of the covering claim.
    pub fn verify(&self) -> Result<()> {
        match (&self.region, &self.cover) {
            (Region::Polygon(r), Body::Polygon(c)) => {
                let pieces = self.rational_offsets()?.iter().map(|v| c.translate(v)).collect::<Vec<_>>();
                let rest = polygon_residue(r, &pieces);
                if rest.is_empty() {
                    Ok(())
                } else {
                    Err(Error::VerificationFailed(format!("{} uncovered pieces remain", rest.len())))
                }
            }
            (Region::Box { lo, hi }, Body::Box { lo: clo, hi: chi }) => {
                let boxes: Vec<(Vec<Scalar>, Vec<Scalar>)> = self
                    .offsets
                    .iter()
                    .map(|w| {
                        if !w.is_rational() || w.dim() != lo.len() {
                            return Err(Error::VerificationFailed("box offsets must be rational".into()));
                        }
                        Ok((add(clo, &w.base), add(chi, &w.base)))
                    })
                    .collect::<Result<_>>()?;
                if box_residue(lo, hi, &boxes).is_empty() {
                    Ok(())
                } else {
                    Err(Error::VerificationFailed("box region not covered".into()))
                }
            }
            (Region::Disk { center, radius, lower_half }, Body::Disk { center: cc, radius: cr }) => {
                let region = Circle { c: p3_of_point(center), r: radius.clone() };
                let covers = self
                    .offsets
                    .iter()
                    .map(|w| {
                        let w = p3_of_exact(w)?;
                        let c = P3::new(&w.x + &Surd3::rat(cc.x.clone()), &w.y + &Surd3::rat(cc.y.clone()));
                        Ok(Circle { c, r: cr.clone() })
                    })
                    .collect::<Result<Vec<_>>>()?;
                verify_disk_cover(&region, *lower_half, &covers)
            }
            (r, c) => Err(Error::VerificationFailed(format!(
                "cannot verify a {} cover of a {:?} region",
                c.kind_name(),
                std::mem::discriminant(r)
            ))),
        }
    }

    fn rational_offsets(&self) -> Result<Vec<Point>> {
        self.offsets
            .iter()
            .map(|w| w.as_point().ok_or_else(|| Error::VerificationFailed("polygon offsets must be rational".into())))
            .collect()
    }
}

fn add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn p3_of_point(p: &Point) -> P3 {
    P3::new(Surd3::rat(p.x.clone()), Surd3::rat(p.y.clone()))
}

fn p3_of_exact(p: &ExactPoint) -> Result<P3> {
    let r = p.radicand();
    if p.dim() != 2 || !(p.is_rational() || r == int(3)) {
        return Err(Error::VerificationFailed("disk offsets must lie in Q(√3)".into()));
    }
    let (xa, xb) = p.coord(0);
    let (ya, yb) = p.coord(1);
    Ok(P3::new(Surd3::new(xa, xb), Surd3::new(ya, yb)))
}

/// Pieces of `region` not covered by `covers`; empty iff covered.
pub fn polygon_residue(region: &ConvexPolygon, covers: &[ConvexPolygon]) -> Vec<ConvexPolygon> {
    let mut rest = vec![(region.clone(), approx_bounds(region))];
    for c in covers {
        let cb = approx_bounds(c);
        let mut next = Vec::with_capacity(rest.len());
        for (p, pb) in rest {
            if apart(&pb, &cb) {
                next.push((p, pb));
            } else {
                next.extend(p.subtract(c).into_iter().map(|q| {
                    let qb = approx_bounds(&q);
                    (q, qb)
                }));
            }
        }
        rest = next;
        if rest.is_empty() {
            break;
        }
    }
    rest.into_iter().map(|(p, _)| p).collect()
}

/// Floating bounding box `[x0, y0, x1, y1]`.
fn approx_bounds(p: &ConvexPolygon) -> [f64; 4] {
    let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for v in p.vertices() {
        let (x, y) = v.to_f64();
        b = [b[0].min(x), b[1].min(y), b[2].max(x), b[3].max(y)];
    }
    b
}

/// Whether the boxes are disjoint with room to spare for rounding.
fn apart(a: &[f64; 4], b: &[f64; 4]) -> bool {
    let tol = 1e-9 * (a.iter().chain(b).map(|x| x.abs()).fold(0.0, f64::max) + 1.0);
    a[2] + tol < b[0] || b[2] + tol < a[0] || a[3] + tol < b[1] || b[3] + tol < a[1]
}

type AxisBox = (Vec<Scalar>, Vec<Scalar>);

/// Boxes of positive volume left after removing `covers` from `[lo, hi]`.
pub fn box_residue(lo: &[Scalar], hi: &[Scalar], covers: &[AxisBox]) -> Vec<AxisBox> {
    let mut rest: Vec<AxisBox> = vec![(lo.to_vec(), hi.to_vec())];
    for (clo, chi) in covers {
        let mut next = Vec::new();
        for (mut l, mut h) in rest {
            let overlaps = (0..l.len()).all(|i| clo[i] < h[i] && l[i] < chi[i]);
            if !overlaps {
                next.push((l, h));
                continue;
            }
            for i in 0..l.len() {
                if l[i] < clo[i] {
                    let mut h2 = h.clone();
                    h2[i] = clo[i].clone();
                    next.push((l.clone(), h2));
                    l[i] = clo[i].clone();
                }
                if chi[i] < h[i] {
                    let mut l2 = l.clone();
                    l2[i] = chi[i].clone();
                    next.push((l2, h.clone()));
                    h[i] = chi[i].clone();
                }
            }
        }
        rest = next;
    }
    rest
}

fn rational(points: &[Point]) -> Vec<ExactPoint> {
    points.iter().map(ExactPoint::from).collect()
}

fn is_parallelogram(c: &ConvexPolygon) -> bool {
    c.len() == 4 && c.edge(0).cross(&c.edge(2)).is_zero() && c.edge(1).cross(&c.edge(3)).is_zero()
}

fn centered(s: &ConvexPolygon) -> Result<(ConvexPolygon, Point)> {
    let c = s.symmetry_center().ok_or(Error::NotCentrallySymmetric)?;
    Ok((s.translate(&-&c), c))
}

/// `p₁ + p₂, …, p₆ + p₁`: midpoints of the sides of `2H`.
fn side_sums(h: &[Point; 6]) -> [Point; 6] {
    std::array::from_fn(|i| &h[i] + &h[(i + 1) % 6])
}

/// Cover of `2S` by seven translates of `S` (four for parallelograms),
/// with `S` moved to be centered at the origin.
pub fn seven_cover(s: &ConvexPolygon) -> Result<CoverPattern> {
    let (s0, _) = centered(s)?;
    let region = Region::Polygon(s0.scale(&int(2)));
    let cover = Body::Polygon(s0.clone());
    if is_parallelogram(&s0) {
        let (e1, e2) = (s0.edge(0).scale(&rat(1, 2)), s0.edge(1).scale(&rat(1, 2)));
        let offsets = vec![&e1 + &e2, &e1 - &e2, &e2 - &e1, -&(&e1 + &e2)];
        let p = CoverPattern { region, cover, offsets: rational(&offsets), halfplane: None };
        p.verify()?;
        return Ok(p);
    }
    let mut last = Error::VerificationFailed("no chord direction produced a cover".into());
    for d in chord_directions(&s0) {
        let Some(h) = inscribed_hexagon(&s0, &d) else { continue };
        let mut offsets = vec![Point::origin()];
        offsets.extend(side_sums(&h));
        let p = CoverPattern { region: region.clone(), cover: cover.clone(), offsets: rational(&offsets), halfplane: None };
        match p.verify() {
            Ok(()) => return Ok(p),
            Err(e) => last = e,
        }
    }
    Err(last)
}

fn chord_directions(s0: &ConvexPolygon) -> Vec<Point> {
    let mut dirs = vec![Point::new(int(1), int(0)), Point::new(int(0), int(1))];
    dirs.extend(s0.vertices().iter().cloned());
    dirs
}

/// Cover of `2S ∩ {n·x ≥ 0}` by at most four translates of `S`, where
/// `n` is the inner normal of the half-plane.
pub fn halfplane_four_cover(s: &ConvexPolygon, inner_normal: &Point) -> Result<CoverPattern> {
    if inner_normal.is_zero() {
        return Err(Error::DegenerateInput("zero half-plane normal".into()));
    }
    let (s0, _) = centered(s)?;
    let half_region = |k: &ConvexPolygon| {
        clip_halfplanes(k.vertices(), &[(-inner_normal, Scalar::zero())]).polygon()
    };
    let region_poly = half_region(&s0.scale(&int(2))).expect("half of a centered body has area");
    let region = Region::Polygon(region_poly);
    let cover = Body::Polygon(s0.clone());
    let make = |offsets: Vec<Point>| CoverPattern {
        region: region.clone(),
        cover: cover.clone(),
        offsets: rational(&offsets),
        halfplane: Some(inner_normal.clone()),
    };
    if is_parallelogram(&s0) {
        let (e1, e2) = (s0.edge(0).scale(&rat(1, 2)), s0.edge(1).scale(&rat(1, 2)));
        for (a, b) in [(&e1, &e2), (&e2, &e1)] {
            if inner_normal.dot(a).is_zero() {
                let b = if inner_normal.dot(b).is_positive() { b.clone() } else { -b };
                let p = make(vec![&b + a, &b - a]);
                p.verify()?;
                return Ok(p);
            }
        }
        let p = make(vec![&e1 + &e2, &e1 - &e2, &e2 - &e1, -&(&e1 + &e2)]);
        p.verify()?;
        return Ok(p);
    }
    let d = inner_normal.perp();
    let mut last = Error::VerificationFailed("no chord produced a half cover".into());
    for dir in [d.clone(), -&d] {
        let Some(h) = inscribed_hexagon(&s0, &dir) else { continue };
        let sums = side_sums(&h);
        // p₁ and p₆ lie left of the chord direction
        let left = inner_normal.dot(&dir.perp()).is_positive();
        let picked = if left {
            vec![Point::origin(), sums[4].clone(), sums[5].clone(), sums[0].clone()]
        } else {
            vec![Point::origin(), sums[1].clone(), sums[2].clone(), sums[3].clone()]
        };
        let p = make(picked);
        match p.verify() {
            Ok(()) => return Ok(p),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// `√3·(cos kπ/3, sin kπ/3)` for `k = 0…5`, scaled by `r`.
fn hexagonal_ring(r: &Scalar) -> Vec<ExactPoint> {
    let z = Scalar::zero();
    let h = rat(1, 2);
    let raw = [
        (Surd3::new(z.clone(), int(1)), Surd3::zero()),
        (Surd3::new(z.clone(), h.clone()), Surd3::rat(rat(3, 2))),
        (Surd3::new(z.clone(), -&h), Surd3::rat(rat(3, 2))),
        (Surd3::new(z.clone(), int(-1)), Surd3::zero()),
        (Surd3::new(z.clone(), -&h), Surd3::rat(rat(-3, 2))),
        (Surd3::new(z, h), Surd3::rat(rat(-3, 2))),
    ];
    raw.iter().map(|(x, y)| ExactPoint::from_surd3(&x.scale(r), &y.scale(r))).collect()
}

/// Seven disks of radius `r` covering the concentric disk of radius `2r`.
pub fn disk_seven_cover(r: &Scalar) -> Result<CoverPattern> {
    let mut offsets = vec![ExactPoint::from(Point::origin())];
    offsets.extend(hexagonal_ring(r));
    let p = CoverPattern {
        region: Region::Disk { center: Point::origin(), radius: r * int(2), lower_half: false },
        cover: Body::Disk { center: Point::origin(), radius: r.clone() },
        offsets,
        halfplane: None,
    };
    p.verify()?;
    Ok(p)
}

/// Four disks of radius `r` covering the lower half of the disk of radius
/// `2r`: the center and `r·{(0, −√3), (±3/2, −√3/2)}`.
pub fn disk_four_cover(r: &Scalar) -> Result<CoverPattern> {
    let z = Scalar::zero();
    let raw = [
        (Surd3::zero(), Surd3::zero()),
        (Surd3::zero(), Surd3::new(z.clone(), int(-1))),
        (Surd3::rat(rat(3, 2)), Surd3::new(z.clone(), rat(-1, 2))),
        (Surd3::rat(rat(-3, 2)), Surd3::new(z, rat(-1, 2))),
    ];
    let offsets = raw.iter().map(|(x, y)| ExactPoint::from_surd3(&x.scale(r), &y.scale(r))).collect();
    let p = CoverPattern {
        region: Region::Disk { center: Point::origin(), radius: r * int(2), lower_half: true },
        cover: Body::Disk { center: Point::origin(), radius: r.clone() },
        offsets,
        halfplane: Some(Point::new(int(0), int(-1))),
    };
    p.verify()?;
    Ok(p)
}

/// Corner offsets `{0, s_i}` per axis; the last axis fixed at `0` when
/// `halfspace` is set (region `x_d ≤ 0`).
fn box_offsets(sides: &[Scalar], halfspace: bool) -> Vec<ExactPoint> {
    let d = sides.len();
    let free = if halfspace { d - 1 } else { d };
    (0..1usize << free)
        .map(|mask| {
            let coords = (0..d)
                .map(|i| if i < free && mask >> i & 1 == 1 { sides[i].clone() } else { Scalar::zero() })
                .collect();
            ExactPoint::rational(coords)
        })
        .collect()
}

/// Piercing-form pattern for boxes `∏[0, s_i]`: `C − C` (or its lower half)
/// covered by translates of `−C`.
pub fn box_cover(sides: &[Scalar], halfspace: bool) -> Result<CoverPattern> {
    let lo: Vec<Scalar> = sides.iter().map(|s| -s).collect();
    let mut hi: Vec<Scalar> = sides.to_vec();
    if halfspace {
        *hi.last_mut().expect("d ≥ 2") = Scalar::zero();
    }
    let p = CoverPattern {
        region: Region::Box { lo, hi },
        cover: Body::Box { lo: sides.iter().map(|s| -s).collect(), hi: vec![Scalar::zero(); sides.len()] },
        offsets: box_offsets(sides, halfspace),
        halfplane: None,
    };
    p.verify()?;
    Ok(p)
}

fn unit_triangle() -> ConvexPolygon {
    ConvexPolygon::new(vec![Point::origin(), Point::new(int(1), int(0)), Point::new(int(0), int(1))]).expect("valid")
}

/// `(T − T) ∩ {y ≤ 0}` for the unit right triangle `T`.
pub fn unit_trapezoid() -> ConvexPolygon {
    ConvexPolygon::new(vec![
        Point::new(int(-1), int(0)),
        Point::new(int(0), int(-1)),
        Point::new(int(1), int(-1)),
        Point::new(int(1), int(0)),
    ])
    .expect("valid")
}

/// Offsets `q` with the unit trapezoid inside `⋃ (−T + q)`.
pub fn unit_trapezoid_offsets() -> Vec<Point> {
    let h = rat(1, 2);
    vec![
        Point::origin(),
        Point::new(int(1), int(0)),
        Point::new(h.clone(), int(0)),
        Point::new(int(1), -&h),
        Point::new(h.clone(), -&h),
    ]
}

/// Normal form `C = v₀ + L·T` of a triangle, `v₀` its lowest-leftmost vertex.
pub struct TriangleFrame {
    pub origin: Point,
    pub linear: Affine2,
}

impl TriangleFrame {
    pub fn of(t: &ConvexPolygon) -> Result<TriangleFrame> {
        if t.len() != 3 {
            return Err(Error::DegenerateInput(format!("expected a triangle, got {} vertices", t.len())));
        }
        let i = t.bottom_index();
        let v0 = t.vertex(i).clone();
        let linear = Affine2::from_columns(&(t.vertex(i + 1) - &v0), &(t.vertex(i + 2) - &v0));
        Ok(TriangleFrame { origin: v0, linear })
    }

    /// `v₀ + L·q`.
    pub fn offset(&self, q: &Point) -> Point {
        &self.origin + &self.linear.apply_linear(q)
    }

    /// The functional `x ↦ (L⁻¹x)_y`, as a vector.
    pub fn up(&self) -> Point {
        let inv = self.linear.inverse().expect("nondegenerate triangle");
        Point::new(inv.m[2].clone(), inv.m[3].clone())
    }
}

/// Piercing-form cover of `(C − C) ∩ {f ≤ 0}` by five translates of `−C`,
/// where `f` is the frame's up functional.
pub fn triangle_trapezoid_cover(t: &ConvexPolygon) -> Result<CoverPattern> {
    let frame = TriangleFrame::of(t)?;
    let region = unit_trapezoid().map(&frame.linear)?;
    let offsets: Vec<Point> = unit_trapezoid_offsets().iter().map(|q| frame.offset(q)).collect();
    let p = CoverPattern {
        region: Region::Polygon(region),
        cover: Body::Polygon(reflect(t)),
        offsets: rational(&offsets),
        halfplane: Some(-&frame.up()),
    };
    p.verify()?;
    Ok(p)
}

static TRIANGLE_HEXAGON: OnceLock<Vec<Point>> = OnceLock::new();

/// Offsets `q` covering `T − T` by translates of `−T`, found once and
/// cached: the hexagon splits into six unit triangles, and each is covered
/// by the fewest half-grid translates an exhaustive search finds.
pub fn unit_triangle_hexagon_offsets() -> &'static [Point] {
    TRIANGLE_HEXAGON.get_or_init(|| {
        let t = unit_triangle();
        let neg = reflect(&t);
        let pieces = [
            t.clone(),
            t.translate(&Point::new(int(-1), int(0))),
            t.translate(&Point::new(int(0), int(-1))),
            neg.clone(),
            neg.translate(&Point::new(int(1), int(0))),
            neg.translate(&Point::new(int(0), int(1))),
        ];
        let mut out: Vec<Point> = Vec::new();
        for piece in &pieces {
            let cands = search::grid_candidates(piece, &neg, &rat(1, 2));
            let found = (1..=3)
                .find_map(|k| search_cover(piece, &neg, &cands, k))
                .expect("three half-grid translates cover a unit triangle");
            for q in found {
                if !out.contains(&q) {
                    out.push(q);
                }
            }
        }
        out
    })
}

/// Piercing-form cover of `C − C` by translates of `−C` for a triangle.
pub fn triangle_hexagon_cover(t: &ConvexPolygon) -> Result<CoverPattern> {
    let frame = TriangleFrame::of(t)?;
    let offsets: Vec<Point> = unit_triangle_hexagon_offsets().iter().map(|q| frame.offset(q)).collect();
    let p = CoverPattern {
        region: Region::Polygon(minkowski_sum(t, &reflect(t))),
        cover: Body::Polygon(reflect(t)),
        offsets: rational(&offsets),
        halfplane: None,
    };
    p.verify()?;
    Ok(p)
}

/// Piercing-form cover of `C − C` by translates of `−C` for any polygon,
/// through a grid of `⌈2λ₁⌉·⌈2λ₂⌉` translates of `−P` over `Q − Q`.
pub fn sandwich_grid_cover(c: &ConvexPolygon) -> Result<CoverPattern> {
    let pair = sandwich_search(c, Objective::Kappa)?;
    let (u, v) = (&pair.u, &pair.v);
    let p_center = &pair.p_corner + &(u + v).scale(&rat(1, 2));
    let two = int(2);
    let (n1, n2) = (ceil(&(&pair.lambda.0 * &two)), ceil(&(&pair.lambda.1 * &two)));
    let (n1, n2) = (i64::try_from(n1).unwrap_or(i64::MAX), i64::try_from(n2).unwrap_or(i64::MAX));
    let mut offsets = Vec::new();
    for k in 0..n1 {
        for l in 0..n2 {
            let a = -&pair.lambda.0 + int(k) + rat(1, 2);
            let b = -&pair.lambda.1 + int(l) + rat(1, 2);
            let cell = &u.scale(&a) + &v.scale(&b);
            offsets.push(&cell + &p_center);
        }
    }
    let p = CoverPattern {
        region: Region::Polygon(minkowski_sum(c, &reflect(c))),
        cover: Body::Polygon(reflect(c)),
        offsets: rational(&offsets),
        halfplane: None,
    };
    p.verify()?;
    Ok(p)
}

/// Cover of `C − C` by translates of `C`, sized by base type: symmetric
/// polygons and disks 7 (parallelograms 4), boxes `2^d`, triangles at most
/// 12, other polygons at most 16. Offsets are for `C` itself.
pub fn homothet_cover(c: &ConvexBody) -> Result<CoverPattern> {
    let p = homothet_pattern(c)?.cover;
    // C − C is symmetric, so R ⊆ ⋃(−C + w) gives R ⊆ ⋃(C − w)
    let offsets = p.offsets.iter().map(|w| w.scale(&int(-1))).collect();
    let cover = match &c.shape {
        Shape::Polygon(poly) => Body::Polygon(poly.clone()),
        Shape::Disk { center, radius } => Body::Disk { center: center.clone(), radius: radius.clone() },
        Shape::Box { sides } => Body::Box { lo: vec![Scalar::zero(); sides.len()], hi: sides.clone() },
    };
    let out = CoverPattern { region: p.region, cover, offsets, halfplane: None };
    out.verify()?;
    Ok(out)
}

/// Which construction a piercing pattern came from.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum PatternKind {
    Parallelogram,
    CentrallySymmetric,
    Triangle,
    Disk,
    Box,
    General,
}

impl PatternKind {
    pub fn name(self) -> &'static str {
        match self {
            PatternKind::Parallelogram => "parallelogram",
            PatternKind::CentrallySymmetric => "centrally-symmetric",
            PatternKind::Triangle => "triangle",
            PatternKind::Disk => "disk",
            PatternKind::Box => "box",
            PatternKind::General => "general",
        }
    }
}

/// A verified piercing pattern for one base body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiercePattern {
    pub kind: PatternKind,
    /// Seeds are taken topmost with respect to this functional.
    pub up: Vec<Scalar>,
    /// Verified claim `R ⊆ ⋃ (−C + w_j)`.
    pub cover: CoverPattern,
}

impl PiercePattern {
    pub fn len(&self) -> usize {
        self.cover.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cover.is_empty()
    }

    pub fn offsets(&self) -> &[ExactPoint] {
        &self.cover.offsets
    }

    /// `t + s·w_j` for a seed member.
    pub fn points_for(&self, seed: &Member) -> Vec<ExactPoint> {
        (0..self.len()).map(|j| self.point_for(seed, j)).collect()
    }

    pub fn point_for(&self, seed: &Member, j: usize) -> ExactPoint {
        self.cover.offsets[j].scale(&seed.s).translate(&seed.t)
    }
}

fn lift(c: Point, v: &ExactPoint) -> ExactPoint {
    v.translate(&[c.x, c.y])
}

fn upward() -> Vec<Scalar> {
    vec![Scalar::zero(), Scalar::one()]
}

/// Recently built patterns, keyed by base.
type PatternCache = Mutex<VecDeque<(ConvexBody, PiercePattern)>>;

const CACHE_SIZE: usize = 16;

static TRANSLATE_PATTERNS: PatternCache = Mutex::new(VecDeque::new());
static HOMOTHET_PATTERNS: PatternCache = Mutex::new(VecDeque::new());

fn cached(cache: &PatternCache, base: &ConvexBody, build: fn(&ConvexBody) -> Result<PiercePattern>) -> Result<PiercePattern> {
    let hit = cache.lock().expect("pattern cache").iter().find(|(b, _)| b == base).map(|(_, p)| p.clone());
    if let Some(p) = hit {
        return Ok(p);
    }
    let p = build(base)?;
    let mut c = cache.lock().expect("pattern cache");
    if c.len() == CACHE_SIZE {
        c.pop_front();
    }
    c.push_back((base.clone(), p.clone()));
    Ok(p)
}

/// Pattern for the topmost-seed greedy on translates.
pub fn translate_pattern(base: &ConvexBody) -> Result<PiercePattern> {
    cached(&TRANSLATE_PATTERNS, base, build_translate_pattern)
}

/// Pattern for the smallest-first greedy on homothets.
pub fn homothet_pattern(base: &ConvexBody) -> Result<PiercePattern> {
    cached(&HOMOTHET_PATTERNS, base, build_homothet_pattern)
}

fn build_translate_pattern(base: &ConvexBody) -> Result<PiercePattern> {
    match &base.shape {
        Shape::Disk { center, radius } => {
            let nat = disk_four_cover(radius)?;
            let offsets = nat.offsets.iter().map(|v| lift(center.clone(), v)).collect();
            finish(PatternKind::Disk, upward(), Region::Disk { center: Point::origin(), radius: radius * int(2), lower_half: true }, base, offsets)
        }
        Shape::Box { sides } => {
            let nat = box_cover(sides, true)?;
            let mut up = vec![Scalar::zero(); sides.len()];
            *up.last_mut().expect("d ≥ 2") = Scalar::one();
            Ok(PiercePattern { kind: PatternKind::Box, up, cover: nat })
        }
        Shape::Polygon(p) if p.len() == 3 => {
            let frame = TriangleFrame::of(p)?;
            let up = frame.up();
            Ok(PiercePattern { kind: PatternKind::Triangle, up: vec![up.x, up.y], cover: triangle_trapezoid_cover(p)? })
        }
        Shape::Polygon(p) if p.is_centrally_symmetric() => {
            let (s0, c) = centered(p)?;
            let up = if is_parallelogram(&s0) { s0.edge(0).perp() } else { Point::new(int(0), int(1)) };
            let nat = halfplane_four_cover(&s0, &-&up)?;
            let offsets = nat.offsets.iter().map(|v| lift(c.clone(), v)).collect();
            let region = clip_halfplanes(s0.scale(&int(2)).vertices(), &[(up.clone(), Scalar::zero())])
                .polygon()
                .expect("half of a centered body");
            let kind = if is_parallelogram(&s0) { PatternKind::Parallelogram } else { PatternKind::CentrallySymmetric };
            finish_from(Some(&nat), kind, vec![up.x, up.y], Region::Polygon(region), base, offsets)
        }
        Shape::Polygon(p) => Err(Error::UnsupportedBase {
            method: "greedy",
            base: format!("asymmetric polygon with {} vertices", p.len()),
        }),
    }
}

fn build_homothet_pattern(base: &ConvexBody) -> Result<PiercePattern> {
    match &base.shape {
        Shape::Disk { center, radius } => {
            let nat = disk_seven_cover(radius)?;
            let offsets = nat.offsets.iter().map(|v| lift(center.clone(), v)).collect();
            finish(PatternKind::Disk, upward(), Region::Disk { center: Point::origin(), radius: radius * int(2), lower_half: false }, base, offsets)
        }
        Shape::Box { sides } => {
            let mut up = vec![Scalar::zero(); sides.len()];
            *up.last_mut().expect("d ≥ 2") = Scalar::one();
            Ok(PiercePattern { kind: PatternKind::Box, up, cover: box_cover(sides, false)? })
        }
        Shape::Polygon(p) if p.len() == 3 => {
            Ok(PiercePattern { kind: PatternKind::Triangle, up: upward(), cover: triangle_hexagon_cover(p)? })
        }
        Shape::Polygon(p) if p.is_centrally_symmetric() => {
            let (s0, c) = centered(p)?;
            let nat = seven_cover(&s0)?;
            let offsets = nat.offsets.iter().map(|v| lift(c.clone(), v)).collect();
            let kind = if is_parallelogram(&s0) { PatternKind::Parallelogram } else { PatternKind::CentrallySymmetric };
            finish_from(Some(&nat), kind, upward(), Region::Polygon(s0.scale(&int(2))), base, offsets)
        }
        Shape::Polygon(p) => {
            Ok(PiercePattern { kind: PatternKind::General, up: upward(), cover: sandwich_grid_cover(p)? })
        }
    }
}

fn neg_body(base: &ConvexBody) -> Body {
    match &base.shape {
        Shape::Polygon(p) => Body::Polygon(reflect(p)),
        Shape::Disk { center, radius } => Body::Disk { center: -center, radius: radius.clone() },
        Shape::Box { sides } => Body::Box { lo: sides.iter().map(|s| -s).collect(), hi: vec![Scalar::zero(); sides.len()] },
    }
}

fn finish(kind: PatternKind, up: Vec<Scalar>, region: Region, base: &ConvexBody, offsets: Vec<ExactPoint>) -> Result<PiercePattern> {
    finish_from(None, kind, up, region, base, offsets)
}

/// Like [`finish`], but skips the check when the claim repeats `known`,
/// an already verified cover with the same region and pieces.
fn finish_from(
    known: Option<&CoverPattern>,
    kind: PatternKind,
    up: Vec<Scalar>,
    region: Region,
    base: &ConvexBody,
    offsets: Vec<ExactPoint>,
) -> Result<PiercePattern> {
    let cover = CoverPattern { region, cover: neg_body(base), offsets, halfplane: None };
    if !known.is_some_and(|k| same_claim(k, &cover)) {
        cover.verify()?;
    }
    Ok(PiercePattern { kind, up, cover })
}

fn same_polygon(a: &ConvexPolygon, b: &ConvexPolygon) -> bool {
    a.len() == b.len() && a.rotated(a.bottom_index()) == b.rotated(b.bottom_index())
}

fn same_claim(a: &CoverPattern, b: &CoverPattern) -> bool {
    match (&a.region, &a.cover, &b.region, &b.cover) {
        (Region::Polygon(ra), Body::Polygon(ca), Region::Polygon(rb), Body::Polygon(cb)) => {
            a.len() == b.len()
                && same_polygon(ra, rb)
                && a.offsets.iter().zip(&b.offsets).all(|(u, v)| match (u.as_point(), v.as_point()) {
                    (Some(u), Some(v)) => same_polygon(&ca.translate(&u), &cb.translate(&v)),
                    _ => false,
                })
        }
        _ => false,
    }
}

/// Bound on `κ(C − C, C)` from volume arguments: `(2d)^d` in general and
/// `5^d` for symmetric bodies, improved by the translative covering
/// density `θ_T` when given.
pub fn kappa_upper_bound(d: u32, centrally_symmetric: bool, theta_t: Option<&Scalar>) -> Scalar {
    let pow = |b: i64| Scalar::from_integer(num_bigint::BigInt::from(b).pow(d));
    if centrally_symmetric {
        let base = pow(5);
        match theta_t {
            Some(t) => base.min(pow(3) * t),
            None => base,
        }
    } else {
        let base = pow(2 * d as i64);
        match theta_t {
            Some(t) => base.min(pow(2) / int(d as i64 + 1) * pow(3) * int(3) * t),
            None => base,
        }
    }
}

/// Result of asking whether four translates of `−T` cover the unit trapezoid.
pub fn trapezoid_four_search(step: &Scalar) -> Option<Vec<Point>> {
    let t = reflect(&unit_triangle());
    let region = unit_trapezoid();
    let cands = search::grid_candidates(&region, &t, step);
    search_cover(&region, &t, &cands, 4)
}

#[cfg(test)]
mod tests;
