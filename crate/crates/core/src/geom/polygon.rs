//! Convex polygons with exact predicates, clipping and Minkowski sums.

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::affine::Affine2;
use super::point::{orient, orient_sign, Point};
use super::scalar::{half, Scalar};
use crate::error::{Error, Result};

/// Strictly convex polygon, vertices counterclockwise, no three collinear.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl TryFrom<Vec<Point>> for ConvexPolygon {
    type Error = Error;
    fn try_from(v: Vec<Point>) -> Result<Self> {
        ConvexPolygon::from_points(&v)
    }
}

impl From<ConvexPolygon> for Vec<Point> {
    fn from(p: ConvexPolygon) -> Self {
        p.vertices
    }
}

/// Result of intersecting two closed convex polygons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Clipped {
    Empty,
    Point(Point),
    Segment(Point, Point),
    Polygon(ConvexPolygon),
}

impl Clipped {
    pub fn is_empty(&self) -> bool {
        matches!(self, Clipped::Empty)
    }

    pub fn polygon(self) -> Option<ConvexPolygon> {
        match self {
            Clipped::Polygon(p) => Some(p),
            _ => None,
        }
    }

    /// Some point of the set, if nonempty.
    pub fn any_point(&self) -> Option<Point> {
        match self {
            Clipped::Empty => None,
            Clipped::Point(p) | Clipped::Segment(p, _) => Some(p.clone()),
            Clipped::Polygon(p) => Some(p.vertices[0].clone()),
        }
    }

    pub fn points(&self) -> Vec<Point> {
        match self {
            Clipped::Empty => vec![],
            Clipped::Point(p) => vec![p.clone()],
            Clipped::Segment(a, b) => vec![a.clone(), b.clone()],
            Clipped::Polygon(p) => p.vertices.clone(),
        }
    }
}

impl ConvexPolygon {
    /// Validates a counterclockwise strictly convex vertex list.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::DegenerateInput(format!("{n} vertices")));
        }
        for i in 0..n {
            let (a, b, c) = (&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
            if orient_sign(a, b, c) <= 0 {
                return Err(Error::DegenerateInput(
                    "vertices not strictly convex and counterclockwise".into(),
                ));
            }
        }
        // Local convexity everywhere still admits a star that winds twice.
        let mut turn = Scalar::zero();
        for i in 0..n {
            turn += vertices[i].cross(&vertices[(i + 1) % n]);
        }
        let p = ConvexPolygon { vertices };
        if !turn.is_positive() || !p.winds_once() {
            return Err(Error::DegenerateInput("polygon winds more than once".into()));
        }
        Ok(p)
    }

    fn winds_once(&self) -> bool {
        // Edge directions of a convex polygon cross each half-turn once.
        let n = self.vertices.len();
        let mut flips = 0;
        for i in 0..n {
            let e0 = self.edge(i);
            let e1 = self.edge((i + 1) % n);
            if upper(&e0) != upper(&e1) {
                flips += 1;
            }
        }
        flips <= 2
    }

    /// Convex hull of arbitrary points; collinear and repeated inputs are fine.
    pub fn from_points(points: &[Point]) -> Result<Self> {
        convex_hull(points)
    }

    /// Axis rectangle `[x0, x1] × [y0, y1]`.
    pub fn rect(x0: Scalar, y0: Scalar, x1: Scalar, y1: Scalar) -> Result<Self> {
        ConvexPolygon::new(vec![
            Point::new(x0.clone(), y0.clone()),
            Point::new(x1.clone(), y0),
            Point::new(x1, y1.clone()),
            Point::new(x0, y1),
        ])
    }

    /// Parallelogram `center + a·u + b·v` for `a, b ∈ [-1/2, 1/2]`.
    pub fn parallelogram(center: &Point, u: &Point, v: &Point) -> Result<Self> {
        let h = half();
        let (hu, hv) = (u.scale(&h), v.scale(&h));
        let pts = [
            &(center - &hu) - &hv,
            &(center + &hu) - &hv,
            &(center + &hu) + &hv,
            &(center - &hu) + &hv,
        ];
        ConvexPolygon::from_points(&pts)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i % self.vertices.len()]
    }

    /// Edge vector from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> Point {
        self.vertex(i + 1) - self.vertex(i)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    pub fn translate(&self, t: &Point) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|v| v + t).collect(),
        }
    }

    /// `k·P` for `k > 0`.
    pub fn scale(&self, k: &Scalar) -> ConvexPolygon {
        assert!(k.is_positive(), "scale factor must be positive");
        ConvexPolygon {
            vertices: self.vertices.iter().map(|v| v.scale(k)).collect(),
        }
    }

    /// `k·P + t`.
    pub fn scale_translate(&self, k: &Scalar, t: &Point) -> ConvexPolygon {
        assert!(k.is_positive(), "scale factor must be positive");
        if k.is_one() {
            return self.translate(t);
        }
        ConvexPolygon {
            vertices: self.vertices.iter().map(|v| &v.scale(k) + t).collect(),
        }
    }

    /// Image under a nonsingular affine map, reoriented counterclockwise.
    pub fn map(&self, m: &Affine2) -> Result<ConvexPolygon> {
        let det = m.det();
        if det.is_zero() {
            return Err(Error::SingularMap);
        }
        let mut vertices: Vec<Point> = self.vertices.iter().map(|v| m.apply(v)).collect();
        if det.is_negative() {
            vertices.reverse();
        }
        Ok(ConvexPolygon { vertices })
    }

    pub fn reflect(&self) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|v| -v).collect(),
        }
    }

    /// Twice the signed area; positive for valid polygons.
    pub fn area2(&self) -> Scalar {
        let mut s = Scalar::zero();
        for (a, b) in self.edges() {
            s += a.cross(b);
        }
        s
    }

    pub fn area(&self) -> Scalar {
        self.area2() * half()
    }

    /// Closed containment.
    pub fn contains_point(&self, p: &Point) -> bool {
        self.edges().all(|(a, b)| !orient(a, b, p).is_negative())
    }

    /// Interior containment.
    pub fn strictly_contains(&self, p: &Point) -> bool {
        self.edges().all(|(a, b)| orient(a, b, p).is_positive())
    }

    pub fn contains_polygon(&self, other: &ConvexPolygon) -> bool {
        other.vertices.iter().all(|v| self.contains_point(v))
    }

    /// Closed intersection test by separating axes over both edge normals.
    pub fn intersects(&self, other: &ConvexPolygon) -> bool {
        !separated(self, other) && !separated(other, self)
    }

    /// Largest value of `dir · x` over the polygon.
    pub fn support(&self, dir: &Point) -> Scalar {
        self.vertices
            .iter()
            .map(|v| v.dot(dir))
            .max()
            .expect("nonempty")
    }

    /// Vertex maximizing `dir · x`; ties go to the lowest index.
    pub fn support_vertex(&self, dir: &Point) -> &Point {
        let mut best = &self.vertices[0];
        let mut bv = best.dot(dir);
        for v in &self.vertices[1..] {
            let d = v.dot(dir);
            if d > bv {
                bv = d;
                best = v;
            }
        }
        best
    }

    /// Projection extent onto `dir`.
    pub fn extent(&self, dir: &Point) -> (Scalar, Scalar) {
        let (lo, hi) = super::scalar::min_max(self.vertices.iter().map(|v| v.dot(dir)).collect::<Vec<_>>().iter())
            .expect("nonempty");
        (lo, hi)
    }

    /// Axis-aligned bounding box as `(min, max)` corners.
    pub fn bbox(&self) -> (Point, Point) {
        let (x0, x1) = super::scalar::min_max(self.vertices.iter().map(|v| &v.x)).expect("nonempty");
        let (y0, y1) = super::scalar::min_max(self.vertices.iter().map(|v| &v.y)).expect("nonempty");
        (Point::new(x0, y0), Point::new(x1, y1))
    }

    /// Center of symmetry if the polygon is centrally symmetric.
    pub fn symmetry_center(&self) -> Option<Point> {
        let n = self.vertices.len();
        if n % 2 == 1 {
            return None;
        }
        let h = n / 2;
        let c = self.vertices[0].midpoint(&self.vertices[h]);
        for i in 1..h {
            if self.vertices[i].midpoint(&self.vertices[i + h]) != c {
                return None;
            }
        }
        Some(c)
    }

    pub fn is_centrally_symmetric(&self) -> bool {
        self.symmetry_center().is_some()
    }

    /// Mean of the vertices, an interior point.
    pub fn vertex_mean(&self) -> Point {
        let n = Scalar::from_integer((self.vertices.len() as i64).into());
        let mut s = Point::origin();
        for v in &self.vertices {
            s = &s + v;
        }
        Point::new(&s.x / &n, &s.y / &n)
    }

    /// Index of the lowest vertex, leftmost among ties.
    pub fn bottom_index(&self) -> usize {
        (0..self.vertices.len())
            .min_by(|&i, &j| {
                let (a, b) = (&self.vertices[i], &self.vertices[j]);
                a.y.cmp(&b.y).then_with(|| a.x.cmp(&b.x))
            })
            .expect("nonempty")
    }

    /// Same polygon with the vertex list rotated to start at `i`.
    pub fn rotated(&self, i: usize) -> ConvexPolygon {
        let mut vertices = self.vertices.clone();
        vertices.rotate_left(i % self.vertices.len());
        ConvexPolygon { vertices }
    }

    /// `self \ cutter` as convex pieces of positive area (closures).
    pub fn subtract(&self, cutter: &ConvexPolygon) -> Vec<ConvexPolygon> {
        let mut out = Vec::new();
        let mut rest = self.vertices.clone();
        for (a, b) in cutter.edges() {
            if rest.is_empty() {
                break;
            }
            let (nx, ny, c) = edge_line(a, b);
            let (inside, outside) = split_loop(&rest, |p| &nx * &p.x + &ny * &p.y - &c);
            // one cut of a strictly convex loop leaves no collinear triples
            if outside.len() >= 3 {
                out.push(ConvexPolygon { vertices: outside });
            }
            rest = inside;
        }
        out
    }
}

/// `(nx, ny, c)` with integer entries and `nx·x + ny·y − c` a positive
/// multiple of `orient(a, b, ·)`.
fn edge_line(a: &Point, b: &Point) -> (Scalar, Scalar, Scalar) {
    let nx = &a.y - &b.y;
    let ny = &b.x - &a.x;
    let c = &nx * &a.x + &ny * &a.y;
    let l = nx.denom().lcm(ny.denom()).lcm(c.denom());
    let l = Scalar::from_integer(l);
    (nx * &l, ny * &l, c * l)
}

fn upper(e: &Point) -> bool {
    e.y.is_positive() || (e.y.is_zero() && e.x.is_positive())
}

fn separated(a: &ConvexPolygon, b: &ConvexPolygon) -> bool {
    // Some edge line of `a` with `b` strictly on its outer side.
    a.edges()
        .any(|(p, q)| b.vertices.iter().all(|v| orient(p, q, v).is_negative()))
}

/// One Sutherland-Hodgman pass over a convex loop returning the parts
/// `{f ≥ 0}` and `{f ≤ 0}`, `f` affine.
fn split_loop<F: Fn(&Point) -> Scalar>(poly: &[Point], f: F) -> (Vec<Point>, Vec<Point>) {
    let n = poly.len();
    let vals: Vec<Scalar> = poly.iter().map(&f).collect();
    if vals.iter().all(|v| !v.is_negative()) {
        return (poly.to_vec(), vec![]);
    }
    if vals.iter().all(|v| !v.is_positive()) {
        return (vec![], poly.to_vec());
    }
    let (mut pos, mut neg) = (Vec::with_capacity(n + 1), Vec::with_capacity(n + 1));
    for i in 0..n {
        let j = (i + 1) % n;
        let (p, q) = (&poly[i], &poly[j]);
        let (fp, fq) = (&vals[i], &vals[j]);
        if !fp.is_negative() {
            pos.push(p.clone());
        }
        if !fp.is_positive() {
            neg.push(p.clone());
        }
        if (fp.is_negative() && fq.is_positive()) || (fp.is_positive() && fq.is_negative()) {
            let t = fp / (fp - fq);
            let x = p + &(q - p).scale(&t);
            pos.push(x.clone());
            neg.push(x);
        }
    }
    (dedup_loop(pos), dedup_loop(neg))
}

/// Sutherland-Hodgman step: keeps `{f ≥ 0}` of a convex point loop, `f` affine.
pub fn clip_keep<F: Fn(&Point) -> Scalar>(poly: &[Point], f: F) -> Vec<Point> {
    let n = poly.len();
    if n == 0 {
        return vec![];
    }
    let vals: Vec<Scalar> = poly.iter().map(&f).collect();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (p, q) = (&poly[i], &poly[j]);
        let (fp, fq) = (&vals[i], &vals[j]);
        if !fp.is_negative() {
            out.push(p.clone());
        }
        if (fp.is_negative() && fq.is_positive()) || (fp.is_positive() && fq.is_negative()) {
            let t = fp / (fp - fq);
            out.push(p + &(q - p).scale(&t));
        }
    }
    dedup_loop(out)
}

fn dedup_loop(mut pts: Vec<Point>) -> Vec<Point> {
    pts.dedup();
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    pts
}

/// Drops collinear points from a convex loop; `None` if no area remains.
fn solid(pts: Vec<Point>) -> Option<ConvexPolygon> {
    let pts = dedup_loop(pts);
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len();
    let kept: Vec<Point> = (0..n)
        .filter(|&i| orient_sign(&pts[(i + n - 1) % n], &pts[i], &pts[(i + 1) % n]) != 0)
        .map(|i| pts[i].clone())
        .collect();
    if kept.len() < 3 {
        None
    } else {
        Some(ConvexPolygon { vertices: kept })
    }
}

fn classify(pts: Vec<Point>) -> Clipped {
    let pts = dedup_loop(pts);
    match pts.len() {
        0 => Clipped::Empty,
        1 => Clipped::Point(pts[0].clone()),
        _ => {
            let lo = pts.iter().min().expect("nonempty").clone();
            let hi = pts.iter().max().expect("nonempty").clone();
            if pts.iter().all(|p| orient_sign(&lo, &hi, p) == 0) {
                if lo == hi {
                    Clipped::Point(lo)
                } else {
                    Clipped::Segment(lo, hi)
                }
            } else {
                match solid(pts) {
                    Some(p) => Clipped::Polygon(p),
                    None => Clipped::Segment(lo, hi),
                }
            }
        }
    }
}

/// Exact intersection of two closed convex polygons.
pub fn intersection(a: &ConvexPolygon, b: &ConvexPolygon) -> Clipped {
    if !a.intersects(b) {
        return Clipped::Empty;
    }
    let mut pts = a.vertices.clone();
    for (p, q) in b.edges() {
        pts = clip_keep(&pts, |x| orient(p, q, x));
        if pts.is_empty() {
            return Clipped::Empty;
        }
    }
    classify(pts)
}

/// Intersection of a convex loop with a list of half-planes `n·x ≤ c`.
pub fn clip_halfplanes(poly: &[Point], planes: &[(Point, Scalar)]) -> Clipped {
    let mut pts = poly.to_vec();
    for (n, c) in planes {
        pts = clip_keep(&pts, |x| c - n.dot(x));
        if pts.is_empty() {
            return Clipped::Empty;
        }
    }
    classify(pts)
}

/// Monotone-chain hull.
pub fn convex_hull(points: &[Point]) -> Result<ConvexPolygon> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "{} distinct points cannot span a polygon",
            pts.len()
        )));
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orient_sign(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper_chain: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper_chain.len() >= 2
            && orient_sign(&upper_chain[upper_chain.len() - 2], &upper_chain[upper_chain.len() - 1], p) <= 0
        {
            upper_chain.pop();
        }
        upper_chain.push(p.clone());
    }
    lower.pop();
    upper_chain.pop();
    lower.extend(upper_chain);
    if lower.len() < 3 {
        return Err(Error::DegenerateInput("all points collinear".into()));
    }
    Ok(ConvexPolygon { vertices: lower })
}

/// `-C`.
pub fn reflect(c: &ConvexPolygon) -> ConvexPolygon {
    c.reflect()
}

pub(crate) fn angle_cmp(a: &Point, b: &Point) -> Ordering {
    // Polar angle in [0, 2π) starting from the positive x-axis.
    let (ua, ub) = (upper(a), upper(b));
    if ua != ub {
        return if ua { Ordering::Less } else { Ordering::Greater };
    }
    let c = a.cross(b);
    if c.is_positive() {
        Ordering::Less
    } else if c.is_negative() {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

/// `A + B` by merging the edge sequences sorted by angle.
pub fn minkowski_sum(a: &ConvexPolygon, b: &ConvexPolygon) -> ConvexPolygon {
    let a = a.rotated(a.bottom_index());
    let b = b.rotated(b.bottom_index());
    let (n, m) = (a.len(), b.len());
    let mut out = Vec::with_capacity(n + m);
    let mut cur = a.vertex(0) + b.vertex(0);
    let (mut i, mut j) = (0, 0);
    while i < n || j < m {
        out.push(cur.clone());
        let step = if i == n {
            Ordering::Greater
        } else if j == m {
            Ordering::Less
        } else {
            angle_cmp(&a.edge(i), &b.edge(j))
        };
        let e = match step {
            Ordering::Less => {
                i += 1;
                a.edge(i - 1)
            }
            Ordering::Greater => {
                j += 1;
                b.edge(j - 1)
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
                &a.edge(i - 1) + &b.edge(j - 1)
            }
        };
        cur = &cur + &e;
    }
    solid(out).expect("sum of polygons has positive area")
}
