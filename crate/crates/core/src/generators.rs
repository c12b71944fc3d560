//! Extremal instances and seeded random families.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bodies::{intersection_graph, ConvexBody, Family, FamilyKind, Member, Shape};
use crate::error::{Error, Result};
use crate::geom::scalar::{int, rat, Scalar};
use crate::geom::{minkowski_sum, pt, reflect, ConvexPolygon, Point};

/// Largest family the grid generator will build.
pub const GRID_FAMILY_CAP: usize = 4096;

/// Five unit squares whose intersection graph is a 5-cycle.
pub fn five_square_cycle() -> Family {
    let corners = [
        Point::new(int(0), rat(4, 5)),
        Point::new(rat(-4, 5), rat(1, 5)),
        Point::new(rat(-1, 2), rat(-3, 5)),
        Point::new(rat(1, 2), rat(-3, 5)),
        Point::new(rat(4, 5), rat(1, 5)),
    ];
    Family::translates_at(ConvexBody::unit_square(), &corners).expect("valid family")
}

/// Nine pairwise intersecting translates of the unit right triangle with
/// `ν = 1` and `τ = 3`.
///
/// `A`, `B`, `C` are pairwise tangent; `X_Y` is `X` moved by `ε` toward `Y`.
pub fn nine_triangles(eps: &Scalar) -> Result<Family> {
    if !eps.is_positive() || *eps >= rat(1, 10) {
        return Err(Error::EpsilonTooLarge(format!("ε must lie in (0, 1/10), got {eps}")));
    }
    let a = pt(0, 0);
    let b = pt(1, 0);
    let c = pt(0, 1);
    let toward = |x: &Point, y: &Point| x + &(y - x).scale(eps);
    let ts = vec![
        a.clone(),
        b.clone(),
        c.clone(),
        toward(&a, &b),
        toward(&a, &c),
        toward(&b, &a),
        toward(&b, &c),
        toward(&c, &a),
        toward(&c, &b),
    ];
    let f = Family::translates_at(ConvexBody::unit_triangle(), &ts)?;
    if !intersection_graph(&f).is_complete() {
        return Err(Error::EpsilonTooLarge(format!("members stop intersecting at ε = {eps}")));
    }
    Ok(f)
}

/// Translates at `{(t₁/n, t₂/n) : 1 ≤ tᵢ ≤ n²}`, `n⁴` members.
pub fn grid_family(n: usize, base: &ConvexBody) -> Result<Family> {
    if n == 0 {
        return Err(Error::InvalidFamily("grid size must be positive".into()));
    }
    if base.dim() != 2 {
        return Err(Error::InvalidFamily("grid families are planar".into()));
    }
    let count = n.checked_pow(4).unwrap_or(usize::MAX);
    if count > GRID_FAMILY_CAP {
        return Err(Error::TooLarge { n: count, limit: GRID_FAMILY_CAP });
    }
    let m = (n * n) as i64;
    let mut ts = Vec::with_capacity(count);
    for i in 1..=m {
        for j in 1..=m {
            ts.push(Point::new(rat(i, n as i64), rat(j, n as i64)));
        }
    }
    Family::translates_at(base.clone(), &ts)
}

/// Resolution of random coordinates and scales.
const DEN: i64 = 1000;

fn uniform(rng: &mut ChaCha8Rng, lo: &Scalar, hi: &Scalar) -> Scalar {
    let k = rng.gen_range(0..=DEN);
    lo + (hi - lo) * rat(k, DEN)
}

/// Translations uniform in `[0, box_size]^d`, scales uniform in
/// `scale_range` (ignored for translates), on a grid of step `1/1000`.
pub fn random_family(
    base: &ConvexBody,
    n: usize,
    box_size: &Scalar,
    kind: FamilyKind,
    scale_range: (&Scalar, &Scalar),
    seed: u64,
) -> Result<Family> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = base.dim();
    let zero = Scalar::zero();
    let members = (0..n)
        .map(|_| {
            let t = (0..d).map(|_| uniform(&mut rng, &zero, box_size)).collect();
            let s = match kind {
                FamilyKind::Translates => Scalar::one(),
                FamilyKind::Homothets => uniform(&mut rng, scale_range.0, scale_range.1),
            };
            Member { t, s }
        })
        .collect();
    Family::new(base.clone(), kind, members)
}

/// Translates `C + t` with `t ∈ ½(C − C)`, hence pairwise intersecting.
pub fn pairwise_intersecting_family(base: &ConvexBody, n: usize, seed: u64) -> Result<Family> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = rat(1, 2);
    let sample: Box<dyn FnMut(&mut ChaCha8Rng) -> Option<Vec<Scalar>>> = match &base.shape {
        Shape::Polygon(p) => {
            let d = minkowski_sum(p, &reflect(p)).scale(&half);
            let (lo, hi) = d.bbox();
            Box::new(move |rng| {
                let q = Point::new(uniform(rng, &lo.x, &hi.x), uniform(rng, &lo.y, &hi.y));
                d.contains_point(&q).then(|| vec![q.x, q.y])
            })
        }
        Shape::Disk { radius, .. } => {
            let r = radius.clone();
            Box::new(move |rng| {
                let q = Point::new(uniform(rng, &-&r, &r), uniform(rng, &-&r, &r));
                (q.norm2() <= &r * &r).then(|| vec![q.x, q.y])
            })
        }
        Shape::Box { sides } => {
            let sides = sides.clone();
            Box::new(move |rng| {
                Some(sides.iter().map(|s| uniform(rng, &-(s * &half), &(s * &half))).collect())
            })
        }
    };
    let mut sample = sample;
    let mut members = Vec::with_capacity(n);
    let mut tries = 0usize;
    while members.len() < n {
        tries += 1;
        if tries > 1000 * (n + 10) {
            return Err(Error::ConstructionFailed("rejection sampling did not converge".into()));
        }
        if let Some(t) = sample(&mut rng) {
            members.push(Member::translate(t));
        }
    }
    let f = Family::new(base.clone(), FamilyKind::Translates, members)?;
    if !intersection_graph(&f).is_complete() {
        return Err(Error::ConstructionFailed("sampled family is not pairwise intersecting".into()));
    }
    Ok(f)
}

fn random_edge(rng: &mut ChaCha8Rng, range: i64) -> Point {
    loop {
        let v = pt(rng.gen_range(-range..=range), rng.gen_range(-range..=range));
        if !v.is_zero() {
            return v;
        }
    }
}

fn polygon_from_edges(mut edges: Vec<Point>) -> Option<ConvexPolygon> {
    edges.sort_by(|a, b| crate::geom::polygon::angle_cmp(a, b));
    let mut merged: Vec<Point> = Vec::new();
    for e in edges {
        match merged.last_mut() {
            Some(last) if last.cross(&e).is_zero() && last.dot(&e).is_positive() => *last = &*last + &e,
            _ => merged.push(e),
        }
    }
    let mut verts = Vec::with_capacity(merged.len());
    let mut cur = Point::origin();
    for e in &merged {
        verts.push(cur.clone());
        cur = &cur + e;
    }
    ConvexPolygon::new(verts).ok()
}

/// Random convex polygon with at most `k` vertices and integer coordinates.
pub fn random_convex_polygon(rng: &mut ChaCha8Rng, k: usize) -> ConvexPolygon {
    assert!(k >= 3);
    loop {
        let mut edges: Vec<Point> = (0..k - 1).map(|_| random_edge(rng, 20)).collect();
        let sum = edges.iter().fold(Point::origin(), |acc, e| &acc + e);
        if sum.is_zero() {
            continue;
        }
        edges.push(-&sum);
        if let Some(p) = polygon_from_edges(edges) {
            return p;
        }
    }
}

/// Random centrally symmetric polygon with exactly `2m` vertices,
/// centered at the origin.
pub fn random_symmetric_polygon(rng: &mut ChaCha8Rng, m: usize) -> ConvexPolygon {
    assert!(m >= 2);
    loop {
        let mut half: Vec<Point> = Vec::with_capacity(m);
        while half.len() < m {
            let mut e = random_edge(rng, 20);
            if e.y.is_negative() || (e.y.is_zero() && e.x.is_negative()) {
                e = -&e;
            }
            if half.iter().all(|h| !h.cross(&e).is_zero()) {
                half.push(e);
            }
        }
        let mut edges = half.clone();
        edges.extend(half.iter().map(|e| -e));
        let Some(p) = polygon_from_edges(edges) else {
            continue;
        };
        let c = p.symmetry_center().expect("symmetric by construction");
        return p.translate(&-&c);
    }
}

/// Base bodies by name. `symmetric` and `polygon` draw a random polygon
/// from `seed`.
pub const BASE_NAMES: [&str; 7] = ["square", "triangle", "disk", "hexagon", "symmetric", "polygon", "box3"];

pub fn named_base(name: &str, seed: u64) -> Result<ConvexBody> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match name {
        "square" => ConvexBody::unit_square(),
        "triangle" => ConvexBody::unit_triangle(),
        "disk" => ConvexBody::unit_disk(),
        "hexagon" => ConvexBody::polygon(
            ConvexPolygon::new(vec![pt(1, 0), pt(1, 1), pt(0, 1), pt(-1, 0), pt(-1, -1), pt(0, -1)]).expect("valid"),
        ),
        "symmetric" => {
            let m = rng.gen_range(2..=5);
            ConvexBody::polygon(normalize_size(random_symmetric_polygon(&mut rng, m)))
        }
        "polygon" => {
            let k = rng.gen_range(3..=8);
            ConvexBody::polygon(normalize_size(random_convex_polygon(&mut rng, k)))
        }
        "box3" => ConvexBody::axis_box(vec![int(1); 3])?,
        other => return Err(Error::Parse(format!("unknown base {other:?}; expected one of {}", BASE_NAMES.join(", ")))),
    })
}

/// Rescales so the wider bounding-box side is 2.
fn normalize_size(p: ConvexPolygon) -> ConvexPolygon {
    let (lo, hi) = p.bbox();
    let w = std::cmp::max(&hi.x - &lo.x, &hi.y - &lo.y);
    p.scale(&(int(2) / w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::intersection_graph_brute;

    #[test]
    fn named_bases_are_valid() {
        for name in BASE_NAMES {
            let b = named_base(name, 7).unwrap();
            assert_eq!(b, named_base(name, 7).unwrap());
        }
        assert!(named_base("circle", 0).is_err());
        assert!(named_base("symmetric", 3).unwrap().is_centrally_symmetric());
    }

    #[test]
    fn five_cycle_graph() {
        let g = intersection_graph(&five_square_cycle());
        assert_eq!(g.edge_count(), 5);
        assert!((0..5).all(|i| g.has_edge(i, (i + 1) % 5) && g.adj[i].len() == 2));
    }

    #[test]
    fn nine_triangles_pairwise() {
        let f = nine_triangles(&rat(1, 100)).unwrap();
        assert_eq!(f.len(), 9);
        assert_eq!(intersection_graph(&f).edge_count(), 36);
        assert!(nine_triangles(&rat(1, 5)).is_err());
    }

    #[test]
    fn grid_family_sizes() {
        assert_eq!(grid_family(2, &ConvexBody::unit_disk()).unwrap().len(), 16);
        assert_eq!(grid_family(1, &ConvexBody::unit_disk()).unwrap().len(), 1);
        assert!(matches!(grid_family(9, &ConvexBody::unit_disk()), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn random_family_is_seeded() {
        let b = ConvexBody::unit_disk();
        let (lo, hi) = (int(1), int(3));
        let a = random_family(&b, 20, &int(10), FamilyKind::Homothets, (&lo, &hi), 5).unwrap();
        let c = random_family(&b, 20, &int(10), FamilyKind::Homothets, (&lo, &hi), 5).unwrap();
        assert_eq!(a, c);
        let t = random_family(&b, 20, &int(10), FamilyKind::Translates, (&lo, &hi), 5).unwrap();
        assert!(t.members.iter().all(|m| m.s.is_one()));
        assert_eq!(intersection_graph(&t), intersection_graph_brute(&t));
    }

    #[test]
    fn pairwise_families_for_each_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let hex = ConvexBody::polygon(random_symmetric_polygon(&mut rng, 3));
        for base in [hex, ConvexBody::unit_disk(), ConvexBody::unit_square(), ConvexBody::unit_triangle()] {
            let f = pairwise_intersecting_family(&base, 20, 9).unwrap();
            assert!(intersection_graph(&f).is_complete());
        }
    }

    #[test]
    fn random_polygons_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 3..=12 {
            let p = random_convex_polygon(&mut rng, k);
            assert!(p.len() <= k);
            let s = random_symmetric_polygon(&mut rng, k.max(4) / 2);
            assert_eq!(s.len(), 2 * (k.max(4) / 2));
            assert!(s.is_centrally_symmetric());
        }
    }
}
