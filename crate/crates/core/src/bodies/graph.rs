use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::grid::{BBox, SpatialGrid};
use super::{Body, Family, FamilyKind, Shape};
use crate::geom::scalar::to_f64;
use crate::geom::{minkowski_sum, reflect, ConvexPolygon, Point, Scalar};

/// Undirected intersection graph; neighbor lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionGraph {
    pub adj: Vec<Vec<usize>>,
}

impl IntersectionGraph {
    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, nb) in self.adj.iter().enumerate() {
            out.extend(nb.iter().filter(|&&j| j > i).map(|&j| (i, j)));
        }
        out
    }

    /// Whether every pair of vertices is adjacent.
    pub fn is_complete(&self) -> bool {
        let n = self.adj.len();
        self.adj.iter().all(|nb| nb.len() == n - 1)
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(k, &i)| set[k + 1..].iter().all(|&j| !self.has_edge(i, j)))
    }
}

/// Per-family acceleration: realized bodies, padded bounding boxes, a
/// spatial grid and kind-specific fast intersection tests.
pub struct FamilyIndex<'a> {
    pub family: &'a Family,
    bodies: Vec<Body>,
    grid: SpatialGrid,
    diff: Option<ConvexPolygon>,
    disks: Option<Vec<[f64; 3]>>,
    homothets: Option<HomothetTest>,
}

/// Edge normals `u` of `C` and `−C` with `h_C(u)` and `h_C(−u)`:
/// `s₁C + t₁` meets `s₂C + t₂` iff `u·(t₂ − t₁) ≤ s₁·h_C(u) + s₂·h_C(−u)`
/// for every `u`.
struct HomothetTest {
    normals: Vec<(Point, Scalar, Scalar)>,
    approx: Vec<[f64; 4]>,
    members: Vec<[f64; 3]>,
}

impl HomothetTest {
    fn new(c: &ConvexPolygon, family: &Family) -> HomothetTest {
        let mut dirs: Vec<Point> = Vec::new();
        for (a, b) in c.edges() {
            let u = Point::new(&b.y - &a.y, &a.x - &b.x);
            for u in [-&u, u] {
                if !dirs.iter().any(|d| d.cross(&u).is_zero() && d.dot(&u).is_positive()) {
                    dirs.push(u);
                }
            }
        }
        let normals: Vec<(Point, Scalar, Scalar)> = dirs
            .into_iter()
            .map(|u| {
                let hi = c.support(&u);
                let lo = c.support(&-&u);
                (u, hi, lo)
            })
            .collect();
        let approx = normals.iter().map(|(u, hi, lo)| [to_f64(&u.x), to_f64(&u.y), to_f64(hi), to_f64(lo)]).collect();
        let members = family.members.iter().map(|m| [to_f64(&m.t[0]), to_f64(&m.t[1]), to_f64(&m.s)]).collect();
        HomothetTest { normals, approx, members }
    }

    fn intersects(&self, family: &Family, i: usize, j: usize) -> bool {
        let ([x1, y1, s1], [x2, y2, s2]) = (self.members[i], self.members[j]);
        let (dx, dy) = (x2 - x1, y2 - y1);
        let mut decided = true;
        for &[ux, uy, hi, lo] in &self.approx {
            let lhs = ux * dx + uy * dy;
            let rhs = s1 * hi + s2 * lo;
            let slack = 1e-9 * (ux.abs() * (x1.abs() + x2.abs()) + uy.abs() * (y1.abs() + y2.abs()) + (s1 * hi).abs() + (s2 * lo).abs() + 1.0);
            if lhs > rhs + slack {
                return false;
            }
            if lhs >= rhs - slack {
                decided = false;
            }
        }
        if decided {
            return true;
        }
        let (mi, mj) = (&family.members[i], &family.members[j]);
        let d = &mj.point() - &mi.point();
        self.normals.iter().all(|(u, hi, lo)| u.dot(&d) <= &mi.s * hi + &mj.s * lo)
    }
}

impl<'a> FamilyIndex<'a> {
    pub fn new(family: &'a Family) -> FamilyIndex<'a> {
        let bodies: Vec<Body> = (0..family.len()).map(|i| family.realize(i)).collect();
        let boxes: Vec<BBox> = bodies.iter().map(Body::bbox).collect();
        let diff = match (&family.base.shape, family.kind) {
            (Shape::Polygon(p), FamilyKind::Translates) => Some(minkowski_sum(p, &reflect(p))),
            _ => None,
        };
        let disks = matches!(family.base.shape, Shape::Disk { .. }).then(|| {
            bodies
                .iter()
                .map(|b| match b {
                    Body::Disk { center, radius } => [to_f64(&center.x), to_f64(&center.y), to_f64(radius)],
                    _ => unreachable!("disk family"),
                })
                .collect()
        });
        let homothets = match (&family.base.shape, family.kind) {
            (Shape::Polygon(p), FamilyKind::Homothets) => Some(HomothetTest::new(p, family)),
            _ => None,
        };
        FamilyIndex {
            family,
            bodies,
            grid: SpatialGrid::new(boxes),
            diff,
            disks,
            homothets,
        }
    }

    pub fn body(&self, i: usize) -> &Body {
        &self.bodies[i]
    }

    pub fn bodies(&self) -> &[Body] {
        &self.bodies
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn bbox(&self, i: usize) -> &BBox {
        self.grid.bbox(i)
    }

    /// Exact closed intersection test.
    pub fn intersects(&self, i: usize, j: usize) -> bool {
        if i == j {
            return true;
        }
        if !self.grid.bbox(i).overlaps(self.grid.bbox(j)) {
            return false;
        }
        if let Some(d) = &self.diff {
            let mi = &self.family.members[i];
            let mj = &self.family.members[j];
            return d.contains_point(&(&mj.point() - &mi.point()));
        }
        if let Some(h) = &self.homothets {
            return h.intersects(self.family, i, j);
        }
        if let Some(ds) = &self.disks {
            let ([x1, y1, r1], [x2, y2, r2]) = (ds[i], ds[j]);
            let mag = x1.abs() + x2.abs() + y1.abs() + y2.abs();
            if mag < 1e12 {
                let (dx, dy, r) = (x1 - x2, y1 - y2, r1 + r2);
                let (d2, r2sq) = (dx * dx + dy * dy, r * r);
                let slack = 1e-9 * (d2 + r2sq + mag + 1.0);
                if d2 < r2sq - slack {
                    return true;
                }
                if d2 > r2sq + slack {
                    return false;
                }
            }
        }
        self.bodies[i].intersects(&self.bodies[j]).expect("same kind")
    }

    /// Members whose bounding boxes overlap that of `i`, excluding `i`.
    pub fn candidates(&self, i: usize) -> Vec<usize> {
        let mut c = self.grid.query(self.grid.bbox(i));
        c.retain(|&j| j != i);
        c
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut c = self.candidates(i);
        c.retain(|&j| self.intersects(i, j));
        c
    }

    pub fn graph(&self) -> IntersectionGraph {
        let adj = (0..self.family.len()).into_par_iter().map(|i| self.neighbors(i)).collect();
        IntersectionGraph { adj }
    }
}

/// Intersection graph built through the spatial grid.
pub fn intersection_graph(f: &Family) -> IntersectionGraph {
    FamilyIndex::new(f).graph()
}

/// All-pairs reference construction.
pub fn intersection_graph_brute(f: &Family) -> IntersectionGraph {
    let n = f.len();
    let bodies: Vec<Body> = (0..n).map(|i| f.realize(i)).collect();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if bodies[i].intersects(&bodies[j]).expect("same kind") {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    IntersectionGraph { adj }
}
