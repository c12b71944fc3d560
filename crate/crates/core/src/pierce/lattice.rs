//! Lattice pigeonhole transversals and packings for translates of a
//! centrally symmetric polygon `S`.
//!
//! If `S + Λ` covers the plane, every translate of `S` contains a point of
//! any shifted copy `o + Λ`; some shift meets `⋃F` in at most
//! `⌊|⋃F| / |σ|⌋` points. Dually, if the translates `2S + Λ` are pairwise
//! disjoint, no translate of `S` contains two points of `o + Λ`, and some
//! shift meets `⋃F` in at least `⌈|⋃F| / |σ|⌉` points.

use std::collections::{BTreeMap, HashSet};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::augment_witness;
use crate::bodies::{ConvexBody, Family, FamilyIndex, FamilyKind, Shape};
use crate::certificate::{Cluster, LatticeReport, Method, PierceCertificate};
use crate::covers::polygon_residue;
use crate::error::{Error, Result};
use crate::geom::scalar::{ceil, floor, int, rat, to_f64};
use crate::geom::{intersection, minkowski_sum, reflect, ConvexPolygon, Point, Scalar};
use crate::sandwich::{hexagon_sandwich, HexagonSandwich};

/// Inclusion–exclusion is used up to this many members.
pub const EXACT_AREA_LIMIT: usize = 15;

/// Packing tiles are `2(1 + ε)·H_out` with this `ε`.
pub const PACKING_EPSILON: (i64, i64) = (1, 1000);

/// Ceiling on the per-lattice certified ratio `|points| / |witness|`.
const LATTICE_FACTOR: u64 = 6;
const SUBDIVISIONS: [usize; 4] = [32, 64, 128, 256];
const PROBES: usize = 64;
/// Offsets re-evaluated exactly after the floating-point pass.
const EXACT_RECHECKS: usize = 8;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeRole {
    Covering,
    Packing,
}

/// Lattice `Z·b₁ + Z·b₂` with the origin-centered body it covers with
/// (role covering) or packs (role packing).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSpec {
    pub basis: [Point; 2],
    pub cell_area: Scalar,
    pub role: LatticeRole,
    pub body: ConvexPolygon,
}

impl LatticeSpec {
    fn cell(&self) -> ConvexPolygon {
        let [b1, b2] = &self.basis;
        ConvexPolygon::from_points(&[Point::origin(), b1.clone(), b1 + b2, b2.clone()]).expect("nonsingular basis")
    }

    /// Lattice coordinates of `p`.
    fn coords(&self, p: &Point) -> (Scalar, Scalar) {
        let [b1, b2] = &self.basis;
        let det = b1.cross(b2);
        (p.cross(b2) / &det, b1.cross(p) / &det)
    }

    pub fn point(&self, a: i64, b: i64) -> Point {
        let [b1, b2] = &self.basis;
        &b1.scale(&int(a)) + &b2.scale(&int(b))
    }

    /// Lattice vectors `ℓ` with `ℓ ∈ region`, over the bounding range of
    /// `region` in lattice coordinates.
    fn vectors_in(&self, region: &ConvexPolygon) -> Vec<Point> {
        let cs: Vec<(Scalar, Scalar)> = region.vertices().iter().map(|v| self.coords(v)).collect();
        let (a0, a1) = crate::geom::scalar::min_max(cs.iter().map(|c| &c.0)).expect("nonempty");
        let (b0, b1) = crate::geom::scalar::min_max(cs.iter().map(|c| &c.1)).expect("nonempty");
        let to = |x: num_bigint::BigInt| i64::try_from(x).expect("small lattice range");
        let mut out = Vec::new();
        for a in to(floor(&a0))..=to(ceil(&a1)) {
            for b in to(floor(&b0))..=to(ceil(&b1)) {
                out.push(self.point(a, b));
            }
        }
        out
    }

    /// Exact check of the role's defining property.
    pub fn verify(&self) -> Result<()> {
        let [b1, b2] = &self.basis;
        let det = b1.cross(b2);
        let fail = match self.role {
            LatticeRole::Covering => Error::CoverageNotVerified,
            LatticeRole::Packing => Error::PackingNotVerified,
        };
        if det.is_zero() || det.abs() != self.cell_area {
            return Err(fail);
        }
        match self.role {
            LatticeRole::Covering => {
                let cell = self.cell();
                let window = minkowski_sum(&cell, &reflect(&self.body));
                let pieces: Vec<ConvexPolygon> = self.vectors_in(&window).iter().map(|l| self.body.translate(l)).collect();
                if !polygon_residue(&cell, &pieces).is_empty() {
                    return Err(fail);
                }
            }
            LatticeRole::Packing => {
                let window = minkowski_sum(&self.body, &reflect(&self.body));
                for l in self.vectors_in(&window) {
                    if !l.is_zero() && self.body.intersects(&self.body.translate(&l)) {
                        return Err(fail);
                    }
                }
            }
        }
        Ok(())
    }
}

/// The translative tiling lattice of an origin-centered hexagon or
/// parallelogram `tile`, checked for `role` against `body`.
pub fn tiling_lattice(tile: &ConvexPolygon, role: LatticeRole, body: ConvexPolygon) -> Result<LatticeSpec> {
    let q = tile.vertices();
    let basis = match q.len() {
        6 => [&q[0] + &q[1], &q[1] + &q[2]],
        4 => [&q[1] - &q[0], &q[2] - &q[1]],
        n => return Err(Error::DegenerateInput(format!("a {n}-gon does not tile by a lattice here"))),
    };
    let cell_area = basis[0].cross(&basis[1]).abs();
    let lat = LatticeSpec { basis, cell_area, role, body };
    lat.verify()?;
    Ok(lat)
}

/// Covering lattice from the tiling of `H_in` and packing lattice from
/// the tiling of `2(1 + ε)·H_out`, both for the base `S`.
pub fn default_lattices(base: &ConvexBody) -> Result<(LatticeSpec, LatticeSpec, HexagonSandwich)> {
    let p = symmetric_base(base)?;
    let hs = hexagon_sandwich(p)?;
    let shift = -&hs.center;
    let s0 = p.translate(&shift);
    let cover = tiling_lattice(&hs.h_in.translate(&shift), LatticeRole::Covering, s0.clone())?;
    let k = int(2) * (int(1) + rat(PACKING_EPSILON.0, PACKING_EPSILON.1));
    let pack = tiling_lattice(&hs.h_out.translate(&shift).scale(&k), LatticeRole::Packing, s0.scale(&int(2)))?;
    Ok((cover, pack, hs))
}

fn symmetric_base(base: &ConvexBody) -> Result<&ConvexPolygon> {
    match &base.shape {
        Shape::Polygon(p) if p.is_centrally_symmetric() => Ok(p),
        _ => Err(Error::UnsupportedBase { method: "lattice", base: base.describe() }),
    }
}

/// Area of the union: exact by inclusion–exclusion up to
/// [`EXACT_AREA_LIMIT`] polygons, else the sum of areas (an upper bound).
pub fn union_area(polys: &[ConvexPolygon]) -> (Scalar, bool) {
    if polys.len() > EXACT_AREA_LIMIT {
        return (polys.iter().map(ConvexPolygon::area).sum(), false);
    }
    let mut total = Scalar::zero();
    for i in 0..polys.len() {
        total += polys[i].area();
        incl_excl(polys, i + 1, &polys[i], false, &mut total);
    }
    (total, true)
}

fn incl_excl(polys: &[ConvexPolygon], from: usize, cur: &ConvexPolygon, add: bool, total: &mut Scalar) {
    for j in from..polys.len() {
        let Some(next) = intersection(cur, &polys[j]).polygon() else {
            continue;
        };
        let a = next.area();
        if add {
            *total += &a;
        } else {
            *total -= &a;
        }
        incl_excl(polys, j + 1, &next, !add, total);
    }
}

/// Floating-point and exact lattice point enumeration over member polygons.
struct Counter<'a> {
    lat: &'a LatticeSpec,
    polys: &'a [ConvexPolygon],
    fpolys: Vec<Vec<(f64, f64)>>,
    b: [(f64, f64); 2],
    inv: [[f64; 2]; 2],
}

impl<'a> Counter<'a> {
    fn new(lat: &'a LatticeSpec, polys: &'a [ConvexPolygon]) -> Counter<'a> {
        let b = [lat.basis[0].to_f64(), lat.basis[1].to_f64()];
        let det = b[0].0 * b[1].1 - b[0].1 * b[1].0;
        let inv = [[b[1].1 / det, -b[1].0 / det], [-b[0].1 / det, b[0].0 / det]];
        let fpolys = polys.iter().map(|p| p.vertices().iter().map(Point::to_f64).collect()).collect();
        Counter { lat, polys, fpolys, b, inv }
    }

    /// Integer lattice coordinates possibly inside polygon `i` for offset `o`.
    fn range(&self, i: usize, o: (f64, f64)) -> (i64, i64, i64, i64) {
        let (mut a0, mut a1, mut b0, mut b1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for &(x, y) in &self.fpolys[i] {
            let (dx, dy) = (x - o.0, y - o.1);
            let a = self.inv[0][0] * dx + self.inv[0][1] * dy;
            let b = self.inv[1][0] * dx + self.inv[1][1] * dy;
            (a0, a1, b0, b1) = (a0.min(a), a1.max(a), b0.min(b), b1.max(b));
        }
        ((a0 - 1e-6).floor() as i64, (a1 + 1e-6).ceil() as i64, (b0 - 1e-6).floor() as i64, (b1 + 1e-6).ceil() as i64)
    }

    fn count_f64(&self, o: (f64, f64)) -> usize {
        let mut seen: HashSet<(i64, i64)> = HashSet::new();
        for i in 0..self.polys.len() {
            let (a0, a1, b0, b1) = self.range(i, o);
            for a in a0..=a1 {
                for b in b0..=b1 {
                    let x = o.0 + a as f64 * self.b[0].0 + b as f64 * self.b[1].0;
                    let y = o.1 + a as f64 * self.b[0].1 + b as f64 * self.b[1].1;
                    if inside_f64(&self.fpolys[i], x, y) {
                        seen.insert((a, b));
                    }
                }
            }
        }
        seen.len()
    }

    /// Lattice points of `o + Λ` inside the union, each with the members
    /// containing it.
    fn exact(&self, o: &Point) -> BTreeMap<(i64, i64), Vec<usize>> {
        let of = o.to_f64();
        let mut out: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for i in 0..self.polys.len() {
            let (a0, a1, b0, b1) = self.range(i, of);
            for a in a0..=a1 {
                for b in b0..=b1 {
                    if self.polys[i].contains_point(&(o + &self.lat.point(a, b))) {
                        out.entry((a, b)).or_default().push(i);
                    }
                }
            }
        }
        out
    }
}

fn inside_f64(poly: &[(f64, f64)], x: f64, y: f64) -> bool {
    let n = poly.len();
    (0..n).all(|k| {
        let (ax, ay) = poly[k];
        let (bx, by) = poly[(k + 1) % n];
        (bx - ax) * (y - ay) - (by - ay) * (x - ax) >= -1e-12 * (1.0 + ax.abs() + ay.abs())
    })
}

/// Searches shifts `o = α·b₁ + β·b₂` on refining subdivisions of the cell
/// plus seeded probes, re-evaluating the best few exactly. Stops once the
/// count reaches `target` (at most it when minimizing, at least when
/// maximizing).
fn search(counter: &Counter, minimize: bool, target: Option<usize>, seed: u64) -> (Point, BTreeMap<(i64, i64), Vec<usize>>) {
    let lat = counter.lat;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probes: Vec<(Scalar, Scalar)> = (0..PROBES).map(|_| (rat(rng.gen_range(0..1 << 16), 1 << 16), rat(rng.gen_range(0..1 << 16), 1 << 16))).collect();
    let better = |a: usize, b: usize| if minimize { a < b } else { a > b };
    let mut best: Option<(Point, BTreeMap<(i64, i64), Vec<usize>>)> = None;
    for &s in &SUBDIVISIONS {
        let mut shifts: Vec<(Scalar, Scalar)> = (0..s * s).map(|k| (rat((k / s) as i64, s as i64), rat((k % s) as i64, s as i64))).collect();
        shifts.extend(probes.iter().cloned());
        let mut scored: Vec<(usize, usize)> = shifts
            .par_iter()
            .enumerate()
            .map(|(k, (a, b))| {
                let o = (to_f64(a) * counter.b[0].0 + to_f64(b) * counter.b[1].0, to_f64(a) * counter.b[0].1 + to_f64(b) * counter.b[1].1);
                (counter.count_f64(o), k)
            })
            .collect();
        scored.sort_by(|x, y| if minimize { x.cmp(y) } else { y.0.cmp(&x.0).then(x.1.cmp(&y.1)) });
        for &(_, k) in scored.iter().take(EXACT_RECHECKS) {
            let (a, b) = &shifts[k];
            let o = &lat.basis[0].scale(a) + &lat.basis[1].scale(b);
            let pts = counter.exact(&o);
            if best.as_ref().map_or(true, |(_, q)| better(pts.len(), q.len())) {
                best = Some((o, pts));
            }
        }
        let got = best.as_ref().expect("at least one shift").1.len();
        let done = match target {
            Some(t) => if minimize { got <= t } else { got >= t },
            None => true,
        };
        if done {
            break;
        }
    }
    best.expect("at least one shift")
}

fn member_polygons(f: &Family) -> Result<Vec<ConvexPolygon>> {
    if f.kind != FamilyKind::Translates {
        return Err(Error::InvalidFamily("expected a family of translates".into()));
    }
    let p = symmetric_base(&f.base)?;
    Ok(f.members.iter().map(|m| p.translate(&m.point())).collect())
}

fn ratio_floor(a: &Scalar, b: &Scalar) -> u64 {
    u64::try_from(floor(&(a / b))).unwrap_or(u64::MAX)
}

fn ratio_ceil(a: &Scalar, b: &Scalar) -> u64 {
    u64::try_from(ceil(&(a / b))).unwrap_or(u64::MAX)
}

/// Pierces with the shift of the covering lattice meeting the union least.
pub fn lattice_pierce(f: &Family, cover: &LatticeSpec, pack: &LatticeSpec, seed: u64) -> Result<PierceCertificate> {
    if cover.role != LatticeRole::Covering {
        return Err(Error::CoverageNotVerified);
    }
    cover.verify()?;
    let polys = member_polygons(f)?;
    let (area, exact) = union_area(&polys);
    let point_bound = ratio_floor(&area, &cover.cell_area);
    let counter = Counter::new(cover, &polys);
    let target = exact.then_some(point_bound as usize);
    let (offset, hits) = search(&counter, true, target, seed);

    let mut owner: Vec<Option<usize>> = vec![None; f.len()];
    let lattice_pts: Vec<Point> = hits.keys().map(|&(a, b)| &offset + &cover.point(a, b)).collect();
    for (k, members) in hits.values().enumerate() {
        for &m in members {
            owner[m].get_or_insert(k);
        }
    }
    let mut grouped: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (m, o) in owner.iter().enumerate() {
        let k = o.ok_or_else(|| Error::VerificationFailed(format!("no lattice point in member {m}")))?;
        grouped.entry(k).or_default().push(m);
    }
    let mut points = Vec::new();
    let mut clusters = Vec::new();
    for (k, members) in grouped {
        clusters.push(Cluster { seed: members[0], members, points: vec![points.len()], pattern_size: 1 });
        points.push(lattice_pts[k].clone().into());
    }

    let witness = lattice_witness(f, pack, seed)?;
    let eps = rat(PACKING_EPSILON.0, PACKING_EPSILON.1);
    let scale = int(4) * (int(1) + &eps) * (int(1) + &eps);
    let report = LatticeReport {
        witness_bound: ratio_ceil(&area, &pack.cell_area),
        union_area: area,
        union_exact: exact,
        covering_cell: cover.cell_area.clone(),
        packing_cell: pack.cell_area.clone(),
        point_bound,
        sandwich_ratio: &cover.cell_area * scale / &pack.cell_area,
    };
    Ok(PierceCertificate {
        method: Method::Lattice,
        points,
        clusters,
        witness,
        factor: LATTICE_FACTOR,
        refinement: None,
        lattice: Some(report),
    })
}

/// Disjoint members, one per point of the packing lattice shift meeting
/// the union most, then extended by any member disjoint from all of them.
pub fn lattice_witness(f: &Family, pack: &LatticeSpec, seed: u64) -> Result<Vec<usize>> {
    if pack.role != LatticeRole::Packing {
        return Err(Error::PackingNotVerified);
    }
    pack.verify()?;
    let polys = member_polygons(f)?;
    let (area, exact) = union_area(&polys);
    let counter = Counter::new(pack, &polys);
    let target = exact.then(|| ratio_ceil(&area, &pack.cell_area) as usize);
    let (_, hits) = search(&counter, false, target, seed.wrapping_add(1));
    let mut picked: Vec<usize> = Vec::new();
    for members in hits.values() {
        let m = members[0];
        if !picked.contains(&m) && picked.iter().all(|&o| !polys[o].intersects(&polys[m])) {
            picked.push(m);
        }
    }
    augment_witness(&FamilyIndex::new(f), &mut picked);
    picked.sort_unstable();
    Ok(picked)
}
