use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{assemble, augment_witness, dot, greedy_clusters, reindex, tie_break, to_f64s, Shadow};
use crate::bodies::{ConvexBody, Family, FamilyIndex, FamilyKind, Shape};
use crate::certificate::{Cluster, Method, PierceCertificate};
use crate::covers::translate_pattern;
use crate::error::{Error, Result};
use crate::geom::scalar::{ceil, floor, rat};
use crate::geom::{ConvexPolygon, ExactPoint, Point, Scalar};
use crate::sandwich::{hexagon_sandwich_special, sandwich_parallelograms, SandwichPair};

fn require_translates(f: &Family) -> Result<()> {
    if f.kind != FamilyKind::Translates {
        return Err(Error::InvalidFamily("expected a family of translates".into()));
    }
    Ok(())
}

/// Topmost-first greedy decomposition pierced by the base's half-plane
/// pattern.
pub fn greedy_pierce(f: &Family, refine: bool) -> Result<PierceCertificate> {
    require_translates(f)?;
    let pattern = translate_pattern(&f.base)?;
    let up = to_f64s(&pattern.up);
    let height: Vec<Shadow> = f.members.par_iter().map(|m| Shadow::of(up.iter().copied().zip(to_f64s(&m.t)))).collect();
    let exact = |i: usize| dot(&pattern.up, &f.members[i].t);
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.par_sort_by(|&i, &j| {
        height[j].cmp_or(&height[i], || exact(j).cmp(&exact(i))).then_with(|| tie_break(f, i, j))
    });
    // members copied in sweep order, so neighbors sit close in memory
    let swept = f.subfamily(&order);
    let index = FamilyIndex::new(&swept);
    let graph = index.graph();
    let identity: Vec<usize> = (0..swept.len()).collect();
    let clusters = greedy_clusters(&graph, &identity);
    let mut cert = assemble(&swept, index.bodies(), clusters, &pattern, Method::Greedy, refine)?;
    reindex(&mut cert, &order);
    Ok(cert)
}

/// Grid decomposition with the sandwich found for the base polygon, or the
/// base box itself.
pub fn grid_pierce_auto(f: &Family) -> Result<PierceCertificate> {
    match &f.base.shape {
        Shape::Polygon(p) => grid_pierce(f, &sandwich_parallelograms(p)?),
        Shape::Box { .. } => grid_pierce_boxes(f),
        Shape::Disk { .. } => Err(Error::UnsupportedBase { method: "grid", base: f.base.describe() }),
    }
}

/// Grid decomposition for translates of a polygon `C` with `P ⊆ C ⊆ Q`.
///
/// In coordinates where `P` is the unit square, member `i`'s `P`-translate
/// is `[0,1]² + u_i`. Lines run along the second axis; each member meets
/// exactly one of them.
pub fn grid_pierce(f: &Family, pair: &SandwichPair) -> Result<PierceCertificate> {
    require_translates(f)?;
    let Shape::Polygon(c) = &f.base.shape else {
        return Err(Error::UnsupportedBase { method: "grid", base: f.base.describe() });
    };
    pair.verify(c)?;
    let m = pair.normalizing_map();
    let back = m.inverse()?;
    let u: Vec<Vec<Scalar>> = f
        .members
        .par_iter()
        .map(|mem| {
            let p = m.apply_linear(&mem.point());
            vec![p.x, p.y]
        })
        .collect();
    let e = vec![pair.lambda.0.clone(), pair.lambda.1.clone()];
    let to_world = |z: &[Scalar]| {
        let p = back.apply(&Point::new(z[0].clone(), z[1].clone()));
        vec![p.x, p.y]
    };
    grid_core(f, &u, &e, pair.gamma, &to_world)
}

/// Boxes are their own sandwich: `P = Q`, all ratios 1, factor `2^{d−1}`.
fn grid_pierce_boxes(f: &Family) -> Result<PierceCertificate> {
    require_translates(f)?;
    let Shape::Box { sides } = &f.base.shape else {
        unreachable!("box base")
    };
    let u: Vec<Vec<Scalar>> = f.members.iter().map(|m| m.t.iter().zip(sides).map(|(t, s)| t / s).collect()).collect();
    let e = vec![Scalar::one(); sides.len()];
    let gamma = 1u64 << (sides.len() - 1);
    let to_world = |z: &[Scalar]| z.iter().zip(sides).map(|(a, s)| a * s).collect();
    grid_core(f, &u, &e, gamma, &to_world)
}

/// An offset avoiding every fractional part, so no line is tangent to a
/// unit interval `[u, u + 1]`.
fn line_offset<'a>(vals: impl Iterator<Item = &'a Scalar>) -> Scalar {
    let mut fr: Vec<Scalar> = vals.map(|v| v - Scalar::from_integer(floor(v))).collect();
    fr.sort();
    fr.dedup();
    if fr.is_empty() {
        return rat(1, 2);
    }
    let half = rat(1, 2);
    let last = fr.last().expect("nonempty").clone();
    let mut gap = &fr[0] + Scalar::one() - &last;
    let mut mid = (&last + &fr[0] + Scalar::one()) * &half;
    for w in fr.windows(2) {
        let g = &w[1] - &w[0];
        if g > gap {
            gap = g;
            mid = (&w[0] + &w[1]) * &half;
        }
    }
    &mid - Scalar::from_integer(floor(&mid))
}

struct LineCluster {
    seed: usize,
    members: Vec<usize>,
    point_heights: Vec<Scalar>,
}

/// Per-line greedy on the last coordinate. Every member on the line with
/// `P`-extent `[c, c + 1]` gets the point `c_seed + k`, `k = max(1, ⌈c − c_seed⌉)`.
fn line_greedy(index: &FamilyIndex, u: &[Vec<Scalar>], e_last: &Scalar, mut line: Vec<usize>) -> Result<Vec<LineCluster>> {
    let last = u[0].len() - 1;
    line.sort_by(|&i, &j| u[i][last].cmp(&u[j][last]).then(i.cmp(&j)));
    let mut done = vec![false; line.len()];
    let mut out = Vec::new();
    let kmax = ceil(e_last);
    for a in 0..line.len() {
        if done[a] {
            continue;
        }
        done[a] = true;
        let seed = line[a];
        let cs = &u[seed][last];
        let mut members = vec![seed];
        let mut ks: Vec<BigInt> = vec![BigInt::one()];
        for b in a + 1..line.len() {
            let j = line[b];
            let c = &u[j][last];
            if c - cs > *e_last {
                break;
            }
            if done[b] || !index.intersects(seed, j) {
                continue;
            }
            done[b] = true;
            members.push(j);
            let k = ceil(&(c - cs)).max(BigInt::one());
            let h = cs + Scalar::from_integer(k.clone());
            if !(*c <= h && h <= c + Scalar::one()) || k > kmax {
                return Err(Error::VerificationFailed(format!("grid point misses member {j}")));
            }
            ks.push(k);
        }
        ks.sort();
        ks.dedup();
        let point_heights = ks.into_iter().map(|k| cs + Scalar::from_integer(k)).collect();
        out.push(LineCluster { seed, members, point_heights });
    }
    Ok(out)
}

fn grid_core(
    f: &Family,
    u: &[Vec<Scalar>],
    e: &[Scalar],
    gamma: u64,
    to_world: &(dyn Fn(&[Scalar]) -> Vec<Scalar> + Sync),
) -> Result<PierceCertificate> {
    let d = e.len();
    let offsets: Vec<Scalar> = (0..d - 1).map(|k| line_offset(u.iter().map(|v| &v[k]))).collect();
    let mut lines: BTreeMap<Vec<BigInt>, Vec<usize>> = BTreeMap::new();
    for (i, v) in u.iter().enumerate() {
        let key = (0..d - 1).map(|k| ceil(&(&v[k] - &offsets[k]))).collect();
        lines.entry(key).or_default().push(i);
    }
    let index = FamilyIndex::new(f);
    let lines: Vec<(Vec<BigInt>, Vec<usize>)> = lines.into_iter().collect();
    let per_line: Vec<Vec<LineCluster>> = lines
        .par_iter()
        .map(|(_, members)| line_greedy(&index, u, &e[d - 1], members.clone()))
        .collect::<Result<_>>()?;

    let modulus: Vec<BigInt> = e[..d - 1].iter().map(|x| ceil(&(x + Scalar::one()))).collect();
    let mut classes: BTreeMap<Vec<BigInt>, Vec<usize>> = BTreeMap::new();
    let mut points = Vec::new();
    let mut clusters = Vec::new();
    for ((key, _), lcs) in lines.iter().zip(per_line) {
        let class = key.iter().zip(&modulus).map(|(j, m)| j.mod_floor(m)).collect();
        let seeds = classes.entry(class).or_default();
        let mut base: Vec<Scalar> = key.iter().zip(&offsets).map(|(j, b)| Scalar::from_integer(j.clone()) + b).collect();
        base.push(Scalar::zero());
        for lc in lcs {
            seeds.push(lc.seed);
            let start = points.len();
            for h in lc.point_heights {
                base[d - 1] = h;
                points.push(ExactPoint::rational(to_world(&base)));
            }
            clusters.push(Cluster { seed: lc.seed, members: lc.members, points: (start..points.len()).collect(), pattern_size: gamma as usize });
        }
    }
    let mut witness = classes.into_values().max_by(|a, b| a.len().cmp(&b.len())).unwrap_or_default();
    augment_witness(&index, &mut witness);
    Ok(PierceCertificate { method: Method::Grid, points, clusters, witness, factor: gamma, refinement: None, lattice: None })
}

pub fn is_hexagon_base(base: &ConvexBody) -> bool {
    matches!(&base.shape, Shape::Polygon(p) if p.len() == 6 && p.is_centrally_symmetric())
}

/// Translates of a centrally symmetric hexagon: two points when the family
/// is pairwise intersecting, otherwise the grid method with factor 3.
pub fn hexagon_pierce(f: &Family) -> Result<PierceCertificate> {
    require_translates(f)?;
    if !is_hexagon_base(&f.base) {
        return Err(Error::NotHexagonBase);
    }
    let Shape::Polygon(h) = &f.base.shape else {
        unreachable!("hexagon base")
    };
    let index = FamilyIndex::new(f);
    if index.graph().is_complete() {
        if let Some(points) = strip_points(f, &index, h) {
            let cluster = Cluster { seed: 0, members: (0..f.len()).collect(), points: (0..points.len()).collect(), pattern_size: 2 };
            return Ok(PierceCertificate {
                method: Method::Hexagon,
                points,
                clusters: vec![cluster],
                witness: vec![0],
                factor: 2,
                refinement: None,
                lattice: None,
            });
        }
    }
    let mut cert = grid_pierce(f, &hexagon_sandwich_special(h)?)?;
    cert.method = Method::Hexagon;
    Ok(cert)
}

/// `H` is the intersection of three strips `|n_k·x| ≤ h_k`. For a pairwise
/// intersecting family the centers span at most `2h_k` in each direction,
/// so pinning two directions at one end of that span lands inside both
/// strips for every member. Tries each pair of such points sharing a
/// direction.
fn strip_points(f: &Family, index: &FamilyIndex, h: &ConvexPolygon) -> Option<Vec<ExactPoint>> {
    let c = h.symmetry_center()?;
    let s0 = h.translate(&-&c);
    let normals: Vec<(Point, Scalar)> = (0..3)
        .map(|k| {
            let e = s0.edge(k);
            let n = Point::new(e.y.clone(), -e.x.clone());
            let hk = n.dot(s0.vertex(k));
            (n, hk)
        })
        .collect();
    let centers: Vec<Point> = f.members.iter().map(|m| &m.point() + &c).collect();
    let ends: Vec<[Scalar; 2]> = normals
        .iter()
        .map(|(n, hk)| {
            let vals = centers.iter().map(|z| n.dot(z));
            let (lo, hi) = crate::geom::scalar::min_max(vals.collect::<Vec<_>>().iter()).expect("nonempty");
            [hi - hk, lo + hk]
        })
        .collect();
    let solve = |a: usize, sa: usize, b: usize, sb: usize| -> Option<Point> {
        let (na, nb) = (&normals[a].0, &normals[b].0);
        let det = na.cross(nb);
        if det.is_zero() {
            return None;
        }
        let (al, be) = (&ends[a][sa], &ends[b][sb]);
        Some(Point::new((al * &nb.y - be * &na.y) / &det, (&na.x * be - &nb.x * al) / &det))
    };
    let bodies = index.bodies();
    for a in 0..3 {
        let (b, cc) = ((a + 1) % 3, (a + 2) % 3);
        for sa in 0..2 {
            for sb in 0..2 {
                for sc in 0..2 {
                    let (Some(x1), Some(x2)) = (solve(a, sa, b, sb), solve(a, sa, cc, sc)) else {
                        continue;
                    };
                    let (p1, p2) = (ExactPoint::from(&x1), ExactPoint::from(&x2));
                    let hits: Vec<(bool, bool)> = bodies.iter().map(|bd| (bd.contains(&p1), bd.contains(&p2))).collect();
                    if hits.iter().all(|&(x, _)| x) {
                        return Some(vec![p1]);
                    }
                    if hits.iter().all(|&(x, y)| x || y) {
                        return Some(vec![p1, p2]);
                    }
                }
            }
        }
    }
    None
}
