//! Exact transversal and packing numbers for small families.
//!
//! Piercing is reduced to a finite candidate set: every nonempty common
//! intersection of members is a convex region whose boundary is made of
//! member boundaries, so it contains a member vertex, a crossing of two
//! member boundaries, or is a whole member containing its own reference
//! point (disk: its center). Boxes use corners built from the members'
//! lower coordinates.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bodies::{Body, Family, FamilyIndex, IntersectionGraph};
use crate::certificate::body_contains;
use crate::error::{Error, Result};
use crate::geom::{ExactPoint, Point, Scalar};

pub const TAU_LIMIT: usize = 16;
pub const NU_LIMIT: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub tau: usize,
    pub tau_points: Vec<ExactPoint>,
    pub nu: usize,
    pub nu_members: Vec<usize>,
    pub candidates_used: usize,
}

fn check_size(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::TooLarge { n, limit });
    }
    Ok(())
}

/// Candidate piercing points, with the default limit.
pub fn candidate_points(f: &Family) -> Result<Vec<ExactPoint>> {
    candidate_points_with(f, TAU_LIMIT)
}

pub fn candidate_points_with(f: &Family, limit: usize) -> Result<Vec<ExactPoint>> {
    check_size(f.len(), limit)?;
    let bodies: Vec<Body> = (0..f.len()).map(|i| f.realize(i)).collect();
    let mut out: Vec<ExactPoint> = (0..f.len()).map(|i| ExactPoint::rational(f.reference_of(i))).collect();
    match &bodies[0] {
        Body::Polygon(_) => {
            let polys: Vec<_> = bodies
                .iter()
                .map(|b| match b {
                    Body::Polygon(p) => p,
                    _ => unreachable!("polygon family"),
                })
                .collect();
            for p in &polys {
                out.extend(p.vertices().iter().map(ExactPoint::from));
            }
            for i in 0..polys.len() {
                for j in i + 1..polys.len() {
                    if !polys[i].intersects(polys[j]) {
                        continue;
                    }
                    for (a, b) in polys[i].edges() {
                        for (c, d) in polys[j].edges() {
                            if let Some(x) = segment_crossing(a, b, c, d) {
                                out.push(x.into());
                            }
                        }
                    }
                }
            }
        }
        Body::Disk { .. } => {
            for i in 0..bodies.len() {
                for j in i + 1..bodies.len() {
                    if let (Body::Disk { center: c1, radius: r1 }, Body::Disk { center: c2, radius: r2 }) = (&bodies[i], &bodies[j]) {
                        out.extend(circle_crossings(c1, r1, c2, r2));
                    }
                }
            }
        }
        Body::Box { .. } => {
            let d = f.dim();
            let mut axes: Vec<Vec<Scalar>> = (0..d)
                .map(|k| {
                    let mut v: Vec<Scalar> = bodies
                        .iter()
                        .map(|b| match b {
                            Body::Box { lo, .. } => lo[k].clone(),
                            _ => unreachable!("box family"),
                        })
                        .collect();
                    v.sort();
                    v.dedup();
                    v
                })
                .collect();
            out.clear();
            let mut cur = vec![Scalar::from_integer(0.into()); d];
            product(&mut axes, 0, &mut cur, &mut out);
        }
    }
    Ok(out)
}

fn product(axes: &mut [Vec<Scalar>], k: usize, cur: &mut Vec<Scalar>, out: &mut Vec<ExactPoint>) {
    if k == axes.len() {
        out.push(ExactPoint::rational(cur.clone()));
        return;
    }
    for i in 0..axes[k].len() {
        cur[k] = axes[k][i].clone();
        product(axes, k + 1, cur, out);
    }
}

/// Common point of two closed segments that are not parallel.
pub(crate) fn segment_crossing(a: &Point, b: &Point, c: &Point, d: &Point) -> Option<Point> {
    let r = b - a;
    let s = d - c;
    let den = r.cross(&s);
    if num_traits::Zero::is_zero(&den) {
        return None;
    }
    let ac = c - a;
    let t = ac.cross(&s) / &den;
    let u = ac.cross(&r) / &den;
    let unit = |x: &Scalar| *x >= Scalar::from_integer(0.into()) && *x <= Scalar::from_integer(1.into());
    (unit(&t) && unit(&u)).then(|| a + &r.scale(&t))
}

/// Intersection points of two circles, exact in `Q(√D)`.
pub(crate) fn circle_crossings(c1: &Point, r1: &Scalar, c2: &Point, r2: &Scalar) -> Vec<ExactPoint> {
    use num_traits::{Signed, Zero};
    let d = c2 - c1;
    let dd = d.norm2();
    if dd.is_zero() {
        return vec![];
    }
    // foot of the radical line at c1 + a·d, half-chord h·|d|
    let a = (r1 * r1 - r2 * r2 + &dd) / (Scalar::from_integer(2.into()) * &dd);
    let h2 = r1 * r1 / &dd - &a * &a;
    if h2.is_negative() {
        return vec![];
    }
    let foot = c1 + &d.scale(&a);
    let base = vec![foot.x.clone(), foot.y.clone()];
    if h2.is_zero() {
        return vec![ExactPoint::rational(base)];
    }
    let perp = d.perp();
    vec![
        ExactPoint::with_surd(base.clone(), h2.clone(), vec![perp.x.clone(), perp.y.clone()]),
        ExactPoint::with_surd(base, h2, vec![-perp.x, -perp.y]),
    ]
}

/// Membership masks of the candidates, deduplicated and with dominated
/// masks removed. Returns `(mask, candidate index)` pairs.
fn maximal_masks(f: &Family, cands: &[ExactPoint]) -> Vec<(u64, usize)> {
    let bodies: Vec<Body> = (0..f.len()).map(|i| f.realize(i)).collect();
    let boxes: Vec<_> = bodies.iter().map(Body::bbox).collect();
    let mut seen: HashMap<u64, usize> = HashMap::new();
    let mut masks: Vec<(u64, usize)> = Vec::new();
    for (k, p) in cands.iter().enumerate() {
        let pf = p.to_f64();
        let mut m = 0u64;
        for (i, b) in bodies.iter().enumerate() {
            let bb = &boxes[i];
            let near = (0..pf.len()).all(|d| bb.lo[d] <= pf[d] && pf[d] <= bb.hi[d]);
            if near && body_contains(b, p, &pf) {
                m |= 1 << i;
            }
        }
        if m != 0 && !seen.contains_key(&m) {
            seen.insert(m, k);
            masks.push((m, k));
        }
    }
    prune_dominated(masks)
}

/// Drops masks contained in another, keeping the earliest tag on ties.
fn prune_dominated(mut masks: Vec<(u64, usize)>) -> Vec<(u64, usize)> {
    masks.sort_by_key(|&(m, k)| (std::cmp::Reverse(m.count_ones()), k));
    let mut kept: Vec<(u64, usize)> = Vec::new();
    for (m, k) in masks {
        if !kept.iter().any(|&(o, _)| o & m == m) {
            kept.push((m, k));
        }
    }
    kept
}

/// Minimum number of sets covering `universe`. Returns chosen set indices.
pub fn min_set_cover(universe: u64, sets: &[u64]) -> Option<Vec<usize>> {
    if sets.iter().fold(0, |a, s| a | s) & universe != universe {
        return None;
    }
    let tagged = prune_dominated(sets.iter().enumerate().map(|(k, &m)| (m & universe, k)).filter(|&(m, _)| m != 0).collect());
    let reduced: Vec<u64> = tagged.iter().map(|&(m, _)| m).collect();
    Some(exact_cover(universe, &reduced).into_iter().map(|s| tagged[s].1).collect())
}

fn exact_cover(universe: u64, sets: &[u64]) -> Vec<usize> {
    let n = 64 - universe.leading_zeros() as usize;
    let by_elem: Vec<Vec<usize>> = (0..n)
        .map(|e| {
            let mut v: Vec<usize> = (0..sets.len()).filter(|&s| sets[s] >> e & 1 == 1).collect();
            v.sort_by_key(|&s| (std::cmp::Reverse(sets[s].count_ones()), s));
            v
        })
        .collect();
    // elements that share a set with e
    let reach: Vec<u64> = by_elem.iter().map(|v| v.iter().fold(0, |a, &s| a | sets[s])).collect();
    let mut best = greedy_cover(universe, sets);
    let mut chosen = Vec::new();
    cover_dfs(universe, sets, &by_elem, &reach, &mut chosen, &mut best);
    best
}

fn greedy_cover(universe: u64, sets: &[u64]) -> Vec<usize> {
    let mut left = universe;
    let mut out = Vec::new();
    while left != 0 {
        let s = (0..sets.len()).max_by_key(|&s| ((sets[s] & left).count_ones(), std::cmp::Reverse(s))).expect("coverable");
        out.push(s);
        left &= !sets[s];
    }
    out
}

/// Lower bound: elements pairwise sharing no set each need their own set.
fn packing_bound(left: u64, reach: &[u64]) -> usize {
    let mut free = left;
    let mut count = 0;
    while free != 0 {
        let e = free.trailing_zeros() as usize;
        count += 1;
        free &= !reach[e];
        free &= !(1 << e);
    }
    count
}

fn cover_dfs(left: u64, sets: &[u64], by_elem: &[Vec<usize>], reach: &[u64], chosen: &mut Vec<usize>, best: &mut Vec<usize>) {
    if left == 0 {
        if chosen.len() < best.len() {
            *best = chosen.clone();
        }
        return;
    }
    if chosen.len() + packing_bound(left, reach) >= best.len() {
        return;
    }
    let mut e = usize::MAX;
    let mut fewest = usize::MAX;
    let mut bits = left;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        if by_elem[i].len() < fewest {
            fewest = by_elem[i].len();
            e = i;
        }
    }
    for &s in &by_elem[e] {
        chosen.push(s);
        cover_dfs(left & !sets[s], sets, by_elem, reach, chosen, best);
        chosen.pop();
    }
}

/// Exact `τ(F)` with a piercing set attaining it.
pub fn exact_tau(f: &Family) -> Result<(usize, Vec<ExactPoint>)> {
    let (t, pts, _) = tau_with_count(f)?;
    Ok((t, pts))
}

fn tau_with_count(f: &Family) -> Result<(usize, Vec<ExactPoint>, usize)> {
    check_size(f.len(), TAU_LIMIT)?;
    let cands = candidate_points(f)?;
    let masks = maximal_masks(f, &cands);
    let sets: Vec<u64> = masks.iter().map(|&(m, _)| m).collect();
    let universe = if f.len() == 64 { u64::MAX } else { (1u64 << f.len()) - 1 };
    let pick = min_set_cover(universe, &sets)
        .ok_or_else(|| Error::VerificationFailed("candidate set misses a member".into()))?;
    let pts: Vec<ExactPoint> = pick.iter().map(|&s| cands[masks[s].1].clone()).collect();
    Ok((pts.len(), pts, cands.len()))
}

/// Maximum independent set of a graph on at most 64 vertices.
pub fn max_independent_set(g: &IntersectionGraph) -> Vec<usize> {
    let n = g.len();
    assert!(n <= 64, "at most 64 vertices");
    let adj: Vec<u64> = g.adj.iter().map(|nb| nb.iter().fold(0u64, |a, &j| a | 1 << j)).collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = greedy_independent(all, &adj);
    let mut cur = Vec::new();
    mis_dfs(all, &adj, &mut cur, &mut best);
    best.sort_unstable();
    best
}

fn greedy_independent(mut cand: u64, adj: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    while cand != 0 {
        let mut bits = cand;
        let mut v = 64;
        let mut low = u32::MAX;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let d = (adj[i] & cand).count_ones();
            if d < low {
                low = d;
                v = i;
            }
        }
        out.push(v);
        cand &= !adj[v] & !(1 << v);
    }
    out
}

/// Number of cliques in a greedy clique partition of `cand`; bounds the
/// independence number from above.
fn clique_cover_bound(mut cand: u64, adj: &[u64]) -> usize {
    let mut count = 0;
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        let mut clique = 1u64 << v;
        let mut common = adj[v] & cand;
        while common != 0 {
            let w = common.trailing_zeros() as usize;
            clique |= 1 << w;
            common &= adj[w];
            common &= !(1 << w);
        }
        cand &= !clique;
        count += 1;
    }
    count
}

fn mis_dfs(cand: u64, adj: &[u64], cur: &mut Vec<usize>, best: &mut Vec<usize>) {
    if cand == 0 {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        return;
    }
    if cur.len() + clique_cover_bound(cand, adj) <= best.len() {
        return;
    }
    // branch on the vertex of largest degree; an isolated vertex is always taken
    let mut bits = cand;
    let mut v = 64;
    let mut high = 0;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let d = (adj[i] & cand).count_ones();
        if v == 64 || d > high {
            high = d;
            v = i;
        }
    }
    cur.push(v);
    mis_dfs(cand & !adj[v] & !(1 << v), adj, cur, best);
    cur.pop();
    if high > 0 {
        mis_dfs(cand & !(1 << v), adj, cur, best);
    }
}

/// Exact `ν(F)` with a pairwise disjoint subfamily attaining it.
pub fn exact_nu(f: &Family) -> Result<(usize, Vec<usize>)> {
    check_size(f.len(), NU_LIMIT)?;
    let g = FamilyIndex::new(f).graph();
    let set = max_independent_set(&g);
    Ok((set.len(), set))
}

/// Both numbers with their witnesses.
pub fn solve(f: &Family) -> Result<OracleResult> {
    let (tau, tau_points, candidates_used) = tau_with_count(f)?;
    let (nu, nu_members) = exact_nu(f)?;
    Ok(OracleResult { tau, tau_points, nu, nu_members, candidates_used })
}

/// Fewest cliques partitioning the vertices, by exhaustive assignment.
pub fn clique_partition_number(g: &IntersectionGraph) -> usize {
    let n = g.len();
    let mut best = n;
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    partition_dfs(0, g, &mut cliques, &mut best);
    best
}

fn partition_dfs(v: usize, g: &IntersectionGraph, cliques: &mut Vec<Vec<usize>>, best: &mut usize) {
    if cliques.len() >= *best {
        return;
    }
    if v == g.len() {
        *best = cliques.len();
        return;
    }
    for k in 0..cliques.len() {
        if cliques[k].iter().all(|&u| g.has_edge(u, v)) {
            cliques[k].push(v);
            partition_dfs(v + 1, g, cliques, best);
            cliques[k].pop();
        }
    }
    cliques.push(vec![v]);
    partition_dfs(v + 1, g, cliques, best);
    cliques.pop();
}
