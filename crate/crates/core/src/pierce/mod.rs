//! Piercing algorithms. Each returns a [`PierceCertificate`] whose points
//! pierce every member and whose witness members are pairwise disjoint.

mod homothets;
mod lattice;
mod translates;

pub use homothets::greedy_pierce_homothets;
pub use lattice::{
    default_lattices, lattice_pierce, lattice_witness, tiling_lattice, union_area, LatticeRole, LatticeSpec,
    EXACT_AREA_LIMIT, PACKING_EPSILON,
};
pub use translates::{greedy_pierce, grid_pierce, grid_pierce_auto, hexagon_pierce, is_hexagon_base};

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::{Body, Family, FamilyIndex, FamilyKind, IntersectionGraph};
use crate::certificate::{body_contains_with, Cluster, Method, PierceCertificate, Refinement};
use crate::covers::PiercePattern;
use crate::error::{Error, Result};
use crate::geom::{ExactPoint, Scalar};
use crate::oracle;

/// Largest final cluster handed to the exact oracle.
pub const REFINE_BUDGET: usize = 12;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodChoice {
    Auto,
    Greedy,
    Grid,
    Lattice,
    Hexagon,
}

impl std::str::FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(MethodChoice::Auto),
            "greedy" => Ok(MethodChoice::Greedy),
            "grid" => Ok(MethodChoice::Grid),
            "lattice" => Ok(MethodChoice::Lattice),
            "hexagon" => Ok(MethodChoice::Hexagon),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PierceOptions {
    pub method: MethodChoice,
    pub refine: bool,
    pub seed: u64,
}

impl Default for PierceOptions {
    fn default() -> Self {
        PierceOptions { method: MethodChoice::Auto, refine: true, seed: 0 }
    }
}

/// Runs the requested method; `Auto` picks the most specific one.
pub fn pierce(f: &Family, opts: &PierceOptions) -> Result<PierceCertificate> {
    if f.kind == FamilyKind::Homothets {
        return match opts.method {
            MethodChoice::Auto | MethodChoice::Greedy => greedy_pierce_homothets(f, opts.refine, opts.seed),
            _ => Err(Error::InvalidFamily("only the greedy method handles homothets".into())),
        };
    }
    match opts.method {
        MethodChoice::Auto if is_hexagon_base(&f.base) => hexagon_pierce(f),
        MethodChoice::Auto | MethodChoice::Greedy => match greedy_pierce(f, opts.refine) {
            Err(Error::UnsupportedBase { .. }) => grid_pierce_auto(f),
            other => other,
        },
        MethodChoice::Grid => grid_pierce_auto(f),
        MethodChoice::Hexagon => hexagon_pierce(f),
        MethodChoice::Lattice => {
            let (cover, pack, _) = default_lattices(&f.base)?;
            lattice_pierce(f, &cover, &pack, opts.seed)
        }
    }
}

/// Orders scalars descending, for "topmost first".
pub(crate) fn desc(a: &Scalar, b: &Scalar) -> Ordering {
    b.cmp(a)
}

/// Floating-point value of `Σ wᵢ·xᵢ` with the magnitude `Σ |wᵢ·xᵢ|` that
/// bounds its rounding error.
#[derive(Copy, Clone)]
pub(crate) struct Shadow {
    approx: f64,
    mag: f64,
}

impl Shadow {
    pub(crate) fn of(terms: impl IntoIterator<Item = (f64, f64)>) -> Shadow {
        terms.into_iter().fold(Shadow { approx: 0.0, mag: 0.0 }, |s, (w, x)| Shadow {
            approx: s.approx + w * x,
            mag: s.mag + (w * x).abs(),
        })
    }

    /// Orders by the shadows, deferring to `exact` when they are too close
    /// to separate.
    pub(crate) fn cmp_or(&self, o: &Shadow, exact: impl FnOnce() -> Ordering) -> Ordering {
        let d = self.approx - o.approx;
        if d.is_finite() && d.abs() > 1e-9 * (self.mag + o.mag) {
            return if d < 0.0 { Ordering::Less } else { Ordering::Greater };
        }
        exact()
    }
}

pub(crate) fn to_f64s(xs: &[Scalar]) -> Vec<f64> {
    xs.iter().map(crate::geom::scalar::to_f64).collect()
}

pub(crate) fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `(y, x, index)` tie-break on translation vectors, highest coordinates first.
pub(crate) fn tie_break(f: &Family, i: usize, j: usize) -> Ordering {
    let (a, b) = (&f.members[i].t, &f.members[j].t);
    for k in (0..a.len()).rev() {
        match desc(&a[k], &b[k]) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    i.cmp(&j)
}

/// Seeds in `order` absorb their unassigned neighbors.
pub(crate) fn greedy_clusters(graph: &IntersectionGraph, order: &[usize]) -> Vec<(usize, Vec<usize>)> {
    let mut taken = vec![false; graph.len()];
    let mut out = Vec::new();
    for &i in order {
        if taken[i] {
            continue;
        }
        taken[i] = true;
        let mut members = vec![i];
        for &j in &graph.adj[i] {
            if !taken[j] {
                taken[j] = true;
                members.push(j);
            }
        }
        out.push((i, members));
    }
    out
}

/// Maps member indices of a certificate computed on `f.subfamily(order)`
/// back to `f`.
pub(crate) fn reindex(cert: &mut PierceCertificate, order: &[usize]) {
    for c in &mut cert.clusters {
        c.seed = order[c.seed];
        for m in &mut c.members {
            *m = order[*m];
        }
    }
    for w in &mut cert.witness {
        *w = order[*w];
    }
}

/// Adds, in index order, every member disjoint from all current witness
/// members.
pub(crate) fn augment_witness(index: &FamilyIndex, witness: &mut Vec<usize>) {
    let mut inside = vec![false; index.family.len()];
    for &w in witness.iter() {
        inside[w] = true;
    }
    for i in 0..inside.len() {
        if !inside[i] && index.neighbors(i).iter().all(|&j| !inside[j]) {
            inside[i] = true;
            witness.push(i);
        }
    }
}

/// The pattern points of one cluster that some member actually uses. Exact
/// points are built only when kept or when the floating-point test is
/// inconclusive.
fn used_points(
    f: &Family,
    bodies: &[Body],
    (seed, members): (usize, &[usize]),
    pattern: &PiercePattern,
    offsets: &[Vec<f64>],
) -> Result<Vec<ExactPoint>> {
    let seed = &f.members[seed];
    let (s, t) = (crate::geom::scalar::to_f64(&seed.s), to_f64s(&seed.t));
    let coords: Vec<Vec<f64>> = offsets.iter().map(|w| w.iter().zip(&t).map(|(w, t)| t + s * w).collect()).collect();
    let mut exact: Vec<Option<ExactPoint>> = vec![None; pattern.len()];
    let mut used = vec![false; pattern.len()];
    for &m in members {
        let hit = |k: usize, exact: &mut Vec<Option<ExactPoint>>| {
            body_contains_with(&bodies[m], &coords[k], || exact[k].get_or_insert_with(|| pattern.point_for(seed, k)).clone())
        };
        let k = (0..pattern.len())
            .find(|&k| used[k] && hit(k, &mut exact))
            .or_else(|| (0..pattern.len()).find(|&k| !used[k] && hit(k, &mut exact)))
            .ok_or_else(|| Error::VerificationFailed(format!("pattern misses member {m}")))?;
        used[k] = true;
    }
    Ok((0..pattern.len())
        .filter(|&k| used[k])
        .map(|k| exact[k].take().unwrap_or_else(|| pattern.point_for(seed, k)))
        .collect())
}

/// Pierces each cluster with the pattern anchored at its seed, optionally
/// replaces the last cluster's points by the exact optimum, and assembles
/// the certificate with the seeds as witness.
pub(crate) fn assemble(
    f: &Family,
    bodies: &[Body],
    clusters: Vec<(usize, Vec<usize>)>,
    pattern: &PiercePattern,
    method: Method,
    refine: bool,
) -> Result<PierceCertificate> {
    let offsets: Vec<Vec<f64>> = pattern.offsets().iter().map(ExactPoint::to_f64).collect();
    let per_cluster: Vec<Vec<ExactPoint>> = clusters
        .par_iter()
        .map(|(seed, members)| used_points(f, bodies, (*seed, members), pattern, &offsets))
        .collect::<Result<_>>()?;
    let mut per_cluster = per_cluster;
    let mut refinement = None;
    if refine {
        if let Some((_, members)) = clusters.last() {
            if members.len() <= REFINE_BUDGET {
                let last = per_cluster.last_mut().expect("nonempty");
                let (tau, pts) = oracle::exact_tau(&f.subfamily(members))?;
                refinement = Some(Refinement { cluster_size: members.len(), points_before: last.len(), points_after: tau.min(last.len()) });
                if tau < last.len() {
                    *last = pts;
                }
            }
        }
    }
    let mut points = Vec::new();
    let mut out = Vec::with_capacity(clusters.len());
    for ((seed, members), pts) in clusters.into_iter().zip(per_cluster) {
        let start = points.len();
        points.extend(pts);
        out.push(Cluster { seed, members, points: (start..points.len()).collect(), pattern_size: pattern.len() });
    }
    let witness = out.iter().map(|c| c.seed).collect();
    Ok(PierceCertificate { method, points, clusters: out, witness, factor: pattern.len() as u64, refinement, lattice: None })
}

#[cfg(test)]
mod tests;
