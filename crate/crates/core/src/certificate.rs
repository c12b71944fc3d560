//! Piercing certificates: points, clusters and a disjoint witness set
//! bounding `|points| ≤ factor·|witness|`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::{BBox, Body, Family, FamilyIndex, SpatialGrid};
use crate::error::{Error, Result};
use crate::geom::algebraic::Sign;
use crate::geom::{ExactPoint, Scalar};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Greedy,
    GreedyHomothets,
    Grid,
    Hexagon,
    Lattice,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Greedy => "greedy",
            Method::GreedyHomothets => "greedy-homothets",
            Method::Grid => "grid",
            Method::Hexagon => "hexagon",
            Method::Lattice => "lattice",
        }
    }
}

/// One cluster `S_i` with its seed `C_i` and the points that pierce it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cluster {
    pub seed: usize,
    pub members: Vec<usize>,
    pub points: Vec<usize>,
    /// Points the pattern offered before unused ones were dropped.
    pub pattern_size: usize,
}

/// Exact optimum substituted for the last cluster's pattern points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refinement {
    pub cluster_size: usize,
    pub points_before: usize,
    pub points_after: usize,
}

/// Area bookkeeping of the lattice method.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    #[serde(with = "crate::geom::serde_scalar")]
    pub union_area: Scalar,
    /// Whether `union_area` is exact or the sum of member areas.
    pub union_exact: bool,
    #[serde(with = "crate::geom::serde_scalar")]
    pub covering_cell: Scalar,
    #[serde(with = "crate::geom::serde_scalar")]
    pub packing_cell: Scalar,
    /// `⌊|⋃F| / covering cell⌋`.
    pub point_bound: u64,
    /// `⌈|⋃F| / packing cell⌉`; meaningful when the area is exact.
    pub witness_bound: u64,
    #[serde(with = "crate::geom::serde_scalar")]
    pub sandwich_ratio: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PierceCertificate {
    pub method: Method,
    pub points: Vec<ExactPoint>,
    pub clusters: Vec<Cluster>,
    pub witness: Vec<usize>,
    pub factor: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refinement: Option<Refinement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeReport>,
}

/// Outcome of a certificate check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub members_checked: usize,
    pub all_pierced: bool,
    pub witness_disjoint: bool,
    pub ratio_ok: bool,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.all_pierced && self.witness_disjoint && self.ratio_ok
    }
}

/// Closed containment with a floating-point shortcut for disks.
pub(crate) fn body_contains(body: &Body, p: &ExactPoint, pf: &[f64]) -> bool {
    body_contains_with(body, pf, || p.clone())
}

/// As [`body_contains`], building the exact point only when the
/// floating-point test cannot decide.
pub(crate) fn body_contains_with(body: &Body, pf: &[f64], exact: impl FnOnce() -> ExactPoint) -> bool {
    if let Body::Disk { center, radius } = body {
        let (cx, cy) = center.to_f64();
        let r = crate::geom::scalar::to_f64(radius);
        let (dx, dy) = (pf[0] - cx, pf[1] - cy);
        let (d2, r2) = (dx * dx + dy * dy, r * r);
        let mag = cx.abs() + cy.abs() + r + 1.0;
        if mag < 1e9 {
            let slack = 1e-9 * (r2 + mag * mag);
            if d2 < r2 - slack {
                return true;
            }
            if d2 > r2 + slack {
                return false;
            }
        }
        return exact().circle_sign(center, &(radius * radius)) != Sign::Positive;
    }
    body.contains(&exact())
}

/// Spatial lookup of exact points by floating-point position.
pub(crate) struct PointIndex {
    pub coords: Vec<Vec<f64>>,
    grid: SpatialGrid,
}

impl PointIndex {
    pub fn new(points: &[ExactPoint]) -> PointIndex {
        let coords: Vec<Vec<f64>> = points.iter().map(ExactPoint::to_f64).collect();
        let boxes = coords.iter().map(|c| BBox::padded(c.clone(), c.clone())).collect();
        PointIndex { coords, grid: SpatialGrid::new(boxes) }
    }

    pub fn near(&self, b: &BBox) -> Vec<usize> {
        if self.grid.is_empty() {
            return vec![];
        }
        self.grid.query(b)
    }
}

impl PierceCertificate {
    /// Checks every member against the points, the witness for pairwise
    /// disjointness, and the claimed ratio. All tests are exact.
    pub fn verify(&self, f: &Family) -> Result<Verification> {
        self.verify_members(f, None)
    }

    /// As [`verify`](Self::verify) but checks piercing on a seeded sample of
    /// `sample` members only.
    pub fn verify_sampled(&self, f: &Family, sample: usize, seed: u64) -> Result<Verification> {
        let mut idx: Vec<usize> = (0..f.len()).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        idx.truncate(sample);
        self.verify_members(f, Some(idx))
    }

    fn verify_members(&self, f: &Family, subset: Option<Vec<usize>>) -> Result<Verification> {
        if self.points.iter().any(|p| p.dim() != f.dim()) {
            return Err(Error::VerificationFailed("point dimension differs from the family".into()));
        }
        if self.witness.iter().any(|&i| i >= f.len()) {
            return Err(Error::VerificationFailed("witness index out of range".into()));
        }
        let index = PointIndex::new(&self.points);
        let assigned = self.assignment(f.len());
        let members = subset.unwrap_or_else(|| (0..f.len()).collect());
        let pierced = members.par_iter().all(|&i| {
            let body = f.realize(i);
            let hinted = assigned[i]
                .iter()
                .any(|&k| k < self.points.len() && body_contains(&body, &self.points[k], &index.coords[k]));
            hinted || index.near(&body.bbox()).into_iter().any(|k| body_contains(&body, &self.points[k], &index.coords[k]))
        });
        let mut w = self.witness.clone();
        w.sort_unstable();
        w.dedup();
        let disjoint = w.len() == self.witness.len() && {
            let sub = f.subfamily(&w);
            let idx = FamilyIndex::new(&sub);
            (0..sub.len()).into_par_iter().all(|i| idx.neighbors(i).is_empty())
        };
        let ratio_ok = (self.points.len() as u128) <= self.factor as u128 * self.witness.len() as u128;
        Ok(Verification { members_checked: members.len(), all_pierced: pierced, witness_disjoint: disjoint, ratio_ok })
    }

    /// Cluster point hints per member, used before the spatial lookup.
    fn assignment(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); n];
        for c in &self.clusters {
            for &m in &c.members {
                if m < n {
                    out[m].extend_from_slice(&c.points);
                }
            }
        }
        out
    }

    /// `|points| / |witness|`.
    pub fn ratio(&self) -> f64 {
        self.points.len() as f64 / self.witness.len().max(1) as f64
    }

    /// Fails with [`Error::VerificationFailed`] unless the check passes.
    pub fn check(&self, f: &Family) -> Result<()> {
        let v = self.verify(f)?;
        if v.ok() {
            Ok(())
        } else {
            Err(Error::VerificationFailed(format!(
                "pierced: {}, witness disjoint: {}, ratio within {}: {}",
                v.all_pierced, v.witness_disjoint, self.factor, v.ratio_ok
            )))
        }
    }
}
