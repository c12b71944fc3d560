use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{assemble, dot, greedy_clusters, tie_break, to_f64s, Shadow};
use crate::bodies::{Body, Family, FamilyIndex, FamilyKind};
use crate::certificate::{Method, PierceCertificate};
use crate::covers::homothet_pattern;
use crate::error::{Error, Result};
use crate::geom::scalar::to_f64;

/// Members per cluster whose containment witness is rebuilt and checked.
const WITNESS_SAMPLE: usize = 3;

/// Smallest-first greedy decomposition; equal scales are taken topmost
/// first. Each cluster is pierced by the homothet pattern scaled by the
/// seed's factor.
pub fn greedy_pierce_homothets(f: &Family, refine: bool, seed: u64) -> Result<PierceCertificate> {
    if f.kind != FamilyKind::Homothets {
        return Err(Error::InvalidFamily("expected a family of homothets".into()));
    }
    let pattern = homothet_pattern(&f.base)?;
    let reach = f.base.support(&pattern.up);
    let (up, reach_f) = (to_f64s(&pattern.up), to_f64(&reach));
    let shadows: Vec<(Shadow, Shadow)> = f
        .members
        .par_iter()
        .map(|m| {
            let s = to_f64(&m.s);
            (Shadow::of([(1.0, s)]), Shadow::of(up.iter().copied().zip(to_f64s(&m.t)).chain([(reach_f, s)])))
        })
        .collect();
    let height = |i: usize| &reach * &f.members[i].s + dot(&pattern.up, &f.members[i].t);
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.par_sort_by(|&i, &j| {
        let ((si, hi), (sj, hj)) = (&shadows[i], &shadows[j]);
        si.cmp_or(sj, || f.members[i].s.cmp(&f.members[j].s))
            .then_with(|| hj.cmp_or(hi, || height(j).cmp(&height(i))))
            .then_with(|| tie_break(f, i, j))
    });
    let index = FamilyIndex::new(f);
    let clusters = greedy_clusters(&index.graph(), &order);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (s, members) in &clusters {
        let mut sample: Vec<usize> = members.iter().copied().filter(|j| j != s).collect();
        sample.shuffle(&mut rng);
        sample.truncate(WITNESS_SAMPLE);
        for j in sample {
            check_containment(f, index.body(*s), *s, index.body(j), j)?;
        }
    }
    assemble(f, index.bodies(), clusters, &pattern, Method::GreedyHomothets, refine)
}

/// For a seed `A` and a member `B` with `s_A ≤ s_B` meeting at `p`, the body
/// `p + (s_A/s_B)(B − p)` is a translate of `A` inside `B` that meets `A`.
fn check_containment(f: &Family, a: &Body, i: usize, b: &Body, j: usize) -> Result<()> {
    let (si, sj) = (&f.members[i].s, &f.members[j].s);
    if si > sj {
        return Err(Error::VerificationFailed(format!("member {j} is smaller than its seed {i}")));
    }
    let p = a
        .common_point(b)
        .ok_or_else(|| Error::VerificationFailed(format!("member {j} does not meet seed {i}")))?;
    let shrunk = b.homothety(&p, &(si / sj));
    let ok = b.contains_body(&shrunk)? && shrunk.intersects(a)?;
    if !ok {
        return Err(Error::VerificationFailed(format!("containment witness fails for member {j}")));
    }
    Ok(())
}
