//! Searches for covers of a polygon by translates of another polygon over
//! a finite candidate set, with exact residues.

use num_traits::{Signed, Zero};

use crate::geom::scalar::{ceil, floor, Scalar};
use crate::geom::{ConvexPolygon, Point};

/// Offsets `q` on the grid `step·Z²` for which `cover + q` meets `region`.
pub fn grid_candidates(region: &ConvexPolygon, cover: &ConvexPolygon, step: &Scalar) -> Vec<Point> {
    let (rlo, rhi) = region.bbox();
    let (clo, chi) = cover.bbox();
    let range = |lo: Scalar, hi: Scalar| {
        let (a, b) = (ceil(&(lo / step)), floor(&(hi / step)));
        num_iter(a, b).map(|k| Scalar::from_integer(k) * step).collect::<Vec<_>>()
    };
    let xs = range(&rlo.x - &chi.x, &rhi.x - &clo.x);
    let ys = range(&rlo.y - &chi.y, &rhi.y - &clo.y);
    let mut out = Vec::new();
    for y in &ys {
        for x in &xs {
            let q = Point::new(x.clone(), y.clone());
            if cover.translate(&q).intersects(region) {
                out.push(q);
            }
        }
    }
    out
}

fn num_iter(a: num_bigint::BigInt, b: num_bigint::BigInt) -> impl Iterator<Item = num_bigint::BigInt> {
    let mut cur = a;
    std::iter::from_fn(move || {
        if cur > b {
            return None;
        }
        let out = cur.clone();
        cur += 1;
        Some(out)
    })
}

fn total_area(pieces: &[ConvexPolygon]) -> Scalar {
    pieces.iter().map(ConvexPolygon::area).fold(Scalar::zero(), |a, b| a + b)
}

/// Repeatedly takes the candidate removing the most residue area; `None`
/// if `limit` translates do not finish the cover.
pub fn greedy_cover(region: &ConvexPolygon, cover: &ConvexPolygon, candidates: &[Point], limit: usize) -> Option<Vec<Point>> {
    let mut rest = vec![region.clone()];
    let mut chosen = Vec::new();
    while !rest.is_empty() {
        if chosen.len() == limit {
            return None;
        }
        let before = total_area(&rest);
        let mut best: Option<(Scalar, usize, Vec<ConvexPolygon>)> = None;
        for (i, q) in candidates.iter().enumerate() {
            let after = polygon_residue_many(&rest, &cover.translate(q));
            let gain = &before - total_area(&after);
            if best.as_ref().map_or(true, |b| gain > b.0) {
                best = Some((gain, i, after));
            }
        }
        let (gain, i, after) = best?;
        if !gain.is_positive() {
            return None;
        }
        chosen.push(candidates[i].clone());
        rest = after;
    }
    Some(chosen)
}

fn polygon_residue_many(pieces: &[ConvexPolygon], cutter: &ConvexPolygon) -> Vec<ConvexPolygon> {
    pieces.iter().flat_map(|p| p.subtract(cutter)).collect()
}

/// Exhaustive search for a cover by at most `k` candidates.
///
/// Some candidate must contain any given uncovered point, so the search
/// branches on the candidates containing the residue vertex with the
/// fewest such candidates. Complete for the candidate set.
pub fn search_cover(region: &ConvexPolygon, cover: &ConvexPolygon, candidates: &[Point], k: usize) -> Option<Vec<Point>> {
    let placed: Vec<ConvexPolygon> = candidates.iter().map(|q| cover.translate(q)).collect();
    let mut chosen = Vec::new();
    if dfs(&[region.clone()], &placed, &cover.area(), k, &mut chosen) {
        Some(chosen.into_iter().map(|i| candidates[i].clone()).collect())
    } else {
        None
    }
}

fn dfs(rest: &[ConvexPolygon], placed: &[ConvexPolygon], piece_area: &Scalar, k: usize, chosen: &mut Vec<usize>) -> bool {
    if rest.is_empty() {
        return true;
    }
    if k == 0 || total_area(rest) > piece_area * Scalar::from_integer(k.into()) {
        return false;
    }
    let mut pivot: Option<Vec<usize>> = None;
    for v in rest.iter().flat_map(|p| p.vertices()) {
        let hits: Vec<usize> = (0..placed.len()).filter(|&i| placed[i].contains_point(v)).collect();
        if pivot.as_ref().map_or(true, |p| hits.len() < p.len()) {
            pivot = Some(hits);
        }
    }
    for i in pivot.unwrap_or_default() {
        let next = polygon_residue_many(rest, &placed[i]);
        chosen.push(i);
        if dfs(&next, placed, piece_area, k - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}
