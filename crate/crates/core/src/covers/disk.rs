//! Exact coverage check for a disk (or its lower half) by equal disks with
//! centers in `Q(√3)`.
//!
//! The region is covered iff (a) every arc of a cover circle whose sample
//! lies in the interior of the region is inside another cover disk and
//! (b) every arc of the region boundary is inside some cover disk. Arcs
//! are cut at all pairwise curve intersections.

use num_traits::One;

use crate::error::{Error, Result};
use crate::geom::algebraic::{Sign, Surd3};
use crate::geom::scalar::{int, rat, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct P3 {
    pub x: Surd3,
    pub y: Surd3,
}

impl P3 {
    pub fn new(x: Surd3, y: Surd3) -> P3 {
        P3 { x, y }
    }

    fn sub(&self, o: &P3) -> P3 {
        P3::new(&self.x - &o.x, &self.y - &o.y)
    }

    fn add(&self, o: &P3) -> P3 {
        P3::new(&self.x + &o.x, &self.y + &o.y)
    }

    fn scale(&self, k: &Surd3) -> P3 {
        P3::new(&self.x * k, &self.y * k)
    }

    fn norm2(&self) -> Surd3 {
        &self.x.square() + &self.y.square()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Circle {
    pub c: P3,
    pub r: Scalar,
}

impl Circle {
    fn r2(&self) -> Surd3 {
        Surd3::rat(&self.r * &self.r)
    }

    /// Sign of `|p − c|² − r²`.
    fn side(&self, p: &P3) -> Sign {
        (&p.sub(&self.c).norm2() - &self.r2()).sign()
    }

    /// Half-angle tangent parameter of a point on the circle; `None` is
    /// the leftmost point.
    fn param(&self, p: &P3) -> Option<Surd3> {
        let d = p.sub(&self.c);
        let den = &d.x + &Surd3::rat(self.r.clone());
        if den.is_zero() {
            return None;
        }
        d.y.div(&den)
    }

    fn at(&self, t: &Surd3) -> P3 {
        let one = Surd3::rat(Scalar::one());
        let t2 = t.square();
        let den = (&one + &t2).recip().expect("1 + t² > 0");
        let cos = &(&one - &t2) * &den;
        let sin = &(t.scale(&int(2))) * &den;
        let r = Surd3::rat(self.r.clone());
        P3::new(&self.c.x + &(&r * &cos), &self.c.y + &(&r * &sin))
    }
}

fn cmp(a: &Surd3, b: &Surd3) -> std::cmp::Ordering {
    match (a - b).sign() {
        Sign::Negative => std::cmp::Ordering::Less,
        Sign::Zero => std::cmp::Ordering::Equal,
        Sign::Positive => std::cmp::Ordering::Greater,
    }
}

fn no_sqrt() -> Error {
    Error::VerificationFailed("arrangement vertex outside Q(√3)".into())
}

fn circle_circle(a: &Circle, b: &Circle) -> Result<Vec<P3>> {
    let d = b.c.sub(&a.c);
    let dd = d.norm2();
    if dd.is_zero() {
        return Ok(vec![]);
    }
    let half = Surd3::rat(rat(1, 2));
    // foot of the radical line at c_a + k·d
    let k = (&(&(&a.r2() - &b.r2()) + &dd) * &half).div(&dd).expect("nonzero");
    let h2 = &a.r2().div(&dd).expect("nonzero") - &k.square();
    let foot = a.c.add(&d.scale(&k));
    match h2.sign() {
        Sign::Negative => Ok(vec![]),
        Sign::Zero => Ok(vec![foot]),
        Sign::Positive => {
            let h = h2.sqrt().ok_or_else(no_sqrt)?;
            let perp = P3::new(-d.y.clone(), d.x.clone()).scale(&h);
            Ok(vec![foot.add(&perp), foot.sub(&perp)])
        }
    }
}

/// Intersections of a circle with the horizontal line `y = y0`.
fn circle_line(a: &Circle, y0: &Surd3) -> Result<Vec<P3>> {
    let dy = y0 - &a.c.y;
    let h2 = &a.r2() - &dy.square();
    match h2.sign() {
        Sign::Negative => Ok(vec![]),
        Sign::Zero => Ok(vec![P3::new(a.c.x.clone(), y0.clone())]),
        Sign::Positive => {
            let h = h2.sqrt().ok_or_else(no_sqrt)?;
            Ok(vec![P3::new(&a.c.x - &h, y0.clone()), P3::new(&a.c.x + &h, y0.clone())])
        }
    }
}

/// Samples one point in the relative interior of every arc of `circle`
/// cut at `cuts`.
fn arc_samples(circle: &Circle, cuts: &[P3]) -> Vec<P3> {
    let mut ts: Vec<Surd3> = Vec::new();
    let mut leftmost = false;
    for p in cuts {
        match circle.param(p) {
            Some(t) => ts.push(t),
            None => leftmost = true,
        }
    }
    ts.sort_by(cmp);
    ts.dedup_by(|a, b| cmp(a, b).is_eq());
    let one = Surd3::rat(Scalar::one());
    let mut samples: Vec<Surd3> = Vec::new();
    if ts.is_empty() {
        samples.push(Surd3::zero());
    } else {
        let half = Surd3::rat(rat(1, 2));
        for w in ts.windows(2) {
            samples.push(&(&w[0] + &w[1]) * &half);
        }
        let (first, last) = (ts[0].clone(), ts[ts.len() - 1].clone());
        if leftmost {
            // the cut at infinity splits the wrap-around arc in two
            samples.push(&last + &one);
            samples.push(&first - &one);
        } else {
            samples.push(&last + &one);
        }
    }
    samples.iter().map(|t| circle.at(t)).collect()
}

/// Region: the disk `region` intersected with `y ≤ region.c.y` when
/// `lower_half` is set.
pub(crate) fn verify_disk_cover(region: &Circle, lower_half: bool, covers: &[Circle]) -> Result<()> {
    let mut circles: Vec<Circle> = Vec::new();
    for c in covers {
        let dup = circles.iter().any(|d| d.c == c.c && d.r == c.r);
        if !dup {
            circles.push(c.clone());
        }
    }
    let y0 = region.c.y.clone();
    let inside_region = |p: &P3, strict: bool| {
        let s = region.side(p);
        let below = (&p.y - &y0).sign();
        let ok_disk = if strict { s == Sign::Negative } else { s != Sign::Positive };
        let ok_half = !lower_half || if strict { below == Sign::Negative } else { below != Sign::Positive };
        ok_disk && ok_half
    };
    let covered_except = |p: &P3, skip: Option<usize>| {
        circles.iter().enumerate().any(|(k, c)| Some(k) != skip && c.side(p) != Sign::Positive)
    };

    // (a) cover circle arcs
    for (j, cj) in circles.iter().enumerate() {
        let mut cuts = circle_circle(cj, region)?;
        if lower_half {
            cuts.extend(circle_line(cj, &y0)?);
        }
        for (k, ck) in circles.iter().enumerate() {
            if k != j {
                cuts.extend(circle_circle(cj, ck)?);
            }
        }
        for s in arc_samples(cj, &cuts) {
            if inside_region(&s, true) && !covered_except(&s, Some(j)) {
                return Err(Error::VerificationFailed(format!("uncovered boundary arc of cover disk {j}")));
            }
        }
    }

    // (b) region boundary arcs
    let mut cuts: Vec<P3> = Vec::new();
    if lower_half {
        cuts.extend(circle_line(region, &y0)?);
    }
    for c in &circles {
        cuts.extend(circle_circle(region, c)?);
    }
    for s in arc_samples(region, &cuts) {
        if inside_region(&s, false) && !covered_except(&s, None) {
            return Err(Error::VerificationFailed("uncovered arc of the region boundary".into()));
        }
    }
    if lower_half {
        let r = Surd3::rat(region.r.clone());
        let mut xs: Vec<Surd3> = vec![&region.c.x - &r, &region.c.x + &r];
        for c in &circles {
            for p in circle_line(c, &y0)? {
                if cmp(&p.x, &xs[0]).is_gt() && cmp(&p.x, &xs[1]).is_lt() {
                    xs.push(p.x);
                }
            }
        }
        xs.sort_by(cmp);
        xs.dedup_by(|a, b| cmp(a, b).is_eq());
        let half = Surd3::rat(rat(1, 2));
        for w in xs.windows(2) {
            let s = P3::new(&(&w[0] + &w[1]) * &half, y0.clone());
            if !covered_except(&s, None) {
                return Err(Error::VerificationFailed("uncovered piece of the chord".into()));
            }
        }
    }
    Ok(())
}
