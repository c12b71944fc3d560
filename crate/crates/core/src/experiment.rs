//! Seeded batches: ratio experiments, conjecture trials and benchmarks.

use std::time::Instant;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::{ConvexBody, Family, FamilyKind};
use crate::error::{Error, Result};
use crate::generators::{named_base, random_family};
use crate::geom::scalar::{fmt_scalar, int, rat, to_f64};
use crate::geom::{ConvexPolygon, Scalar};
use crate::io::InstanceFile;
use crate::oracle;
use crate::pierce::{pierce, union_area, MethodChoice, PierceOptions, EXACT_AREA_LIMIT};

/// Families up to this size also get exact `τ` and `ν`.
pub const ORACLE_SIZE: usize = 12;
/// Members whose piercing is checked in a sampled benchmark verification.
pub const BENCH_SAMPLE: usize = 1000;

/// One verified run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub instance: String,
    pub base: String,
    pub kind: String,
    pub method: String,
    pub n: usize,
    pub points: usize,
    pub witness: usize,
    pub factor: u64,
    pub ratio: f64,
    pub tau: Option<usize>,
    pub nu: Option<usize>,
    pub wall_ms: f64,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub base: String,
    pub kind: FamilyKind,
    pub method: MethodChoice,
    pub n_range: (usize, usize),
    pub trials: usize,
    pub seed: u64,
}

/// Largest observed ratio of one `(base, kind, method, n)` configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub base: String,
    pub kind: String,
    pub method: String,
    pub n: usize,
    pub trials: usize,
    pub max_ratio: f64,
    pub factor: u64,
    pub max_tau_over_nu: Option<f64>,
}

/// Deterministic per-trial seed.
pub fn trial_seed(seed: u64, a: u64, b: u64) -> u64 {
    let mut x = seed ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    x ^= x >> 31;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^ (x >> 29)
}

/// Side of the square the translations are drawn from: about three
/// neighbors per member on average.
fn spread(base: &ConvexBody, n: usize) -> Scalar {
    let extent = match &base.shape {
        crate::bodies::Shape::Polygon(p) => {
            let (lo, hi) = p.bbox();
            to_f64(&std::cmp::max(&hi.x - &lo.x, &hi.y - &lo.y))
        }
        crate::bodies::Shape::Disk { radius, .. } => 2.0 * to_f64(radius),
        crate::bodies::Shape::Box { sides } => sides.iter().map(to_f64).fold(0.0, f64::max),
    };
    let side = extent * (n as f64).powf(1.0 / base.dim() as f64) * 0.8;
    rat((side * 8.0).ceil().max(1.0) as i64, 8)
}

pub fn experiment_family(base: &ConvexBody, kind: FamilyKind, n: usize, seed: u64) -> Result<Family> {
    random_family(base, n, &spread(base, n), kind, (&rat(1, 2), &int(2)), seed)
}

/// Runs every trial, verifying each certificate exactly. A failed check or
/// a ratio above the factor aborts the batch.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    let (lo, hi) = cfg.n_range;
    if lo == 0 || lo > hi {
        return Err(Error::InvalidFamily(format!("bad size range {lo}..={hi}")));
    }
    let jobs: Vec<(usize, usize)> = (lo..=hi).flat_map(|n| (0..cfg.trials).map(move |t| (n, t))).collect();
    jobs.par_iter().map(|&(n, t)| run_trial(cfg, n, t)).collect()
}

fn run_trial(cfg: &ExperimentConfig, n: usize, trial: usize) -> Result<ReportRow> {
    let seed = trial_seed(cfg.seed, n as u64, trial as u64);
    let base = named_base(&cfg.base, seed)?;
    let f = experiment_family(&base, cfg.kind, n, seed)?;
    let opts = PierceOptions { method: cfg.method, refine: true, seed };
    let start = Instant::now();
    let cert = pierce(&f, &opts)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    cert.check(&f)?;
    let (tau, nu) = if n <= ORACLE_SIZE {
        let r = oracle::solve(&f)?;
        if cert.witness.len() > r.nu || r.tau > cert.points.len() {
            return Err(Error::VerificationFailed(format!("oracle bracket broken on {} n={n} trial {trial}", cfg.base)));
        }
        (Some(r.tau), Some(r.nu))
    } else {
        (None, None)
    };
    Ok(ReportRow {
        instance: format!("{}-{}-n{n}-t{trial}", cfg.base, cfg.kind.name()),
        base: cfg.base.clone(),
        kind: cfg.kind.name().into(),
        method: cert.method.name().into(),
        n,
        points: cert.points.len(),
        witness: cert.witness.len(),
        factor: cert.factor,
        ratio: cert.ratio(),
        tau,
        nu,
        wall_ms,
    })
}

/// Per-configuration maxima, in first-appearance order.
pub fn summarize(rows: &[ReportRow]) -> Vec<Summary> {
    let mut out: Vec<Summary> = Vec::new();
    for r in rows {
        let tn = r.tau.zip(r.nu).map(|(t, v)| t as f64 / v as f64);
        match out.iter_mut().find(|s| s.base == r.base && s.kind == r.kind && s.method == r.method && s.n == r.n) {
            Some(s) => {
                s.trials += 1;
                s.max_ratio = s.max_ratio.max(r.ratio);
                s.factor = s.factor.max(r.factor);
                s.max_tau_over_nu = match (s.max_tau_over_nu, tn) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    (a, b) => a.or(b),
                };
            }
            None => out.push(Summary {
                base: r.base.clone(),
                kind: r.kind.clone(),
                method: r.method.clone(),
                n: r.n,
                trials: 1,
                max_ratio: r.ratio,
                factor: r.factor,
                max_tau_over_nu: tn,
            }),
        }
    }
    out
}

/// One conjecture trial: exact union area against `τ` and `ν`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjectureRecord {
    pub trial: usize,
    pub n: usize,
    pub union_area: String,
    pub body_area: String,
    /// `|⋃F| / |S|`.
    pub cover_ratio: f64,
    pub tau: usize,
    pub nu: usize,
    /// `τ ≤ |⋃F| / |S|`.
    pub tau_bound_holds: bool,
    /// `4ν ≥ |⋃F| / |S|`.
    pub nu_bound_holds: bool,
    pub instance: InstanceFile,
}

impl ConjectureRecord {
    /// `τ·|S| / |⋃F|`.
    pub fn tau_slack(&self) -> f64 {
        self.tau as f64 / self.cover_ratio
    }

    /// `4ν·|S| / |⋃F|`.
    pub fn nu_slack(&self) -> f64 {
        4.0 * self.nu as f64 / self.cover_ratio
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub trials: usize,
    pub max_tau_slack: f64,
    pub min_nu_slack: f64,
    pub counterexamples: Vec<ConjectureRecord>,
    /// Trials that set a new running extreme, plus every counterexample.
    pub extremal: Vec<ConjectureRecord>,
}

/// Random translate families of a centrally symmetric polygon `base` with
/// `1 ≤ n ≤ n_max`.
pub fn run_conjecture(base: &ConvexBody, trials: usize, n_max: usize, seed: u64) -> Result<ConjectureReport> {
    let Some(poly) = base.as_polygon().filter(|p| p.is_centrally_symmetric()) else {
        return Err(Error::NotCentrallySymmetric);
    };
    let limit = EXACT_AREA_LIMIT.min(oracle::TAU_LIMIT);
    if n_max == 0 || n_max > limit {
        return Err(Error::TooLarge { n: n_max, limit });
    }
    let records: Vec<ConjectureRecord> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = trial_seed(seed, t as u64, 0);
            let n = 1 + (s % n_max as u64) as usize;
            let f = experiment_family(base, FamilyKind::Translates, n, s)?;
            conjecture_record(&f, poly, t)
        })
        .collect::<Result<_>>()?;
    let mut report =
        ConjectureReport { trials, max_tau_slack: 0.0, min_nu_slack: f64::INFINITY, counterexamples: vec![], extremal: vec![] };
    for r in records {
        let bad = !(r.tau_bound_holds && r.nu_bound_holds);
        let extreme = r.tau_slack() > report.max_tau_slack || r.nu_slack() < report.min_nu_slack;
        report.max_tau_slack = report.max_tau_slack.max(r.tau_slack());
        report.min_nu_slack = report.min_nu_slack.min(r.nu_slack());
        if bad {
            report.counterexamples.push(r.clone());
        }
        if bad || extreme {
            report.extremal.push(r);
        }
    }
    Ok(report)
}

pub fn conjecture_record(f: &Family, base: &ConvexPolygon, trial: usize) -> Result<ConjectureRecord> {
    let polys: Vec<ConvexPolygon> = (0..f.len())
        .map(|i| match f.realize(i) {
            crate::bodies::Body::Polygon(p) => Ok(p),
            _ => Err(Error::NotCentrallySymmetric),
        })
        .collect::<Result<_>>()?;
    let (union, exact) = union_area(&polys);
    if !exact {
        return Err(Error::TooLarge { n: f.len(), limit: EXACT_AREA_LIMIT });
    }
    let area = base.area();
    let cover = &union / &area;
    let r = oracle::solve(f)?;
    Ok(ConjectureRecord {
        trial,
        n: f.len(),
        union_area: fmt_scalar(&union),
        body_area: fmt_scalar(&area),
        cover_ratio: cover.to_f64().unwrap_or(f64::NAN),
        tau: r.tau,
        nu: r.nu,
        tau_bound_holds: int(r.tau as i64) <= cover,
        nu_bound_holds: int(4 * r.nu as i64) >= cover,
        instance: InstanceFile::from_family(f),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub n: usize,
    pub base: String,
    pub seed: u64,
    pub build_ms: f64,
    pub pierce_ms: f64,
    pub verify_ms: f64,
    pub points: usize,
    pub witness: usize,
    pub points_per_sec: f64,
    pub members_per_sec: f64,
    pub members_checked: usize,
    pub verified: bool,
}

/// `n` random unit disks or unit squares with about three neighbors each.
/// Coordinates lie on the grid `Z/1000` at every size, so the cost of the
/// rational arithmetic does not drift with `n`.
pub fn bench_family(base: &str, n: usize, seed: u64) -> Result<Family> {
    let body = match base {
        "disk" => ConvexBody::unit_disk(),
        "square" => ConvexBody::unit_square(),
        other => return Err(Error::Parse(format!("bench base must be disk or square, got {other:?}"))),
    };
    let side = (2000.0 * (n as f64).sqrt()).ceil().max(1000.0) as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ts = (0..n).map(|_| vec![rat(rng.gen_range(0..=side), 1000), rat(rng.gen_range(0..=side), 1000)]).collect();
    Family::translates(body, ts)
}

pub fn run_bench(base: &str, n: usize, seed: u64, full_verify: bool) -> Result<(BenchReport, crate::certificate::PierceCertificate)> {
    let t0 = Instant::now();
    let f = bench_family(base, n, seed)?;
    let build = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let cert = pierce(&f, &PierceOptions { method: MethodChoice::Greedy, refine: true, seed })?;
    let pierce_s = t1.elapsed().as_secs_f64();
    let t2 = Instant::now();
    let v = if full_verify { cert.verify(&f)? } else { cert.verify_sampled(&f, BENCH_SAMPLE, seed)? };
    let verify_s = t2.elapsed().as_secs_f64();
    let report = BenchReport {
        n,
        base: base.into(),
        seed,
        build_ms: build * 1e3,
        pierce_ms: pierce_s * 1e3,
        verify_ms: verify_s * 1e3,
        points: cert.points.len(),
        witness: cert.witness.len(),
        points_per_sec: cert.points.len() as f64 / pierce_s.max(1e-9),
        members_per_sec: n as f64 / pierce_s.max(1e-9),
        members_checked: v.members_checked,
        verified: v.ok(),
    };
    Ok((report, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::named_base;

    fn cfg(base: &str, kind: FamilyKind, n: (usize, usize), trials: usize) -> ExperimentConfig {
        ExperimentConfig { base: base.into(), kind, method: MethodChoice::Auto, n_range: n, trials, seed: 11 }
    }

    #[test]
    fn disk_translates_stay_within_four() {
        let rows = run_experiment(&cfg("disk", FamilyKind::Translates, (20, 20), 100)).unwrap();
        assert_eq!(rows.len(), 100);
        assert!(rows.iter().all(|r| r.ratio <= 4.0 && r.factor == 4));
    }

    #[test]
    fn square_homothets_stay_within_four() {
        let rows = run_experiment(&cfg("square", FamilyKind::Homothets, (15, 15), 30)).unwrap();
        assert!(rows.iter().all(|r| r.ratio <= 4.0));
    }

    #[test]
    fn single_members_have_ratio_one() {
        for base in ["square", "triangle", "disk", "hexagon", "symmetric", "polygon"] {
            let rows = run_experiment(&cfg(base, FamilyKind::Translates, (1, 1), 3)).unwrap();
            assert!(rows.iter().all(|r| r.ratio == 1.0 && r.tau == Some(1) && r.nu == Some(1)), "{base}");
        }
    }

    #[test]
    fn rows_are_ordered_and_reproducible() {
        let c = cfg("triangle", FamilyKind::Translates, (3, 6), 4);
        let a = run_experiment(&c).unwrap();
        let b = run_experiment(&c).unwrap();
        let key = |r: &ReportRow| (r.instance.clone(), r.points, r.witness, r.tau, r.nu);
        assert_eq!(a.iter().map(key).collect::<Vec<_>>(), b.iter().map(key).collect::<Vec<_>>());
        assert_eq!(a[0].instance, "triangle-translates-n3-t0");
        assert_eq!(a.last().unwrap().instance, "triangle-translates-n6-t3");
        let s = summarize(&a);
        assert_eq!(s.len(), 4);
        assert!(s.iter().all(|x| x.trials == 4 && x.max_ratio <= x.factor as f64));
    }

    #[test]
    fn hexagon_conjectures_hold() {
        let base = named_base("hexagon", 0).unwrap();
        let r = run_conjecture(&base, 40, 8, 5).unwrap();
        assert!(r.counterexamples.is_empty());
        assert!(r.max_tau_slack <= 1.0);
        assert!(!r.extremal.is_empty());
    }

    #[test]
    fn single_member_conjecture_record() {
        let base = named_base("hexagon", 0).unwrap();
        let f = experiment_family(&base, FamilyKind::Translates, 1, 3).unwrap();
        let r = conjecture_record(&f, base.as_polygon().unwrap(), 0).unwrap();
        assert_eq!((r.tau, r.nu, r.cover_ratio), (1, 1, 1.0));
        assert!(r.tau_bound_holds && r.nu_bound_holds);
    }

    #[test]
    fn octagon_packing_conjecture_observed() {
        let base = named_base("symmetric", 41).unwrap();
        let r = run_conjecture(&base, 20, 10, 9).unwrap();
        assert!(r.min_nu_slack >= 1.0, "{}", r.min_nu_slack);
    }

    #[test]
    fn conjecture_rejects_asymmetric_and_large() {
        assert!(run_conjecture(&ConvexBody::unit_triangle(), 1, 4, 0).is_err());
        assert!(matches!(run_conjecture(&ConvexBody::unit_square(), 1, 40, 0), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn bench_full_and_sampled_agree() {
        let (a, ca) = run_bench("disk", 1000, 4, true).unwrap();
        let (b, cb) = run_bench("disk", 1000, 4, false).unwrap();
        assert!(a.verified && b.verified);
        assert_eq!(a.members_checked, 1000);
        assert_eq!(ca, cb);
        assert!(run_bench("triangle", 10, 0, false).is_err());
    }
}
