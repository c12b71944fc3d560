//! Acceptance suite. One line per criterion; exits nonzero if any fails.
//!
//! Every bound below is an exact integer inequality on verified
//! certificates. The only tolerances are the wall-clock limits.

use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use pierce_core::bodies::{intersection_graph, Body, ConvexBody, Family, FamilyKind};
use pierce_core::certificate::PierceCertificate;
use pierce_core::covers::{halfplane_four_cover, seven_cover, Region};
use pierce_core::experiment::{experiment_family, run_bench, summarize, trial_seed, ReportRow};
use pierce_core::generators::{
    five_square_cycle, grid_family, named_base, nine_triangles, pairwise_intersecting_family, random_convex_polygon,
    random_symmetric_polygon,
};
use pierce_core::geom::scalar::{ceil, floor, int, rat};
use pierce_core::geom::{Affine2, ConvexPolygon, Point, Scalar};
use pierce_core::oracle;
use pierce_core::pierce::{
    default_lattices, greedy_pierce, greedy_pierce_homothets, grid_pierce, hexagon_pierce, lattice_pierce, pierce,
    union_area, PierceOptions, PACKING_EPSILON,
};
use pierce_core::sandwich::sandwich_parallelograms;

const ORACLE_TIME: Duration = Duration::from_secs(1);
const FACTOR_SUITE_TIME: Duration = Duration::from_secs(60);
const BENCH_TIME: Duration = Duration::from_secs(5);
const BENCH_GROWTH: f64 = 15.0;
const BENCH_RUNS: usize = 3;

const FAMILIES_PER_BASE: usize = 200;
const MAX_N: usize = 60;
const ORACLE_N: usize = 12;

type Outcome = Result<String, String>;

/// `|witness| ≤ ν ≤ τ ≤ |points|` over every instance where the oracle ran.
#[derive(Default)]
struct Chain {
    checked: usize,
    broken: Vec<String>,
}

static CHAIN: Mutex<Chain> = Mutex::new(Chain { checked: 0, broken: Vec::new() });

fn record_chain(label: &str, c: &PierceCertificate, r: &oracle::OracleResult) {
    let mut chain = CHAIN.lock().unwrap();
    chain.checked += 1;
    let (w, p) = (c.witness.len(), c.points.len());
    if !(w <= r.nu && r.nu <= r.tau && r.tau <= p) {
        chain.broken.push(format!("{label}: witness {w}, nu {}, tau {}, points {p}", r.nu, r.tau));
    }
}

fn fail_if(errors: Vec<String>, ok: String) -> Outcome {
    match errors.first() {
        None => Ok(ok),
        Some(first) => Err(format!("{} failures, first: {first}; {ok}", errors.len())),
    }
}

fn hexagon_base(seed: u64) -> ConvexBody {
    if seed % 2 == 0 {
        named_base("hexagon", seed).unwrap()
    } else {
        ConvexBody::polygon(random_symmetric_polygon(&mut ChaCha8Rng::seed_from_u64(seed), 3))
    }
}

fn polygons(f: &Family) -> Vec<ConvexPolygon> {
    (0..f.len())
        .map(|i| match f.realize(i) {
            Body::Polygon(p) => p,
            _ => unreachable!("polygon base"),
        })
        .collect()
}

/// Half the trials have `n ≤ 12` so the oracle can run on them.
fn trial_size(trial: usize) -> usize {
    if trial % 2 == 0 {
        1 + (trial / 2) % ORACLE_N
    } else {
        ORACLE_N + 1 + (trial * 7) % (MAX_N - ORACLE_N)
    }
}

fn oracle_instances() -> Outcome {
    let mut lines = Vec::new();
    for (name, f, expected) in [
        ("five-cycle", five_square_cycle(), (3, 2)),
        ("nine-triangles(1/100)", nine_triangles(&rat(1, 100)).unwrap(), (3, 1)),
    ] {
        let start = Instant::now();
        let r = oracle::solve(&f).map_err(|e| format!("{name}: {e}"))?;
        let took = start.elapsed();
        if (r.tau, r.nu) != expected {
            return Err(format!("{name}: (tau, nu) = ({}, {}), expected {expected:?}", r.tau, r.nu));
        }
        if took >= ORACLE_TIME {
            return Err(format!("{name}: {took:?}"));
        }
        lines.push(format!("{name} ({}, {}) in {took:.0?}", r.tau, r.nu));
    }
    Ok(lines.join(", "))
}

/// Factor `k` and refined bound `a·ν − b` per base.
struct Protocol {
    base: &'static str,
    factor: usize,
    refined: Option<(usize, usize)>,
}

fn factor_suite(kind: FamilyKind, protocols: &[Protocol]) -> Outcome {
    let start = Instant::now();
    let mut errors = Vec::new();
    let mut notes = Vec::new();
    for (b, proto) in protocols.iter().enumerate() {
        let base_start = Instant::now();
        let results: Vec<(Vec<String>, f64, usize)> = (0..FAMILIES_PER_BASE)
            .into_par_iter()
            .map(|trial| {
                let n = trial_size(trial);
                let seed = trial_seed(0xACCE, b as u64, trial as u64);
                let base = named_base(proto.base, seed).unwrap();
                let f = experiment_family(&base, kind, n, seed).unwrap();
                let label = format!("{} n={n} trial {trial}", proto.base);
                let run = |refine: bool| match kind {
                    FamilyKind::Translates => greedy_pierce(&f, refine),
                    FamilyKind::Homothets => greedy_pierce_homothets(&f, refine, seed),
                };
                let mut errs = Vec::new();
                let plain = run(false).unwrap();
                if let Err(e) = plain.check(&f) {
                    errs.push(format!("{label}: {e}"));
                }
                if plain.points.len() > proto.factor * plain.witness.len() {
                    errs.push(format!("{label}: {} points, witness {}", plain.points.len(), plain.witness.len()));
                }
                let mut oracle_runs = 0;
                if n <= ORACLE_N {
                    let refined = run(true).unwrap();
                    if let Err(e) = refined.check(&f) {
                        errs.push(format!("{label} refined: {e}"));
                    }
                    let r = oracle::solve(&f).unwrap();
                    record_chain(&label, &plain, &r);
                    record_chain(&label, &refined, &r);
                    oracle_runs = 1;
                    if let Some((a, b)) = proto.refined {
                        if refined.points.len() + b > a * r.nu {
                            errs.push(format!("{label}: refined {} points, nu {}", refined.points.len(), r.nu));
                        }
                    }
                }
                (errs, plain.ratio(), oracle_runs)
            })
            .collect();
        let worst = results.iter().map(|r| r.1).fold(0.0, f64::max);
        let oracle_runs: usize = results.iter().map(|r| r.2).sum();
        errors.extend(results.into_iter().flat_map(|r| r.0));
        let refined = proto.refined.map_or("-".to_string(), |(a, b)| format!("{a}v-{b}"));
        notes.push(format!(
            "{} k={} max {worst:.2} refined {refined} on {oracle_runs} [{:.1?}]",
            proto.base,
            proto.factor,
            base_start.elapsed()
        ));
    }
    let took = start.elapsed();
    if took >= FACTOR_SUITE_TIME {
        errors.push(format!("suite took {took:?}"));
    }
    fail_if(errors, format!("{}; {took:.1?}", notes.join("; ")))
}

fn translate_factors() -> Outcome {
    factor_suite(
        FamilyKind::Translates,
        &[
            Protocol { base: "square", factor: 2, refined: Some((2, 1)) },
            Protocol { base: "triangle", factor: 5, refined: Some((5, 2)) },
            Protocol { base: "disk", factor: 4, refined: Some((4, 1)) },
            Protocol { base: "symmetric", factor: 4, refined: None },
        ],
    )
}

fn homothet_factors() -> Outcome {
    factor_suite(
        FamilyKind::Homothets,
        &[
            Protocol { base: "square", factor: 4, refined: Some((4, 3)) },
            Protocol { base: "triangle", factor: 12, refined: Some((12, 9)) },
            Protocol { base: "disk", factor: 7, refined: Some((7, 3)) },
            Protocol { base: "symmetric", factor: 7, refined: None },
            Protocol { base: "polygon", factor: 16, refined: None },
        ],
    )
}

fn random_parallelogram(rng: &mut ChaCha8Rng) -> ConvexPolygon {
    loop {
        let mut v = || Point::new(int(rng.gen_range(-9..=9)), int(rng.gen_range(-9..=9)));
        let (u, w) = (v(), v());
        if !u.cross(&w).is_zero() {
            let o = Point::origin();
            return ConvexPolygon::from_points(&[o.clone(), u.clone(), &u + &w, w]).unwrap();
        }
    }
}

fn sandwich_gamma() -> Outcome {
    let errors: Vec<String> = (0..100u64)
        .into_par_iter()
        .flat_map_iter(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = rng.gen_range(3..=12);
            let c = random_convex_polygon(&mut rng, k);
            let mut errs = Vec::new();
            match sandwich_parallelograms(&c) {
                Err(e) => errs.push(format!("polygon {seed}: {e}")),
                Ok(pair) => {
                    if let Err(e) = pair.verify(&c) {
                        errs.push(format!("polygon {seed}: {e}"));
                    }
                    if pair.gamma > 6 {
                        errs.push(format!("polygon {seed}: gamma {}", pair.gamma));
                    }
                    let f = experiment_family(&ConvexBody::polygon(c), FamilyKind::Translates, 30, seed).unwrap();
                    let cert = grid_pierce(&f, &pair).unwrap();
                    if let Err(e) = cert.check(&f) {
                        errs.push(format!("grid {seed}: {e}"));
                    }
                    if cert.points.len() as u64 > pair.gamma * cert.witness.len() as u64 {
                        errs.push(format!("grid {seed}: {} points, witness {}", cert.points.len(), cert.witness.len()));
                    }
                }
            }
            let par = random_parallelogram(&mut rng);
            match sandwich_parallelograms(&par) {
                Ok(pair) if pair.gamma == 2 => {}
                Ok(pair) => errs.push(format!("parallelogram {seed}: gamma {}", pair.gamma)),
                Err(e) => errs.push(format!("parallelogram {seed}: {e}")),
            }
            errs
        })
        .collect();
    fail_if(errors, "100 polygons gamma <= 6, 100 parallelograms gamma = 2, 100 grid certificates".into())
}

fn hexagon_method() -> Outcome {
    let mut errors: Vec<String> = (0..50u64)
        .into_par_iter()
        .flat_map_iter(|seed| {
            let f = pairwise_intersecting_family(&hexagon_base(seed), 5 + (seed as usize * 3) % 40, seed).unwrap();
            let c = hexagon_pierce(&f).unwrap();
            let mut errs = Vec::new();
            if !intersection_graph(&f).is_complete() {
                errs.push(format!("pairwise {seed}: not pairwise intersecting"));
            }
            if let Err(e) = c.check(&f) {
                errs.push(format!("pairwise {seed}: {e}"));
            }
            if c.points.len() > 2 {
                errs.push(format!("pairwise {seed}: {} points", c.points.len()));
            }
            errs
        })
        .collect();
    let worst = Mutex::new(0.0f64);
    errors.extend((0..100u64).into_par_iter().flat_map_iter(|seed| {
        let n = 2 + (seed as usize * 11) % (MAX_N - 1);
        let f = experiment_family(&hexagon_base(seed), FamilyKind::Translates, n, seed).unwrap();
        let c = hexagon_pierce(&f).unwrap();
        let mut errs = Vec::new();
        if let Err(e) = c.check(&f) {
            errs.push(format!("general {seed}: {e}"));
        }
        if c.points.len() > 3 * c.witness.len() {
            errs.push(format!("general {seed}: {} points, witness {}", c.points.len(), c.witness.len()));
        }
        let mut w = worst.lock().unwrap();
        *w = w.max(c.ratio());
        errs
    }).collect::<Vec<_>>());
    let worst = *worst.lock().unwrap();
    fail_if(errors, format!("50 pairwise families <= 2 points, 100 general max ratio {worst:.2} <= 3"))
}

fn cover_lemmas() -> Outcome {
    let errors: Vec<String> = (0..50u64)
        .into_par_iter()
        .flat_map_iter(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = rng.gen_range(4..=8);
            let s = random_symmetric_polygon(&mut rng, m);
            let area = s.area();
            let mut errs = Vec::new();
            match seven_cover(&s) {
                Ok(p) => {
                    let region_ok = matches!(&p.region, Region::Polygon(r) if r.area() == &area * int(4));
                    if p.len() > 7 || !region_ok || p.verify().is_err() {
                        errs.push(format!("seven {seed}: {} translates", p.len()));
                    }
                }
                Err(e) => errs.push(format!("seven {seed}: {e}")),
            }
            let normals = [Point::new(int(0), int(1)), Point::new(int(1), int(0)), Point::new(int(rng.gen_range(1..9)), int(rng.gen_range(-9..9)))];
            for nrm in normals {
                match halfplane_four_cover(&s, &nrm) {
                    Ok(p) => {
                        let region_ok = matches!(&p.region, Region::Polygon(r) if r.area() == &area * int(2));
                        if p.len() > 4 || !region_ok || p.verify().is_err() {
                            errs.push(format!("half {seed} {nrm:?}: {} translates", p.len()));
                        }
                    }
                    Err(e) => errs.push(format!("half {seed} {nrm:?}: {e}")),
                }
            }
            errs
        })
        .collect();
    fail_if(errors, "50 symmetric polygons, 8-16 vertices: 7-cover and 3 half-plane 4-covers each".into())
}

fn lattice_bounds() -> Outcome {
    let eps = rat(PACKING_EPSILON.0, PACKING_EPSILON.1);
    let grow = (Scalar::one() + &eps) * (Scalar::one() + &eps) * int(4);
    let target = rat(16, 3);
    let results: Vec<(Vec<String>, Scalar, bool)> = (0..50u64)
        .into_par_iter()
        .map(|seed| {
            let base = hexagon_base(seed);
            let n = 1 + (seed as usize) % ORACLE_N;
            let f = experiment_family(&base, FamilyKind::Translates, n, seed).unwrap();
            let (cover, pack, hs) = default_lattices(&base).unwrap();
            let c = lattice_pierce(&f, &cover, &pack, seed).unwrap();
            let (area, exact) = union_area(&polygons(&f));
            let mut errs = Vec::new();
            if !exact {
                errs.push(format!("family {seed}: inexact area"));
            }
            if let Err(e) = c.check(&f) {
                errs.push(format!("family {seed}: {e}"));
            }
            let point_bound = floor(&(&area / hs.h_in.area()));
            let witness_bound = ceil(&(&area / (hs.h_out.area() * &grow)));
            let ratio = Scalar::new(c.points.len().into(), c.witness.len().max(1).into());
            if num_bigint::BigInt::from(c.points.len()) > point_bound {
                errs.push(format!("family {seed}: {} points > {point_bound}", c.points.len()));
            }
            if num_bigint::BigInt::from(c.witness.len()) < witness_bound {
                errs.push(format!("family {seed}: witness {} < {witness_bound}", c.witness.len()));
            }
            if ratio > int(6) {
                errs.push(format!("family {seed}: ratio {ratio}"));
            }
            let on_target = hs.area_ratio < rat(3, 4) || ratio <= target;
            (errs, ratio, on_target)
        })
        .collect();
    let worst = results.iter().map(|r| r.1.clone()).max().unwrap();
    let off_target = results.iter().filter(|r| !r.2).count();
    let errors = results.into_iter().flat_map(|r| r.0).collect();
    fail_if(
        errors,
        format!(
            "50 families, max certified ratio {:.3} <= 6, {off_target} above 16/3 with sandwich ratio >= 3/4",
            worst.to_f64().unwrap()
        ),
    )
}

fn random_map(rng: &mut ChaCha8Rng) -> Affine2 {
    loop {
        let mut e = || int(rng.gen_range(-4..=4));
        let m = Affine2::new(e(), e(), e(), e(), Point::new(e(), e()));
        if !m.det().is_zero() {
            return m;
        }
    }
}

fn oracle_chain() -> Outcome {
    let errors: Vec<String> = (0..20u64)
        .into_par_iter()
        .flat_map_iter(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base = named_base(if seed % 2 == 0 { "polygon" } else { "symmetric" }, seed).unwrap();
            let kind = if seed % 3 == 0 { FamilyKind::Homothets } else { FamilyKind::Translates };
            let n = rng.gen_range(3..=10);
            let f = experiment_family(&base, kind, n, seed).unwrap();
            let g = f.map(&random_map(&mut rng)).unwrap();
            let (rf, rg) = (oracle::solve(&f).unwrap(), oracle::solve(&g).unwrap());
            let mut errs = Vec::new();
            if (rf.tau, rf.nu) != (rg.tau, rg.nu) {
                errs.push(format!("map {seed}: ({}, {}) became ({}, {})", rf.tau, rf.nu, rg.tau, rg.nu));
            }
            for (h, r, side) in [(&f, &rf, "original"), (&g, &rg, "mapped")] {
                let c = pierce(h, &PierceOptions { seed, ..Default::default() }).unwrap();
                if let Err(e) = c.check(h) {
                    errs.push(format!("map {seed} {side}: {e}"));
                }
                record_chain(&format!("map {seed} {side}"), &c, r);
            }
            errs
        })
        .collect();
    let mut errors = errors;
    let chain = CHAIN.lock().unwrap();
    errors.extend(chain.broken.iter().cloned());
    fail_if(errors, format!("chain holds on {} certificate/oracle pairs; 20 mapped instances invariant", chain.checked))
}

fn grid_companion() -> Outcome {
    let f = grid_family(2, &ConvexBody::unit_disk()).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let r = oracle::solve(&f).map_err(|e| e.to_string())?;
    let cert = pierce(&f, &PierceOptions::default()).map_err(|e| e.to_string())?;
    cert.check(&f).map_err(|e| e.to_string())?;
    let row = ReportRow {
        instance: "grid-2-disk".into(),
        base: "disk".into(),
        kind: "translates".into(),
        method: cert.method.name().into(),
        n: f.len(),
        points: cert.points.len(),
        witness: cert.witness.len(),
        factor: cert.factor,
        ratio: cert.ratio(),
        tau: Some(r.tau),
        nu: Some(r.nu),
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    let reported = summarize(&[row])[0].max_tau_over_nu.ok_or("no tau/nu in the summary")?;
    if r.tau < r.nu || reported < 1.0 {
        return Err(format!("tau {} < nu {}", r.tau, r.nu));
    }
    Ok(format!("n={} tau={} nu={} tau/nu={reported:.3}", f.len(), r.tau, r.nu))
}

fn performance() -> Outcome {
    let best = |n: usize| -> Result<f64, String> {
        let mut times = Vec::new();
        for run in 0..BENCH_RUNS {
            let (rep, _) = run_bench("disk", n, run as u64, false).map_err(|e| e.to_string())?;
            if !rep.verified {
                return Err(format!("n={n} run {run}: sampled verification failed"));
            }
            times.push(rep.build_ms + rep.pierce_ms);
        }
        Ok(times.into_iter().fold(f64::INFINITY, f64::min))
    };
    let small = best(10_000)?;
    let large = best(100_000)?;
    let growth = large / small;
    let line = format!("1e4: {small:.0} ms, 1e5: {large:.0} ms, growth {growth:.1}x");
    if large >= BENCH_TIME.as_secs_f64() * 1e3 || growth >= BENCH_GROWTH {
        return Err(line);
    }
    Ok(line)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("oracle on the worked instances", oracle_instances),
        ("greedy factors, translates", translate_factors),
        ("greedy factors, homothets", homothet_factors),
        ("sandwich gamma and grid method", sandwich_gamma),
        ("hexagon method", hexagon_method),
        ("seven and half-plane covers", cover_lemmas),
        ("lattice method area bounds", lattice_bounds),
        ("oracle consistency chain", oracle_chain),
        ("grid family companion", grid_companion),
        ("performance", performance),
    ];
    // timing runs first, on a fresh heap; lines print in criterion order
    let mut order: Vec<usize> = (0..criteria.len()).collect();
    order.rotate_right(1);
    let mut lines = vec![String::new(); criteria.len()];
    let mut failed = 0;
    for i in order {
        let (name, run) = criteria[i];
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        lines[i] = match outcome {
            Ok(detail) => format!("PASS {:>2} {name} [{took:.1?}]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                format!("FAIL {:>2} {name} [{took:.1?}]: {detail}", i + 1)
            }
        };
    }
    for line in &lines {
        println!("{line}");
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
