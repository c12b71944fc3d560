use proptest::prelude::*;

use super::*;
use crate::bodies::{intersection_graph, ConvexBody, Member};
use crate::generators::{five_square_cycle, pairwise_intersecting_family, random_convex_polygon, random_family};
use crate::geom::scalar::{int, rat};
use crate::geom::{pt, ConvexPolygon};
use crate::oracle;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn hexagon() -> ConvexPolygon {
    ConvexPolygon::new(vec![pt(1, 0), pt(1, 1), pt(0, 1), pt(-1, 0), pt(-1, -1), pt(0, -1)]).unwrap()
}

fn translates(base: ConvexBody, n: usize, size: i64, seed: u64) -> Family {
    random_family(&base, n, &int(size), FamilyKind::Translates, (&int(1), &int(1)), seed).unwrap()
}

#[test]
fn five_cycle_greedy() {
    let f = five_square_cycle();
    let c = greedy_pierce(&f, true).unwrap();
    c.check(&f).unwrap();
    assert!(c.points.len() <= 3);
    assert!(c.witness.len() >= 2);
    assert!(c.points.len() <= 2 * c.witness.len() - 1);
}

#[test]
fn single_disk() {
    let f = Family::translates(ConvexBody::unit_disk(), vec![vec![int(3), int(-1)]]).unwrap();
    let c = greedy_pierce(&f, false).unwrap();
    c.check(&f).unwrap();
    assert_eq!(c.points.len(), 1);
}

#[test]
fn random_disks_in_a_box() {
    let f = translates(ConvexBody::unit_disk(), 50, 10, 7);
    let c = greedy_pierce(&f, true).unwrap();
    c.check(&f).unwrap();
    assert!(c.points.len() < 4 * c.witness.len());
    for start in [0, 12, 24, 36] {
        let idx: Vec<usize> = (start..start + 12).collect();
        let sub = f.subfamily(&idx);
        let cs = greedy_pierce(&sub, true).unwrap();
        let (tau, _) = oracle::exact_tau(&sub).unwrap();
        let (nu, _) = oracle::exact_nu(&sub).unwrap();
        assert!(cs.witness.len() <= nu && nu <= tau && tau <= cs.points.len());
    }
}

#[test]
fn greedy_seeds_are_disjoint_and_topmost() {
    let f = translates(ConvexBody::unit_triangle(), 60, 6, 3);
    let c = greedy_pierce(&f, false).unwrap();
    c.check(&f).unwrap();
    assert!(intersection_graph(&f).is_independent(&c.witness));
    assert!(c.points.len() <= 5 * c.witness.len());
}

#[test]
fn asymmetric_greedy_falls_back_to_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = translates(ConvexBody::polygon(random_convex_polygon(&mut rng, 5)), 30, 40, 2);
    assert!(matches!(greedy_pierce(&f, false), Err(Error::UnsupportedBase { .. })));
    let c = pierce(&f, &PierceOptions { method: MethodChoice::Greedy, ..Default::default() }).unwrap();
    assert_eq!(c.method, Method::Grid);
    c.check(&f).unwrap();
}

#[test]
fn grid_on_unit_squares() {
    let f = translates(ConvexBody::unit_square(), 40, 8, 4);
    let c = grid_pierce_auto(&f).unwrap();
    assert_eq!(c.factor, 2);
    assert!(c.clusters.iter().all(|cl| cl.points.len() == 1));
    c.check(&f).unwrap();
}

#[test]
fn grid_on_random_pentagons() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let base = random_convex_polygon(&mut rng, 5);
    let f = translates(ConvexBody::polygon(base), 100, 60, 5);
    let c = grid_pierce_auto(&f).unwrap();
    assert!(c.factor <= 6);
    c.check(&f).unwrap();
}

#[test]
fn grid_two_far_apart() {
    let f = Family::translates(ConvexBody::unit_triangle(), vec![vec![int(0), int(0)], vec![int(50), int(7)]]).unwrap();
    let c = grid_pierce_auto(&f).unwrap();
    c.check(&f).unwrap();
    assert_eq!((c.points.len(), c.witness.len()), (2, 2));
}

#[test]
fn grid_on_boxes() {
    let base = ConvexBody::axis_box(vec![int(1), int(2), rat(1, 2)]).unwrap();
    let f = translates(base, 80, 5, 6);
    let c = grid_pierce_auto(&f).unwrap();
    assert_eq!(c.factor, 4);
    c.check(&f).unwrap();
}

#[test]
fn hexagon_overlapping_one() {
    let base = ConvexBody::polygon(hexagon());
    let ts: Vec<Vec<Scalar>> = (0..10).map(|k| vec![rat(k % 3, 2), rat(-(k % 4), 3)]).collect();
    let f = Family::translates(base, ts).unwrap();
    assert!(intersection_graph(&f).is_complete());
    let c = hexagon_pierce(&f).unwrap();
    c.check(&f).unwrap();
    assert!(c.points.len() <= 2);
}

#[test]
fn hexagon_pairwise_families() {
    for seed in 0..20 {
        let f = pairwise_intersecting_family(&ConvexBody::polygon(hexagon()), 20, seed).unwrap();
        let c = hexagon_pierce(&f).unwrap();
        c.check(&f).unwrap();
        assert!(c.points.len() <= 2, "seed {seed}");
    }
}

#[test]
fn hexagon_far_apart_and_random() {
    let ts: Vec<Vec<Scalar>> = (0..4).map(|k| vec![int(10 * k), int(0)]).collect();
    let f = Family::translates(ConvexBody::polygon(hexagon()), ts).unwrap();
    let c = hexagon_pierce(&f).unwrap();
    c.check(&f).unwrap();
    assert_eq!((c.points.len(), c.witness.len()), (4, 4));
    let f = translates(ConvexBody::polygon(hexagon()), 60, 12, 8);
    let c = hexagon_pierce(&f).unwrap();
    c.check(&f).unwrap();
    assert!(c.points.len() <= 3 * c.witness.len());
    assert_eq!(hexagon_pierce(&translates(ConvexBody::unit_square(), 3, 3, 1)), Err(Error::NotHexagonBase));
}

#[test]
fn lattice_trivial_cases() {
    let base = ConvexBody::polygon(hexagon());
    let (cover, pack, _) = default_lattices(&base).unwrap();
    let f = Family::translates(base.clone(), vec![vec![int(0), int(0)]]).unwrap();
    let c = lattice_pierce(&f, &cover, &pack, 0).unwrap();
    c.check(&f).unwrap();
    assert_eq!(c.points.len(), 1);
    let ts: Vec<Vec<Scalar>> = (0..5).map(|k| vec![int(9 * k), int(k)]).collect();
    let f = Family::translates(base.clone(), ts).unwrap();
    let c = lattice_pierce(&f, &cover, &pack, 0).unwrap();
    c.check(&f).unwrap();
    assert_eq!((c.points.len(), c.witness.len()), (5, 5));
    let f = Family::translates(base, vec![vec![int(1), int(1)]; 4]).unwrap();
    assert_eq!(lattice_witness(&f, &pack, 0).unwrap().len(), 1);
}

#[test]
fn lattice_overlapping_hexagons() {
    let base = ConvexBody::polygon(hexagon());
    let (cover, pack, _) = default_lattices(&base).unwrap();
    for seed in 0..5 {
        let f = translates(base.clone(), 10, 4, seed);
        let c = lattice_pierce(&f, &cover, &pack, seed).unwrap();
        c.check(&f).unwrap();
        let rep = c.lattice.as_ref().unwrap();
        assert!(rep.union_exact);
        assert!(c.points.len() as u64 <= rep.point_bound);
        assert!(c.witness.len() as u64 >= rep.witness_bound);
    }
}

#[test]
fn union_area_matches_sampling() {
    let sq = ConvexPolygon::rect(int(0), int(0), int(2), int(2)).unwrap();
    let (a, exact) = union_area(&[sq.clone(), sq.translate(&pt(1, 1)), sq.translate(&pt(5, 5))]);
    assert!(exact);
    assert_eq!(a, int(11));
}

#[test]
fn lattice_specs_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for m in [3, 4, 5] {
        let s = crate::generators::random_symmetric_polygon(&mut rng, m);
        let (cover, pack, hs) = default_lattices(&ConvexBody::polygon(s)).unwrap();
        assert_eq!(cover.cell_area, hs.h_in.area());
        assert!(pack.cell_area > cover.cell_area);
    }
    let bad = LatticeSpec { basis: [pt(3, 0), pt(0, 3)], cell_area: int(9), role: LatticeRole::Covering, body: hexagon() };
    assert_eq!(bad.verify(), Err(Error::CoverageNotVerified));
    let bad = LatticeSpec { basis: [pt(1, 0), pt(0, 1)], cell_area: int(1), role: LatticeRole::Packing, body: hexagon() };
    assert_eq!(bad.verify(), Err(Error::PackingNotVerified));
}

#[test]
fn nested_squares_refine_to_one() {
    let members = (0..10).map(|k| Member::homothet(vec![int(0), int(0)], int(10 - k))).collect();
    let f = Family::new(ConvexBody::unit_square(), FamilyKind::Homothets, members).unwrap();
    let c = greedy_pierce_homothets(&f, true, 0).unwrap();
    c.check(&f).unwrap();
    assert_eq!(c.points.len(), 1);
    let plain = greedy_pierce_homothets(&f, false, 0).unwrap();
    assert!(plain.points.len() <= 4);
}

#[test]
fn single_triangle_homothet() {
    let f = Family::new(ConvexBody::unit_triangle(), FamilyKind::Homothets, vec![Member::homothet(vec![int(1), int(2)], int(3))]).unwrap();
    let c = greedy_pierce_homothets(&f, true, 0).unwrap();
    assert_eq!(c.points.len(), 1);
}

#[test]
fn random_disk_homothets() {
    let f = random_family(&ConvexBody::unit_disk(), 40, &int(20), FamilyKind::Homothets, (&int(1), &int(3)), 11).unwrap();
    let c = greedy_pierce_homothets(&f, true, 11).unwrap();
    c.check(&f).unwrap();
    assert!(c.points.len() <= 7 * c.witness.len());
    let sub = f.subfamily(&(0..12).collect::<Vec<_>>());
    let cs = greedy_pierce_homothets(&sub, true, 0).unwrap();
    let r = oracle::solve(&sub).unwrap();
    assert!(cs.witness.len() <= r.nu && r.tau <= cs.points.len());
    assert!(cs.points.len() + 3 <= 7 * r.nu);
    for cl in &c.clusters {
        assert!(cl.members.iter().all(|&m| f.members[m].s >= f.members[cl.seed].s));
    }
}

#[test]
fn certificates_round_trip_json() {
    let f = five_square_cycle();
    let c = greedy_pierce(&f, true).unwrap();
    let s = serde_json::to_string(&c).unwrap();
    let back: PierceCertificate = serde_json::from_str(&s).unwrap();
    assert_eq!(back, c);
    back.check(&f).unwrap();
}

#[test]
fn tampered_certificates_fail() {
    let f = five_square_cycle();
    let mut c = greedy_pierce(&f, true).unwrap();
    c.points.pop();
    assert!(!c.verify(&f).unwrap().ok());
    let mut c = greedy_pierce(&f, true).unwrap();
    c.witness = vec![0, 1];
    assert!(!c.verify(&f).unwrap().ok());
}

fn base_strategy() -> impl Strategy<Value = ConvexBody> {
    prop_oneof![
        Just(ConvexBody::unit_square()),
        Just(ConvexBody::unit_triangle()),
        Just(ConvexBody::unit_disk()),
        Just(ConvexBody::polygon(hexagon())),
        any::<u64>().prop_map(|s| ConvexBody::polygon(random_convex_polygon(&mut ChaCha8Rng::seed_from_u64(s), 5))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_method_is_sound(base in base_strategy(), n in 1usize..25, size in 2i64..12, seed in any::<u64>()) {
        let f = translates(base, n, size, seed);
        let c = pierce(&f, &PierceOptions { seed, ..Default::default() }).unwrap();
        let v = c.verify(&f).unwrap();
        prop_assert!(v.ok(), "{:?} {:?}", c.method, v);
        let g = grid_pierce_auto(&f);
        if let Ok(g) = g {
            prop_assert!(g.verify(&f).unwrap().ok());
        }
    }

    #[test]
    fn homothet_greedy_is_sound(base in base_strategy(), n in 1usize..20, seed in any::<u64>()) {
        let f = random_family(&base, n, &int(8), FamilyKind::Homothets, (&rat(1, 2), &int(3)), seed).unwrap();
        let c = greedy_pierce_homothets(&f, true, seed).unwrap();
        prop_assert!(c.verify(&f).unwrap().ok());
    }

    #[test]
    fn oracle_brackets_greedy(base in base_strategy(), n in 1usize..10, seed in any::<u64>()) {
        let f = translates(base, n, 4, seed);
        let c = pierce(&f, &PierceOptions::default()).unwrap();
        let r = oracle::solve(&f).unwrap();
        prop_assert!(c.witness.len() <= r.nu);
        prop_assert!(r.nu <= r.tau);
        prop_assert!(r.tau <= c.points.len());
    }
}
