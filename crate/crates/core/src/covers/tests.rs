use super::*;
use crate::generators::random_symmetric_polygon;
use crate::geom::pt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn square() -> ConvexPolygon {
    ConvexPolygon::rect(int(0), int(0), int(1), int(1)).unwrap()
}

fn regular_hexagon() -> ConvexPolygon {
    ConvexPolygon::new(vec![pt(2, 0), pt(1, 2), pt(-1, 2), pt(-2, 0), pt(-1, -2), pt(1, -2)]).unwrap()
}

#[test]
fn square_fast_paths() {
    assert_eq!(seven_cover(&square()).unwrap().len(), 4);
    let half = halfplane_four_cover(&square(), &pt(0, -1)).unwrap();
    assert_eq!(half.len(), 2);
    assert_eq!(homothet_cover(&ConvexBody::unit_square()).unwrap().len(), 4);
}

#[test]
fn hexagon_covers() {
    let h = regular_hexagon();
    assert_eq!(seven_cover(&h).unwrap().len(), 7);
    for v in h.vertices() {
        // half-plane boundary through a pair of opposite vertices
        let n = v.perp();
        assert!(halfplane_four_cover(&h, &n).unwrap().len() <= 4);
    }
}

#[test]
fn random_octagons_seven_and_four() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..5 {
        let s = random_symmetric_polygon(&mut rng, 4);
        assert_eq!(seven_cover(&s).unwrap().len(), 7);
        assert!(halfplane_four_cover(&s, &pt(0, -1)).unwrap().len() <= 4);
    }
}

#[test]
fn disk_patterns() {
    assert_eq!(disk_seven_cover(&int(1)).unwrap().len(), 7);
    assert_eq!(disk_four_cover(&rat(3, 2)).unwrap().len(), 4);
    let mut short = disk_seven_cover(&int(1)).unwrap();
    short.offsets.pop();
    assert!(short.verify().is_err());
}

#[test]
fn triangle_patterns() {
    let t = unit_triangle();
    let p = triangle_trapezoid_cover(&t).unwrap();
    assert_eq!(p.len(), 5);
    let sheared = ConvexPolygon::new(vec![pt(1, 1), pt(4, 2), pt(2, 5)]).unwrap();
    triangle_trapezoid_cover(&sheared).unwrap();
    assert!(triangle_hexagon_cover(&t).unwrap().len() <= 12);
    assert!(triangle_hexagon_cover(&sheared).unwrap().len() <= 12);
}

#[test]
fn one_translate_cannot_cover_the_corner_triangle() {
    // (0,0), (1,−1), (0,−1) is a translate of T; no single −T + q covers it
    let corner = ConvexPolygon::new(vec![pt(0, -1), pt(1, -1), pt(0, 0)]).unwrap();
    let neg = reflect(&unit_triangle());
    let cands = search::grid_candidates(&corner, &neg, &rat(1, 8));
    assert!(search_cover(&corner, &neg, &cands, 1).is_none());
    for q in &cands {
        let p = CoverPattern {
            region: Region::Polygon(corner.clone()),
            cover: Body::Polygon(neg.clone()),
            offsets: vec![ExactPoint::from(q)],
            halfplane: None,
        };
        assert!(p.verify().is_err());
    }
}

#[test]
fn box_patterns() {
    let sides = vec![int(1), int(2), rat(1, 2)];
    assert_eq!(box_cover(&sides, true).unwrap().len(), 4);
    assert_eq!(box_cover(&sides, false).unwrap().len(), 8);
}

#[test]
fn general_polygon_homothet_cover() {
    let c = ConvexPolygon::new(vec![pt(0, 0), pt(5, 1), pt(6, 4), pt(2, 6), pt(-1, 3)]).unwrap();
    let p = homothet_cover(&ConvexBody::polygon(c)).unwrap();
    assert!(p.len() <= 16);
}

#[test]
fn pierce_patterns_for_each_base() {
    let bases = [
        (ConvexBody::unit_square(), 2, 4),
        (ConvexBody::unit_triangle(), 5, 12),
        (ConvexBody::unit_disk(), 4, 7),
        (ConvexBody::polygon(regular_hexagon().translate(&pt(3, 1))), 4, 7),
        (ConvexBody::axis_box(vec![int(1), int(1), int(1)]).unwrap(), 4, 8),
    ];
    for (b, kt, kh) in bases {
        assert!(translate_pattern(&b).unwrap().len() <= kt, "{}", b.describe());
        assert!(homothet_pattern(&b).unwrap().len() <= kh, "{}", b.describe());
    }
}

#[test]
fn kappa_table() {
    assert_eq!(kappa_upper_bound(3, true, None), int(125));
    assert_eq!(kappa_upper_bound(3, false, None), int(216));
    assert_eq!(kappa_upper_bound(2, false, None), int(16));
    assert_eq!(kappa_upper_bound(2, true, Some(&int(1))), int(9));
}

#[test]
fn trapezoid_four_cover_search() {
    // reported, not required: does a quarter grid hold a 4-translate cover?
    let found = trapezoid_four_search(&rat(1, 4));
    println!("trapezoid 4-cover on the quarter grid: {found:?}");
    if let Some(q) = found {
        let p = CoverPattern {
            region: Region::Polygon(unit_trapezoid()),
            cover: Body::Polygon(reflect(&unit_triangle())),
            offsets: rational(&q),
            halfplane: None,
        };
        p.verify().unwrap();
    }
}
