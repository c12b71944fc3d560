//! Parallel parallelogram pairs `P ⊆ C ⊆ Q` and hexagon sandwiches
//! `H ⊆ S ⊆ H'` for centrally symmetric polygons.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geom::polygon::clip_halfplanes;
use crate::geom::scalar::{ceil, from_f64, int, Scalar};
use crate::geom::{intersection, Affine2, Clipped, ConvexPolygon, Point};

/// `P = p_corner + [0,1]·u + [0,1]·v` and `Q = q_corner + [0,λ₁]·u + [0,λ₂]·v`.
///
/// `v` is the line direction of the grid decomposition and `u` the class
/// direction, so `gamma = ⌈λ₂⌉·⌈λ₁ + 1⌉`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichPair {
    pub p_corner: Point,
    pub u: Point,
    pub v: Point,
    pub q_corner: Point,
    pub lambda: (Scalar, Scalar),
    pub gamma: u64,
}

pub fn gamma_of(l1: &Scalar, l2: &Scalar) -> u64 {
    let a = ceil(l2);
    let b = ceil(&(l1 + Scalar::one()));
    u64::try_from(a * b).unwrap_or(u64::MAX)
}

impl SandwichPair {
    pub fn p_polygon(&self) -> ConvexPolygon {
        parallelogram(&self.p_corner, &self.u, &self.v)
    }

    pub fn q_polygon(&self) -> ConvexPolygon {
        parallelogram(&self.q_corner, &self.u.scale(&self.lambda.0), &self.v.scale(&self.lambda.1))
    }

    /// Exact check of `P ⊆ C ⊆ Q` and of the recorded ratios.
    pub fn verify(&self, c: &ConvexPolygon) -> Result<()> {
        let p = self.p_polygon();
        let q = self.q_polygon();
        if !c.contains_polygon(&p) {
            return Err(Error::VerificationFailed("P is not inside C".into()));
        }
        if !q.contains_polygon(c) {
            return Err(Error::VerificationFailed("C is not inside Q".into()));
        }
        if self.lambda.0 < Scalar::one() || self.lambda.1 < Scalar::one() {
            return Err(Error::VerificationFailed("length ratio below 1".into()));
        }
        if self.gamma != gamma_of(&self.lambda.0, &self.lambda.1) {
            return Err(Error::VerificationFailed("gamma does not match ratios".into()));
        }
        Ok(())
    }

    /// The affine map sending `P` to the unit square `[0,1]²`.
    pub fn normalizing_map(&self) -> Affine2 {
        let m = Affine2::from_columns(&self.u, &self.v).inverse().expect("nonsingular frame");
        let t = -m.apply_linear(&self.p_corner);
        Affine2 { t, ..m }
    }
}

fn parallelogram(corner: &Point, u: &Point, v: &Point) -> ConvexPolygon {
    let pts = [corner.clone(), corner + u, &(corner + u) + v, corner + v];
    ConvexPolygon::from_points(&pts).expect("nondegenerate parallelogram")
}

/// Builds the pair for an inscribed parallelogram `corner + [0,1]u + [0,1]v`,
/// taking `Q` as the enclosing parallelogram with the same edge directions
/// and choosing the axis order with the smaller gamma.
pub fn pair_from_parallelogram(c: &ConvexPolygon, corner: &Point, u: &Point, v: &Point) -> SandwichPair {
    let frame = Affine2::from_columns(u, v).inverse().expect("nonsingular frame");
    let img: Vec<Point> = c.vertices().iter().map(|p| frame.apply_linear(&(p - corner))).collect();
    let (x0, x1) = crate::geom::scalar::min_max(img.iter().map(|p| &p.x)).expect("nonempty");
    let (y0, y1) = crate::geom::scalar::min_max(img.iter().map(|p| &p.y)).expect("nonempty");
    let q_corner = &(corner + &u.scale(&x0)) + &v.scale(&y0);
    let (l1, l2) = (&x1 - &x0, &y1 - &y0);
    let straight = gamma_of(&l1, &l2);
    let swapped = gamma_of(&l2, &l1);
    if swapped < straight {
        SandwichPair {
            p_corner: corner.clone(),
            u: v.clone(),
            v: u.clone(),
            q_corner,
            lambda: (l2, l1),
            gamma: swapped,
        }
    } else {
        SandwichPair {
            p_corner: corner.clone(),
            u: u.clone(),
            v: v.clone(),
            q_corner,
            lambda: (l1, l2),
            gamma: straight,
        }
    }
}

/// Primitive integer-like representative of a direction, up to sign.
fn canonical_dir(d: &Point) -> Option<Point> {
    if d.is_zero() {
        return None;
    }
    let l = d.x.denom().lcm(d.y.denom());
    let l = Scalar::from_integer(l);
    let (x, y) = ((&d.x * &l).to_integer(), (&d.y * &l).to_integer());
    let g = x.gcd(&y);
    let (mut x, mut y) = (x / &g, y / &g);
    if x.is_negative() || (x.is_zero() && y.is_negative()) {
        x = -x;
        y = -y;
    }
    Some(Point::new(Scalar::from_integer(x), Scalar::from_integer(y)))
}

fn parallel(a: &Point, b: &Point) -> bool {
    a.cross(b).is_zero()
}

/// Edge directions shared by a pair of parallel edges.
fn paired_edge_dirs(c: &ConvexPolygon) -> Vec<Point> {
    let n = c.len();
    let mut out: Vec<Point> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if parallel(&c.edge(i), &c.edge(j)) {
                if let Some(d) = canonical_dir(&c.edge(i)) {
                    if !out.contains(&d) {
                        out.push(d);
                    }
                }
            }
        }
    }
    out
}

fn is_parallelogram(c: &ConvexPolygon) -> bool {
    c.len() == 4 && parallel(&c.edge(0), &c.edge(2)) && parallel(&c.edge(1), &c.edge(3))
}

/// Largest-area triangle on the vertices, by exhaustive search.
fn max_triangle(c: &ConvexPolygon) -> Option<[usize; 3]> {
    let n = c.len();
    if n > 40 {
        return None;
    }
    let v = c.vertices();
    let mut best: Option<(Scalar, [usize; 3])> = None;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let a = (&v[j] - &v[i]).cross(&(&v[k] - &v[i])).abs();
                if best.as_ref().map_or(true, |(b, _)| a > *b) {
                    best = Some((a, [i, j, k]));
                }
            }
        }
    }
    best.map(|(_, t)| t)
}

/// Whether a rectangle of frame size `w × h` fits in the frame image of
/// `c`; returns its lower-left corner in frame coordinates.
fn fit_rectangle(img: &[Point], w: &Scalar, h: &Scalar) -> Option<Point> {
    let n = img.len();
    let offsets = [
        Point::new(w.clone(), Scalar::zero()),
        Point::new(Scalar::zero(), h.clone()),
        Point::new(w.clone(), h.clone()),
    ];
    let mut planes = Vec::with_capacity(3 * n);
    for i in 0..n {
        let (a, b) = (&img[i], &img[(i + 1) % n]);
        let normal = Point::new(&b.y - &a.y, &a.x - &b.x);
        let c = normal.dot(a);
        for o in &offsets {
            planes.push((normal.clone(), &c - normal.dot(o)));
        }
    }
    clip_halfplanes(img, &planes).any_point()
}

/// What a sandwich search minimizes.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    /// The grid factor `⌈λ₂⌉·⌈λ₁ + 1⌉`.
    Gamma,
    /// Cells of a `P`-grid over `Q − Q`: `⌈2λ₁⌉·⌈2λ₂⌉`.
    Kappa,
}

impl Objective {
    pub fn score(self, pair: &SandwichPair) -> u64 {
        match self {
            Objective::Gamma => pair.gamma,
            Objective::Kappa => {
                let two = int(2);
                let a = ceil(&(&pair.lambda.0 * &two));
                let b = ceil(&(&pair.lambda.1 * &two));
                u64::try_from(a * b).unwrap_or(u64::MAX)
            }
        }
    }

    fn target_score(self, a: i64, b: i64) -> u64 {
        let (a, b) = (a as u64, b as u64);
        match self {
            Objective::Gamma => b * (a + 1),
            Objective::Kappa => 4 * a * b,
        }
    }

    /// Integer ratio targets `(λ_u, λ_v)` worth trying, by increasing score.
    fn targets(self) -> Vec<(i64, i64, u64)> {
        let mut t: Vec<(i64, i64, u64)> = (1..=5)
            .flat_map(|a| (1..=5).map(move |b| (a, b)))
            .map(|(a, b)| (a, b, self.target_score(a, b)))
            .filter(|&(a, b, s)| s <= self.ceiling() && (a <= 2 || b == 1) && (b <= 2 || a == 1))
            .collect();
        t.sort_by_key(|&(a, b, s)| (s, b, a));
        t
    }

    fn ceiling(self) -> u64 {
        match self {
            Objective::Gamma => 6,
            Objective::Kappa => 16,
        }
    }

    /// Best possible score given whether `C` has a pair of parallel edges.
    fn floor(self, has_parallel_edges: bool) -> u64 {
        match (self, has_parallel_edges) {
            (Objective::Gamma, true) => 3,
            (Objective::Gamma, false) => 6,
            (Objective::Kappa, true) => 8,
            (Objective::Kappa, false) => 16,
        }
    }
}

/// Searches direction pairs for a parallel pair `P ⊆ C ⊆ Q` of small gamma.
pub fn sandwich_parallelograms(c: &ConvexPolygon) -> Result<SandwichPair> {
    sandwich_search(c, Objective::Gamma)
}

/// Candidate frames come from the largest inscribed triangle, edge
/// directions, vertex differences and a uniform grid; each frame tries the
/// integer ratio targets in order of score via exact rectangle fitting.
pub fn sandwich_search(c: &ConvexPolygon, objective: Objective) -> Result<SandwichPair> {
    if is_parallelogram(c) {
        let corner = c.vertex(0).clone();
        return Ok(pair_from_parallelogram(c, &corner, &c.edge(0), &(c.vertex(3) - c.vertex(0))));
    }
    let paired = paired_edge_dirs(c);
    // Ratio 1 along an axis forces a pair of parallel edges in that direction.
    let lower = objective.floor(!paired.is_empty());
    let targets = objective.targets();
    let dirs = candidate_dirs(c);
    let mut frames: Vec<(Point, Point)> = Vec::new();
    if let Some([i, j, k]) = max_triangle(c) {
        let v = c.vertices();
        frames.push((&v[j] - &v[i], &v[k] - &v[i]));
        frames.push((&v[k] - &v[j], &v[i] - &v[j]));
        frames.push((&v[i] - &v[k], &v[j] - &v[k]));
    }
    for (a, da) in dirs.iter().enumerate() {
        for db in &dirs[a + 1..] {
            if !parallel(da, db) {
                frames.push((da.clone(), db.clone()));
            }
        }
    }
    let mut best: Option<(u64, SandwichPair)> = None;
    for (u, v) in frames {
        let bound = best.as_ref().map_or(u64::MAX, |b| b.0);
        if bound <= lower {
            break;
        }
        if let Some(pair) = best_in_frame(c, &u, &v, &paired, &targets, objective, bound) {
            let score = objective.score(&pair);
            if score < bound {
                best = Some((score, pair));
            }
        }
    }
    match best {
        Some((s, p)) if s <= objective.ceiling() => Ok(p),
        Some((s, _)) => Err(Error::SearchFailed(format!("best score found is {s}"))),
        None => Err(Error::SearchFailed("no admissible frame".into())),
    }
}

fn best_in_frame(
    c: &ConvexPolygon,
    u: &Point,
    v: &Point,
    paired: &[Point],
    targets: &[(i64, i64, u64)],
    objective: Objective,
    bound: u64,
) -> Option<SandwichPair> {
    let inv = Affine2::from_columns(u, v).inverse().ok()?;
    let img: Vec<Point> = c.vertices().iter().map(|p| inv.apply_linear(p)).collect();
    let (x0, x1) = crate::geom::scalar::min_max(img.iter().map(|p| &p.x))?;
    let (y0, y1) = crate::geom::scalar::min_max(img.iter().map(|p| &p.y))?;
    let (w_full, h_full) = (&x1 - &x0, &y1 - &y0);
    let u_paired = paired.iter().any(|d| parallel(d, u));
    let v_paired = paired.iter().any(|d| parallel(d, v));
    for &(a, b, g) in targets {
        if g >= bound {
            break;
        }
        // try both assignments of the target ratios to the frame axes
        for (la, lb) in [(a, b), (b, a)] {
            // λ = 1 along u means P spans the full extent across v's
            // direction, so C needs a pair of edges parallel to u
            if (lb == 1 && !u_paired) || (la == 1 && !v_paired) {
                continue;
            }
            let w = &w_full / int(la);
            let h = &h_full / int(lb);
            if let Some(z) = fit_rectangle(&img, &w, &h) {
                let corner = &u.scale(&z.x) + &v.scale(&z.y);
                let pair = pair_from_parallelogram(c, &corner, &u.scale(&w), &v.scale(&h));
                if objective.score(&pair) < bound {
                    return Some(pair);
                }
            }
        }
    }
    None
}

fn candidate_dirs(c: &ConvexPolygon) -> Vec<Point> {
    let mut dirs: Vec<Point> = Vec::new();
    let mut push = |d: &Point| {
        if let Some(d) = canonical_dir(d) {
            if !dirs.contains(&d) {
                dirs.push(d);
            }
        }
    };
    for i in 0..c.len() {
        push(&c.edge(i));
    }
    let v = c.vertices();
    for i in 0..v.len() {
        for j in i + 2..v.len() {
            push(&(&v[j] - &v[i]));
        }
    }
    for k in 0..16 {
        let t = std::f64::consts::PI * k as f64 / 16.0;
        push(&Point::new(from_f64(t.cos(), 1000), from_f64(t.sin(), 1000)));
    }
    dirs
}

/// Gamma ≤ 3 pair for a centrally symmetric hexagon, from the inscribed
/// parallelograms `p₂p₃p₅p₆` and `p₁p₃p₄p₆` and their rotations.
pub fn hexagon_sandwich_special(h: &ConvexPolygon) -> Result<SandwichPair> {
    if h.len() != 6 {
        return Err(Error::NotHexagon(h.len()));
    }
    if !h.is_centrally_symmetric() {
        return Err(Error::NotCentrallySymmetric);
    }
    let p = |i: usize| h.vertex(i % 6).clone();
    let mut best: Option<SandwichPair> = None;
    for k in 0..3 {
        // 0-based: p_{k+2}p_{k+3}p_{k+5}p_{k+6} and p_{k+1}p_{k+3}p_{k+4}p_{k+6}
        let quads = [[k + 1, k + 2, k + 4, k + 5], [k, k + 2, k + 3, k + 5]];
        for q in quads {
            let (a, b, d) = (p(q[0]), p(q[1]), p(q[3]));
            let pair = pair_from_parallelogram(h, &a, &(&b - &a), &(&d - &a));
            if best.as_ref().map_or(true, |bp| pair.gamma < bp.gamma) {
                best = Some(pair);
            }
        }
    }
    Ok(best.expect("six candidates"))
}

/// Inscribed and circumscribed centrally symmetric hexagons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HexagonSandwich {
    pub h_in: ConvexPolygon,
    pub h_out: ConvexPolygon,
    pub area_ratio: Scalar,
    /// Vertices `p₁…p₆` of `h_in` in construction order, before hulling.
    pub h_in_vertices: [Point; 6],
    pub center: Point,
}

/// Boundary point of an origin-centered convex polygon in direction `d`.
pub fn boundary_point(s: &ConvexPolygon, d: &Point) -> Point {
    let mut t: Option<Scalar> = None;
    for (a, b) in s.edges() {
        let n = Point::new(&b.y - &a.y, &a.x - &b.x);
        let nd = n.dot(d);
        if nd.is_positive() {
            let cand = n.dot(a) / nd;
            if t.as_ref().map_or(true, |t| cand < *t) {
                t = Some(cand);
            }
        }
    }
    d.scale(&t.expect("origin inside polygon"))
}

fn on_boundary(s: &ConvexPolygon, x: &Point) -> bool {
    s.contains_point(x) && !s.strictly_contains(x)
}

/// Affinely regular hexagon `p₁…p₆` inscribed in an origin-centered
/// symmetric polygon, with `p₅` on the ray of `d`, `p₂ = −p₅` and
/// `p₆ − p₁ = p₅`.
pub fn inscribed_hexagon(s: &ConvexPolygon, d: &Point) -> Option<[Point; 6]> {
    let p5 = boundary_point(s, d);
    let v = p5.clone();
    let shifted = s.translate(&-&v);
    let meet = intersection(s, &shifted);
    let cands: Vec<Point> = meet
        .points()
        .into_iter()
        .filter(|x| d.cross(x).is_positive() && on_boundary(s, x) && on_boundary(&shifted, x))
        .collect();
    let lo = cands.iter().min_by(|a, b| a.dot(d).cmp(&b.dot(d)))?;
    let hi = cands.iter().max_by(|a, b| a.dot(d).cmp(&b.dot(d)))?;
    let mid = lo.midpoint(hi);
    let p1 = if on_boundary(s, &mid) && on_boundary(&shifted, &mid) { mid } else { lo.clone() };
    let p6 = &p1 + &v;
    let p2 = -&p5;
    Some([p1.clone(), p2, -&p6, -&p1, p5, p6])
}

/// Whether `p₂p₁ + p₂p₃ = p₃p₄`, the affine-regularity identity.
pub fn is_affinely_regular(h: &[Point; 6]) -> bool {
    let lhs = &(&h[0] - &h[1]) + &(&h[2] - &h[1]);
    let rhs = &h[3] - &h[2];
    lhs == rhs && (0..3).all(|i| h[i] == -&h[i + 3])
}

fn strip_data(s: &ConvexPolygon) -> Vec<(Point, Scalar)> {
    // one (outer normal, half-width) per pair of opposite edges
    let n = s.len();
    (0..n / 2)
        .map(|i| {
            let (a, b) = (s.vertex(i), s.vertex(i + 1));
            let normal = Point::new(&b.y - &a.y, &a.x - &b.x);
            let h = normal.dot(a);
            (normal, h)
        })
        .collect()
}

fn strip_parallelogram(a: &(Point, Scalar), b: &(Point, Scalar)) -> Option<ConvexPolygon> {
    let det = a.0.cross(&b.0);
    if det.is_zero() {
        return None;
    }
    let solve = |ca: &Scalar, cb: &Scalar| {
        // n_a·x = ca, n_b·x = cb
        let x = (ca * &b.0.y - cb * &a.0.y) / &det;
        let y = (&a.0.x * cb - &b.0.x * ca) / &det;
        Point::new(x, y)
    };
    let pts = [
        solve(&a.1, &b.1),
        solve(&a.1, &-&b.1),
        solve(&-&a.1, &b.1),
        solve(&-&a.1, &-&b.1),
    ];
    ConvexPolygon::from_points(&pts).ok()
}

/// Strip-built circumscribed candidates: all 2-strip parallelograms and
/// 3-strip hexagons over the edge directions.
fn strip_candidates(s: &ConvexPolygon) -> Vec<ConvexPolygon> {
    let strips = strip_data(s);
    let m = strips.len();
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let Some(par) = strip_parallelogram(&strips[i], &strips[j]) else {
                continue;
            };
            for st in &strips[j + 1..] {
                let planes = [(st.0.clone(), st.1.clone()), (-&st.0, st.1.clone())];
                if let Clipped::Polygon(h) = clip_halfplanes(par.vertices(), &planes) {
                    out.push(h);
                }
            }
            out.push(par);
        }
    }
    out
}

/// Smallest `μ` with `S ⊆ μ·H` for an origin-centered `H`.
fn dilate_factor(h: &ConvexPolygon, s: &ConvexPolygon) -> Scalar {
    let mut mu = Scalar::zero();
    for (a, b) in h.edges() {
        let n = Point::new(&b.y - &a.y, &a.x - &b.x);
        let c = n.dot(a);
        for v in s.vertices() {
            let r = n.dot(v) / &c;
            if r > mu {
                mu = r;
            }
        }
    }
    mu
}

/// Number of uniformly spaced sweep directions used by default.
pub const DEFAULT_SWEEP: usize = 64;

pub fn hexagon_sandwich(s: &ConvexPolygon) -> Result<HexagonSandwich> {
    hexagon_sandwich_with(s, DEFAULT_SWEEP)
}

/// Sweeps the chord direction over vertex directions, edge normals and
/// `k` uniform directions, keeping the best area ratio.
pub fn hexagon_sandwich_with(s: &ConvexPolygon, k: usize) -> Result<HexagonSandwich> {
    let center = s.symmetry_center().ok_or(Error::NotCentrallySymmetric)?;
    let sc = s.translate(&-&center);
    let mut dirs: Vec<Point> = sc.vertices().to_vec();
    for (a, b) in sc.edges() {
        dirs.push(Point::new(&b.y - &a.y, &a.x - &b.x));
    }
    for i in 0..k {
        let t = std::f64::consts::PI * i as f64 / k as f64;
        let d = Point::new(from_f64(t.cos(), 1000), from_f64(t.sin(), 1000));
        if !d.is_zero() {
            dirs.push(d);
        }
    }
    let strips = strip_candidates(&sc);
    let strip_best = strips.into_iter().min_by(|a, b| a.area2().cmp(&b.area2()));
    let mut best: Option<(Scalar, ConvexPolygon, ConvexPolygon, [Point; 6])> = None;
    for d in &dirs {
        let Some(hex) = inscribed_hexagon(&sc, d) else {
            continue;
        };
        let Ok(h_in) = ConvexPolygon::from_points(&hex) else {
            continue;
        };
        let mu = dilate_factor(&h_in, &sc);
        let dilate = h_in.scale(&mu);
        let h_out = match &strip_best {
            Some(sb) if sb.area2() < dilate.area2() => sb.clone(),
            _ => dilate,
        };
        let ratio = h_in.area2() / h_out.area2();
        if best.as_ref().map_or(true, |(r, ..)| ratio > *r) {
            best = Some((ratio, h_in, h_out, hex));
        }
    }
    let (area_ratio, h_in, h_out, hex) =
        best.ok_or_else(|| Error::SearchFailed("no inscribed hexagon found".into()))?;
    if !sc.contains_polygon(&h_in) || !h_out.contains_polygon(&sc) {
        return Err(Error::VerificationFailed("hexagon sandwich containment".into()));
    }
    let shift = |p: &Point| p + &center;
    Ok(HexagonSandwich {
        h_in: h_in.translate(&center),
        h_out: h_out.translate(&center),
        area_ratio,
        h_in_vertices: hex.each_ref().map(shift),
        center,
    })
}
