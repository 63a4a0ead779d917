//! Deterministic instance generators: the lower-bound gadgets (pitchfork
//! stars, comb chains, combs) and seeded random trees, forests and polygons.

use std::collections::HashSet;
use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::geometry::{Location, Point, SimplePolygon};
use crate::tree::{EdgeWeightedTree, Forest, TreeBuilder, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    PitchforkStar,
    CombChain,
    Comb,
    RandomTree,
    RandomForest,
    Convex,
    PerturbedConvex,
    Spiral,
    Staircase,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::PitchforkStar,
        Family::CombChain,
        Family::Comb,
        Family::RandomTree,
        Family::RandomForest,
        Family::Convex,
        Family::PerturbedConvex,
        Family::Spiral,
        Family::Staircase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::PitchforkStar => "pitchfork-star",
            Family::CombChain => "comb-chain",
            Family::Comb => "comb",
            Family::RandomTree => "random-tree",
            Family::RandomForest => "random-forest",
            Family::Convex => "convex",
            Family::PerturbedConvex => "perturbed-convex",
            Family::Spiral => "spiral",
            Family::Staircase => "staircase",
        }
    }

    pub fn is_polygon(self) -> bool {
        matches!(self, Family::Convex | Family::PerturbedConvex | Family::Spiral | Family::Staircase)
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown family {s:?}")))
    }
}

/// Parameters of one generated instance. `k` is the gadget parameter of the
/// pitchfork star and the comb chain and the tree count of random forests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GadgetSpec {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub enum Instance {
    Tree(EdgeWeightedTree),
    Forest(Forest),
    Polygon(SimplePolygon, Vec<Point>),
}

impl GadgetSpec {
    pub fn generate(&self) -> Result<Instance> {
        let GadgetSpec { family, n, m, k, seed } = *self;
        Ok(match family {
            Family::PitchforkStar => Instance::Tree(gen_pitchfork_star(k, n, m)?),
            Family::CombChain => Instance::Tree(gen_comb_chain(k, n, m)?),
            Family::Comb => Instance::Tree(gen_comb(n, m)?),
            Family::RandomTree => Instance::Tree(gen_random_tree(n, m, seed)?),
            Family::RandomForest => Instance::Forest(gen_random_forest(k, n, m, seed)?),
            _ => {
                let (p, s) = gen_random_polygon_instance(family, n, m, seed)?;
                Instance::Polygon(p, s)
            }
        })
    }
}

/// Sizes of `parts` nearly equal pieces of `total`, larger ones first.
fn spread(total: usize, parts: usize) -> Vec<usize> {
    (0..parts).map(|i| total / parts + usize::from(i < total % parts)).collect()
}

/// Star of `2k` pitchforks. Each pitchfork hangs from the center by a handle
/// of weight 2 and ends in a spine of weight-`ε` edges carrying weight-1
/// teeth, with `ε = 1/(4m)`. The tree has exactly `m` vertices and `n` sites.
pub fn gen_pitchfork_star(k: usize, n: usize, m: usize) -> Result<EdgeWeightedTree> {
    if k == 0 {
        return invalid("pitchfork star needs k >= 1");
    }
    if n < 4 * k {
        return invalid(format!("pitchfork star needs n >= 4k, got n = {n}, k = {k}"));
    }
    let forks = 2 * k;
    let teeth = spread(n, forks);
    if m < 1 + 2 * n {
        return invalid(format!("pitchfork star needs m >= 2n + 1, got m = {m}"));
    }
    let spines = spread(m - 1 - n, forks);
    if spines.iter().zip(&teeth).any(|(l, s)| l < s) {
        return invalid(format!("m = {m} leaves too few spine vertices for {n} teeth"));
    }
    let eps = 1.0 / (4.0 * m as f64);
    let mut b = TreeBuilder::new(m, 0);
    let mut next = 1;
    for (&len, &s) in spines.iter().zip(&teeth) {
        let spine: Vec<VertexId> = (next..next + len).collect();
        next += len;
        b.edge(0, spine[0], 2.0);
        let mut tooth = 0;
        for (i, &v) in spine.iter().enumerate() {
            if i + 1 < len {
                b.edge(v, spine[i + 1], eps);
            }
            while tooth < s && (tooth + 1) * len / s - 1 == i {
                b.edge(v, next, 1.0);
                b.site(next);
                next += 1;
                tooth += 1;
            }
        }
    }
    b.build()
}

/// Appends a comb to the path ending at `tail`: one spine vertex and one
/// tooth of weight `h` per site, spine edges of weight `spine_w`.
fn comb_teeth(b: &mut TreeBuilder, next: &mut usize, mut tail: Option<VertexId>, sites: usize, spine_w: f64, h: f64) -> VertexId {
    for _ in 0..sites {
        let v = *next;
        *next += 1;
        if let Some(t) = tail {
            b.edge(t, v, spine_w);
        }
        b.edge(v, *next, h);
        b.site(*next);
        *next += 1;
        tail = Some(v);
    }
    tail.unwrap()
}

/// `2k+1` combs in a row joined by corridors of `M` edges. Teeth weigh
/// `h = 1`, all corridors together weigh `w = 1/(8m)` and spine edges weigh
/// `1/(16m²)`.
pub fn gen_comb_chain(k: usize, n: usize, m: usize) -> Result<EdgeWeightedTree> {
    if k == 0 {
        return invalid("comb chain needs k >= 1");
    }
    let combs = 2 * k + 1;
    if n < combs {
        return invalid(format!("comb chain needs n >= 2k + 1, got n = {n}, k = {k}"));
    }
    if m < 4 * combs || m < 2 * n + 2 * k {
        return invalid(format!("comb chain needs m >= max(4(2k + 1), 2n + 2k), got m = {m}"));
    }
    let corridor = (m - 2 * n) / (2 * k) + 1;
    let total = 2 * n + 2 * k * (corridor - 1);
    let w = 1.0 / (8.0 * m as f64);
    let step = w / (2 * k * corridor) as f64;
    let spine_w = 1.0 / (16.0 * (m * m) as f64);
    let mut b = TreeBuilder::new(total, 0);
    let mut next = 0;
    let mut tail = None;
    for s in spread(n, combs) {
        if let Some(mut t) = tail {
            for _ in 0..corridor - 1 {
                b.edge(t, next, step);
                t = next;
                next += 1;
            }
            tail = Some(t);
        }
        // the first spine vertex of a later comb closes the corridor
        let first = next;
        next += 1;
        if let Some(t) = tail {
            b.edge(t, first, step);
        }
        b.edge(first, next, 1.0);
        b.site(next);
        next += 1;
        tail = Some(comb_teeth(&mut b, &mut next, Some(first), s - 1, spine_w, 1.0));
    }
    debug_assert_eq!(next, total);
    b.build()
}

/// A single comb whose `n` teeth of weight 1 are separated by corridors of
/// `M = ⌊m/n⌋` edges and weight `w/n` each, with `w = 1/(8m)`. A corridor
/// also leads from the root to the first tooth.
pub fn gen_comb(n: usize, m: usize) -> Result<EdgeWeightedTree> {
    if n < 2 {
        return invalid("comb needs at least two teeth");
    }
    if m < 2 * n {
        return invalid(format!("comb needs m >= 2n, got m = {m}, n = {n}"));
    }
    let corridor = m / n;
    let w = 1.0 / (8.0 * m as f64);
    let step = w / (corridor * n) as f64;
    let total = 1 + n * corridor + n;
    let mut b = TreeBuilder::new(total, 0);
    let mut tail = 0;
    let mut next = 1;
    for _ in 0..n {
        for _ in 0..corridor {
            b.edge(tail, next, step);
            tail = next;
            next += 1;
        }
        b.edge(tail, next, 1.0);
        b.site(next);
        next += 1;
    }
    b.build()
}

fn weight(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(0.1..10.0)
}

/// Random rooted tree with `m` vertices whose `n` leaves are exactly the
/// sites. A random binary tree on `n` leaves is grown first, then random
/// edges are subdivided. Weights are uniform in `[0.1, 10)`.
pub fn gen_random_tree(n: usize, m: usize, seed: u64) -> Result<EdgeWeightedTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_tree(&mut rng, n, m)
}

fn random_tree(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Result<EdgeWeightedTree> {
    if n < 2 {
        return invalid("random tree needs at least two sites");
    }
    if m < 2 * n - 1 {
        return invalid(format!("random tree needs m >= 2n - 1, got m = {m}, n = {n}"));
    }
    // edges as (parent, child); vertex 0 is the root
    let mut edges: Vec<(usize, usize)> = vec![(0, 1), (0, 2)];
    let mut leaves = vec![1, 2];
    let mut count = 3;
    while leaves.len() < n {
        let i = rng.gen_range(0..leaves.len());
        let v = leaves.swap_remove(i);
        edges.push((v, count));
        edges.push((v, count + 1));
        leaves.push(count);
        leaves.push(count + 1);
        count += 2;
    }
    while count < m {
        let i = rng.gen_range(0..edges.len());
        let (p, c) = edges[i];
        edges[i] = (p, count);
        edges.push((count, c));
        count += 1;
    }
    let mut b = TreeBuilder::new(m, 0);
    for &(p, c) in &edges {
        b.edge(p, c, weight(rng));
    }
    leaves.sort_unstable();
    for v in leaves {
        b.site(v);
    }
    b.build()
}

/// Random forest of `trees` trees sharing `n` sites and `m` vertices.
pub fn gen_random_forest(trees: usize, n: usize, m: usize, seed: u64) -> Result<Forest> {
    if trees == 0 {
        return invalid("forest needs at least one tree");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sites = spread(n, trees);
    let vertices = spread(m, trees);
    let mut out = Vec::with_capacity(trees);
    for (s, v) in sites.into_iter().zip(vertices) {
        out.push(random_tree(&mut rng, s, v.max(2 * s.max(2) - 1))?);
    }
    Ok(Forest::new(out))
}

/// Random polygon of the given family with `m` vertices and `n` sites
/// strictly inside it. Sites have pairwise distinct x coordinates that also
/// differ from every vertex x coordinate.
pub fn gen_random_polygon_instance(family: Family, n: usize, m: usize, seed: u64) -> Result<(SimplePolygon, Vec<Point>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices = match family {
        Family::Convex => star_polygon(&mut rng, m, 0.0)?,
        Family::PerturbedConvex => star_polygon(&mut rng, m, 0.3)?,
        Family::Spiral => spiral(&mut rng, m)?,
        Family::Staircase => staircase(&mut rng, m)?,
        _ => return invalid(format!("{} is not a polygon family", family.name())),
    };
    let polygon = SimplePolygon::new(vertices)?;
    let sites = place_sites(&mut rng, &polygon, n)?;
    Ok((polygon, sites))
}

/// Vertices at random increasing angles with radii `1 ± jitter`.
fn star_polygon(rng: &mut ChaCha8Rng, m: usize, jitter: f64) -> Result<Vec<Point>> {
    if m < 3 {
        return invalid(format!("polygon needs m >= 3, got {m}"));
    }
    let gaps: Vec<f64> = (0..m).map(|_| rng.gen_range(0.75..1.25)).collect();
    let total: f64 = gaps.iter().sum();
    let mut angle = rng.gen_range(0.0..TAU);
    let mut out = Vec::with_capacity(m);
    for g in gaps {
        let r = if jitter > 0.0 { 1.0 + rng.gen_range(-jitter..jitter) } else { 1.0 };
        out.push(Point::new(r * angle.cos(), r * angle.sin()));
        angle += g / total * TAU;
    }
    Ok(out)
}

/// Corridor of constant width winding around the origin for up to two turns.
fn spiral(rng: &mut ChaCha8Rng, m: usize) -> Result<Vec<Point>> {
    if m < 6 {
        return invalid(format!("spiral needs m >= 6, got {m}"));
    }
    let half = m / 2;
    let (a, b) = (1.0, 0.2);
    let width = PI * b;
    let step = (4.0 * PI / (half - 1) as f64).min(0.3);
    let start = rng.gen_range(0.0..TAU);
    let at = |theta: f64, r: f64| Point::new(r * (start + theta).cos(), r * (start + theta).sin());
    let mut inner = Vec::with_capacity(half);
    let mut outer = Vec::with_capacity(half);
    for j in 0..half {
        let theta = j as f64 * step;
        let r = a + b * theta;
        inner.push(at(theta, r + rng.gen_range(-0.05..0.05) * width));
        outer.push(at(theta, r + width + rng.gen_range(-0.05..0.05) * width));
    }
    // counterclockwise: out along the outer wall, back along the inner one
    let mut out = outer;
    if m % 2 == 1 {
        let end = (half - 1) as f64 * step;
        let r = a + b * end + width / 2.0;
        out.push(at(end + step / 4.0, r));
    }
    out.extend(inner.into_iter().rev());
    Ok(out)
}

/// Corridor that climbs a random staircase to the upper right.
fn staircase(rng: &mut ChaCha8Rng, m: usize) -> Result<Vec<Point>> {
    if m < 4 {
        return invalid(format!("staircase needs m >= 4, got {m}"));
    }
    let q = m / 2;
    let c = 0.5;
    let mut lower = vec![Point::new(0.0, 0.0)];
    for i in 1..q {
        let p = lower[i - 1];
        lower.push(if i % 2 == 1 {
            Point::new(p.x + rng.gen_range(1.0..2.0), p.y)
        } else {
            Point::new(p.x, p.y + rng.gen_range(1.0..2.0))
        });
    }
    let shift = Point::new(-c, c);
    let mut out = lower.clone();
    if m % 2 == 1 {
        let last = lower[q - 1];
        let dir = last - lower[q - 2];
        let dir = dir * (1.0 / dir.dot(dir).sqrt());
        out.push(last + shift * 0.5 + dir * (c / 2.0));
    }
    out.extend(lower.iter().rev().map(|&p| p + shift));
    Ok(out)
}

fn place_sites(rng: &mut ChaCha8Rng, polygon: &SimplePolygon, n: usize) -> Result<Vec<Point>> {
    let (lo, hi) = polygon.bounds();
    let mut xs: HashSet<u64> = polygon.vertices().iter().map(|p| p.x.to_bits()).collect();
    let mut sites = Vec::with_capacity(n);
    let budget = 10_000 + 1_000 * n;
    for _ in 0..budget {
        if sites.len() == n {
            break;
        }
        let p = Point::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if polygon.locate(p) == Location::Inside && !xs.contains(&p.x.to_bits()) {
            xs.insert(p.x.to_bits());
            sites.push(p);
        }
    }
    if sites.len() < n {
        return Err(Error::Degenerate(format!("could only place {} of {n} sites", sites.len())));
    }
    Ok(sites)
}
