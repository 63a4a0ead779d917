//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any criterion outside `KNOWN_GAPS` fails.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use steiner_spanner::format::{write_forest, write_polygon, write_spanner, write_tree};
use steiner_spanner::forest_spanner::build_forest_detailed;
use steiner_spanner::generators::{
    gen_comb, gen_comb_chain, gen_pitchfork_star, gen_random_forest, gen_random_polygon_instance, gen_random_tree,
    Family,
};
use steiner_spanner::geometry::{approx_eq, PathFinder};
use steiner_spanner::polygon_spanner::{build_polygon_detailed, check_containment};
use steiner_spanner::spanner::tree_path_complexity;
use steiner_spanner::steiner_tree::{build_steiner_tree_detailed, normalize_spanner};
use steiner_spanner::verify::{
    check_forest_ratio, check_polygon_ratio, check_structure, check_tree_ratio, fit_power_law, measure, write_csv,
    ExperimentRecord, TreeOracle, VisibilityGraphOracle, RATIO_TOLERANCE,
};
use steiner_spanner::{EdgeWeightedTree, Host, Link, LinkOrigin, LinkPath, Node, NodeKind, Point, SimplePolygon, SpannerGraph};

/// Criteria whose failure is reported but does not fail the run.
const KNOWN_GAPS: &[usize] = &[];

/// Allowed relative growth of the size constant from one n to the next.
const SIZE_SLACK: f64 = 0.05;
/// Relative agreement between the funnel and the visibility graph oracle.
const GEODESIC_TOLERANCE: f64 = 1e-9;

struct Outcome {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
    secs: f64,
}

/// Digests of every artifact a run produces, in production order.
#[derive(Default)]
struct Artifacts {
    digests: Vec<(String, u64)>,
}

impl Artifacts {
    fn record(&mut self, label: impl Into<String>, bytes: &str) {
        let mut h = DefaultHasher::new();
        bytes.hash(&mut h);
        self.digests.push((label.into(), h.finish()));
    }
}

type Check = fn(&mut Artifacts) -> (bool, String);

fn tree_family(name: &str, n: usize) -> EdgeWeightedTree {
    match name {
        "randomTree" => gen_random_tree(n, 4 * n, n as u64),
        "comb" => gen_comb(n, 8 * n),
        "combChain" => gen_comb_chain(1, n, 8 * n),
        "pitchforkStar" => gen_pitchfork_star(1, n, 4 * n),
        _ => unreachable!(),
    }
    .unwrap()
}

fn k_grid(n: usize) -> Vec<usize> {
    let mut ks = vec![1, (n as f64).sqrt().ceil() as usize, n.div_ceil(4)];
    ks.dedup();
    ks
}

fn tree_ratio_grid(art: &mut Artifacts) -> (bool, String) {
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    let mut fails = Vec::new();
    for fam in ["randomTree", "comb", "combChain", "pitchforkStar"] {
        for n in [16, 64, 256] {
            let tree = tree_family(fam, n);
            art.record(format!("c1 {fam} {n} tree"), &write_tree(&tree).unwrap());
            for t in 1..=3 {
                for &k in &k_grid(n) {
                    let b = build_steiner_tree_detailed(&tree, t, k).unwrap();
                    b.spanner.validate(std::slice::from_ref(&tree)).unwrap();
                    let bound = 2.0 * t as f64;
                    let r = check_tree_ratio(&b.spanner, &tree, bound).unwrap();
                    runs += 1;
                    if !r.pass || b.spanner.steiner_count() > k {
                        fails.push(format!("{fam} n={n} t={t} k={k} ratio={}", r.max_ratio));
                    }
                    worst = worst.max(r.max_ratio / bound);
                    art.record(format!("c1 {fam} {n} {t} {k}"), &write_spanner(&b.spanner, true));
                }
            }
        }
    }
    (fails.is_empty(), format!("{runs} runs, worst ratio/bound {worst:.6}, {} failures {fails:?}", fails.len()))
}

fn structure(art: &mut Artifacts) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut bad = Vec::new();
    for i in 0..200 {
        let n = rng.gen_range(2..=128);
        let m = 2 * n - 1 + rng.gen_range(0..=2 * n);
        let k = rng.gen_range(1..=16usize).min(n);
        let t = 1 + i % 3;
        let tree = gen_random_tree(n, m, 1000 + i as u64).unwrap();
        let b = build_steiner_tree_detailed(&tree, t, k).unwrap();
        let rep = check_structure(&tree, &b, k);
        if !rep.pass() {
            bad.push(format!("tree {i}: {:?}", rep.violations));
        }
        art.record(format!("c2 {i}"), &write_spanner(&b.spanner, false));
    }
    (bad.is_empty(), format!("200 trees, {} with violations {bad:?}", bad.len()))
}

/// Rebuilds every link of `g` against the subdivided tree `t`.
fn relink(g: &SpannerGraph, t: &EdgeWeightedTree) -> SpannerGraph {
    let vertex = |i: usize| match g.nodes[i].host {
        Host::Vertex { vertex, .. } => vertex,
        Host::Point(_) => unreachable!(),
    };
    let mut out = SpannerGraph { metric: g.metric, nodes: g.nodes.clone(), links: Vec::new() };
    for l in &g.links {
        out.links.push(tree_link(t, l.a, l.b, vertex(l.a), vertex(l.b), l.origins.clone()));
    }
    out
}

fn tree_link(t: &EdgeWeightedTree, a: usize, b: usize, va: usize, vb: usize, origins: Vec<LinkOrigin>) -> Link {
    let path = t.path(va, vb);
    Link { a, b, length: t.distance(va, vb), complexity: tree_path_complexity(t, &path), path: LinkPath::Vertices(path), origins }
}

fn normalization(art: &mut Artifacts) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut bad = Vec::new();
    let mut injected = 0;
    for i in 0..100 {
        let n = rng.gen_range(4..=64);
        let mut tree = gen_random_tree(n, 3 * n, 2000 + i as u64).unwrap();
        let k = rng.gen_range(1..=n / 2);
        let t = rng.gen_range(1..=3);
        let base = build_steiner_tree_detailed(&tree, t, k).unwrap().spanner;
        let original_edges = tree.edge_count();
        let mut edges: Vec<usize> = (0..original_edges).collect();
        let mut new_points = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let e = edges.swap_remove(rng.gen_range(0..edges.len()));
            let count = rng.gen_range(2..=3);
            let mut group = vec![tree.insert_point_on_edge(e, rng.gen_range(0.2..0.8)).unwrap()];
            let mut lower = tree.edge_count() - 1;
            for _ in 1..count {
                group.push(tree.insert_point_on_edge(lower, rng.gen_range(0.2..0.8)).unwrap());
                lower = tree.edge_count() - 1;
            }
            new_points.push(group);
        }
        let mut pre = relink(&base, &tree);
        let sites = pre.site_nodes();
        let origin = vec![LinkOrigin { tree: 0, part: None }];
        for group in &new_points {
            let ids: Vec<usize> = group
                .iter()
                .map(|&v| {
                    pre.nodes.push(Node { kind: NodeKind::Steiner, host: Host::Vertex { tree: 0, vertex: v } });
                    pre.nodes.len() - 1
                })
                .collect();
            injected += ids.len();
            for w in ids.windows(2) {
                let (va, vb) = (host_vertex(&pre, w[0]), host_vertex(&pre, w[1]));
                pre.links.push(tree_link(&tree, w[0], w[1], va, vb, origin.clone()));
            }
            for &s in &ids {
                let site = sites[rng.gen_range(0..sites.len())];
                let (va, vb) = (host_vertex(&pre, s), host_vertex(&pre, site));
                pre.links.push(tree_link(&tree, s, site, va, vb, origin.clone()));
            }
        }
        let trees = std::slice::from_ref(&tree);
        pre.validate(trees).unwrap();
        let pre_ratio = check_tree_ratio(&pre, &tree, f64::INFINITY).unwrap().max_ratio;
        let post = normalize_spanner(&pre, &tree).unwrap();
        if let Err(e) = post.validate(trees) {
            bad.push(format!("spanner {i}: invalid after normalization: {e}"));
            continue;
        }
        let mut per_edge: HashMap<usize, usize> = HashMap::new();
        for (j, node) in post.nodes.iter().enumerate() {
            if node.kind == NodeKind::Steiner {
                if let Some(e) = tree.subdivided_edge(host_vertex(&post, j)) {
                    *per_edge.entry(e).or_default() += 1;
                }
            }
        }
        if let Some((e, c)) = per_edge.iter().find(|(_, &c)| c > 1) {
            bad.push(format!("spanner {i}: edge {e} keeps {c} interior Steiner points"));
        }
        if post.complexity() > pre.complexity() {
            bad.push(format!("spanner {i}: complexity {} > {}", post.complexity(), pre.complexity()));
        }
        let post_ratio = check_tree_ratio(&post, &tree, f64::INFINITY).unwrap().max_ratio;
        if post_ratio > pre_ratio * (1.0 + RATIO_TOLERANCE) {
            bad.push(format!("spanner {i}: ratio {post_ratio} > {pre_ratio}"));
        }
        art.record(format!("c3 {i}"), &write_spanner(&post, true));
    }
    (bad.is_empty(), format!("100 spanners, {injected} injected points, {} violations {bad:?}", bad.len()))
}

fn host_vertex(g: &SpannerGraph, i: usize) -> usize {
    match g.nodes[i].host {
        Host::Vertex { vertex, .. } => vertex,
        Host::Point(_) => unreachable!(),
    }
}

fn forests(art: &mut Artifacts) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut bad = Vec::new();
    for i in 0..50 {
        let trees = rng.gen_range(1..=8);
        let n = rng.gen_range(2 * trees..=256);
        let k = rng.gen_range(0..=n.min(32));
        let t = rng.gen_range(1..=3);
        let forest = gen_random_forest(trees, n, 3 * n, 3000 + i as u64).unwrap();
        let b = build_forest_detailed(&forest, t, k).unwrap();
        b.spanner.validate(&forest.trees).unwrap();
        let r = check_forest_ratio(&b.spanner, &forest.trees, 2.0 * t as f64).unwrap();
        if !r.pass {
            bad.push(format!("forest {i}: ratio {} > {}", r.max_ratio, 2 * t));
        }
        if b.spanner.steiner_count() > k {
            bad.push(format!("forest {i}: {} Steiner points for k = {k}", b.spanner.steiner_count()));
        }
        art.record(format!("c4 {i} forest"), &write_forest(&forest).unwrap());
        art.record(format!("c4 {i}"), &write_spanner(&b.spanner, true));
    }
    (bad.is_empty(), format!("50 forests, {} violations {bad:?}", bad.len()))
}

/// The polygon corpus: ten `(n, m)` shapes per family.
fn polygon_corpus() -> Vec<(Family, usize, SimplePolygon, Vec<Point>)> {
    const SHAPES: [(usize, usize); 10] =
        [(8, 32), (16, 64), (24, 96), (32, 128), (40, 160), (48, 256), (56, 384), (64, 512), (64, 256), (32, 512)];
    let mut out = Vec::new();
    for fam in [Family::Convex, Family::Spiral, Family::Staircase] {
        for (j, &(n, m)) in SHAPES.iter().enumerate() {
            let (p, s) = gen_random_polygon_instance(fam, n, m, 500 + j as u64).unwrap();
            out.push((fam, j, p, s));
        }
    }
    out
}

fn polygon_ratio(art: &mut Artifacts) -> (bool, String) {
    polygon_runs(art, false)
}

fn containment(art: &mut Artifacts) -> (bool, String) {
    polygon_runs(art, true)
}

fn polygon_runs(art: &mut Artifacts, containment: bool) -> (bool, String) {
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    let mut checked = 0;
    let tag = if containment { "c6" } else { "c5" };
    for (fam, j, p, s) in polygon_corpus() {
        art.record(format!("{tag} {} {j} polygon", fam.name()), &write_polygon(&p, &s));
        for t in [1, 2] {
            for k in [1, 4] {
                let b = build_polygon_detailed(&p, &s, t, k).unwrap();
                runs += 1;
                let label = format!("{} #{j} n={} m={} t={t} k={k}", fam.name(), s.len(), p.len());
                if containment {
                    let c = check_containment(&b, &p).unwrap();
                    checked += c.checked;
                    if !c.pass() {
                        bad.push(format!("{label}: {} violations", c.violations.len()));
                    }
                } else {
                    b.spanner.validate(&[]).unwrap();
                    let bound = 2.0 * std::f64::consts::SQRT_2 * t as f64;
                    let r = check_polygon_ratio(&b.spanner, &p, bound).unwrap();
                    worst = worst.max(r.max_ratio / bound);
                    if !r.pass || b.spanner.steiner_count() > k {
                        bad.push(format!("{label}: ratio {} steiner {}", r.max_ratio, b.spanner.steiner_count()));
                    }
                }
                art.record(format!("{tag} {label}"), &write_spanner(&b.spanner, true));
            }
        }
    }
    let what = if containment {
        format!("{runs} builds, {checked} link checks")
    } else {
        format!("{runs} builds, worst ratio/bound {worst:.6}")
    };
    (bad.is_empty(), format!("{what}, {} failures {bad:?}", bad.len()))
}

fn comb_record(n: usize, k: usize) -> ExperimentRecord {
    let tree = gen_comb(n, 16 * n).unwrap();
    let g = build_steiner_tree_detailed(&tree, 2, k).unwrap().spanner;
    ExperimentRecord {
        family: "comb".into(),
        n,
        m: 16 * n,
        k,
        t: 2,
        measure: measure(&g),
        max_ratio: check_tree_ratio(&g, &tree, 4.0).unwrap().max_ratio,
    }
}

fn csv(records: &[ExperimentRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, records).unwrap();
    String::from_utf8(buf).unwrap()
}

fn complexity_scaling(art: &mut Artifacts) -> (bool, String) {
    let records: Vec<ExperimentRecord> = [64, 128, 256, 512, 1024].iter().map(|&n| comb_record(n, 1)).collect();
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.n as f64, r.measure.complexity as f64)).collect();
    let slope = fit_power_law(&pts).unwrap();
    let at16 = comb_record(512, 16);
    let at1 = &records[3];
    let ratio = at16.measure.complexity as f64 / at1.measure.complexity as f64;
    let mut all = records.clone();
    all.push(at16);
    art.record("c7 csv", &csv(&all));
    let pass = (1.35..=1.65).contains(&slope) && ratio <= 0.8;
    (pass, format!("exponent {slope:.4} in [1.35, 1.65], complexity(k=16)/complexity(k=1) = {ratio:.4} <= 0.8"))
}

/// `true` if each constant exceeds its predecessor by at most `SIZE_SLACK`.
fn non_increasing(cs: &[f64]) -> bool {
    cs.windows(2).all(|w| w[1] <= w[0] * (1.0 + SIZE_SLACK))
}

fn size_constants(art: &mut Artifacts) -> (bool, String) {
    let mut lines = Vec::new();
    let mut pass = true;
    for kind in ["k=1", "k=sqrt(n)"] {
        let mut cs = Vec::new();
        for n in [32usize, 64, 128, 256, 512, 1024] {
            let k = if kind == "k=1" { 1 } else { (n as f64).sqrt().ceil() as usize };
            let mut total = 0;
            for seed in 0..4 {
                let tree = gen_random_tree(n, 4 * n, 4000 + seed).unwrap();
                total += build_steiner_tree_detailed(&tree, 2, k).unwrap().spanner.size();
            }
            let size = total as f64 / 4.0;
            cs.push(size / (n as f64 * (n as f64 / k as f64 + 1.0).log2()));
        }
        pass &= non_increasing(&cs);
        lines.push(format!("tree {kind} C = {}", fmt_list(&cs)));
    }
    for fam in [Family::Convex, Family::Spiral, Family::Staircase] {
        let mut cs = Vec::new();
        for n in [8usize, 16, 32, 64] {
            let mut total = 0;
            for seed in 0..3 {
                let (p, s) = gen_random_polygon_instance(fam, n, 8 * n, 4100 + seed).unwrap();
                total += build_polygon_detailed(&p, &s, 2, 4).unwrap().spanner.size();
            }
            let size = total as f64 / 3.0;
            cs.push(size / (n as f64 * (n as f64 + 2.0).log2().powi(2)));
        }
        pass &= non_increasing(&cs);
        lines.push(format!("{} C = {}", fam.name(), fmt_list(&cs)));
    }
    art.record("c8", &lines.join("\n"));
    (pass, format!("slack {SIZE_SLACK}; {}", lines.join("; ")))
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(" ")
}

fn random_inside(rng: &mut ChaCha8Rng, p: &SimplePolygon) -> Point {
    let (lo, hi) = p.bounds();
    loop {
        let q = Point::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if p.contains(q) {
            return q;
        }
    }
}

fn cross_validation(art: &mut Artifacts) -> (bool, String) {
    let corpus = polygon_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut pairs = 0;
    let mut worst: f64 = 0.0;
    let mut disagree = 0;
    let per = 10_000usize.div_ceil(corpus.len());
    for (_, _, p, _) in &corpus {
        let finder = PathFinder::new(p).unwrap();
        let oracle = VisibilityGraphOracle::new(p);
        for _ in 0..per {
            let a = random_inside(&mut rng, p);
            let b = random_inside(&mut rng, p);
            let f = finder.shortest_path(a, b).unwrap().length;
            let o = oracle.distance(a, b).unwrap();
            pairs += 1;
            worst = worst.max((f - o).abs() / f.max(o).max(1.0));
            if !approx_eq(f, o, GEODESIC_TOLERANCE) {
                disagree += 1;
            }
        }
    }
    let mut tree_pairs = 0;
    let mut tree_mismatch = 0;
    for seed in 0..20 {
        let tree = gen_random_tree(40, 160, 5000 + seed).unwrap();
        let oracle = TreeOracle::new(&tree);
        for a in 0..tree.vertex_count() {
            for b in 0..tree.vertex_count() {
                tree_pairs += 1;
                if oracle.distance(a, b) != tree.distance(a, b) || oracle.lca(a, b) != tree.lca(a, b) {
                    tree_mismatch += 1;
                }
            }
        }
    }
    art.record("c9", &format!("{pairs} {disagree} {tree_pairs} {tree_mismatch}"));
    (
        disagree == 0 && tree_mismatch == 0 && pairs >= 10_000,
        format!(
            "{pairs} geodesic pairs, {disagree} disagreements, worst relative gap {worst:.2e}; {tree_pairs} tree pairs, {tree_mismatch} mismatches"
        ),
    )
}

const CHECKS: [(usize, &str, Check); 9] = [
    (1, "tree spanning ratio <= 2t", tree_ratio_grid),
    (2, "structure of colorings and carved parts", structure),
    (3, "normalization of interior Steiner points", normalization),
    (4, "forest ratio and Steiner budget", forests),
    (5, "polygon ratio <= 2*sqrt(2)*t", polygon_ratio),
    (6, "containment of lifted links", containment),
    (7, "comb complexity scaling", complexity_scaling),
    (8, "size constants non-increasing", size_constants),
    (9, "oracle cross-validation", cross_validation),
];

fn run_all(art: &mut Artifacts) -> Vec<Outcome> {
    CHECKS
        .iter()
        .map(|&(id, name, check)| {
            let start = Instant::now();
            let (pass, detail) = check(art);
            Outcome { id, name, pass, detail, secs: start.elapsed().as_secs_f64() }
        })
        .collect()
}

fn main() -> ExitCode {
    let mut first = Artifacts::default();
    let mut outcomes = run_all(&mut first);
    let start = Instant::now();
    let mut second = Artifacts::default();
    run_all(&mut second);
    let mismatched: Vec<&str> = first
        .digests
        .iter()
        .zip(&second.digests)
        .filter(|(a, b)| a != b)
        .map(|(a, _)| a.0.as_str())
        .collect();
    let same = mismatched.is_empty() && first.digests.len() == second.digests.len();
    outcomes.push(Outcome {
        id: 10,
        name: "determinism",
        pass: same,
        detail: format!("{} artifacts compared, {} differ {mismatched:?}", first.digests.len(), mismatched.len()),
        secs: start.elapsed().as_secs_f64(),
    });
    let mut failed = false;
    for o in &outcomes {
        let status = match (o.pass, KNOWN_GAPS.contains(&o.id)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known gap)",
            (false, false) => {
                failed = true;
                "FAIL"
            }
        };
        println!("criterion {:>2} {status}: {} [{:.1}s] {}", o.id, o.name, o.secs, o.detail);
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
