//! Brute-force oracles and meters used to certify constructed spanners.
//!
//! Nothing here reuses the construction code paths: tree distances are
//! recomputed with binary-lifting LCA over the raw edge list, geodesic
//! distances with Dijkstra over the visibility graph of the reflex vertices,
//! and spanner distances with Dijkstra over the link graph.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::geometry::{Point, SimplePolygon};
use crate::spanner::{Host, SpannerGraph};
use crate::steiner_tree::SteinerBuild;
use crate::tree::{EdgeWeightedTree, VertexId};

/// Relative slack used by every ratio comparison.
pub const RATIO_TOLERANCE: f64 = 1e-9;

/// Tree distances by binary lifting over the edge list alone.
#[derive(Debug, Clone)]
pub struct TreeOracle {
    depth: Vec<usize>,
    up_weight: Vec<f64>,
    jump: Vec<Vec<usize>>,
}

impl TreeOracle {
    pub fn new(tree: &EdgeWeightedTree) -> Self {
        let m = tree.vertex_count();
        let mut parent = vec![usize::MAX; m];
        let mut up_weight = vec![0.0; m];
        let mut adj = vec![Vec::new(); m];
        for e in tree.edges() {
            adj[e.parent].push((e.child, e.weight));
        }
        let root = tree.root();
        parent[root] = root;
        let mut depth = vec![0; m];
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &(c, w) in &adj[v] {
                parent[c] = v;
                up_weight[c] = w;
                depth[c] = depth[v] + 1;
                stack.push(c);
            }
        }
        let levels = usize::BITS as usize - m.leading_zeros() as usize;
        let mut jump = vec![parent];
        for l in 1..levels.max(1) {
            let prev = &jump[l - 1];
            let next = (0..m).map(|v| prev[prev[v]]).collect();
            jump.push(next);
        }
        TreeOracle { depth, up_weight, jump }
    }

    pub fn lca(&self, mut a: VertexId, mut b: VertexId) -> VertexId {
        if self.depth[a] < self.depth[b] {
            std::mem::swap(&mut a, &mut b);
        }
        let diff = self.depth[a] - self.depth[b];
        for (l, row) in self.jump.iter().enumerate() {
            if diff >> l & 1 == 1 {
                a = row[a];
            }
        }
        if a == b {
            return a;
        }
        for row in self.jump.iter().rev() {
            if row[a] != row[b] {
                a = row[a];
                b = row[b];
            }
        }
        self.jump[0][a]
    }

    fn climb(&self, mut v: VertexId, top: VertexId) -> f64 {
        let mut sum = 0.0;
        while v != top {
            sum += self.up_weight[v];
            v = self.jump[0][v];
        }
        sum
    }

    /// Path weight, each half summed bottom-up.
    pub fn distance(&self, a: VertexId, b: VertexId) -> f64 {
        let c = self.lca(a, b);
        self.climb(a, c) + self.climb(b, c)
    }

    pub fn hops(&self, a: VertexId, b: VertexId) -> usize {
        let c = self.lca(a, b);
        self.depth[a] + self.depth[b] - 2 * self.depth[c]
    }
}

/// All-pairs vertex distances of a small tree by Floyd-Warshall.
pub fn floyd_warshall(tree: &EdgeWeightedTree) -> Vec<Vec<f64>> {
    let m = tree.vertex_count();
    let mut d = vec![vec![f64::INFINITY; m]; m];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for e in tree.edges() {
        d[e.parent][e.child] = e.weight;
        d[e.child][e.parent] = e.weight;
    }
    for k in 0..m {
        for i in 0..m {
            let dik = d[i][k];
            if !dik.is_finite() {
                continue;
            }
            for j in 0..m {
                let via = dik + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Geodesic distances as shortest paths in the visibility graph of the
/// reflex vertices.
#[derive(Debug, Clone)]
pub struct VisibilityGraphOracle {
    polygon: SimplePolygon,
    reflex: Vec<Point>,
    apsp: Vec<f64>,
}

/// A query point prepared for repeated distance queries.
#[derive(Debug, Clone)]
pub struct PreparedPoint {
    pub point: Point,
    visible: Vec<bool>,
    /// Geodesic distance to every reflex vertex.
    reach: Vec<f64>,
}

impl VisibilityGraphOracle {
    pub fn new(polygon: &SimplePolygon) -> Self {
        let reflex: Vec<Point> = polygon.reflex_vertices().into_iter().map(|i| polygon.vertex(i)).collect();
        let r = reflex.len();
        let mut apsp = vec![f64::INFINITY; r * r];
        for i in 0..r {
            apsp[i * r + i] = 0.0;
            for j in i + 1..r {
                if polygon.segment_inside(reflex[i], reflex[j]) {
                    let d = reflex[i].dist(reflex[j]);
                    apsp[i * r + j] = d;
                    apsp[j * r + i] = d;
                }
            }
        }
        for k in 0..r {
            for i in 0..r {
                let dik = apsp[i * r + k];
                if !dik.is_finite() {
                    continue;
                }
                for j in 0..r {
                    let via = dik + apsp[k * r + j];
                    if via < apsp[i * r + j] {
                        apsp[i * r + j] = via;
                    }
                }
            }
        }
        VisibilityGraphOracle { polygon: polygon.clone(), reflex, apsp }
    }

    pub fn prepare(&self, p: Point) -> Result<PreparedPoint> {
        if !self.polygon.contains(p) {
            return invalid(format!("point ({p}) is outside the polygon"));
        }
        let r = self.reflex.len();
        let visible: Vec<bool> = self.reflex.iter().map(|&q| self.polygon.segment_inside(p, q)).collect();
        let mut reach = vec![f64::INFINITY; r];
        for i in (0..r).filter(|&i| visible[i]) {
            let d = p.dist(self.reflex[i]);
            for (j, out) in reach.iter_mut().enumerate() {
                let via = d + self.apsp[i * r + j];
                if via < *out {
                    *out = via;
                }
            }
        }
        Ok(PreparedPoint { point: p, visible, reach })
    }

    pub fn distance_prepared(&self, p: &PreparedPoint, q: &PreparedPoint) -> f64 {
        if self.polygon.segment_inside(p.point, q.point) {
            return p.point.dist(q.point);
        }
        (0..self.reflex.len())
            .filter(|&j| q.visible[j])
            .map(|j| p.reach[j] + self.reflex[j].dist(q.point))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn distance(&self, p: Point, q: Point) -> Result<f64> {
        Ok(self.distance_prepared(&self.prepare(p)?, &self.prepare(q)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Entry {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

/// Shortest path distances from node `source` to every node over links.
pub fn dijkstra(adj: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    dist[source] = 0.0;
    let mut heap = BinaryHeap::from([Entry(0.0, source)]);
    while let Some(Entry(d, v)) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &(w, len) in &adj[v] {
            let nd = d + len;
            if nd < dist[w] {
                dist[w] = nd;
                heap.push(Entry(nd, w));
            }
        }
    }
    dist
}

/// Distances between all pairs of site nodes, indexed like
/// [`SpannerGraph::site_nodes`]. Steiner nodes serve as intermediates;
/// disconnected pairs are infinite.
pub fn spanner_distances(spanner: &SpannerGraph) -> Vec<Vec<f64>> {
    let adj = spanner.adjacency();
    let sites = spanner.site_nodes();
    sites
        .iter()
        .map(|&s| {
            let d = dijkstra(&adj, s);
            sites.iter().map(|&t| d[t]).collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairRatio {
    pub a: usize,
    pub b: usize,
    pub spanner: f64,
    pub metric: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub max_ratio: f64,
    /// Site-node pair attaining the maximum.
    pub argmax: Option<(usize, usize)>,
    pub checked: usize,
    pub bound: f64,
    pub pass: bool,
    /// Every checked pair, kept for instances with at most 512 sites.
    pub table: Option<Vec<PairRatio>>,
}

/// Which site pairs a ratio check visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSelection {
    All,
    /// All pairs up to `cap` sites; beyond, `samples` random pairs.
    Capped { cap: usize, samples: usize, seed: u64 },
}

impl PairSelection {
    fn pairs(self, n: usize) -> Vec<(usize, usize)> {
        let all = || (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        match self {
            PairSelection::All => all(),
            PairSelection::Capped { cap, .. } if n <= cap => all(),
            PairSelection::Capped { samples, seed, .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..samples)
                    .map(|_| {
                        let i = rng.gen_range(0..n);
                        let j = (i + rng.gen_range(1..n)) % n;
                        (i.min(j), i.max(j))
                    })
                    .collect()
            }
        }
    }
}

/// Maximum of spanner over metric distance across site pairs. `metric`
/// receives site-node ids and returns `None` for pairs without a metric
/// distance (sites in different trees of a forest).
pub fn check_ratio<F>(spanner: &SpannerGraph, mut metric: F, bound: f64, pairs: PairSelection) -> Result<RatioReport>
where
    F: FnMut(usize, usize) -> Result<Option<f64>>,
{
    let sites = spanner.site_nodes();
    let adj = spanner.adjacency();
    let selected = pairs.pairs(sites.len());
    let keep_table = sites.len() <= 512;
    let mut table = Vec::new();
    let mut report = RatioReport { max_ratio: 1.0, argmax: None, checked: 0, bound, pass: true, table: None };
    let mut source = usize::MAX;
    let mut dist = Vec::new();
    for (i, j) in selected {
        let (a, b) = (sites[i], sites[j]);
        let Some(d) = metric(a, b)? else { continue };
        if d <= 0.0 {
            return invalid(format!("sites {a} and {b} coincide"));
        }
        if source != a {
            dist = dijkstra(&adj, a);
            source = a;
        }
        let g = dist[b];
        let ratio = g / d;
        report.checked += 1;
        if report.argmax.is_none() || ratio > report.max_ratio {
            report.max_ratio = ratio;
            report.argmax = Some((a, b));
        }
        if keep_table {
            table.push(PairRatio { a, b, spanner: g, metric: d });
        }
    }
    report.pass = report.max_ratio <= bound * (1.0 + RATIO_TOLERANCE);
    report.table = keep_table.then_some(table);
    Ok(report)
}

fn tree_vertex(spanner: &SpannerGraph, node: usize) -> Result<(usize, VertexId)> {
    match spanner.nodes[node].host {
        Host::Vertex { tree, vertex } => Ok((tree, vertex)),
        Host::Point(_) => Err(Error::Unsupported("tree check on a polygon spanner".into())),
    }
}

/// Exhaustive up to 512 sites, 10 000 random pairs beyond.
pub const TREE_PAIRS: PairSelection = PairSelection::Capped { cap: 512, samples: 10_000, seed: 0 };
/// Exhaustive up to 128 sites, 10 000 random pairs beyond.
pub const POLYGON_PAIRS: PairSelection = PairSelection::Capped { cap: 128, samples: 10_000, seed: 0 };

pub fn check_tree_ratio(spanner: &SpannerGraph, tree: &EdgeWeightedTree, bound: f64) -> Result<RatioReport> {
    check_forest_ratio(spanner, std::slice::from_ref(tree), bound)
}

/// Ratio check of a forest spanner; pairs in different trees are skipped.
pub fn check_forest_ratio(spanner: &SpannerGraph, trees: &[EdgeWeightedTree], bound: f64) -> Result<RatioReport> {
    let oracles: Vec<TreeOracle> = trees.iter().map(TreeOracle::new).collect();
    check_ratio(
        spanner,
        |a, b| {
            let (ta, va) = tree_vertex(spanner, a)?;
            let (tb, vb) = tree_vertex(spanner, b)?;
            if ta >= trees.len() || tb >= trees.len() || va >= trees[ta].vertex_count() || vb >= trees[tb].vertex_count() {
                return invalid("spanner node refers to an unknown vertex");
            }
            Ok((ta == tb).then(|| oracles[ta].distance(va, vb)))
        },
        bound,
        TREE_PAIRS,
    )
}

pub fn check_polygon_ratio(spanner: &SpannerGraph, polygon: &SimplePolygon, bound: f64) -> Result<RatioReport> {
    let oracle = VisibilityGraphOracle::new(polygon);
    let mut prepared = vec![None; spanner.nodes.len()];
    for s in spanner.site_nodes() {
        let Host::Point(p) = spanner.nodes[s].host else {
            return Err(Error::Unsupported("polygon check on a tree spanner".into()));
        };
        prepared[s] = Some(oracle.prepare(p)?);
    }
    check_ratio(
        spanner,
        |a, b| Ok(Some(oracle.distance_prepared(prepared[a].as_ref().unwrap(), prepared[b].as_ref().unwrap()))),
        bound,
        POLYGON_PAIRS,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Measure {
    pub size: usize,
    pub complexity: usize,
    pub steiner: usize,
    pub millis: u128,
}

pub fn measure(spanner: &SpannerGraph) -> Measure {
    Measure { size: spanner.size(), complexity: spanner.complexity(), steiner: spanner.steiner_count(), millis: 0 }
}

/// Runs `build` and measures its result together with the elapsed time.
pub fn timed<F>(build: F) -> Result<(SpannerGraph, Measure)>
where
    F: FnOnce() -> Result<SpannerGraph>,
{
    let start = Instant::now();
    let g = build()?;
    let ms = start.elapsed().as_millis();
    let m = Measure { millis: ms, ..measure(&g) };
    Ok((g, m))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub t: usize,
    pub measure: Measure,
    pub max_ratio: f64,
}

pub const CSV_HEADER: &str = "family,n,m,k,t,size,complexity,steiner,max_ratio,ms";

impl ExperimentRecord {
    pub fn csv_row(&self) -> String {
        let Measure { size, complexity, steiner, millis } = self.measure;
        format!(
            "{},{},{},{},{},{size},{complexity},{steiner},{},{millis}",
            self.family, self.n, self.m, self.k, self.t, self.max_ratio
        )
    }
}

pub fn write_csv<W: Write>(mut out: W, records: &[ExperimentRecord]) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    N,
    M,
    K,
    T,
    Size,
    Complexity,
    Steiner,
    MaxRatio,
    Millis,
}

impl Field {
    pub fn get(self, r: &ExperimentRecord) -> f64 {
        match self {
            Field::N => r.n as f64,
            Field::M => r.m as f64,
            Field::K => r.k as f64,
            Field::T => r.t as f64,
            Field::Size => r.measure.size as f64,
            Field::Complexity => r.measure.complexity as f64,
            Field::Steiner => r.measure.steiner as f64,
            Field::MaxRatio => r.max_ratio,
            Field::Millis => r.measure.millis as f64,
        }
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_scaling(records: &[ExperimentRecord], x: Field, y: Field) -> Result<f64> {
    if records.len() < 4 {
        return invalid(format!("fit needs at least 4 records, got {}", records.len()));
    }
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (x.get(r), y.get(r))).collect();
    if pts.iter().any(|&(a, b)| !(a > 0.0 && b > 0.0)) {
        return invalid("fit needs positive values");
    }
    fit_power_law(&pts)
}

/// Slope of the least-squares line through `(ln x, ln y)`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<f64> {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return invalid("fit needs at least two distinct x values");
    }
    Ok(sxy / sxx)
}

/// Structural properties of one Steiner construction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StructureReport {
    pub violations: Vec<String>,
}

impl StructureReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the coloring and the carved parts of `build` against `tree`:
/// at most two colors per edge, parts cover the tree, parts meet only at
/// Steiner points, at most five Steiner points per part and at most
/// `4⌈n/k⌉` sites per part.
pub fn check_structure(tree: &EdgeWeightedTree, build: &SteinerBuild, k: usize) -> StructureReport {
    let mut v = Vec::new();
    let (Some(coloring), Some(carved)) = (&build.coloring, &build.carved) else {
        return StructureReport { violations: v };
    };
    for (e, colors) in coloring.edge_colors.iter().enumerate() {
        if colors.len() > 2 {
            v.push(format!("edge {e} has {} colors", colors.len()));
        }
    }
    let steiner: HashSet<VertexId> = build
        .steiner
        .iter()
        .filter_map(|s| match s.host {
            crate::spanner::SteinerHost::Vertex(x) => Some(x),
            _ => None,
        })
        .collect();
    if steiner.len() > k {
        v.push(format!("{} Steiner vertices for k = {k}", steiner.len()));
    }
    let mut edge_part = vec![usize::MAX; tree.edge_count()];
    let mut vertex_parts = vec![Vec::new(); tree.vertex_count()];
    let cap = 4 * tree.site_count().div_ceil(k.max(1));
    for (p, part) in carved.parts.iter().enumerate() {
        for &e in &part.host_edges {
            if edge_part[e] != usize::MAX {
                v.push(format!("edge {e} lies in parts {} and {p}", edge_part[e]));
            }
            edge_part[e] = p;
        }
        let mut seen = HashSet::new();
        for x in part.vertices() {
            if seen.insert(x) {
                vertex_parts[x].push(p);
            }
        }
        let anchors: HashSet<VertexId> = seen.iter().copied().filter(|x| steiner.contains(x)).collect();
        if anchors.len() > 5 {
            v.push(format!("part {p} holds {} Steiner vertices", anchors.len()));
        }
        let sites = seen.iter().filter(|&&x| tree.is_site(x)).count();
        if sites > cap {
            v.push(format!("part {p} holds {sites} sites, cap {cap}"));
        }
    }
    for (e, &p) in edge_part.iter().enumerate() {
        if p == usize::MAX {
            v.push(format!("edge {e} is in no part"));
        }
    }
    for (x, parts) in vertex_parts.iter().enumerate() {
        if parts.is_empty() && tree.vertex_count() > 1 {
            v.push(format!("vertex {x} is in no part"));
        }
        if parts.len() > 1 && !steiner.contains(&x) {
            v.push(format!("vertex {x} is shared by parts {parts:?} without a Steiner point"));
        }
    }
    StructureReport { violations: v }
}
