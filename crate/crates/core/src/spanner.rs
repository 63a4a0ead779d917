//! Spanner graphs: sites, Steiner points and realized links.

use std::collections::HashMap;

use crate::error::{invalid, Result};
use crate::geometry::Point;
use crate::tree::{EdgeId, EdgeWeightedTree, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Tree,
    Forest,
    Polygon,
}

impl Metric {
    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Tree => "tree",
            Metric::Forest => "forest",
            Metric::Polygon => "polygon",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Site,
    Steiner,
}

/// Where a spanner node lives in the underlying metric space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Host {
    Vertex { tree: usize, vertex: VertexId },
    Point(Point),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum HostKey {
    Vertex(usize, VertexId),
    Point(u64, u64),
}

impl Host {
    fn key(&self) -> HostKey {
        match *self {
            Host::Vertex { tree, vertex } => HostKey::Vertex(tree, vertex),
            Host::Point(p) => HostKey::Point((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
    pub host: Host,
}

/// A Steiner point of a tree metric: either at a vertex or inside an edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SteinerHost {
    Vertex(VertexId),
    Edge { edge: EdgeId, fraction: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinerPoint {
    pub id: usize,
    pub host: SteinerHost,
    pub tree: usize,
}

/// The realized path of a link, oriented from `a` to `b`. An empty point
/// list stands for a polygon link whose path was not recorded.
#[derive(Debug, Clone, PartialEq)]
pub enum LinkPath {
    Vertices(Vec<VertexId>),
    Points(Vec<Point>),
}

impl LinkPath {
    fn reversed(&self) -> LinkPath {
        match self {
            LinkPath::Vertices(v) => LinkPath::Vertices(v.iter().rev().copied().collect()),
            LinkPath::Points(p) => LinkPath::Points(p.iter().rev().copied().collect()),
        }
    }
}

/// Which construction produced a link: the index of the tree it was built
/// on and, for Steiner constructions, the carved part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkOrigin {
    pub tree: usize,
    pub part: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub a: usize,
    pub b: usize,
    pub length: f64,
    pub complexity: usize,
    pub path: LinkPath,
    pub origins: Vec<LinkOrigin>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpannerGraph {
    pub metric: Metric,
    pub nodes: Vec<Node>,
    pub links: Vec<Link>,
}

impl SpannerGraph {
    pub fn new(metric: Metric) -> Self {
        SpannerGraph { metric, nodes: Vec::new(), links: Vec::new() }
    }

    pub fn size(&self) -> usize {
        self.links.len()
    }

    pub fn complexity(&self) -> usize {
        self.links.iter().map(|l| l.complexity).sum()
    }

    pub fn steiner_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Steiner).count()
    }

    pub fn site_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].kind == NodeKind::Site).collect()
    }

    pub fn find_node(&self, host: Host) -> Option<usize> {
        let key = host.key();
        self.nodes.iter().position(|n| n.host.key() == key)
    }

    /// Adjacency lists of `(neighbor, length)` per node.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for l in &self.links {
            adj[l.a].push((l.b, l.length));
            adj[l.b].push((l.a, l.length));
        }
        adj
    }

    /// Edge-interior Steiner points of a tree spanner, described against the
    /// host tree before subdivision.
    pub fn steiner_points(&self, trees: &[EdgeWeightedTree]) -> Vec<SteinerPoint> {
        let mut out = Vec::new();
        for (id, n) in self.nodes.iter().enumerate() {
            if n.kind != NodeKind::Steiner {
                continue;
            }
            if let Host::Vertex { tree, vertex } = n.host {
                let Some(t) = trees.get(tree) else { continue };
                let host = match t.subdivided_edge(vertex) {
                    None => SteinerHost::Vertex(vertex),
                    Some(edge) => {
                        let (lo, hi) = original_span(t, vertex);
                        let above = t.distance(vertex, lo);
                        SteinerHost::Edge { edge, fraction: above / (above + t.distance(vertex, hi)) }
                    }
                };
                out.push(SteinerPoint { id, host, tree });
            }
        }
        out
    }

    /// Checks the structural link invariants. Tree and forest spanners are
    /// checked against `trees`; polygon spanners need no context.
    pub fn validate(&self, trees: &[EdgeWeightedTree]) -> Result<()> {
        let mut seen = HashMap::new();
        let mut hosts = HashMap::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if let Some(j) = hosts.insert(n.host.key(), i) {
                return invalid(format!("nodes {j} and {i} share a host"));
            }
            match (self.metric, n.host) {
                (Metric::Polygon, Host::Point(p)) if p.x.is_finite() && p.y.is_finite() => {}
                (Metric::Tree | Metric::Forest, Host::Vertex { tree, vertex }) => {
                    if tree >= trees.len() || !trees[tree].contains(vertex) {
                        return invalid(format!("node {i} has an unknown host"));
                    }
                    if self.metric == Metric::Tree && tree != 0 {
                        return invalid(format!("node {i} is outside the single tree"));
                    }
                    if n.kind == NodeKind::Site && !trees[tree].is_site(vertex) {
                        return invalid(format!("node {i} is marked as a site but its vertex is not"));
                    }
                }
                _ => return invalid(format!("node {i} has a host of the wrong kind")),
            }
        }
        for (i, l) in self.links.iter().enumerate() {
            if l.a >= self.nodes.len() || l.b >= self.nodes.len() {
                return invalid(format!("link {i} references an unknown node"));
            }
            if l.a == l.b {
                return invalid(format!("link {i} is a self link"));
            }
            let key = (l.a.min(l.b), l.a.max(l.b));
            if let Some(j) = seen.insert(key, i) {
                return invalid(format!("links {j} and {i} are duplicates"));
            }
            match (&l.path, self.nodes[l.a].host, self.nodes[l.b].host) {
                (LinkPath::Vertices(path), Host::Vertex { tree, vertex: va }, Host::Vertex { tree: tb, vertex: vb }) => {
                    if tree != tb {
                        return invalid(format!("link {i} joins two trees"));
                    }
                    let t = &trees[tree];
                    if *path != t.path(va, vb) {
                        return invalid(format!("link {i} does not follow the tree path"));
                    }
                    if l.length != t.distance(va, vb) {
                        return invalid(format!("link {i} has length {} but its path has {}", l.length, t.distance(va, vb)));
                    }
                    let cx = tree_path_complexity(t, path);
                    if l.complexity != cx {
                        return invalid(format!("link {i} has complexity {} but its path has {cx}", l.complexity));
                    }
                }
                (LinkPath::Points(path), Host::Point(_), Host::Point(_)) if path.is_empty() => {
                    if !(l.length.is_finite() && l.length > 0.0) || l.complexity == 0 {
                        return invalid(format!("link {i} has length {} and complexity {}", l.length, l.complexity));
                    }
                }
                (LinkPath::Points(path), Host::Point(pa), Host::Point(pb)) => {
                    if path.len() < 2 || path[0] != pa || *path.last().unwrap() != pb {
                        return invalid(format!("link {i} path does not connect its endpoints"));
                    }
                    if l.length != polyline_length(path) {
                        return invalid(format!("link {i} length disagrees with its polyline"));
                    }
                    if l.complexity != path.len() - 1 {
                        return invalid(format!("link {i} complexity disagrees with its polyline"));
                    }
                }
                _ => return invalid(format!("link {i} path does not match the metric")),
            }
        }
        Ok(())
    }
}

/// Sum of segment lengths, accumulated in path order.
pub fn polyline_length(path: &[Point]) -> f64 {
    path.windows(2).map(|w| w[0].dist(w[1])).sum()
}

/// Number of edges of the unsubdivided host tree that a tree path runs
/// through. Zero-weight synthetic edges do not count.
pub fn tree_path_complexity(tree: &EdgeWeightedTree, path: &[VertexId]) -> usize {
    let mut count = 0;
    let mut last = None;
    for e in tree.path_edges(path) {
        if tree.edge(e).synthetic {
            last = None;
            continue;
        }
        let origin = tree.edge_origin(e);
        if last != Some(origin) {
            count += 1;
        }
        last = Some(origin);
    }
    count
}

/// The two original endpoints (upper, lower) of the edge a subdivision
/// vertex lies on.
pub(crate) fn original_span(tree: &EdgeWeightedTree, v: VertexId) -> (VertexId, VertexId) {
    let mut up = v;
    while tree.subdivided_edge(up).is_some() {
        up = tree.parent(up).unwrap();
    }
    let mut down = v;
    while tree.subdivided_edge(down).is_some() {
        down = tree.children(down)[0];
    }
    (up, down)
}

/// Accumulates nodes and links while keeping hosts and undirected links
/// unique. A site always wins over a Steiner point on the same host.
#[derive(Debug)]
pub(crate) struct GraphBuilder {
    graph: SpannerGraph,
    hosts: HashMap<HostKey, usize>,
    links: HashMap<(usize, usize), usize>,
}

impl GraphBuilder {
    pub fn new(metric: Metric) -> Self {
        GraphBuilder { graph: SpannerGraph::new(metric), hosts: HashMap::new(), links: HashMap::new() }
    }

    pub fn node(&mut self, kind: NodeKind, host: Host) -> usize {
        let key = host.key();
        if let Some(&i) = self.hosts.get(&key) {
            if kind == NodeKind::Site {
                self.graph.nodes[i].kind = NodeKind::Site;
            }
            return i;
        }
        let i = self.graph.nodes.len();
        self.graph.nodes.push(Node { kind, host });
        self.hosts.insert(key, i);
        i
    }

    /// Adds a link, keeping the shorter one (merging origins) when the pair is
    /// already linked. Self links are ignored.
    pub fn link(&mut self, a: usize, b: usize, length: f64, complexity: usize, path: LinkPath, origins: &[LinkOrigin]) {
        if a == b {
            return;
        }
        let (lo, hi, path) = if a < b { (a, b, path) } else { (b, a, path.reversed()) };
        // polyline sums depend on direction
        let length = match &path {
            LinkPath::Points(p) if a > b && !p.is_empty() => polyline_length(p),
            _ => length,
        };
        match self.links.get(&(lo, hi)) {
            Some(&i) => {
                let l = &mut self.graph.links[i];
                for o in origins {
                    if !l.origins.contains(o) {
                        l.origins.push(*o);
                    }
                }
                l.origins.sort();
                if length < l.length {
                    l.length = length;
                    l.complexity = complexity;
                    l.path = path;
                }
            }
            None => {
                let mut origins = origins.to_vec();
                origins.sort();
                origins.dedup();
                self.links.insert((lo, hi), self.graph.links.len());
                self.graph.links.push(Link { a: lo, b: hi, length, complexity, path, origins });
            }
        }
    }

    /// Links two tree vertices along their tree path.
    pub fn tree_link(&mut self, tree_index: usize, tree: &EdgeWeightedTree, a: usize, b: usize, origin: LinkOrigin) {
        self.tree_link_with(tree_index, tree, a, b, &[origin]);
    }

    pub fn tree_link_with(&mut self, tree_index: usize, tree: &EdgeWeightedTree, a: usize, b: usize, origins: &[LinkOrigin]) {
        if a == b {
            return;
        }
        let (Host::Vertex { vertex: va, .. }, Host::Vertex { vertex: vb, .. }) =
            (self.graph.nodes[a].host, self.graph.nodes[b].host)
        else {
            unreachable!("tree link between point hosts");
        };
        debug_assert!(matches!(self.graph.nodes[a].host, Host::Vertex { tree, .. } if tree == tree_index));
        let path = tree.path(va, vb);
        let length = tree.distance(va, vb);
        let cx = tree_path_complexity(tree, &path);
        self.link(a, b, length, cx, LinkPath::Vertices(path), origins);
    }

    pub fn graph(&self) -> &SpannerGraph {
        &self.graph
    }

    pub fn finish(self) -> SpannerGraph {
        self.graph
    }
}
