//! Geodesic spanners for point sites in a simple polygon.
//!
//! The polygon is cut recursively by vertical chords until every cell holds
//! at most one site. Each cut contributes the pruned shortest path tree of
//! its cell towards the chord. Trees from the first `⌊log₂ k⌋ + 1` levels
//! form a forest that receives the whole Steiner budget; deeper trees get
//! plain spanners. Tree links are finally realized as geodesics in the
//! original polygon.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{invalid, Error, Result};
use crate::forest_spanner::{build_forest_detailed, ForestBuild};
use crate::geometry::{separator_with_split, build_spt, ChordSpt, Location, PathFinder, Point, SimplePolygon, SplitSide, SptNode};
use crate::spanner::{GraphBuilder, Host, LinkOrigin, LinkPath, Metric, NodeKind, SpannerGraph};
use crate::tree::{Forest, VertexId};
use crate::tree_spanner::plain_spanner_links;

/// Pruned shortest path tree of one recursion cell.
#[derive(Debug, Clone)]
pub struct CellTree {
    pub level: usize,
    pub cell: usize,
    /// Pruned tree; every leaf is a site.
    pub spt: ChordSpt,
    /// Tree before pruning and, per pruned vertex, its vertex there.
    pub full: ChordSpt,
    pub kept: Vec<VertexId>,
    /// Global site index of every site of the cell.
    pub sites: Vec<usize>,
    /// Polygon vertex index of every vertex of the cell polygon, `None` for
    /// points created by earlier cuts.
    pub vertex_origin: Vec<Option<usize>>,
}

impl CellTree {
    /// Index of the input polygon vertex that a tree vertex stands for.
    pub fn polygon_vertex(&self, spt: &ChordSpt, v: VertexId) -> Option<usize> {
        match spt.nodes[v] {
            SptNode::Vertex(i) => self.vertex_origin[i],
            _ => None,
        }
    }

    pub fn global_site(&self, spt: &ChordSpt, v: VertexId) -> Option<usize> {
        match spt.nodes[v] {
            SptNode::Site(j) => Some(self.sites[j]),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RecursionForest {
    pub trees: Vec<CellTree>,
    pub levels: usize,
}

fn check_sites(polygon: &SimplePolygon, sites: &[Point]) -> Result<()> {
    let mut xs = HashSet::new();
    for (i, p) in sites.iter().enumerate() {
        if polygon.locate(*p) != Location::Inside {
            return invalid(format!("site {i} is not strictly inside the polygon"));
        }
        if !xs.insert((p.x + 0.0).to_bits()) {
            return Err(Error::Degenerate(format!("site {i} shares its x coordinate with another site")));
        }
    }
    Ok(())
}

struct Cell {
    polygon: SimplePolygon,
    origin: Vec<Option<usize>>,
    sites: Vec<usize>,
    level: usize,
}

pub fn collect_recursion_forest(polygon: &SimplePolygon, sites: &[Point]) -> Result<RecursionForest> {
    check_sites(polygon, sites)?;
    let mut trees = Vec::new();
    let mut queue = VecDeque::from([Cell {
        polygon: polygon.clone(),
        origin: (0..polygon.len()).map(Some).collect(),
        sites: (0..sites.len()).collect(),
        level: 0,
    }]);
    let mut cells_per_level: Vec<usize> = Vec::new();
    while let Some(cell) = queue.pop_front() {
        if cell.sites.len() < 2 {
            continue;
        }
        let pts: Vec<Point> = cell.sites.iter().map(|&s| sites[s]).collect();
        let (chord, split) = separator_with_split(&cell.polygon, &pts)?;
        let full = build_spt(&cell.polygon, &chord, &pts)?;
        let (spt, kept) = full.prune()?;
        if cells_per_level.len() <= cell.level {
            cells_per_level.resize(cell.level + 1, 0);
        }
        let index = cells_per_level[cell.level];
        cells_per_level[cell.level] += 1;
        for side in [SplitSide::Left, SplitSide::Right] {
            let (piece, origin) = split.piece(side);
            let sub: Vec<usize> = cell.sites.iter().copied().filter(|&s| split.side(sites[s]) == side).collect();
            queue.push_back(Cell {
                polygon: piece.clone(),
                origin: origin.iter().map(|o| o.and_then(|i| cell.origin[i])).collect(),
                sites: sub,
                level: cell.level + 1,
            });
        }
        trees.push(CellTree {
            level: cell.level,
            cell: index,
            spt,
            full,
            kept,
            sites: cell.sites,
            vertex_origin: cell.origin,
        });
    }
    Ok(RecursionForest { levels: cells_per_level.len(), trees })
}

/// Splits tree indices into large (level at most `⌊log₂ k⌋`) and small.
pub fn classify_trees(forest: &RecursionForest, k: usize) -> (Vec<usize>, Vec<usize>) {
    let threshold = if k == 0 { None } else { Some(k.ilog2() as usize) };
    (0..forest.trees.len()).partition(|&i| threshold.is_some_and(|th| forest.trees[i].level <= th))
}

#[derive(Debug, Clone)]
pub struct PolygonBuild {
    pub spanner: SpannerGraph,
    pub forest: RecursionForest,
    pub large: Vec<usize>,
    pub small: Vec<usize>,
    /// Construction on the large trees, indexed like `large`.
    pub large_build: ForestBuild,
}

pub fn build_polygon_detailed(polygon: &SimplePolygon, sites: &[Point], t: usize, k: usize) -> Result<PolygonBuild> {
    if t < 1 {
        return invalid("t must be at least 1");
    }
    if k > sites.len() {
        return invalid(format!("k = {k} exceeds the number of sites {}", sites.len()));
    }
    let forest = collect_recursion_forest(polygon, sites)?;
    let (large, small) = classify_trees(&forest, k);
    let large_forest = Forest::new(large.iter().map(|&i| forest.trees[i].spt.tree.clone()).collect());
    let large_build = build_forest_detailed(&large_forest, t, k)?;
    let finder = PathFinder::new(polygon)?;

    let mut g = GraphBuilder::new(Metric::Polygon);
    for &p in sites {
        g.node(NodeKind::Site, Host::Point(p));
    }
    let node_of = |g: &mut GraphBuilder, tree: &CellTree, v: VertexId| -> usize {
        let kind = if tree.global_site(&tree.spt, v).is_some() { NodeKind::Site } else { NodeKind::Steiner };
        g.node(kind, Host::Point(tree.spt.positions[v]))
    };
    let lift = |g: &mut GraphBuilder, a: usize, b: usize, origin: LinkOrigin| -> Result<()> {
        if a == b {
            return Ok(());
        }
        let (Host::Point(pa), Host::Point(pb)) = (g.graph().nodes[a].host, g.graph().nodes[b].host) else {
            unreachable!("polygon node without a point host");
        };
        let path = finder.shortest_path(pa, pb)?;
        g.link(a, b, path.length, path.complexity, LinkPath::Points(path.points), &[origin]);
        Ok(())
    };
    for l in &large_build.spanner.links {
        let Host::Vertex { tree: fi, vertex: va } = large_build.spanner.nodes[l.a].host else { unreachable!() };
        let Host::Vertex { vertex: vb, .. } = large_build.spanner.nodes[l.b].host else { unreachable!() };
        let cell = &forest.trees[large[fi]];
        let a = node_of(&mut g, cell, va);
        let b = node_of(&mut g, cell, vb);
        for o in &l.origins {
            lift(&mut g, a, b, LinkOrigin { tree: large[o.tree], part: o.part })?;
        }
    }
    for &i in &small {
        let cell = &forest.trees[i];
        for l in plain_spanner_links(&cell.spt.tree, t)? {
            let a = node_of(&mut g, cell, l.a);
            let b = node_of(&mut g, cell, l.b);
            lift(&mut g, a, b, LinkOrigin { tree: i, part: None })?;
        }
    }
    Ok(PolygonBuild { spanner: g.finish(), forest, large, small, large_build })
}

/// Geodesic spanner on `sites` using at most `k` Steiner points.
pub fn build_polygon_spanner(polygon: &SimplePolygon, sites: &[Point], t: usize, k: usize) -> Result<SpannerGraph> {
    Ok(build_polygon_detailed(polygon, sites, t, k)?.spanner)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub link: usize,
    pub origin: LinkOrigin,
    pub vertex: Point,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ContainmentReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl ContainmentReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Polygon vertices allowed for links of each part of one cell tree:
/// vertices of the part plus the pruned vertices hanging into it.
fn allowed_vertices(cell: &CellTree, build: Option<&crate::steiner_tree::SteinerBuild>) -> Vec<HashSet<usize>> {
    let pruned = &cell.spt.tree;
    let full = &cell.full.tree;
    let Some(carved) = build.and_then(|b| b.carved.as_ref()) else {
        let all = (0..full.vertex_count()).filter_map(|v| cell.polygon_vertex(&cell.full, v)).collect();
        return vec![all];
    };
    let mut sets: Vec<HashSet<usize>> = carved
        .parts
        .iter()
        .map(|p| p.vertices().filter_map(|v| cell.polygon_vertex(&cell.spt, v)).collect())
        .collect();
    let mut local = vec![usize::MAX; full.vertex_count()];
    for (j, &v) in cell.kept.iter().enumerate() {
        local[v] = j;
    }
    let mut lowest_at: HashMap<VertexId, (usize, usize)> = HashMap::new();
    for (pi, p) in carved.parts.iter().enumerate() {
        let e = lowest_at.entry(p.anchor).or_insert((p.color, pi));
        if p.color < e.0 {
            *e = (p.color, pi);
        }
    }
    for &u in &cell.kept {
        let j = local[u];
        let mut cur = match lowest_at.get(&j) {
            Some(&(_, pi)) => pi,
            None => carved.edge_owner[pruned.parent_edge(j).unwrap()],
        };
        for &c in full.children(u) {
            if local[c] != usize::MAX {
                cur = carved.edge_owner[pruned.parent_edge(local[c]).unwrap()];
                continue;
            }
            let mut stack = vec![c];
            while let Some(w) = stack.pop() {
                if let Some(i) = cell.polygon_vertex(&cell.full, w) {
                    sets[cur].insert(i);
                }
                stack.extend(full.children(w).iter().copied());
            }
        }
    }
    sets
}

/// Checks that every realized link bends only at polygon vertices of the
/// part that produced it.
pub fn check_containment(build: &PolygonBuild, polygon: &SimplePolygon) -> Result<ContainmentReport> {
    let index: HashMap<(u64, u64), usize> =
        polygon.vertices().iter().enumerate().map(|(i, p)| ((p.x.to_bits(), p.y.to_bits()), i)).collect();
    let mut allowed: HashMap<usize, Vec<HashSet<usize>>> = HashMap::new();
    for (li, &ti) in build.large.iter().enumerate() {
        let b = build.large_build.builds.get(li).and_then(|b| b.as_ref());
        allowed.insert(ti, allowed_vertices(&build.forest.trees[ti], b));
    }
    for &ti in &build.small {
        allowed.insert(ti, allowed_vertices(&build.forest.trees[ti], None));
    }
    let mut report = ContainmentReport::default();
    for (li, l) in build.spanner.links.iter().enumerate() {
        let LinkPath::Points(path) = &l.path else {
            return Err(Error::Unsupported("containment check needs polygon links".into()));
        };
        if l.origins.is_empty() {
            return Err(Error::Unsupported(format!("link {li} has no provenance")));
        }
        for o in &l.origins {
            let sets = allowed.get(&o.tree).ok_or_else(|| Error::Unsupported(format!("link {li} names unknown tree")))?;
            let set = &sets[o.part.unwrap_or(0).min(sets.len() - 1)];
            report.checked += 1;
            for p in &path[1..path.len() - 1] {
                let inside = index.get(&(p.x.to_bits(), p.y.to_bits())).is_some_and(|i| set.contains(i));
                if !inside {
                    report.violations.push(Violation { link: li, origin: *o, vertex: *p });
                }
            }
        }
    }
    Ok(report)
}
