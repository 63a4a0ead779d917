//! Tree spanners that use at most `k` Steiner points.
//!
//! Sites are cut into `k` contiguous in-order ranges. Each range colors its
//! minimal subtree, remaining edges inherit a color bottom-up, and a Steiner
//! point is put at the top of every color class. The tree is then carved
//! into parts bounded by Steiner points; each part gets a plain spanner in
//! which its Steiner points act as extra sites.

use std::collections::BTreeMap;

use crate::error::{invalid, Error, Result};
use crate::spanner::{
    original_span, GraphBuilder, Host, LinkOrigin, Metric, NodeKind, SpannerGraph, SteinerHost, SteinerPoint,
};
use crate::tree::{EdgeId, EdgeWeightedTree, TreeBuilder, VertexId};
use crate::tree_spanner::{build_plain_tree_spanner, plain_spanner_links};

/// Contiguous ranges of the in-order site sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SitePartition {
    pub ranges: Vec<Vec<VertexId>>,
}

impl SitePartition {
    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }
}

/// Ranges of `⌈n/k⌉` sites each over a given sequence; the last range holds
/// the remainder.
pub(crate) fn chunk_ranges(sites: &[VertexId], k: usize) -> Vec<Vec<VertexId>> {
    let size = sites.len().div_ceil(k.max(1)).max(1);
    sites.chunks(size).map(|c| c.to_vec()).collect()
}

pub fn partition_sites(tree: &EdgeWeightedTree, k: usize) -> Result<SitePartition> {
    let n = tree.site_count();
    if k < 1 || k > n {
        return invalid(format!("k = {k} outside [1, {n}]"));
    }
    Ok(SitePartition { ranges: chunk_ranges(&tree.in_order_sites(), k) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Subtree,
    BottomUp,
}

/// Colors per edge and per vertex, kept sorted. Colors are range indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Coloring {
    pub edge_colors: Vec<Vec<usize>>,
    pub vertex_colors: Vec<Vec<usize>>,
    pub edge_phase: Vec<Option<Phase>>,
    pub colors: usize,
}

fn add_color(set: &mut Vec<usize>, c: usize) -> bool {
    match set.binary_search(&c) {
        Ok(_) => false,
        Err(i) => {
            set.insert(i, c);
            true
        }
    }
}

pub fn color_tree(tree: &EdgeWeightedTree, partition: &SitePartition) -> Coloring {
    let m = tree.vertex_count();
    let mut c = Coloring {
        edge_colors: vec![Vec::new(); tree.edge_count()],
        vertex_colors: vec![Vec::new(); m],
        edge_phase: vec![None; tree.edge_count()],
        colors: partition.len(),
    };
    for (i, range) in partition.ranges.iter().enumerate() {
        let (Some(&first), Some(&last)) = (range.first(), range.last()) else { continue };
        let top = tree.lca(first, last);
        add_color(&mut c.vertex_colors[top], i);
        for &s in range {
            let mut v = s;
            while v != top && add_color(&mut c.vertex_colors[v], i) {
                let e = tree.parent_edge(v).unwrap();
                add_color(&mut c.edge_colors[e], i);
                c.edge_phase[e] = Some(Phase::Subtree);
                v = tree.parent(v).unwrap();
            }
        }
    }
    let mut order: Vec<VertexId> = (0..m).filter(|&v| v != tree.root()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(tree.depth(v)), v));
    for v in order {
        let e = tree.parent_edge(v).unwrap();
        if !c.edge_colors[e].is_empty() {
            continue;
        }
        let Some(&low) = c.vertex_colors[v].first() else { continue };
        c.edge_colors[e].push(low);
        c.edge_phase[e] = Some(Phase::BottomUp);
        add_color(&mut c.vertex_colors[tree.parent(v).unwrap()], low);
    }
    c
}

/// One Steiner point per color, at the highest vertex carrying the color.
/// The point's id is its color.
pub fn place_steiner_points(tree: &EdgeWeightedTree, coloring: &Coloring) -> Vec<SteinerPoint> {
    let mut top: Vec<Option<VertexId>> = vec![None; coloring.colors];
    for v in 0..tree.vertex_count() {
        for &i in &coloring.vertex_colors[v] {
            if top[i].is_none_or(|u| (tree.depth(v), v) < (tree.depth(u), u)) {
                top[i] = Some(v);
            }
        }
    }
    top.into_iter()
        .enumerate()
        .filter_map(|(id, v)| v.map(|v| SteinerPoint { id, host: SteinerHost::Vertex(v), tree: 0 }))
        .collect()
}

/// A carved part. `tree` is a standalone tree whose vertex `j` corresponds
/// to host vertex `host_vertex[j]`; vertex 1 is the zero-weight leaf hung at
/// the anchor (local vertex 0).
#[derive(Debug, Clone, PartialEq)]
pub struct CarvedPart {
    pub color: usize,
    pub anchor: VertexId,
    pub tree: EdgeWeightedTree,
    pub host_vertex: Vec<VertexId>,
    pub host_edges: Vec<EdgeId>,
    /// Distinct host vertices in this part that carry Steiner points.
    pub anchors: Vec<VertexId>,
}

impl CarvedPart {
    /// Host vertices of the part, in local order without the synthetic leaf.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.host_vertex.iter().enumerate().filter(|&(j, _)| j != 1).map(|(_, &v)| v)
    }

    /// Host sites inside the part.
    pub fn host_sites(&self, host: &EdgeWeightedTree) -> Vec<VertexId> {
        self.vertices().filter(|&v| host.is_site(v)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CarvedSubtrees {
    pub parts: Vec<CarvedPart>,
    /// Index into `parts` for every host edge.
    pub edge_owner: Vec<usize>,
}

pub fn carve_subtrees(tree: &EdgeWeightedTree, coloring: &Coloring, steiner: &[SteinerPoint]) -> Result<CarvedSubtrees> {
    let m = tree.vertex_count();
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut anchor_of = Vec::with_capacity(steiner.len());
    for (idx, s) in steiner.iter().enumerate() {
        let SteinerHost::Vertex(v) = s.host else {
            return Err(Error::Unsupported("carving needs vertex-hosted Steiner points".into()));
        };
        at[v].push(idx);
        anchor_of.push(v);
    }
    for list in &mut at {
        list.sort_by_key(|&idx| steiner[idx].id);
    }
    if at[tree.root()].is_empty() {
        return invalid("no Steiner point at the root");
    }
    let mut owner = vec![usize::MAX; tree.edge_count()];
    for u in tree.preorder() {
        for &v in tree.children(u) {
            let e = tree.parent_edge(v).unwrap();
            let here = &at[u];
            owner[e] = match here.len() {
                0 => owner[tree.parent_edge(u).unwrap()],
                1 => here[0],
                _ => {
                    let Some(&c) = coloring.edge_colors[e].last() else {
                        return invalid(format!("edge {e} is uncolored"));
                    };
                    let ids: Vec<usize> = here.iter().map(|&idx| steiner[idx].id).collect();
                    let pick = match ids.binary_search(&c) {
                        Ok(j) => j,
                        Err(0) => 0,
                        Err(j) => j - 1,
                    };
                    here[pick]
                }
            };
        }
    }
    let mut parts: Vec<CarvedPart> = Vec::with_capacity(steiner.len());
    let mut edges_of: Vec<Vec<EdgeId>> = vec![Vec::new(); steiner.len()];
    for u in tree.preorder() {
        for &v in tree.children(u) {
            let e = tree.parent_edge(v).unwrap();
            edges_of[owner[e]].push(e);
        }
    }
    for (idx, s) in steiner.iter().enumerate() {
        let root = anchor_of[idx];
        let mut host_vertex = vec![root, root];
        let mut local = BTreeMap::new();
        local.insert(root, 0usize);
        let mut b_edges = Vec::new();
        for &e in &edges_of[idx] {
            let edge = tree.edge(e);
            let j = host_vertex.len();
            host_vertex.push(edge.child);
            local.insert(edge.child, j);
            b_edges.push((local[&edge.parent], j, edge.weight, edge.synthetic));
        }
        let mut b = TreeBuilder::new(host_vertex.len(), 0);
        b.synthetic_edge(0, 1);
        for &(p, c, w, syn) in &b_edges {
            if syn {
                b.synthetic_edge(p, c);
            } else {
                b.edge(p, c, w);
            }
        }
        b.site(1);
        let mut anchors = vec![root];
        for (j, &v) in host_vertex.iter().enumerate().skip(2) {
            if tree.is_site(v) {
                b.site(j);
            } else if !at[v].is_empty() {
                b.site(j);
                anchors.push(v);
            }
        }
        let part_tree = b.build()?;
        parts.push(CarvedPart {
            color: s.id,
            anchor: root,
            tree: part_tree,
            host_vertex,
            host_edges: edges_of[idx].clone(),
            anchors,
        });
    }
    Ok(CarvedSubtrees { parts, edge_owner: owner })
}

/// Everything the Steiner construction produced for one tree.
#[derive(Debug, Clone)]
pub struct SteinerBuild {
    pub spanner: SpannerGraph,
    pub partition: Option<SitePartition>,
    pub coloring: Option<Coloring>,
    pub steiner: Vec<SteinerPoint>,
    pub carved: Option<CarvedSubtrees>,
}

/// Full construction with all intermediate structures. With `k = 0` or at
/// most two sites this is the plain spanner.
pub fn build_steiner_tree_detailed(tree: &EdgeWeightedTree, t: usize, k: usize) -> Result<SteinerBuild> {
    if t < 1 {
        return invalid("t must be at least 1");
    }
    let n = tree.site_count();
    if k > n {
        return invalid(format!("k = {k} exceeds the number of sites {n}"));
    }
    if k == 0 || n <= 2 {
        return Ok(SteinerBuild {
            spanner: build_plain_tree_spanner(tree, t)?,
            partition: None,
            coloring: None,
            steiner: Vec::new(),
            carved: None,
        });
    }
    let partition = partition_sites(tree, k)?;
    let coloring = color_tree(tree, &partition);
    let steiner = place_steiner_points(tree, &coloring);
    let carved = carve_subtrees(tree, &coloring, &steiner)?;

    let mut g = GraphBuilder::new(Metric::Tree);
    for s in tree.sites() {
        g.node(NodeKind::Site, Host::Vertex { tree: 0, vertex: s });
    }
    for (pi, part) in carved.parts.iter().enumerate() {
        let origin = LinkOrigin { tree: 0, part: Some(pi) };
        for l in plain_spanner_links(&part.tree, t)? {
            let (a, b) = (part.host_vertex[l.a], part.host_vertex[l.b]);
            if a == b {
                continue;
            }
            let kind = |v: VertexId| if tree.is_site(v) { NodeKind::Site } else { NodeKind::Steiner };
            let na = g.node(kind(a), Host::Vertex { tree: 0, vertex: a });
            let nb = g.node(kind(b), Host::Vertex { tree: 0, vertex: b });
            g.tree_link(0, tree, na, nb, origin);
        }
    }
    Ok(SteinerBuild {
        spanner: g.finish(),
        partition: Some(partition),
        coloring: Some(coloring),
        steiner,
        carved: Some(carved),
    })
}

/// 2t-spanner on the sites of `tree` with at most `k` Steiner points.
pub fn build_steiner_tree_spanner(tree: &EdgeWeightedTree, t: usize, k: usize) -> Result<SpannerGraph> {
    Ok(build_steiner_tree_detailed(tree, t, k)?.spanner)
}

/// Drops Steiner nodes whose link component holds no site.
fn drop_orphans(spanner: &SpannerGraph) -> SpannerGraph {
    let adj = spanner.adjacency();
    let mut keep = vec![false; spanner.nodes.len()];
    let mut stack = spanner.site_nodes();
    for &s in &stack {
        keep[s] = true;
    }
    while let Some(v) = stack.pop() {
        for &(w, _) in &adj[v] {
            if !keep[w] {
                keep[w] = true;
                stack.push(w);
            }
        }
    }
    let mut remap = vec![usize::MAX; spanner.nodes.len()];
    let mut out = SpannerGraph::new(spanner.metric);
    for (i, n) in spanner.nodes.iter().enumerate() {
        if keep[i] {
            remap[i] = out.nodes.len();
            out.nodes.push(*n);
        }
    }
    for l in &spanner.links {
        if keep[l.a] && keep[l.b] {
            let mut l = l.clone();
            l.a = remap[l.a];
            l.b = remap[l.b];
            out.links.push(l);
        }
    }
    out
}

/// Replaces groups of two or more Steiner points inside one edge by Steiner
/// points at the edge's endpoints. `tree` is the (possibly subdivided) tree
/// the spanner's hosts refer to.
pub fn normalize_spanner(spanner: &SpannerGraph, tree: &EdgeWeightedTree) -> Result<SpannerGraph> {
    if spanner.metric != Metric::Tree {
        return Err(Error::Unsupported(format!("normalization of a {} spanner", spanner.metric.as_str())));
    }
    let spanner = drop_orphans(spanner);
    let vertex_of = |i: usize| match spanner.nodes[i].host {
        Host::Vertex { vertex, .. } => vertex,
        Host::Point(_) => unreachable!("tree spanner with a point host"),
    };
    let mut groups: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
    for (i, n) in spanner.nodes.iter().enumerate() {
        if n.kind == NodeKind::Steiner {
            if let Some(e) = tree.subdivided_edge(vertex_of(i)) {
                groups.entry(e).or_default().push(i);
            }
        }
    }
    groups.retain(|_, g| g.len() >= 2);
    if groups.is_empty() {
        return Ok(spanner);
    }
    // node -> (upper, lower) endpoints of its edge when it is being replaced
    let mut moved: BTreeMap<usize, (VertexId, VertexId, EdgeId)> = BTreeMap::new();
    for (&e, g) in &groups {
        let (u, v) = original_span(tree, vertex_of(g[0]));
        for &i in g {
            moved.insert(i, (u, v, e));
        }
    }
    let mut b = GraphBuilder::new(Metric::Tree);
    let mut remap = vec![usize::MAX; spanner.nodes.len()];
    for (i, n) in spanner.nodes.iter().enumerate() {
        if !moved.contains_key(&i) {
            remap[i] = b.node(n.kind, n.host);
        }
    }
    let endpoint = |b: &mut GraphBuilder, v: VertexId| {
        let kind = if tree.is_site(v) { NodeKind::Site } else { NodeKind::Steiner };
        b.node(kind, Host::Vertex { tree: 0, vertex: v })
    };
    let resolve = |b: &mut GraphBuilder, x: usize, other: usize| match moved.get(&x) {
        None => remap[x],
        Some(&(u, v, _)) => endpoint(b, if tree.lca(vertex_of(other), v) == v { v } else { u }),
    };
    for l in &spanner.links {
        if let (Some(&(_, _, ea)), Some(&(_, _, eb))) = (moved.get(&l.a), moved.get(&l.b)) {
            if ea == eb {
                continue;
            }
        }
        let a = resolve(&mut b, l.a, l.b);
        let c = resolve(&mut b, l.b, l.a);
        b.tree_link_with(0, tree, a, c, &l.origins);
    }
    for g in groups.values() {
        let (u, v) = original_span(tree, vertex_of(g[0]));
        let nu = endpoint(&mut b, u);
        let nv = endpoint(&mut b, v);
        b.tree_link(0, tree, nu, nv, LinkOrigin { tree: 0, part: None });
    }
    Ok(drop_orphans(&b.finish()))
}
