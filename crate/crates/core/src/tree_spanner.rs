//! Steiner-free 2t-spanners on edge-weighted trees.
//!
//! The sites are split by a balancing edge `e`. A grouping hierarchy of depth
//! at most `t` is laid over the in-order sequence of all sites of the
//! current component; every group center (the site closest to the midpoint
//! of `e`) links to the center of its parent group. Both components left
//! after removing `e` are then handled recursively.

use std::ops::Range;

use crate::error::{invalid, Error, Result};
use crate::spanner::{GraphBuilder, Host, LinkOrigin, Metric, NodeKind, SpannerGraph};
use crate::tree::{EdgeId, EdgeWeightedTree, VertexId};

/// A node of the grouping hierarchy. `range` indexes the ordered site
/// sequence the hierarchy was built on.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupingNode {
    pub range: Range<usize>,
    pub center: VertexId,
    pub level: usize,
    pub children: Vec<GroupingNode>,
}

impl GroupingNode {
    pub fn depth(&self) -> usize {
        self.children.iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    fn for_each_link(&self, f: &mut impl FnMut(VertexId, VertexId)) {
        for c in &self.children {
            if c.center != self.center {
                f(c.center, self.center);
            }
            c.for_each_link(f);
        }
    }
}

/// A link emitted by the plain construction. `cut` holds the endpoints of
/// the balancing edge that separated `a` from `b`, or `None` for a direct
/// link in a component with two sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlainLink {
    pub a: VertexId,
    pub b: VertexId,
    pub cut: Option<(VertexId, VertexId)>,
}

/// Smallest `N` with `N^t >= n`.
pub fn group_count(n: usize, t: usize) -> usize {
    if n <= 1 {
        return 1;
    }
    let t = t.max(1) as u32;
    let mut g = ((n as f64).powf(1.0 / t as f64).floor() as usize).saturating_sub(1).max(1);
    while (g as u128).checked_pow(t).is_some_and(|p| p < n as u128) {
        g += 1;
    }
    g
}

/// Edge maximizing the smaller number of sites on either side. Ties go to
/// the lowest edge id.
pub fn balancing_edge(tree: &EdgeWeightedTree) -> Result<EdgeId> {
    let n = tree.site_count();
    if n < 2 {
        return Err(Error::Degenerate(format!("balancing edge needs two sites, found {n}")));
    }
    let counts = tree.subtree_site_counts();
    let mut best = (0, 0);
    for (id, e) in tree.edges().iter().enumerate() {
        let below = counts[e.child];
        let score = below.min(n - below);
        if score > best.1 || id == 0 {
            best = (id, score);
        }
    }
    Ok(best.0)
}

fn build_hierarchy(range: Range<usize>, level: usize, groups: usize, keys: &[f64], sites: &[VertexId]) -> GroupingNode {
    let len = range.len();
    if len == 1 {
        return GroupingNode { center: sites[range.start], range, level, children: Vec::new() };
    }
    let size = len.div_ceil(groups);
    let mut children = Vec::new();
    let mut start = range.start;
    while start < range.end {
        let end = (start + size).min(range.end);
        children.push(build_hierarchy(start..end, level + 1, groups, keys, sites));
        start = end;
    }
    let mut best = range.start;
    for i in range.clone() {
        if keys[i] < keys[best] {
            best = i;
        }
    }
    GroupingNode { center: sites[best], range, level, children }
}

/// Grouping hierarchy over `sites` (in the given order) for balancing edge
/// `e`. Keys are distances to the midpoint of `e`.
pub fn build_grouping(tree: &EdgeWeightedTree, sites: &[VertexId], e: EdgeId, t: usize) -> Result<GroupingNode> {
    if t < 1 {
        return invalid("t must be at least 1");
    }
    if sites.is_empty() {
        return invalid("grouping needs at least one site");
    }
    if e >= tree.edge_count() {
        return invalid(format!("unknown edge {e}"));
    }
    let edge = tree.edge(e);
    let mut keys = Vec::with_capacity(sites.len());
    for &s in sites {
        if !tree.contains(s) {
            return invalid(format!("unknown vertex {s}"));
        }
        let below = tree.lca(s, edge.child) == edge.child;
        let end = if below { edge.child } else { edge.parent };
        keys.push(tree.distance(s, end) + edge.weight / 2.0);
    }
    Ok(build_hierarchy(0..sites.len(), 0, group_count(sites.len(), t), &keys, sites))
}

const NONE: usize = usize::MAX;

/// Binary refinement of a tree: vertices with more than two children get a
/// chain of zero-weight virtual vertices. Original vertices keep their ids.
struct Binary {
    parent: Vec<usize>,
    weight: Vec<f64>,
    children: Vec<Vec<usize>>,
    original: Vec<VertexId>,
    site: Vec<bool>,
    preorder: Vec<usize>,
}

impl Binary {
    fn new(tree: &EdgeWeightedTree) -> Self {
        let m = tree.vertex_count();
        let mut b = Binary {
            parent: vec![NONE; m],
            weight: vec![0.0; m],
            children: vec![Vec::new(); m],
            original: (0..m).collect(),
            site: (0..m).map(|v| tree.is_site(v)).collect(),
            preorder: Vec::with_capacity(m),
        };
        for v in 0..m {
            let ch = tree.children(v);
            let mut at = v;
            for (i, &c) in ch.iter().enumerate() {
                if i > 0 && i + 1 < ch.len() {
                    let x = b.parent.len();
                    b.parent.push(at);
                    b.weight.push(0.0);
                    b.children.push(Vec::new());
                    b.original.push(v);
                    b.site.push(false);
                    b.children[at].push(x);
                    at = x;
                }
                b.parent[c] = at;
                b.weight[c] = tree.parent_weight(c);
                b.children[at].push(c);
            }
        }
        let mut stack = vec![tree.root()];
        while let Some(v) = stack.pop() {
            b.preorder.push(v);
            stack.extend(b.children[v].iter().rev());
        }
        b
    }
}

/// Runs the plain construction and returns the links between sites.
pub fn plain_spanner_links(tree: &EdgeWeightedTree, t: usize) -> Result<Vec<PlainLink>> {
    if t < 1 {
        return invalid("t must be at least 1");
    }
    let bin = Binary::new(tree);
    let size = bin.parent.len();
    let mut stamp = vec![0u32; size];
    let mut next_stamp = 1u32;
    let mut count = vec![0usize; size];
    let mut below = vec![0usize; size];
    let mut key = vec![0.0f64; size];
    let mut out = Vec::new();
    let mut work: Vec<Vec<usize>> = vec![bin.preorder.clone()];

    while let Some(list) = work.pop() {
        let id = next_stamp;
        next_stamp += 1;
        for &v in &list {
            stamp[v] = id;
            count[v] = bin.site[v] as usize;
            below[v] = 1;
        }
        for &v in list[1..].iter().rev() {
            let p = bin.parent[v];
            count[p] += count[v];
            below[p] += below[v];
        }
        let n = count[list[0]];
        if n <= 1 {
            continue;
        }
        let sites: Vec<usize> = list.iter().copied().filter(|&v| bin.site[v]).collect();
        if n == 2 {
            out.push(PlainLink { a: sites[0], b: sites[1], cut: None });
            continue;
        }
        let mut cut = (1, 0);
        for (pos, &v) in list.iter().enumerate().skip(1) {
            let score = count[v].min(n - count[v]);
            if score > cut.1 {
                cut = (pos, score);
            }
        }
        let pos = cut.0;
        let c = list[pos];
        let p = bin.parent[c];
        let half = bin.weight[c] / 2.0;
        key[c] = half;
        key[p] = half;
        let mut stack = vec![(c, p), (p, c)];
        while let Some((v, from)) = stack.pop() {
            let d = key[v];
            let up = bin.parent[v];
            if up != NONE && up != from && stamp[up] == id {
                key[up] = d + bin.weight[v];
                stack.push((up, v));
            }
            for &x in &bin.children[v] {
                if x != from && stamp[x] == id {
                    key[x] = d + bin.weight[x];
                    stack.push((x, v));
                }
            }
        }
        let keys: Vec<f64> = sites.iter().map(|&s| key[s]).collect();
        let root = build_hierarchy(0..n, 0, group_count(n, t), &keys, &sites);
        let edge = (bin.original[p], bin.original[c]);
        root.for_each_link(&mut |a, b| out.push(PlainLink { a, b, cut: Some(edge) }));

        let end = pos + below[c];
        work.push(list[pos..end].to_vec());
        let mut upper = list[..pos].to_vec();
        upper.extend_from_slice(&list[end..]);
        work.push(upper);
    }
    Ok(out)
}

/// Plain 2t-spanner on the sites of `tree`, without Steiner points.
pub fn build_plain_tree_spanner(tree: &EdgeWeightedTree, t: usize) -> Result<SpannerGraph> {
    let links = plain_spanner_links(tree, t)?;
    let mut g = GraphBuilder::new(Metric::Tree);
    let mut node = vec![usize::MAX; tree.vertex_count()];
    for s in tree.sites() {
        node[s] = g.node(NodeKind::Site, Host::Vertex { tree: 0, vertex: s });
    }
    let origin = LinkOrigin { tree: 0, part: None };
    for l in links {
        g.tree_link(0, tree, node[l.a], node[l.b], origin);
    }
    Ok(g.finish())
}
