//! Edge-weighted rooted trees and forests.

use crate::error::{invalid, Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// A parent-child edge. Synthetic edges carry weight zero and are not
/// counted by complexity measures.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub parent: VertexId,
    pub child: VertexId,
    pub weight: f64,
    pub synthetic: bool,
}

/// Incrementally assembles an [`EdgeWeightedTree`]. Child order follows the
/// order in which edges are added.
#[derive(Debug, Clone)]
pub struct TreeBuilder {
    vertex_count: usize,
    root: VertexId,
    edges: Vec<Edge>,
    sites: Vec<VertexId>,
}

impl TreeBuilder {
    pub fn new(vertex_count: usize, root: VertexId) -> Self {
        TreeBuilder {
            vertex_count,
            root,
            edges: Vec::with_capacity(vertex_count.saturating_sub(1)),
            sites: Vec::new(),
        }
    }

    pub fn edge(&mut self, parent: VertexId, child: VertexId, weight: f64) -> &mut Self {
        self.edges.push(Edge { parent, child, weight, synthetic: false });
        self
    }

    pub fn synthetic_edge(&mut self, parent: VertexId, child: VertexId) -> &mut Self {
        self.edges.push(Edge { parent, child, weight: 0.0, synthetic: true });
        self
    }

    pub fn site(&mut self, v: VertexId) -> &mut Self {
        self.sites.push(v);
        self
    }

    /// Builds the tree, requiring the set of sites to equal the set of leaves
    /// (a tree without any sites is accepted as an empty instance).
    pub fn build(&self) -> Result<EdgeWeightedTree> {
        let tree = self.assemble()?;
        if tree.site_count() > 0 {
            for v in 0..tree.vertex_count() {
                if tree.is_leaf(v) != tree.is_site(v) {
                    return invalid(if tree.is_site(v) {
                        format!("site {v} is not a leaf")
                    } else {
                        format!("leaf {v} is not a site")
                    });
                }
            }
        }
        Ok(tree)
    }

    /// Builds the tree, allowing leaves that are not sites. Sites must still
    /// be leaves.
    pub fn build_relaxed(&self) -> Result<EdgeWeightedTree> {
        let tree = self.assemble()?;
        for v in 0..tree.vertex_count() {
            if tree.is_site(v) && !tree.is_leaf(v) {
                return invalid(format!("site {v} is not a leaf"));
            }
        }
        Ok(tree)
    }

    fn assemble(&self) -> Result<EdgeWeightedTree> {
        let m = self.vertex_count;
        if m == 0 {
            return invalid("tree has no vertices");
        }
        if self.root >= m {
            return invalid(format!("root {} out of range", self.root));
        }
        if self.edges.len() != m - 1 {
            return invalid(format!("expected {} edges for {} vertices, got {}", m - 1, m, self.edges.len()));
        }
        let mut parent_edge = vec![None; m];
        let mut children = vec![Vec::new(); m];
        for (id, e) in self.edges.iter().enumerate() {
            if e.parent >= m || e.child >= m {
                return invalid(format!("edge {id} references an unknown vertex"));
            }
            if e.parent == e.child {
                return invalid(format!("edge {id} is a self loop"));
            }
            if !e.weight.is_finite() || e.weight < 0.0 || (e.weight == 0.0 && !e.synthetic) {
                return invalid(format!("edge {id} has non-positive weight {}", e.weight));
            }
            if e.child == self.root {
                return invalid("root cannot have a parent");
            }
            if parent_edge[e.child].is_some() {
                return invalid(format!("vertex {} has two parents", e.child));
            }
            parent_edge[e.child] = Some(id);
            children[e.parent].push(e.child);
        }
        let mut is_site = vec![false; m];
        for &s in &self.sites {
            if s >= m {
                return invalid(format!("site {s} out of range"));
            }
            if is_site[s] {
                return invalid(format!("site {s} listed twice"));
            }
            is_site[s] = true;
        }
        let mut tree = EdgeWeightedTree {
            root: self.root,
            parent_edge,
            children,
            edges: self.edges.clone(),
            is_site,
            depth: vec![0; m],
            subdivision: vec![None; m],
            edge_origin: (0..self.edges.len()).collect(),
        };
        let mut seen = 0usize;
        let mut stack = vec![tree.root];
        while let Some(v) = stack.pop() {
            seen += 1;
            for &c in &tree.children[v] {
                tree.depth[c] = tree.depth[v] + 1;
                stack.push(c);
            }
        }
        if seen != m {
            return invalid("tree is not connected");
        }
        Ok(tree)
    }
}

/// A rooted tree with nonnegative edge weights and a set of site leaves.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWeightedTree {
    root: VertexId,
    parent_edge: Vec<Option<EdgeId>>,
    children: Vec<Vec<VertexId>>,
    edges: Vec<Edge>,
    is_site: Vec<bool>,
    depth: Vec<usize>,
    /// For vertices created by [`EdgeWeightedTree::insert_point_on_edge`]:
    /// the original edge they subdivide.
    subdivision: Vec<Option<EdgeId>>,
    edge_origin: Vec<EdgeId>,
}

impl EdgeWeightedTree {
    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.children.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn site_count(&self) -> usize {
        self.is_site.iter().filter(|&&s| s).count()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v]
    }

    pub fn parent_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.parent_edge[v]
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent_edge[v].map(|e| self.edges[e].parent)
    }

    /// Weight of the edge above `v`, zero for the root.
    pub fn parent_weight(&self, v: VertexId) -> f64 {
        self.parent_edge[v].map_or(0.0, |e| self.edges[e].weight)
    }

    pub fn depth(&self, v: VertexId) -> usize {
        self.depth[v]
    }

    pub fn is_site(&self, v: VertexId) -> bool {
        self.is_site[v]
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.children[v].is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v < self.vertex_count()
    }

    /// Original edge subdivided by `v`, if `v` was inserted on an edge.
    pub fn subdivided_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.subdivision[v]
    }

    /// Edge of the tree before any subdivision that `e` is a piece of.
    pub fn edge_origin(&self, e: EdgeId) -> EdgeId {
        self.edge_origin[e]
    }

    /// Sites in increasing id order.
    pub fn sites(&self) -> Vec<VertexId> {
        (0..self.vertex_count()).filter(|&v| self.is_site[v]).collect()
    }

    /// Vertices in depth-first preorder respecting child order.
    pub fn preorder(&self) -> Vec<VertexId> {
        let mut order = Vec::with_capacity(self.vertex_count());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.children[v].iter().rev());
        }
        order
    }

    /// Sites in the order of an in-order (left-to-right) traversal.
    pub fn in_order_sites(&self) -> Vec<VertexId> {
        self.preorder().into_iter().filter(|&v| self.is_site[v]).collect()
    }

    fn check(&self, v: VertexId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            invalid(format!("unknown vertex {v}"))
        }
    }

    /// Lowest common ancestor by walking parent pointers.
    pub fn lca(&self, mut a: VertexId, mut b: VertexId) -> VertexId {
        while self.depth[a] > self.depth[b] {
            a = self.parent(a).unwrap();
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent(b).unwrap();
        }
        while a != b {
            a = self.parent(a).unwrap();
            b = self.parent(b).unwrap();
        }
        a
    }

    /// Weight sum along the unique path. The two halves of the path are
    /// summed bottom-up separately, so the result is symmetric bit for bit.
    pub fn distance(&self, mut a: VertexId, mut b: VertexId) -> f64 {
        let (mut up_a, mut up_b) = (0.0, 0.0);
        while a != b {
            if self.depth[a] >= self.depth[b] {
                up_a += self.parent_weight(a);
                a = self.parent(a).unwrap();
            } else {
                up_b += self.parent_weight(b);
                b = self.parent(b).unwrap();
            }
        }
        up_a + up_b
    }

    pub fn tree_distance(&self, a: VertexId, b: VertexId) -> Result<f64> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.distance(a, b))
    }

    /// Number of edges on the unique path.
    pub fn path_complexity(&self, a: VertexId, b: VertexId) -> Result<usize> {
        self.check(a)?;
        self.check(b)?;
        let c = self.lca(a, b);
        Ok(self.depth[a] + self.depth[b] - 2 * self.depth[c])
    }

    /// Vertices of the unique path from `a` to `b`, both included.
    pub fn path(&self, a: VertexId, b: VertexId) -> Vec<VertexId> {
        let c = self.lca(a, b);
        let mut left = vec![a];
        let mut v = a;
        while v != c {
            v = self.parent(v).unwrap();
            left.push(v);
        }
        let mut right = Vec::new();
        let mut v = b;
        while v != c {
            right.push(v);
            v = self.parent(v).unwrap();
        }
        left.extend(right.into_iter().rev());
        left
    }

    /// Edges along a vertex path as produced by [`EdgeWeightedTree::path`].
    pub fn path_edges<'a>(&'a self, path: &'a [VertexId]) -> impl Iterator<Item = EdgeId> + 'a {
        path.windows(2).map(move |w| {
            let (x, y) = (w[0], w[1]);
            match self.parent_edge[x] {
                Some(e) if self.edges[e].parent == y => e,
                _ => self.parent_edge[y].expect("path step is not a tree edge"),
            }
        })
    }

    /// Number of sites in the subtree of every vertex.
    pub fn subtree_site_counts(&self) -> Vec<usize> {
        let mut counts: Vec<usize> = self.is_site.iter().map(|&s| s as usize).collect();
        for &v in self.preorder().iter().rev() {
            if let Some(p) = self.parent(v) {
                counts[p] += counts[v];
            }
        }
        counts
    }

    /// Places a new vertex in the interior of edge `e`, splitting it into a
    /// piece of weight `fraction * w` above and the remainder below. The new
    /// vertex takes the position of the old child in its parent's child list.
    pub fn insert_point_on_edge(&mut self, e: EdgeId, fraction: f64) -> Result<VertexId> {
        if e >= self.edges.len() {
            return invalid(format!("unknown edge {e}"));
        }
        if !(fraction > 0.0 && fraction < 1.0) {
            return invalid(format!("fraction {fraction} outside (0, 1)"));
        }
        if self.edges[e].synthetic {
            return Err(Error::Unsupported("cannot subdivide a synthetic edge".into()));
        }
        let Edge { parent: u, child: v, weight: w, .. } = self.edges[e].clone();
        let s = self.vertex_count();
        let upper = fraction * w;
        let lower = w - upper;
        if upper <= 0.0 || lower <= 0.0 {
            return invalid("subdivision produces a zero-weight piece");
        }
        let origin = self.edge_origin[e];
        self.edges[e] = Edge { parent: u, child: s, weight: upper, synthetic: false };
        let new_edge = self.edges.len();
        self.edges.push(Edge { parent: s, child: v, weight: lower, synthetic: false });
        self.edge_origin.push(origin);
        for c in self.children[u].iter_mut() {
            if *c == v {
                *c = s;
            }
        }
        self.children.push(vec![v]);
        self.parent_edge.push(Some(e));
        self.parent_edge[v] = Some(new_edge);
        self.is_site.push(false);
        self.subdivision.push(Some(origin));
        self.depth.push(self.depth[u] + 1);
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            self.depth[x] += 1;
            stack.extend(self.children[x].iter().copied());
        }
        Ok(s)
    }
}

/// An ordered collection of trees. The order fixes the traversal used to
/// distribute sites over trees.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Forest {
    pub trees: Vec<EdgeWeightedTree>,
}

impl Forest {
    pub fn new(trees: Vec<EdgeWeightedTree>) -> Self {
        Forest { trees }
    }

    pub fn site_count(&self) -> usize {
        self.trees.iter().map(|t| t.site_count()).sum()
    }

    pub fn vertex_count(&self) -> usize {
        self.trees.iter().map(|t| t.vertex_count()).sum()
    }
}
