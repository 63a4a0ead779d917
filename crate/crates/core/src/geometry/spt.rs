use crate::error::Result;
use crate::tree::{EdgeWeightedTree, TreeBuilder, VertexId};

use super::chord::{split_indexed, SplitSide};
use super::{Chord, Point, SimplePolygon};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Via {
    Chord,
    Reflex(usize),
}

/// Geodesic distances to a chord inside one piece of a cut polygon. Paths
/// bend only at reflex vertices, so distances of reflex vertices are found
/// by Dijkstra over their visibility graph.
pub(crate) struct ChordField<'a> {
    piece: &'a SimplePolygon,
    chord: Chord,
    reflex: Vec<usize>,
    dist: Vec<f64>,
    via: Vec<Via>,
    foot: Vec<Point>,
}

impl<'a> ChordField<'a> {
    pub(crate) fn new(piece: &'a SimplePolygon, chord: &Chord) -> Self {
        let reflex = piece.reflex_vertices();
        let r = reflex.len();
        let pts: Vec<Point> = reflex.iter().map(|&i| piece.vertex(i)).collect();
        let mut dist = vec![f64::INFINITY; r];
        let mut via = vec![Via::Chord; r];
        let mut foot = vec![Point::default(); r];
        for i in 0..r {
            let f = chord.foot(pts[i]);
            if piece.segment_inside(pts[i], f) {
                dist[i] = pts[i].dist(f);
                foot[i] = f;
            }
        }
        let mut visible = vec![false; r * r];
        for i in 0..r {
            for j in i + 1..r {
                let v = piece.segment_inside(pts[i], pts[j]);
                visible[i * r + j] = v;
                visible[j * r + i] = v;
            }
        }
        let mut done = vec![false; r];
        for _ in 0..r {
            let mut u = usize::MAX;
            for i in 0..r {
                if !done[i] && dist[i].is_finite() && (u == usize::MAX || dist[i] < dist[u]) {
                    u = i;
                }
            }
            if u == usize::MAX {
                break;
            }
            done[u] = true;
            for w in 0..r {
                if !done[w] && visible[u * r + w] {
                    let d = dist[u] + pts[u].dist(pts[w]);
                    if d < dist[w] {
                        dist[w] = d;
                        via[w] = Via::Reflex(u);
                        foot[w] = foot[u];
                    }
                }
            }
        }
        ChordField { piece, chord: *chord, reflex, dist, via, foot }
    }

    fn reflex_slot(&self, piece_vertex: usize) -> Option<usize> {
        self.reflex.binary_search(&piece_vertex).ok()
    }

    /// Distance, projection and first step towards the chord for `p`.
    fn step(&self, p: Point) -> (f64, Point, Via) {
        let f = self.chord.foot(p);
        let mut best = (f64::INFINITY, f, Via::Chord);
        if self.piece.segment_inside(p, f) {
            best = (p.dist(f), f, Via::Chord);
        }
        for (i, &v) in self.reflex.iter().enumerate() {
            let q = self.piece.vertex(v);
            if !self.dist[i].is_finite() || q == p {
                continue;
            }
            let d = p.dist(q) + self.dist[i];
            if d < best.0 && self.piece.segment_inside(p, q) {
                best = (d, self.foot[i], Via::Reflex(i));
            }
        }
        best
    }

    /// Geodesic distance to the chord and the closest chord point.
    pub(crate) fn reach(&self, p: Point) -> (f64, Point) {
        let (d, f, _) = self.step(p);
        (d, f)
    }
}

/// What a vertex of a shortest path tree stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SptNode {
    /// A point of the chord: its endpoints and the projections.
    Chord,
    /// Vertex of the polygon the tree was built in.
    Vertex(usize),
    /// One of the input sites.
    Site(usize),
}

/// Union of shortest paths from polygon vertices and sites to a chord,
/// rooted at the chord's lower endpoint.
#[derive(Debug, Clone)]
pub struct ChordSpt {
    pub chord: Chord,
    pub tree: EdgeWeightedTree,
    pub nodes: Vec<SptNode>,
    pub positions: Vec<Point>,
    /// Tree vertex of every input site.
    pub site_vertex: Vec<VertexId>,
    /// Closest chord point of every input site.
    pub projections: Vec<Point>,
    /// Geodesic distance of every input site to the chord.
    pub site_distance: Vec<f64>,
}

impl ChordSpt {
    /// Edge lies on the chord.
    pub fn is_chord_edge(&self, e: usize) -> bool {
        let edge = self.tree.edge(e);
        self.nodes[edge.parent] == SptNode::Chord && self.nodes[edge.child] == SptNode::Chord
    }

    /// Drops every vertex without a site below it. Returns the pruned tree
    /// and, per pruned vertex, the vertex it was in this tree.
    pub fn prune(&self) -> Result<(ChordSpt, Vec<VertexId>)> {
        let t = &self.tree;
        let counts = t.subtree_site_counts();
        let keep: Vec<VertexId> = t.preorder().into_iter().filter(|&v| counts[v] > 0 || v == t.root()).collect();
        let mut local = vec![usize::MAX; t.vertex_count()];
        for (j, &v) in keep.iter().enumerate() {
            local[v] = j;
        }
        let mut b = TreeBuilder::new(keep.len(), 0);
        for &v in &keep {
            for &c in t.children(v) {
                if local[c] != usize::MAX {
                    b.edge(local[v], local[c], t.parent_weight(c));
                }
            }
            if t.is_site(v) {
                b.site(local[v]);
            }
        }
        let tree = b.build()?;
        let pruned = ChordSpt {
            chord: self.chord,
            tree,
            nodes: keep.iter().map(|&v| self.nodes[v]).collect(),
            positions: keep.iter().map(|&v| self.positions[v]).collect(),
            site_vertex: self.site_vertex.iter().map(|&v| local[v]).collect(),
            projections: self.projections.clone(),
            site_distance: self.site_distance.clone(),
        };
        Ok((pruned, keep))
    }
}

/// Counterclockwise angle from `d` to `w` in `[0, 2π)`.
fn turn(d: Point, w: Point) -> f64 {
    let a = d.cross(w).atan2(d.dot(w));
    if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

/// Shortest path tree towards `chord` for all vertices of `polygon` and all
/// `sites`. Children are ordered counterclockwise starting from the
/// direction of the parent, which makes the in-order walk trace the tree's
/// outline.
pub fn build_spt(polygon: &SimplePolygon, chord: &Chord, sites: &[Point]) -> Result<ChordSpt> {
    let split = split_indexed(polygon, chord)?;
    let left = ChordField::new(&split.left, chord);
    let right = ChordField::new(&split.right, chord);
    let field = |side: SplitSide| if side == SplitSide::Left { (&left, &split.left_origin) } else { (&right, &split.right_origin) };

    // first steps, as (kind, position, target) with targets
    // Ok(polygon vertex) or Err(chord point)
    let mut kinds = Vec::new();
    let mut pos = Vec::new();
    let mut target: Vec<std::result::Result<usize, Point>> = Vec::new();
    let mut site_distance = Vec::with_capacity(sites.len());
    let mut projections = Vec::with_capacity(sites.len());
    for side in [SplitSide::Left, SplitSide::Right] {
        let (f, origin) = field(side);
        for (pi, o) in origin.iter().enumerate() {
            let Some(vi) = *o else { continue };
            let p = f.piece.vertex(pi);
            let (d, foot, via) = match f.reflex_slot(pi) {
                Some(s) => (f.dist[s], f.foot[s], f.via[s]),
                None => f.step(p),
            };
            if !d.is_finite() {
                continue;
            }
            kinds.push(SptNode::Vertex(vi));
            pos.push(p);
            target.push(match via {
                Via::Chord => Err(foot),
                Via::Reflex(s) => Ok(origin[f.reflex[s]].unwrap()),
            });
        }
    }
    for (j, &p) in sites.iter().enumerate() {
        let (f, origin) = field(split.side(p));
        let (d, foot, via) = f.step(p);
        site_distance.push(d);
        projections.push(foot);
        kinds.push(SptNode::Site(j));
        pos.push(p);
        target.push(match via {
            Via::Chord => Err(foot),
            Via::Reflex(s) => Ok(origin[f.reflex[s]].unwrap()),
        });
    }

    let mut ys: Vec<f64> = vec![chord.lower.y, chord.upper.y];
    ys.extend(target.iter().filter_map(|t| t.err()).map(|p| p.y));
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    let chain = ys.len();
    let total = chain + kinds.len();
    let mut nodes = vec![SptNode::Chord; chain];
    nodes.extend(kinds.iter().copied());
    let mut positions: Vec<Point> = ys.iter().map(|&y| Point::new(chord.x, y)).collect();
    positions[0] = chord.lower;
    positions[chain - 1] = chord.upper;
    positions.extend(pos.iter().copied());
    let mut vertex_node = vec![usize::MAX; polygon.len()];
    for (j, k) in kinds.iter().enumerate() {
        if let SptNode::Vertex(v) = k {
            vertex_node[*v] = chain + j;
        }
    }
    let mut parent = vec![usize::MAX; total];
    for j in 1..chain {
        parent[j] = j - 1;
    }
    for (j, t) in target.iter().enumerate() {
        parent[chain + j] = match *t {
            Ok(v) => vertex_node[v],
            Err(p) => ys.binary_search_by(|y| y.total_cmp(&p.y)).unwrap(),
        };
    }
    let mut children = vec![Vec::new(); total];
    for v in 1..total {
        children[parent[v]].push(v);
    }
    let mut b = TreeBuilder::new(total, 0);
    for v in 0..total {
        let d = if v == 0 { Point::new(0.0, -1.0) } else { positions[parent[v]] - positions[v] };
        let mut ch = std::mem::take(&mut children[v]);
        ch.sort_by(|&a, &c| {
            let (wa, wc) = (positions[a] - positions[v], positions[c] - positions[v]);
            turn(d, wa).total_cmp(&turn(d, wc)).then(wa.dot(wa).total_cmp(&wc.dot(wc))).then(a.cmp(&c))
        });
        for c in ch {
            let w = if c < chain { ys[c] - ys[c - 1] } else { positions[c].dist(positions[v]) };
            b.edge(v, c, w);
        }
    }
    let site_vertex: Vec<VertexId> = (0..sites.len()).map(|j| chain + kinds.len() - sites.len() + j).collect();
    for &s in &site_vertex {
        b.site(s);
    }
    Ok(ChordSpt { chord: *chord, tree: b.build_relaxed()?, nodes, positions, site_vertex, projections, site_distance })
}
