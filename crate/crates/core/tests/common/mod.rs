#![allow(dead_code)]

use proptest::prelude::*;
use steiner_spanner::verify::floyd_warshall;
use steiner_spanner::{EdgeWeightedTree, Host, SpannerGraph, TreeBuilder};

/// Random rooted tree whose sites are its leaves. Vertices 1 and 2 hang
/// below the root, every later vertex below a random lower-numbered one.
pub fn arb_tree(max_vertices: usize) -> impl Strategy<Value = EdgeWeightedTree> {
    (3..=max_vertices)
        .prop_flat_map(|m| (1..m).map(|i| (0..i, 0.1f64..10.0)).collect::<Vec<_>>())
        .prop_map(|edges| {
            let m = edges.len() + 1;
            let parents: Vec<usize> = edges.iter().enumerate().map(|(i, &(p, _))| if i < 2 { 0 } else { p }).collect();
            let mut b = TreeBuilder::new(m, 0);
            let mut inner = vec![false; m];
            for (i, (&p, &(_, w))) in parents.iter().zip(&edges).enumerate() {
                b.edge(p, i + 1, w);
                inner[p] = true;
            }
            for v in (0..m).filter(|&v| !inner[v]) {
                b.site(v);
            }
            b.build().unwrap()
        })
}

/// Spanner distance over metric distance for every pair of sites, computed
/// by Floyd-Warshall on both the tree and the link graph.
pub fn brute_max_ratio(g: &SpannerGraph, tree: &EdgeWeightedTree) -> f64 {
    let metric = floyd_warshall(tree);
    let nodes = g.nodes.len();
    let mut d = vec![vec![f64::INFINITY; nodes]; nodes];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for l in &g.links {
        d[l.a][l.b] = d[l.a][l.b].min(l.length);
        d[l.b][l.a] = d[l.b][l.a].min(l.length);
    }
    for k in 0..nodes {
        for i in 0..nodes {
            for j in 0..nodes {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let vertex = |i: usize| match g.nodes[i].host {
        Host::Vertex { vertex, .. } => vertex,
        Host::Point(_) => unreachable!(),
    };
    let sites = g.site_nodes();
    let mut worst: f64 = 1.0;
    for (x, &a) in sites.iter().enumerate() {
        for &b in &sites[x + 1..] {
            worst = worst.max(d[a][b] / metric[vertex(a)][vertex(b)]);
        }
    }
    worst
}
