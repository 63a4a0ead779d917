mod common;

use common::{arb_tree, brute_max_ratio};
use proptest::prelude::*;
use steiner_spanner::tree_spanner::{
    balancing_edge, build_grouping, build_plain_tree_spanner, group_count, plain_spanner_links,
};
use steiner_spanner::{EdgeWeightedTree, NodeKind, TreeBuilder};

/// Sites below the child of every edge, by walking each site to the root.
fn sites_below(tree: &EdgeWeightedTree) -> Vec<usize> {
    let mut below = vec![0; tree.edge_count()];
    for s in tree.sites() {
        let mut v = s;
        while let Some(e) = tree.parent_edge(v) {
            below[e] += 1;
            v = tree.parent(v).unwrap();
        }
    }
    below
}

fn path(weights: &[f64]) -> EdgeWeightedTree {
    let mut b = TreeBuilder::new(weights.len() + 1, 0);
    for (i, &w) in weights.iter().enumerate() {
        b.edge(i, i + 1, w);
    }
    b.site(weights.len());
    b.build_relaxed().unwrap()
}

#[test]
fn group_count_is_smallest_root() {
    for t in 1..=5usize {
        for n in 1..=300usize {
            let brute = (1..).find(|&g: &usize| g.pow(t as u32) >= n).unwrap();
            assert_eq!(group_count(n, t), brute, "n = {n}, t = {t}");
        }
    }
}

#[test]
fn star_with_t1_has_one_hop_links() {
    let mut b = TreeBuilder::new(6, 0);
    for v in 1..6 {
        b.edge(0, v, v as f64).site(v);
    }
    let tree = b.build().unwrap();
    let g = build_plain_tree_spanner(&tree, 1).unwrap();
    assert!(g.size() >= 4 && g.size() <= 10);
    assert_eq!(g.steiner_count(), 0);
    assert!(brute_max_ratio(&g, &tree) <= 2.0 + 1e-12);
}

#[test]
fn two_sites_get_one_link() {
    let mut b = TreeBuilder::new(3, 0);
    b.edge(0, 1, 2.0).edge(0, 2, 3.0).site(1).site(2);
    let tree = b.build().unwrap();
    let links = plain_spanner_links(&tree, 2).unwrap();
    assert_eq!(links.len(), 1);
    let g = build_plain_tree_spanner(&tree, 2).unwrap();
    assert_eq!(g.links[0].length, 5.0);
    assert_eq!(g.links[0].complexity, 2);
}

#[test]
fn single_site_has_no_links() {
    let tree = path(&[1.0, 2.0]);
    let g = build_plain_tree_spanner(&tree, 3).unwrap();
    assert_eq!(g.size(), 0);
    assert_eq!(g.nodes.len(), 1);
}

#[test]
fn rejects_t_zero() {
    let tree = path(&[1.0]);
    assert!(build_plain_tree_spanner(&tree, 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn plain_spanner_meets_bound(tree in arb_tree(40), t in 1usize..=4) {
        let g = build_plain_tree_spanner(&tree, t).unwrap();
        g.validate(std::slice::from_ref(&tree)).unwrap();
        prop_assert!(g.nodes.iter().all(|n| n.kind == NodeKind::Site));
        prop_assert_eq!(g.site_nodes().len(), tree.site_count());
        let r = brute_max_ratio(&g, &tree);
        prop_assert!(r <= 2.0 * t as f64 * (1.0 + 1e-9), "ratio {} for t = {}", r, t);
    }

    #[test]
    fn balancing_edge_maximizes_smaller_side(tree in arb_tree(60)) {
        let n = tree.site_count();
        let below = sites_below(&tree);
        let best = below.iter().map(|&b| b.min(n - b)).max().unwrap();
        let e = balancing_edge(&tree).unwrap();
        prop_assert_eq!(below[e].min(n - below[e]), best);
    }

    #[test]
    fn grouping_depth_is_at_most_t(tree in arb_tree(60), t in 1usize..=4) {
        let sites = tree.in_order_sites();
        let e = balancing_edge(&tree).unwrap();
        let root = build_grouping(&tree, &sites, e, t).unwrap();
        prop_assert!(root.depth() <= t);
        prop_assert_eq!(root.range.clone(), 0..sites.len());
        prop_assert!(sites.contains(&root.center));
    }
}
