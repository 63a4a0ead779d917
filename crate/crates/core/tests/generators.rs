use std::collections::HashSet;

use proptest::prelude::*;
use steiner_spanner::format::write_tree;
use steiner_spanner::generators::{
    gen_comb, gen_comb_chain, gen_pitchfork_star, gen_random_forest, gen_random_polygon_instance, gen_random_tree,
    Family, GadgetSpec, Instance,
};
use steiner_spanner::geometry::Location;
use steiner_spanner::verify::TreeOracle;
use steiner_spanner::EdgeWeightedTree;

/// Fork of every site: the child of the root above it.
fn top_branch(tree: &EdgeWeightedTree, mut v: usize) -> usize {
    while tree.parent(v) != Some(tree.root()) {
        v = tree.parent(v).unwrap();
    }
    v
}

fn site_distances(tree: &EdgeWeightedTree) -> Vec<(usize, usize, f64)> {
    let o = TreeOracle::new(tree);
    let s = tree.sites();
    let mut out = Vec::new();
    for (i, &a) in s.iter().enumerate() {
        for &b in &s[i + 1..] {
            out.push((a, b, o.distance(a, b)));
        }
    }
    out
}

#[test]
fn family_names_round_trip() {
    for f in Family::ALL {
        assert_eq!(f.name().parse::<Family>().unwrap(), f);
    }
    assert!("hexagon".parse::<Family>().is_err());
}

#[test]
fn gadget_preconditions() {
    assert!(gen_pitchfork_star(0, 8, 40).is_err());
    assert!(gen_pitchfork_star(2, 7, 40).is_err());
    assert!(gen_pitchfork_star(1, 8, 16).is_err());
    assert!(gen_comb_chain(1, 2, 40).is_err());
    assert!(gen_comb(1, 10).is_err());
    assert!(gen_comb(8, 15).is_err());
    assert!(gen_random_tree(4, 6, 0).is_err());
    assert!(gen_random_polygon_instance(Family::Comb, 4, 10, 0).is_err());
    assert!(GadgetSpec { family: Family::Comb, n: 4, m: 8, k: 1, seed: 0 }.generate().is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pitchfork_star_distances(k in 1usize..4, extra in 0usize..20, slack in 0usize..40) {
        let n = 4 * k + extra;
        let m = 2 * n + 1 + slack;
        let tree = gen_pitchfork_star(k, n, m).unwrap();
        prop_assert_eq!(tree.vertex_count(), m);
        prop_assert_eq!(tree.site_count(), n);
        prop_assert_eq!(tree.children(tree.root()).len(), 2 * k);
        for (a, b, d) in site_distances(&tree) {
            if top_branch(&tree, a) == top_branch(&tree, b) {
                prop_assert!((2.0..2.25).contains(&d), "same fork {}", d);
            } else {
                prop_assert!((6.0..6.5).contains(&d), "across forks {}", d);
            }
        }
    }

    #[test]
    fn comb_chain_distances(k in 1usize..4, extra in 0usize..20, slack in 0usize..60) {
        let n = 2 * k + 1 + extra;
        let m = (4 * (2 * k + 1)).max(2 * n + 2 * k) + slack;
        let tree = gen_comb_chain(k, n, m).unwrap();
        prop_assert!(tree.vertex_count() <= m && tree.vertex_count() + 2 * k > m);
        prop_assert_eq!(tree.site_count(), n);
        let w = 1.0 / (8.0 * m as f64);
        for (_, _, d) in site_distances(&tree) {
            prop_assert!(d > 2.0 && d <= 2.0 + w + 1.0 / (16.0 * m as f64), "distance {}", d);
        }
    }

    #[test]
    fn comb_distances(n in 2usize..40, slack in 0usize..80) {
        let m = 2 * n + slack;
        let tree = gen_comb(n, m).unwrap();
        prop_assert!(tree.vertex_count() > m && tree.vertex_count() <= m + n + 1);
        prop_assert_eq!(tree.site_count(), n);
        let w = 1.0 / (8.0 * m as f64);
        for (_, _, d) in site_distances(&tree) {
            prop_assert!(d > 2.0 && d <= 2.0 + w * (1.0 + 1e-12), "distance {}", d);
        }
    }

    #[test]
    fn random_tree_shape(n in 2usize..60, extra in 0usize..60, seed in any::<u64>()) {
        let m = 2 * n - 1 + extra;
        let tree = gen_random_tree(n, m, seed).unwrap();
        prop_assert_eq!(tree.vertex_count(), m);
        prop_assert_eq!(tree.site_count(), n);
        prop_assert!(tree.edges().iter().all(|e| (0.1..10.0).contains(&e.weight)));
        let again = gen_random_tree(n, m, seed).unwrap();
        prop_assert_eq!(write_tree(&again).unwrap(), write_tree(&tree).unwrap());
    }

    #[test]
    fn random_forest_shape(trees in 1usize..6, per in 2usize..20, seed in any::<u64>()) {
        let n = trees * per;
        let f = gen_random_forest(trees, n, 3 * n, seed).unwrap();
        prop_assert_eq!(f.trees.len(), trees);
        prop_assert_eq!(f.site_count(), n);
    }

    #[test]
    fn polygon_instances_are_general(f in 0usize..4, m in 6usize..200, n in 0usize..40, seed in any::<u64>()) {
        let fam = [Family::Convex, Family::PerturbedConvex, Family::Spiral, Family::Staircase][f];
        let (p, s) = gen_random_polygon_instance(fam, n, m, seed).unwrap();
        prop_assert_eq!(p.len(), m);
        prop_assert_eq!(s.len(), n);
        let mut xs: HashSet<u64> = p.vertices().iter().map(|v| v.x.to_bits()).collect();
        for q in &s {
            prop_assert_eq!(p.locate(*q), Location::Inside);
            prop_assert!(xs.insert(q.x.to_bits()), "x coordinate {} repeats", q.x);
        }
        if fam == Family::Convex {
            prop_assert!(p.reflex_vertices().is_empty());
        }
        let (p2, s2) = gen_random_polygon_instance(fam, n, m, seed).unwrap();
        prop_assert_eq!(p2.vertices(), p.vertices());
        prop_assert_eq!(s2, s);
    }

    #[test]
    fn gadget_spec_dispatches(f in 0usize..9, seed in any::<u64>()) {
        let family = Family::ALL[f];
        let spec = GadgetSpec { family, n: 12, m: 60, k: 2, seed };
        match spec.generate().unwrap() {
            Instance::Tree(t) => prop_assert_eq!(t.site_count(), 12),
            Instance::Forest(fo) => prop_assert_eq!(fo.site_count(), 12),
            Instance::Polygon(p, s) => {
                prop_assert!(family.is_polygon());
                prop_assert_eq!((p.len(), s.len()), (60, 12));
            }
        }
    }
}
