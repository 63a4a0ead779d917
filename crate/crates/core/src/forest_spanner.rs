//! Spanners on forests sharing one Steiner budget.
//!
//! All sites of the forest, visited tree by tree in in-order, are cut into
//! `⌊k/2⌋` ranges. A tree touched by a single range gets a plain spanner;
//! a tree touched by `K > 1` ranges gets a Steiner spanner with `K` points.

use crate::error::{invalid, Result};
use crate::spanner::{GraphBuilder, Host, Metric, NodeKind, SpannerGraph};
use crate::steiner_tree::{build_steiner_tree_detailed, chunk_ranges, SteinerBuild};
use crate::tree::{Forest, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreePlan {
    Empty,
    SingleRange,
    MultiRange { k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestPlan {
    pub k_half: usize,
    /// Ranges over `(tree, site)` pairs in forest traversal order.
    pub ranges: Vec<Vec<(usize, VertexId)>>,
    pub trees: Vec<TreePlan>,
}

impl ForestPlan {
    pub fn steiner_budget(&self) -> usize {
        self.trees
            .iter()
            .map(|p| match p {
                TreePlan::MultiRange { k } => *k,
                _ => 0,
            })
            .sum()
    }
}

pub fn plan_forest(forest: &Forest, k: usize) -> ForestPlan {
    let k_half = k / 2;
    let mut all = Vec::new();
    for (i, t) in forest.trees.iter().enumerate() {
        all.extend(t.in_order_sites().into_iter().map(|s| (i, s)));
    }
    let ranges = if k_half == 0 || all.is_empty() {
        Vec::new()
    } else {
        let ids: Vec<usize> = (0..all.len()).collect();
        chunk_ranges(&ids, k_half).into_iter().map(|r| r.into_iter().map(|j| all[j]).collect()).collect()
    };
    let mut touched = vec![0usize; forest.trees.len()];
    for r in &ranges {
        let mut last = usize::MAX;
        for &(i, _) in r {
            if i != last {
                touched[i] += 1;
                last = i;
            }
        }
    }
    let trees = forest
        .trees
        .iter()
        .enumerate()
        .map(|(i, t)| match (t.site_count(), touched[i]) {
            (0, _) => TreePlan::Empty,
            (_, 0 | 1) => TreePlan::SingleRange,
            (_, k) => TreePlan::MultiRange { k },
        })
        .collect();
    ForestPlan { k_half, ranges, trees }
}

#[derive(Debug, Clone)]
pub struct ForestBuild {
    pub spanner: SpannerGraph,
    pub plan: ForestPlan,
    /// Per-tree constructions; `None` for empty trees.
    pub builds: Vec<Option<SteinerBuild>>,
}

pub fn build_forest_detailed(forest: &Forest, t: usize, k: usize) -> Result<ForestBuild> {
    if t < 1 {
        return invalid("t must be at least 1");
    }
    let plan = plan_forest(forest, k);
    let mut g = GraphBuilder::new(Metric::Forest);
    let mut builds = Vec::with_capacity(forest.trees.len());
    for (i, tree) in forest.trees.iter().enumerate() {
        let budget = match plan.trees[i] {
            TreePlan::Empty => {
                builds.push(None);
                continue;
            }
            TreePlan::SingleRange => 0,
            TreePlan::MultiRange { k } => k,
        };
        let build = build_steiner_tree_detailed(tree, t, budget)?;
        let remap: Vec<usize> = build
            .spanner
            .nodes
            .iter()
            .map(|n| match n.host {
                Host::Vertex { vertex, .. } => g.node(n.kind, Host::Vertex { tree: i, vertex }),
                Host::Point(_) => unreachable!("tree construction with a point host"),
            })
            .collect();
        for s in tree.sites() {
            g.node(NodeKind::Site, Host::Vertex { tree: i, vertex: s });
        }
        for l in &build.spanner.links {
            let origins: Vec<_> = l.origins.iter().map(|o| crate::spanner::LinkOrigin { tree: i, part: o.part }).collect();
            g.link(remap[l.a], remap[l.b], l.length, l.complexity, l.path.clone(), &origins);
        }
        builds.push(Some(build));
    }
    Ok(ForestBuild { spanner: g.finish(), plan, builds })
}

/// Spanner that is a 2t-spanner on every tree, with at most `k` Steiner
/// points in total.
pub fn build_forest_spanner(forest: &Forest, t: usize, k: usize) -> Result<SpannerGraph> {
    Ok(build_forest_detailed(forest, t, k)?.spanner)
}
