//! The executable reduction chain from graph 3-coloring down to
//! stable-network existence, runnable stage by stage on small inputs:
//!
//! 1. 3-coloring → 3-coloring of a triangle-partitioned graph (attach a
//!    pendant triangle to every node);
//! 2. triangle-partitioned 3-coloring → stable coloring of a bichromatic
//!    (red/blue) graph;
//! 3. stable bichromatic coloring → existence of a 2-stable network in a
//!    matching-structure game with utilities `{-inf, 1, c}`.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::exec;
use crate::model::{ConflictGraph, Instance, Network, Utility};
use crate::partition;
use crate::{Error, Result, SolverConfig};

/// A graph whose nodes are partitioned into triples, each inducing a
/// triangle.
#[derive(Clone, Debug, Serialize)]
pub struct TrianglePartitionedGraph {
    pub graph: Network,
    pub triples: Vec<[usize; 3]>,
}

/// A graph with red and blue edge sets; a pair may carry both colors.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BichromaticGraph {
    pub n: usize,
    pub red: BTreeSet<(usize, usize)>,
    pub blue: BTreeSet<(usize, usize)>,
}

impl BichromaticGraph {
    fn edge_union(&self) -> BTreeSet<(usize, usize)> {
        self.red.union(&self.blue).copied().collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization cannot fail")
    }
}

/// Stage 1: attach new nodes `v'` and `v''` to every node `v` of `h`, with
/// the edges `(v,v')`, `(v,v'')`, `(v',v'')`. The result has `3|V(h)|` nodes
/// and is 3-colorable iff `h` is. Node `v` keeps its index; `v'` and `v''`
/// are `h.n() + 2v` and `h.n() + 2v + 1`.
pub fn three_coloring_to_triple_graph(h: &Network) -> TrianglePartitionedGraph {
    let m = h.n();
    let mut graph = Network::empty(3 * m);
    for (a, b) in h.edges() {
        graph.add_edge(a, b).expect("indices in range");
    }
    let mut triples = Vec::with_capacity(m);
    for v in 0..m {
        let v1 = m + 2 * v;
        let v2 = m + 2 * v + 1;
        graph.add_edge(v, v1).expect("indices in range");
        graph.add_edge(v, v2).expect("indices in range");
        graph.add_edge(v1, v2).expect("indices in range");
        triples.push([v, v1, v2]);
    }
    TrianglePartitionedGraph { graph, triples }
}

/// Stage 2: each triple becomes a triangle of parallel red and blue edges;
/// every other edge of the graph becomes blue only. Red edges therefore
/// appear only inside triples.
pub fn triple_graph_to_bichromatic(tpg: &TrianglePartitionedGraph) -> Result<BichromaticGraph> {
    let mut in_triple = BTreeSet::new();
    for (index, t) in tpg.triples.iter().enumerate() {
        let pairs = [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])];
        for (a, b) in pairs {
            if a == b || !tpg.graph.has_edge(a, b) {
                return Err(Error::NotATriangle { index });
            }
            in_triple.insert((a.min(b), a.max(b)));
        }
    }
    let mut red = BTreeSet::new();
    let mut blue = BTreeSet::new();
    for (a, b) in tpg.graph.edges() {
        blue.insert((a, b));
        if in_triple.contains(&(a, b)) {
            red.insert((a, b));
        }
    }
    Ok(BichromaticGraph {
        n: tpg.graph.n(),
        red,
        blue,
    })
}

/// Stage 3: the matching-structure game. Each node `v` of `k` becomes two
/// agents `x_v` (index `v`) and `y_v` (index `n + v`) with a strong mutual
/// tie `c = 2n + 1 > n`; red edges become enemy pairs on the x side, blue
/// edges enemy pairs on the y side; everything else is a weak tie of 1.
pub fn bichromatic_to_matching_instance(k: &BichromaticGraph) -> Result<Instance> {
    let n = k.n;
    let c = 2 * n as i64 + 1;
    Instance::from_fn(2 * n, true, |i, j| {
        let (lo, hi) = (i.min(j), i.max(j));
        if hi == lo + n {
            return Utility::Finite(c);
        }
        let both_x = lo < n && hi < n;
        let both_y = lo >= n && hi >= n;
        let red_conflict = both_x && k.red.contains(&(lo, hi));
        let blue_conflict = both_y && k.blue.contains(&(lo - n, hi - n));
        if red_conflict || blue_conflict {
            Utility::NegInf
        } else {
            Utility::ONE
        }
    })
}

/// Per-node red and blue adjacency bitmasks; the workhorse behind the
/// stability check (node counts stay within the partition-search bounds, so
/// u64 masks suffice).
struct ColorMasks {
    red: Vec<u64>,
    blue: Vec<u64>,
}

impl ColorMasks {
    fn new(k: &BichromaticGraph) -> ColorMasks {
        let mut red = vec![0u64; k.n];
        let mut blue = vec![0u64; k.n];
        for &(a, b) in &k.red {
            red[a] |= 1 << b;
            red[b] |= 1 << a;
        }
        for &(a, b) in &k.blue {
            blue[a] |= 1 << b;
            blue[b] |= 1 << a;
        }
        ColorMasks { red, blue }
    }
}

/// Is `blocks` a stable coloring of `k`? Blocks must partition the nodes
/// into independent sets of the red/blue union; the coloring is stable when
/// every two nodes `v`, `w` in distinct blocks `S_i ∋ v`, `S_j ∋ w` see at
/// least three of: a red edge `v`→`S_j`, a blue edge `v`→`S_j`, a red edge
/// `w`→`S_i`, a blue edge `w`→`S_i`. (A pair missing two of those four kinds
/// leaves one agent per color side free to merge the two blocks in the
/// downstream matching game, so the condition ranges over all cross-block
/// pairs — that is exactly what the game equivalence requires.)
pub fn verify_stable_coloring(k: &BichromaticGraph, blocks: &[Vec<usize>]) -> Result<bool> {
    let n = k.n;
    let mut block_of = vec![usize::MAX; n];
    for (bi, block) in blocks.iter().enumerate() {
        for &v in block {
            if v >= n {
                return Err(Error::AgentOutOfRange { index: v, n });
            }
            if block_of[v] != usize::MAX {
                return Err(Error::NotAPartition);
            }
            block_of[v] = bi;
        }
    }
    if block_of.contains(&usize::MAX) {
        return Err(Error::NotAPartition);
    }
    for (index, block) in blocks.iter().enumerate() {
        for (idx, &v) in block.iter().enumerate() {
            for &w in &block[idx + 1..] {
                let p = (v.min(w), v.max(w));
                if k.red.contains(&p) || k.blue.contains(&p) {
                    return Err(Error::BlockNotIndependent { index });
                }
            }
        }
    }
    let masks = ColorMasks::new(k);
    let block_masks: Vec<u64> = blocks
        .iter()
        .map(|b| b.iter().fold(0u64, |m, &v| m | 1 << v))
        .collect();
    Ok(stable_coloring_holds(k.n, &masks, &block_masks, &block_of))
}

fn stable_coloring_holds(
    n: usize,
    masks: &ColorMasks,
    block_masks: &[u64],
    block_of: &[usize],
) -> bool {
    for v in 0..n {
        for w in v + 1..n {
            let (bi, bj) = (block_of[v], block_of[w]);
            if bi == bj {
                continue;
            }
            let mut present = 0;
            present += u32::from(masks.red[v] & block_masks[bj] != 0);
            present += u32::from(masks.blue[v] & block_masks[bj] != 0);
            present += u32::from(masks.red[w] & block_masks[bi] != 0);
            present += u32::from(masks.blue[w] & block_masks[bi] != 0);
            if present < 3 {
                return false;
            }
        }
    }
    true
}

/// Exhaustive stable-coloring search: enumerate every partition of the nodes
/// into independent sets of the red/blue union, in canonical order, and
/// return the first stable coloring.
pub fn stable_coloring_search(
    k: &BichromaticGraph,
    cfg: &SolverConfig,
) -> Result<Option<Vec<Vec<usize>>>> {
    cfg.check_partition(k.n)?;
    let conflicts = ConflictGraph::from_enemy_pairs(k.n, k.edge_union())?;
    let n = k.n;
    let masks = ColorMasks::new(k);
    const PREFIX_DEPTH: usize = 6;

    let try_assignment = |assignment: &[usize]| -> Option<Vec<Vec<usize>>> {
        let nblocks = assignment.iter().copied().max().map_or(0, |m| m + 1);
        let mut block_masks = vec![0u64; nblocks];
        for (v, &b) in assignment.iter().enumerate() {
            block_masks[b] |= 1 << v;
        }
        if stable_coloring_holds(n, &masks, &block_masks, assignment) {
            Some(
                crate::model::CliquePartition::from_assignment(assignment)
                    .blocks()
                    .to_vec(),
            )
        } else {
            None
        }
    };

    if n <= PREFIX_DEPTH || cfg.exec == crate::ExecMode::Sequential {
        let mut found = None;
        partition::for_each_partition(n, Some(&conflicts), &mut |assignment, _| {
            match try_assignment(assignment) {
                Some(blocks) => {
                    found = Some(blocks);
                    ControlFlow::Break(())
                }
                None => ControlFlow::Continue(()),
            }
        });
        return Ok(found);
    }

    let prefixes = partition::partition_prefixes(n, Some(&conflicts), PREFIX_DEPTH);
    Ok(exec::find_map_first(cfg.exec, &prefixes, |prefix| {
        let mut found = None;
        partition::for_each_completion(prefix, n, Some(&conflicts), &mut |assignment, _| {
            match try_assignment(assignment) {
                Some(blocks) => {
                    found = Some(blocks);
                    ControlFlow::Break(())
                }
                None => ControlFlow::Continue(()),
            }
        });
        found
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete_graph(n: usize) -> Network {
        let mut g = Network::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j).unwrap();
            }
        }
        g
    }

    fn cycle_graph(n: usize) -> Network {
        Network::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    /// Simple reference 3-colorability check by backtracking.
    fn three_colorable(g: &Network) -> bool {
        fn rec(g: &Network, colors: &mut Vec<usize>, v: usize) -> bool {
            if v == g.n() {
                return true;
            }
            for c in 1..=3 {
                if g.neighbors(v).iter().all(|&u| colors[u] != c) {
                    colors[v] = c;
                    if rec(g, colors, v + 1) {
                        return true;
                    }
                    colors[v] = 0;
                }
            }
            false
        }
        rec(g, &mut vec![0; g.n()], 0)
    }

    #[test]
    fn single_node_becomes_one_triangle() {
        let tpg = three_coloring_to_triple_graph(&Network::empty(1));
        assert_eq!(tpg.graph.n(), 3);
        assert_eq!(tpg.graph.edge_count(), 3);
        assert_eq!(tpg.triples, vec![[0, 1, 2]]);
    }

    #[test]
    fn triple_graph_preserves_three_colorability() {
        let k4 = complete_graph(4);
        let c5 = cycle_graph(5);
        assert!(!three_colorable(&three_coloring_to_triple_graph(&k4).graph));
        assert!(three_colorable(&three_coloring_to_triple_graph(&c5).graph));
    }

    #[test]
    fn red_edges_only_inside_triples() {
        let tpg = three_coloring_to_triple_graph(&cycle_graph(4));
        let k = triple_graph_to_bichromatic(&tpg).unwrap();
        assert_eq!(k.red.len(), 3 * tpg.triples.len());
        for &(a, b) in &k.red {
            assert!(tpg
                .triples
                .iter()
                .any(|t| t.contains(&a) && t.contains(&b)));
        }
        // Blue covers every edge of the triple graph.
        assert_eq!(k.blue.len(), tpg.graph.edge_count());
    }

    #[test]
    fn non_triangle_triples_rejected() {
        let tpg = TrianglePartitionedGraph {
            graph: Network::from_edges(3, [(0, 1)]).unwrap(),
            triples: vec![[0, 1, 2]],
        };
        assert!(matches!(
            triple_graph_to_bichromatic(&tpg),
            Err(Error::NotATriangle { index: 0 })
        ));
    }

    #[test]
    fn proper_three_coloring_of_triple_graph_is_stable() {
        // Triples of the empty 2-node graph: [0,2,3] and [1,4,5]. Color
        // classes take one node of each triple.
        let tpg = three_coloring_to_triple_graph(&Network::empty(2));
        let k = triple_graph_to_bichromatic(&tpg).unwrap();
        let blocks = vec![vec![0, 1], vec![2, 4], vec![3, 5]];
        assert!(verify_stable_coloring(&k, &blocks).unwrap());
    }

    #[test]
    fn four_blocks_on_a_triple_graph_are_unstable() {
        let tpg = three_coloring_to_triple_graph(&Network::empty(2));
        let k = triple_graph_to_bichromatic(&tpg).unwrap();
        let blocks = vec![vec![0, 1], vec![2], vec![4], vec![3, 5]];
        assert!(!verify_stable_coloring(&k, &blocks).unwrap());
    }

    #[test]
    fn single_block_of_edgeless_graph_is_vacuously_stable() {
        let k = BichromaticGraph {
            n: 3,
            red: BTreeSet::new(),
            blue: BTreeSet::new(),
        };
        assert!(verify_stable_coloring(&k, &[vec![0, 1, 2]]).unwrap());
        // All-singletons is NOT stable: a cross pair with no colored edges at
        // all leaves both matching-game sides free to merge.
        assert!(!verify_stable_coloring(&k, &[vec![0], vec![1], vec![2]]).unwrap());
    }

    #[test]
    fn non_independent_block_rejected() {
        let mut red = BTreeSet::new();
        red.insert((0, 1));
        let k = BichromaticGraph {
            n: 2,
            red,
            blue: BTreeSet::new(),
        };
        assert!(matches!(
            verify_stable_coloring(&k, &[vec![0, 1]]),
            Err(Error::BlockNotIndependent { index: 0 })
        ));
    }

    #[test]
    fn search_agrees_with_three_colorability_on_small_seeds() {
        let cfg = SolverConfig::default().with_partition_limit(15);
        for (graph, expect) in [
            (Network::empty(1), true),
            (complete_graph(2), true),
            (complete_graph(4), false),
        ] {
            let k =
                triple_graph_to_bichromatic(&three_coloring_to_triple_graph(&graph)).unwrap();
            let found = stable_coloring_search(&k, &cfg).unwrap();
            assert_eq!(found.is_some(), expect, "graph with n={}", graph.n());
            if let Some(blocks) = found {
                assert!(verify_stable_coloring(&k, &blocks).unwrap());
                assert!(blocks.len() <= 3);
            }
        }
    }

    #[test]
    fn matching_instance_layout() {
        let mut red = BTreeSet::new();
        red.insert((0, 1));
        let mut blue = BTreeSet::new();
        blue.insert((1, 2));
        let k = BichromaticGraph { n: 3, red, blue };
        let inst = bichromatic_to_matching_instance(&k).unwrap();
        assert_eq!(inst.n(), 6);
        assert_eq!(inst.utility(0, 3), Utility::Finite(7)); // strong tie c = 2n+1
        assert!(inst.conflict(0, 1)); // red on the x side
        assert!(inst.conflict(4, 5)); // blue on the y side
        assert!(!inst.conflict(1, 2)); // blue edge does not conflict x side
    }

    #[test]
    fn edgeless_two_node_chain_has_stable_network() {
        let k = BichromaticGraph {
            n: 2,
            red: BTreeSet::new(),
            blue: BTreeSet::new(),
        };
        let inst = bichromatic_to_matching_instance(&k).unwrap();
        let cfg = SolverConfig::default();
        let net = crate::stability::exists_stable_network(&inst, 2, &cfg)
            .unwrap()
            .expect("stable network exists");
        // One big friendly component is fine here.
        assert!(crate::stability::is_k_stable(&inst, &net, 2));
    }
}
