//! Cross-module checks: instance families against the exact oracles.

use gossipnet_core::construct::{
    potential_dynamics, three_stable_from_optimal, two_stable_dynamics, PotentialKind,
};
use gossipnet_core::instances;
use gossipnet_core::model::{total_welfare_of_partition, CliquePartition};
use gossipnet_core::stability::{
    enumerate_stable_networks, exists_stable_network, is_k_stable,
};
use gossipnet_core::welfare::{
    optimal_total_welfare,
    chromatic_number, poa_bound_check, welfare_report, Ratio, WelfareMetric,
};
use gossipnet_core::{ExecMode, SolverConfig};


#[test]
fn tiered_family_is_bipartite_two_chromatic() {
    let cfg = SolverConfig::default().with_coloring_limit(60);
    for n in [9usize, 27] {
        let inst = instances::tiered_bipartite(n).unwrap();
        let (chi, _) = chromatic_number(&inst.conflict_graph(), &cfg).unwrap();
        assert_eq!(chi, 2, "n = {n}");
    }
}

#[test]
fn grid_chromatic_is_min_dimension() {
    let cfg = SolverConfig::default();
    for (r, c) in [(2, 3), (3, 4), (2, 2)] {
        let inst = instances::grid(r, c).unwrap();
        let (chi, _) = chromatic_number(&inst.conflict_graph(), &cfg).unwrap();
        assert_eq!(chi, r.min(c), "grid {r}x{c}");
    }
}

#[test]
fn grid_columns_are_stable_up_to_the_column_size() {
    let (r, c) = (3usize, 4usize);
    let inst = instances::grid(r, c).unwrap();
    let columns = CliquePartition::from_blocks(
        r * c,
        (0..c).map(|j| (0..r).map(|i| i * c + j).collect()).collect(),
    )
    .unwrap()
    .to_network();
    for k in 1..=r {
        assert!(is_k_stable(&inst, &columns, k), "k = {k}");
    }
    // A full row defecting beats the column payoff once k exceeds the
    // column size.
    assert!(!is_k_stable(&inst, &columns, r + 1));
}

#[test]
fn grid_partition_welfares_match_the_closed_forms() {
    let (r, c) = (3usize, 4usize);
    let n = (r * c) as i64;
    let k = c as i64; // row size
    let inst = instances::grid(r, c).unwrap();
    let rows = CliquePartition::from_blocks(
        r * c,
        (0..r).map(|i| (0..c).map(|j| i * c + j).collect()).collect(),
    )
    .unwrap();
    let columns = CliquePartition::from_blocks(
        r * c,
        (0..c).map(|j| (0..r).map(|i| i * c + j).collect()).collect(),
    )
    .unwrap();
    assert_eq!(
        total_welfare_of_partition(&inst, &rows).as_integer(),
        Some((n * k - n) / 2)
    );
    assert_eq!(
        total_welfare_of_partition(&inst, &columns).as_integer(),
        Some((n * n / k - n) / 2)
    );
}

#[test]
fn grid_poa_meets_the_family_bound() {
    let (r, c) = (3usize, 4usize);
    let inst = instances::grid(r, c).unwrap();
    let k = r.min(c);
    let bound = Ratio::new((r * c / k) as i64 - 1, k as i64 - 1);
    let check = poa_bound_check(&inst, k, Some(bound), &SolverConfig::default()).unwrap();
    assert_eq!(check.bound_satisfied, Some(true));
    assert_eq!(check.optimum, Ratio::from_integer(18));
}

#[test]
fn matched_cliques_poa_meets_half_n() {
    let n = 8usize;
    let inst = instances::matched_cliques(n).unwrap();
    let cfg = SolverConfig::default();
    let matching =
        CliquePartition::from_blocks(n, instances::matched_cliques_matching(n)).unwrap();
    assert!(is_k_stable(&inst, &matching.to_network(), 2));
    let check =
        poa_bound_check(&inst, 2, Some(Ratio::from_integer(n as i64 / 2)), &cfg).unwrap();
    assert_eq!(check.bound_satisfied, Some(true));
    // Optimum is the two cliques; the matching is the worst stable network.
    assert_eq!(check.optimum, Ratio::from_integer(12));
    assert_eq!(check.worst_stable, Some(Ratio::from_integer(3)));
}

#[test]
fn stable_sets_shrink_as_k_grows() {
    let cfg = SolverConfig::default();
    for seed in 0..10u64 {
        let inst = instances::random_instance(7, 0.4, seed).unwrap();
        let by_k: Vec<Vec<CliquePartition>> = (1..=4)
            .map(|k| enumerate_stable_networks(&inst, k, &cfg).unwrap())
            .collect();
        for w in by_k.windows(2) {
            for part in &w[1] {
                assert!(w[0].contains(part), "seed {seed}");
            }
        }
    }
}

#[test]
fn friends_enemies_instances_always_admit_stable_networks() {
    let cfg = SolverConfig::default();
    for seed in 0..15u64 {
        let inst = instances::random_instance(6, 0.5, seed).unwrap();
        for k in [2, 3, 6] {
            assert!(
                exists_stable_network(&inst, k, &cfg).unwrap().is_some(),
                "seed {seed}, k {k}"
            );
        }
    }
}

/// Independent oracle: fewest conflict-free blocks over all partitions, by a
/// plain recursive enumeration that never touches the crate's search code.
fn min_conflict_free_blocks(inst: &gossipnet_core::model::Instance) -> usize {
    fn rec(
        inst: &gossipnet_core::model::Instance,
        agent: usize,
        blocks: &mut Vec<Vec<usize>>,
        best: &mut usize,
    ) {
        if blocks.len() >= *best {
            return;
        }
        if agent == inst.n() {
            *best = blocks.len();
            return;
        }
        for b in 0..blocks.len() {
            if blocks[b].iter().all(|&v| !inst.conflict(v, agent)) {
                blocks[b].push(agent);
                rec(inst, agent + 1, blocks, best);
                blocks[b].pop();
            }
        }
        blocks.push(vec![agent]);
        rec(inst, agent + 1, blocks, best);
        blocks.pop();
    }
    let mut best = inst.n().max(1);
    rec(inst, 0, &mut Vec::new(), &mut best);
    best
}

#[test]
fn min_conflict_free_blocks_equals_chromatic_number() {
    let cfg = SolverConfig::default();
    for seed in 20..35u64 {
        let inst = instances::random_instance(7, 0.45, seed).unwrap();
        let (chi, _) = chromatic_number(&inst.conflict_graph(), &cfg).unwrap();
        assert_eq!(min_conflict_free_blocks(&inst), chi, "seed {seed}");
    }
}

#[test]
fn pendant_triangle_dynamics_reach_the_unique_three_stable_network() {
    let inst = instances::pendant_clique(3).unwrap();
    let cfg = SolverConfig::default();
    let expected = CliquePartition::from_blocks(
        6,
        vec![vec![0, 1, 2], vec![3], vec![4], vec![5]],
    )
    .unwrap();
    let traj = potential_dynamics(&inst, 3).unwrap();
    assert_eq!(traj.final_network().components(), expected);
    // The oracle confirms it is the only 3-stable clique partition.
    let all = enumerate_stable_networks(&inst, 3, &cfg).unwrap();
    assert_eq!(all, vec![expected]);
}

#[test]
fn two_stable_dynamics_agrees_across_exec_modes() {
    for seed in 0..5u64 {
        let inst = instances::random_instance(9, 0.3, seed).unwrap();
        let a = two_stable_dynamics(&inst).unwrap();
        let b = two_stable_dynamics(&inst).unwrap();
        assert_eq!(
            a.final_network().components(),
            b.final_network().components()
        );
        assert_eq!(a.step_count(), b.step_count());
    }
}

#[test]
fn welfare_reports_are_exec_mode_invariant() {
    let inst = instances::twin_cliques_with_triples();
    let seq = welfare_report(
        &inst,
        2,
        WelfareMetric::TotalUtility,
        &SolverConfig::default().with_exec(ExecMode::Sequential),
    )
    .unwrap();
    let par = welfare_report(
        &inst,
        2,
        WelfareMetric::TotalUtility,
        &SolverConfig::default().with_exec(ExecMode::Parallel),
    )
    .unwrap();
    assert_eq!(seq.to_json(), par.to_json());
}

#[test]
fn cycle_gadget_intermediate_states_stay_pair_unstable() {
    use gossipnet_core::construct::{best_response_run, Schedule};
    let gadget = instances::best_response_cycle(6).unwrap();
    let traj = best_response_run(
        &gadget.instance,
        &gadget.start,
        &Schedule::Script(gadget.schedule.clone()),
        100,
        PotentialKind::SumSquares,
    )
    .unwrap();
    for (t, state) in traj.states.iter().enumerate() {
        assert!(
            !is_k_stable(&gadget.instance, state, 2),
            "state {t} unexpectedly 2-stable"
        );
    }
}

#[test]
fn tiered_family_mis_is_the_outer_tier() {
    use gossipnet_core::construct::max_independent_set;
    let inst = instances::tiered_bipartite(9).unwrap();
    let mis = max_independent_set(&inst.conflict_graph(), &SolverConfig::default()).unwrap();
    assert_eq!(mis, instances::tiered_bipartite_blocks(9)[0]);
    assert_eq!(mis.len(), 12); // 4n/3 agents in the outer tier
}

#[test]
fn hub_triangle_welfare_and_repair_paths() {
    let inst = instances::hub_clique_with_triangles();
    let cfg = SolverConfig::default();
    let triangles = CliquePartition::from_blocks(
        12,
        (0..4).map(|i| vec![i, 4 + i, 8 + i]).collect(),
    )
    .unwrap();
    // The four triangles carry welfare 12 and are the exhaustive optimum.
    assert_eq!(
        total_welfare_of_partition(&inst, &triangles).as_integer(),
        Some(12)
    );
    let (w, witness) = optimal_total_welfare(&inst, &cfg).unwrap();
    assert_eq!(w.as_integer(), Some(12));
    assert_eq!(witness, triangles);
    // 3-stable already: the repair has nothing to do at budget 3...
    assert!(is_k_stable(&inst, &triangles.to_network(), 3));
    let repaired = three_stable_from_optimal(&inst, &triangles).unwrap();
    assert_eq!(repaired.components(), triangles);
    // ...but the hub agents break it at budget 4.
    assert!(!is_k_stable(&inst, &triangles.to_network(), 4));
}

#[test]
fn pendant_triangle_repair_walks_from_the_pairs_optimum() {
    // Both the pendant pairs and the triangle-plus-singletons carry the
    // optimal welfare 3; repairing from the pairs must actually move, end
    // 3-stable, and keep the welfare pinned.
    let inst = instances::pendant_clique(3).unwrap();
    let pairs =
        CliquePartition::from_blocks(6, (0..3).map(|i| vec![i, 3 + i]).collect()).unwrap();
    assert_eq!(total_welfare_of_partition(&inst, &pairs).as_integer(), Some(3));
    let repaired = three_stable_from_optimal(&inst, &pairs).unwrap();
    let expected =
        CliquePartition::from_blocks(6, vec![vec![0, 1, 2], vec![3], vec![4], vec![5]]).unwrap();
    assert_eq!(repaired.components(), expected);
    assert_eq!(
        total_welfare_of_partition(&inst, &repaired.components()).as_integer(),
        Some(3)
    );
    assert!(is_k_stable(&inst, &repaired, 3));
}

#[test]
fn matching_game_stable_networks_keep_strong_pairs_together() {
    use gossipnet_core::reductions::{
        bichromatic_to_matching_instance, three_coloring_to_triple_graph,
        triple_graph_to_bichromatic,
    };
    let seed = gossipnet_core::model::Network::from_edges(2, [(0, 1)]).unwrap();
    let k = triple_graph_to_bichromatic(&three_coloring_to_triple_graph(&seed)).unwrap();
    let inst = bichromatic_to_matching_instance(&k).unwrap();
    let cfg = SolverConfig::default();
    let net = exists_stable_network(&inst, 2, &cfg).unwrap().unwrap();
    let part = net.components();
    for v in 0..k.n {
        assert!(
            part.same_block(v, k.n + v),
            "strong pair {v} split in a stable network"
        );
    }
}

#[test]
fn every_generator_spec_builds_and_round_trips() {
    use gossipnet_core::instances::GeneratorSpec as G;
    let specs = vec![
        G::FriendsEnemies {
            n: 5,
            enemies: vec![(0, 1), (2, 4)],
        },
        G::Bn { n: 9 },
        G::Grid { r: 3, c: 4 },
        G::PendantClique { core: 4 },
        G::TwinCliques,
        G::HubTriangles,
        G::GossipCycle { s: 6 },
        G::Marriage { n: 3, seed: 7 },
        G::StrongWeak,
        G::CNonexist { c: 5 },
        G::AsymNonexist,
        G::IsGadget {
            l_nodes: 5,
            l_edge_prob: 0.5,
            k: 3,
            seed: 1,
        },
        G::MatchedCliques { n: 8 },
        G::Random {
            n: 8,
            enemy_prob: 0.4,
            seed: 11,
        },
    ];
    for spec in specs {
        let built = spec.build().unwrap();
        let text = built.instance.to_json();
        let back = gossipnet_core::model::Instance::from_json(&text).unwrap();
        assert_eq!(back, built.instance, "spec {spec:?}");
        // Identical spec, identical bytes.
        assert_eq!(spec.build().unwrap().instance.to_json(), text);
    }
}
