//! Property tests for the model invariants: component/cliqueify coherence,
//! utility absorption and welfare bookkeeping, serialization round-trips.

use proptest::collection::vec;
use proptest::prelude::*;

use gossipnet_core::model::{node_utility, total_welfare, Instance, Network, Utility, Welfare};

fn network_on(n: usize) -> impl Strategy<Value = Network> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let count = pairs.len();
    vec(any::<bool>(), count).prop_map(move |flags| {
        let edges = pairs
            .iter()
            .zip(&flags)
            .filter(|(_, &f)| f)
            .map(|(&p, _)| p);
        Network::from_edges(n, edges).unwrap()
    })
}

fn friends_enemies_on(n: usize) -> impl Strategy<Value = Instance> {
    let count = n * (n - 1) / 2;
    vec(any::<bool>(), count).prop_map(move |flags| {
        let mut idx = 0;
        let mut enemy = vec![false; n * n];
        for i in 0..n {
            for j in i + 1..n {
                enemy[i * n + j] = flags[idx];
                enemy[j * n + i] = flags[idx];
                idx += 1;
            }
        }
        Instance::from_fn(n, true, |i, j| {
            if enemy[i * n + j] {
                Utility::NegInf
            } else {
                Utility::ONE
            }
        })
        .unwrap()
    })
}

fn game_and_network(max_n: usize) -> impl Strategy<Value = (Instance, Network)> {
    (2..=max_n).prop_flat_map(|n| (friends_enemies_on(n), network_on(n)))
}

fn general_instance(n: usize) -> impl Strategy<Value = Instance> {
    let count = n * (n - 1);
    vec(prop_oneof![3 => -20i64..=20, 1 => Just(i64::MIN)], count).prop_map(move |vals| {
        let mut it = vals.into_iter();
        let mut table = vec![Utility::ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let v = it.next().unwrap();
                    table[i * n + j] = if v == i64::MIN {
                        Utility::NegInf
                    } else {
                        Utility::Finite(v)
                    };
                }
            }
        }
        Instance::from_fn(n, false, |i, j| table[i * n + j]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cliqueify_preserves_components((_inst, net) in game_and_network(12)) {
        prop_assert_eq!(net.cliqueify().components(), net.components());
    }

    #[test]
    fn utilities_depend_only_on_components((inst, net) in game_and_network(9)) {
        let cl = net.cliqueify();
        for i in 0..net.n() {
            prop_assert_eq!(node_utility(&inst, &net, i), node_utility(&inst, &cl, i));
        }
    }

    #[test]
    fn neg_inf_utility_iff_enemy_in_component((inst, net) in game_and_network(9)) {
        let parts = net.components();
        for i in 0..net.n() {
            let has_enemy = parts
                .block_containing(i)
                .iter()
                .any(|&j| j != i && inst.utility(i, j).is_neg_inf());
            prop_assert_eq!(node_utility(&inst, &net, i).is_neg_inf(), has_enemy);
        }
    }

    #[test]
    fn welfare_is_half_the_utility_sum_when_finite((inst, net) in game_and_network(9)) {
        let w = total_welfare(&inst, &net);
        let utilities: Vec<Utility> =
            (0..net.n()).map(|i| node_utility(&inst, &net, i)).collect();
        if utilities.iter().all(|u| !u.is_neg_inf()) {
            let sum: i64 = utilities.iter().map(|u| u.as_finite().unwrap()).sum();
            prop_assert_eq!(w, Welfare::Halves(sum));
        } else {
            prop_assert!(w.is_neg_inf());
        }
    }

    #[test]
    fn instance_json_round_trip(inst in general_instance(6)) {
        let text = inst.to_json();
        let back = Instance::from_json(&text).unwrap();
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn network_json_round_trip((_inst, net) in game_and_network(10)) {
        let text = net.to_json();
        let back = Network::from_json(&text).unwrap();
        prop_assert_eq!(back, net);
    }
}
