//! Brute-force validation of the attachment defection model against the
//! literal edge-subset semantics: a coalition forms all internal links while
//! every member keeps an arbitrary subset of its other links. The attachment
//! search must find an improving defection exactly when some literal
//! edge-subset choice improves every participant.

use gossipnet_core::model::{node_utility, CliquePartition, Instance, Network, Utility};
use gossipnet_core::stability::{
    apply_defection, find_improving_defection, residual_components, Defection,
};

struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn chance(&mut self, p: f64) -> bool {
        (self.next() >> 11) as f64 * (1.0 / (1u64 << 53) as f64) < p
    }

    fn below(&mut self, bound: u64) -> u64 {
        self.next() % bound
    }
}

fn random_friends_enemies(n: usize, p: f64, rng: &mut SplitMix) -> Instance {
    let mut enemy = vec![false; n * n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.chance(p) {
                enemy[i * n + j] = true;
                enemy[j * n + i] = true;
            }
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
}

fn random_clique_partition_network(n: usize, rng: &mut SplitMix) -> Network {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let choice = rng.below(blocks.len() as u64 + 1) as usize;
        if choice == blocks.len() {
            blocks.push(vec![v]);
        } else {
            blocks[choice].push(v);
        }
    }
    CliquePartition::from_blocks(n, blocks).unwrap().to_network()
}

fn subsets_of(items: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(1 << items.len());
    for mask in 0u32..1 << items.len() {
        out.push(
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect(),
        );
    }
    out
}

/// Literal semantics: enumerate every per-participant kept-edge choice and
/// report the smallest coalition size that admits an improving defection.
fn smallest_literal_improving_size(inst: &Instance, net: &Network, k: usize) -> Option<usize> {
    let n = inst.n();
    let before: Vec<Utility> = (0..n).map(|i| node_utility(inst, net, i)).collect();
    let mut sets = participant_sets(n, k);
    sets.sort_by_key(|s| s.len());
    for s in sets {
        // Per-participant neighbors outside the coalition.
        let keepable: Vec<Vec<usize>> = s
            .iter()
            .map(|&v| {
                net.neighbors(v)
                    .into_iter()
                    .filter(|u| !s.contains(u))
                    .collect()
            })
            .collect();
        let per_member: Vec<Vec<Vec<usize>>> =
            keepable.iter().map(|ns| subsets_of(ns)).collect();
        let mut choice = vec![0usize; s.len()];
        loop {
            // Build the post-defection network for this kept-edge choice.
            let mut edges: Vec<(usize, usize)> = net
                .edges()
                .filter(|&(a, b)| !s.contains(&a) && !s.contains(&b))
                .collect();
            for (i, &a) in s.iter().enumerate() {
                for &b in &s[i + 1..] {
                    edges.push((a, b));
                }
            }
            for (i, &v) in s.iter().enumerate() {
                for &kept in &per_member[i][choice[i]] {
                    edges.push((v, kept));
                }
            }
            let after_net = Network::from_edges(n, edges).unwrap();
            if s.iter()
                .all(|&v| node_utility(inst, &after_net, v) > before[v])
            {
                return Some(s.len());
            }
            // Advance the mixed-radix counter over kept-edge choices.
            let mut pos = 0;
            loop {
                if pos == s.len() {
                    break;
                }
                choice[pos] += 1;
                if choice[pos] < per_member[pos].len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == s.len() {
                break;
            }
        }
    }
    None
}

fn participant_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..1 << n {
        let size = mask.count_ones() as usize;
        if size <= k {
            out.push((0..n).filter(|&v| mask >> v & 1 == 1).collect());
        }
    }
    out
}

#[test]
fn attachment_search_matches_literal_edge_subsets() {
    let mut rng = SplitMix(0xDEC0DE);
    for trial in 0..30 {
        let n = 4 + rng.below(4) as usize; // 4..=7
        let inst = random_friends_enemies(n, 0.2 + 0.5 * (trial % 3) as f64 / 3.0, &mut rng);
        let net = random_clique_partition_network(n, &mut rng);
        let smallest = smallest_literal_improving_size(&inst, &net, 3);
        for k in 1..=3 {
            let literal = smallest.is_some_and(|s| s <= k);
            let attach = find_improving_defection(&inst, &net, k).is_some();
            assert_eq!(
                literal, attach,
                "trial {trial}, n {n}, k {k}: literal {literal} vs attachment {attach}"
            );
        }
    }
}

#[test]
fn applied_defections_realize_the_contracted_components() {
    // For every enumerable defection (participants + attached residual
    // components) the applied network's components must be exactly the new
    // merged block plus the unattached residual components.
    let mut rng = SplitMix(0xFACADE);
    for _ in 0..30 {
        let n = 4 + rng.below(5) as usize; // 4..=8
        let net = {
            // Random (not necessarily clique) network.
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.chance(0.35) {
                        edges.push((i, j));
                    }
                }
            }
            Network::from_edges(n, edges).unwrap()
        };
        for s_mask in 1u32..1 << n {
            if s_mask.count_ones() > 2 {
                continue;
            }
            let s: Vec<usize> = (0..n).filter(|&v| s_mask >> v & 1 == 1).collect();
            let resid = residual_components(&net, &s);
            let adjacent: Vec<Vec<usize>> = resid
                .iter()
                .filter(|c| c.iter().any(|&v| s.iter().any(|&p| net.has_edge(p, v))))
                .cloned()
                .collect();
            for attach_mask in 0u32..1 << adjacent.len() {
                let attachments: Vec<Vec<usize>> = adjacent
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| attach_mask >> i & 1 == 1)
                    .map(|(_, c)| c.clone())
                    .collect();
                let d = Defection::new(s.clone(), attachments.clone());
                let applied = apply_defection(&net, &d).unwrap();
                let mut merged: Vec<usize> = s.clone();
                for c in &attachments {
                    merged.extend(c.iter().copied());
                }
                merged.sort_unstable();
                let mut expected: Vec<Vec<usize>> = vec![merged];
                for c in &resid {
                    if !attachments.contains(c) {
                        expected.push(c.clone());
                    }
                }
                let expected = CliquePartition::from_blocks(n, expected).unwrap();
                assert_eq!(applied.components(), expected);
            }
        }
    }
}
