//! Generators for the benchmark instance families and gadgets. Every
//! generator is deterministic: the same parameters (and seed, for the random
//! families) produce byte-identical instances.

use serde::{Deserialize, Serialize};

use crate::construct::PreferenceProfile;
use crate::model::{Instance, Network, Utility};
use crate::rng::SplitMix64;
use crate::stability::Defection;
use crate::{Error, Result};

fn symmetric_with_enemies(
    n: usize,
    is_enemy: impl Fn(usize, usize) -> bool,
) -> Result<Instance> {
    Instance::from_fn(n, true, |i, j| {
        let (a, b) = (i.min(j), i.max(j));
        if is_enemy(a, b) {
            Utility::NegInf
        } else {
            Utility::ONE
        }
    })
}

/// Symmetric `{-inf, 1}` instance: everyone friends except the listed pairs.
pub fn friends_enemies(n: usize, enemy_pairs: &[(usize, usize)]) -> Result<Instance> {
    for &(a, b) in enemy_pairs {
        if a >= n || b >= n {
            return Err(Error::AgentOutOfRange { index: a.max(b), n });
        }
        if a == b {
            return Err(Error::SelfPair { i: a });
        }
    }
    let normalized: Vec<(usize, usize)> = enemy_pairs
        .iter()
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    symmetric_with_enemies(n, |a, b| normalized.contains(&(a, b)))
}

// ---------------------------------------------------------------------------
// Tiered bipartite family
// ---------------------------------------------------------------------------

/// Tier of index `i` (1-based) among `1..=n`: the unique `t >= 1` with
/// `n/3^t < i <= n/3^(t-1)`, computed exactly in integers.
fn tier(n: usize, i: usize) -> usize {
    let mut t = 1usize;
    let mut pow = 3usize; // 3^t
    loop {
        if i * pow > n {
            return t;
        }
        t += 1;
        pow = pow.saturating_mul(3);
    }
}

/// The fragmentation family on 2n agents `x_1..x_n, y_1..y_n`: indices are
/// split into geometric tiers `(n/3^t, n/3^(t-1)]`, and `x_a` conflicts with
/// `y_b` exactly when `a` and `b` lie in different tiers (all x–x and y–y
/// pairs are friendly). Each tier's x's and y's together form the unique
/// maximum independent set of the remaining conflict graph, so peeling
/// removes one tier at a time and any fully stable network must keep every
/// tier as its own component — logarithmically many in n.
///
/// Agent layout: `x_i` is index `i-1`, `y_j` is index `n+j-1`.
pub fn tiered_bipartite(n: usize) -> Result<Instance> {
    if n < 3 {
        return Err(Error::BadGeneratorParams(
            "tiered bipartite family needs n >= 3".into(),
        ));
    }
    let tiers: Vec<usize> = (1..=n).map(|i| tier(n, i)).collect();
    symmetric_with_enemies(2 * n, |a, b| {
        // a < b; conflict only for x–y pairs in different tiers.
        if a < n && b >= n {
            tiers[a] != tiers[b - n]
        } else {
            false
        }
    })
}

/// The tier blocks of [`tiered_bipartite`], outermost first: block `t` holds
/// `{x_i, y_i : n/3^(t+1) < i <= n/3^t}` in agent indices.
pub fn tiered_bipartite_blocks(n: usize) -> Vec<Vec<usize>> {
    let mut by_tier: Vec<Vec<usize>> = Vec::new();
    for i in 1..=n {
        let t = tier(n, i);
        while by_tier.len() < t {
            by_tier.push(Vec::new());
        }
        by_tier[t - 1].push(i - 1);
        by_tier[t - 1].push(n + i - 1);
    }
    for block in &mut by_tier {
        block.sort_unstable();
    }
    by_tier
}

// ---------------------------------------------------------------------------
// Grid family
// ---------------------------------------------------------------------------

/// `r*c` agents at grid coordinates; same-row and same-column pairs are
/// friends, everything else enemies. Agent `(i, j)` is index `i*c + j`.
pub fn grid(r: usize, c: usize) -> Result<Instance> {
    if r < 2 || c < 2 {
        return Err(Error::BadGeneratorParams("grid needs r, c >= 2".into()));
    }
    symmetric_with_enemies(r * c, |a, b| {
        let (ra, ca) = (a / c, a % c);
        let (rb, cb) = (b / c, b % c);
        ra != rb && ca != cb
    })
}

// ---------------------------------------------------------------------------
// Figure gadgets
// ---------------------------------------------------------------------------

/// A clique of `core` mutual friends, each with one pendant partner; all
/// other pairs are enemies. Agents `0..core` are the clique, `core + t` is
/// the pendant of `t`. With `core = 4` the pendant pairs are the unique
/// component-count minimizer while the clique plus singletons is the unique
/// welfare maximizer; with `core = 3` the pendant pairs maximize welfare yet
/// admit an improving 3-defection by the clique agents.
pub fn pendant_clique(core: usize) -> Result<Instance> {
    if core < 3 {
        return Err(Error::BadGeneratorParams(
            "pendant clique needs a core of at least 3".into(),
        ));
    }
    symmetric_with_enemies(2 * core, |a, b| {
        let core_pair = a < core && b < core;
        let pendant_pair = b == core + a;
        !(core_pair || pendant_pair)
    })
}

/// Twelve agents in four triples `(x_i, y_i, z_i)`; the x's form a clique,
/// the y's form a clique, each triple forms a triangle, all else enemies.
/// Indices: `x_i = i`, `y_i = 4 + i`, `z_i = 8 + i`.
///
/// The minimum component count (four) is met only by the triples; welfare
/// peaks at twelve (x-clique + y-clique + z singletons, or the triples); and
/// a third 2-stable network — x-clique plus (y_i, z_i) pairs — sits at
/// welfare ten with five components.
pub fn twin_cliques_with_triples() -> Instance {
    symmetric_with_enemies(12, |a, b| {
        let x_pair = a < 4 && b < 4;
        let y_pair = (4..8).contains(&a) && (4..8).contains(&b);
        let same_triple = a % 4 == b % 4;
        !(x_pair || y_pair || same_triple)
    })
    .expect("fixed-size gadget")
}

/// Twelve agents `a_i, b_i, c_i` (i = 0..4): each triple forms a triangle and
/// the four a's form a hub clique; all else enemies. Indices: `a_i = i`,
/// `b_i = 4 + i`, `c_i = 8 + i`.
///
/// The four triangles maximize welfare (twelve) but the a's can jointly
/// defect to their hub; the hub plus the (b_i, c_i) pairs is the unique
/// 4-stable network, at welfare ten.
pub fn hub_clique_with_triangles() -> Instance {
    symmetric_with_enemies(12, |a, b| {
        let hub_pair = a < 4 && b < 4;
        let same_triple = a % 4 == b % 4;
        !(hub_pair || same_triple)
    })
    .expect("fixed-size gadget")
}

// ---------------------------------------------------------------------------
// Best-response cycle gadget
// ---------------------------------------------------------------------------

/// Everything needed to replay a scripted best-response run.
#[derive(Clone, Debug)]
pub struct CycleGadget {
    pub instance: Instance,
    pub start: Network,
    pub schedule: Vec<Defection>,
    /// Index of the hub agent `e` (the s-clique occupies `0..s_size`).
    pub hub: usize,
}

/// The cycling gadget: a core clique `s` (agents `0..s_size`), satellite
/// agents `a, b, c, d` and a hub `e`. Friendships: all of `s`; `e` with all
/// of `s` and with each satellite; `a–b`; `c–d`; `a` and `c` with all of `s`.
/// Everything else (notably `b` and `d` against `s`, and all other satellite
/// pairs) is enemies.
///
/// From the start network — the clique on `s ∪ {e}` plus edges `(a,e)` and
/// `(c,d)` — the six scripted pair-and-drop moves each strictly improve both
/// participants, yet the sixth returns the network to its exact start.
pub fn best_response_cycle(s_size: usize) -> Result<CycleGadget> {
    if s_size < 2 {
        return Err(Error::BadGeneratorParams(
            "cycle gadget needs a core clique of at least 2".into(),
        ));
    }
    let s = s_size;
    let (a, b, c, d, e) = (s, s + 1, s + 2, s + 3, s + 4);
    let n = s + 5;
    let instance = Instance::from_fn(n, true, |i, j| {
        let (lo, hi) = (i.min(j), i.max(j));
        let friendly = if hi < s {
            true // inside the core clique
        } else if lo < s {
            hi == e || hi == a || hi == c // core is friendly with e, a, c
        } else {
            // Satellite/hub pairs: e likes everyone, plus a–b and c–d.
            lo == e
                || hi == e
                || (lo, hi) == (a, b)
                || (lo, hi) == (c, d)
        };
        if friendly {
            Utility::ONE
        } else {
            Utility::NegInf
        }
    })?;

    let mut start = Network::empty(n);
    for i in 0..s {
        for j in i + 1..s {
            start.add_edge(i, j)?;
        }
        start.add_edge(i, e)?;
    }
    start.add_edge(a, e)?;
    start.add_edge(c, d)?;

    let core: Vec<usize> = (0..s).collect();
    let schedule = vec![
        // e and c link up; e drops a, keeps the core; c keeps d.
        Defection::new(vec![c, e], vec![core.clone(), vec![d]]),
        // d bails out of the core-heavy component.
        Defection::new(vec![d], vec![]),
        // the two stranded singletons a and b pair up.
        Defection::new(vec![a, b], vec![]),
        // e and a link up; e drops c, keeps the core; a keeps b.
        Defection::new(vec![a, e], vec![core.clone(), vec![b]]),
        // b bails out.
        Defection::new(vec![b], vec![]),
        // c and d pair up again: back to the start.
        Defection::new(vec![c, d], vec![]),
    ];

    Ok(CycleGadget {
        instance,
        start,
        schedule,
        hub: e,
    })
}

// ---------------------------------------------------------------------------
// Marriage encoding
// ---------------------------------------------------------------------------

/// Encode a stable-marriage profile as a game: same-gender pairs are enemies
/// and person `i` values partner `j` at `1 + n - p` where `p` is `j`'s
/// position on `i`'s list. Men are agents `0..n`, women `n..2n`. The
/// instance is asymmetric in general.
pub fn marriage_instance(profile: &PreferenceProfile) -> Instance {
    let n = profile.n();
    Instance::from_fn(2 * n, false, |i, j| {
        let i_man = i < n;
        let j_man = j < n;
        if i_man == j_man {
            return Utility::NegInf;
        }
        let value = if i_man {
            1 + n - profile.man_rank(i, j - n)
        } else {
            1 + n - profile.woman_rank(i - n, j)
        };
        Utility::Finite(value as i64)
    })
    .expect("rank utilities stay in range")
}

/// Decode the blocks of a clique partition of a marriage instance back into
/// a matching, when every block is a man–woman pair.
pub fn decode_matching(n: usize, blocks: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut pairs = vec![usize::MAX; n];
    for block in blocks {
        match block.as_slice() {
            [a, b] if *a < n && *b >= n => pairs[*a] = *b - n,
            _ => return None,
        }
    }
    if pairs.contains(&usize::MAX) {
        None
    } else {
        Some(pairs)
    }
}

// ---------------------------------------------------------------------------
// Nonexistence gadgets
// ---------------------------------------------------------------------------

/// Four agents: two strong ties (value 5 = n + 1) binding 0–1 and 2–3, one
/// enemy pair 1–3, weak ties elsewhere. Each strong pair must share a
/// component, the enemies force the pairs apart, and then 0 and 2 profitably
/// link up — so no 2-stable network exists.
pub fn strong_weak_ties() -> Instance {
    Instance::from_fn(4, true, |i, j| {
        let p = (i.min(j), i.max(j));
        if p == (0, 1) || p == (2, 3) {
            Utility::Finite(5)
        } else if p == (1, 3) {
            Utility::NegInf
        } else {
            Utility::ONE
        }
    })
    .expect("fixed-size gadget")
}

/// Four agents `w1 m1 w2 m2` = `0 1 2 3` with `u(w1,m1) = u(w2,m2) = c`,
/// `u(m1,m2) = -inf` and 1 elsewhere. For c > 4 the strong pairs must stay
/// together yet apart, and the w's then want to link: no 2-stable network.
pub fn strong_pairs_nonexistence(c: i64) -> Result<Instance> {
    Instance::from_fn(4, true, |i, j| {
        let p = (i.min(j), i.max(j));
        if p == (0, 1) || p == (2, 3) {
            Utility::Finite(c)
        } else if p == (1, 3) {
            Utility::NegInf
        } else {
            Utility::ONE
        }
    })
}

/// Four agents `x v1 v2 v3` = `0 1 2 3` with one-directional `-inf` around
/// the v-cycle (`u[v1][v2] = u[v2][v3] = u[v3][v1] = -inf`) and 1 for every
/// other ordered pair. No 2-stable network exists despite all utilities
/// lying in `{-inf, 1}`, because the instance is asymmetric.
pub fn asymmetric_nonexistence() -> Instance {
    Instance::from_fn(4, false, |i, j| {
        if (i, j) == (1, 2) || (i, j) == (2, 3) || (i, j) == (3, 1) {
            Utility::NegInf
        } else {
            Utility::ONE
        }
    })
    .expect("fixed-size gadget")
}

// ---------------------------------------------------------------------------
// Stability-testing gadget
// ---------------------------------------------------------------------------

/// Reduction gadget from independent set to k-stability testing: every node
/// `x_i` of `l` gets `k - 2` private friends (friendly with each other and
/// `x_i`, enemies with everyone else); edges of `l` become enemy pairs,
/// non-edges friendly pairs. The candidate network groups each `x_i` with
/// its private friends into a (k-1)-clique. That candidate admits an
/// improving ≤k-defection exactly when `l` has an independent set of k
/// nodes. Layout: `x_i` is agent `i`, the privates of `x_i` are agents
/// `m + i*(k-2) .. m + (i+1)*(k-2)` for `m = l.n()`.
pub fn stability_test_gadget(l: &Network, k: usize) -> Result<(Instance, Network)> {
    if k < 3 {
        return Err(Error::BadGeneratorParams(
            "stability gadget needs k >= 3".into(),
        ));
    }
    let m = l.n();
    let privates = k - 2;
    let n = m + m * privates;
    let owner = |v: usize| -> Option<usize> {
        (v >= m).then(|| (v - m) / privates)
    };
    let instance = symmetric_with_enemies(n, |a, b| match (owner(a), owner(b)) {
        (None, None) => l.has_edge(a, b),
        (Some(oa), Some(ob)) => oa != ob,
        (None, Some(ob)) => a != ob,
        (Some(oa), None) => b != oa,
    })?;
    let mut blocks = Vec::with_capacity(m);
    for i in 0..m {
        let mut block = vec![i];
        block.extend(m + i * privates..m + (i + 1) * privates);
        blocks.push(block);
    }
    let candidate = crate::model::CliquePartition::from_blocks(n, blocks)?.to_network();
    Ok((instance, candidate))
}

// ---------------------------------------------------------------------------
// Price-of-anarchy family
// ---------------------------------------------------------------------------

/// Two friendly cliques of size `n/2` (agents `0..n/2` and `n/2..n`) joined
/// by friendly ties `i — n/2 + i` for i >= 1; all other cross pairs,
/// including the leftover `0 — n/2`, are enemies. The cross matching (pairs
/// plus two singletons) is 2-stable at welfare `n/2 - 1`, while the two
/// cliques realize welfare `(n/2)(n/2 - 1)` — a factor n/2 gap.
pub fn matched_cliques(n: usize) -> Result<Instance> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::BadGeneratorParams(
            "matched cliques need an even n >= 4".into(),
        ));
    }
    let half = n / 2;
    symmetric_with_enemies(n, |a, b| {
        let same_side = (a < half) == (b < half);
        if same_side {
            false
        } else {
            !(b == half + a && a >= 1)
        }
    })
}

/// The 2-stable matching partition of [`matched_cliques`].
pub fn matched_cliques_matching(n: usize) -> Vec<Vec<usize>> {
    let half = n / 2;
    let mut blocks = vec![vec![0], vec![half]];
    for i in 1..half {
        blocks.push(vec![i, half + i]);
    }
    blocks
}

// ---------------------------------------------------------------------------
// Random instances
// ---------------------------------------------------------------------------

/// Random symmetric `{-inf, 1}` instance: each pair is an enemy pair
/// independently with probability `enemy_probability`.
pub fn random_instance(n: usize, enemy_probability: f64, seed: u64) -> Result<Instance> {
    if !(0.0..=1.0).contains(&enemy_probability) {
        return Err(Error::BadGeneratorParams(
            "enemy probability must lie in [0, 1]".into(),
        ));
    }
    let mut rng = SplitMix64::new(seed);
    let mut enemy = vec![false; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let flip = rng.next_f64() < enemy_probability;
            enemy[i * n + j] = flip;
        }
    }
    symmetric_with_enemies(n, |a, b| enemy[a * n + b])
}

// ---------------------------------------------------------------------------
// CLI-facing generator specs
// ---------------------------------------------------------------------------

/// A named, parameterized generator invocation; the same spec always builds
/// identical artifacts.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    FriendsEnemies { n: usize, enemies: Vec<(usize, usize)> },
    Bn { n: usize },
    Grid { r: usize, c: usize },
    PendantClique { core: usize },
    TwinCliques,
    HubTriangles,
    GossipCycle { s: usize },
    Marriage { n: usize, seed: u64 },
    StrongWeak,
    CNonexist { c: i64 },
    AsymNonexist,
    IsGadget { l_nodes: usize, l_edge_prob: f64, k: usize, seed: u64 },
    MatchedCliques { n: usize },
    Random { n: usize, enemy_prob: f64, seed: u64 },
}

/// What a generator produced: always an instance, sometimes a distinguished
/// network and a move schedule.
#[derive(Clone, Debug)]
pub struct GeneratedArtifacts {
    pub instance: Instance,
    pub network: Option<Network>,
    pub schedule: Option<Vec<Defection>>,
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<GeneratedArtifacts> {
        let plain = |instance: Instance| GeneratedArtifacts {
            instance,
            network: None,
            schedule: None,
        };
        Ok(match self {
            GeneratorSpec::FriendsEnemies { n, enemies } => plain(friends_enemies(*n, enemies)?),
            GeneratorSpec::Bn { n } => plain(tiered_bipartite(*n)?),
            GeneratorSpec::Grid { r, c } => plain(grid(*r, *c)?),
            GeneratorSpec::PendantClique { core } => plain(pendant_clique(*core)?),
            GeneratorSpec::TwinCliques => plain(twin_cliques_with_triples()),
            GeneratorSpec::HubTriangles => plain(hub_clique_with_triangles()),
            GeneratorSpec::GossipCycle { s } => {
                let gadget = best_response_cycle(*s)?;
                GeneratedArtifacts {
                    instance: gadget.instance,
                    network: Some(gadget.start),
                    schedule: Some(gadget.schedule),
                }
            }
            GeneratorSpec::Marriage { n, seed } => {
                plain(marriage_instance(&PreferenceProfile::random(*n, *seed)))
            }
            GeneratorSpec::StrongWeak => plain(strong_weak_ties()),
            GeneratorSpec::CNonexist { c } => plain(strong_pairs_nonexistence(*c)?),
            GeneratorSpec::AsymNonexist => plain(asymmetric_nonexistence()),
            GeneratorSpec::IsGadget {
                l_nodes,
                l_edge_prob,
                k,
                seed,
            } => {
                let l = random_graph(*l_nodes, *l_edge_prob, *seed)?;
                let (instance, candidate) = stability_test_gadget(&l, *k)?;
                GeneratedArtifacts {
                    instance,
                    network: Some(candidate),
                    schedule: None,
                }
            }
            GeneratorSpec::MatchedCliques { n } => {
                let instance = matched_cliques(*n)?;
                let network =
                    crate::model::CliquePartition::from_blocks(*n, matched_cliques_matching(*n))?
                        .to_network();
                GeneratedArtifacts {
                    instance,
                    network: Some(network),
                    schedule: None,
                }
            }
            GeneratorSpec::Random { n, enemy_prob, seed } => {
                plain(random_instance(*n, *enemy_prob, *seed)?)
            }
        })
    }
}

/// Erdős–Rényi style random simple graph, deterministic under seed.
pub fn random_graph(n: usize, edge_prob: f64, seed: u64) -> Result<Network> {
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::BadGeneratorParams(
            "edge probability must lie in [0, 1]".into(),
        ));
    }
    let mut rng = SplitMix64::new(seed);
    let mut net = Network::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.next_f64() < edge_prob {
                net.add_edge(i, j)?;
            }
        }
    }
    Ok(net)
}
