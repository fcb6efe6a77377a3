//! Exact defection search and k-stability verification.
//!
//! A defection by a participant set `S` (1 ≤ |S| ≤ k) forms all pairwise
//! links inside `S` while every member drops an arbitrary subset of its other
//! links. Because utilities depend only on components, the reachable outcomes
//! are exactly: `S` together with any subset of the *residual components* of
//! the network with all `S`-incident edges removed, provided each attached
//! component contains an original neighbor of `S` (one kept link suffices to
//! stay connected to it). That attachment view collapses the exponential
//! edge-subset search to a component-subset search; its equivalence to the
//! literal edge-subset semantics is exercised by brute force in the tests.

use serde::{Deserialize, Serialize};

use crate::exec::{self, ExecMode};
use crate::model::{utility_with_block, CliquePartition, Instance, Network, Utility};
use crate::partition;
use crate::{Error, Result, SolverConfig};

use std::ops::ControlFlow;

/// One strategic deviation: the participants plus the residual components
/// they stay attached to.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Defection {
    pub participants: Vec<usize>,
    #[serde(rename = "attach")]
    pub attachments: Vec<Vec<usize>>,
}

impl Defection {
    pub fn new(mut participants: Vec<usize>, mut attachments: Vec<Vec<usize>>) -> Defection {
        participants.sort_unstable();
        for a in &mut attachments {
            a.sort_unstable();
        }
        attachments.sort();
        Defection {
            participants,
            attachments,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AgentDelta {
    pub agent: usize,
    pub before: Utility,
    pub after: Utility,
}

/// A validated improving defection: every participant strictly gains.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DefectionReport {
    #[serde(flatten)]
    pub defection: Defection,
    pub utilities: Vec<AgentDelta>,
}

impl DefectionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// Connected components of `net` after removing every edge incident to `s`,
/// restricted to the non-participants. Canonically ordered by smallest member.
pub fn residual_components(net: &Network, s: &[usize]) -> Vec<Vec<usize>> {
    let n = net.n();
    let mut in_s = vec![false; n];
    for &v in s {
        in_s[v] = true;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for (a, b) in net.edges() {
        if !in_s[a] && !in_s[b] {
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut index_of_root = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for (v, &skip) in in_s.iter().enumerate() {
        if skip {
            continue;
        }
        let root = find(&mut parent, v);
        if index_of_root[root] == usize::MAX {
            index_of_root[root] = comps.len();
            comps.push(Vec::new());
        }
        comps[index_of_root[root]].push(v);
    }
    comps
}

/// Apply a defection: the participants form all pairwise links among
/// themselves, keep their original links into each attached residual
/// component, and drop their links to everything else. The result is the
/// literal post-defection network — unattached structure is untouched — so a
/// scripted sequence of defections can walk through (and return to) exact
/// edge-level states. Its components are `S ∪ (attached components)` plus the
/// unattached residual components.
pub fn apply_defection(net: &Network, d: &Defection) -> Result<Network> {
    if d.participants.is_empty() {
        return Err(Error::EmptyDefection);
    }
    for &v in &d.participants {
        if v >= net.n() {
            return Err(Error::AgentOutOfRange {
                index: v,
                n: net.n(),
            });
        }
    }
    let n = net.n();
    let resid = residual_components(net, &d.participants);
    let mut used = vec![false; resid.len()];
    // comp_of[v] = residual component index of non-participant v.
    let mut comp_of = vec![usize::MAX; n];
    for (ci, comp) in resid.iter().enumerate() {
        for &v in comp {
            comp_of[v] = ci;
        }
    }
    for (ai, attach) in d.attachments.iter().enumerate() {
        let mut sorted = attach.clone();
        sorted.sort_unstable();
        let pos = resid
            .iter()
            .position(|c| *c == sorted)
            .ok_or(Error::BadAttachment { index: ai })?;
        if used[pos] || !component_adjacent(net, &d.participants, &resid[pos]) {
            return Err(Error::BadAttachment { index: ai });
        }
        used[pos] = true;
    }
    let mut in_s = vec![false; n];
    for &v in &d.participants {
        in_s[v] = true;
    }
    let mut out = Network::empty(n);
    for (a, b) in net.edges() {
        let keep = match (in_s[a], in_s[b]) {
            (false, false) => true,
            (true, true) => true, // re-added below anyway
            (true, false) => used[comp_of[b]],
            (false, true) => used[comp_of[a]],
        };
        if keep {
            out.add_edge(a, b)?;
        }
    }
    for (i, &a) in d.participants.iter().enumerate() {
        for &b in &d.participants[i + 1..] {
            out.add_edge(a, b)?;
        }
    }
    Ok(out)
}

fn component_adjacent(net: &Network, s: &[usize], comp: &[usize]) -> bool {
    comp.iter().any(|&v| s.iter().any(|&p| net.has_edge(p, v)))
}

/// Search for a defection of at most `k` participants in which every
/// participant strictly improves. Deterministic order: participant sets by
/// ascending size then lexicographically, attachment subsets by ascending
/// popcount then ascending bitmask over the canonically ordered adjacent
/// components. Parallel execution preserves the same first witness.
pub fn find_improving_defection(
    inst: &Instance,
    net: &Network,
    k: usize,
) -> Option<DefectionReport> {
    find_improving_defection_with(inst, net, k, ExecMode::default())
}

pub fn find_improving_defection_with(
    inst: &Instance,
    net: &Network,
    k: usize,
    mode: ExecMode,
) -> Option<DefectionReport> {
    let n = inst.n();
    let base = net.components();
    let before: Vec<Utility> = (0..n)
        .map(|i| utility_with_block(inst, base.block_containing(i), i))
        .collect();
    for size in 1..=k.min(n) {
        // A participant set containing a conflicting pair can never have all
        // members strictly improve (the hurt side lands on -inf), so only
        // conflict-free sets are generated.
        let sets = conflict_free_subsets(inst, n, size);
        // Scheduling overhead dwarfs the work on short lists.
        let mode = if sets.len() < 512 {
            ExecMode::Sequential
        } else {
            mode
        };
        let hit = exec::find_map_first(mode, &sets, |s| {
            improving_defection_for_set(inst, net, &before, s)
        });
        if hit.is_some() {
            return hit;
        }
    }
    None
}

/// All conflict-free participant sets of the given size, in lexicographic
/// order of their sorted member sequences.
fn conflict_free_subsets(inst: &Instance, n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(
        inst: &Instance,
        n: usize,
        size: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        let remaining = size - cur.len();
        for v in start..=n.saturating_sub(remaining) {
            if cur.iter().any(|&p| inst.conflict(p, v)) {
                continue;
            }
            cur.push(v);
            rec(inst, n, size, v + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    rec(inst, n, size, 0, &mut cur, &mut out);
    out
}

/// Adjacent residual components worth enumerating over, with per-participant
/// marginals. A component that sits at `-inf` for some participant can never
/// appear in an improving defection, and one that is non-positive for every
/// participant can never appear in the *first* improving attachment subset
/// (removing it from a witness yields an earlier, still-improving witness),
/// so both kinds are dropped up front. This keeps the subset enumeration
/// honest about its search order while shrinking it to the components that
/// can actually matter.
struct AttachmentCandidates {
    components: Vec<Vec<usize>>,
    /// `marginal[p][c]`: finite utility participant `p` draws from component `c`.
    marginal: Vec<Vec<i64>>,
}

fn attachment_candidates(
    inst: &Instance,
    net: &Network,
    s: &[usize],
) -> AttachmentCandidates {
    let resid = residual_components(net, s);
    let mut components = Vec::new();
    let mut marginal: Vec<Vec<i64>> = vec![Vec::new(); s.len()];
    'comps: for comp in resid {
        if !component_adjacent(net, s, &comp) {
            continue;
        }
        let mut margs = Vec::with_capacity(s.len());
        let mut any_positive = false;
        for &p in s {
            match utility_with_block(inst, &comp, p) {
                Utility::NegInf => continue 'comps,
                Utility::Finite(v) => {
                    any_positive |= v > 0;
                    margs.push(v);
                }
            }
        }
        if any_positive {
            for (p, &v) in margs.iter().enumerate() {
                marginal[p].push(v);
            }
            components.push(comp);
        }
    }
    AttachmentCandidates {
        components,
        marginal,
    }
}

fn improving_defection_for_set(
    inst: &Instance,
    net: &Network,
    before: &[Utility],
    s: &[usize],
) -> Option<DefectionReport> {
    let cand = attachment_candidates(inst, net, s);
    let m = cand.components.len();

    // Utility each participant draws from the other participants.
    let in_s: Vec<Utility> = s.iter().map(|&i| utility_with_block(inst, s, i)).collect();

    // Upper bound per participant: only profitable components attached. If
    // even that cannot strictly beat the status quo, no subset will.
    for (si, &agent) in s.iter().enumerate() {
        let mut best = in_s[si];
        for c in 0..m {
            if cand.marginal[si][c] > 0 {
                best = best.plus(Utility::Finite(cand.marginal[si][c]));
            }
        }
        if best <= before[agent] {
            return None;
        }
    }

    let mut found = None;
    for_each_mask_by_popcount(m, |mask| {
        let mut after = Vec::with_capacity(s.len());
        for (si, &agent) in s.iter().enumerate() {
            let mut total = in_s[si];
            for c in 0..m {
                if mask >> c & 1 == 1 {
                    total = total.plus(Utility::Finite(cand.marginal[si][c]));
                }
            }
            if total <= before[agent] {
                return ControlFlow::Continue(());
            }
            after.push(total);
        }
        let attachments: Vec<Vec<usize>> = (0..m)
            .filter(|c| mask >> c & 1 == 1)
            .map(|c| cand.components[c].clone())
            .collect();
        let utilities = s
            .iter()
            .zip(&after)
            .map(|(&agent, &aft)| AgentDelta {
                agent,
                before: before[agent],
                after: aft,
            })
            .collect();
        found = Some(DefectionReport {
            defection: Defection {
                participants: s.to_vec(),
                attachments,
            },
            utilities,
        });
        ControlFlow::Break(())
    });
    found
}

/// Every improving defection of up to `k` participants, in the search order
/// of [`find_improving_defection`] but without stopping at the first hit and
/// with every improving attachment subset of each participant set included.
/// Intended for small instances (best-response move selection).
pub fn improving_defections(inst: &Instance, net: &Network, k: usize) -> Vec<DefectionReport> {
    let n = inst.n();
    let base = net.components();
    let before: Vec<Utility> = (0..n)
        .map(|i| utility_with_block(inst, base.block_containing(i), i))
        .collect();
    let mut out = Vec::new();
    for size in 1..=k.min(n) {
        for s in conflict_free_subsets(inst, n, size) {
            collect_improving_for_set(inst, net, &before, &s, &mut out);
        }
    }
    out
}

fn collect_improving_for_set(
    inst: &Instance,
    net: &Network,
    before: &[Utility],
    s: &[usize],
    out: &mut Vec<DefectionReport>,
) {
    let cand = attachment_candidates(inst, net, s);
    let m = cand.components.len();
    let in_s: Vec<Utility> = s.iter().map(|&i| utility_with_block(inst, s, i)).collect();
    for_each_mask_by_popcount(m, |mask| {
        let mut after = Vec::with_capacity(s.len());
        for (si, &agent) in s.iter().enumerate() {
            let mut total = in_s[si];
            for c in 0..m {
                if mask >> c & 1 == 1 {
                    total = total.plus(Utility::Finite(cand.marginal[si][c]));
                }
            }
            if total <= before[agent] {
                return ControlFlow::Continue(());
            }
            after.push(total);
        }
        out.push(DefectionReport {
            defection: Defection {
                participants: s.to_vec(),
                attachments: (0..m)
                    .filter(|c| mask >> c & 1 == 1)
                    .map(|c| cand.components[c].clone())
                    .collect(),
            },
            utilities: s
                .iter()
                .zip(&after)
                .map(|(&agent, &aft)| AgentDelta {
                    agent,
                    before: before[agent],
                    after: aft,
                })
                .collect(),
        });
        ControlFlow::Continue(())
    });
}

/// Visit attachment masks over `m` components in deterministic order:
/// ascending popcount, ties by ascending value. Small fan-outs materialize
/// and sort; larger ones are walked lazily by combination enumeration, so
/// adversarial inputs cost time rather than memory.
fn for_each_mask_by_popcount(m: usize, mut f: impl FnMut(u64) -> ControlFlow<()>) {
    if m <= 20 {
        let mut masks: Vec<u64> = (0..1u64 << m).collect();
        masks.sort_by_key(|&x| (x.count_ones(), x));
        for mask in masks {
            if f(mask).is_break() {
                return;
            }
        }
        return;
    }
    // Lazy: for each popcount, walk the masks in ascending numeric order via
    // the standard next-combination bit trick.
    for ones in 0..=m {
        if ones == 0 {
            if f(0).is_break() {
                return;
            }
            continue;
        }
        let mut mask: u64 = (1u64 << ones) - 1;
        let limit: u64 = 1u64 << m;
        while mask < limit {
            if f(mask).is_break() {
                return;
            }
            // Gosper's hack: next integer with the same popcount.
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            if r == 0 {
                break;
            }
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
}

/// `true` when no defection of up to `k` participants strictly improves all
/// its participants.
pub fn is_k_stable(inst: &Instance, net: &Network, k: usize) -> bool {
    find_improving_defection(inst, net, k).is_none()
}

/// Best single-agent deviation for `i`, in polynomial time: with only one
/// participant the component choices are independent, so keeping exactly the
/// residual components with strictly positive marginal utility is optimal.
pub fn best_unilateral_deviation(
    inst: &Instance,
    net: &Network,
    i: usize,
) -> Option<DefectionReport> {
    let before = crate::model::node_utility(inst, net, i);
    let s = [i];
    let resid = residual_components(net, &s);
    let mut attachments = Vec::new();
    let mut after = Utility::ZERO;
    for comp in &resid {
        if !component_adjacent(net, &s, comp) {
            continue;
        }
        let m = utility_with_block(inst, comp, i);
        if let Utility::Finite(v) = m {
            if v > 0 {
                after = after.plus(m);
                attachments.push(comp.clone());
            }
        }
    }
    if after > before {
        Some(DefectionReport {
            defection: Defection {
                participants: vec![i],
                attachments,
            },
            utilities: vec![AgentDelta {
                agent: i,
                before,
                after,
            }],
        })
    } else {
        None
    }
}

/// Validate a concrete defection against a network: every attachment must be
/// an adjacent residual component and every participant must strictly gain.
/// Returns the report, or the reason the move is invalid.
pub fn validate_defection(
    inst: &Instance,
    net: &Network,
    d: &Defection,
    step: usize,
) -> Result<DefectionReport> {
    let after_net = apply_defection(net, d)?;
    let base = net.components();
    let after_part = after_net.components();
    let mut utilities = Vec::with_capacity(d.participants.len());
    for &agent in &d.participants {
        let before = utility_with_block(inst, base.block_containing(agent), agent);
        let after = utility_with_block(inst, after_part.block_containing(agent), agent);
        if after <= before {
            return Err(Error::MoveNotImproving { step, agent });
        }
        utilities.push(AgentDelta {
            agent,
            before,
            after,
        });
    }
    Ok(DefectionReport {
        defection: d.clone(),
        utilities,
    })
}

/// Exhaustive stable-network existence oracle: enumerate every conflict-free
/// clique partition in canonical order and return the first k-stable one.
///
/// Completeness: utilities depend only on components, and the defections
/// available from a cliqueified network are a subset of those available from
/// any network with the same components, so a k-stable network exists iff a
/// k-stable clique partition does. Partitions with an internal conflict are
/// skipped because the agent at `-inf` always improves by deviating alone.
pub fn exists_stable_network(
    inst: &Instance,
    k: usize,
    cfg: &SolverConfig,
) -> Result<Option<Network>> {
    cfg.check_partition(inst.n())?;
    Ok(search_stable_partitions(inst, k, cfg, true)?
        .into_iter()
        .next())
}

/// All k-stable clique partitions, in canonical order.
pub fn enumerate_stable_networks(
    inst: &Instance,
    k: usize,
    cfg: &SolverConfig,
) -> Result<Vec<CliquePartition>> {
    cfg.check_partition(inst.n())?;
    let nets = search_stable_partitions(inst, k, cfg, false)?;
    Ok(nets.into_iter().map(|n| n.components()).collect())
}

fn search_stable_partitions(
    inst: &Instance,
    k: usize,
    cfg: &SolverConfig,
    first_only: bool,
) -> Result<Vec<Network>> {
    let n = inst.n();
    let conflicts = inst.conflict_graph();
    const PREFIX_DEPTH: usize = 6;

    if n <= PREFIX_DEPTH || cfg.exec == ExecMode::Sequential {
        let mut out = Vec::new();
        partition::for_each_partition(n, Some(&conflicts), &mut |assignment, _| {
            let net = CliquePartition::from_assignment(assignment).to_network();
            if find_improving_defection_with(inst, &net, k, ExecMode::Sequential).is_none() {
                out.push(net);
                if first_only {
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        });
        return Ok(out);
    }

    let prefixes = partition::partition_prefixes(n, Some(&conflicts), PREFIX_DEPTH);
    if first_only {
        let hit = exec::find_map_first(cfg.exec, &prefixes, |prefix| {
            let mut found = None;
            partition::for_each_completion(prefix, n, Some(&conflicts), &mut |assignment, _| {
                let net = CliquePartition::from_assignment(assignment).to_network();
                if find_improving_defection_with(inst, &net, k, ExecMode::Sequential).is_none() {
                    found = Some(net);
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            found
        });
        Ok(hit.into_iter().collect())
    } else {
        let chunks = exec::map_collect(cfg.exec, &prefixes, |prefix| {
            let mut local = Vec::new();
            partition::for_each_completion(prefix, n, Some(&conflicts), &mut |assignment, _| {
                let net = CliquePartition::from_assignment(assignment).to_network();
                if find_improving_defection_with(inst, &net, k, ExecMode::Sequential).is_none() {
                    local.push(net);
                }
                ControlFlow::Continue(())
            });
            local
        });
        Ok(chunks.into_iter().flatten().collect())
    }
}
