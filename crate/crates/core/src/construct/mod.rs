//! Constructive algorithms: maximum-independent-set peeling, polynomial
//! 2/3/4-stable dynamics, welfare-preserving repair, best-response runs and
//! the proposal algorithm for stable marriage.

mod dynamics;
mod matching;
mod mis;
mod potential;

pub use dynamics::{
    best_response_run, potential_dynamics, three_stable_from_optimal, two_stable_dynamics,
    Schedule, Trajectory,
};
pub use matching::{brute_force_stable_matchings, gale_shapley, has_blocking_pair, Matching,
    PreferenceProfile};
pub use mis::max_independent_set;
pub use potential::{
    additive_potential_audit, evaluate_potential, four_stable_closed_form, four_stable_potential,
    sum_of_powers, three_stable_closed_form, three_stable_potential, AdditivePotentialAudit,
    PotentialKind,
};

use crate::model::{CliquePartition, Instance, Network};
use crate::{Error, Result, SolverConfig};

/// Build a stable network by repeatedly carving a maximum independent set out
/// of the conflict graph and wiring it into a clique. The result is k-stable
/// for every k: whichever clique of the output forms first among a would-be
/// defecting set, that defector must abandon it entirely (everyone else in
/// the set conflicts with it), and a strictly larger conflict-free home would
/// contradict the maximality of the clique when it was carved.
///
/// Requires symmetric utilities in `{-inf, 1}`.
pub fn greedy_mis_peeling(inst: &Instance, cfg: &SolverConfig) -> Result<Network> {
    if !inst.is_friends_enemies() {
        return Err(Error::NotFriendsEnemies);
    }
    let h = inst.conflict_graph();
    cfg.check_mis(h.n())?;
    let mut remaining: Vec<usize> = (0..inst.n()).collect();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    while !remaining.is_empty() {
        let sub = h.induced(&remaining);
        let mis = max_independent_set_unchecked(&sub);
        let block: Vec<usize> = mis.iter().map(|&v| remaining[v]).collect();
        remaining.retain(|v| !block.contains(v));
        blocks.push(block);
    }
    Ok(CliquePartition::from_blocks(inst.n(), blocks)?.to_network())
}

pub(crate) use mis::max_independent_set_unchecked;
