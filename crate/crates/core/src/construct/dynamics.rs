//! Improvement dynamics over clique partitions: the polynomial 2-stable
//! sequence, potential-guided 3/4-stable dynamics, the welfare-preserving
//! 3-stable repair and general best-response runs.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::model::{
    total_welfare_of_partition, CliquePartition, Instance, Network, Utility,
};
use crate::stability::{
    apply_defection, find_improving_defection, improving_defections, validate_defection, Defection,
};
use crate::{Error, Result};

use super::potential::{evaluate_potential, PotentialKind};

/// A recorded run of a dynamic process. `moves[t]` transforms `states[t]`
/// into `states[t+1]`; `potentials[t]` is the potential of `states[t]`. The
/// partition dynamics store cliqueified states; best-response runs keep the
/// literal networks so that a script can return to its exact starting state.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub states: Vec<Network>,
    pub moves: Vec<Defection>,
    pub potentials: Vec<Utility>,
    pub cycle: Option<Cycle>,
    pub potential_kind: PotentialKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cycle {
    /// Index of the earlier state the final state repeats.
    pub first_visit: usize,
    pub length: usize,
}

impl Trajectory {
    pub fn final_network(&self) -> &Network {
        self.states.last().expect("trajectory has at least one state")
    }

    pub fn step_count(&self) -> usize {
        self.moves.len()
    }

    /// One JSON object per line: step index, network blocks, the move taken
    /// from this state (null for the last state) and the potential.
    pub fn to_jsonl(&self) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            step: usize,
            network: BlocksDto<'a>,
            #[serde(rename = "move")]
            mv: Option<&'a Defection>,
            potential: Utility,
        }
        #[derive(Serialize)]
        struct BlocksDto<'a> {
            n: usize,
            blocks: &'a [Vec<usize>],
        }
        let mut lines = Vec::with_capacity(self.states.len());
        let parts: Vec<CliquePartition> = self.states.iter().map(|s| s.components()).collect();
        for (t, part) in parts.iter().enumerate() {
            let line = Line {
                step: t,
                network: BlocksDto {
                    n: part.n(),
                    blocks: part.blocks(),
                },
                mv: self.moves.get(t),
                potential: self.potentials[t],
            };
            lines.push(serde_json::to_string(&line).expect("trajectory serialization cannot fail"));
        }
        lines.join("\n")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum Schedule {
    /// Pick the improving defection with the largest improvement at each
    /// step (rescues from `-inf` first, then total finite gain, ties by
    /// canonical search order).
    Auto,
    /// Apply exactly these moves, validating that each strictly improves all
    /// of its participants.
    Script(Vec<Defection>),
}

/// Polynomial 2-stable construction for symmetric `{-inf, 1}` utilities.
/// Starting from singletons, repeatedly move one agent `j` into a weakly
/// larger conflict-free block. Each move raises Σ size² by at least 2, so
/// at most n²/2 moves happen; when no move is left the network is 2-stable.
/// Scan order: smallest eligible `j`, then largest target block, ties by
/// canonical block order.
pub fn two_stable_dynamics(inst: &Instance) -> Result<Trajectory> {
    if !inst.is_friends_enemies() {
        return Err(Error::NotFriendsEnemies);
    }
    let n = inst.n();
    let mut part = CliquePartition::singletons(n);
    let mut states = vec![part.to_network()];
    let mut moves = Vec::new();
    let mut potentials = vec![evaluate_potential(PotentialKind::SumSquares, inst, &part)];
    let step_limit = n * n / 2 + 1;

    while let Some((j, target)) = next_two_stable_move(inst, &part) {
        let target_block = part.blocks()[target].clone();
        let anchor = target_block[0];
        let rest: Vec<usize> = target_block[1..].to_vec();
        let attachments = if rest.is_empty() { vec![] } else { vec![rest] };
        let mv = Defection::new(vec![j, anchor], attachments);
        let next = apply_defection(states.last().unwrap(), &mv)?.cliqueify();
        part = next.components();
        moves.push(mv);
        states.push(next);
        potentials.push(evaluate_potential(PotentialKind::SumSquares, inst, &part));
        if moves.len() > step_limit {
            return Err(Error::PotentialStalled { step: moves.len() });
        }
    }

    Ok(Trajectory {
        states,
        moves,
        potentials,
        cycle: None,
        potential_kind: PotentialKind::SumSquares,
    })
}

/// The next move of the 2-stable scan: agent `j` plus the index of a
/// conflict-free block at least as large as `j`'s own.
fn next_two_stable_move(inst: &Instance, part: &CliquePartition) -> Option<(usize, usize)> {
    for j in 0..part.n() {
        let own = part.block_index_of(j);
        let own_size = part.blocks()[own].len();
        let mut best: Option<(usize, usize)> = None; // (size, block index)
        for (bi, block) in part.blocks().iter().enumerate() {
            if bi == own || block.len() < own_size {
                continue;
            }
            if block.iter().any(|&i| inst.conflict(i, j)) {
                continue;
            }
            let candidate = (block.len(), bi);
            best = match best {
                None => Some(candidate),
                Some((sz, idx)) => {
                    if candidate.0 > sz || (candidate.0 == sz && candidate.1 < idx) {
                        Some(candidate)
                    } else {
                        Some((sz, idx))
                    }
                }
            };
        }
        if let Some((_, bi)) = best {
            return Some((j, bi));
        }
    }
    None
}

/// Potential-guided dynamics reaching a k-stable network for k ∈ {3, 4} on
/// symmetric `{-inf, 1}` utilities: starting from singletons, apply the
/// canonical improving ≤k-defection until none exists. The tabulated
/// potential strictly increases with every improving defection and is
/// polynomially bounded, so the walk terminates after polynomially many
/// steps; a non-increase is reported as an error rather than looped on.
pub fn potential_dynamics(inst: &Instance, k: usize) -> Result<Trajectory> {
    let kind = match k {
        3 => PotentialKind::ThreeStable,
        4 => PotentialKind::FourStable,
        _ => return Err(Error::UnsupportedBudget { k }),
    };
    if !inst.is_friends_enemies() {
        return Err(Error::NotFriendsEnemies);
    }
    let n = inst.n();
    let mut part = CliquePartition::singletons(n);
    let mut states = vec![part.to_network()];
    let mut moves = Vec::new();
    let mut potentials = vec![evaluate_potential(kind, inst, &part)];

    while let Some(report) = find_improving_defection(inst, states.last().unwrap(), k) {
        let next = apply_defection(states.last().unwrap(), &report.defection)?.cliqueify();
        part = next.components();
        let phi = evaluate_potential(kind, inst, &part);
        if phi <= *potentials.last().unwrap() {
            return Err(Error::PotentialStalled { step: moves.len() });
        }
        moves.push(report.defection);
        states.push(next);
        potentials.push(phi);
    }

    Ok(Trajectory {
        states,
        moves,
        potentials,
        cycle: None,
        potential_kind: kind,
    })
}

/// Repair a welfare-maximizing partition into a 3-stable network without
/// losing welfare: apply improving ≤3-defections until none remains. Along
/// the way Σ size³ strictly increases and total welfare never moves — a
/// strict welfare increase would contradict the claimed optimality of the
/// input and is reported as an error instead of being silently accepted.
pub fn three_stable_from_optimal(inst: &Instance, optimal: &CliquePartition) -> Result<Network> {
    if !inst.is_friends_enemies() {
        return Err(Error::NotFriendsEnemies);
    }
    let claimed = total_welfare_of_partition(inst, optimal);
    let mut net = optimal.to_network();
    let mut cubes = evaluate_potential(PotentialKind::SumCubes, inst, optimal);
    let mut step = 0;
    while let Some(report) = find_improving_defection(inst, &net, 3) {
        net = apply_defection(&net, &report.defection)?.cliqueify();
        let part = net.components();
        let welfare = total_welfare_of_partition(inst, &part);
        if welfare > claimed {
            return Err(Error::NotWelfareOptimal { step });
        }
        if welfare < claimed {
            return Err(Error::WelfareDropped { step });
        }
        let phi = evaluate_potential(PotentialKind::SumCubes, inst, &part);
        if phi <= cubes {
            return Err(Error::PotentialStalled { step });
        }
        cubes = phi;
        step += 1;
    }
    Ok(net)
}

/// Run best-response style dynamics from `start`, either with automatic move
/// selection among improving ≤2-defections or replaying a script. Repeated
/// component structures are detected and reported as a cycle. Scripted moves
/// are validated: a move that fails to strictly improve one of its
/// participants aborts the run naming that participant.
pub fn best_response_run(
    inst: &Instance,
    start: &Network,
    schedule: &Schedule,
    max_steps: usize,
    potential_kind: PotentialKind,
) -> Result<Trajectory> {
    let mut states = vec![start.clone()];
    let mut moves: Vec<Defection> = Vec::new();
    let mut potentials = vec![evaluate_potential(
        potential_kind,
        inst,
        &start.components(),
    )];
    let mut seen: HashMap<Network, usize> = HashMap::new();
    seen.insert(start.clone(), 0);
    let mut cycle = None;

    let mut advance = |states: &mut Vec<Network>,
                       moves: &mut Vec<Defection>,
                       potentials: &mut Vec<Utility>,
                       seen: &mut HashMap<Network, usize>,
                       mv: Defection|
     -> Result<bool> {
        let next = apply_defection(states.last().unwrap(), &mv)?;
        moves.push(mv);
        potentials.push(evaluate_potential(potential_kind, inst, &next.components()));
        states.push(next.clone());
        if let Some(&first_visit) = seen.get(&next) {
            cycle = Some(Cycle {
                first_visit,
                length: states.len() - 1 - first_visit,
            });
            return Ok(true);
        }
        seen.insert(next, states.len() - 1);
        Ok(false)
    };

    match schedule {
        Schedule::Script(script) => {
            for (step, mv) in script.iter().enumerate() {
                validate_defection(inst, states.last().unwrap(), mv, step)?;
                let repeated = advance(
                    &mut states,
                    &mut moves,
                    &mut potentials,
                    &mut seen,
                    mv.clone(),
                )?;
                // A script may deliberately walk through a repeated state;
                // keep applying its remaining moves.
                let _ = repeated;
            }
        }
        Schedule::Auto => {
            for _ in 0..max_steps {
                let candidates = improving_defections(inst, states.last().unwrap(), 2);
                let Some(best) = pick_best_response(&candidates) else {
                    break;
                };
                let repeated = advance(
                    &mut states,
                    &mut moves,
                    &mut potentials,
                    &mut seen,
                    best,
                )?;
                if repeated {
                    break;
                }
            }
        }
    }

    Ok(Trajectory {
        states,
        moves,
        potentials,
        cycle,
        potential_kind,
    })
}

/// Largest-improvement move: most participants rescued from `-inf` first,
/// then largest total finite gain, ties resolved by canonical search order.
fn pick_best_response(candidates: &[crate::stability::DefectionReport]) -> Option<Defection> {
    let mut best: Option<(&crate::stability::DefectionReport, (usize, i64))> = None;
    for rep in candidates {
        let rescued = rep
            .utilities
            .iter()
            .filter(|d| d.before.is_neg_inf())
            .count();
        let gain: i64 = rep
            .utilities
            .iter()
            .filter_map(|d| {
                Some(d.after.as_finite()? - d.before.as_finite()?)
            })
            .sum();
        let key = (rescued, gain);
        match &best {
            Some((_, best_key)) if *best_key >= key => {}
            _ => best = Some((rep, key)),
        }
    }
    best.map(|(rep, _)| rep.defection.clone())
}
