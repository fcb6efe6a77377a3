//! The scripted verification battery behind `experiment paper-suite` and the
//! acceptance test target: twelve exact criteria covering existence,
//! dynamics, welfare prices, fragmentation, nonexistence, the reduction
//! chain, the marriage correspondence and the stability-testing gadget.
//! Every expected value is frozen here; the oracles used for derived values
//! (subset enumeration, backtracking coloring, brute-force matchings) are
//! independent of the solvers they check.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use crate::construct::{
    additive_potential_audit, best_response_run, brute_force_stable_matchings,
    four_stable_closed_form, four_stable_potential, gale_shapley, greedy_mis_peeling,
    three_stable_closed_form, three_stable_from_optimal,
    three_stable_potential, two_stable_dynamics, PotentialKind, PreferenceProfile, Schedule,
};
use crate::instances;
use crate::model::{
    total_welfare_of_partition, CliquePartition, Instance, Network, Welfare,
};
use crate::partition;
use crate::stability::{
    enumerate_stable_networks, exists_stable_network, find_improving_defection, is_k_stable,
};
use crate::welfare::{
    chromatic_number, optimal_total_welfare, welfare_report, Ratio, WelfareMetric,
};
use crate::{ExecMode, SolverConfig};

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

pub const CRITERION_COUNT: usize = 12;

pub fn run_all(exec: ExecMode) -> Vec<CriterionResult> {
    (1..=CRITERION_COUNT)
        .map(|id| run_criterion(id, exec).expect("criterion ids are 1..=12"))
        .collect()
}

pub fn run_criterion(id: usize, exec: ExecMode) -> Option<CriterionResult> {
    let f = match id {
        1 => peeling_stable_for_all_k,
        2 => two_stable_dynamics_bounds,
        3 => scripted_cycle_closes,
        4 => potential_tables,
        5 => welfare_optima_are_two_stable,
        6 => unit_prices_of_stability,
        7 => figure_gadget_numbers,
        8 => tiered_fragmentation,
        9 => nonexistence_gadgets,
        10 => reduction_chain_equivalence,
        11 => marriage_correspondence,
        12 => stability_testing_gadget,
        _ => return None,
    };
    Some(f(exec))
}

fn result(id: usize, name: &'static str, passed: bool, details: String) -> CriterionResult {
    CriterionResult {
        id,
        name,
        passed,
        details,
    }
}

fn corpus(count: usize, min_n: usize, max_n: usize, seed: u64) -> Vec<Instance> {
    let mut rng = crate::rng::SplitMix64::new(seed);
    (0..count)
        .map(|_| {
            let n = min_n + rng.next_below((max_n - min_n + 1) as u64) as usize;
            let p = 0.05 + 0.90 * rng.next_f64();
            instances::random_instance(n, p, rng.next_u64()).expect("valid parameters")
        })
        .collect()
}

// --- criterion 1 ----------------------------------------------------------

fn peeling_stable_for_all_k(exec: ExecMode) -> CriterionResult {
    let cfg = SolverConfig::default().with_exec(exec);
    let insts = corpus(200, 4, 12, 0x5EED_0001);
    let mut failures = 0;
    for inst in &insts {
        let net = match greedy_mis_peeling(inst, &cfg) {
            Ok(net) => net,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        if !(1..=inst.n()).all(|k| is_k_stable(inst, &net, k)) {
            failures += 1;
        }
    }
    result(
        1,
        "maximum-independent-set peeling is k-stable for every k",
        failures == 0,
        format!("{}/{} random instances pass", insts.len() - failures, insts.len()),
    )
}

// --- criterion 2 ----------------------------------------------------------

fn two_stable_dynamics_bounds(_exec: ExecMode) -> CriterionResult {
    let insts = corpus(200, 4, 12, 0x5EED_0001);
    let mut failures = Vec::new();
    for (idx, inst) in insts.iter().enumerate() {
        let Ok(traj) = two_stable_dynamics(inst) else {
            failures.push(idx);
            continue;
        };
        let deltas_ok = traj.potentials.windows(2).all(|w| {
            w[1].as_finite().unwrap_or(i64::MIN) - w[0].as_finite().unwrap_or(0) >= 2
        });
        let count_ok = traj.step_count() <= inst.n() * inst.n() / 2;
        let stable = is_k_stable(inst, traj.final_network(), 2);
        if !(deltas_ok && count_ok && stable) {
            failures.push(idx);
        }
    }
    result(
        2,
        "2-stable dynamics: squared-size potential rises by >= 2, <= n^2/2 moves",
        failures.is_empty(),
        format!("{}/{} trajectories pass", insts.len() - failures.len(), insts.len()),
    )
}

// --- criterion 3 ----------------------------------------------------------

fn scripted_cycle_closes(_exec: ExecMode) -> CriterionResult {
    let gadget = match instances::best_response_cycle(6) {
        Ok(g) => g,
        Err(e) => return result(3, "scripted best-response cycle", false, e.to_string()),
    };
    let run = best_response_run(
        &gadget.instance,
        &gadget.start,
        &Schedule::Script(gadget.schedule.clone()),
        100,
        PotentialKind::SumSquares,
    );
    let (passed, details) = match run {
        Ok(traj) => {
            let six_moves = traj.step_count() == 6;
            let closes = traj.final_network() == &gadget.start;
            let flagged = matches!(
                traj.cycle,
                Some(c) if c.first_visit == 0 && c.length == 6
            );
            (
                six_moves && closes && flagged,
                format!(
                    "6 validated moves: {six_moves}; returns to start: {closes}; cycle flagged: {flagged}"
                ),
            )
        }
        Err(e) => (false, format!("a scripted move failed validation: {e}")),
    };
    result(
        3,
        "six scripted improving moves return to the starting network",
        passed,
        details,
    )
}

// --- criterion 4 ----------------------------------------------------------

fn potential_tables(_exec: ExecMode) -> CriterionResult {
    let mut ok = true;
    let mut notes = Vec::new();

    ok &= three_stable_potential(1) == 1
        && three_stable_potential(2) == 3
        && three_stable_potential(3) == 7;
    ok &= (2..=100).all(|n| three_stable_potential(n) == three_stable_closed_form(n));
    ok &= (3..=100).all(|n| {
        three_stable_closed_form(n)
            == 2 * three_stable_closed_form(n - 1) - three_stable_closed_form(n - 2) + 1
    });
    notes.push(format!(
        "deg-2 table (1,3,7) and closed form agree to n=100: {ok}"
    ));

    let f4 = four_stable_potential(1) == 1
        && four_stable_potential(2) == 3
        && four_stable_potential(3) == 7
        && four_stable_potential(4) == 17
        && four_stable_potential(5) == 34
        && (6..=100).all(|n| four_stable_potential(n) == four_stable_closed_form(n));
    ok &= f4;
    notes.push(format!("deg-3 table (1,3,7,17; 34) and closed form agree: {f4}"));

    let audit = additive_potential_audit();
    let audit_ok = audit.pow6_before == 78126
        && audit.pow6_after == 67136
        && audit.pow6_decreases
        && audit.minimal_chain[2] == 3
        && audit.minimal_chain[3] == 7
        && audit.minimal_chain[4] == 17
        && audit.minimal_chain[5] == 51
        && audit.doubling_lower_bound_holds;
    ok &= audit_ok;
    notes.push(format!(
        "sixth-power audit 78126 -> 67136 and minimal chain F(4)>=17, F(5)>=51, F(i)>=2^(i-1): {audit_ok}"
    ));

    result(4, "potential tables and additive-potential audit", ok, notes.join("; "))
}

// --- criterion 5 ----------------------------------------------------------

/// All welfare maximizers of a conflict-pruned partition walk.
fn all_welfare_maximizers(inst: &Instance) -> (Welfare, Vec<CliquePartition>) {
    let conflicts = inst.conflict_graph();
    let mut best = Welfare::NegInf;
    let mut witnesses: Vec<CliquePartition> = Vec::new();
    partition::for_each_partition(inst.n(), Some(&conflicts), &mut |assignment, _| {
        let part = CliquePartition::from_assignment(assignment);
        let w = total_welfare_of_partition(inst, &part);
        if w > best {
            best = w;
            witnesses.clear();
            witnesses.push(part);
        } else if w == best {
            witnesses.push(part);
        }
        ControlFlow::Continue(())
    });
    (best, witnesses)
}

fn welfare_optima_are_two_stable(_exec: ExecMode) -> CriterionResult {
    let insts = corpus(100, 4, 9, 0x5EED_0005);
    let mut checked = 0usize;
    let mut failures = 0usize;
    for inst in &insts {
        let (_, witnesses) = all_welfare_maximizers(inst);
        for part in witnesses {
            checked += 1;
            if !is_k_stable(inst, &part.to_network(), 2) {
                failures += 1;
            }
        }
    }
    result(
        5,
        "every welfare-maximizing partition is 2-stable",
        failures == 0,
        format!("{checked} maximizers over 100 instances, {failures} unstable"),
    )
}

// --- criterion 6 ----------------------------------------------------------

fn unit_prices_of_stability(exec: ExecMode) -> CriterionResult {
    let cfg = SolverConfig::default().with_exec(exec);
    let insts = corpus(100, 4, 9, 0x5EED_0006);
    let mut repair_failures = 0usize;
    let mut component_failures = 0usize;
    for inst in &insts {
        let (opt_w, opt_part) = optimal_total_welfare(inst, &cfg).expect("within bounds");
        match three_stable_from_optimal(inst, &opt_part) {
            Ok(net) => {
                let w = total_welfare_of_partition(inst, &net.components());
                if w != opt_w || !is_k_stable(inst, &net, 3) {
                    repair_failures += 1;
                }
            }
            Err(_) => repair_failures += 1,
        }
        let stable = enumerate_stable_networks(inst, 2, &cfg).expect("within bounds");
        let min_components = stable.iter().map(|p| p.block_count()).min();
        let (chi, _) = chromatic_number(&inst.conflict_graph(), &cfg).expect("within bounds");
        if min_components != Some(chi) {
            component_failures += 1;
        }
    }
    result(
        6,
        "3-stable repair meets the welfare optimum; some 2-stable network meets the chromatic baseline",
        repair_failures == 0 && component_failures == 0,
        format!(
            "repair failures: {repair_failures}/100; component-count failures: {component_failures}/100"
        ),
    )
}

// --- criterion 7 ----------------------------------------------------------

fn figure_gadget_numbers(exec: ExecMode) -> CriterionResult {
    let cfg = SolverConfig::default().with_exec(exec);
    let mut ok = true;
    let mut notes = Vec::new();

    // Twin cliques with triples: optimum 12, a 2-stable network with welfare
    // 10 and five components, minimum component count 4.
    {
        let inst = instances::twin_cliques_with_triples();
        let report = welfare_report(&inst, 2, WelfareMetric::TotalUtility, &cfg)
            .expect("within bounds");
        let opt_ok = report.optimum.value == Ratio::from_integer(12);
        let target = CliquePartition::from_blocks(
            12,
            vec![vec![0, 1, 2, 3], vec![4, 8], vec![5, 9], vec![6, 10], vec![7, 11]],
        )
        .unwrap();
        let stable = enumerate_stable_networks(&inst, 2, &cfg).expect("within bounds");
        let has_target = stable.iter().any(|p| p == &target);
        let target_value = total_welfare_of_partition(&inst, &target).as_integer() == Some(10)
            && target.block_count() == 5;
        let (chi, _) = chromatic_number(&inst.conflict_graph(), &cfg).unwrap();
        let this = opt_ok && has_target && target_value && chi == 4;
        ok &= this;
        notes.push(format!("twin cliques (opt 12, stable 10@5 blocks, chi 4): {this}"));
    }

    // Hub clique with triangles: price of stability exactly 6/5 at k = 4.
    {
        let inst = instances::hub_clique_with_triangles();
        let report = welfare_report(&inst, 4, WelfareMetric::TotalUtility, &cfg)
            .expect("within bounds");
        let pos_ok = report.price_of_stability == Some(Ratio::new(6, 5));
        let triangles = CliquePartition::from_blocks(
            12,
            (0..4).map(|i| vec![i, 4 + i, 8 + i]).collect(),
        )
        .unwrap();
        let defect = find_improving_defection(&inst, &triangles.to_network(), 4);
        let defect_ok =
            defect.is_some_and(|r| r.defection.participants == vec![0, 1, 2, 3]);
        let hub_plus_pairs = CliquePartition::from_blocks(
            12,
            vec![vec![0, 1, 2, 3], vec![4, 8], vec![5, 9], vec![6, 10], vec![7, 11]],
        )
        .unwrap();
        let hub_stable = is_k_stable(&inst, &hub_plus_pairs.to_network(), 4);
        let this = pos_ok && defect_ok && hub_stable;
        ok &= this;
        notes.push(format!("hub triangles (PoS 6/5, hub defection, hub 4-stable): {this}"));
    }

    // Pendant 4-clique: minimum components 4, unique welfare maximum 6 at
    // the clique plus singletons, both witnesses 2-stable.
    {
        let inst = instances::pendant_clique(4).unwrap();
        let (chi, _) = chromatic_number(&inst.conflict_graph(), &cfg).unwrap();
        let (w, witness) = optimal_total_welfare(&inst, &cfg).unwrap();
        let w_ok = w.as_integer() == Some(6)
            && witness.blocks()
                == &[vec![0, 1, 2, 3], vec![4], vec![5], vec![6], vec![7]][..];
        let pairs = CliquePartition::from_blocks(
            8,
            (0..4).map(|i| vec![i, 4 + i]).collect(),
        )
        .unwrap();
        let both_stable = is_k_stable(&inst, &witness.to_network(), 2)
            && is_k_stable(&inst, &pairs.to_network(), 2);
        let this = chi == 4 && w_ok && both_stable;
        ok &= this;
        notes.push(format!("pendant 4-clique (chi 4, opt 6, both stable): {this}"));
    }

    // Pendant 3-clique: chromatic number 3 but every 3-stable network has at
    // least four components; the pendant pairs maximize welfare yet are not
    // 3-stable.
    {
        let inst = instances::pendant_clique(3).unwrap();
        let (chi, _) = chromatic_number(&inst.conflict_graph(), &cfg).unwrap();
        let stable3 = enumerate_stable_networks(&inst, 3, &cfg).unwrap();
        let frag_ok = !stable3.is_empty() && stable3.iter().all(|p| p.block_count() >= 4);
        let pairs =
            CliquePartition::from_blocks(6, (0..3).map(|i| vec![i, 3 + i]).collect()).unwrap();
        let (opt_w, _) = optimal_total_welfare(&inst, &cfg).unwrap();
        let pairs_opt = total_welfare_of_partition(&inst, &pairs) == opt_w
            && opt_w.as_integer() == Some(3);
        let pairs_unstable = !is_k_stable(&inst, &pairs.to_network(), 3);
        let this = chi == 3 && frag_ok && pairs_opt && pairs_unstable;
        ok &= this;
        notes.push(format!(
            "pendant 3-clique (chi 3, all 3-stable >= 4 blocks, optimal pairs unstable): {this}"
        ));
    }

    result(7, "figure-gadget welfare and stability numbers", ok, notes.join("; "))
}

// --- criterion 8 ----------------------------------------------------------

/// All maximum independent sets of a conflict graph by subset enumeration
/// (fits n <= 20); independent of the branch-and-bound solver.
fn brute_force_all_mis(inst: &Instance) -> (usize, Vec<Vec<usize>>) {
    let n = inst.n();
    let mut rows = vec![0u32; n];
    for (i, row) in rows.iter_mut().enumerate() {
        for j in 0..n {
            if i != j && inst.conflict(i, j) {
                *row |= 1 << j;
            }
        }
    }
    let mut best = 0usize;
    let mut sets: Vec<u32> = Vec::new();
    for mask in 0u32..1 << n {
        let size = mask.count_ones() as usize;
        if size < best {
            continue;
        }
        let mut independent = true;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if rows[v] & mask != 0 {
                independent = false;
                break;
            }
        }
        if independent {
            if size > best {
                best = size;
                sets.clear();
            }
            sets.push(mask);
        }
    }
    let decoded = sets
        .iter()
        .map(|&mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect())
        .collect();
    (best, decoded)
}

fn tiered_fragmentation(exec: ExecMode) -> CriterionResult {
    let cfg = SolverConfig::default().with_exec(exec).with_mis_limit(200);
    let mut ok = true;
    let mut notes = Vec::new();

    // Peeling recovers the tier blocks exactly, for n = 9, 27, 81.
    for n in [9usize, 27, 81] {
        let inst = instances::tiered_bipartite(n).unwrap();
        let expected =
            CliquePartition::from_blocks(2 * n, instances::tiered_bipartite_blocks(n)).unwrap();
        let peel = greedy_mis_peeling(&inst, &cfg).expect("within raised bound");
        let this = peel.components() == expected;
        ok &= this;
        notes.push(format!("n={n}: peeling blocks match the tier closed form: {this}"));
    }

    // For n = 9 the outer tier is the *unique* maximum independent set
    // (verified by full subset enumeration), so any fully stable network
    // must contain it as a component: otherwise some component of every
    // outer-tier member would be smaller than the tier, and the tier's
    // members could all strictly improve by defecting into a clique on
    // themselves. The forced-component lemma itself is validated
    // exhaustively on small random instances below, and directly on n = 3.
    {
        let inst = instances::tiered_bipartite(9).unwrap();
        let (alpha, sets) = brute_force_all_mis(&inst);
        let unique = sets.len() == 1
            && alpha == 12
            && sets[0] == instances::tiered_bipartite_blocks(9)[0];
        ok &= unique;
        notes.push(format!("n=9: unique maximum independent set = outer tier: {unique}"));

        let peel = greedy_mis_peeling(&inst, &cfg).unwrap();
        let fully_stable = is_k_stable(&inst, &peel, 18);
        ok &= fully_stable;
        notes.push(format!("n=9: peeled network is stable for k = 18: {fully_stable}"));
    }

    // Forced-component lemma on random instances: every fully stable network
    // contains a component of maximum-independent-set size.
    {
        let insts = corpus(30, 4, 7, 0x5EED_0008);
        let mut lemma_ok = true;
        for inst in &insts {
            let (alpha, _) = brute_force_all_mis(inst);
            let stable = enumerate_stable_networks(inst, inst.n(), &cfg).expect("small");
            lemma_ok &= !stable.is_empty()
                && stable
                    .iter()
                    .all(|p| p.blocks().iter().any(|b| b.len() == alpha));
        }
        ok &= lemma_ok;
        notes.push(format!(
            "forced-component lemma on 30 random instances (n <= 7): {lemma_ok}"
        ));
    }

    // Direct enumeration at n = 3: every fully stable network keeps the
    // outer tier together.
    {
        let inst = instances::tiered_bipartite(3).unwrap();
        let outer = instances::tiered_bipartite_blocks(3)[0].clone();
        let stable = enumerate_stable_networks(&inst, 6, &cfg).expect("small");
        let forced = !stable.is_empty()
            && stable.iter().all(|p| p.blocks().contains(&outer));
        ok &= forced;
        notes.push(format!("n=3: every fully stable network keeps the outer tier: {forced}"));
    }

    result(8, "tiered-family fragmentation", ok, notes.join("; "))
}

// --- criterion 9 ----------------------------------------------------------

fn nonexistence_gadgets(exec: ExecMode) -> CriterionResult {
    let cfg = SolverConfig::default().with_exec(exec);
    let asym = exists_stable_network(&instances::asymmetric_nonexistence(), 2, &cfg)
        .expect("small instance")
        .is_none();
    let strong_pairs =
        exists_stable_network(&instances::strong_pairs_nonexistence(5).unwrap(), 2, &cfg)
            .expect("small instance")
            .is_none();
    let weak_variant =
        exists_stable_network(&instances::strong_pairs_nonexistence(1).unwrap(), 2, &cfg)
            .expect("small instance")
            .is_some();
    let strong_weak = exists_stable_network(&instances::strong_weak_ties(), 2, &cfg)
        .expect("small instance")
        .is_none();
    let ok = asym && strong_pairs && strong_weak && weak_variant;
    result(
        9,
        "no 2-stable network for the nonexistence gadgets",
        ok,
        format!(
            "asymmetric: {asym}; strong pairs c=5: {strong_pairs} (c=1 admits one: {weak_variant}); strong/weak ties: {strong_weak}"
        ),
    )
}

// --- criterion 10 ---------------------------------------------------------

/// Backtracking 3-colorability of a plain graph; the reference the chain is
/// compared against.
fn oracle_three_colorable(g: &Network) -> bool {
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for (a, b) in g.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    fn rec(adj: &[Vec<usize>], colors: &mut Vec<usize>, v: usize) -> bool {
        if v == adj.len() {
            return true;
        }
        for c in 1..=3 {
            if adj[v].iter().all(|&u| colors[u] != c) {
                colors[v] = c;
                if rec(adj, colors, v + 1) {
                    return true;
                }
                colors[v] = 0;
            }
        }
        false
    }
    rec(&adj, &mut vec![0; n], 0)
}

/// Canonical key of a labeled graph under vertex permutations.
fn canonical_graph_key(n: usize, edges: &BTreeSet<(usize, usize)>) -> Vec<bool> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<bool>> = None;
    permute(&mut perm, 0, &mut |p| {
        let mut bits = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (p[i].min(p[j]), p[i].max(p[j]));
                bits.push(edges.contains(&(a, b)));
            }
        }
        if best.as_ref().is_none_or(|b| bits < *b) {
            best = Some(bits);
        }
    });
    best.unwrap_or_default()
}

fn permute(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

fn reduction_chain_equivalence(exec: ExecMode) -> CriterionResult {
    use crate::reductions::*;
    let cfg = SolverConfig::default().with_exec(exec).with_partition_limit(15);
    let mut ok = true;
    let mut notes = Vec::new();

    // Every graph on <= 5 nodes, via one representative per isomorphism
    // class (stable-coloring existence is isomorphism-invariant).
    let mut classes: BTreeSet<(usize, Vec<bool>)> = BTreeSet::new();
    let mut reps: Vec<Network> = Vec::new();
    for n in 1..=5usize {
        let pair_count = n * (n - 1) / 2;
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        for mask in 0u32..1 << pair_count {
            let edges: BTreeSet<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(idx, _)| mask >> idx & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            if classes.insert((n, canonical_graph_key(n, &edges))) {
                reps.push(Network::from_edges(n, edges).unwrap());
            }
        }
    }

    let mut mismatches = 0usize;
    for h in &reps {
        let colorable = oracle_three_colorable(h);
        let k = triple_graph_to_bichromatic(&three_coloring_to_triple_graph(h))
            .expect("pendant triples are triangles");
        let stable = stable_coloring_search(&k, &cfg).expect("within raised bound");
        if stable.is_some() != colorable {
            mismatches += 1;
        }
    }
    ok &= mismatches == 0;
    notes.push(format!(
        "{} isomorphism classes on <= 5 nodes, {} equivalence mismatches",
        reps.len(),
        mismatches
    ));

    // Full chain down to the game for seeds whose final instance fits the
    // existence oracle (a 3-colorable seed; non-3-colorable seeds need at
    // least 4 nodes, hence 24 agents, beyond exhaustive reach — their chain
    // is checked through the stable-coloring stage above).
    {
        let seed = Network::from_edges(2, [(0, 1)]).unwrap(); // 3-colorable
        let k = triple_graph_to_bichromatic(&three_coloring_to_triple_graph(&seed)).unwrap();
        let coloring = stable_coloring_search(&k, &cfg).expect("small");
        let game = bichromatic_to_matching_instance(&k).unwrap();
        let net = exists_stable_network(&game, 2, &cfg).expect("12 agents");
        let agrees = coloring.is_some() && net.is_some();
        ok &= agrees;
        notes.push(format!("3-colorable seed: stable coloring and 2-stable network both exist: {agrees}"));

        let bad_seed = {
            let mut g = Network::empty(4);
            for i in 0..4 {
                for j in i + 1..4 {
                    g.add_edge(i, j).unwrap();
                }
            }
            g
        };
        let bad_k =
            triple_graph_to_bichromatic(&three_coloring_to_triple_graph(&bad_seed)).unwrap();
        let none = stable_coloring_search(&bad_k, &cfg).expect("12 nodes").is_none();
        ok &= none;
        notes.push(format!("non-3-colorable seed: no stable coloring: {none}"));
    }

    result(10, "reduction chain matches 3-colorability", ok, notes.join("; "))
}

// --- criterion 11 ---------------------------------------------------------

fn marriage_correspondence(exec: ExecMode) -> CriterionResult {
    let cfg = SolverConfig::default().with_exec(exec);
    let mut rng = crate::rng::SplitMix64::new(0x5EED_000B);
    let mut failures = 0usize;
    let total = 50usize;
    for _ in 0..total {
        let n = 1 + rng.next_below(4) as usize;
        let profile = PreferenceProfile::random(n, rng.next_u64());
        let inst = instances::marriage_instance(&profile);
        let stable = enumerate_stable_networks(&inst, 2, &cfg).expect("within bounds");
        let mut decoded: Vec<Vec<usize>> = Vec::new();
        let mut all_decode = true;
        for part in &stable {
            match instances::decode_matching(n, part.blocks()) {
                Some(pairs) => decoded.push(pairs),
                None => all_decode = false,
            }
        }
        decoded.sort();
        let mut reference: Vec<Vec<usize>> = brute_force_stable_matchings(&profile)
            .into_iter()
            .map(|m| m.pairs)
            .collect();
        reference.sort();
        let gs = gale_shapley(&profile);
        if !(all_decode && decoded == reference && reference.contains(&gs.pairs)) {
            failures += 1;
        }
    }
    result(
        11,
        "2-stable networks of marriage instances are exactly the stable matchings",
        failures == 0,
        format!("{}/{total} profiles pass (n <= 4)", total - failures),
    )
}

// --- criterion 12 ---------------------------------------------------------

fn has_independent_set_of_size(l: &Network, k: usize) -> bool {
    let n = l.n();
    if k > n {
        return false;
    }
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != k {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let independent = members
            .iter()
            .enumerate()
            .all(|(i, &a)| members[i + 1..].iter().all(|&b| !l.has_edge(a, b)));
        if independent {
            return true;
        }
    }
    false
}

fn stability_testing_gadget(_exec: ExecMode) -> CriterionResult {
    let mut rng = crate::rng::SplitMix64::new(0x5EED_000C);
    let mut failures = 0usize;
    let total = 20usize;
    for _ in 0..total {
        let nodes = 4 + rng.next_below(5) as usize; // 4..=8
        let p = 0.15 + 0.7 * rng.next_f64();
        let l = instances::random_graph(nodes, p, rng.next_u64()).unwrap();
        for k in [3usize, 4] {
            let (inst, candidate) = instances::stability_test_gadget(&l, k).unwrap();
            let unstable = !is_k_stable(&inst, &candidate, k);
            let expected = has_independent_set_of_size(&l, k);
            if unstable != expected {
                failures += 1;
            }
        }
    }
    result(
        12,
        "candidate network is k-unstable iff the seed graph has a size-k independent set",
        failures == 0,
        format!("{}/{} (graph, k) cases pass", 2 * total - failures, 2 * total),
    )
}

// Re-exported for the CLI experiment command.
pub use crate::welfare::PoaCheck;

/// Supplementary worst-case measurements the experiment report prints next
/// to the acceptance lines: measured prices of anarchy for the matched-clique
/// and grid families against their claimed bounds.
pub fn poa_measurements(exec: ExecMode) -> Vec<(String, PoaCheck)> {
    let cfg = SolverConfig::default().with_exec(exec);
    let mut out = Vec::new();

    let n = 8;
    let inst = instances::matched_cliques(n).unwrap();
    let check = crate::welfare::poa_bound_check(
        &inst,
        2,
        Some(Ratio::from_integer(n as i64 / 2)),
        &cfg,
    )
    .expect("small instance");
    out.push((format!("matched-cliques n={n}, k=2, bound n/2"), check));

    let (r, c) = (3usize, 4usize);
    let inst = instances::grid(r, c).unwrap();
    let k = r.min(c);
    let bound = Ratio::new((r * c / k) as i64 - 1, k as i64 - 1);
    let check = crate::welfare::poa_bound_check(&inst, k, Some(bound), &cfg)
        .expect("small instance");
    out.push((format!("grid {r}x{c}, k={k}, bound (n/k-1)/(k-1)"), check));

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criterion_ids_cover_one_through_twelve() {
        assert!(run_criterion(0, ExecMode::default()).is_none());
        assert!(run_criterion(13, ExecMode::default()).is_none());
        // Cheap criteria sanity-run here; the full battery runs in the
        // dedicated acceptance target.
        let c4 = run_criterion(4, ExecMode::default()).unwrap();
        assert!(c4.passed, "{}", c4.details);
        let c9 = run_criterion(9, ExecMode::default()).unwrap();
        assert!(c9.passed, "{}", c9.details);
    }

    #[test]
    fn brute_force_mis_on_square() {
        let inst = instances::friends_enemies(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let (alpha, sets) = brute_force_all_mis(&inst);
        assert_eq!(alpha, 2);
        assert_eq!(sets, vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn oracle_colorability_basics() {
        let k4 = Network::from_edges(4, (0..4).flat_map(|i| ((i + 1)..4).map(move |j| (i, j))))
            .unwrap();
        assert!(!oracle_three_colorable(&k4));
        let c5 = Network::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert!(oracle_three_colorable(&c5));
    }

    #[test]
    fn canonical_keys_identify_isomorphic_graphs() {
        let a: BTreeSet<(usize, usize)> = [(0, 1), (1, 2)].into_iter().collect();
        let b: BTreeSet<(usize, usize)> = [(1, 2), (0, 1)].into_iter().collect();
        let c: BTreeSet<(usize, usize)> = [(0, 1), (0, 2)].into_iter().collect();
        assert_eq!(canonical_graph_key(3, &a), canonical_graph_key(3, &b));
        assert_eq!(canonical_graph_key(3, &a), canonical_graph_key(3, &c)); // path ~ star on 3
        let triangle: BTreeSet<(usize, usize)> = [(0, 1), (1, 2), (0, 2)].into_iter().collect();
        assert_ne!(canonical_graph_key(3, &a), canonical_graph_key(3, &triangle));
    }
}
