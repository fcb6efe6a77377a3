//! Exact maximum independent set on the conflict graph, by branch and bound
//! over bit sets with a greedy clique-cover upper bound. The returned set is
//! the lexicographically smallest maximum one, fixed greedily one vertex at a
//! time, so results are reproducible across runs and platforms.

use crate::bits::BitSet;
use crate::model::ConflictGraph;
use crate::{Result, SolverConfig};

pub fn max_independent_set(h: &ConflictGraph, cfg: &SolverConfig) -> Result<Vec<usize>> {
    cfg.check_mis(h.n())?;
    Ok(max_independent_set_unchecked(h))
}

pub(crate) fn max_independent_set_unchecked(h: &ConflictGraph) -> Vec<usize> {
    let n = h.n();
    if n == 0 {
        return Vec::new();
    }
    let closed: Vec<BitSet> = (0..n)
        .map(|v| {
            let mut m = h.row(v).clone();
            m.insert(v);
            m
        })
        .collect();
    let all = BitSet::full(n);
    let alpha = mis_size(h, &closed, &all);

    // Lexicographic fixing: keep v iff some maximum set extends the current
    // choice through v.
    let mut chosen = Vec::new();
    let mut avail = all;
    for v in 0..n {
        if !avail.contains(v) {
            continue;
        }
        let mut after = avail.clone();
        after.subtract(&closed[v]);
        let need = alpha - chosen.len() - 1;
        if need == 0 || has_independent_set(h, &closed, &after, need) {
            chosen.push(v);
            avail = after;
        } else {
            avail.remove(v);
        }
    }
    debug_assert_eq!(chosen.len(), alpha);
    chosen
}

/// Size of a maximum independent set within `cand`.
fn mis_size(h: &ConflictGraph, closed: &[BitSet], cand: &BitSet) -> usize {
    let mut best = greedy_lowest(closed, cand).max(greedy_min_degree(h, closed, cand));
    branch_max(closed, cand.clone(), 0, &mut best);
    best
}

/// Does `cand` contain an independent set of at least `target` vertices?
fn has_independent_set(
    h: &ConflictGraph,
    closed: &[BitSet],
    cand: &BitSet,
    target: usize,
) -> bool {
    if greedy_lowest(closed, cand) >= target || greedy_min_degree(h, closed, cand) >= target {
        return true;
    }
    branch_decision(closed, cand.clone(), 0, target)
}

fn branch_max(closed: &[BitSet], cand: BitSet, size: usize, best: &mut usize) {
    if size + clique_cover_bound(closed, &cand) <= *best {
        return;
    }
    let Some(v) = pick_branch_vertex(closed, &cand) else {
        *best = (*best).max(size);
        return;
    };
    let mut with_v = cand.clone();
    with_v.subtract(&closed[v]);
    branch_max(closed, with_v, size + 1, best);
    let mut without_v = cand;
    without_v.remove(v);
    branch_max(closed, without_v, size, best);
}

fn branch_decision(closed: &[BitSet], cand: BitSet, size: usize, target: usize) -> bool {
    if size >= target {
        return true;
    }
    if size + clique_cover_bound(closed, &cand) < target {
        return false;
    }
    let Some(v) = pick_branch_vertex(closed, &cand) else {
        return false;
    };
    let mut with_v = cand.clone();
    with_v.subtract(&closed[v]);
    if branch_decision(closed, with_v, size + 1, target) {
        return true;
    }
    let mut without_v = cand;
    without_v.remove(v);
    branch_decision(closed, without_v, size, target)
}

/// Branch on the candidate with the most conflicts among candidates; ties go
/// to the lowest index. Removing busy vertices first collapses the search.
fn pick_branch_vertex(closed: &[BitSet], cand: &BitSet) -> Option<usize> {
    let mut pick = None;
    let mut pick_deg = 0usize;
    for v in cand.iter() {
        // closed[v] includes v itself, which is in cand; subtract it back out.
        let deg = closed[v].count_intersection(cand) - 1;
        if pick.is_none() || deg > pick_deg {
            pick = Some(v);
            pick_deg = deg;
        }
    }
    pick
}

/// Greedy clique cover of the candidates in the conflict graph; its size
/// bounds any independent set from above.
fn clique_cover_bound(closed: &[BitSet], cand: &BitSet) -> usize {
    let mut cover_masks: Vec<BitSet> = Vec::new();
    let mut common: Vec<BitSet> = Vec::new(); // vertices adjacent to all clique members
    for v in cand.iter() {
        let mut placed = false;
        for (ci, comm) in common.iter_mut().enumerate() {
            if comm.contains(v) {
                cover_masks[ci].insert(v);
                let mut row = closed[v].clone();
                row.remove(v);
                comm.intersect_with(&row);
                placed = true;
                break;
            }
        }
        if !placed {
            let mut mask = BitSet::new(closed.len());
            mask.insert(v);
            cover_masks.push(mask);
            let mut row = closed[v].clone();
            row.remove(v);
            common.push(row);
        }
    }
    cover_masks.len()
}

/// Greedy independent set taking the lowest compatible index first.
fn greedy_lowest(closed: &[BitSet], cand: &BitSet) -> usize {
    let mut avail = cand.clone();
    let mut size = 0;
    while let Some(v) = avail.first() {
        avail.subtract(&closed[v]);
        size += 1;
    }
    size
}

/// Greedy independent set taking the candidate with the fewest remaining
/// conflicts first; strong on structured instances.
fn greedy_min_degree(h: &ConflictGraph, closed: &[BitSet], cand: &BitSet) -> usize {
    let mut avail = cand.clone();
    let mut size = 0;
    while !avail.is_empty() {
        let mut pick = usize::MAX;
        let mut pick_deg = usize::MAX;
        for v in avail.iter() {
            let deg = h.row(v).count_intersection(&avail);
            if deg < pick_deg {
                pick_deg = deg;
                pick = v;
            }
        }
        avail.subtract(&closed[pick]);
        size += 1;
    }
    size
}
