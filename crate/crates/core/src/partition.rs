//! Exhaustive set-partition enumeration in restricted-growth-string order,
//! with optional conflict pruning (blocks are forced to be independent sets of
//! a conflict graph). The RGS order is the canonical partition order used by
//! every oracle: blocks appear sorted by smallest member.

use std::ops::ControlFlow;

use crate::bits::BitSet;
use crate::model::ConflictGraph;

/// Depth-first walk over every (conflict-free) partition of `0..n`. The
/// visitor receives the assignment (`assignment[i]` = block label, labels in
/// first-use order) and the block count; it can stop the walk early.
pub(crate) fn for_each_partition<F>(n: usize, conflicts: Option<&ConflictGraph>, visitor: &mut F)
where
    F: FnMut(&[usize], usize) -> ControlFlow<()>,
{
    let mut state = WalkState::new(n, conflicts);
    let _ = state.walk(0, visitor);
}

/// All valid RGS prefixes of length `depth`, in RGS order. Completing each
/// prefix with [`for_each_completion`] visits exactly the partitions of the
/// full walk, split into contiguous chunks.
pub(crate) fn partition_prefixes(
    n: usize,
    conflicts: Option<&ConflictGraph>,
    depth: usize,
) -> Vec<Vec<usize>> {
    let depth = depth.min(n);
    let mut out = Vec::new();
    let mut state = WalkState::new(n, conflicts);
    state.collect_prefixes(0, depth, &mut out);
    out
}

pub(crate) fn for_each_completion<F>(
    prefix: &[usize],
    n: usize,
    conflicts: Option<&ConflictGraph>,
    visitor: &mut F,
) where
    F: FnMut(&[usize], usize) -> ControlFlow<()>,
{
    let mut state = WalkState::new(n, conflicts);
    for (i, &b) in prefix.iter().enumerate() {
        state.place(i, b);
    }
    let _ = state.walk(prefix.len(), visitor);
}

struct WalkState<'a> {
    n: usize,
    conflicts: Option<&'a ConflictGraph>,
    assignment: Vec<usize>,
    num_blocks: usize,
    /// Union of the conflict rows of each block's members; agent `i` may join
    /// block `b` iff `block_conflicts[b]` does not contain `i`.
    block_conflicts: Vec<BitSet>,
    block_sizes: Vec<usize>,
    /// Saved masks for backtracking, parallel to the place/unplace stack.
    undo: Vec<BitSet>,
}

impl<'a> WalkState<'a> {
    fn new(n: usize, conflicts: Option<&'a ConflictGraph>) -> Self {
        WalkState {
            n,
            conflicts,
            assignment: vec![0; n],
            num_blocks: 0,
            block_conflicts: vec![BitSet::new(n); n],
            block_sizes: vec![0; n],
            undo: Vec::with_capacity(n),
        }
    }

    fn may_join(&self, agent: usize, block: usize) -> bool {
        self.conflicts.is_none() || !self.block_conflicts[block].contains(agent)
    }

    fn place(&mut self, agent: usize, block: usize) {
        debug_assert!(block <= self.num_blocks);
        self.assignment[agent] = block;
        if block == self.num_blocks {
            self.num_blocks += 1;
        }
        self.block_sizes[block] += 1;
        if let Some(h) = self.conflicts {
            self.undo.push(self.block_conflicts[block].clone());
            self.block_conflicts[block].union_with(h.row(agent));
        }
    }

    fn unplace(&mut self, agent: usize) {
        let block = self.assignment[agent];
        self.block_sizes[block] -= 1;
        if self.block_sizes[block] == 0 {
            self.num_blocks -= 1;
        }
        if self.conflicts.is_some() {
            self.block_conflicts[block] = self.undo.pop().expect("unbalanced unplace");
        }
    }

    fn walk<F>(&mut self, agent: usize, visitor: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize], usize) -> ControlFlow<()>,
    {
        if agent == self.n {
            return visitor(&self.assignment, self.num_blocks);
        }
        let limit = self.num_blocks; // existing blocks, then one fresh block
        for block in 0..=limit {
            if block < limit && !self.may_join(agent, block) {
                continue;
            }
            self.place(agent, block);
            let flow = self.walk(agent + 1, visitor);
            self.unplace(agent);
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn collect_prefixes(&mut self, agent: usize, depth: usize, out: &mut Vec<Vec<usize>>) {
        if agent == depth {
            out.push(self.assignment[..depth].to_vec());
            return;
        }
        let limit = self.num_blocks;
        for block in 0..=limit {
            if block < limit && !self.may_join(agent, block) {
                continue;
            }
            self.place(agent, block);
            self.collect_prefixes(agent + 1, depth, out);
            self.unplace(agent);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_partitions(n: usize, conflicts: Option<&ConflictGraph>) -> usize {
        let mut count = 0;
        for_each_partition(n, conflicts, &mut |_, _| {
            count += 1;
            ControlFlow::Continue(())
        });
        count
    }

    #[test]
    fn bell_numbers() {
        // B(1)..B(8) = 1, 2, 5, 15, 52, 203, 877, 4140.
        let expected = [1, 2, 5, 15, 52, 203, 877, 4140];
        for (i, &b) in expected.iter().enumerate() {
            assert_eq!(count_partitions(i + 1, None), b);
        }
    }

    #[test]
    fn rgs_order_is_canonical() {
        // For n = 3 the walk must produce the five partitions in RGS order.
        let mut seen = Vec::new();
        for_each_partition(3, None, &mut |a, _| {
            seen.push(a.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(
            seen,
            vec![
                vec![0, 0, 0],
                vec![0, 0, 1],
                vec![0, 1, 0],
                vec![0, 1, 1],
                vec![0, 1, 2],
            ]
        );
    }

    #[test]
    fn conflict_pruning_respects_enemies() {
        // Agents 0 and 1 can never share a block.
        let h = ConflictGraph::from_enemy_pairs(3, [(0, 1)]).unwrap();
        let mut seen = Vec::new();
        for_each_partition(3, Some(&h), &mut |a, _| {
            seen.push(a.to_vec());
            ControlFlow::Continue(())
        });
        assert!(seen.iter().all(|a| a[0] != a[1]));
        // {0,2|1}, {0|1,2} and {0|1|2} survive the pruning.
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn prefixes_cover_the_walk_exactly() {
        let h = ConflictGraph::from_enemy_pairs(6, [(0, 3), (1, 4)]).unwrap();
        let mut direct = Vec::new();
        for_each_partition(6, Some(&h), &mut |a, _| {
            direct.push(a.to_vec());
            ControlFlow::Continue(())
        });
        let mut chunked = Vec::new();
        for prefix in partition_prefixes(6, Some(&h), 3) {
            for_each_completion(&prefix, 6, Some(&h), &mut |a, _| {
                chunked.push(a.to_vec());
                ControlFlow::Continue(())
            });
        }
        assert_eq!(direct, chunked);
    }

    #[test]
    fn early_stop_propagates() {
        let mut count = 0;
        for_each_partition(8, None, &mut |_, _| {
            count += 1;
            if count == 10 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        assert_eq!(count, 10);
    }
}
