//! Core game objects: utilities, instances, networks, clique partitions and
//! conflict graphs, together with their JSON file formats.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::{Error, Result};

/// Hard cap on the agent count. Together with [`Utility::MAX_MAGNITUDE`] it
/// guarantees that no utility sum can overflow an `i64`.
pub const MAX_AGENTS: usize = 10_000;

// ---------------------------------------------------------------------------
// Utility values
// ---------------------------------------------------------------------------

/// An integer utility extended with `-inf`. `-inf` absorbs under addition and
/// compares below every finite value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Utility {
    NegInf,
    Finite(i64),
}

impl Utility {
    pub const ZERO: Utility = Utility::Finite(0);
    pub const ONE: Utility = Utility::Finite(1);

    /// Largest admissible magnitude for a finite entry: 2^31. With at most
    /// [`MAX_AGENTS`] agents a node utility is a sum of fewer than 10^4 such
    /// terms, which stays far below `i64::MAX`.
    pub const MAX_MAGNITUDE: i64 = 1 << 31;

    pub fn finite(value: i64) -> Result<Utility> {
        if value.abs() > Self::MAX_MAGNITUDE {
            Err(Error::UtilityOutOfRange { value })
        } else {
            Ok(Utility::Finite(value))
        }
    }

    pub fn is_neg_inf(self) -> bool {
        matches!(self, Utility::NegInf)
    }

    pub fn as_finite(self) -> Option<i64> {
        match self {
            Utility::NegInf => None,
            Utility::Finite(v) => Some(v),
        }
    }

    /// Absorbing addition; `None` on finite overflow.
    pub fn checked_add(self, rhs: Utility) -> Option<Utility> {
        match (self, rhs) {
            (Utility::NegInf, _) | (_, Utility::NegInf) => Some(Utility::NegInf),
            (Utility::Finite(a), Utility::Finite(b)) => a.checked_add(b).map(Utility::Finite),
        }
    }

    /// Absorbing addition. Instance invariants (bounded magnitudes, bounded
    /// agent count) make finite overflow unreachable for sums over one
    /// component; a violation is a bug, not an input error.
    pub fn plus(self, rhs: Utility) -> Utility {
        self.checked_add(rhs).expect("utility sum overflowed")
    }
}

impl PartialOrd for Utility {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Utility {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (Utility::NegInf, Utility::NegInf) => Ordering::Equal,
            (Utility::NegInf, _) => Ordering::Less,
            (_, Utility::NegInf) => Ordering::Greater,
            (Utility::Finite(a), Utility::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Utility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Utility::NegInf => write!(f, "-inf"),
            Utility::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Utility {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Utility::NegInf => serializer.serialize_str("-inf"),
            Utility::Finite(v) => serializer.serialize_i64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for Utility {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct UtilityVisitor;
        impl Visitor<'_> for UtilityVisitor {
            type Value = Utility;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "an integer utility or the string \"-inf\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Utility, E> {
                Utility::finite(v).map_err(E::custom)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Utility, E> {
                let v = i64::try_from(v).map_err(|_| E::custom("utility too large"))?;
                Utility::finite(v).map_err(E::custom)
            }

            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Utility, E> {
                if s == "-inf" {
                    Ok(Utility::NegInf)
                } else {
                    Err(E::custom(format!("unknown utility token {s:?}")))
                }
            }
        }
        deserializer.deserialize_any(UtilityVisitor)
    }
}

/// A total-welfare value, exact in half-units (welfare counts each unordered
/// pair once, so asymmetric instances can yield odd halves).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Welfare {
    NegInf,
    /// Twice the welfare value, kept integral.
    Halves(i64),
}

impl Welfare {
    pub const ZERO: Welfare = Welfare::Halves(0);

    pub fn is_neg_inf(self) -> bool {
        matches!(self, Welfare::NegInf)
    }

    /// Twice the welfare, when finite.
    pub fn doubled(self) -> Option<i64> {
        match self {
            Welfare::NegInf => None,
            Welfare::Halves(h) => Some(h),
        }
    }

    /// The welfare as a plain integer, when finite and integral.
    pub fn as_integer(self) -> Option<i64> {
        match self {
            Welfare::Halves(h) if h % 2 == 0 => Some(h / 2),
            _ => None,
        }
    }

    pub fn plus_utility(self, u: Utility) -> Welfare {
        match (self, u) {
            (Welfare::NegInf, _) | (_, Utility::NegInf) => Welfare::NegInf,
            (Welfare::Halves(h), Utility::Finite(v)) => {
                Welfare::Halves(h.checked_add(v).expect("welfare sum overflowed"))
            }
        }
    }
}

impl PartialOrd for Welfare {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Welfare {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (Welfare::NegInf, Welfare::NegInf) => Ordering::Equal,
            (Welfare::NegInf, _) => Ordering::Less,
            (_, Welfare::NegInf) => Ordering::Greater,
            (Welfare::Halves(a), Welfare::Halves(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Welfare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Welfare::NegInf => write!(f, "-inf"),
            Welfare::Halves(h) if h % 2 == 0 => write!(f, "{}", h / 2),
            Welfare::Halves(h) => write!(f, "{h}/2"),
        }
    }
}

impl Serialize for Welfare {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Welfare::NegInf => serializer.serialize_str("-inf"),
            Welfare::Halves(h) if h % 2 == 0 => serializer.serialize_i64(h / 2),
            Welfare::Halves(h) => serializer.serialize_str(&format!("{h}/2")),
        }
    }
}

// ---------------------------------------------------------------------------
// Instance
// ---------------------------------------------------------------------------

/// A game instance: `n` agents and the full ordered-pair utility table.
/// Diagonal entries are fixed to 0 and never consulted.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Instance {
    n: usize,
    symmetric: bool,
    table: Vec<Utility>,
}

impl Instance {
    /// Build an instance from a function over ordered pairs. The diagonal is
    /// forced to 0 regardless of `f`.
    pub fn from_fn(
        n: usize,
        symmetric: bool,
        mut f: impl FnMut(usize, usize) -> Utility,
    ) -> Result<Instance> {
        if n > MAX_AGENTS {
            return Err(Error::TooManyAgents {
                n,
                limit: MAX_AGENTS,
            });
        }
        let mut table = vec![Utility::ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let u = f(i, j);
                if let Utility::Finite(v) = u {
                    if v.abs() > Utility::MAX_MAGNITUDE {
                        return Err(Error::UtilityOutOfRange { value: v });
                    }
                }
                table[i * n + j] = u;
            }
        }
        let inst = Instance {
            n,
            symmetric,
            table,
        };
        if symmetric {
            inst.check_symmetry()?;
        }
        Ok(inst)
    }

    fn check_symmetry(&self) -> Result<()> {
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.utility(i, j) != self.utility(j, i) {
                    return Err(Error::AsymmetricEntry { i, j });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// `u[i][j]`: what `i` gets from sharing a component with `j`.
    pub fn utility(&self, i: usize, j: usize) -> Utility {
        self.table[i * self.n + j]
    }

    /// A pair conflicts when either direction is `-inf`; co-membership is then
    /// untenable for at least one side.
    pub fn conflict(&self, i: usize, j: usize) -> bool {
        self.utility(i, j).is_neg_inf() || self.utility(j, i).is_neg_inf()
    }

    /// True when the instance is symmetric with every off-diagonal entry in
    /// `{-inf, 1}` — the friends/enemies shape required by the peeling and
    /// dynamics algorithms.
    pub fn is_friends_enemies(&self) -> bool {
        if !self.symmetric {
            return false;
        }
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                i == j || matches!(self.utility(i, j), Utility::NegInf | Utility::Finite(1))
            })
        })
    }

    pub fn conflict_graph(&self) -> ConflictGraph {
        let mut rows = vec![BitSet::new(self.n); self.n];
        for (i, row) in rows.iter_mut().enumerate() {
            for j in 0..self.n {
                if i != j && self.conflict(i, j) {
                    row.insert(j);
                }
            }
        }
        ConflictGraph { n: self.n, rows }
    }

    pub fn to_json(&self) -> String {
        let dto = self.to_dto();
        serde_json::to_string(&dto).expect("instance serialization cannot fail")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_dto()).expect("instance serialization cannot fail")
    }

    fn to_dto(&self) -> InstanceDto {
        // The default is the most frequent off-diagonal value, ties resolved
        // downward, so that serialization is canonical and compact.
        let mut counts: Vec<(Utility, usize)> = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                let u = self.utility(i, j);
                match counts.iter_mut().find(|(v, _)| *v == u) {
                    Some((_, c)) => *c += 1,
                    None => counts.push((u, 1)),
                }
            }
        }
        counts.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let default = counts.first().map(|(v, _)| *v).unwrap_or(Utility::ONE);

        let mut pairs = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let fwd = self.utility(i, j);
                let back = self.utility(j, i);
                if fwd == default && back == default {
                    continue;
                }
                pairs.push(PairDto {
                    i,
                    j,
                    u_ij: fwd,
                    u_ji: if back == fwd { None } else { Some(back) },
                });
            }
        }
        InstanceDto {
            n: self.n,
            symmetric: self.symmetric,
            default,
            pairs,
        }
    }

    pub fn from_json(text: &str) -> Result<Instance> {
        let dto: InstanceDto = serde_json::from_str(text)?;
        dto.into_instance()
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceDto {
    n: usize,
    symmetric: bool,
    default: Utility,
    pairs: Vec<PairDto>,
}

#[derive(Serialize, Deserialize)]
struct PairDto {
    i: usize,
    j: usize,
    u_ij: Utility,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    u_ji: Option<Utility>,
}

impl InstanceDto {
    fn into_instance(self) -> Result<Instance> {
        if self.n > MAX_AGENTS {
            return Err(Error::TooManyAgents {
                n: self.n,
                limit: MAX_AGENTS,
            });
        }
        let n = self.n;
        let mut table = vec![self.default; n * n];
        for i in 0..n {
            table[i * n + i] = Utility::ZERO;
        }
        let mut seen = BTreeSet::new();
        for p in &self.pairs {
            if p.i >= n {
                return Err(Error::AgentOutOfRange { index: p.i, n });
            }
            if p.j >= n {
                return Err(Error::AgentOutOfRange { index: p.j, n });
            }
            if p.i == p.j {
                return Err(Error::SelfPair { i: p.i });
            }
            let key = (p.i.min(p.j), p.i.max(p.j));
            if !seen.insert(key) {
                return Err(Error::DuplicatePair { i: key.0, j: key.1 });
            }
            table[p.i * n + p.j] = p.u_ij;
            table[p.j * n + p.i] = p.u_ji.unwrap_or(p.u_ij);
        }
        for &u in &table {
            if let Utility::Finite(v) = u {
                if v.abs() > Utility::MAX_MAGNITUDE {
                    return Err(Error::UtilityOutOfRange { value: v });
                }
            }
        }
        let inst = Instance {
            n,
            symmetric: self.symmetric,
            table,
        };
        if inst.symmetric {
            inst.check_symmetry()?;
        }
        Ok(inst)
    }
}

// ---------------------------------------------------------------------------
// Network
// ---------------------------------------------------------------------------

/// An undirected information-sharing network (also used as a plain simple
/// graph by the reductions). Edges are stored as normalized `(low, high)`
/// pairs; no self-loops.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Network {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Network {
    pub fn empty(n: usize) -> Network {
        Network {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Network>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut net = Network::empty(n);
        for (a, b) in edges {
            net.add_edge(a, b)?;
        }
        Ok(net)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if a >= self.n {
            return Err(Error::AgentOutOfRange {
                index: a,
                n: self.n,
            });
        }
        if b >= self.n {
            return Err(Error::AgentOutOfRange {
                index: b,
                n: self.n,
            });
        }
        if a == b {
            return Err(Error::SelfPair { i: a });
        }
        self.edges.insert((a.min(b), a.max(b)));
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Connected components, canonically ordered.
    pub fn components(&self) -> CliquePartition {
        let mut parent: Vec<usize> = (0..self.n).collect();
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
        for &(a, b) in &self.edges {
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut assignment = vec![usize::MAX; self.n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for v in 0..self.n {
            let root = find(&mut parent, v);
            if assignment[root] == usize::MAX {
                assignment[root] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[assignment[root]].push(v);
        }
        CliquePartition::from_canonical_blocks(self.n, blocks)
    }

    /// Replace every component by a complete graph on its members. Components
    /// are unchanged, so all utilities are unchanged.
    pub fn cliqueify(&self) -> Network {
        self.components().to_network()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("network serialization cannot fail")
    }

    /// Accepts both the edge-list form `{"n", "edges": [[i,j],...]}` and the
    /// clique-partition form `{"n", "blocks": [[...],...]}`.
    pub fn from_json(text: &str) -> Result<Network> {
        #[derive(Deserialize)]
        struct Dto {
            n: usize,
            #[serde(default)]
            edges: Option<Vec<(usize, usize)>>,
            #[serde(default)]
            blocks: Option<Vec<Vec<usize>>>,
        }
        let dto: Dto = serde_json::from_str(text)?;
        match (dto.edges, dto.blocks) {
            (Some(edges), None) => Network::from_edges(dto.n, edges),
            (None, Some(blocks)) => Ok(CliquePartition::from_blocks(dto.n, blocks)?.to_network()),
            _ => Err(Error::Parse(
                "network file must contain exactly one of \"edges\" or \"blocks\"".into(),
            )),
        }
    }
}

impl Serialize for Network {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Dto<'a> {
            n: usize,
            edges: &'a BTreeSet<(usize, usize)>,
        }
        Dto {
            n: self.n,
            edges: &self.edges,
        }
        .serialize(serializer)
    }
}

// ---------------------------------------------------------------------------
// Clique partitions
// ---------------------------------------------------------------------------

/// A partition of the agents into blocks; the canonical form of a network
/// whose components are cliques. Blocks are sorted internally and ordered by
/// smallest member.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CliquePartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl CliquePartition {
    pub fn singletons(n: usize) -> CliquePartition {
        CliquePartition {
            n,
            blocks: (0..n).map(|i| vec![i]).collect(),
            block_of: (0..n).collect(),
        }
    }

    pub fn from_blocks(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<CliquePartition> {
        blocks.retain(|b| !b.is_empty());
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        let mut seen = vec![false; n];
        for b in &blocks {
            for &v in b {
                if v >= n {
                    return Err(Error::AgentOutOfRange { index: v, n });
                }
                if seen[v] {
                    return Err(Error::NotAPartition);
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::NotAPartition);
        }
        Ok(Self::from_canonical_blocks(n, blocks))
    }

    /// `blocks` must already be sorted internally and ordered by smallest
    /// member, with every agent appearing exactly once.
    pub(crate) fn from_canonical_blocks(n: usize, blocks: Vec<Vec<usize>>) -> CliquePartition {
        let mut block_of = vec![0; n];
        for (bi, b) in blocks.iter().enumerate() {
            for &v in b {
                block_of[v] = bi;
            }
        }
        CliquePartition {
            n,
            blocks,
            block_of,
        }
    }

    /// Build from a restricted-growth assignment (`assignment[i]` = block
    /// label of agent `i`, labels appearing in first-use order). This is
    /// already the canonical order.
    pub(crate) fn from_assignment(assignment: &[usize]) -> CliquePartition {
        let n = assignment.len();
        let nblocks = assignment.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); nblocks];
        for (i, &b) in assignment.iter().enumerate() {
            blocks[b].push(i);
        }
        CliquePartition {
            n,
            blocks,
            block_of: assignment.to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_index_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    pub fn block_containing(&self, v: usize) -> &[usize] {
        &self.blocks[self.block_of[v]]
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    pub fn to_network(&self) -> Network {
        let mut net = Network::empty(self.n);
        for b in &self.blocks {
            for (idx, &v) in b.iter().enumerate() {
                for &w in &b[idx + 1..] {
                    net.edges.insert((v, w));
                }
            }
        }
        net
    }

    /// No block contains a conflicting pair of `inst`.
    pub fn is_conflict_free(&self, inst: &Instance) -> bool {
        self.blocks.iter().all(|b| {
            b.iter()
                .enumerate()
                .all(|(idx, &v)| b[idx + 1..].iter().all(|&w| !inst.conflict(v, w)))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("partition serialization cannot fail")
    }
}

impl Serialize for CliquePartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Dto<'a> {
            n: usize,
            blocks: &'a [Vec<usize>],
        }
        Dto {
            n: self.n,
            blocks: &self.blocks,
        }
        .serialize(serializer)
    }
}

// ---------------------------------------------------------------------------
// Conflict graph
// ---------------------------------------------------------------------------

/// The graph on the agents whose edges are the conflicting pairs. Stable
/// components must be independent sets of this graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConflictGraph {
    n: usize,
    rows: Vec<BitSet>,
}

impl ConflictGraph {
    pub fn from_enemy_pairs<I>(n: usize, pairs: I) -> Result<ConflictGraph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut rows = vec![BitSet::new(n); n];
        for (a, b) in pairs {
            if a >= n {
                return Err(Error::AgentOutOfRange { index: a, n });
            }
            if b >= n {
                return Err(Error::AgentOutOfRange { index: b, n });
            }
            if a == b {
                return Err(Error::SelfPair { i: a });
            }
            rows[a].insert(b);
            rows[b].insert(a);
        }
        Ok(ConflictGraph { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn are_enemies(&self, a: usize, b: usize) -> bool {
        self.rows[a].contains(b)
    }

    pub fn enemy_degree(&self, v: usize) -> usize {
        self.rows[v].count()
    }

    pub fn enemy_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in self.rows[a].iter() {
                if b > a {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count()).sum::<usize>() / 2
    }

    pub(crate) fn row(&self, v: usize) -> &BitSet {
        &self.rows[v]
    }

    /// Induced subgraph on `vertices` (must be sorted); vertex `k` of the
    /// result is `vertices[k]`, so index order is preserved.
    pub fn induced(&self, vertices: &[usize]) -> ConflictGraph {
        let m = vertices.len();
        let mut rows = vec![BitSet::new(m); m];
        for (a_new, &a_old) in vertices.iter().enumerate() {
            for (b_new, &b_old) in vertices.iter().enumerate().skip(a_new + 1) {
                if self.are_enemies(a_old, b_old) {
                    rows[a_new].insert(b_new);
                    rows[b_new].insert(a_new);
                }
            }
        }
        ConflictGraph { n: m, rows }
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Total utility of agent `i` in `net`: the sum of `u[i][j]` over the other
/// members of `i`'s component, `-inf` absorbing. A singleton gets 0.
pub fn node_utility(inst: &Instance, net: &Network, i: usize) -> Utility {
    node_utility_in_partition(inst, &net.components(), i)
}

pub fn node_utility_in_partition(inst: &Instance, part: &CliquePartition, i: usize) -> Utility {
    utility_with_block(inst, part.block_containing(i), i)
}

/// Utility `i` derives from sharing a component with every member of `block`
/// (entries with `j == i` are skipped, so `block` may or may not contain `i`).
pub(crate) fn utility_with_block(inst: &Instance, block: &[usize], i: usize) -> Utility {
    let mut total = Utility::ZERO;
    for &j in block {
        if j != i {
            total = total.plus(inst.utility(i, j));
            if total.is_neg_inf() {
                return Utility::NegInf;
            }
        }
    }
    total
}

/// Total welfare of `net`: the sum over unordered co-component pairs of
/// `(u[i][j] + u[j][i]) / 2`, exact in half-units. Any co-component `-inf`
/// entry makes the total `-inf`.
pub fn total_welfare(inst: &Instance, net: &Network) -> Welfare {
    total_welfare_of_partition(inst, &net.components())
}

pub fn total_welfare_of_partition(inst: &Instance, part: &CliquePartition) -> Welfare {
    let mut halves = Welfare::ZERO;
    for block in part.blocks() {
        for (idx, &i) in block.iter().enumerate() {
            for &j in &block[idx + 1..] {
                halves = halves
                    .plus_utility(inst.utility(i, j))
                    .plus_utility(inst.utility(j, i));
                if halves.is_neg_inf() {
                    return Welfare::NegInf;
                }
            }
        }
    }
    halves
}

#[cfg(test)]
mod tests {
    use super::*;

    fn friends_with_enemies(n: usize, enemies: &[(usize, usize)]) -> Instance {
        Instance::from_fn(n, true, |i, j| {
            if enemies.contains(&(i.min(j), i.max(j))) {
                Utility::NegInf
            } else {
                Utility::ONE
            }
        })
        .unwrap()
    }

    #[test]
    fn components_of_empty_graph_are_singletons() {
        let net = Network::empty(4);
        let part = net.components();
        assert_eq!(part.blocks(), &[vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn components_follow_paths() {
        let net = Network::from_edges(4, [(0, 1), (1, 2)]).unwrap();
        let part = net.components();
        assert_eq!(part.blocks(), &[vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn components_of_two_triangles() {
        let net = Network::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let part = net.components();
        assert_eq!(part.block_count(), 2);
        assert!(part.blocks().iter().all(|b| b.len() == 3));
    }

    #[test]
    fn node_utility_singleton_is_zero() {
        let inst = friends_with_enemies(3, &[]);
        let net = Network::empty(3);
        assert_eq!(node_utility(&inst, &net, 0), Utility::ZERO);
    }

    #[test]
    fn node_utility_in_friendly_clique() {
        // In a clique of c mutual friends each member gets c - 1.
        let inst = friends_with_enemies(5, &[]);
        let net = CliquePartition::from_blocks(5, vec![vec![0, 1, 2, 3], vec![4]])
            .unwrap()
            .to_network();
        assert_eq!(node_utility(&inst, &net, 0), Utility::Finite(3));
        assert_eq!(node_utility(&inst, &net, 4), Utility::ZERO);
    }

    #[test]
    fn node_utility_absorbs_enemy() {
        let inst = friends_with_enemies(3, &[(0, 2)]);
        let net = Network::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(node_utility(&inst, &net, 0), Utility::NegInf);
        assert_eq!(node_utility(&inst, &net, 1), Utility::Finite(2));
    }

    #[test]
    fn welfare_counts_each_pair_once() {
        // A 4-clique of mutual friends plus singletons: six friendly pairs.
        let inst = friends_with_enemies(8, &[]);
        let net = CliquePartition::from_blocks(
            8,
            vec![vec![0, 1, 2, 3], vec![4], vec![5], vec![6], vec![7]],
        )
        .unwrap()
        .to_network();
        assert_eq!(total_welfare(&inst, &net), Welfare::Halves(12));
        assert_eq!(total_welfare(&inst, &net).as_integer(), Some(6));
    }

    #[test]
    fn welfare_of_empty_network_is_zero() {
        let inst = friends_with_enemies(4, &[(0, 1)]);
        assert_eq!(total_welfare(&inst, &Network::empty(4)), Welfare::ZERO);
    }

    #[test]
    fn asymmetric_welfare_in_half_units() {
        let inst = Instance::from_fn(2, false, |i, _| {
            if i == 0 {
                Utility::Finite(2)
            } else {
                Utility::Finite(1)
            }
        })
        .unwrap();
        let net = Network::from_edges(2, [(0, 1)]).unwrap();
        let w = total_welfare(&inst, &net);
        assert_eq!(w, Welfare::Halves(3));
        assert_eq!(w.as_integer(), None);
        assert_eq!(w.to_string(), "3/2");
    }

    #[test]
    fn cliqueify_preserves_components() {
        let net = Network::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let cl = net.cliqueify();
        assert_eq!(cl.components(), net.components());
        assert!(cl.has_edge(0, 2));
    }

    #[test]
    fn conflict_graph_uses_either_direction() {
        let mut inst = Instance::from_fn(2, false, |_, _| Utility::ONE).unwrap();
        inst.table[1] = Utility::NegInf; // u[0][1] = -inf, u[1][0] = 1
        let h = inst.conflict_graph();
        assert!(h.are_enemies(0, 1));
        assert_eq!(h.enemy_pairs(), vec![(0, 1)]);
    }

    #[test]
    fn all_friends_has_empty_conflict_graph() {
        let inst = friends_with_enemies(4, &[]);
        assert_eq!(inst.conflict_graph().edge_count(), 0);
    }

    #[test]
    fn instance_json_round_trip() {
        let inst = friends_with_enemies(4, &[(0, 3), (1, 2)]);
        let text = inst.to_json();
        let back = Instance::from_json(&text).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn neg_inf_token_parses() {
        let text = r#"{"n":2,"symmetric":true,"default":1,"pairs":[{"i":0,"j":1,"u_ij":"-inf"}]}"#;
        let inst = Instance::from_json(text).unwrap();
        assert!(inst.utility(0, 1).is_neg_inf());
        assert!(inst.utility(1, 0).is_neg_inf());
    }

    #[test]
    fn duplicate_pair_rejected() {
        let text = r#"{"n":3,"symmetric":true,"default":1,
            "pairs":[{"i":0,"j":1,"u_ij":1},{"i":1,"j":0,"u_ij":1}]}"#;
        assert!(matches!(
            Instance::from_json(text),
            Err(Error::DuplicatePair { i: 0, j: 1 })
        ));
    }

    #[test]
    fn asymmetry_violation_rejected() {
        let text = r#"{"n":2,"symmetric":true,"default":1,
            "pairs":[{"i":0,"j":1,"u_ij":1,"u_ji":2}]}"#;
        assert!(matches!(
            Instance::from_json(text),
            Err(Error::AsymmetricEntry { .. })
        ));
    }

    #[test]
    fn out_of_range_index_rejected() {
        let text = r#"{"n":2,"symmetric":true,"default":1,"pairs":[{"i":0,"j":5,"u_ij":1}]}"#;
        assert!(matches!(
            Instance::from_json(text),
            Err(Error::AgentOutOfRange { index: 5, n: 2 })
        ));
    }

    #[test]
    fn network_json_accepts_blocks_form() {
        let net = Network::from_json(r#"{"n":4,"blocks":[[0,1],[2],[3]]}"#).unwrap();
        assert!(net.has_edge(0, 1));
        assert_eq!(net.edge_count(), 1);
        let round = Network::from_json(&net.to_json()).unwrap();
        assert_eq!(round, net);
    }

    #[test]
    fn minimal_symmetric_instance_round_trips() {
        let inst = friends_with_enemies(2, &[]);
        assert_eq!(Instance::from_json(&inst.to_json()).unwrap(), inst);
    }

    #[test]
    fn utility_ordering_and_absorption() {
        assert!(Utility::NegInf < Utility::Finite(i64::MIN / 4));
        assert_eq!(
            Utility::NegInf.plus(Utility::Finite(7)),
            Utility::NegInf
        );
        assert_eq!(
            Utility::Finite(2).plus(Utility::Finite(3)),
            Utility::Finite(5)
        );
    }

    #[test]
    fn utility_magnitude_guard() {
        assert!(Utility::finite(Utility::MAX_MAGNITUDE).is_ok());
        assert!(Utility::finite(Utility::MAX_MAGNITUDE + 1).is_err());
    }
}
