//! Potential functions over component-size vectors, used to prove (and at
//! runtime to check) termination of the improvement dynamics, plus the audit
//! showing that additive size-based potentials stop working once defections
//! of five or more agents are allowed.

use crate::model::{node_utility_in_partition, CliquePartition, Instance, Utility};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PotentialKind {
    /// Σ size², strictly increasing under the 2-stable dynamics.
    SumSquares,
    /// Σ size³, strictly increasing under improving ≤3-defections.
    SumCubes,
    /// The tabulated potential that certifies the 3-stable dynamics.
    ThreeStable,
    /// The tabulated potential that certifies the 4-stable dynamics.
    FourStable,
    /// Σ_i Σ_{j in C(i)} u_ij — increases under single-agent improving moves
    /// for arbitrary utilities.
    UtilitySum,
}

pub fn evaluate_potential(kind: PotentialKind, inst: &Instance, part: &CliquePartition) -> Utility {
    match kind {
        PotentialKind::SumSquares => Utility::Finite(sum_of_powers(&part.sizes(), 2)),
        PotentialKind::SumCubes => Utility::Finite(sum_of_powers(&part.sizes(), 3)),
        PotentialKind::ThreeStable => Utility::Finite(
            part.sizes()
                .iter()
                .map(|&s| three_stable_potential(s))
                .sum(),
        ),
        PotentialKind::FourStable => Utility::Finite(
            part.sizes()
                .iter()
                .map(|&s| four_stable_potential(s))
                .sum(),
        ),
        PotentialKind::UtilitySum => {
            let mut total = Utility::ZERO;
            for i in 0..part.n() {
                total = total.plus(node_utility_in_partition(inst, part, i));
                if total.is_neg_inf() {
                    return Utility::NegInf;
                }
            }
            total
        }
    }
}

pub fn sum_of_powers(sizes: &[usize], exp: u32) -> i64 {
    sizes.iter().map(|&s| (s as i64).pow(exp)).sum()
}

/// Per-block potential for the 3-stable dynamics: 1, 3, 7, then
/// `F(i) = 2 F(i-1) - F(i-2) + 1`.
pub fn three_stable_potential(size: usize) -> i64 {
    match size {
        0 => 0,
        1 => 1,
        2 => 3,
        3 => 7,
        _ => {
            let (mut a, mut b) = (3i64, 7i64); // F(2), F(3)
            for _ in 4..=size {
                let next = 2 * b - a + 1;
                a = b;
                b = next;
            }
            b
        }
    }
}

/// Closed form `(n + 4)(n - 1) / 2` of the 3-stable recurrence; agrees with
/// the table for every n ≥ 2 (the n = 1 base case is pinned at 1 instead).
pub fn three_stable_closed_form(n: usize) -> i64 {
    let n = n as i64;
    (n + 4) * (n - 1) / 2
}

/// Per-block potential for the 4-stable dynamics: 1, 3, 7, 17, then
/// `F(i) = 3 F(i-1) - 3 F(i-2) + F(i-3) + 1`.
pub fn four_stable_potential(size: usize) -> i64 {
    match size {
        0 => 0,
        1 => 1,
        2 => 3,
        3 => 7,
        4 => 17,
        _ => {
            let (mut a, mut b, mut c) = (3i64, 7i64, 17i64); // F(2), F(3), F(4)
            for _ in 5..=size {
                let next = 3 * c - 3 * b + a + 1;
                a = b;
                b = c;
                c = next;
            }
            c
        }
    }
}

/// Closed form `17(n-3) + (n-5)(n-4)(n-3)/6 + 7(n-5)(n-4)/2` of the 4-stable
/// recurrence, valid for n ≥ 5.
pub fn four_stable_closed_form(n: usize) -> i64 {
    let n = n as i64;
    17 * (n - 3) + (n - 5) * (n - 4) * (n - 3) / 6 + 7 * (n - 5) * (n - 4) / 2
}

/// Why no additive size-based potential certifies dynamics for defection
/// budgets of five or more.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditivePotentialAudit {
    /// Σ size⁶ over blocks `[5,5,5,5,5,1]`.
    pub pow6_before: i64,
    /// Σ size⁶ over blocks `[4,4,4,4,4,6]` — the state after one agent leaves
    /// each large block to join the singleton, a valid improving 6-defection.
    pub pow6_after: i64,
    /// The naive Σ size⁶ potential decreases across that defection.
    pub pow6_decreases: bool,
    /// Minimal integer chain satisfying the 5-defection constraints:
    /// `F(1)=1`, `2F(1)<F(2)`, `3F(2)<3F(1)+F(3)`, `4F(3)<4F(2)+F(4)`,
    /// `5F(4)<5F(3)+F(5)`, and `F(i) > 4(F(i-1)-F(i-2)) + F(i-4)` for i > 5.
    /// Index 0 is unused so `minimal_chain[i] = F(i)`.
    pub minimal_chain: Vec<i64>,
    /// Every chain entry with 1 ≤ i ≤ 15 satisfies `F(i) ≥ 2^(i-1)`.
    pub doubling_lower_bound_holds: bool,
}

pub fn additive_potential_audit() -> AdditivePotentialAudit {
    let before = sum_of_powers(&[5, 5, 5, 5, 5, 1], 6);
    let after = sum_of_powers(&[4, 4, 4, 4, 4, 6], 6);

    let mut f = vec![0i64; 16];
    f[1] = 1;
    f[2] = 2 * f[1] + 1;
    f[3] = 3 * f[2] - 3 * f[1] + 1;
    f[4] = 4 * f[3] - 4 * f[2] + 1;
    f[5] = 5 * f[4] - 5 * f[3] + 1;
    for i in 6..=15 {
        f[i] = 4 * (f[i - 1] - f[i - 2]) + f[i - 4] + 1;
    }
    let doubling = (1..=15).all(|i| f[i] >= 1i64 << (i - 1));

    AdditivePotentialAudit {
        pow6_before: before,
        pow6_after: after,
        pow6_decreases: after < before,
        minimal_chain: f,
        doubling_lower_bound_holds: doubling,
    }
}
