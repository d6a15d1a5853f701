//! Independent checks of compiler output.
//!
//! [`Tableau`] is a stabilizer-only tableau (no destabilizers) over GF(2)
//! with sign tracking. It replays a compiled schedule as a sequence of
//! forced `+1` projections and compares the resulting group against the
//! graph-state generators. The brute-force oracles give exact references
//! for round packing and minimum cuts on small instances.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::scheduler::{AncillaBlock, Schedule};
use crate::stabilizer::{stabilizer_generators, InitBasis, Pauli, PauliString, ReductionPlan};

pub const ORACLE_MAX_BLOCKS: usize = 12;
pub const ORACLE_MAX_VERTICES: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("schedule does not cover the measured generators: missing {missing:?}, unexpected {unexpected:?}")]
    CoverageMismatch {
        missing: Vec<usize>,
        unexpected: Vec<usize>,
    },
    #[error("plan covers {plan} qubits but the graph has {graph}")]
    SizeMismatch { plan: usize, graph: usize },
    #[error("exhaustive search limited to {limit} items, got {got}")]
    TooLarge { limit: usize, got: usize },
    #[error("min cut oracle needs at least two vertices")]
    TooSmall,
}

/// One signed Pauli row in symplectic form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Row {
    x: Vec<u64>,
    z: Vec<u64>,
    negative: bool,
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

fn bit(v: &[u64], q: usize) -> bool {
    (v[q / 64] >> (q % 64)) & 1 == 1
}

impl Row {
    fn zero(n: usize) -> Self {
        Row {
            x: vec![0; words(n)],
            z: vec![0; words(n)],
            negative: false,
        }
    }

    fn from_pauli(p: &PauliString) -> Self {
        let mut row = Row::zero(p.len());
        for (q, l) in p.letters().iter().enumerate() {
            let (x, z) = l.bits();
            row.x[q / 64] |= (x as u64) << (q % 64);
            row.z[q / 64] |= (z as u64) << (q % 64);
        }
        row.negative = p.is_negative();
        row
    }

    fn to_pauli(&self, n: usize) -> PauliString {
        let letters = (0..n)
            .map(|q| Pauli::from_bits(bit(&self.x, q), bit(&self.z, q)))
            .collect();
        PauliString::new(letters, self.negative)
    }

    fn anticommutes(&self, other: &Row) -> bool {
        let mut parity = 0;
        for w in 0..self.x.len() {
            parity ^= ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones() & 1;
        }
        parity == 1
    }

    fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// `self <- other * self` for commuting rows.
    ///
    /// The phase exponent of `i` is accumulated per qubit with the usual
    /// `g(x1, z1, x2, z2)` table; for commuting Hermitian Paulis the total is
    /// even and only flips the sign.
    fn left_multiply(&mut self, other: &Row) {
        let mut exponent: i64 = 0;
        for w in 0..self.x.len() {
            let support = self.x[w] | self.z[w] | other.x[w] | other.z[w];
            let mut bits = support;
            while bits != 0 {
                let b = bits.trailing_zeros();
                bits &= bits - 1;
                let x1 = (other.x[w] >> b) & 1 == 1;
                let z1 = (other.z[w] >> b) & 1 == 1;
                let x2 = (self.x[w] >> b) & 1 == 1;
                let z2 = (self.z[w] >> b) & 1 == 1;
                exponent += phase_exponent(x1, z1, x2, z2);
            }
            self.x[w] ^= other.x[w];
            self.z[w] ^= other.z[w];
        }
        let total = (exponent + 2 * (self.negative as i64) + 2 * (other.negative as i64)).rem_euclid(4);
        debug_assert!(total % 2 == 0, "product of anticommuting rows");
        self.negative = total == 2;
    }
}

/// Power of `i` picked up when single-qubit Pauli `(x1, z1)` multiplies
/// `(x2, z2)` from the left.
fn phase_exponent(x1: bool, z1: bool, x2: bool, z2: bool) -> i64 {
    let (x2, z2) = (x2 as i64, z2 as i64);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

/// Outcome of a forced `+1` projection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    /// `p` anticommuted with the group; the tableau now contains `+p`.
    Updated,
    /// `+p` was already in the group.
    AlreadyStabilized,
    /// `-p` is in the group, so a `+1` outcome is impossible. The tableau is
    /// left unchanged; a real device would track the sign classically.
    SignConflict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    rows: Vec<Row>,
}

impl Tableau {
    /// Product state from the plan's initialization bases.
    pub fn from_plan(plan: &ReductionPlan) -> Self {
        let n = plan.n();
        let rows = plan
            .init_basis
            .iter()
            .enumerate()
            .map(|(q, b)| {
                let p = match b {
                    InitBasis::Plus => Pauli::X,
                    InitBasis::Zero => Pauli::Z,
                };
                Row::from_pauli(&PauliString::single(n, q, p))
            })
            .collect();
        Tableau { n, rows }
    }

    /// Tableau whose rows are the given generators. Validity is not checked;
    /// see [`Tableau::is_valid`].
    pub fn from_generators(gens: &[PauliString]) -> Self {
        let n = gens.first().map_or(0, PauliString::len);
        Tableau {
            n,
            rows: gens.iter().map(Row::from_pauli).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<PauliString> {
        self.rows.iter().map(|r| r.to_pauli(self.n)).collect()
    }

    /// Rows pairwise commute and are independent with full rank `n`.
    pub fn is_valid(&self) -> bool {
        if self.rows.len() != self.n {
            return false;
        }
        for (i, a) in self.rows.iter().enumerate() {
            if self.rows[i + 1..].iter().any(|b| a.anticommutes(b)) {
                return false;
            }
        }
        Echelon::new(&self.rows, self.n).rank == self.n
    }

    /// Measures `p` and forces the `+1` outcome.
    pub fn project(&mut self, p: &PauliString) -> Projection {
        let row = Row::from_pauli(p);
        let anti: Vec<usize> = (0..self.rows.len())
            .filter(|&i| self.rows[i].anticommutes(&row))
            .collect();
        match anti.split_first() {
            Some((&pivot, others)) => {
                let pivot_row = self.rows[pivot].clone();
                for &i in others {
                    self.rows[i].left_multiply(&pivot_row);
                }
                self.rows[pivot] = row;
                Projection::Updated
            }
            None => match Echelon::new(&self.rows, self.n).sign_of(&row) {
                Some(false) if !row.negative => Projection::AlreadyStabilized,
                Some(true) if row.negative => Projection::AlreadyStabilized,
                _ => Projection::SignConflict,
            },
        }
    }

    /// Whether the group generated by the rows equals the group generated by
    /// `target`, signs included. Requires `target` to have `n` independent
    /// members; a shorter or dependent list never matches.
    pub fn stabilizer_groups_equal(&self, target: &[PauliString]) -> bool {
        self.first_unstabilized(target).is_none()
            && target.len() == self.n
            && Echelon::new(&target.iter().map(Row::from_pauli).collect::<Vec<_>>(), self.n).rank == self.n
            && Echelon::new(&self.rows, self.n).rank == self.n
    }

    /// Index of the first target element not in the group with its sign.
    pub fn first_unstabilized(&self, target: &[PauliString]) -> Option<usize> {
        let echelon = Echelon::new(&self.rows, self.n);
        target.iter().position(|p| {
            let row = Row::from_pauli(p);
            echelon.sign_of(&row) != Some(row.negative)
        })
    }
}

/// Row-reduced copy of a generating set. Row operations are group
/// multiplications, so signs stay exact.
struct Echelon {
    rows: Vec<Row>,
    /// Symplectic column (0..n for x, n..2n for z) of each row's pivot.
    pivots: Vec<usize>,
    rank: usize,
    n: usize,
}

fn sym_bit(row: &Row, col: usize, n: usize) -> bool {
    if col < n {
        bit(&row.x, col)
    } else {
        bit(&row.z, col - n)
    }
}

impl Echelon {
    fn new(rows: &[Row], n: usize) -> Self {
        let mut rows = rows.to_vec();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..2 * n {
            let Some(found) = (rank..rows.len()).find(|&r| sym_bit(&rows[r], col, n)) else {
                continue;
            };
            rows.swap(rank, found);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && sym_bit(row, col, n) {
                    row.left_multiply(&pivot);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        rows.truncate(rank);
        Echelon { rows, pivots, rank, n }
    }

    /// Sign (`true` = negative) with which the Pauli part of `row` belongs to
    /// the group, or `None` if it is not in the group up to sign. `row` must
    /// commute with every generator.
    fn sign_of(&self, row: &Row) -> Option<bool> {
        let mut residue = row.clone();
        let mut product = Row::zero(self.n);
        for (pivot, &col) in self.rows.iter().zip(&self.pivots) {
            if sym_bit(&residue, col, self.n) {
                residue.x.iter_mut().zip(&pivot.x).for_each(|(a, b)| *a ^= b);
                residue.z.iter_mut().zip(&pivot.z).for_each(|(a, b)| *a ^= b);
                product.left_multiply(pivot);
            }
        }
        residue.is_identity().then_some(product.negative)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub checked_generators: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// Replays `order` as forced `+1` projections onto the plan's product state
/// and checks the result is the graph state of `g`.
pub fn verify_measurements(g: &Graph, plan: &ReductionPlan, order: &[usize]) -> Result<VerifyReport, VerifyError> {
    if plan.n() != g.n() {
        return Err(VerifyError::SizeMismatch {
            plan: plan.n(),
            graph: g.n(),
        });
    }
    let target = stabilizer_generators(g);
    let mut tableau = Tableau::from_plan(plan);
    for &v in order {
        if tableau.project(&target[v]) == Projection::SignConflict {
            return Ok(VerifyReport {
                pass: false,
                checked_generators: 0,
                failure: Some(format!("projection of g{v} ({}) has no +1 outcome", target[v])),
            });
        }
    }
    debug_assert!(tableau.is_valid());
    let failure = tableau
        .first_unstabilized(&target)
        .map(|v| format!("generator g{v} ({}) does not stabilize the prepared state", target[v]));
    Ok(VerifyReport {
        pass: failure.is_none(),
        checked_generators: target.len(),
        failure,
    })
}

/// Verifies a compiled schedule. The schedule must measure exactly the
/// plan's generators.
pub fn verify_compilation(g: &Graph, plan: &ReductionPlan, schedule: &Schedule) -> Result<VerifyReport, VerifyError> {
    let order: Vec<usize> = schedule.generators().collect();
    let scheduled: HashSet<usize> = order.iter().copied().collect();
    let planned: HashSet<usize> = plan.measured.iter().copied().collect();
    let mut missing: Vec<usize> = planned.difference(&scheduled).copied().collect();
    let mut unexpected: Vec<usize> = scheduled.difference(&planned).copied().collect();
    if scheduled.len() != order.len() {
        // Duplicates count as unexpected extras.
        let mut seen = HashSet::new();
        unexpected.extend(order.iter().filter(|v| !seen.insert(**v)));
    }
    if !missing.is_empty() || !unexpected.is_empty() {
        missing.sort_unstable();
        unexpected.sort_unstable();
        unexpected.dedup();
        return Err(VerifyError::CoverageMismatch { missing, unexpected });
    }
    verify_measurements(g, plan, &order)
}

/// Exact minimum number of rounds of pairwise-disjoint blocks, by
/// backtracking over round assignments.
pub fn oracle_min_rounds(blocks: &[AncillaBlock]) -> Result<usize, VerifyError> {
    if blocks.len() > ORACLE_MAX_BLOCKS {
        return Err(VerifyError::TooLarge {
            limit: ORACLE_MAX_BLOCKS,
            got: blocks.len(),
        });
    }
    fn fits(blocks: &[AncillaBlock], colour: &mut Vec<usize>, k: usize) -> bool {
        let i = colour.len();
        if i == blocks.len() {
            return true;
        }
        // Symmetry: block i may open at most one new round.
        let used = colour.iter().copied().max().map_or(0, |c| c + 1);
        for c in 0..k.min(used + 1) {
            let clash = colour
                .iter()
                .enumerate()
                .any(|(j, &cj)| cj == c && blocks[j].overlaps(&blocks[i]));
            if !clash {
                colour.push(c);
                if fits(blocks, colour, k) {
                    return true;
                }
                colour.pop();
            }
        }
        false
    }
    Ok((0..=blocks.len())
        .find(|&k| fits(blocks, &mut Vec::new(), k))
        .expect("one round per block always fits"))
}

/// Exact minimum edge cut over all nontrivial bipartitions.
pub fn oracle_min_cut(g: &Graph) -> Result<usize, VerifyError> {
    let n = g.n();
    if n < 2 {
        return Err(VerifyError::TooSmall);
    }
    if n > ORACLE_MAX_VERTICES {
        return Err(VerifyError::TooLarge {
            limit: ORACLE_MAX_VERTICES,
            got: n,
        });
    }
    // Vertex n-1 stays on side 0; masks over the other vertices.
    let best = (1u32..(1 << (n - 1)))
        .map(|mask| {
            g.edges()
                .iter()
                .filter(|&&(a, b)| ((mask >> a) & 1) != ((mask >> b) & 1))
                .count()
        })
        .min()
        .expect("n >= 2");
    Ok(best)
}
