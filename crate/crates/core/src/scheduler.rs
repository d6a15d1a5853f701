//! Packing of generator measurements into Tock rounds.
//!
//! Measuring `g_v` occupies the contiguous stretch of the ancilla bus between
//! the leftmost and rightmost row positions of `v` and its neighbours. Two
//! measurements can share a round only if their stretches have no position in
//! common.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::mapping::Mapping;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AncillaBlock {
    pub gen: usize,
    #[serde(rename = "L")]
    pub left: usize,
    #[serde(rename = "R")]
    pub right: usize,
}

impl AncillaBlock {
    pub fn new(gen: usize, left: usize, right: usize) -> Self {
        debug_assert!(left <= right);
        AncillaBlock { gen, left, right }
    }

    pub fn overlaps(&self, other: &AncillaBlock) -> bool {
        !(self.right < other.left || other.right < self.left)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub rounds: Vec<Vec<AncillaBlock>>,
    pub tocks: usize,
    pub lower_bound: usize,
}

impl Schedule {
    pub fn from_rounds(rounds: Vec<Vec<AncillaBlock>>) -> Self {
        let all: Vec<AncillaBlock> = rounds.iter().flatten().copied().collect();
        Schedule {
            tocks: rounds.len(),
            lower_bound: max_overlap_depth(&all),
            rounds,
        }
    }

    /// Generator indices in execution order.
    pub fn generators(&self) -> impl Iterator<Item = usize> + '_ {
        self.rounds.iter().flatten().map(|b| b.gen)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SchedulerKind {
    /// Repeated sweeps over blocks sorted by `(R, L)`.
    #[default]
    Paper,
    /// Left-endpoint order, each block into the first compatible round.
    FirstFit,
}

impl SchedulerKind {
    pub fn name(self) -> &'static str {
        match self {
            SchedulerKind::Paper => "paper",
            SchedulerKind::FirstFit => "first-fit",
        }
    }

    pub fn schedule(self, blocks: &[AncillaBlock]) -> Schedule {
        match self {
            SchedulerKind::Paper => schedule_paper_greedy(blocks),
            SchedulerKind::FirstFit => schedule_first_fit(blocks),
        }
    }
}

/// One block per measured generator, spanning the row positions of the
/// generator's vertex and its neighbours.
pub fn build_blocks(g: &Graph, measured: &[usize], mapping: &Mapping) -> Vec<AncillaBlock> {
    measured
        .iter()
        .map(|&v| {
            let p = mapping.position(v);
            let (left, right) = g
                .neighbors(v)
                .iter()
                .map(|&w| mapping.position(w))
                .fold((p, p), |(l, r), q| (l.min(q), r.max(q)));
            AncillaBlock::new(v, left, right)
        })
        .collect()
}

/// Max-`L` segment tree over blocks in sweep order, used to find the next
/// block a sweep would take without rescanning the list.
struct SweepTree {
    size: usize,
    max_left: Vec<i64>,
}

impl SweepTree {
    const TAKEN: i64 = -1;

    fn new(lefts: impl ExactSizeIterator<Item = usize>) -> Self {
        let size = lefts.len().next_power_of_two().max(1);
        let mut max_left = vec![Self::TAKEN; 2 * size];
        for (i, l) in lefts.enumerate() {
            max_left[size + i] = l as i64;
        }
        for node in (1..size).rev() {
            max_left[node] = max_left[2 * node].max(max_left[2 * node + 1]);
        }
        SweepTree { size, max_left }
    }

    /// First remaining index whose left end exceeds `bound`.
    fn first_above(&self, bound: i64) -> Option<usize> {
        if self.max_left[1] <= bound {
            return None;
        }
        let mut node = 1;
        while node < self.size {
            node = if self.max_left[2 * node] > bound {
                2 * node
            } else {
                2 * node + 1
            };
        }
        Some(node - self.size)
    }

    fn take(&mut self, index: usize) {
        let mut node = self.size + index;
        self.max_left[node] = Self::TAKEN;
        while node > 1 {
            node /= 2;
            self.max_left[node] = self.max_left[2 * node].max(self.max_left[2 * node + 1]);
        }
    }
}

/// Sorts blocks by `(R, L)` and repeatedly sweeps the list, taking every
/// block whose `L` exceeds the `R` of all blocks already in the round.
///
/// The next taken block is always the first remaining block (in sweep order)
/// with `L` above the current bound: blocks before the last one taken have
/// `L <= R <= bound`. That lets each pick be a tree descent instead of a
/// linear scan.
pub fn schedule_paper_greedy(blocks: &[AncillaBlock]) -> Schedule {
    let mut sorted = blocks.to_vec();
    sorted.sort_by_key(|b| (b.right, b.left, b.gen));
    let mut tree = SweepTree::new(sorted.iter().map(|b| b.left));
    let mut remaining = sorted.len();
    let mut rounds = Vec::new();
    while remaining > 0 {
        let mut round = Vec::new();
        let mut bound = -1i64;
        while let Some(i) = tree.first_above(bound) {
            tree.take(i);
            remaining -= 1;
            bound = sorted[i].right as i64;
            round.push(sorted[i]);
        }
        rounds.push(round);
    }
    Schedule::from_rounds(rounds)
}

/// Interval colouring in left-endpoint order. Uses exactly as many rounds as
/// the deepest point overlap, which is optimal.
pub fn schedule_first_fit(blocks: &[AncillaBlock]) -> Schedule {
    let mut sorted = blocks.to_vec();
    sorted.sort_by_key(|b| (b.left, b.right, b.gen));
    let mut rounds: Vec<Vec<AncillaBlock>> = Vec::new();
    // Blocks arrive by increasing L, so a round's last block has its max R.
    let mut ends: Vec<usize> = Vec::new();
    for b in sorted {
        match ends.iter().position(|&end| end < b.left) {
            Some(r) => {
                rounds[r].push(b);
                ends[r] = b.right;
            }
            None => {
                rounds.push(vec![b]);
                ends.push(b.right);
            }
        }
    }
    Schedule::from_rounds(rounds)
}

/// Largest number of blocks covering a single position.
pub fn max_overlap_depth(blocks: &[AncillaBlock]) -> usize {
    let mut events: Vec<(usize, i32)> = blocks.iter().flat_map(|b| [(b.left, 1), (b.right + 1, -1)]).collect();
    // Closing events sort before openings at the same coordinate.
    events.sort_unstable();
    let mut depth = 0i32;
    let mut best = 0i32;
    for (_, delta) in events {
        depth += delta;
        best = best.max(depth);
    }
    best as usize
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Missing {
        gen: usize,
    },
    Duplicate {
        gen: usize,
    },
    Unexpected {
        gen: usize,
    },
    WrongSpan {
        gen: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    Overlap {
        round: usize,
        first: AncillaBlock,
        second: AncillaBlock,
    },
    EmptyRound {
        round: usize,
    },
    TockMismatch {
        tocks: usize,
        rounds: usize,
    },
    LowerBoundMismatch {
        stored: usize,
        actual: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Missing { gen } => write!(f, "generator {gen} is never measured"),
            Violation::Duplicate { gen } => write!(f, "generator {gen} is measured more than once"),
            Violation::Unexpected { gen } => write!(f, "generator {gen} is not in the measurement list"),
            Violation::WrongSpan { gen, expected, found } => write!(
                f,
                "generator {gen} spans [{}, {}], expected [{}, {}]",
                found.0, found.1, expected.0, expected.1
            ),
            Violation::Overlap { round, first, second } => write!(
                f,
                "round {round}: generator {} [{}, {}] overlaps generator {} [{}, {}]",
                first.gen, first.left, first.right, second.gen, second.left, second.right
            ),
            Violation::EmptyRound { round } => write!(f, "round {round} is empty"),
            Violation::TockMismatch { tocks, rounds } => {
                write!(f, "tocks = {tocks} but the schedule has {rounds} rounds")
            }
            Violation::LowerBoundMismatch { stored, actual } => {
                write!(f, "stored lower bound {stored}, actual {actual}")
            }
        }
    }
}

impl Serialize for Violation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
    pub lower_bound: usize,
}

/// Checks that `schedule` measures each of `blocks` exactly once, with the
/// same span, and that no two blocks of a round share a position.
pub fn validate_schedule(schedule: &Schedule, blocks: &[AncillaBlock]) -> ValidationReport {
    let mut violations = Vec::new();
    let expected: HashMap<usize, &AncillaBlock> = blocks.iter().map(|b| (b.gen, b)).collect();
    let mut seen: HashMap<usize, usize> = HashMap::new();

    for (r, round) in schedule.rounds.iter().enumerate() {
        if round.is_empty() {
            violations.push(Violation::EmptyRound { round: r });
        }
        for b in round {
            *seen.entry(b.gen).or_default() += 1;
            match expected.get(&b.gen) {
                None => violations.push(Violation::Unexpected { gen: b.gen }),
                Some(e) if (e.left, e.right) != (b.left, b.right) => violations.push(Violation::WrongSpan {
                    gen: b.gen,
                    expected: (e.left, e.right),
                    found: (b.left, b.right),
                }),
                Some(_) => {}
            }
        }

        let mut sorted = round.clone();
        sorted.sort_by_key(|b| (b.left, b.right, b.gen));
        let mut widest: Option<AncillaBlock> = None;
        for b in sorted {
            if let Some(w) = widest {
                if b.left <= w.right {
                    violations.push(Violation::Overlap {
                        round: r,
                        first: w,
                        second: b,
                    });
                }
            }
            if widest.is_none_or(|w| b.right > w.right) {
                widest = Some(b);
            }
        }
    }

    let mut gens: Vec<usize> = seen.keys().copied().collect();
    gens.sort_unstable();
    for gen in gens {
        if seen[&gen] > 1 {
            violations.push(Violation::Duplicate { gen });
        }
    }
    for b in blocks {
        if !seen.contains_key(&b.gen) {
            violations.push(Violation::Missing { gen: b.gen });
        }
    }

    if schedule.tocks != schedule.rounds.len() {
        violations.push(Violation::TockMismatch {
            tocks: schedule.tocks,
            rounds: schedule.rounds.len(),
        });
    }
    let lower_bound = max_overlap_depth(blocks);
    if violations.is_empty() && schedule.lower_bound != lower_bound {
        violations.push(Violation::LowerBoundMismatch {
            stored: schedule.lower_bound,
            actual: lower_bound,
        });
    }

    ValidationReport {
        ok: violations.is_empty(),
        violations,
        lower_bound,
    }
}
