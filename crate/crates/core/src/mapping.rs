//! Vertex-to-position assignment on the one-dimensional qubit row.
//!
//! The min-cut mapper repeatedly splits the component holding the smallest
//! unplaced vertex along a randomized minimum cut. Once that component has
//! at most two vertices, they take the next free positions of the row and
//! are removed.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::rng::{derive_seed, seeded, stream};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MappingError {
    #[error("position array is not a permutation of 0..{n}: {detail}")]
    NotBijective { n: usize, detail: String },
    #[error("min cut needs at least two vertices, got {0}")]
    TooFewVertices(usize),
}

/// `pos[v]` is the row position of vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Mapping {
    pos: Vec<usize>,
}

impl Mapping {
    pub fn identity(n: usize) -> Self {
        Mapping { pos: (0..n).collect() }
    }

    pub fn from_positions(pos: Vec<usize>) -> Result<Self, MappingError> {
        let n = pos.len();
        let mut used = vec![false; n];
        for (v, &p) in pos.iter().enumerate() {
            if p >= n {
                return Err(MappingError::NotBijective {
                    n,
                    detail: format!("vertex {v} at position {p}"),
                });
            }
            if std::mem::replace(&mut used[p], true) {
                return Err(MappingError::NotBijective {
                    n,
                    detail: format!("position {p} used twice"),
                });
            }
        }
        Ok(Mapping { pos })
    }

    pub fn n(&self) -> usize {
        self.pos.len()
    }

    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    pub fn positions(&self) -> &[usize] {
        &self.pos
    }

    /// Vertex at each position, left to right.
    pub fn row(&self) -> Vec<usize> {
        let mut row = vec![0; self.n()];
        for (v, &p) in self.pos.iter().enumerate() {
            row[p] = v;
        }
        row
    }
}

impl TryFrom<Vec<usize>> for Mapping {
    type Error = MappingError;

    fn try_from(pos: Vec<usize>) -> Result<Self, Self::Error> {
        Mapping::from_positions(pos)
    }
}

impl From<Mapping> for Vec<usize> {
    fn from(m: Mapping) -> Self {
        m.pos
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasicMapper {
    Natural,
    Random,
}

pub fn basic_mapping(g: &Graph, kind: BasicMapper, seed: u64) -> Mapping {
    match kind {
        BasicMapper::Natural => Mapping::identity(g.n()),
        BasicMapper::Random => {
            let mut pos: Vec<usize> = (0..g.n()).collect();
            pos.shuffle(&mut seeded(seed));
            Mapping { pos }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutResult {
    pub cut_size: usize,
    pub cut_edges: Vec<(usize, usize)>,
    /// Side 0 holds vertex 0.
    pub sides: [Vec<usize>; 2],
}

/// Best cut over `repetitions` independent contraction runs of Karger's
/// algorithm. Ties go to the earliest run.
pub fn karger_min_cut(g: &Graph, repetitions: usize, seed: u64) -> Result<CutResult, MappingError> {
    let n = g.n();
    if n < 2 {
        return Err(MappingError::TooFewVertices(n));
    }
    let side = min_cut_sides(n, g.edges(), repetitions, seed);
    let cut_edges: Vec<_> = g.edges().iter().copied().filter(|&(a, b)| side[a] != side[b]).collect();
    let sides = [
        (0..n).filter(|&v| !side[v]).collect(),
        (0..n).filter(|&v| side[v]).collect(),
    ];
    Ok(CutResult {
        cut_size: cut_edges.len(),
        cut_edges,
        sides,
    })
}

struct DisjointSets {
    parent: Vec<u32>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n as u32).collect(),
        }
    }

    fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb) as usize] = ra.min(rb);
        true
    }
}

/// Side assignment (`true` = far side) of the best cut found on the graph
/// `(k, edges)`. Vertex 0 is always on the near side.
fn min_cut_sides(k: usize, edges: &[(usize, usize)], repetitions: usize, seed: u64) -> Vec<bool> {
    let mut sets = DisjointSets::new(k);
    let mut pieces = k;
    for &(a, b) in edges {
        if sets.union(a as u32, b as u32) {
            pieces -= 1;
        }
    }
    if pieces > 1 {
        // Disconnected: the component of vertex 0 against the rest cuts nothing.
        let root = sets.find(0);
        return (0..k).map(|v| sets.find(v as u32) != root).collect();
    }

    let mut order: Vec<u32> = (0..edges.len() as u32).collect();
    let mut best: Option<(usize, Vec<bool>)> = None;
    for run in 0..repetitions.max(1) {
        let mut rng = stream(seed, run as u64);
        sets.reset();
        let mut left = k;
        // Contracting a uniformly random remaining edge is the same as taking
        // edges in uniformly random order and skipping those inside a
        // super-vertex; draw the order lazily.
        let mut i = 0;
        while left > 2 {
            let j = rng.gen_range(i..order.len());
            order.swap(i, j);
            let (a, b) = edges[order[i] as usize];
            if sets.union(a as u32, b as u32) {
                left -= 1;
            }
            i += 1;
        }
        let cut = edges
            .iter()
            .filter(|&&(a, b)| sets.find(a as u32) != sets.find(b as u32))
            .count();
        if best.as_ref().is_none_or(|(size, _)| cut < *size) {
            let root = sets.find(0);
            let side = (0..k).map(|v| sets.find(v as u32) != root).collect();
            best = Some((cut, side));
            if cut <= 1 {
                // A connected graph has no smaller cut; later runs cannot win.
                break;
            }
        }
    }
    best.expect("at least one run").1
}

/// Repetition policy for the cuts made by the min-cut mapper.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KargerBudget {
    /// Fixed number of runs per cut; `None` selects the automatic count.
    pub repetitions: Option<usize>,
    /// Automatic count is `ceil(c * k^2 * ln k)` runs for a `k`-vertex piece.
    pub c: f64,
    /// Cap on edge contractions spent on one cut. A run on `k` vertices
    /// performs `k - 2` contractions.
    pub max_contractions: usize,
}

impl Default for KargerBudget {
    fn default() -> Self {
        KargerBudget {
            repetitions: None,
            c: 1.0,
            max_contractions: 100_000,
        }
    }
}

impl KargerBudget {
    pub fn fixed(repetitions: usize) -> Self {
        KargerBudget {
            repetitions: Some(repetitions),
            ..KargerBudget::default()
        }
    }

    pub fn runs_for(&self, k: usize) -> usize {
        if let Some(r) = self.repetitions {
            return r.max(1);
        }
        let kf = k as f64;
        let auto = (self.c * kf * kf * kf.ln()).ceil().max(1.0) as usize;
        let cap = (self.max_contractions / k.saturating_sub(2).max(1)).max(1);
        auto.min(cap)
    }
}

/// One split performed by the min-cut mapper.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutRecord {
    pub component: Vec<usize>,
    pub cut_size: usize,
    pub sides: [Vec<usize>; 2],
}

pub fn mincut_mapping(g: &Graph, budget: &KargerBudget, seed: u64) -> Mapping {
    mincut_mapping_traced(g, budget, seed).0
}

/// Min-cut mapping together with every cut it made, in order.
pub fn mincut_mapping_traced(g: &Graph, budget: &KargerBudget, seed: u64) -> (Mapping, Vec<CutRecord>) {
    let n = g.n();
    let mut pos = vec![usize::MAX; n];
    let mut next = 0;
    let mut trace = Vec::new();
    let mut local = vec![usize::MAX; n];

    let mut pending: BTreeMap<usize, Vec<usize>> = g.components().into_iter().map(|c| (c[0], c)).collect();

    while let Some((_, comp)) = pending.pop_first() {
        if comp.len() <= 2 {
            for v in comp {
                pos[v] = next;
                next += 1;
            }
            continue;
        }

        for (i, &v) in comp.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for &v in &comp {
            for &w in g.neighbors(v) {
                if w > v && local[w] != usize::MAX {
                    edges.push((local[v], local[w]));
                }
            }
        }
        let k = comp.len();
        let cut_seed = derive_seed(seed, trace.len() as u64);
        let side = min_cut_sides(k, &edges, budget.runs_for(k), cut_seed);

        let kept: Vec<_> = edges.iter().copied().filter(|&(a, b)| side[a] == side[b]).collect();
        let sides = [
            comp.iter()
                .enumerate()
                .filter(|(i, _)| !side[*i])
                .map(|(_, &v)| v)
                .collect(),
            comp.iter()
                .enumerate()
                .filter(|(i, _)| side[*i])
                .map(|(_, &v)| v)
                .collect(),
        ];
        trace.push(CutRecord {
            component: comp.clone(),
            cut_size: edges.len() - kept.len(),
            sides,
        });

        for piece in local_components(k, &kept) {
            let piece: Vec<usize> = piece.into_iter().map(|i| comp[i]).collect();
            pending.insert(piece[0], piece);
        }
        for &v in &comp {
            local[v] = usize::MAX;
        }
    }

    (Mapping { pos }, trace)
}

/// Components of `(k, edges)`, each ascending.
fn local_components(k: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut sets = DisjointSets::new(k);
    for &(a, b) in edges {
        sets.union(a as u32, b as u32);
    }
    let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for v in 0..k {
        groups.entry(sets.find(v as u32)).or_default().push(v);
    }
    groups.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphSpec};
    use crate::verify::oracle_min_cut;
    use proptest::prelude::*;

    #[test]
    fn basic_mappings() {
        let p3 = generate(GraphSpec::Path(3), 0).unwrap();
        assert_eq!(basic_mapping(&p3, BasicMapper::Natural, 0).positions(), &[0, 1, 2]);
        let k4 = generate(GraphSpec::Complete(4), 0).unwrap();
        let a = basic_mapping(&k4, BasicMapper::Random, 42);
        assert_eq!(a, basic_mapping(&k4, BasicMapper::Random, 42));
        assert!(Mapping::from_positions(a.positions().to_vec()).is_ok());
    }

    #[test]
    fn mapping_validation() {
        assert!(Mapping::from_positions(vec![1, 0, 2]).is_ok());
        assert!(Mapping::from_positions(vec![0, 0, 2]).is_err());
        assert!(Mapping::from_positions(vec![0, 3, 1]).is_err());
        assert_eq!(Mapping::from_positions(vec![2, 0, 1]).unwrap().row(), [1, 2, 0]);
        let m: Result<Mapping, _> = serde_json::from_str("[0,0]");
        assert!(m.is_err());
        assert_eq!(serde_json::to_string(&Mapping::identity(3)).unwrap(), "[0,1,2]");
    }

    #[test]
    fn karger_examples() {
        let p3 = generate(GraphSpec::Path(3), 0).unwrap();
        let cut = karger_min_cut(&p3, 1, 0).unwrap();
        assert_eq!(cut.cut_size, 1);
        let k4 = generate(GraphSpec::Complete(4), 0).unwrap();
        let cut = karger_min_cut(&k4, 32, 5).unwrap();
        assert_eq!(cut.cut_size, 3);
        assert_eq!(cut.cut_edges.len(), 3);
        let k3 = generate(GraphSpec::Complete(3), 0).unwrap();
        assert_eq!(karger_min_cut(&k3, 4, 1).unwrap().cut_size, 2);
        let single = generate(GraphSpec::Path(1), 0).unwrap();
        assert_eq!(karger_min_cut(&single, 4, 1), Err(MappingError::TooFewVertices(1)));
    }

    #[test]
    fn karger_on_disconnected_input_returns_empty_cut() {
        let g = Graph::from_edge_list(4, &[(0, 1), (2, 3)]).unwrap();
        let cut = karger_min_cut(&g, 3, 0).unwrap();
        assert_eq!(cut.cut_size, 0);
        assert_eq!(cut.sides, [vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn auto_budget() {
        let b = KargerBudget::default();
        assert_eq!(b.runs_for(10), 231); // ceil(100 ln 10)
        assert_eq!(b.runs_for(300), 100_000 / 298);
        assert_eq!(KargerBudget::fixed(7).runs_for(500), 7);
    }

    #[test]
    fn path_mapping_keeps_pieces_contiguous() {
        for n in [3, 10, 57, 100] {
            let g = generate(GraphSpec::Path(n), 0).unwrap();
            let (m, trace) = mincut_mapping_traced(&g, &KargerBudget::default(), 7);
            assert_eq!(m, Mapping::identity(n), "n = {n}");
            for cut in &trace {
                assert_eq!(cut.cut_size, 1);
                for side in &cut.sides {
                    let mut p: Vec<_> = side.iter().map(|&v| m.position(v)).collect();
                    p.sort_unstable();
                    assert!(p.windows(2).all(|w| w[1] == w[0] + 1));
                }
            }
        }
    }

    fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (2usize..=max_n, any::<u64>(), 0usize..1000).prop_map(|(n, seed, extra)| {
            let max = n * (n - 1) / 2;
            let m = n - 1 + extra % (max + 2 - n);
            generate(GraphSpec::Gnm { n, m }, seed)
                .unwrap_or_else(|_| generate(GraphSpec::RandomTree(n), seed).unwrap())
        })
    }

    proptest! {
        #[test]
        fn karger_never_beats_exact_cut(g in connected_graph(10), reps in 1usize..20, seed in any::<u64>()) {
            let cut = karger_min_cut(&g, reps, seed).unwrap();
            prop_assert!(cut.cut_size >= oracle_min_cut(&g).unwrap());
            prop_assert!(!cut.sides[0].is_empty() && !cut.sides[1].is_empty());
            prop_assert_eq!(cut.sides[0].len() + cut.sides[1].len(), g.n());
            for &(a, b) in g.edges() {
                let crosses = cut.sides[0].contains(&a) != cut.sides[0].contains(&b);
                prop_assert_eq!(crosses, cut.cut_edges.contains(&(a, b)));
            }
        }

        #[test]
        fn mincut_mapping_is_a_bijection(g in connected_graph(40), seed in any::<u64>()) {
            let m = mincut_mapping(&g, &KargerBudget::default(), seed);
            prop_assert!(Mapping::from_positions(m.positions().to_vec()).is_ok());
            prop_assert_eq!(m.clone(), mincut_mapping(&g, &KargerBudget::default(), seed));
        }
    }
}
