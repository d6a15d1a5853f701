//! Graph-state stabilizer generators and the initialization-based reduction
//! of the set of generators that have to be measured.
//!
//! Generator `g_v` of a graph state carries `X` on `v` and `Z` on every
//! neighbour of `v`. Initializing an independent set `S` in `|+>` and every
//! other qubit in `|0>` yields a product state already stabilized by `g_v`
//! for all `v` in `S`, so only the generators outside `S` are measured.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graph::Graph;
use crate::rng::seeded;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Symplectic `(x, z)` bits.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabilizerError {
    #[error("invalid Pauli string '{0}': expected a sign (+/-) followed by I/X/Y/Z letters")]
    BadPauli(String),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertices {0} and {1} are adjacent, set is not independent")]
    NotIndependent(usize, usize),
    #[error("vertex {0} has no neighbour in the set, set is not maximal")]
    NotMaximal(usize),
}

/// A signed Pauli word. Text form is the sign followed by one letter per
/// qubit, e.g. `+ZXZ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
    negative: bool,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>, negative: bool) -> Self {
        PauliString { letters, negative }
    }

    pub fn identity(n: usize) -> Self {
        PauliString::new(vec![Pauli::I; n], false)
    }

    /// Single-qubit `p` on `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, p: Pauli) -> Self {
        let mut s = PauliString::identity(n);
        s.letters[qubit] = p;
        s
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        self.letters[qubit]
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    /// Qubits carrying a non-identity letter.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != Pauli::I)
            .map(|(q, _)| q)
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| {
                let (ax, az) = a.bits();
                let (bx, bz) = b.bits();
                (ax & bz) ^ (az & bx)
            })
            .count();
        anti % 2 == 0
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        for p in &self.letters {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = StabilizerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || StabilizerError::BadPauli(s.to_string());
        let mut chars = s.chars();
        let negative = match chars.next() {
            Some('+') => false,
            Some('-') => true,
            _ => return Err(bad()),
        };
        let letters = chars
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PauliString { letters, negative })
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Generator `g_v` of the graph state on `g`.
pub fn generator(g: &Graph, v: usize) -> PauliString {
    let mut s = PauliString::single(g.n(), v, Pauli::X);
    for &w in g.neighbors(v) {
        s.letters[w] = Pauli::Z;
    }
    s
}

pub fn stabilizer_generators(g: &Graph) -> Vec<PauliString> {
    (0..g.n()).map(|v| generator(g, v)).collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MisOrder {
    /// Ascending degree, ties broken by vertex index.
    #[default]
    DegreeAscending,
    /// Uniformly shuffled with the supplied seed.
    SeededRandom,
}

/// Greedy maximal independent set: scan vertices in the requested order and
/// keep every vertex with no neighbour kept so far. Returned ascending.
pub fn greedy_maximal_independent_set(g: &Graph, order: MisOrder, seed: u64) -> Vec<usize> {
    let mut vertices: Vec<usize> = (0..g.n()).collect();
    match order {
        MisOrder::DegreeAscending => vertices.sort_by_key(|&v| (g.degree(v), v)),
        MisOrder::SeededRandom => vertices.shuffle(&mut seeded(seed)),
    }
    let mut blocked = vec![false; g.n()];
    let mut set = Vec::new();
    for v in vertices {
        if blocked[v] {
            continue;
        }
        set.push(v);
        blocked[v] = true;
        for &w in g.neighbors(v) {
            blocked[w] = true;
        }
    }
    set.sort_unstable();
    set
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitBasis {
    /// `|+>`, the +1 eigenstate of X.
    Plus,
    /// `|0>`, the +1 eigenstate of Z.
    Zero,
}

impl Serialize for InitBasis {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            InitBasis::Plus => "+",
            InitBasis::Zero => "0",
        })
    }
}

impl<'de> Deserialize<'de> for InitBasis {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "+" => Ok(InitBasis::Plus),
            "0" => Ok(InitBasis::Zero),
            other => Err(serde::de::Error::custom(format!(
                "unknown basis '{other}', expected \"+\" or \"0\""
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionPlan {
    pub independent_set: Vec<usize>,
    pub init_basis: Vec<InitBasis>,
    /// Generators still to be measured, ascending.
    pub measured: Vec<usize>,
}

impl ReductionPlan {
    pub fn n(&self) -> usize {
        self.init_basis.len()
    }

    /// Whether the product state described by `init_basis` is a +1
    /// eigenstate of `p`: every X must sit on a `|+>` qubit and every Z on a
    /// `|0>` qubit.
    pub fn product_state_stabilized_by(&self, p: &PauliString) -> bool {
        !p.is_negative()
            && p.letters().iter().zip(&self.init_basis).all(|(l, b)| {
                matches!(
                    (l, b),
                    (Pauli::I, _) | (Pauli::X, InitBasis::Plus) | (Pauli::Z, InitBasis::Zero)
                )
            })
    }
}

/// Checks `set` is independent and maximal in `g` and builds the plan.
pub fn reduce_generators(g: &Graph, set: &[usize]) -> Result<ReductionPlan, StabilizerError> {
    let n = g.n();
    let mut member = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(StabilizerError::VertexOutOfRange { vertex: v, n });
        }
        member[v] = true;
    }
    for &(a, b) in g.edges() {
        if member[a] && member[b] {
            return Err(StabilizerError::NotIndependent(a, b));
        }
    }
    for v in 0..n {
        if !member[v] && !g.neighbors(v).iter().any(|&w| member[w]) {
            return Err(StabilizerError::NotMaximal(v));
        }
    }
    let init_basis = member
        .iter()
        .map(|&m| if m { InitBasis::Plus } else { InitBasis::Zero })
        .collect();
    Ok(ReductionPlan {
        independent_set: (0..n).filter(|&v| member[v]).collect(),
        init_basis,
        measured: (0..n).filter(|&v| !member[v]).collect(),
    })
}
