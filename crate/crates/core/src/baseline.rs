//! Preparation depth of the CZ-gate route, estimated by proper edge
//! colouring: every colour class is one layer of commuting CZ gates.

use serde::Serialize;

use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CzBaseline {
    /// CZ layers when the ancilla bus places no constraint.
    pub colors: usize,
    /// Two two-party parity measurements per CZ layer.
    pub tocks: usize,
}

pub fn cz_baseline_depth(g: &Graph) -> CzBaseline {
    let colors = edge_coloring(g).iter().map(|&c| c + 1).max().unwrap_or(0);
    CzBaseline {
        colors,
        tocks: 2 * colors,
    }
}

/// Proper edge colouring, one colour per entry of `g.edges()`, using at most
/// `Δ + 1` colours.
///
/// Edges are coloured greedily in sorted order within a `Δ`-colour palette.
/// When an edge finds no common free colour, a free colour `a` at one end and
/// `b` at the other are picked and the `a/b` alternating path from the second
/// endpoint is swapped, unless it ends at the first endpoint. On bipartite
/// graphs such a path never closes, so trees always get `Δ` colours. If the
/// repair gets stuck, the whole graph is recoloured with Misra-Gries.
pub fn edge_coloring(g: &Graph) -> Vec<usize> {
    let delta = g.max_degree();
    if delta == 0 {
        return Vec::new();
    }
    let mut board = ColorBoard::new(g.n(), delta);
    if g.edges().iter().all(|&(u, v)| board.color_with_kempe(u, v)) {
        return board.edge_colors(g);
    }
    let mut board = ColorBoard::new(g.n(), delta + 1);
    for &(u, v) in g.edges() {
        board.color_misra_gries(u, v);
    }
    board.edge_colors(g)
}

/// `at[v][c]` is the neighbour joined to `v` by the edge of colour `c`.
struct ColorBoard {
    palette: usize,
    at: Vec<Vec<Option<usize>>>,
}

impl ColorBoard {
    fn new(n: usize, palette: usize) -> Self {
        ColorBoard {
            palette,
            at: vec![vec![None; palette]; n],
        }
    }

    fn is_free(&self, v: usize, c: usize) -> bool {
        self.at[v][c].is_none()
    }

    fn free_colors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.palette).filter(move |&c| self.is_free(v, c))
    }

    fn color_of(&self, u: usize, v: usize) -> Option<usize> {
        (0..self.palette).find(|&c| self.at[u][c] == Some(v))
    }

    fn set(&mut self, u: usize, v: usize, c: usize) {
        self.at[u][c] = Some(v);
        self.at[v][c] = Some(u);
    }

    fn clear(&mut self, u: usize, v: usize, c: usize) {
        self.at[u][c] = None;
        self.at[v][c] = None;
    }

    fn edge_colors(&self, g: &Graph) -> Vec<usize> {
        g.edges()
            .iter()
            .map(|&(u, v)| self.color_of(u, v).expect("every edge coloured"))
            .collect()
    }

    /// Maximal path from `start` whose edge colours alternate `first`,
    /// `second`, `first`, ... Returned as `(from, to, colour)` steps.
    fn alternating_path(&self, start: usize, first: usize, second: usize) -> Vec<(usize, usize, usize)> {
        let mut path = Vec::new();
        let (mut at, mut c) = (start, first);
        while let Some(next) = self.at[at][c] {
            path.push((at, next, c));
            at = next;
            c = if c == first { second } else { first };
        }
        path
    }

    fn swap_path(&mut self, path: &[(usize, usize, usize)], a: usize, b: usize) {
        for &(x, y, c) in path {
            self.clear(x, y, c);
        }
        for &(x, y, c) in path {
            self.set(x, y, if c == a { b } else { a });
        }
    }

    fn color_with_kempe(&mut self, u: usize, v: usize) -> bool {
        let common = self.free_colors(u).find(|&c| self.is_free(v, c));
        if let Some(c) = common {
            self.set(u, v, c);
            return true;
        }
        let free_u: Vec<usize> = self.free_colors(u).collect();
        let free_v: Vec<usize> = self.free_colors(v).collect();
        for &a in &free_u {
            for &b in &free_v {
                // a is used at v, b is free at v: swap the a/b path from v so
                // that a becomes free there.
                let path = self.alternating_path(v, a, b);
                if path.last().is_some_and(|&(_, end, _)| end == u) {
                    continue;
                }
                self.swap_path(&path, a, b);
                self.set(u, v, a);
                return true;
            }
        }
        false
    }

    /// One step of Misra-Gries. Needs a palette of at least `Δ + 1`.
    fn color_misra_gries(&mut self, u: usize, v: usize) {
        // Maximal fan of u starting at v.
        let mut fan = vec![v];
        loop {
            let last = *fan.last().unwrap();
            let next = (0..self.palette).find_map(|c| {
                let w = self.at[u][c]?;
                (!fan.contains(&w) && self.is_free(last, c)).then_some(w)
            });
            match next {
                Some(w) => fan.push(w),
                None => break,
            }
        }
        let c = self.free_colors(u).next().expect("palette exceeds degree");
        let d = self
            .free_colors(*fan.last().unwrap())
            .next()
            .expect("palette exceeds degree");

        if c != d {
            let path = self.alternating_path(u, d, c);
            self.swap_path(&path, c, d);
        }

        // First fan vertex w with d free such that fan[..=w] is still a fan.
        let mut end = 0;
        for i in 0..fan.len() {
            if i > 0 {
                let link = self.color_of(u, fan[i]).expect("fan edge coloured");
                if !self.is_free(fan[i - 1], link) {
                    break;
                }
            }
            end = i;
            if self.is_free(fan[i], d) {
                break;
            }
        }

        // Rotate the fan prefix and colour (u, fan[end]) with d.
        for i in 0..end {
            let next_color = self.color_of(u, fan[i + 1]).expect("fan edge coloured");
            self.clear(u, fan[i + 1], next_color);
            self.set(u, fan[i], next_color);
        }
        debug_assert!(self.is_free(u, d) && self.is_free(fan[end], d));
        self.set(u, fan[end], d);
    }
}
