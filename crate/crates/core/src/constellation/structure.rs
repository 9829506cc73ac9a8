//! Constellations, augmentations and their clause-by-clause validators.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::coupling::{classify_coupling, fits, phi, CouplingKind};
use crate::{Error, OrderedGraph, Result};

/// Hubs `H`, one ordered leaf set per hub, and a pattern graph `K` on a
/// subset of the hubs. All vertices are labels of the host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constellation {
    pub hubs: Vec<usize>,
    /// `leaves[i]` is the leaf set of `hubs[i]`, in increasing label order.
    pub leaves: Vec<Vec<usize>>,
    /// `V(K)`, a subset of `hubs`.
    pub k_vertices: Vec<usize>,
    pub k_edges: Vec<(usize, usize)>,
}

/// One failed clause. Constellation clauses are numbered 1 to 5; weak
/// augmentation clauses are prefixed `weak`, strong ones `strong`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub clause: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "clause {}: {}", self.clause, self.detail)
    }
}

fn v(clause: &'static str, detail: String) -> Violation {
    Violation { clause, detail }
}

fn in_range(g: &OrderedGraph, xs: &[usize]) -> bool {
    xs.iter().all(|&x| x < g.n())
}

fn is_sorted_distinct(xs: &[usize]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

impl Constellation {
    /// `|V(K)|`.
    pub fn n(&self) -> usize {
        self.k_vertices.len()
    }

    /// `|H| − |V(K)|`.
    pub fn m(&self) -> usize {
        self.hubs.len().saturating_sub(self.k_vertices.len())
    }

    pub fn k(&self) -> usize {
        self.leaves.first().map_or(0, Vec::len)
    }

    pub fn hub_index(&self, h: usize) -> Option<usize> {
        self.hubs.iter().position(|&x| x == h)
    }

    pub fn w(&self, h: usize) -> Option<&[usize]> {
        self.hub_index(h).map(|i| self.leaves[i].as_slice())
    }

    pub fn in_k(&self, h: usize) -> bool {
        self.k_vertices.contains(&h)
    }

    pub fn has_k_edge(&self, a: usize, b: usize) -> bool {
        self.k_edges.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
    }

    /// `A(C)`: the hubs of `K` and their leaves, sorted.
    pub fn a_set(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &h) in self.hubs.iter().enumerate() {
            if self.in_k(h) {
                out.push(h);
                out.extend(&self.leaves[i]);
            }
        }
        out.sort_unstable();
        out
    }

    /// `B(C)`: the remaining hubs and their leaves, sorted.
    pub fn b_set(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &h) in self.hubs.iter().enumerate() {
            if !self.in_k(h) {
                out.push(h);
                out.extend(&self.leaves[i]);
            }
        }
        out.sort_unstable();
        out
    }

    pub fn vertex_set(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.hubs.iter().chain(self.leaves.iter().flatten()).copied().collect();
        out.sort_unstable();
        out
    }

    /// Pairs of hub indices, lexicographic.
    fn hub_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.hubs.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    /// Clause-by-clause check; empty means valid.
    pub fn validate(&self, g: &OrderedGraph) -> Vec<Violation> {
        let mut out = Vec::new();
        let all = self.vertex_set();
        if !in_range(g, &all) {
            out.push(v("0", format!("vertex label out of range for a {}-vertex graph", g.n())));
            return out;
        }
        if all.windows(2).any(|w| w[0] == w[1]) {
            out.push(v("2", "hubs and leaf sets are not pairwise disjoint".into()));
        }
        if self.leaves.len() != self.hubs.len() {
            out.push(v("2", format!("{} hubs but {} leaf sets", self.hubs.len(), self.leaves.len())));
            return out;
        }
        // 1
        if self.hubs.is_empty() {
            out.push(v("1", "no hubs".into()));
        }
        if !g.is_coclique(&self.hubs) {
            out.push(v("1", "hubs are not a coclique".into()));
        }
        // 2
        let k = self.k();
        if k == 0 {
            out.push(v("2", "leaf sets are empty".into()));
        }
        for (i, w) in self.leaves.iter().enumerate() {
            let h = self.hubs[i];
            if w.len() != k {
                out.push(v("2", format!("W_{h} has {} vertices, expected {k}", w.len())));
            }
            if !is_sorted_distinct(w) {
                out.push(v("2", format!("W_{h} is not listed in vertex order")));
            }
            if !g.is_coclique(w) {
                out.push(v("2", format!("W_{h} is not a coclique")));
            }
        }
        // 3
        if self.k_vertices.is_empty() {
            out.push(v("3", "K has no vertices".into()));
        }
        if let Some(&x) = self.k_vertices.iter().find(|x| !self.hubs.contains(x)) {
            out.push(v("3", format!("K vertex {x} is not a hub")));
        }
        if let Some(&(a, b)) =
            self.k_edges.iter().find(|&&(a, b)| a == b || !self.in_k(a) || !self.in_k(b))
        {
            out.push(v("3", format!("K edge {a}-{b} is not between distinct K vertices")));
        }
        if !self.k_connected() {
            out.push(v("3", "K is not connected".into()));
        }
        // 4
        for (i, w) in self.leaves.iter().enumerate() {
            let h = self.hubs[i];
            if !g.is_complete_to(&[h], w) {
                out.push(v("4", format!("W_{h} is not complete to its hub")));
            }
            for &o in self.hubs.iter().filter(|&&o| o != h) {
                if !g.is_anticomplete_to(&[o], w) {
                    out.push(v("4", format!("W_{h} is not anticomplete to hub {o}")));
                }
            }
        }
        // 5
        if out.iter().all(|x| x.clause != "2") {
            for (i, j) in self.hub_pairs() {
                let (a, b) = (self.hubs[i], self.hubs[j]);
                let (wa, wb) = (&self.leaves[i], &self.leaves[j]);
                if self.has_k_edge(a, b) {
                    if !CouplingKind::CONSTELLATION_EDGE.iter().any(|&kind| fits(g, wa, wb, kind)) {
                        let got = classify_coupling(g, wa, wb).map_or(CouplingKind::None, |x| x);
                        out.push(v("5", format!("K edge {a}-{b} carries {got}, not a coupled half graph or matching")));
                    }
                } else if !g.is_anticomplete_to(wa, wb) {
                    out.push(v("5", format!("W_{a} and W_{b} are not anticomplete but {a}{b} is not a K edge")));
                }
            }
        }
        out
    }

    fn k_connected(&self) -> bool {
        let n = self.k_vertices.len();
        if n == 0 {
            return false;
        }
        let mut seen = alloc::vec![false; n];
        let mut stack = alloc::vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            let a = self.k_vertices[i];
            for (j, &b) in self.k_vertices.iter().enumerate() {
                if !seen[j] && self.has_k_edge(a, b) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// The coupling kind of `(W_a, W_b)`.
    pub fn kind(&self, g: &OrderedGraph, a: usize, b: usize) -> Result<CouplingKind> {
        let wa = self.w(a).ok_or_else(|| Error::precondition(format!("{a} is not a hub")))?;
        let wb = self.w(b).ok_or_else(|| Error::precondition(format!("{b} is not a hub")))?;
        classify_coupling(g, wa, wb)
    }

    /// `C|X` for `X ⊆ W_h`: every leaf set keeps the positions `X` occupies
    /// in `W_h`.
    pub fn restrict(&self, h: usize, x: &[usize]) -> Result<Constellation> {
        let wh = self.w(h).ok_or_else(|| Error::precondition(format!("{h} is not a hub")))?;
        let mut pos: Vec<usize> = x
            .iter()
            .map(|s| wh.iter().position(|w| w == s).ok_or_else(|| Error::precondition(format!("{s} is not in W_{h}"))))
            .collect::<Result<_>>()?;
        pos.sort_unstable();
        if pos.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(wh[pos.windows(2).find(|w| w[0] == w[1]).unwrap()[0]]));
        }
        self.restrict_positions(&pos)
    }

    /// Keep the given (increasing) positions of every leaf set.
    pub fn restrict_positions(&self, pos: &[usize]) -> Result<Constellation> {
        let k = self.k();
        if let Some(&p) = pos.iter().find(|&&p| p >= k) {
            return Err(Error::precondition(format!("position {p} is out of range for k = {k}")));
        }
        if !is_sorted_distinct(pos) {
            return Err(Error::precondition("positions must be strictly increasing"));
        }
        Ok(Constellation {
            hubs: self.hubs.clone(),
            leaves: self.leaves.iter().map(|w| pos.iter().map(|&p| w[p]).collect()).collect(),
            k_vertices: self.k_vertices.clone(),
            k_edges: self.k_edges.clone(),
        })
    }
}

/// A constellation with hubs `x ∈ V(K)`, `y ∈ H∖V(K)` and two `k`-sets
/// outside `V(C)` linked to `W_x` and `W_y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Augmentation {
    pub c: Constellation,
    pub x: usize,
    pub y: usize,
    pub x1: Vec<usize>,
    pub x2: Vec<usize>,
}

impl Augmentation {
    pub fn equal_sets(&self) -> bool {
        self.x1 == self.x2
    }

    /// Violations of the weak clauses, including those of the constellation.
    pub fn validate_weak(&self, g: &OrderedGraph) -> Vec<Violation> {
        let mut out = self.c.validate(g);
        if !out.is_empty() {
            return out;
        }
        let c = &self.c;
        if !c.in_k(self.x) {
            out.push(v("weak-1", format!("x = {} is not a K vertex", self.x)));
        }
        if !c.hubs.contains(&self.y) || c.in_k(self.y) {
            out.push(v("weak-1", format!("y = {} is not a hub outside K", self.y)));
        }
        if !out.is_empty() {
            return out;
        }
        let k = c.k();
        let vc = c.vertex_set();
        for (name, set) in [("X1", &self.x1), ("X2", &self.x2)] {
            if !in_range(g, set) {
                out.push(v("weak-2", format!("{name} has a vertex out of range")));
                return out;
            }
            if set.len() != k {
                out.push(v("weak-2", format!("{name} has {} vertices, expected {k}", set.len())));
            }
            if !is_sorted_distinct(set) {
                out.push(v("weak-2", format!("{name} is not listed in vertex order")));
            }
            if set.iter().any(|s| vc.binary_search(s).is_ok()) {
                out.push(v("weak-2", format!("{name} meets V(C)")));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let coupled = |a: &[usize], b: &[usize]| classify_coupling(g, a, b).is_ok_and(|kind| kind.is_coupled());
        if !coupled(c.w(self.x).unwrap(), &self.x1) {
            out.push(v("weak-3", "W_x and X1 are not coupled".into()));
        }
        if !coupled(c.w(self.y).unwrap(), &self.x2) {
            out.push(v("weak-3", "W_y and X2 are not coupled".into()));
        }
        if !self.equal_sets() {
            if self.x1.iter().any(|a| self.x2.contains(a)) {
                out.push(v("weak-4", "X1 and X2 are neither equal nor disjoint".into()));
                return out;
            }
            if !coupled(&self.x1, &self.x2) {
                out.push(v("weak-4", "X1 and X2 are not coupled".into()));
            }
            let same = |set: &[usize], side: &[usize]| {
                let first = g.neighbours_in(set[0], side);
                set.iter().all(|&s| g.neighbours_in(s, side) == first)
            };
            if !same(&self.x1, &c.b_set()) {
                out.push(v("weak-4", "vertices of X1 differ on B(C)".into()));
            }
            if !same(&self.x2, &c.a_set()) {
                out.push(v("weak-4", "vertices of X2 differ on A(C)".into()));
            }
        }
        out
    }

    /// Weak clauses plus the strong ones.
    pub fn validate(&self, g: &OrderedGraph) -> Vec<Violation> {
        let mut out = self.validate_weak(g);
        if !out.is_empty() {
            return out;
        }
        let c = &self.c;
        for (name, set) in [("X1", &self.x1), ("X2", &self.x2)] {
            if !g.is_clique(set) && !g.is_coclique(set) {
                out.push(v("strong-1", format!("{name} is neither a clique nor a coclique")));
            }
            for (i, &h) in c.hubs.iter().enumerate() {
                let kind = classify_coupling(g, &c.leaves[i], set).unwrap_or(CouplingKind::None);
                if c.in_k(h) || h == self.y {
                    if !kind.is_coupled() && !kind.is_homogeneous() {
                        out.push(v("strong-2", format!("W_{h} and {name} are neither coupled nor homogeneous")));
                    }
                } else if !kind.is_homogeneous() {
                    out.push(v("strong-3", format!("W_{h} and {name} are not homogeneous")));
                }
                if !g.is_complete_to(&[h], set) && !g.is_anticomplete_to(&[h], set) {
                    out.push(v("strong-4", format!("hub {h} and {name} are not homogeneous")));
                }
            }
        }
        out
    }

    /// Keep the same positions of every leaf set and of `X1`, `X2`.
    pub fn restrict_positions(&self, pos: &[usize]) -> Result<Augmentation> {
        let c = self.c.restrict_positions(pos)?;
        let pick = |s: &[usize]| pos.iter().map(|&p| s[p]).collect::<Vec<_>>();
        Ok(Augmentation { c, x: self.x, y: self.y, x1: pick(&self.x1), x2: pick(&self.x2) })
    }

    /// `φ_{X1→X2}`, used when restricting the two linked sets together.
    pub fn phi_12(&self, sub: &[usize]) -> Result<Vec<usize>> {
        phi(&self.x1, &self.x2, sub)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{constellation_fixture, Shape};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small() -> (OrderedGraph, Constellation) {
        let kinds = [CouplingKind::UpHalf, CouplingKind::CoupledMatching];
        constellation_fixture(Shape::Path, 3, 1, 4, &kinds).unwrap()
    }

    #[test]
    fn generated_fixture_is_valid() {
        let (g, c) = small();
        assert_eq!(c.validate(&g), []);
        assert_eq!((c.n(), c.m(), c.k()), (3, 1, 4));
    }

    #[test]
    fn edge_inside_leaf_set_breaks_clause_2() {
        let (mut g, c) = small();
        g.set_edge(c.leaves[0][0], c.leaves[0][1], true);
        let bad = c.validate(&g);
        assert!(bad.iter().any(|x| x.clause == "2"), "{bad:?}");
    }

    #[test]
    fn wrong_pattern_breaks_clause_5() {
        let (mut g, c) = small();
        // First and third hubs are not K-adjacent.
        g.set_edge(c.leaves[0][0], c.leaves[2][0], true);
        assert!(c.validate(&g).iter().any(|x| x.clause == "5"));
        let (mut g, c) = small();
        g.toggle_edge(c.leaves[0][1], c.leaves[1][3]);
        assert!(c.validate(&g).iter().any(|x| x.clause == "5"));
    }

    #[test]
    fn hub_edges_break_clauses_1_and_4() {
        let (mut g, c) = small();
        g.set_edge(c.hubs[0], c.hubs[1], true);
        assert!(c.validate(&g).iter().any(|x| x.clause == "1"));
        let (mut g, c) = small();
        g.set_edge(c.hubs[0], c.leaves[1][0], true);
        assert!(c.validate(&g).iter().any(|x| x.clause == "4"));
    }

    #[test]
    fn restriction_examples() {
        let (g, c) = small();
        let h = c.hubs[1];
        assert_eq!(c.restrict(h, c.w(h).unwrap()).unwrap(), c);
        let one = c.restrict(h, &[c.w(h).unwrap()[2]]).unwrap();
        assert_eq!(one.k(), 1);
        assert_eq!(one.validate(&g), []);
        assert!(c.restrict(h, &[c.hubs[0]]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let x: Vec<usize> = c.w(h).unwrap().iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            if x.is_empty() {
                continue;
            }
            let r = c.restrict(h, &x).unwrap();
            assert_eq!(r.validate(&g), []);
            assert_eq!(r.k(), x.len());
        }
    }

    #[test]
    fn disconnected_k_is_reported() {
        let (g, mut c) = small();
        c.k_edges.pop();
        assert!(c.validate(&g).iter().any(|x| x.clause == "3" || x.clause == "5"));
    }
}
