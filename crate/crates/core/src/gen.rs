//! Seeded fixture generators.
//!
//! Constellation fixtures lay out each hub followed by its leaves, so every
//! leaf set is automatically listed in vertex order.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{binom2, k_cliques, path_chain};
use crate::circle::{ChordDiagram, Permutation};
use crate::constellation::{Augmentation, Constellation, CouplingKind};
use crate::{Error, OrderedGraph, Result};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `G(n, p)`.
pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> OrderedGraph {
    let mut g = OrderedGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.set_edge(u, v, true);
            }
        }
    }
    g
}

/// A uniformly shuffled word with chords named `1..=n`.
pub fn random_diagram<R: Rng>(n: usize, rng: &mut R) -> ChordDiagram {
    let mut word: Vec<usize> = (0..n).flat_map(|c| [c, c]).collect();
    word.shuffle(rng);
    let tokens: Vec<alloc::string::String> = word.iter().map(|c| (c + 1).to_string()).collect();
    ChordDiagram::from_tokens(&tokens).expect("every chord has two ends")
}

pub fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Permutation {
    let mut pi: Vec<usize> = (1..=n).collect();
    pi.shuffle(rng);
    Permutation::new(pi).expect("shuffle of 1..=n")
}

/// Append `count` vertices joined to every existing vertex with
/// probability `p`.
pub fn with_noise<R: Rng>(g: &OrderedGraph, count: usize, p: f64, rng: &mut R) -> OrderedGraph {
    let n = g.n();
    let mut out = OrderedGraph::new(n + count);
    for (u, v) in g.edges() {
        out.set_edge(u, v, true);
    }
    for x in n..n + count {
        for y in 0..x {
            if rng.gen_bool(p) {
                out.set_edge(x, y, true);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Path,
    Clique,
    Star,
}

impl Shape {
    pub fn name(self) -> &'static str {
        match self {
            Shape::Path => "path",
            Shape::Clique => "clique",
            Shape::Star => "star",
        }
    }
}

/// Wire `(X, Y)` with `kind`.
pub fn couple(g: &mut OrderedGraph, x: &[usize], y: &[usize], kind: CouplingKind) {
    for (i, &a) in x.iter().enumerate() {
        for (j, &b) in y.iter().enumerate() {
            g.set_edge(a, b, kind.adjacent(i, j) == Some(true));
        }
    }
}

struct Layout {
    n: usize,
    hubs: Vec<usize>,
    leaves: Vec<Vec<usize>>,
}

impl Layout {
    fn new(hubs: usize, k: usize) -> Self {
        let mut l = Layout { n: 0, hubs: vec![], leaves: vec![] };
        for _ in 0..hubs {
            l.hubs.push(l.n);
            l.leaves.push((l.n + 1..l.n + 1 + k).collect());
            l.n += k + 1;
        }
        l
    }

    fn block(&mut self, size: usize) -> Vec<usize> {
        let out = (self.n..self.n + size).collect();
        self.n += size;
        out
    }
}

/// A constellation with `n` pattern-graph hubs of the given shape, `m`
/// further hubs and leaf sets of size `k`. `kinds` is cycled over the
/// pattern edges (path order, lexicographic for cliques, centre first for
/// stars).
pub fn constellation_fixture(
    shape: Shape,
    n: usize,
    m: usize,
    k: usize,
    kinds: &[CouplingKind],
) -> Result<(OrderedGraph, Constellation)> {
    if n == 0 || k == 0 {
        return Err(Error::precondition("n and k must be positive"));
    }
    if kinds.is_empty() && n > 1 {
        return Err(Error::precondition("need at least one coupling kind"));
    }
    if let Some(bad) = kinds.iter().find(|k| !CouplingKind::CONSTELLATION_EDGE.contains(k)) {
        return Err(Error::precondition(format!("{bad} cannot label a pattern edge")));
    }
    let l = Layout::new(n + m, k);
    let mut g = OrderedGraph::new(l.n);
    for (h, w) in l.hubs.iter().zip(&l.leaves) {
        for &x in w {
            g.set_edge(*h, x, true);
        }
    }
    let pairs: Vec<(usize, usize)> = match shape {
        Shape::Path => (1..n).map(|i| (i - 1, i)).collect(),
        Shape::Clique => (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect(),
        Shape::Star => (1..n).map(|i| (0, i)).collect(),
    };
    for (e, &(i, j)) in pairs.iter().enumerate() {
        couple(&mut g, &l.leaves[i], &l.leaves[j], kinds[e % kinds.len()]);
    }
    let c = Constellation {
        hubs: l.hubs.clone(),
        leaves: l.leaves,
        k_vertices: l.hubs[..n].to_vec(),
        k_edges: pairs.iter().map(|&(i, j)| (l.hubs[i], l.hubs[j])).collect(),
    };
    Ok((g, c))
}

/// Fixture sized for the extraction routine of `shape` at grid size (or
/// target size) `n`, with seeded coupling kinds.
///
/// * star: `(C(n,2)+1, n+2)`, kinds drawn from all five pattern kinds;
/// * path: `n²` hubs with `k = k1` of the path chain, half-graph kinds only;
/// * clique: `n²` hubs, `k = max(n², C(n², 2))`, one kind for all pairs.
pub fn shape_fixture(shape: Shape, n: usize, seed: u64) -> Result<(OrderedGraph, Constellation)> {
    let mut r = rng(seed);
    let halves = [CouplingKind::UpHalf, CouplingKind::CoUpHalf, CouplingKind::DownHalf, CouplingKind::CoDownHalf];
    match shape {
        Shape::Star => {
            let hubs = binom2(n as u128)? as usize + 1;
            let kinds: Vec<CouplingKind> =
                (0..hubs - 1).map(|_| *CouplingKind::CONSTELLATION_EDGE.choose(&mut r).unwrap()).collect();
            constellation_fixture(Shape::Star, hubs, 0, n + 2, &kinds)
        }
        Shape::Path => {
            let c = path_chain(n as u32)?;
            let kinds: Vec<CouplingKind> = (0..c.m - 1).map(|_| *halves.choose(&mut r).unwrap()).collect();
            constellation_fixture(Shape::Path, c.m as usize, 0, c.k1 as usize, &kinds)
        }
        Shape::Clique => {
            let k = k_cliques(n as u32)? as usize;
            let choices = [
                CouplingKind::CoupledMatching,
                CouplingKind::UpHalf,
                CouplingKind::CoDownHalf,
                CouplingKind::DownHalf,
                CouplingKind::CoUpHalf,
            ];
            let kind = *choices.choose(&mut r).unwrap();
            constellation_fixture(Shape::Clique, n * n, 0, k, &[kind])
        }
    }
}

/// `C(n,2)` leaf positions, enough for a matching-pattern extraction with
/// `n` hubs.
pub fn matching_fixture(n: usize, shape: Shape) -> Result<(OrderedGraph, Constellation)> {
    let k = (binom2(n as u128)? as usize).max(1);
    constellation_fixture(shape, n, 0, k, &[CouplingKind::CoupledMatching])
}

/// `n` disjoint `n`-cliques, pairwise up-coupled.
pub fn pure_grid_parts(n: usize) -> (OrderedGraph, Vec<Vec<usize>>) {
    let mut g = OrderedGraph::new(n * n);
    let parts: Vec<Vec<usize>> = (0..n).map(|i| (i * n..(i + 1) * n).collect()).collect();
    for p in &parts {
        for (a, &x) in p.iter().enumerate() {
            for &y in &p[a + 1..] {
                g.set_edge(x, y, true);
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            couple(&mut g, &parts[i], &parts[j], CouplingKind::UpHalf);
        }
    }
    (g, parts)
}

/// `n²` coclique parts of size `n²`; pair `(i, j)` (lexicographic) gets
/// `kinds[e % len]`.
pub fn mixed_grid_parts(n: usize, kinds: &[CouplingKind]) -> (OrderedGraph, Vec<Vec<usize>>) {
    let s = n * n;
    let mut g = OrderedGraph::new(s * s);
    let parts: Vec<Vec<usize>> = (0..s).map(|i| (i * s..(i + 1) * s).collect()).collect();
    let mut e = 0;
    for i in 0..s {
        for j in i + 1..s {
            couple(&mut g, &parts[i], &parts[j], kinds[e % kinds.len()]);
            e += 1;
        }
    }
    (g, parts)
}

/// Synthetic inputs for the three branches of the growth step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowCase {
    /// `X1 = X2`; some leaf of the outside hub sees all but one of them.
    One,
    /// Disjoint matched sets; a leaf of the outside hub sees most of `X2`.
    Two,
    /// Disjoint matched sets, outside hub leaves matched to `X2`.
    Claim,
}

/// An augmentation with pattern hubs `a`, `x` (up-coupled), outside hub
/// `y` and linked sets of size `t`.
pub fn grow_fixture(case: GrowCase, t: usize) -> Result<(OrderedGraph, Augmentation)> {
    if t < 2 {
        return Err(Error::precondition("t must be at least 2"));
    }
    let mut l = Layout::new(3, t);
    let z1 = l.block(t);
    let z2 = if case == GrowCase::One { z1.clone() } else { l.block(t) };
    let mut g = OrderedGraph::new(l.n);
    for (h, w) in l.hubs.iter().zip(&l.leaves) {
        for &x in w {
            g.set_edge(*h, x, true);
        }
    }
    couple(&mut g, &l.leaves[0], &l.leaves[1], CouplingKind::UpHalf);
    couple(&mut g, &l.leaves[1], &z1, CouplingKind::UpHalf);
    match case {
        GrowCase::One | GrowCase::Two => couple(&mut g, &l.leaves[2], &z2, CouplingKind::DownHalf),
        GrowCase::Claim => couple(&mut g, &l.leaves[2], &z2, CouplingKind::CoupledMatching),
    }
    if case != GrowCase::One {
        couple(&mut g, &z1, &z2, CouplingKind::CoupledMatching);
    }
    let c = Constellation {
        hubs: l.hubs.clone(),
        leaves: l.leaves,
        k_vertices: l.hubs[..2].to_vec(),
        k_edges: vec![(l.hubs[0], l.hubs[1])],
    };
    Ok((g, Augmentation { x: c.hubs[1], y: c.hubs[2], c, x1: z1, x2: z2 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::comparability_grid;

    #[test]
    fn generators_are_deterministic() {
        let a = random_graph(9, 0.4, &mut rng(3));
        let b = random_graph(9, 0.4, &mut rng(3));
        assert_eq!(a, b);
        assert_eq!(random_diagram(5, &mut rng(1)), random_diagram(5, &mut rng(1)));
        assert_eq!(random_diagram(5, &mut rng(1)).chord_count(), 5);
    }

    #[test]
    fn fixtures_validate() {
        for shape in [Shape::Path, Shape::Clique, Shape::Star] {
            for kind in CouplingKind::CONSTELLATION_EDGE {
                let (g, c) = constellation_fixture(shape, 4, 2, 5, &[kind]).unwrap();
                assert_eq!(c.validate(&g), [], "{shape:?} {kind}");
            }
        }
        for n in 1..=3 {
            for shape in [Shape::Star, Shape::Clique] {
                let (g, c) = shape_fixture(shape, n, 5).unwrap();
                assert_eq!(c.validate(&g), []);
            }
        }
        let (g, c) = shape_fixture(Shape::Path, 2, 5).unwrap();
        assert_eq!((c.n(), c.k()), (4, 38));
        assert_eq!(c.validate(&g), []);
    }

    #[test]
    fn noise_keeps_fixture_valid() {
        let (g, c) = constellation_fixture(Shape::Path, 3, 0, 3, &[CouplingKind::DownHalf]).unwrap();
        let h = with_noise(&g, 5, 0.5, &mut rng(2));
        assert_eq!(h.n(), g.n() + 5);
        assert_eq!(c.validate(&h), []);
    }

    #[test]
    fn co_matching_is_refused() {
        assert!(constellation_fixture(Shape::Path, 2, 0, 3, &[CouplingKind::CoMatching]).is_err());
    }

    #[test]
    fn grid_parts_have_the_right_size() {
        let (g, parts) = pure_grid_parts(3);
        assert_eq!(g.edge_count(), comparability_grid(3).edge_count());
        assert_eq!(parts.len(), 3);
        let (g, parts) = mixed_grid_parts(2, &[CouplingKind::UpHalf]);
        assert_eq!((g.n(), parts.len()), (16, 4));
    }

    #[test]
    fn grow_fixtures_are_augmentations() {
        for case in [GrowCase::One, GrowCase::Two, GrowCase::Claim] {
            let (g, a) = grow_fixture(case, 6).unwrap();
            assert_eq!(a.validate(&g), [], "{case:?}");
        }
    }
}
