//! Chord diagrams, permutation graphs and comparability grids.
//!
//! A diagram is stored as a linear word over chord indices read clockwise;
//! vertex `i` of its intersection graph is the chord `names()[i]`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::trace::{OperationTrace, Step};
use crate::{Error, OrderedGraph, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChordDiagram {
    names: Vec<String>,
    word: Vec<usize>,
}

/// Numeric names compare as numbers and sort before the rest.
fn name_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

impl ChordDiagram {
    /// Builds a diagram from clockwise tokens. The word is rotated to its
    /// canonical form and chords are numbered by first occurrence there.
    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut word = Vec::with_capacity(tokens.len());
        let mut count: Vec<usize> = Vec::new();
        for t in tokens {
            let t = t.as_ref();
            if t.is_empty() || t.chars().any(char::is_whitespace) {
                return Err(Error::Malformed(format!("invalid chord name {t:?}")));
            }
            let i = match names.iter().position(|x| x == t) {
                Some(i) => i,
                None => {
                    names.push(t.to_string());
                    count.push(0);
                    names.len() - 1
                }
            };
            count[i] += 1;
            word.push(i);
        }
        if let Some(i) = count.iter().position(|&c| c != 2) {
            return Err(Error::Malformed(format!(
                "chord {} has {} ends; every chord needs exactly two distinct positions \
                 (perturb shared endpoints apart before encoding)",
                names[i], count[i]
            )));
        }
        let d = ChordDiagram { names, word };
        let rot = d.canonical_rotation();
        let rotated: Vec<&str> = (0..d.word.len())
            .map(|p| d.names[d.word[(p + rot) % d.word.len()]].as_str())
            .collect();
        if rot == 0 {
            return Ok(d.renumbered());
        }
        ChordDiagram::from_tokens(&rotated)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        ChordDiagram::from_tokens(&tokens)
    }

    /// Keeps the given name order; the word is not rotated.
    fn with_names(names: Vec<String>, word: Vec<usize>) -> Self {
        ChordDiagram { names, word }
    }

    fn renumbered(self) -> Self {
        let mut order: Vec<usize> = Vec::new();
        for &c in &self.word {
            if !order.contains(&c) {
                order.push(c);
            }
        }
        let mut inv = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            inv[old] = new;
        }
        let names = order.iter().map(|&o| self.names[o].clone()).collect();
        ChordDiagram { names, word: self.word.iter().map(|&c| inv[c]).collect() }
    }

    fn canonical_rotation(&self) -> usize {
        let len = self.word.len();
        let cmp_at = |a: usize, b: usize| -> Ordering {
            for p in 0..len {
                let o = name_cmp(&self.names[self.word[(a + p) % len]], &self.names[self.word[(b + p) % len]]);
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        };
        (0..len).fold(0, |best, r| if cmp_at(r, best) == Ordering::Less { r } else { best })
    }

    /// This diagram rotated to canonical form, keeping chord numbering.
    pub fn canonical(&self) -> Self {
        let r = self.canonical_rotation();
        let len = self.word.len();
        ChordDiagram::with_names(self.names.clone(), (0..len).map(|p| self.word[(p + r) % len]).collect())
    }

    pub fn chord_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn tokens(&self) -> Vec<&str> {
        self.word.iter().map(|&c| self.names[c].as_str()).collect()
    }

    pub fn chord(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|x| x == name).ok_or_else(|| Error::UnknownChord(name.to_string()))
    }

    fn ends(&self) -> Vec<(usize, usize)> {
        let mut ends = vec![(usize::MAX, usize::MAX); self.names.len()];
        for (p, &c) in self.word.iter().enumerate() {
            if ends[c].0 == usize::MAX {
                ends[c].0 = p;
            } else {
                ends[c].1 = p;
            }
        }
        ends
    }

    /// Chords with one end in `arc` and the other outside.
    pub fn crossing(&self, arc: Arc) -> Result<Vec<bool>> {
        let inside = arc.flags(self.word.len())?;
        Ok(self.ends().iter().map(|&(a, b)| inside[a] != inside[b]).collect())
    }
}

impl core::fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.tokens().join(" "))
    }
}

/// Positions `start, start+1, …, start+len−1` (cyclically) of a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub start: usize,
    pub len: usize,
}

impl Arc {
    fn flags(self, total: usize) -> Result<Vec<bool>> {
        if self.len == 0 || self.len >= total || self.start >= total {
            return Err(Error::Malformed(format!(
                "arc {}+{} must be a nonempty proper part of {total} positions",
                self.start, self.len
            )));
        }
        Ok((0..total).map(|p| (p + total - self.start) % total < self.len).collect())
    }
}

pub fn intersection_graph(d: &ChordDiagram) -> OrderedGraph {
    let ends = d.ends();
    let mut g = OrderedGraph::new(d.names.len());
    for a in 0..ends.len() {
        let (p, q) = ends[a];
        for b in a + 1..ends.len() {
            let (r, s) = ends[b];
            if (p < r && r < q) != (p < s && s < q) {
                g.set_edge(a, b, true);
            }
        }
    }
    g
}

/// Reverses the part of the word strictly between the two ends of `v`.
pub fn flip(d: &ChordDiagram, v: &str) -> Result<ChordDiagram> {
    let c = d.chord(v)?;
    Ok(flip_index(d, c))
}

fn flip_index(d: &ChordDiagram, c: usize) -> ChordDiagram {
    let (p, q) = d.ends()[c];
    let mut word = d.word.clone();
    word[p + 1..q].reverse();
    ChordDiagram::with_names(d.names.clone(), word).canonical()
}

/// Vertex `(i,j)` (1-based) is `(i−1)·n + (j−1)`.
pub fn comparability_grid(n: usize) -> OrderedGraph {
    let mut g = OrderedGraph::new(n * n);
    for a in 0..n * n {
        let (i, j) = (a / n, a % n);
        for b in a + 1..n * n {
            let (k, l) = (b / n, b % n);
            if (i <= k && j <= l) || (i >= k && j >= l) {
                g.set_edge(a, b, true);
            }
        }
    }
    g
}

/// A bijection on `{1..n}` stored as `π_1 … π_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(pi: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; pi.len()];
        for &x in &pi {
            if x == 0 || x > pi.len() || core::mem::replace(&mut seen[x - 1], true) {
                return Err(Error::Malformed(format!("{pi:?} is not a permutation of 1..{}", pi.len())));
            }
        }
        Ok(Permutation(pi))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Inversion graph: `i < j` adjacent iff `π_i > π_j`.
pub fn permutation_graph(pi: &Permutation) -> OrderedGraph {
    let p = pi.values();
    let mut g = OrderedGraph::new(p.len());
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                g.set_edge(i, j, true);
            }
        }
    }
    g
}

/// Vertex `i−1` of `F_π` goes to grid vertex `(i, n+1−π_i)` of `CG_grid`,
/// returned as a label of [`comparability_grid`]`(grid)`.
pub fn embed_permutation_in_grid_of(pi: &Permutation, grid: usize) -> Result<Vec<usize>> {
    let n = pi.len();
    if grid < n {
        return Err(Error::precondition(format!("grid side {grid} is smaller than {n}")));
    }
    Ok(pi.values().iter().enumerate().map(|(i, &p)| i * grid + (n - p)).collect())
}

pub fn embed_permutation_in_grid(pi: &Permutation) -> Vec<usize> {
    embed_permutation_in_grid_of(pi, pi.len()).expect("grid of matching size")
}

/// The chord diagram `F_n`, whose intersection graph is `CG_n` with chord
/// `(i−1)·n + (j−1)` playing vertex `(i,j)`.
pub fn fn_layout(n: usize) -> ChordDiagram {
    let names: Vec<String> = (0..n * n).map(|x| x.to_string()).collect();
    let idx = |i: usize, j: usize| (i - 1) * n + (j - 1);
    let mut word = Vec::with_capacity(2 * n * n);
    for q in 1..=n {
        let j = n + 1 - q;
        word.extend((1..=n).rev().map(|i| idx(i, j)));
    }
    for i in (1..=n).rev() {
        word.extend((1..=n).rev().map(|j| idx(i, j)));
    }
    ChordDiagram::with_names(names, word)
}

/// One round of the non-crossing chord elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IterationStat {
    pub chords_before: usize,
    pub chords_after: usize,
    pub noncrossing_before: usize,
    pub noncrossing_after: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToPermutation {
    pub pi: Permutation,
    /// Steps on `permutation_graph(pi)`; replay leaves the input circle
    /// graph as the induced subgraph on `map`.
    pub trace: OperationTrace,
    /// Input chord `c` becomes vertex `map[c]` of the permutation graph.
    pub map: Vec<usize>,
    pub stats: Vec<IterationStat>,
}

/// Turns `D` into a permutation graph of at most `3n` vertices that has the
/// circle graph of `D` as a vertex-minor, by making every chord cross `arc`.
pub fn circle_to_permutation(d: &ChordDiagram, arc: Arc) -> Result<ToPermutation> {
    let mut flags = arc.flags(d.word.len())?;
    let mut word = d.word.clone();
    let mut next = d.chord_count();
    // (x, y) per round, in order.
    let mut added: Vec<(usize, usize)> = Vec::new();
    let mut stats = Vec::new();
    let noncrossing = |word: &[usize], flags: &[bool], chords: usize| -> Vec<usize> {
        let mut side = vec![[false; 2]; chords];
        for (p, &c) in word.iter().enumerate() {
            side[c][flags[p] as usize] = true;
        }
        (0..chords).filter(|&c| !(side[c][0] && side[c][1])).collect()
    };
    loop {
        let nc = noncrossing(&word, &flags, next);
        let Some(&v) = nc.first() else { break };
        let len = word.len();
        let b = word.iter().rposition(|&c| c == v).expect("chord has two ends");
        let side = flags[b];
        let last = (0..len).find(|&p| flags[p] == side && flags[(p + 1) % len] != side).expect("arc is proper");
        let (x, y) = (next, next + 1);
        next += 2;
        let mut nw = Vec::with_capacity(len + 4);
        let mut nf = Vec::with_capacity(len + 4);
        for p in 0..len {
            if p == b {
                nw.extend([x, y]);
                nf.extend([side, side]);
            } else {
                nw.push(word[p]);
                nf.push(flags[p]);
            }
            if p == last {
                nw.extend([y, v, x]);
                nf.extend([!side; 3]);
            }
        }
        word = nw;
        flags = nf;
        let after = noncrossing(&word, &flags, next).len();
        stats.push(IterationStat {
            chords_before: next - 2,
            chords_after: next,
            noncrossing_before: nc.len(),
            noncrossing_after: after,
        });
        added.push((x, y));
    }

    // Read the permutation: the arc side runs a_N..a_1, the other side b_1..b_N.
    let total = next;
    let len = word.len();
    let start_out = (0..len).find(|&p| !flags[p] && flags[(p + len - 1) % len]).unwrap_or(0);
    let start_in = (0..len).find(|&p| flags[p] && !flags[(p + len - 1) % len]).unwrap_or(0);
    let mut in_rank = vec![0; total];
    let mut out_rank = vec![0; total];
    for k in 0..total {
        in_rank[word[(start_in + k) % len]] = k + 1;
        out_rank[word[(start_out + k) % len]] = k + 1;
    }
    let mut pi = vec![0; total];
    let mut vert = vec![0; total];
    for c in 0..total {
        let i = total + 1 - in_rank[c];
        pi[i - 1] = out_rank[c];
        vert[c] = i - 1;
    }
    let pi = Permutation::new(pi)?;

    let final_names: Vec<String> = (0..total).map(|c| c.to_string()).collect();
    let fin = ChordDiagram::with_names(final_names, word);
    let ig = intersection_graph(&fin);
    let mut by_vertex = vec![0; total];
    for c in 0..total {
        by_vertex[vert[c]] = c;
    }
    if ig.subgraph(&by_vertex)? != permutation_graph(&pi) {
        return Err(Error::precondition("final diagram does not read as a permutation"));
    }

    let mut steps = Vec::new();
    for &(x, y) in added.iter().rev() {
        steps.extend([Step::Lc(x), Step::Lc(y), Step::Delete(x), Step::Delete(y)]);
    }
    let trace = OperationTrace::from_steps(steps).relabel(&vert);
    Ok(ToPermutation { pi, trace, map: vert[..d.chord_count()].to_vec(), stats })
}

/// Every arc of `d` that is a nonempty proper part of the word, in
/// canonical-position order.
pub fn arcs(d: &ChordDiagram) -> Vec<Arc> {
    let total = d.word.len();
    (0..total).flat_map(|start| (1..total).map(move |len| Arc { start, len })).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToGrid {
    /// Side of the grid, `3n`.
    pub grid: usize,
    pub arc: Arc,
    /// Steps on `comparability_grid(grid)`.
    pub trace: OperationTrace,
    /// Input chord `c` becomes grid vertex `map[c]`.
    pub map: Vec<usize>,
    pub permutation: ToPermutation,
}

/// Realises the circle graph of `d` as a vertex-minor of `CG_{3n}`.
pub fn circle_to_grid(d: &ChordDiagram) -> Result<ToGrid> {
    let n = d.chord_count();
    if n == 0 {
        return Err(Error::Malformed("empty diagram".into()));
    }
    let grid = 3 * n;
    let arc = arcs(d)
        .into_iter()
        .min_by_key(|&a| d.crossing(a).map(|c| c.iter().filter(|x| !**x).count()).unwrap_or(usize::MAX))
        .expect("a diagram with a chord has an arc");
    let permutation = circle_to_permutation(d, arc)?;
    let image = embed_permutation_in_grid_of(&permutation.pi, grid)?;
    let mut keep = image.clone();
    keep.sort_unstable();
    let mut trace = OperationTrace::from_steps(vec![Step::Keep(keep)]);
    trace.extend(permutation.trace.relabel(&image));
    let map = permutation.map.iter().map(|&v| image[v]).collect();
    Ok(ToGrid { grid, arc, trace, map, permutation })
}

/// Largest chord count checked by [`verify_circle_to_grid`].
pub const CIRCLE_VERIFY_CAP: usize = 6;

/// Replays the grid trace and compares the induced subgraph on the image
/// with the circle graph, vertex by vertex.
pub fn verify_circle_to_grid(d: &ChordDiagram, r: &ToGrid) -> Result<bool> {
    if d.chord_count() > CIRCLE_VERIFY_CAP {
        return Err(Error::CapExceeded { what: "verified chord count", limit: CIRCLE_VERIFY_CAP, actual: d.chord_count() });
    }
    let replayed = crate::trace::replay(&comparability_grid(r.grid), &r.trace)?;
    Ok(replayed.induced_on(&r.map)? == intersection_graph(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::replay;
    use proptest::prelude::*;

    fn diagram(s: &str) -> ChordDiagram {
        ChordDiagram::parse(s).unwrap()
    }

    #[test]
    fn small_intersection_graphs() {
        assert_eq!(intersection_graph(&diagram("1 2 1 2")), OrderedGraph::complete(2));
        assert_eq!(intersection_graph(&diagram("1 1 2 2")), OrderedGraph::new(2));
    }

    #[test]
    fn parse_rejects_bad_words() {
        assert!(ChordDiagram::parse("1 2 1").is_err());
        assert!(ChordDiagram::parse("1 1 1 2 2").is_err());
    }

    #[test]
    fn canonical_rotation_is_stable() {
        let d = diagram("2 1 3 2 1 3");
        assert_eq!(d.tokens(), ["1", "3", "2", "1", "3", "2"]);
        assert_eq!(diagram("3 2 1 3 2 1"), d);
    }

    #[test]
    fn grid_small_cases() {
        assert_eq!(comparability_grid(1), OrderedGraph::new(1));
        let cg2 = comparability_grid(2);
        assert_eq!(cg2.edge_count(), 5);
        assert!(!cg2.has_edge(1, 2));
        assert_eq!(comparability_grid(3).edge_count(), 27);
    }

    #[test]
    fn fn_layout_is_the_grid() {
        for n in 1..=5 {
            assert_eq!(intersection_graph(&fn_layout(n)), comparability_grid(n));
        }
    }

    #[test]
    fn permutation_graph_examples() {
        assert_eq!(permutation_graph(&Permutation::identity(4)).edge_count(), 0);
        let rev = Permutation::new(vec![4, 3, 2, 1]).unwrap();
        assert_eq!(permutation_graph(&rev), OrderedGraph::complete(4));
        let g = permutation_graph(&Permutation::new(vec![2, 3, 1]).unwrap());
        assert_eq!(g.edges(), [(0, 2), (1, 2)]);
        assert!(Permutation::new(vec![1, 1]).is_err());
    }

    #[test]
    fn embedding_examples() {
        let id = Permutation::identity(3);
        let img = embed_permutation_in_grid(&id);
        assert_eq!(comparability_grid(3).subgraph(&img).unwrap().edge_count(), 0);
        let pi = Permutation::new(vec![1, 3, 2]).unwrap();
        let img = embed_permutation_in_grid(&pi);
        assert_eq!(comparability_grid(3).subgraph(&img).unwrap(), permutation_graph(&pi));
    }

    #[test]
    fn all_crossing_diagram_needs_no_steps() {
        let d = diagram("1 2 1 2");
        let r = circle_to_permutation(&d, Arc { start: 0, len: 2 }).unwrap();
        assert!(r.trace.is_empty() && r.stats.is_empty());
        assert_eq!(r.pi.len(), 2);
    }

    #[test]
    fn one_noncrossing_chord_adds_two() {
        let d = diagram("1 2 1 2");
        let r = circle_to_permutation(&d, Arc { start: 0, len: 1 }).unwrap();
        assert_eq!(r.stats.len(), 1);
        assert_eq!(r.pi.len(), 4);
    }

    #[test]
    fn circle_to_grid_small() {
        for s in ["1 1", "1 2 1 2", "1 2 3 1 4 2 3 4", "1 2 1 3 2 4 3 4"] {
            let d = diagram(s);
            let r = circle_to_grid(&d).unwrap();
            assert!(verify_circle_to_grid(&d, &r).unwrap(), "{s}");
            let rep = replay(&comparability_grid(r.grid), &r.trace).unwrap();
            assert_eq!(rep.graph.n(), d.chord_count());
        }
    }

    fn random_word() -> impl Strategy<Value = Vec<usize>> {
        (1usize..=6).prop_flat_map(|n| Just((0..n).chain(0..n).collect::<Vec<_>>()).prop_shuffle())
    }

    proptest! {
        #[test]
        fn flip_is_local_complementation(word in random_word(), pick in 0usize..6) {
            let tokens: Vec<String> = word.iter().map(|c| c.to_string()).collect();
            let d = ChordDiagram::from_tokens(&tokens).unwrap();
            let v = pick % d.chord_count();
            let lhs = intersection_graph(&flip_index(&d, v));
            let rhs = intersection_graph(&d).local_complement(v).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn permutation_pipeline_replays(word in random_word(), start in 0usize..12, len in 1usize..12) {
            let tokens: Vec<String> = word.iter().map(|c| c.to_string()).collect();
            let d = ChordDiagram::from_tokens(&tokens).unwrap();
            let total = 2 * d.chord_count();
            let arc = Arc { start: start % total, len: 1 + len % (total - 1) };
            let r = circle_to_permutation(&d, arc).unwrap();
            prop_assert!(r.pi.len() <= 3 * d.chord_count());
            for s in &r.stats {
                prop_assert_eq!(s.chords_after, s.chords_before + 2);
                prop_assert!(s.noncrossing_after < s.noncrossing_before);
            }
            let rep = replay(&permutation_graph(&r.pi), &r.trace).unwrap();
            prop_assert_eq!(rep.induced_on(&r.map).unwrap(), intersection_graph(&d));
        }
    }
}
