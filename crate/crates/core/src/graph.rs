//! Ordered simple graphs stored as bit-packed rows of the adjacency matrix.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// Bit mask over `0..n` with the listed vertices set.
pub(crate) fn mask_of(n: usize, xs: &[usize]) -> Vec<u64> {
    let mut m = vec![0u64; words_for(n)];
    for &x in xs {
        m[x / WORD] |= 1 << (x % WORD);
    }
    m
}

pub(crate) fn bits_of(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        core::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * WORD + b)
        })
    })
}

/// A simple graph on `0..n` whose vertex order is the natural one.
///
/// The adjacency matrix is kept symmetric with a zero diagonal; each row is a
/// run of `stride` 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedGraph {
    n: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl OrderedGraph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        let stride = words_for(n);
        OrderedGraph { n, stride, bits: vec![0; n * stride] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set_edge(u, v, true);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::new(n);
        if n >= 3 {
            for i in 0..n {
                g.set_edge(i, (i + 1) % n, true);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::new(n);
        for i in 1..n {
            g.set_edge(i - 1, i, true);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::Malformed(alloc::format!("loop at vertex {u}")));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    /// Builds a graph from a dense 0/1 matrix, rejecting asymmetry and loops.
    pub fn from_matrix(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.len();
        let mut g = Self::new(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::SizeMismatch { expected: n, actual: row.len() });
            }
            if row[i] {
                return Err(Error::Malformed(alloc::format!("nonzero diagonal at row {i}")));
            }
            for (j, &b) in row.iter().enumerate() {
                if b != rows[j][i] {
                    return Err(Error::Malformed(alloc::format!(
                        "matrix not symmetric at ({i},{j})"
                    )));
                }
                if b && i < j {
                    g.set_edge(i, j, true);
                }
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Checks range and distinctness of a vertex list.
    pub fn check_set(&self, xs: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.n];
        for &x in xs {
            self.check_vertex(x)?;
            if core::mem::replace(&mut seen[x], true) {
                return Err(Error::DuplicateVertex(x));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.stride..(v + 1) * self.stride]
    }

    #[inline]
    fn row_mut(&mut self, v: usize) -> &mut [u64] {
        &mut self.bits[v * self.stride..(v + 1) * self.stride]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.stride + v / WORD] >> (v % WORD) & 1 == 1
    }

    /// Sets or clears the edge `uv`. Panics on a loop or an out-of-range vertex.
    pub fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        assert!(u != v, "loops are not allowed");
        assert!(u < self.n && v < self.n, "vertex out of range");
        let (s, wu, wv) = (self.stride, u / WORD, v / WORD);
        if present {
            self.bits[u * s + wv] |= 1 << (v % WORD);
            self.bits[v * s + wu] |= 1 << (u % WORD);
        } else {
            self.bits[u * s + wv] &= !(1 << (v % WORD));
            self.bits[v * s + wu] &= !(1 << (u % WORD));
        }
    }

    pub fn toggle_edge(&mut self, u: usize, v: usize) {
        let e = self.has_edge(u, v);
        self.set_edge(u, v, !e);
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        bits_of(self.row(v)).collect()
    }

    /// Neighbours of `v` among `xs`, in the order of `xs`.
    pub fn neighbours_in(&self, v: usize, xs: &[usize]) -> Vec<usize> {
        xs.iter().copied().filter(|&x| self.has_edge(v, x)).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            out.extend(bits_of(self.row(u)).filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn is_clique(&self, xs: &[usize]) -> bool {
        xs.iter().enumerate().all(|(i, &a)| xs[i + 1..].iter().all(|&b| self.has_edge(a, b)))
    }

    pub fn is_coclique(&self, xs: &[usize]) -> bool {
        xs.iter().enumerate().all(|(i, &a)| xs[i + 1..].iter().all(|&b| !self.has_edge(a, b)))
    }

    pub fn is_complete_to(&self, xs: &[usize], ys: &[usize]) -> bool {
        xs.iter().all(|&x| ys.iter().all(|&y| self.has_edge(x, y)))
    }

    pub fn is_anticomplete_to(&self, xs: &[usize], ys: &[usize]) -> bool {
        xs.iter().all(|&x| ys.iter().all(|&y| !self.has_edge(x, y)))
    }

    /// Whether the induced subgraph on `xs` is connected (true for `xs` empty).
    pub fn is_connected_on(&self, xs: &[usize]) -> bool {
        let Some(&start) = xs.first() else { return true };
        let inside = mask_of(self.n, xs);
        let mut seen = vec![0u64; self.stride];
        seen[start / WORD] |= 1 << (start % WORD);
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for (wi, &w) in self.row(v).iter().enumerate() {
                let fresh = w & inside[wi] & !seen[wi];
                if fresh != 0 {
                    seen[wi] |= fresh;
                    for u in bits_of(&[fresh]) {
                        stack.push(wi * WORD + u);
                        count += 1;
                    }
                }
            }
        }
        count == xs.len()
    }

    /// In-place local complementation at `v`.
    pub fn local_complement_mut(&mut self, v: usize) -> Result<()> {
        self.check_vertex(v)?;
        let nb: Vec<u64> = self.row(v).to_vec();
        for x in bits_of(&nb) {
            let row = self.row_mut(x);
            for (r, m) in row.iter_mut().zip(&nb) {
                *r ^= m;
            }
            row[x / WORD] &= !(1 << (x % WORD));
        }
        Ok(())
    }

    /// `G*v`: complements the subgraph induced on the neighbourhood of `v`.
    pub fn local_complement(&self, v: usize) -> Result<Self> {
        let mut g = self.clone();
        g.local_complement_mut(v)?;
        Ok(g)
    }

    pub fn pivot_mut(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v || !self.has_edge(u, v) {
            return Err(Error::NotAnEdge { u, v });
        }
        #[cfg(debug_assertions)]
        let expected = if self.n <= 256 { Some(self.pivot_closed_form(u, v)?) } else { None };
        self.local_complement_mut(u)?;
        self.local_complement_mut(v)?;
        self.local_complement_mut(u)?;
        #[cfg(debug_assertions)]
        if let Some(e) = expected {
            debug_assert!(e == *self, "pivot disagrees with its closed form");
        }
        Ok(())
    }

    /// `G×uv = G*u*v*u` for an edge `uv`.
    pub fn pivot(&self, u: usize, v: usize) -> Result<Self> {
        let mut g = self.clone();
        g.pivot_mut(u, v)?;
        Ok(g)
    }

    /// The pivot computed without local complementation: toggle every pair
    /// between distinct classes among `N(u)∩N(v)`, `N(u)∖N(v)∖{v}` and
    /// `N(v)∖N(u)∖{u}`, then exchange the labels `u` and `v`.
    pub fn pivot_closed_form(&self, u: usize, v: usize) -> Result<Self> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v || !self.has_edge(u, v) {
            return Err(Error::NotAnEdge { u, v });
        }
        let (nu, nv) = (self.row(u), self.row(v));
        let mut both = vec![0u64; self.stride];
        let mut only_u = vec![0u64; self.stride];
        let mut only_v = vec![0u64; self.stride];
        for i in 0..self.stride {
            both[i] = nu[i] & nv[i];
            only_u[i] = nu[i] & !nv[i];
            only_v[i] = nv[i] & !nu[i];
        }
        only_u[v / WORD] &= !(1 << (v % WORD));
        only_v[u / WORD] &= !(1 << (u % WORD));
        let mut g = self.clone();
        for (class, a, b) in [(&both, &only_u, &only_v), (&only_u, &both, &only_v), (&only_v, &both, &only_u)] {
            for x in bits_of(class) {
                let row = g.row_mut(x);
                for i in 0..row.len() {
                    row[i] ^= a[i] | b[i];
                }
            }
        }
        Ok(g.swap_labels(u, v))
    }

    /// The graph with vertices `u` and `v` exchanged.
    pub fn swap_labels(&self, u: usize, v: usize) -> Self {
        let mut perm: Vec<usize> = (0..self.n).collect();
        perm.swap(u, v);
        self.subgraph_unchecked(&perm)
    }

    fn subgraph_unchecked(&self, xs: &[usize]) -> Self {
        let mut g = Self::new(xs.len());
        for (i, &a) in xs.iter().enumerate() {
            let row = self.row(a);
            let out = g.row_mut(i);
            for (j, &b) in xs.iter().enumerate() {
                if row[b / WORD] >> (b % WORD) & 1 == 1 {
                    out[j / WORD] |= 1 << (j % WORD);
                }
            }
        }
        g
    }

    /// Induced subgraph on `xs` with vertex `i` of the result being `xs[i]`.
    pub fn subgraph(&self, xs: &[usize]) -> Result<Self> {
        self.check_set(xs)?;
        Ok(self.subgraph_unchecked(xs))
    }

    /// Induced subgraph on `xs` in the inherited order, with the map from new
    /// labels to old ones.
    pub fn keep_induced(&self, xs: &[usize]) -> Result<(Self, Vec<usize>)> {
        self.check_set(xs)?;
        let mut map = xs.to_vec();
        map.sort_unstable();
        Ok((self.subgraph_unchecked(&map), map))
    }

    /// `G - v`, with the map from new labels to old ones.
    pub fn delete_vertex(&self, v: usize) -> Result<(Self, Vec<usize>)> {
        self.check_vertex(v)?;
        let keep: Vec<usize> = (0..self.n).filter(|&x| x != v).collect();
        Ok((self.subgraph_unchecked(&keep), keep))
    }

    /// Row-major upper-triangle adjacency bits packed most significant bit
    /// first, so that comparing keys compares the bit-strings lexicographically.
    pub fn adjacency_key(&self) -> Vec<u64> {
        let total = self.n * self.n.saturating_sub(1) / 2;
        let mut key = vec![0u64; total.div_ceil(WORD)];
        let mut pos = 0;
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    key[pos / WORD] |= 1 << (WORD - 1 - pos % WORD);
                }
                pos += 1;
            }
        }
        key
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }
}

impl fmt::Debug for OrderedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OrderedGraph({})", self.n)?;
        for u in 0..self.n {
            for v in 0..self.n {
                f.write_str(if self.has_edge(u, v) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_graph(max_n: usize) -> impl Strategy<Value = OrderedGraph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut g = OrderedGraph::new(n);
                let mut it = bits.into_iter();
                for u in 0..n {
                    for v in u + 1..n {
                        if it.next().unwrap() {
                            g.set_edge(u, v, true);
                        }
                    }
                }
                g
            })
        })
    }

    /// Local complementation straight from the definition.
    fn lc_by_definition(g: &OrderedGraph, v: usize) -> OrderedGraph {
        let mut h = g.clone();
        for x in 0..g.n() {
            for y in x + 1..g.n() {
                if x != v && y != v && g.has_edge(v, x) && g.has_edge(v, y) {
                    h.toggle_edge(x, y);
                }
            }
        }
        h
    }

    #[test]
    fn isolated_vertex_lc_is_identity() {
        let g = OrderedGraph::from_edges(4, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.local_complement(3).unwrap(), g);
    }

    #[test]
    fn star_center_lc_gives_k4() {
        let star = OrderedGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(star.local_complement(0).unwrap(), OrderedGraph::complete(4));
        assert_eq!(lc_by_definition(&star, 0), OrderedGraph::complete(4));
    }

    #[test]
    fn k2_pivot_is_k2() {
        let k2 = OrderedGraph::complete(2);
        assert_eq!(k2.pivot(0, 1).unwrap(), k2);
    }

    #[test]
    fn path_pivot_swaps_end_labels() {
        // a-b-c with a=0, b=1, c=2; pivoting bc yields a-c-b.
        let p = OrderedGraph::path(3);
        let expect = OrderedGraph::from_edges(3, &[(0, 2), (2, 1)]).unwrap();
        assert_eq!(p.pivot(1, 2).unwrap(), expect);
    }

    #[test]
    fn pivot_rejects_non_edge() {
        let p = OrderedGraph::path(3);
        assert_eq!(p.pivot(0, 2), Err(Error::NotAnEdge { u: 0, v: 2 }));
    }

    #[test]
    fn keep_induced_examples() {
        let k4 = OrderedGraph::complete(4);
        let (k3, map) = k4.keep_induced(&[3, 0, 2]).unwrap();
        assert_eq!(k3, OrderedGraph::complete(3));
        assert_eq!(map, [0, 2, 3]);
        let c5 = OrderedGraph::cycle(5);
        let (p3, _) = c5.keep_induced(&[1, 2, 3]).unwrap();
        assert_eq!(p3, OrderedGraph::path(3));
        let (same, id) = c5.keep_induced(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(same, c5);
        assert_eq!(id, [0, 1, 2, 3, 4]);
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let mut g = OrderedGraph::new(130);
        g.set_edge(0, 129, true);
        g.set_edge(0, 64, true);
        g.set_edge(63, 0, true);
        g.local_complement_mut(0).unwrap();
        assert!(g.has_edge(63, 64) && g.has_edge(64, 129) && g.has_edge(63, 129));
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.neighbours(129), [0, 63, 64]);
    }

    #[test]
    fn adjacency_key_orders_lexicographically() {
        let a = OrderedGraph::from_edges(3, &[(1, 2)]).unwrap(); // 001
        let b = OrderedGraph::from_edges(3, &[(0, 2)]).unwrap(); // 010
        assert!(a.adjacency_key() < b.adjacency_key());
    }

    proptest! {
        #[test]
        fn lc_matches_definition_and_is_involution(g in arb_graph(9), v in 0usize..9) {
            let v = v % g.n();
            let h = g.local_complement(v).unwrap();
            prop_assert_eq!(&h, &lc_by_definition(&g, v));
            prop_assert_eq!(h.local_complement(v).unwrap(), g);
        }

        #[test]
        fn pivot_closed_form_and_symmetry(g in arb_graph(8)) {
            for (u, v) in g.edges() {
                let p = g.pivot(u, v).unwrap();
                prop_assert_eq!(&p, &g.pivot_closed_form(u, v).unwrap());
                prop_assert_eq!(&p, &g.pivot(v, u).unwrap());
            }
        }

        #[test]
        fn distant_lcs_commute(g in arb_graph(8), a in 0usize..8, b in 0usize..8) {
            let (a, b) = (a % g.n(), b % g.n());
            prop_assume!(a != b && !g.has_edge(a, b));
            let ab = g.local_complement(a).unwrap().local_complement(b).unwrap();
            let ba = g.local_complement(b).unwrap().local_complement(a).unwrap();
            prop_assert_eq!(ab, ba);
        }
    }
}
