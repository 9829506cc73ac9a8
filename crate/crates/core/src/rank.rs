//! Cut-rank, local connectivity, connectivity and exact rank-width.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{bits_of, mask_of};
use crate::trace::{OperationTrace, Step};
use crate::{Error, OrderedGraph, Result};

/// Incrementally maintained row-echelon basis of GF(2) vectors.
#[derive(Debug, Clone, Default)]
pub struct Gf2Basis {
    rows: Vec<(usize, Vec<u64>)>,
}

impl Gf2Basis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [u64]) {
        for (p, r) in &self.rows {
            if v[p / 64] >> (p % 64) & 1 == 1 {
                for (a, b) in v.iter_mut().zip(r) {
                    *a ^= b;
                }
            }
        }
    }

    /// Whether `v` lies in the span of the basis.
    pub fn spans(&self, v: &[u64]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(|&w| w == 0)
    }

    /// Adds `v`; returns false (and leaves the basis unchanged) if `v` is
    /// already spanned.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        let Some(p) = bits_of(&v).next() else { return false };
        for (_, r) in self.rows.iter_mut() {
            if r[p / 64] >> (p % 64) & 1 == 1 {
                for (a, b) in r.iter_mut().zip(&v) {
                    *a ^= b;
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

/// GF(2) rank of the submatrix of the adjacency matrix on `rows × cols`.
pub fn submatrix_rank(g: &OrderedGraph, rows: &[usize], cols: &[usize]) -> usize {
    let mask = mask_of(g.n(), cols);
    let mut basis = Gf2Basis::new();
    let mut v = vec![0u64; mask.len()];
    for &r in rows {
        for ((a, b), m) in v.iter_mut().zip(g.row(r)).zip(&mask) {
            *a = b & m;
        }
        basis.insert(&v);
        if basis.rank() == cols.len() {
            break;
        }
    }
    basis.rank()
}

pub fn complement_of(n: usize, xs: &[usize]) -> Vec<usize> {
    let m = mask_of(n, xs);
    (0..n).filter(|&v| m[v / 64] >> (v % 64) & 1 == 0).collect()
}

fn check_disjoint(g: &OrderedGraph, s: &[usize], t: &[usize]) -> Result<()> {
    g.check_set(s)?;
    g.check_set(t)?;
    let ms = mask_of(g.n(), s);
    match t.iter().find(|&&v| ms[v / 64] >> (v % 64) & 1 == 1) {
        Some(&v) => Err(Error::Overlap(v)),
        None => Ok(()),
    }
}

/// `ρ(X)`: rank of `A[X, V∖X]`.
pub fn cut_rank(g: &OrderedGraph, x: &[usize]) -> Result<usize> {
    g.check_set(x)?;
    Ok(submatrix_rank(g, x, &complement_of(g.n(), x)))
}

/// `⊓(S,T)`: rank of `A[S,T]` for disjoint `S`, `T`.
pub fn local_connectivity(g: &OrderedGraph, s: &[usize], t: &[usize]) -> Result<usize> {
    check_disjoint(g, s, t)?;
    Ok(submatrix_rank(g, s, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KappaMethod {
    /// Minimum of `ρ(X)` over every `S ⊆ X ⊆ V∖T`.
    Enumerate,
    /// Remove outside vertices one at a time using
    /// `κ_G = max(κ_{G−v}, κ_{(G*v)−v})`.
    Recursive,
}

/// Cap on the number of vertices outside `S ∪ T` for [`kappa`].
pub const KAPPA_FREE_CAP: usize = 20;

/// `κ(S,T)`: the least cut-rank of a set separating `S` from `T`.
pub fn kappa(g: &OrderedGraph, s: &[usize], t: &[usize], method: KappaMethod) -> Result<usize> {
    check_disjoint(g, s, t)?;
    if s.is_empty() || t.is_empty() {
        return Err(Error::EmptySide);
    }
    let free = free_vertices(g.n(), s, t);
    if free.len() > KAPPA_FREE_CAP {
        return Err(Error::CapExceeded { what: "free vertex count", limit: KAPPA_FREE_CAP, actual: free.len() });
    }
    Ok(match method {
        KappaMethod::Enumerate => kappa_enumerate(g, s, &free),
        KappaMethod::Recursive => kappa_recursive(g, s.to_vec(), t.to_vec()),
    })
}

fn free_vertices(n: usize, s: &[usize], t: &[usize]) -> Vec<usize> {
    let st: Vec<usize> = s.iter().chain(t).copied().collect();
    complement_of(n, &st)
}

fn kappa_enumerate(g: &OrderedGraph, s: &[usize], free: &[usize]) -> usize {
    let mut best = usize::MAX;
    let mut x = Vec::with_capacity(s.len() + free.len());
    for sub in 0u32..(1 << free.len()) {
        x.clear();
        x.extend_from_slice(s);
        x.extend(free.iter().enumerate().filter(|(i, _)| sub >> i & 1 == 1).map(|(_, &v)| v));
        let r = submatrix_rank(g, &x, &complement_of(g.n(), &x));
        best = best.min(r);
        if best == 0 {
            break;
        }
    }
    best
}

fn shift_after_delete(xs: &[usize], v: usize) -> Vec<usize> {
    xs.iter().map(|&x| if x > v { x - 1 } else { x }).collect()
}

fn kappa_recursive(g: &OrderedGraph, s: Vec<usize>, t: Vec<usize>) -> usize {
    let free = free_vertices(g.n(), &s, &t);
    let Some(&v) = free.first() else {
        return submatrix_rank(g, &s, &t);
    };
    let (s2, t2) = (shift_after_delete(&s, v), shift_after_delete(&t, v));
    let (plain, _) = g.delete_vertex(v).expect("free vertex is in range");
    let a = kappa_recursive(&plain, s2.clone(), t2.clone());
    let (lc, _) = g
        .local_complement(v)
        .and_then(|h| h.delete_vertex(v))
        .expect("free vertex is in range");
    let b = kappa_recursive(&lc, s2, t2);
    a.max(b)
}

/// A pivot-minor on exactly `S ∪ T` whose local connectivity equals
/// `κ_G(S,T)`, with the Delete/Pivot trace producing it.
pub fn extract_connected_pivot_minor(
    g: &OrderedGraph,
    s: &[usize],
    t: &[usize],
) -> Result<(OrderedGraph, OperationTrace)> {
    let target = kappa(g, s, t, KappaMethod::Enumerate)?;
    let mut trace = OperationTrace::new();
    let mut cur = g.clone();
    let mut labels: Vec<usize> = (0..g.n()).collect();
    let (mut s, mut t) = (s.to_vec(), t.to_vec());
    while let Some(&v) = free_vertices(cur.n(), &s, &t).first() {
        let (s2, t2) = (shift_after_delete(&s, v), shift_after_delete(&t, v));
        let (plain, _) = cur.delete_vertex(v)?;
        let orig_v = labels[v];
        let next = if kappa(&plain, &s2, &t2, KappaMethod::Enumerate)? == target {
            trace.push(Step::Delete(orig_v));
            plain
        } else {
            let u = bits_of(cur.row(v)).next().ok_or_else(|| {
                Error::precondition("isolated vertex changed the connectivity")
            })?;
            let (piv, _) = cur.pivot(u, v)?.delete_vertex(v)?;
            if kappa(&piv, &s2, &t2, KappaMethod::Enumerate)? != target {
                return Err(Error::precondition("neither deletion preserves the connectivity"));
            }
            trace.push(Step::Pivot(labels[u], orig_v));
            trace.push(Step::Delete(orig_v));
            piv
        };
        labels.remove(v);
        cur = next;
        s = s2;
        t = t2;
    }
    Ok((cur, trace))
}

/// Cap on the vertex count for [`rank_width`].
pub const RANK_WIDTH_CAP: usize = 14;

/// A cubic tree whose leaves are the vertices of a graph.
///
/// Tree nodes `0..n` are the leaves for vertices `0..n`; the remaining nodes
/// are internal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankDecomposition {
    pub node_count: usize,
    pub edges: Vec<(usize, usize)>,
    pub width: usize,
}

impl RankDecomposition {
    /// Checks the tree shape against an `n`-vertex graph.
    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |m: &str| Err(Error::precondition(alloc::format!("decomposition: {m}")));
        if n == 0 {
            return if self.node_count == 0 { Ok(()) } else { bad("nodes without vertices") };
        }
        if self.node_count < n || self.edges.len() + 1 != self.node_count {
            return bad("not a tree on the stated nodes");
        }
        let mut deg = vec![0usize; self.node_count];
        for &(a, b) in &self.edges {
            if a >= self.node_count || b >= self.node_count || a == b {
                return bad("edge endpoint out of range");
            }
            deg[a] += 1;
            deg[b] += 1;
        }
        if n >= 2 && deg[..n].iter().any(|&d| d != 1) {
            return bad("a vertex is not a leaf");
        }
        if deg[n..].iter().any(|&d| d != 3) {
            return bad("an internal node does not have degree 3");
        }
        let comps = self.components_without(usize::MAX);
        if comps.iter().any(|&c| c != 0) {
            return bad("tree is disconnected");
        }
        Ok(())
    }

    /// Component id of each node once edge `skip` is removed.
    fn components_without(&self, skip: usize) -> Vec<usize> {
        let mut adj = vec![Vec::new(); self.node_count];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if i != skip {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut comp = vec![usize::MAX; self.node_count];
        let mut next = 0;
        for start in 0..self.node_count {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Maximum over tree edges of the cut-rank of the leaves on one side.
    pub fn recompute_width(&self, g: &OrderedGraph) -> usize {
        (0..self.edges.len())
            .map(|e| {
                let comp = self.components_without(e);
                let side: Vec<usize> = (0..g.n()).filter(|&v| comp[v] == comp[self.edges[e].0]).collect();
                submatrix_rank(g, &side, &complement_of(g.n(), &side))
            })
            .max()
            .unwrap_or(0)
    }
}

/// Exact rank-width by dynamic programming over vertex subsets.
pub fn rank_width(g: &OrderedGraph) -> Result<(usize, RankDecomposition)> {
    let n = g.n();
    if n > RANK_WIDTH_CAP {
        return Err(Error::CapExceeded { what: "rank-width vertex count", limit: RANK_WIDTH_CAP, actual: n });
    }
    if n <= 1 {
        let d = RankDecomposition { node_count: n, edges: Vec::new(), width: 0 };
        return Ok((0, d));
    }
    let full: usize = (1 << n) - 1;
    let members = |m: usize| -> Vec<usize> { (0..n).filter(|&v| m >> v & 1 == 1).collect() };
    let cr: Vec<u8> = (0..=full)
        .map(|m| {
            let x = members(m);
            submatrix_rank(g, &x, &complement_of(n, &x)) as u8
        })
        .collect();
    let mut h = vec![0u8; full];
    let mut split = vec![0usize; full];
    for x in 1..full {
        if x.count_ones() == 1 {
            h[x] = cr[x];
            continue;
        }
        let low = x & x.wrapping_neg();
        let rest = x ^ low;
        let mut best = u8::MAX;
        // a runs over submasks of x that contain its lowest bit, excluding x.
        let mut sub = rest;
        loop {
            let a = sub | low;
            if a != x {
                let v = h[a].max(h[x ^ a]);
                if v < best {
                    best = v;
                    split[x] = a;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        h[x] = best.max(cr[x]);
    }
    let mut best = u8::MAX;
    let mut root = 0;
    let rest = full ^ 1;
    let mut sub = rest;
    loop {
        let a = sub | 1;
        if a != full {
            let v = h[a].max(h[full ^ a]);
            if v < best {
                best = v;
                root = a;
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    let mut d = RankDecomposition { node_count: n, edges: Vec::new(), width: best as usize };
    let a = build_subtree(root, &split, &mut d);
    let b = build_subtree(full ^ root, &split, &mut d);
    d.edges.push((a, b));
    Ok((best as usize, d))
}

fn build_subtree(x: usize, split: &[usize], d: &mut RankDecomposition) -> usize {
    if x.count_ones() == 1 {
        return x.trailing_zeros() as usize;
    }
    let node = d.node_count;
    d.node_count += 1;
    let a = split[x];
    let l = build_subtree(a, split, d);
    let r = build_subtree(x ^ a, split, d);
    d.edges.push((node, l));
    d.edges.push((node, r));
    node
}

/// Outcome of [`check_mf_connected`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MfReport {
    Connected,
    /// A partition with `ρ(X) < m` whose sides both exceed `f(ρ(X))`.
    Violated { x: Vec<usize>, y: Vec<usize>, rho: usize },
}

pub const MF_CAP: usize = 20;

/// Checks `(m,f)`-connectivity: every partition `(X,Y)` with `ρ(X) < m` has
/// `min(|X|,|Y|) ≤ f(ρ(X))`. `f` returning `None` means unbounded.
pub fn check_mf_connected(
    g: &OrderedGraph,
    m: usize,
    f: impl Fn(usize) -> Option<u128>,
) -> Result<MfReport> {
    let n = g.n();
    if n > MF_CAP {
        return Err(Error::CapExceeded { what: "(m,f) check vertex count", limit: MF_CAP, actual: n });
    }
    if m == 0 || n == 0 {
        return Ok(MfReport::Connected);
    }
    // X always contains vertex 0; this covers each unordered partition once.
    for sub in 0u32..(1 << (n - 1)) {
        let x: Vec<usize> =
            core::iter::once(0).chain((1..n).filter(|&v| sub >> (v - 1) & 1 == 1)).collect();
        let y = complement_of(n, &x);
        let rho = submatrix_rank(g, &x, &y);
        if rho >= m {
            continue;
        }
        let small = x.len().min(y.len()) as u128;
        if f(rho).is_some_and(|bound| small > bound) {
            return Ok(MfReport::Violated { x, y, rho });
        }
    }
    Ok(MfReport::Connected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds;
    use crate::trace::apply_trace;
    use proptest::prelude::*;

    #[test]
    fn cut_rank_examples() {
        let g = OrderedGraph::cycle(5);
        assert_eq!(cut_rank(&g, &[]).unwrap(), 0);
        assert_eq!(cut_rank(&g, &[0, 1]).unwrap(), 2);
        let k5 = OrderedGraph::complete(5);
        for x in [&[0][..], &[1, 3], &[0, 2, 4], &[0, 1, 2, 3]] {
            assert_eq!(cut_rank(&k5, x).unwrap(), 1);
        }
    }

    #[test]
    fn local_connectivity_examples() {
        let g = OrderedGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(local_connectivity(&g, &[0, 1], &[2, 3]).unwrap(), 0);
        let c5 = OrderedGraph::cycle(5);
        assert_eq!(local_connectivity(&c5, &[0, 1], &[2, 3, 4]).unwrap(), cut_rank(&c5, &[0, 1]).unwrap());
        assert_eq!(local_connectivity(&c5, &[0, 1], &[1]), Err(Error::Overlap(1)));
    }

    #[test]
    fn kappa_examples() {
        let p4 = OrderedGraph::path(4);
        for m in [KappaMethod::Enumerate, KappaMethod::Recursive] {
            assert_eq!(kappa(&p4, &[0], &[3], m).unwrap(), 1);
        }
        let two = OrderedGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(kappa(&two, &[0], &[3], KappaMethod::Enumerate).unwrap(), 0);
        let c5 = OrderedGraph::cycle(5);
        let all = kappa(&c5, &[0, 1], &[2, 3, 4], KappaMethod::Recursive).unwrap();
        assert_eq!(all, local_connectivity(&c5, &[0, 1], &[2, 3, 4]).unwrap());
        assert_eq!(kappa(&c5, &[], &[1], KappaMethod::Enumerate), Err(Error::EmptySide));
    }

    #[test]
    fn pivot_minor_of_a_path() {
        let p4 = OrderedGraph::path(4);
        let (h, t) = extract_connected_pivot_minor(&p4, &[0], &[3]).unwrap();
        assert_eq!(h, OrderedGraph::complete(2));
        assert!(t.pivot_minor_only());
        assert_eq!(apply_trace(&p4, &t).unwrap(), h);
        let (same, empty) = extract_connected_pivot_minor(&p4, &[0, 1], &[2, 3]).unwrap();
        assert_eq!(same, p4);
        assert!(empty.is_empty());
    }

    #[test]
    fn small_rank_widths() {
        assert_eq!(rank_width(&OrderedGraph::new(1)).unwrap().0, 0);
        for n in 2..=6 {
            assert_eq!(rank_width(&OrderedGraph::complete(n)).unwrap().0, 1);
        }
        let (w, d) = rank_width(&OrderedGraph::cycle(5)).unwrap();
        assert_eq!(w, 2);
        d.validate(5).unwrap();
        assert_eq!(d.recompute_width(&OrderedGraph::cycle(5)), 2);
        assert_eq!(rank_width(&OrderedGraph::new(3)).unwrap().0, 0);
    }

    #[test]
    fn mf_examples() {
        let k5 = OrderedGraph::complete(5);
        assert_eq!(check_mf_connected(&k5, 0, |_| Some(0)).unwrap(), MfReport::Connected);
        match check_mf_connected(&k5, 2, |r| bounds::g(r as u32).ok()).unwrap() {
            MfReport::Violated { x, y, rho } => {
                assert_eq!(rho, 1);
                assert!(x.len().min(y.len()) == 2);
            }
            MfReport::Connected => panic!("K5 is not (2,g)-connected"),
        }
    }

    // Empirical only. With exactly 3g(r−1) vertices the implication can
    // fail (K3 for r = 2); with more it held on every sample.
    #[test]
    fn mf_connected_large_graphs_have_width() {
        let f = |x: usize| bounds::g(x as u32).ok();
        let k3 = OrderedGraph::complete(3);
        assert_eq!(check_mf_connected(&k3, 2, f).unwrap(), MfReport::Connected);
        assert_eq!(rank_width(&k3).unwrap().0, 1);
        let mut hits = 0;
        for seed in 0..300 {
            let mut r = crate::gen::rng(seed);
            let n = 3 + seed as usize % 8;
            let g = crate::gen::random_graph(n, 0.2 + (seed % 7) as f64 / 10.0, &mut r);
            let (w, _) = rank_width(&g).unwrap();
            for m in 1..=2usize {
                let floor = 3 * bounds::g(m as u32 - 1).unwrap() as usize;
                if n > floor && check_mf_connected(&g, m, f).unwrap() == MfReport::Connected {
                    assert!(w >= m, "seed {seed}: ({m},g)-connected but width {w}");
                    hits += 1;
                }
            }
        }
        assert!(hits > 100, "{hits}");
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = OrderedGraph> {
        (2..=max_n).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..n * n).prop_map(move |pairs| {
                let mut g = OrderedGraph::new(n);
                for (u, v) in pairs {
                    if u != v {
                        g.set_edge(u, v, true);
                    }
                }
                g
            })
        })
    }

    proptest! {
        #[test]
        fn cut_rank_symmetric_and_lc_invariant(g in arb_graph(8), mask in 0u32..256, v in 0usize..8) {
            let n = g.n();
            let x: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let y = complement_of(n, &x);
            let r = cut_rank(&g, &x).unwrap();
            prop_assert_eq!(r, cut_rank(&g, &y).unwrap());
            prop_assert_eq!(r, cut_rank(&g.local_complement(v % n).unwrap(), &x).unwrap());
        }

        #[test]
        fn kappa_methods_agree(g in arb_graph(8), a in 0usize..8, b in 0usize..8) {
            let n = g.n();
            let (a, b) = (a % n, b % n);
            prop_assume!(a != b);
            let e = kappa(&g, &[a], &[b], KappaMethod::Enumerate).unwrap();
            prop_assert_eq!(e, kappa(&g, &[a], &[b], KappaMethod::Recursive).unwrap());
        }

        #[test]
        fn rank_width_witness_recomputes(g in arb_graph(7)) {
            let (w, d) = rank_width(&g).unwrap();
            d.validate(g.n()).unwrap();
            prop_assert_eq!(d.recompute_width(&g), w);
        }
    }
}
