//! Binary cut-matroids, matroid intersection, k-links and disentangling.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::mask_of;
use crate::rank::{complement_of, kappa, local_connectivity, submatrix_rank, Gf2Basis, KappaMethod};
use crate::trace::{apply_trace, OperationTrace, Step};
use crate::{Error, OrderedGraph, Result};

/// The binary matroid represented by `A[T, V∖T]`, possibly restricted to a
/// smaller ground set. The rank of `X` is `⊓(T, X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatroid {
    ground: Vec<usize>,
    cols: Vec<Vec<u64>>,
}

/// `M_T` on ground set `V(G) ∖ T`.
pub fn cut_matroid(g: &OrderedGraph, t: &[usize]) -> Result<BinaryMatroid> {
    g.check_set(t)?;
    let ground = complement_of(g.n(), t);
    let words = t.len().div_ceil(64).max(1);
    let cols = ground
        .iter()
        .map(|&x| {
            let mut c = vec![0u64; words];
            for (i, &ti) in t.iter().enumerate() {
                if g.has_edge(ti, x) {
                    c[i / 64] |= 1 << (i % 64);
                }
            }
            c
        })
        .collect();
    Ok(BinaryMatroid { ground, cols })
}

impl BinaryMatroid {
    pub fn ground(&self) -> &[usize] {
        &self.ground
    }

    fn index(&self, x: usize) -> Result<usize> {
        self.ground
            .binary_search(&x)
            .map_err(|_| Error::precondition(alloc::format!("{x} is not in the ground set")))
    }

    fn rank_idx(&self, idx: impl IntoIterator<Item = usize>) -> usize {
        let mut b = Gf2Basis::new();
        for i in idx {
            b.insert(&self.cols[i]);
        }
        b.rank()
    }

    fn independent_idx(&self, idx: &[usize]) -> bool {
        let mut b = Gf2Basis::new();
        idx.iter().all(|&i| b.insert(&self.cols[i]))
    }

    pub fn rank(&self, xs: &[usize]) -> Result<usize> {
        let idx = xs.iter().map(|&x| self.index(x)).collect::<Result<Vec<_>>>()?;
        Ok(self.rank_idx(idx))
    }

    pub fn is_independent(&self, xs: &[usize]) -> Result<bool> {
        Ok(self.rank(xs)? == xs.len())
    }

    /// `M ∖ D`: the restriction to the ground elements outside `d`.
    pub fn delete(&self, d: &[usize]) -> BinaryMatroid {
        let (ground, cols) = self
            .ground
            .iter()
            .zip(&self.cols)
            .filter(|(x, _)| !d.contains(x))
            .map(|(&x, c)| (x, c.clone()))
            .unzip();
        BinaryMatroid { ground, cols }
    }
}

/// A partition `(P, Q)` of the common ground set with `r1(P) + r2(Q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionCertificate {
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    pub deficiency: usize,
}

impl PartitionCertificate {
    pub fn verify(&self, m1: &BinaryMatroid, m2: &BinaryMatroid) -> bool {
        let mut all: Vec<usize> = self.p.iter().chain(&self.q).copied().collect();
        all.sort_unstable();
        let covers = all == m1.ground;
        covers
            && matches!(
                (m1.rank(&self.p), m2.rank(&self.q)),
                (Ok(a), Ok(b)) if a + b == self.deficiency
            )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Intersection {
    Common(Vec<usize>),
    Certificate(PartitionCertificate),
}

/// A maximum common independent set together with a partition whose
/// deficiency equals its size.
pub fn max_common_independent(
    m1: &BinaryMatroid,
    m2: &BinaryMatroid,
) -> Result<(Vec<usize>, PartitionCertificate)> {
    if m1.ground != m2.ground {
        return Err(Error::GroundMismatch);
    }
    let n = m1.ground.len();
    let mut in_i = vec![false; n];
    loop {
        let cur: Vec<usize> = (0..n).filter(|&i| in_i[i]).collect();
        let with = |extra: usize, without: Option<usize>| -> Vec<usize> {
            let mut s: Vec<usize> = cur.iter().copied().filter(|&i| Some(i) != without).collect();
            s.push(extra);
            s
        };
        // Exchange graph. succ[a] lists b with an arc a -> b.
        let mut succ = vec![Vec::new(); n];
        for y in cur.iter().copied() {
            for x in (0..n).filter(|&x| !in_i[x]) {
                let swapped = with(x, Some(y));
                if m1.independent_idx(&swapped) {
                    succ[y].push(x);
                }
                if m2.independent_idx(&swapped) {
                    succ[x].push(y);
                }
            }
        }
        let sources: Vec<usize> = (0..n).filter(|&x| !in_i[x] && m1.independent_idx(&with(x, None))).collect();
        let sinks: Vec<bool> = (0..n).map(|x| !in_i[x] && m2.independent_idx(&with(x, None))).collect();
        let mut parent = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &s in &sources {
            seen[s] = true;
            queue.push_back(s);
        }
        let mut end = None;
        while let Some(a) = queue.pop_front() {
            if sinks[a] {
                end = Some(a);
                break;
            }
            for &b in &succ[a] {
                if !seen[b] {
                    seen[b] = true;
                    parent[b] = a;
                    queue.push_back(b);
                }
            }
        }
        match end {
            Some(mut z) => loop {
                in_i[z] = !in_i[z];
                if parent[z] == usize::MAX {
                    break;
                }
                z = parent[z];
            },
            None => {
                // U: everything that can still reach a sink.
                let mut pred = vec![Vec::new(); n];
                for a in 0..n {
                    for &b in &succ[a] {
                        pred[b].push(a);
                    }
                }
                let mut u = sinks.clone();
                let mut stack: Vec<usize> = (0..n).filter(|&x| sinks[x]).collect();
                while let Some(b) = stack.pop() {
                    for &a in &pred[b] {
                        if !u[a] {
                            u[a] = true;
                            stack.push(a);
                        }
                    }
                }
                let label = |i: usize| m1.ground[i];
                let p: Vec<usize> = (0..n).filter(|&i| u[i]).map(label).collect();
                let q: Vec<usize> = (0..n).filter(|&i| !u[i]).map(label).collect();
                let set: Vec<usize> = cur.iter().map(|&i| label(i)).collect();
                let deficiency = m1.rank(&p)? + m2.rank(&q)?;
                debug_assert_eq!(deficiency, set.len(), "min-max certificate is not tight");
                if deficiency != set.len() {
                    return Err(Error::precondition("matroid intersection certificate not tight"));
                }
                return Ok((set, PartitionCertificate { p, q, deficiency }));
            }
        }
    }
}

/// A common independent set of size `k`, or a partition showing none exists.
pub fn matroid_intersection(m1: &BinaryMatroid, m2: &BinaryMatroid, k: usize) -> Result<Intersection> {
    let (set, cert) = max_common_independent(m1, m2)?;
    Ok(if set.len() >= k {
        Intersection::Common(set[..k].to_vec())
    } else {
        Intersection::Certificate(cert)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkMode {
    Equal,
    Disjoint,
}

/// A pair certifying that `S` and `T` are well connected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KLink {
    pub x1: Vec<usize>,
    pub x2: Vec<usize>,
    pub mode: LinkMode,
}

impl KLink {
    pub fn k(&self) -> usize {
        self.x1.len()
    }
}

/// The clause of the k-link definition that fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkViolation {
    InvalidSets,
    Size,
    NotOutside,
    SIndependent,
    TIndependent,
    NotEqual,
    NotDisjoint,
    Rank,
    X1Neighbourhood,
    X2Neighbourhood,
}

impl fmt::Display for LinkViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinkViolation::InvalidSets => "invalid vertex sets",
            LinkViolation::Size => "size",
            LinkViolation::NotOutside => "outside S and T",
            LinkViolation::SIndependent => "S-independent",
            LinkViolation::TIndependent => "T-independent",
            LinkViolation::NotEqual => "equal",
            LinkViolation::NotDisjoint => "disjoint",
            LinkViolation::Rank => "full local connectivity",
            LinkViolation::X1Neighbourhood => "X1 common neighbourhood in T",
            LinkViolation::X2Neighbourhood => "X2 common neighbourhood in S",
        })
    }
}

fn same_neighbourhood(g: &OrderedGraph, xs: &[usize], target: &[usize]) -> bool {
    let Some(&first) = xs.first() else { return true };
    let reference = g.neighbours_in(first, target);
    xs.iter().all(|&x| g.neighbours_in(x, target) == reference)
}

/// Checks every clause of the k-link definition for `(S,T)`.
pub fn verify_k_link(
    g: &OrderedGraph,
    s: &[usize],
    t: &[usize],
    link: &KLink,
) -> core::result::Result<(), LinkViolation> {
    let k = link.x1.len();
    if local_connectivity(g, s, t).is_err() || g.check_set(&link.x1).is_err() || g.check_set(&link.x2).is_err() {
        return Err(LinkViolation::InvalidSets);
    }
    if link.x2.len() != k {
        return Err(LinkViolation::Size);
    }
    let st = mask_of(g.n(), &[s, t].concat());
    let inside = |v: &usize| st[v / 64] >> (v % 64) & 1 == 1;
    if link.x1.iter().chain(&link.x2).any(inside) {
        return Err(LinkViolation::NotOutside);
    }
    if submatrix_rank(g, &link.x1, s) != k {
        return Err(LinkViolation::SIndependent);
    }
    if submatrix_rank(g, &link.x2, t) != k {
        return Err(LinkViolation::TIndependent);
    }
    match link.mode {
        LinkMode::Equal => {
            let (mut a, mut b) = (link.x1.clone(), link.x2.clone());
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return Err(LinkViolation::NotEqual);
            }
        }
        LinkMode::Disjoint => {
            if link.x1.iter().any(|x| link.x2.contains(x)) {
                return Err(LinkViolation::NotDisjoint);
            }
            if submatrix_rank(g, &link.x1, &link.x2) != k {
                return Err(LinkViolation::Rank);
            }
            if !same_neighbourhood(g, &link.x1, t) {
                return Err(LinkViolation::X1Neighbourhood);
            }
            if !same_neighbourhood(g, &link.x2, s) {
                return Err(LinkViolation::X2Neighbourhood);
            }
        }
    }
    Ok(())
}

/// Largest graph accepted by [`disentangle`].
pub const DISENTANGLE_CAP: usize = 20;

/// One twin removal performed during disentangling. Labels are those of the
/// input graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinStep {
    pub removed: usize,
    pub twin: usize,
    pub adjacent: bool,
    /// Whether local complementations were needed (otherwise a plain deletion).
    pub complemented: bool,
    pub kappa_before: usize,
    pub kappa_after: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisentangleStage {
    /// No pair of neighbourhood classes has enough local connectivity.
    ClassPairs,
    /// A promising class pair exists but the independent subsets are too small.
    Refinement,
}

impl fmt::Display for DisentangleStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DisentangleStage::ClassPairs => "class-pairs",
            DisentangleStage::Refinement => "refinement",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Disentangled {
    Found { graph: OrderedGraph, trace: OperationTrace, link: KLink, log: Vec<TwinStep> },
    NotFound { stage: DisentangleStage, log: Vec<TwinStep> },
}

/// Greedy subset of `cands` whose rows restricted to `cols` are independent.
fn greedy_independent(g: &OrderedGraph, cands: &[usize], cols: &[usize], limit: usize) -> Vec<usize> {
    let mask = mask_of(g.n(), cols);
    let mut basis = Gf2Basis::new();
    let mut out = Vec::new();
    for &c in cands {
        if out.len() == limit {
            break;
        }
        let v: Vec<u64> = g.row(c).iter().zip(&mask).map(|(a, b)| a & b).collect();
        if basis.insert(&v) {
            out.push(c);
        }
    }
    out
}

/// Runs twin elimination, matroid intersection and neighbourhood-class
/// refinement to find a `k`-link for `(S,T)` in a graph locally equivalent to
/// `g` that agrees with `g` on `S ∪ T`.
pub fn disentangle(g: &OrderedGraph, s: &[usize], t: &[usize], k: usize) -> Result<Disentangled> {
    local_connectivity(g, s, t)?;
    if g.n() > DISENTANGLE_CAP {
        return Err(Error::CapExceeded { what: "disentangle vertex count", limit: DISENTANGLE_CAP, actual: g.n() });
    }
    let st: Vec<usize> = [s, t].concat();
    let found = |trace: OperationTrace, link: KLink, log: Vec<TwinStep>| -> Result<Disentangled> {
        let graph = apply_trace(g, &trace)?;
        debug_assert!(graph.subgraph(&st)? == g.subgraph(&st)?);
        debug_assert_eq!(verify_k_link(&graph, s, t, &link), Ok(()));
        Ok(Disentangled::Found { graph, trace, link, log })
    };
    let equal_link = |cur: &OrderedGraph, s: &[usize], t: &[usize]| -> Result<Vec<usize>> {
        let m1 = cut_matroid(cur, s)?.delete(t);
        let m2 = cut_matroid(cur, t)?.delete(s);
        Ok(max_common_independent(&m1, &m2)?.0)
    };
    let direct = equal_link(g, s, t)?;
    if direct.len() >= k {
        let x = direct[..k].to_vec();
        return found(OperationTrace::new(), KLink { x1: x.clone(), x2: x, mode: LinkMode::Equal }, Vec::new());
    }

    // Twin elimination on a shrinking working copy.
    let mut cur = g.clone();
    let mut labels: Vec<usize> = (0..g.n()).collect();
    let (mut cs, mut ct) = (s.to_vec(), t.to_vec());
    let mut trace = OperationTrace::new();
    let mut log = Vec::new();
    let kappa_of = |h: &OrderedGraph, a: &[usize], b: &[usize]| -> Result<usize> {
        if a.is_empty() || b.is_empty() {
            Ok(0)
        } else {
            kappa(h, a, b, KappaMethod::Enumerate)
        }
    };
    while let Some((u, v)) = find_twins(&cur, &cs, &ct) {
        let before = kappa_of(&cur, &cs, &ct)?;
        let adjacent = cur.has_edge(u, v);
        let shift = |xs: &[usize]| -> Vec<usize> { xs.iter().map(|&x| if x > v { x - 1 } else { x }).collect() };
        let (ns, nt) = (shift(&cs), shift(&ct));
        let (plain, _) = cur.delete_vertex(v)?;
        let (next, steps) = if kappa_of(&plain, &ns, &nt)? == before {
            (plain, Vec::new())
        } else if adjacent {
            let (h, _) = cur.pivot(u, v)?.delete_vertex(v)?;
            (h, vec![Step::Lc(labels[u]), Step::Lc(labels[v]), Step::Lc(labels[u])])
        } else {
            let (h, _) = cur.local_complement(v)?.local_complement(u)?.delete_vertex(v)?;
            (h, vec![Step::Lc(labels[v]), Step::Lc(labels[u])])
        };
        let after = kappa_of(&next, &ns, &nt)?;
        if after != before {
            return Err(Error::precondition("twin removal changed the connectivity"));
        }
        let complemented = !steps.is_empty();
        for st in steps {
            trace.push(st);
        }
        log.push(TwinStep { removed: labels[v], twin: labels[u], adjacent, complemented, kappa_before: before, kappa_after: after });
        labels.remove(v);
        cur = next;
        cs = ns;
        ct = nt;
    }
    let to_orig = |xs: &[usize]| -> Vec<usize> { xs.iter().map(|&x| labels[x]).collect() };

    let m1 = cut_matroid(&cur, &cs)?.delete(&ct);
    let m2 = cut_matroid(&cur, &ct)?.delete(&cs);
    let (common, cert) = max_common_independent(&m1, &m2)?;
    if common.len() >= k {
        let x = to_orig(&common[..k]);
        return found(trace, KLink { x1: x.clone(), x2: x, mode: LinkMode::Equal }, log);
    }

    // Group P by neighbourhood in S and Q by neighbourhood in T.
    let classes = |part: &[usize], side: &[usize]| -> Vec<Vec<usize>> {
        let mut out: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for &x in part {
            let nb = cur.neighbours_in(x, side);
            match out.iter_mut().find(|(key, _)| *key == nb) {
                Some((_, members)) => members.push(x),
                None => out.push((nb, vec![x])),
            }
        }
        out.into_iter().map(|(_, m)| m).collect()
    };
    let p_classes = classes(&cert.p, &cs);
    let q_classes = classes(&cert.q, &ct);
    let rank_sp = submatrix_rank(&cur, &cert.p, &cs);
    let rank_tq = submatrix_rank(&cur, &cert.q, &ct);
    assert!(p_classes.len() <= 1 << rank_sp && q_classes.len() <= 1 << rank_tq);

    let mut promising = false;
    for qi in &q_classes {
        for pj in &p_classes {
            if submatrix_rank(&cur, qi, pj) < k {
                continue;
            }
            promising = true;
            let y1 = greedy_independent(&cur, qi, pj, usize::MAX);
            let y2 = greedy_independent(&cur, pj, &y1, usize::MAX);
            let y1s = greedy_independent(&cur, &y1, &cs, usize::MAX);
            if y1s.len() < k {
                continue;
            }
            let y2s = greedy_independent(&cur, &y2, &y1s, usize::MAX);
            let x2 = greedy_independent(&cur, &y2s, &ct, k);
            if x2.len() < k {
                continue;
            }
            let x1 = greedy_independent(&cur, &y1s, &x2, k);
            if x1.len() < k {
                continue;
            }
            let link = KLink { x1, x2, mode: LinkMode::Disjoint };
            if verify_k_link(&cur, &cs, &ct, &link).is_err() {
                continue;
            }
            let link = KLink { x1: to_orig(&link.x1), x2: to_orig(&link.x2), mode: LinkMode::Disjoint };
            return found(trace, link, log);
        }
    }
    let stage = if promising { DisentangleStage::Refinement } else { DisentangleStage::ClassPairs };
    Ok(Disentangled::NotFound { stage, log })
}

/// The first pair `u < v` of vertices outside `S ∪ T` with equal
/// neighbourhoods in `S ∪ T`.
fn find_twins(g: &OrderedGraph, s: &[usize], t: &[usize]) -> Option<(usize, usize)> {
    let st: Vec<usize> = [s, t].concat();
    let free = complement_of(g.n(), &st);
    let nbs: Vec<Vec<usize>> = free.iter().map(|&x| g.neighbours_in(x, &st)).collect();
    for i in 0..free.len() {
        for j in i + 1..free.len() {
            if nbs[i] == nbs[j] {
                return Some((free[i], free[j]));
            }
        }
    }
    None
}
