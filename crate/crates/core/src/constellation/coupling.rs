//! Coupled pairs of ordered vertex sets and brute-force coupling finders.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, OrderedGraph, Result};

/// The bipartite pattern between two equally sized ordered sets.
///
/// With `X = (x_1..x_k)`, `Y = (y_1..y_k)`, `x_i ~ y_j` holds iff:
/// `i = j` (matching), `j ≥ i` (up), `j ≤ i` (down), or the negations for
/// the complemented kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CouplingKind {
    CoupledMatching,
    CoMatching,
    UpHalf,
    CoUpHalf,
    DownHalf,
    CoDownHalf,
    Complete,
    Anticomplete,
    None,
}

impl CouplingKind {
    /// Classification order; the first fitting kind wins.
    pub const ALL: [CouplingKind; 8] = [
        CouplingKind::CoupledMatching,
        CouplingKind::CoMatching,
        CouplingKind::UpHalf,
        CouplingKind::CoUpHalf,
        CouplingKind::DownHalf,
        CouplingKind::CoDownHalf,
        CouplingKind::Complete,
        CouplingKind::Anticomplete,
    ];

    pub const COUPLED: [CouplingKind; 6] = [
        CouplingKind::CoupledMatching,
        CouplingKind::CoMatching,
        CouplingKind::UpHalf,
        CouplingKind::CoUpHalf,
        CouplingKind::DownHalf,
        CouplingKind::CoDownHalf,
    ];

    /// Kinds allowed on a pattern-graph edge of a constellation.
    pub const CONSTELLATION_EDGE: [CouplingKind; 5] = [
        CouplingKind::CoupledMatching,
        CouplingKind::UpHalf,
        CouplingKind::CoUpHalf,
        CouplingKind::DownHalf,
        CouplingKind::CoDownHalf,
    ];

    /// Expected adjacency of `x_i` and `y_j` (0-based).
    pub fn adjacent(self, i: usize, j: usize) -> Option<bool> {
        Some(match self {
            CouplingKind::CoupledMatching => i == j,
            CouplingKind::CoMatching => i != j,
            CouplingKind::UpHalf => j >= i,
            CouplingKind::CoUpHalf => j < i,
            CouplingKind::DownHalf => j <= i,
            CouplingKind::CoDownHalf => j > i,
            CouplingKind::Complete => true,
            CouplingKind::Anticomplete => false,
            CouplingKind::None => return Option::None,
        })
    }

    /// The kind of `(Y, X)` when `(X, Y)` has kind `self`.
    pub fn transpose(self) -> CouplingKind {
        match self {
            CouplingKind::UpHalf => CouplingKind::DownHalf,
            CouplingKind::DownHalf => CouplingKind::UpHalf,
            CouplingKind::CoUpHalf => CouplingKind::CoDownHalf,
            CouplingKind::CoDownHalf => CouplingKind::CoUpHalf,
            other => other,
        }
    }

    pub fn is_coupled(self) -> bool {
        CouplingKind::COUPLED.contains(&self)
    }

    pub fn is_homogeneous(self) -> bool {
        matches!(self, CouplingKind::Complete | CouplingKind::Anticomplete)
    }

    pub fn is_half(self) -> bool {
        matches!(
            self,
            CouplingKind::UpHalf | CouplingKind::CoUpHalf | CouplingKind::DownHalf | CouplingKind::CoDownHalf
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            CouplingKind::CoupledMatching => "matching",
            CouplingKind::CoMatching => "co-matching",
            CouplingKind::UpHalf => "up",
            CouplingKind::CoUpHalf => "co-up",
            CouplingKind::DownHalf => "down",
            CouplingKind::CoDownHalf => "co-down",
            CouplingKind::Complete => "complete",
            CouplingKind::Anticomplete => "anticomplete",
            CouplingKind::None => "none",
        }
    }

    pub fn from_name(s: &str) -> Option<CouplingKind> {
        CouplingKind::ALL.into_iter().chain([CouplingKind::None]).find(|k| k.name() == s)
    }
}

impl fmt::Display for CouplingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn check_pair(g: &OrderedGraph, x: &[usize], y: &[usize]) -> Result<()> {
    g.check_set(x)?;
    g.check_set(y)?;
    if x.len() != y.len() {
        return Err(Error::SizeMismatch { expected: x.len(), actual: y.len() });
    }
    if let Some(&v) = x.iter().find(|v| y.contains(v)) {
        return Err(Error::Overlap(v));
    }
    Ok(())
}

/// Whether `(X, Y)`, in the given orders, has exactly the pattern of `kind`.
pub fn fits(g: &OrderedGraph, x: &[usize], y: &[usize], kind: CouplingKind) -> bool {
    x.len() == y.len()
        && x.iter().enumerate().all(|(i, &a)| {
            y.iter().enumerate().all(|(j, &b)| kind.adjacent(i, j) == Some(g.has_edge(a, b)))
        })
}

/// Exact classification of `(X, Y)` in the given orders.
pub fn classify_coupling(g: &OrderedGraph, x: &[usize], y: &[usize]) -> Result<CouplingKind> {
    check_pair(g, x, y)?;
    Ok(CouplingKind::ALL.into_iter().find(|&k| fits(g, x, y, k)).unwrap_or(CouplingKind::None))
}

/// `φ_{X→Y}(X')`: the elements of `Y` at the positions `X'` occupies in `X`.
pub fn phi(x: &[usize], y: &[usize], sub: &[usize]) -> Result<Vec<usize>> {
    if x.len() != y.len() {
        return Err(Error::SizeMismatch { expected: x.len(), actual: y.len() });
    }
    sub.iter()
        .map(|s| {
            x.iter()
                .position(|v| v == s)
                .map(|p| y[p])
                .ok_or_else(|| Error::precondition(alloc::format!("{s} is not in the source set")))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinderMode {
    /// Subsets of both sides, `Y'` may be reordered.
    ReorderY,
    /// `Y' = φ_{X→Y}(X')`; the pair is coupled or homogeneous.
    OrderPreserving,
    /// Any subsets forming a homogeneous pair.
    HomogeneousOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoupledWitness {
    pub x: Vec<usize>,
    /// In the order that realises `kind`.
    pub y: Vec<usize>,
    pub kind: CouplingKind,
    /// Whether `y` differs from its sorted order.
    pub reordered: bool,
}

pub const FINDER_SET_CAP: usize = 12;
pub const FINDER_K_CAP: usize = 5;

/// All increasing `k`-subsets of `0..n`.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Exhaustive search for `k`-element subsets of `X` and `Y` that are coupled
/// (or homogeneous, depending on `mode`). `None` is exact.
pub fn find_coupled_subsets(
    g: &OrderedGraph,
    x: &[usize],
    y: &[usize],
    k: usize,
    mode: FinderMode,
) -> Result<Option<CoupledWitness>> {
    g.check_set(x)?;
    g.check_set(y)?;
    if let Some(&v) = x.iter().find(|v| y.contains(v)) {
        return Err(Error::Overlap(v));
    }
    let big = x.len().max(y.len());
    if big > FINDER_SET_CAP {
        return Err(Error::CapExceeded { what: "finder set size", limit: FINDER_SET_CAP, actual: big });
    }
    if k > FINDER_K_CAP {
        return Err(Error::CapExceeded { what: "finder k", limit: FINDER_K_CAP, actual: k });
    }
    if k > x.len() || k > y.len() {
        return Ok(None);
    }
    let pick = |set: &[usize], idx: &[usize]| -> Vec<usize> { idx.iter().map(|&i| set[i]).collect() };
    match mode {
        FinderMode::OrderPreserving => {
            if x.len() != y.len() {
                return Err(Error::SizeMismatch { expected: x.len(), actual: y.len() });
            }
            for idx in combinations(x.len(), k) {
                let (xs, ys) = (pick(x, &idx), pick(y, &idx));
                let kind = classify_coupling(g, &xs, &ys)?;
                if kind != CouplingKind::None {
                    return Ok(Some(CoupledWitness { x: xs, y: ys, kind, reordered: false }));
                }
            }
            Ok(None)
        }
        FinderMode::HomogeneousOnly => {
            for idx in combinations(x.len(), k) {
                let xs = pick(x, &idx);
                for kind in [CouplingKind::Complete, CouplingKind::Anticomplete] {
                    let want = kind == CouplingKind::Complete;
                    let ys: Vec<usize> =
                        y.iter().copied().filter(|&b| xs.iter().all(|&a| g.has_edge(a, b) == want)).take(k).collect();
                    if ys.len() == k {
                        return Ok(Some(CoupledWitness { x: xs, y: ys, kind, reordered: false }));
                    }
                }
            }
            Ok(None)
        }
        FinderMode::ReorderY => {
            for idx in combinations(x.len(), k) {
                let xs = pick(x, &idx);
                for kind in CouplingKind::COUPLED {
                    // Column j of the pattern must be realised by a distinct y.
                    let mut used = vec![false; y.len()];
                    let mut ys = Vec::with_capacity(k);
                    for j in 0..k {
                        let found = (0..y.len()).find(|&c| {
                            !used[c] && (0..k).all(|i| kind.adjacent(i, j) == Some(g.has_edge(xs[i], y[c])))
                        });
                        match found {
                            Some(c) => {
                                used[c] = true;
                                ys.push(y[c]);
                            }
                            None => break,
                        }
                    }
                    if ys.len() == k {
                        debug_assert!(fits(g, &xs, &ys, kind));
                        let reordered = ys.windows(2).any(|w| w[0] > w[1]);
                        return Ok(Some(CoupledWitness { x: xs, y: ys, kind, reordered }));
                    }
                }
            }
            Ok(None)
        }
    }
}
