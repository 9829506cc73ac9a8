//! Vertex-minor and pivot-minor containment by exhaustive branching.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::iso::is_isomorphic;
use crate::trace::{OperationTrace, Step};
use crate::{Error, OrderedGraph, Result};

/// Largest host graph accepted by the containment searches.
pub const SEARCH_CAP: usize = 9;
/// Default limit on the size of an enumerated equivalence class.
pub const CLASS_CAP: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Moves {
    Lc,
    Pivot,
}

/// Breadth-first closure of `g` under LC (or pivots). Each entry stores its
/// parent index and the move that produced it.
fn closure(g: &OrderedGraph, moves: Moves, cap: usize) -> Result<Vec<(OrderedGraph, usize, Option<Step>)>> {
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    seen.insert(g.adjacency_key());
    let mut out = vec![(g.clone(), usize::MAX, None)];
    let mut head = 0;
    while head < out.len() {
        let cur = out[head].0.clone();
        let mut push = |h: OrderedGraph, step: Step, out: &mut Vec<_>| -> Result<()> {
            if seen.insert(h.adjacency_key()) {
                if out.len() >= cap {
                    return Err(Error::CapExceeded { what: "equivalence class size", limit: cap, actual: out.len() + 1 });
                }
                out.push((h, head, Some(step)));
            }
            Ok(())
        };
        match moves {
            Moves::Lc => {
                for v in 0..cur.n() {
                    push(cur.local_complement(v)?, Step::Lc(v), &mut out)?;
                }
            }
            Moves::Pivot => {
                for (u, v) in cur.edges() {
                    push(cur.pivot(u, v)?, Step::Pivot(u, v), &mut out)?;
                }
            }
        }
        head += 1;
    }
    Ok(out)
}

/// All graphs reachable from `g` by local complementations.
pub fn local_equivalence_class(g: &OrderedGraph, cap: usize) -> Result<Vec<OrderedGraph>> {
    Ok(closure(g, Moves::Lc, cap)?.into_iter().map(|(h, _, _)| h).collect())
}

/// The smallest adjacency key over the local equivalence class.
pub fn canonical_form(g: &OrderedGraph) -> Result<Vec<u64>> {
    class_key(g, Moves::Lc)
}

fn class_key(g: &OrderedGraph, moves: Moves) -> Result<Vec<u64>> {
    Ok(closure(g, moves, CLASS_CAP)?
        .iter()
        .map(|(h, _, _)| h.adjacency_key())
        .min()
        .expect("class contains g"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotPartner {
    SmallestNeighbour,
    LargestNeighbour,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub memo: bool,
    pub partner: PivotPartner,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { memo: true, partner: PivotPartner::SmallestNeighbour }
    }
}

struct Searcher<'a> {
    h: &'a OrderedGraph,
    moves: Moves,
    opts: SearchOptions,
    failed: BTreeMap<Vec<u64>, ()>,
}

impl Searcher<'_> {
    fn leaf(&self, g: &OrderedGraph, labels: &[usize]) -> Result<Option<Vec<Step>>> {
        let class = closure(g, self.moves, CLASS_CAP)?;
        for (idx, (cand, _, _)) in class.iter().enumerate() {
            if is_isomorphic(cand, self.h)?.is_none() {
                continue;
            }
            let mut steps = Vec::new();
            let mut at = idx;
            while let Some(step) = &class[at].2 {
                steps.push(step.clone());
                at = class[at].1;
            }
            steps.reverse();
            let relabelled = OperationTrace::from_steps(steps).relabel(labels);
            return Ok(Some(relabelled.steps));
        }
        Ok(None)
    }

    fn run(&mut self, g: &OrderedGraph, labels: &[usize]) -> Result<Option<Vec<Step>>> {
        if g.n() == self.h.n() {
            return self.leaf(g, labels);
        }
        let key = if self.opts.memo {
            let k = class_key(g, self.moves)?;
            if self.failed.contains_key(&k) {
                return Ok(None);
            }
            Some(k)
        } else {
            None
        };
        for v in 0..g.n() {
            let nb = g.neighbours(v);
            let w = match self.opts.partner {
                PivotPartner::SmallestNeighbour => nb.first().copied(),
                PivotPartner::LargestNeighbour => nb.last().copied(),
            };
            let mut branches: Vec<(OrderedGraph, Vec<Step>)> = vec![(g.clone(), vec![])];
            if self.moves == Moves::Lc && !nb.is_empty() {
                branches.push((g.local_complement(v)?, vec![Step::Lc(labels[v])]));
            }
            if let Some(w) = w {
                branches.push((g.pivot(v, w)?, vec![Step::Pivot(labels[v], labels[w])]));
            }
            for (b, mut steps) in branches {
                let (next, _) = b.delete_vertex(v)?;
                let mut rest_labels = labels.to_vec();
                rest_labels.remove(v);
                if let Some(rest) = self.run(&next, &rest_labels)? {
                    steps.push(Step::Delete(labels[v]));
                    steps.extend(rest);
                    return Ok(Some(steps));
                }
            }
        }
        if let Some(k) = key {
            self.failed.insert(k, ());
        }
        Ok(None)
    }
}

fn contains(g: &OrderedGraph, h: &OrderedGraph, moves: Moves, opts: SearchOptions) -> Result<Option<OperationTrace>> {
    if g.n() > SEARCH_CAP {
        return Err(Error::CapExceeded { what: "search host vertex count", limit: SEARCH_CAP, actual: g.n() });
    }
    if h.n() > g.n() {
        return Ok(None);
    }
    let mut s = Searcher { h, moves, opts, failed: BTreeMap::new() };
    let labels: Vec<usize> = (0..g.n()).collect();
    Ok(s.run(g, &labels)?.map(OperationTrace::from_steps))
}

/// A trace turning `g` into a graph isomorphic to `h`, if `h` is a
/// vertex-minor of `g`.
pub fn is_vertex_minor(g: &OrderedGraph, h: &OrderedGraph) -> Result<Option<OperationTrace>> {
    contains(g, h, Moves::Lc, SearchOptions::default())
}

pub fn is_vertex_minor_with(g: &OrderedGraph, h: &OrderedGraph, opts: SearchOptions) -> Result<Option<OperationTrace>> {
    contains(g, h, Moves::Lc, opts)
}

/// As [`is_vertex_minor`] but the trace uses only pivots and deletions.
pub fn is_pivot_minor(g: &OrderedGraph, h: &OrderedGraph) -> Result<Option<OperationTrace>> {
    contains(g, h, Moves::Pivot, SearchOptions::default())
}

pub fn is_pivot_minor_with(g: &OrderedGraph, h: &OrderedGraph, opts: SearchOptions) -> Result<Option<OperationTrace>> {
    contains(g, h, Moves::Pivot, opts)
}
