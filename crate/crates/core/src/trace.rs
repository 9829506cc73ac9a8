//! Replayable operation traces.
//!
//! Every step names vertices by their labels in the graph the trace starts
//! from. Deletions shrink the working graph, but later steps keep using the
//! original labels; replay resolves them through the accumulated label map.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, OrderedGraph, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Step {
    Lc(usize),
    Pivot(usize, usize),
    Delete(usize),
    /// Keep exactly these vertices (in the current order) and drop the rest.
    Keep(Vec<usize>),
}

impl Step {
    fn map_labels(&self, f: impl Fn(usize) -> usize) -> Step {
        match self {
            Step::Lc(v) => Step::Lc(f(*v)),
            Step::Pivot(u, v) => Step::Pivot(f(*u), f(*v)),
            Step::Delete(v) => Step::Delete(f(*v)),
            Step::Keep(xs) => Step::Keep(xs.iter().map(|&x| f(x)).collect()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct OperationTrace {
    pub steps: Vec<Step>,
}

/// Result of replaying a trace: the final graph and, for each of its
/// vertices, the label that vertex had in the start graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replayed {
    pub graph: OrderedGraph,
    pub labels: Vec<usize>,
}

impl Replayed {
    /// Position of start-graph label `orig` in the final graph.
    pub fn position(&self, orig: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == orig)
    }

    /// Induced subgraph of the result on the given start-graph labels, in
    /// the given order.
    pub fn induced_on(&self, origs: &[usize]) -> Result<OrderedGraph> {
        let pos: Vec<usize> = origs
            .iter()
            .map(|&o| {
                self.position(o)
                    .ok_or(Error::VertexOutOfRange { vertex: o, n: self.labels.len() })
            })
            .collect::<Result<_>>()?;
        self.graph.subgraph(&pos)
    }
}

impl OperationTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_steps(steps: Vec<Step>) -> Self {
        OperationTrace { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    pub fn extend(&mut self, other: OperationTrace) {
        self.steps.extend(other.steps);
    }

    /// Renames every label `l` to `map[l]`.
    pub fn relabel(&self, map: &[usize]) -> OperationTrace {
        OperationTrace { steps: self.steps.iter().map(|s| s.map_labels(|l| map[l])).collect() }
    }

    pub fn lc_only(&self) -> bool {
        self.steps.iter().all(|s| matches!(s, Step::Lc(_)))
    }

    /// No local complementation steps: the result is a pivot-minor.
    pub fn pivot_minor_only(&self) -> bool {
        self.steps.iter().all(|s| !matches!(s, Step::Lc(_)))
    }

    pub fn count_pivots(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Step::Pivot(..))).count()
    }
}

struct Labels {
    current: Vec<usize>,
    at: Vec<Option<usize>>,
}

impl Labels {
    fn identity(n: usize) -> Self {
        Labels { current: (0..n).collect(), at: (0..n).map(Some).collect() }
    }

    fn resolve(&self, orig: usize) -> Result<usize> {
        self.at
            .get(orig)
            .copied()
            .flatten()
            .ok_or(Error::VertexOutOfRange { vertex: orig, n: self.current.len() })
    }

    fn keep(&mut self, positions: &[usize]) {
        for slot in self.at.iter_mut() {
            *slot = None;
        }
        let current: Vec<usize> = positions.iter().map(|&p| self.current[p]).collect();
        for (i, &o) in current.iter().enumerate() {
            self.at[o] = Some(i);
        }
        self.current = current;
    }
}

fn apply_step(g: &mut OrderedGraph, labels: &mut Labels, step: &Step) -> Result<()> {
    match step {
        Step::Lc(v) => g.local_complement_mut(labels.resolve(*v)?),
        Step::Pivot(u, v) => {
            let (a, b) = (labels.resolve(*u)?, labels.resolve(*v)?);
            g.pivot_mut(a, b).map_err(|_| Error::NotAnEdge { u: *u, v: *v })
        }
        Step::Delete(v) => {
            let p = labels.resolve(*v)?;
            let keep: Vec<usize> = (0..g.n()).filter(|&x| x != p).collect();
            *g = g.subgraph(&keep)?;
            labels.keep(&keep);
            Ok(())
        }
        Step::Keep(xs) => {
            let mut pos = xs.iter().map(|&x| labels.resolve(x)).collect::<Result<Vec<_>>>()?;
            let mut seen = vec![false; g.n()];
            for &p in &pos {
                if core::mem::replace(&mut seen[p], true) {
                    return Err(Error::DuplicateVertex(labels.current[p]));
                }
            }
            pos.sort_unstable();
            *g = g.subgraph(&pos)?;
            labels.keep(&pos);
            Ok(())
        }
    }
}

/// Replays `t` on `g`, keeping track of where each start label ends up.
pub fn replay(g: &OrderedGraph, t: &OperationTrace) -> Result<Replayed> {
    let mut graph = g.clone();
    let mut labels = Labels::identity(g.n());
    for (index, step) in t.steps.iter().enumerate() {
        apply_step(&mut graph, &mut labels, step)
            .map_err(|cause| Error::Step { index, cause: Box::new(cause) })?;
    }
    Ok(Replayed { graph, labels: labels.current })
}

/// Replays `t` on `g` and returns the final graph.
pub fn apply_trace(g: &OrderedGraph, t: &OperationTrace) -> Result<OrderedGraph> {
    replay(g, t).map(|r| r.graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_trace_is_identity() {
        let g = OrderedGraph::cycle(5);
        assert_eq!(apply_trace(&g, &OperationTrace::new()).unwrap(), g);
    }

    #[test]
    fn double_lc_is_identity() {
        let g = OrderedGraph::cycle(5);
        let t = OperationTrace::from_steps(vec![Step::Lc(2), Step::Lc(2)]);
        assert_eq!(apply_trace(&g, &t).unwrap(), g);
    }

    #[test]
    fn labels_survive_deletion() {
        // Deleting 0 then complementing at original label 2 of P5.
        let g = OrderedGraph::path(5);
        let t = OperationTrace::from_steps(vec![Step::Delete(0), Step::Lc(2)]);
        let r = replay(&g, &t).unwrap();
        assert_eq!(r.labels, [1, 2, 3, 4]);
        assert!(r.graph.has_edge(0, 2));
        assert_eq!(r.graph.edge_count(), 4);
    }

    #[test]
    fn keep_uses_current_order() {
        let g = OrderedGraph::path(4);
        let t = OperationTrace::from_steps(vec![Step::Keep(vec![3, 1, 2])]);
        let r = replay(&g, &t).unwrap();
        assert_eq!(r.labels, [1, 2, 3]);
        assert_eq!(r.graph, OrderedGraph::path(3));
    }

    #[test]
    fn failing_step_is_reported_by_index() {
        let g = OrderedGraph::path(3);
        let t = OperationTrace::from_steps(vec![Step::Lc(1), Step::Delete(1), Step::Lc(1)]);
        match replay(&g, &t) {
            Err(Error::Step { index, .. }) => assert_eq!(index, 2),
            other => panic!("unexpected {other:?}"),
        }
        let t = OperationTrace::from_steps(vec![Step::Pivot(0, 2)]);
        assert!(matches!(replay(&g, &t), Err(Error::Step { index: 0, .. })));
    }

    #[test]
    fn relabel_maps_every_step() {
        let t = OperationTrace::from_steps(vec![Step::Pivot(0, 1), Step::Keep(vec![1])]);
        let r = t.relabel(&[5, 7]);
        assert_eq!(r.steps, [Step::Pivot(5, 7), Step::Keep(vec![7])]);
    }
}
