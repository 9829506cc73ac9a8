//! A graph being transformed in place while the trace records every step in
//! the labels of the starting graph.

use alloc::vec::Vec;

use super::structure::{Constellation, Violation};
use crate::trace::{OperationTrace, Step};
use crate::{Error, OrderedGraph, Result};

const GONE: usize = usize::MAX;

pub(crate) struct Work {
    pub g: OrderedGraph,
    /// Current position → starting label.
    labels: Vec<usize>,
    /// Starting label → current position, `GONE` once dropped.
    pos: Vec<usize>,
    pub trace: OperationTrace,
}

impl Work {
    pub fn new(g: &OrderedGraph) -> Self {
        Work { g: g.clone(), labels: (0..g.n()).collect(), pos: (0..g.n()).collect(), trace: OperationTrace::new() }
    }

    pub fn at(&self, orig: usize) -> Result<usize> {
        match self.pos.get(orig) {
            Some(&p) if p != GONE => Ok(p),
            _ => Err(Error::VertexOutOfRange { vertex: orig, n: self.labels.len() }),
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        match (self.at(a), self.at(b)) {
            (Ok(x), Ok(y)) => self.g.has_edge(x, y),
            _ => false,
        }
    }

    pub fn lc(&mut self, v: usize) -> Result<()> {
        let p = self.at(v)?;
        self.g.local_complement_mut(p)?;
        self.trace.push(Step::Lc(v));
        Ok(())
    }

    pub fn pivot(&mut self, u: usize, v: usize) -> Result<()> {
        let (a, b) = (self.at(u)?, self.at(v)?);
        self.g.pivot_mut(a, b)?;
        self.trace.push(Step::Pivot(u, v));
        Ok(())
    }

    /// Restrict to the given starting labels.
    pub fn keep(&mut self, origs: &[usize]) -> Result<()> {
        let mut origs = origs.to_vec();
        origs.sort_unstable();
        origs.dedup();
        let positions: Vec<usize> = origs.iter().map(|&o| self.at(o)).collect::<Result<_>>()?;
        let (g, _) = self.g.keep_induced(&positions)?;
        self.g = g;
        self.pos.iter_mut().for_each(|p| *p = GONE);
        for (i, &o) in origs.iter().enumerate() {
            self.pos[o] = i;
        }
        self.labels = origs.clone();
        self.trace.push(Step::Keep(origs));
        Ok(())
    }

    /// Append a trace written in current positions.
    pub fn extend_local(&mut self, local: &OperationTrace) -> Result<()> {
        for step in &local.steps {
            match step {
                Step::Lc(v) => self.lc(self.labels[*v])?,
                Step::Pivot(u, v) => self.pivot(self.labels[*u], self.labels[*v])?,
                Step::Keep(xs) => {
                    let origs: Vec<usize> = xs.iter().map(|&x| self.labels[x]).collect();
                    self.keep(&origs)?
                }
                Step::Delete(v) => {
                    let rest: Vec<usize> = self.labels.iter().copied().filter(|&o| o != self.labels[*v]).collect();
                    self.keep(&rest)?
                }
            }
        }
        Ok(())
    }

    pub fn positions(&self, origs: &[usize]) -> Result<Vec<usize>> {
        origs.iter().map(|&o| self.at(o)).collect()
    }

    /// `c` rewritten in current positions.
    pub fn view(&self, c: &Constellation) -> Result<Constellation> {
        Ok(Constellation {
            hubs: self.positions(&c.hubs)?,
            leaves: c.leaves.iter().map(|w| self.positions(w)).collect::<Result<_>>()?,
            k_vertices: self.positions(&c.k_vertices)?,
            k_edges: c
                .k_edges
                .iter()
                .map(|&(a, b)| Ok((self.at(a)?, self.at(b)?)))
                .collect::<Result<_>>()?,
        })
    }

    pub fn validate(&self, c: &Constellation) -> Vec<Violation> {
        match self.view(c) {
            Ok(v) => v.validate(&self.g),
            Err(e) => alloc::vec![Violation { clause: "0", detail: alloc::format!("{e}") }],
        }
    }
}
