//! Growing a constellation from an augmentation by one pivot, and the
//! best-effort search for augmentations.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use super::coupling::{classify_coupling, combinations};
use super::structure::{Augmentation, Constellation};
use super::work::Work;
use crate::matroid::{disentangle, DisentangleStage, Disentangled};
use crate::trace::OperationTrace;
use crate::{Error, OrderedGraph, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowBranch {
    /// A vertex of `W_y ∪ {y}` sees all but one of `X1`.
    Case1,
    /// No such vertex for `X1`, but one for `X2`.
    Case2,
    /// Neither: the leaves of `y` are locally complemented.
    Claim,
}

impl fmt::Display for GrowBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowBranch::Case1 => "case-1",
            GrowBranch::Case2 => "case-2",
            GrowBranch::Claim => "claim",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Grown {
    Constellation(Constellation),
    Augmentation(Augmentation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowOutput {
    /// Same vertex set as the input graph.
    pub graph: OrderedGraph,
    pub trace: OperationTrace,
    pub branch: GrowBranch,
    pub result: Grown,
}

fn pre(detail: impl fmt::Display) -> Error {
    Error::precondition(format!("grow: {detail}"))
}

/// One growth step. Case 1 returns a constellation with one more pattern
/// hub and leaf sets of size `t−2` (equal sets) or `t−4`; Case 2 returns an
/// equal-sets augmentation with sets of size `t−2`; the remaining branch
/// returns the input augmentation in the modified graph.
pub fn grow_step(g: &OrderedGraph, aug: &Augmentation) -> Result<GrowOutput> {
    if let Some(v) = aug.validate(g).first() {
        return Err(pre(format!("input is not an augmentation ({v})")));
    }
    let c = &aug.c;
    let t = c.k();
    let wy = c.w(aug.y).unwrap();
    let cands: Vec<usize> = core::iter::once(aug.y).chain(wy.iter().copied()).collect();
    let count = |v: usize, z: &[usize]| g.neighbours_in(v, z).len();
    let pick = |z: &[usize]| cands.iter().copied().find(|&v| count(v, z) + 1 >= t);
    let mut w = Work::new(g);

    let (branch, v, z) = match (pick(&aug.x1), pick(&aug.x2)) {
        (Some(v), _) => (GrowBranch::Case1, v, &aug.x1),
        (None, Some(v)) => (GrowBranch::Case2, v, &aug.x2),
        (None, None) => return claim_branch(w, aug),
    };
    let k = match branch {
        GrowBranch::Case1 if aug.equal_sets() => t.checked_sub(2),
        GrowBranch::Case1 => t.checked_sub(4),
        _ => t.checked_sub(2).filter(|_| t >= 4),
    }
    .filter(|&k| k >= 1)
    .ok_or_else(|| pre(format!("t = {t} is too small for {branch}")))?;

    let nz = |w: &Work| -> Vec<usize> { z.iter().copied().filter(|&x| w.has_edge(v, x)).collect() };
    if !w.g.is_coclique(&w.positions(&nz(&w))?) {
        w.lc(v)?;
    }
    let seen = nz(&w);
    debug_assert!(w.g.is_coclique(&w.positions(&seen)?));
    let first = seen[0];
    let rest: Vec<usize> = seen[1..].iter().copied().take(k).collect();
    if rest.len() < k {
        return Err(pre(format!("{} sees only {} vertices of the linked set", v, seen.len())));
    }
    w.pivot(v, first)?;
    let pos: Vec<usize> = rest.iter().map(|r| z.iter().position(|q| q == r).unwrap()).collect();
    let pick_pos = |s: &[usize]| pos.iter().map(|&p| s[p]).collect::<Vec<_>>();

    let mut hubs = Vec::new();
    let mut leaves = Vec::new();
    for (i, &h) in c.hubs.iter().enumerate() {
        if h == aug.y {
            hubs.push(first);
            leaves.push(rest.clone());
        } else {
            hubs.push(h);
            leaves.push(pick_pos(&c.leaves[i]));
        }
    }
    let graph = w.g;
    let trace = w.trace;
    let result = match branch {
        GrowBranch::Case1 => {
            let mut k_vertices = c.k_vertices.clone();
            k_vertices.push(first);
            let mut k_edges = c.k_edges.clone();
            for &x in &c.k_vertices {
                let wx = &leaves[c.hub_index(x).unwrap()];
                if classify_coupling(&graph, &rest, wx)?.is_coupled() {
                    k_edges.push((x, first));
                }
            }
            let c3 = Constellation { hubs, leaves, k_vertices, k_edges };
            if let Some(v) = c3.validate(&graph).first() {
                return Err(Error::stage("case-1", format!("grown constellation is invalid ({v})")));
            }
            Grown::Constellation(c3)
        }
        _ => {
            let x = pick_pos(&aug.x1);
            let c3 = Constellation { hubs, leaves, k_vertices: c.k_vertices.clone(), k_edges: c.k_edges.clone() };
            let a3 = Augmentation { c: c3, x: aug.x, y: first, x1: x.clone(), x2: x };
            if let Some(v) = a3.validate(&graph).first() {
                return Err(Error::stage("case-2", format!("new augmentation is invalid ({v})")));
            }
            Grown::Augmentation(a3)
        }
    };
    Ok(GrowOutput { graph, trace, branch, result })
}

fn claim_branch(mut w: Work, aug: &Augmentation) -> Result<GrowOutput> {
    let c = &aug.c;
    let wy = c.w(aug.y).unwrap().to_vec();
    let g = &w.g;
    if aug.x1.iter().chain(&aug.x2).any(|&z| g.has_edge(aug.y, z)) {
        return Err(pre("claim: y is not anticomplete to X1 ∪ X2"));
    }
    if classify_coupling(g, &wy, &aug.x2)? != super::CouplingKind::CoupledMatching {
        return Err(pre("claim: W_y and X2 are not a coupled matching"));
    }
    if !aug.equal_sets() && !g.is_anticomplete_to(&wy, &aug.x1) {
        return Err(pre("claim: W_y is not anticomplete to X1"));
    }
    for &v in &wy {
        w.lc(v)?;
    }
    debug_assert!(w.g.is_complete_to(&[aug.y], &aug.x2));
    if let Some(v) = aug.validate(&w.g).first() {
        return Err(Error::stage("claim", format!("augmentation is invalid afterwards ({v})")));
    }
    Ok(GrowOutput { graph: w.g, trace: w.trace, branch: GrowBranch::Claim, result: Grown::Augmentation(aug.clone()) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AugmentationStage {
    Disentangle(DisentangleStage),
    /// A link exists but no aligned choice satisfies the weak clauses.
    Coupling,
    /// A weak augmentation exists but none of its restrictions is strong.
    Refinement,
}

impl fmt::Display for AugmentationStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AugmentationStage::Disentangle(s) => write!(f, "disentangle/{s}"),
            AugmentationStage::Coupling => f.write_str("coupling"),
            AugmentationStage::Refinement => f.write_str("refinement"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AugmentationSearch {
    Found { graph: OrderedGraph, trace: OperationTrace, aug: Augmentation },
    No { stage: AugmentationStage },
}

/// Largest weak augmentation size handed to the refinement search.
pub const REFINE_CAP: usize = 16;

/// The first `k`-subset of aligned positions (applied to every leaf set and
/// to both linked sets) giving a strong augmentation.
pub fn refine_augmentation(g: &OrderedGraph, weak: &Augmentation, k: usize) -> Result<Option<Augmentation>> {
    let size = weak.c.k();
    if size > REFINE_CAP {
        return Err(Error::CapExceeded { what: "refinement set size", limit: REFINE_CAP, actual: size });
    }
    if k == 0 || k > size {
        return Ok(None);
    }
    for pos in combinations(size, k) {
        let a = weak.restrict_positions(&pos)?;
        if a.validate(g).is_empty() {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// Best-effort search for a strong augmentation of size `k`: a link between
/// `A(C)` and `B(C)` from disentangling, an aligned search for the weak
/// clauses, then refinement.
pub fn find_augmentation(g: &OrderedGraph, c: &Constellation, k: usize) -> Result<AugmentationSearch> {
    if let Some(v) = c.validate(g).first() {
        return Err(pre(format!("not a constellation ({v})")));
    }
    if k == 0 {
        return Err(pre("k must be positive"));
    }
    let (a, b) = (c.a_set(), c.b_set());
    if b.is_empty() {
        return Err(pre("every hub is in K, so there is no outside hub"));
    }
    let free = g.n() - a.len() - b.len();
    let mut last = DisentangleStage::ClassPairs;
    let mut link = None;
    for t in (k..=free.min(c.k())).rev() {
        match disentangle(g, &a, &b, t)? {
            Disentangled::Found { graph, trace, link: l, .. } => {
                link = Some((graph, trace, l));
                break;
            }
            Disentangled::NotFound { stage, .. } => last = stage,
        }
    }
    let Some((graph, trace, link)) = link else {
        return Ok(AugmentationSearch::No { stage: AugmentationStage::Disentangle(last) });
    };
    let (mut x1, mut x2) = (link.x1.clone(), link.x2.clone());
    x1.sort_unstable();
    x2.sort_unstable();
    let t = x1.len();
    let outside: Vec<usize> = c.hubs.iter().copied().filter(|&h| !c.in_k(h)).collect();
    for size in (k..=t).rev() {
        for cpos in combinations(c.k(), size) {
            let cc = c.restrict_positions(&cpos)?;
            for lpos in combinations(t, size) {
                let y1: Vec<usize> = lpos.iter().map(|&p| x1[p]).collect();
                let y2: Vec<usize> = lpos.iter().map(|&p| x2[p]).collect();
                for &x in &c.k_vertices {
                    for &y in &outside {
                        let weak = Augmentation { c: cc.clone(), x, y, x1: y1.clone(), x2: y2.clone() };
                        if !weak.validate_weak(&graph).is_empty() {
                            continue;
                        }
                        return Ok(match refine_augmentation(&graph, &weak, k)? {
                            Some(aug) => AugmentationSearch::Found { graph, trace, aug },
                            None => AugmentationSearch::No { stage: AugmentationStage::Refinement },
                        });
                    }
                }
            }
        }
    }
    Ok(AugmentationSearch::No { stage: AugmentationStage::Coupling })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::CouplingKind;
    use crate::gen::{couple, grow_fixture, GrowCase};
    use crate::trace::apply_trace;

    #[test]
    fn case_one_grows_k() {
        let (g, a) = grow_fixture(GrowCase::One, 4).unwrap();
        let out = grow_step(&g, &a).unwrap();
        assert_eq!(out.branch, GrowBranch::Case1);
        assert_eq!(apply_trace(&g, &out.trace).unwrap(), out.graph);
        let Grown::Constellation(c) = out.result else { panic!("expected a constellation") };
        assert_eq!((c.n(), c.m(), c.k()), (a.c.n() + 1, a.c.m() - 1, 2));
        assert_eq!(c.validate(&out.graph), []);
    }

    #[test]
    fn case_two_gives_equal_sets() {
        let (g, a) = grow_fixture(GrowCase::Two, 6).unwrap();
        let out = grow_step(&g, &a).unwrap();
        assert_eq!(out.branch, GrowBranch::Case2);
        let Grown::Augmentation(b) = out.result else { panic!("expected an augmentation") };
        assert!(b.equal_sets());
        assert_eq!((b.c.n(), b.c.m(), b.c.k()), (a.c.n(), a.c.m(), 4));
        assert_eq!(b.validate(&out.graph), []);
    }

    #[test]
    fn claim_makes_y_complete_to_x2() {
        let (g, a) = grow_fixture(GrowCase::Claim, 5).unwrap();
        let out = grow_step(&g, &a).unwrap();
        assert_eq!(out.branch, GrowBranch::Claim);
        assert!(out.graph.is_complete_to(&[a.y], &a.x2));
        assert_eq!(out.trace.len(), 5);
    }

    #[test]
    fn invalid_input_is_refused() {
        let (mut g, a) = grow_fixture(GrowCase::One, 4).unwrap();
        g.set_edge(a.x1[0], a.x1[1], true);
        assert!(grow_step(&g, &a).is_err());
    }

    /// Hub `x` (pattern) and `y` (outside), leaf sets of size 2, and two
    /// outside vertices matched to both leaf sets.
    fn linked() -> (OrderedGraph, Constellation) {
        let mut g = OrderedGraph::new(8);
        for (h, w) in [(0, [1, 2]), (3, [4, 5])] {
            for x in w {
                g.set_edge(h, x, true);
            }
        }
        couple(&mut g, &[1, 2], &[6, 7], CouplingKind::CoupledMatching);
        couple(&mut g, &[4, 5], &[6, 7], CouplingKind::CoupledMatching);
        let c = Constellation { hubs: alloc::vec![0, 3], leaves: alloc::vec![alloc::vec![1, 2], alloc::vec![4, 5]], k_vertices: alloc::vec![0], k_edges: alloc::vec![] };
        (g, c)
    }

    #[test]
    fn visible_link_gives_an_augmentation() {
        let (g, c) = linked();
        assert_eq!(c.validate(&g), []);
        match find_augmentation(&g, &c, 2).unwrap() {
            AugmentationSearch::Found { graph, trace, aug } => {
                assert_eq!(apply_trace(&g, &trace).unwrap(), graph);
                assert_eq!(aug.validate(&graph), []);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn anticomplete_sides_stop_at_disentangle() {
        let (mut g, c) = linked();
        for z in [6, 7] {
            for x in [4, 5] {
                g.set_edge(x, z, false);
            }
        }
        let r = find_augmentation(&g, &c, 1).unwrap();
        assert!(matches!(r, AugmentationSearch::No { stage: AugmentationStage::Disentangle(_) }), "{r:?}");
    }

    #[test]
    fn refinement_drops_bad_positions() {
        let (mut g, a) = grow_fixture(GrowCase::One, 4).unwrap();
        // A leaf of the other pattern hub now sees one linked vertex.
        g.set_edge(a.c.leaves[0][0], a.x1[0], true);
        assert_eq!(a.validate_weak(&g), []);
        assert!(!a.validate(&g).is_empty());
        let r = refine_augmentation(&g, &a, 3).unwrap().unwrap();
        assert_eq!(r.validate(&g), []);
        assert!(!r.x1.contains(&a.x1[0]));
    }
}
