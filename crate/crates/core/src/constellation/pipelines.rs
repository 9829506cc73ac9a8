//! Grid extraction from clique and path constellations.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::coupling::{classify_coupling, combinations, CouplingKind};
use super::fixing::{extract_matching, path_order};
use super::grid::{grid_from_cliques, GridMode};
use super::structure::Constellation;
use super::work::Work;
use crate::bounds::{binom2, path_chain};
use crate::circle::comparability_grid;
use crate::graph::mask_of;
use crate::trace::{replay, OperationTrace, Step};
use crate::{Error, OrderedGraph, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageReport {
    pub stage: &'static str,
    pub hubs: usize,
    pub k: usize,
    /// Graph size after the stage.
    pub vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineOutput {
    pub n: usize,
    pub trace: OperationTrace,
    /// Grid vertex `(i−1)n + (j−1)` ↦ vertex of the input graph.
    pub grid: Vec<usize>,
    pub case: &'static str,
    pub stages: Vec<StageReport>,
}

impl PipelineOutput {
    /// Replays the trace and compares the image of `grid` with the grid.
    pub fn verify(&self, g: &OrderedGraph) -> Result<bool> {
        Ok(replay(g, &self.trace)?.induced_on(&self.grid)? == comparability_grid(self.n))
    }
}

/// Hub count above which the clique selection refuses to enumerate.
pub const CLIQUE_HUB_CAP: usize = 24;

fn path_constellation(hubs: &[usize], leaves: &[Vec<usize>]) -> Constellation {
    Constellation {
        hubs: hubs.to_vec(),
        leaves: leaves.to_vec(),
        k_vertices: hubs.to_vec(),
        k_edges: hubs.windows(2).map(|w| (w[0], w[1])).collect(),
    }
}

fn clique_constellation(hubs: &[usize], leaves: &[Vec<usize>]) -> Constellation {
    let n = hubs.len();
    Constellation {
        hubs: hubs.to_vec(),
        leaves: leaves.to_vec(),
        k_vertices: hubs.to_vec(),
        k_edges: (0..n).flat_map(|i| (i + 1..n).map(move |j| (hubs[i], hubs[j]))).collect(),
    }
}

fn check_stage(w: &Work, c: &Constellation, stage: &'static str) -> Result<()> {
    match w.validate(c).first() {
        None => Ok(()),
        Some(v) => Err(Error::stage(stage, format!("constellation broken ({v})"))),
    }
}

fn pair_kinds(w: &Work, leaves: &[Vec<usize>]) -> Result<Vec<CouplingKind>> {
    leaves
        .windows(2)
        .map(|p| classify_coupling(&w.g, &w.positions(&p[0])?, &w.positions(&p[1])?))
        .collect()
}

fn report(stage: &'static str, w: &Work, hubs: usize, k: usize) -> StageReport {
    StageReport { stage, hubs, k, vertices: w.g.n() }
}

/// Grid extraction from a constellation whose pattern graph is a path with
/// at least `n²` hubs (after matching pairs are contracted) and leaf sets of
/// size at least `k1` of the path chain.
pub fn path_pipeline(g: &OrderedGraph, c: &Constellation, n: usize) -> Result<PipelineOutput> {
    if n == 0 {
        return Err(Error::precondition("n must be positive"));
    }
    if let Some(v) = c.validate(g).first() {
        return Err(Error::stage("input", format!("not a constellation ({v})")));
    }
    let chain = path_chain(n as u32)?;
    let (m, k1, k2, k3) = (chain.m as usize, chain.k1 as usize, chain.k2 as usize, chain.k3 as usize);
    let mut hubs = path_order(c).ok_or_else(|| Error::stage("input", "K is not a path"))?;
    let mut leaves: Vec<Vec<usize>> = hubs.iter().map(|&h| c.w(h).unwrap().to_vec()).collect();
    let mut stages = Vec::new();
    let mut w = Work::new(g);
    w.keep(&path_constellation(&hubs, &leaves).vertex_set())?;

    // Stage 1: contract coupled matchings, thinning leaf sets to restore
    // cocliques.
    while let Some(t) = pair_kinds(&w, &leaves)?.iter().position(|&k| k == CouplingKind::CoupledMatching) {
        for &v in &leaves[t] {
            w.lc(v)?;
        }
        hubs.remove(t);
        leaves.remove(t);
        let k = leaves[0].len();
        let candidates: [Vec<usize>; 3] =
            [(0..k).collect(), (0..k).step_by(2).collect(), (1..k).step_by(2).collect()];
        let mut chosen = None;
        for pos in candidates {
            let thinned: Vec<Vec<usize>> = leaves.iter().map(|l| pos.iter().map(|&p| l[p]).collect()).collect();
            if !pos.is_empty() && w.validate(&path_constellation(&hubs, &thinned)).is_empty() {
                chosen = Some(thinned);
                break;
            }
        }
        leaves = chosen.ok_or_else(|| Error::stage("matchings", "no aligned thinning restores the constellation"))?;
        w.keep(&path_constellation(&hubs, &leaves).vertex_set())?;
    }
    if hubs.len() < m {
        return Err(Error::stage("matchings", format!("{} hubs remain, need {m}", hubs.len())));
    }
    if leaves[0].len() < k1 {
        return Err(Error::stage("matchings", format!("leaf sets have {} vertices, need {k1}", leaves[0].len())));
    }
    hubs.truncate(m);
    leaves.truncate(m);
    w.keep(&path_constellation(&hubs, &leaves).vertex_set())?;
    check_stage(&w, &path_constellation(&hubs, &leaves), "matchings")?;
    if pair_kinds(&w, &leaves)?.iter().any(|k| !k.is_half()) {
        return Err(Error::stage("matchings", "a consecutive pair is not a half graph"));
    }
    stages.push(report("matchings", &w, m, leaves[0].len()));

    // Stage 2: shift windows so that every pair is up or co-up.
    let kinds = pair_kinds(&w, &leaves)?;
    let mut off = 0;
    for t in 0..m {
        if t > 0 && matches!(kinds[t - 1], CouplingKind::DownHalf | CouplingKind::CoDownHalf) {
            off += 1;
        }
        leaves[t] = leaves[t][off..off + k2].to_vec();
    }
    w.keep(&path_constellation(&hubs, &leaves).vertex_set())?;
    check_stage(&w, &path_constellation(&hubs, &leaves), "shift")?;
    if let Some(k) = pair_kinds(&w, &leaves)?.into_iter().find(|k| !matches!(k, CouplingKind::UpHalf | CouplingKind::CoUpHalf)) {
        return Err(Error::stage("shift", format!("a pair is {k} after shifting")));
    }
    stages.push(report("shift", &w, m, k2));

    // Stage 3: pivot co-up pairs into up pairs.
    for t in 0..m - 1 {
        let kind = classify_coupling(&w.g, &w.positions(&leaves[t])?, &w.positions(&leaves[t + 1])?)?;
        match kind {
            CouplingKind::UpHalf => {}
            CouplingKind::CoUpHalf => {
                let x = leaves[t + 1][0];
                w.pivot(x, hubs[t + 1])?;
                hubs[t + 1] = x;
            }
            other => return Err(Error::stage("pivot", format!("pair {t} is {other}"))),
        }
        for l in leaves.iter_mut() {
            l.remove(0);
        }
    }
    w.keep(&path_constellation(&hubs, &leaves).vertex_set())?;
    check_stage(&w, &path_constellation(&hubs, &leaves), "pivot")?;
    if let Some(k) = pair_kinds(&w, &leaves)?.into_iter().find(|&k| k != CouplingKind::UpHalf) {
        return Err(Error::stage("pivot", format!("a pair is {k} after pivoting")));
    }
    debug_assert_eq!(leaves[0].len(), k3);
    stages.push(report("pivot", &w, m, k3));

    // Stage 4: densify the pattern one hub at a time, halving the sets.
    let mut xs = leaves;
    check_layers(&w, &hubs, &xs, 1)?;
    for s in 2..=m {
        if m * xs[0].len() / 2 <= PARITY_CHECK_CAP {
            check_parity(&w, &hubs, &xs, s)?;
        }
        for &v in &xs[s - 2] {
            w.lc(v)?;
        }
        w.lc(hubs[s - 1])?;
        for x in xs.iter_mut() {
            *x = x.iter().copied().step_by(2).collect();
        }
        let mut keep: Vec<usize> = hubs.clone();
        keep.extend(xs.iter().flatten());
        w.keep(&keep)?;
        check_layers(&w, &hubs, &xs, s)?;
    }
    stages.push(report("densify", &w, m, xs[0].len()));

    let parts: Vec<Vec<usize>> = xs.iter().map(|x| w.positions(x)).collect::<Result<_>>()?;
    let local = grid_from_cliques(&w.g, &parts, GridMode::Mixed).map_err(|e| Error::stage("grid", format!("{e}")))?;
    let grid: Vec<usize> = local.iter().map(|&p| w.labels()[p]).collect();
    w.keep(&grid)?;
    let out = PipelineOutput { n, trace: w.trace, grid, case: "path", stages };
    debug_assert!(out.verify(g).unwrap_or(false));
    Ok(out)
}

/// Largest number of candidate vertices for which the stage-4 parity facts
/// are checked pair by pair.
pub const PARITY_CHECK_CAP: usize = 512;

/// The layered structure after `s` densification rounds: cocliques,
/// up-coupled along the pattern `L_s` and anticomplete elsewhere, with the
/// untouched hubs still private.
fn check_layers(w: &Work, hubs: &[usize], xs: &[Vec<usize>], s: usize) -> Result<()> {
    let m = hubs.len();
    let fail = |detail: alloc::string::String| Error::stage("densify", format!("round {s}: {detail}"));
    let pos: Vec<Vec<usize>> = xs.iter().map(|x| w.positions(x)).collect::<Result<_>>()?;
    let hub_pos = w.positions(hubs)?;
    for (i, x) in pos.iter().enumerate() {
        if !w.g.is_coclique(x) {
            return Err(fail(format!("X_{} is not a coclique", i + 1)));
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            // 1-based: edge iff both ≤ s, or consecutive from s on.
            let edge = j + 1 <= s || (j == i + 1 && i + 1 >= s);
            let want = if edge { CouplingKind::UpHalf } else { CouplingKind::Anticomplete };
            let got = classify_coupling(&w.g, &pos[i], &pos[j])?;
            if got != want && !(want == CouplingKind::UpHalf && pos[i].len() == 1 && got == CouplingKind::CoupledMatching) {
                return Err(fail(format!("pair ({},{}) is {got}, expected {want}", i + 1, j + 1)));
            }
        }
    }
    for i in s..m {
        let u = hub_pos[i];
        for (a, x) in pos.iter().enumerate() {
            let ok = if a == i { w.g.is_complete_to(&[u], x) } else { w.g.is_anticomplete_to(&[u], x) };
            if !ok {
                return Err(fail(format!("hub u_{} is wrong on X_{}", i + 1, a + 1)));
            }
        }
        if hub_pos[i + 1..].iter().any(|&h| w.g.has_edge(u, h)) {
            return Err(fail(format!("hub u_{} sees a later hub", i + 1)));
        }
    }
    Ok(())
}

/// Common-neighbour parities in `X_{s−1} ∪ {u_s}` before round `s`, for
/// vertices at odd (1-based) positions.
fn check_parity(w: &Work, hubs: &[usize], xs: &[Vec<usize>], s: usize) -> Result<()> {
    let g = &w.g;
    let mut l = w.positions(&xs[s - 2])?;
    l.push(w.at(hubs[s - 1])?);
    let mask = mask_of(g.n(), &l);
    let parity = |a: usize, b: usize| {
        g.row(a).iter().zip(g.row(b)).zip(&mask).map(|((x, y), m)| (x & y & m).count_ones()).sum::<u32>() % 2 == 1
    };
    let odd: Vec<Vec<(usize, usize)>> = xs
        .iter()
        .map(|x| x.iter().step_by(2).enumerate().map(|(i, &v)| Ok((2 * i, w.at(v)?))).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    // 0-based layer indices: low = 1..s−2, high = s..m, special = s.
    let (low, high) = (0..s - 2, s - 1..hubs.len());
    let fail = |a: usize, b: usize| Error::stage("densify", format!("round {s}: parity fact fails for layers {} and {}", a + 1, b + 1));
    for a in 0..hubs.len() {
        for b in a..hubs.len() {
            let same_side = (low.contains(&a) && low.contains(&b)) || (high.contains(&a) && high.contains(&b));
            let cross = low.contains(&a) && b == s - 1;
            if !same_side && !cross {
                continue;
            }
            for &(i, x) in &odd[a] {
                for &(j, y) in &odd[b] {
                    if x == y {
                        continue;
                    }
                    let expect = cross && j >= i;
                    if parity(x, y) != expect {
                        return Err(fail(a, b));
                    }
                }
            }
        }
    }
    Ok(())
}

fn allowed(kind: CouplingKind, case: usize) -> bool {
    match case {
        0 => kind == CouplingKind::CoupledMatching,
        1 => matches!(kind, CouplingKind::UpHalf | CouplingKind::CoDownHalf),
        _ => matches!(kind, CouplingKind::DownHalf | CouplingKind::CoUpHalf),
    }
}

/// Grid extraction from a constellation whose pattern graph is a clique:
/// an exhaustive search for `n²` hubs whose pairs are all matchings, or all
/// up/co-down (possibly after reversing the order).
pub fn clique_pipeline(g: &OrderedGraph, c: &Constellation, n: usize) -> Result<PipelineOutput> {
    if n == 0 {
        return Err(Error::precondition("n must be positive"));
    }
    if let Some(v) = c.validate(g).first() {
        return Err(Error::stage("input", format!("not a constellation ({v})")));
    }
    let mut hubs = c.k_vertices.clone();
    hubs.sort_unstable();
    let r = hubs.len();
    if c.k_edges.len() != r * (r - 1) / 2 {
        return Err(Error::stage("input", "K is not a clique"));
    }
    if r > CLIQUE_HUB_CAP {
        return Err(Error::CapExceeded { what: "clique hub count", limit: CLIQUE_HUB_CAP, actual: r });
    }
    let s = n * n;
    let mut kind = vec![vec![CouplingKind::None; r]; r];
    for i in 0..r {
        for j in i + 1..r {
            kind[i][j] = c.kind(g, hubs[i], hubs[j])?;
        }
    }
    let fits_case = |sel: &[usize], case: usize| sel.iter().enumerate().all(|(a, &i)| sel[a + 1..].iter().all(|&j| allowed(kind[i][j], case)));
    let found = (s <= r)
        .then(|| combinations(r, s).into_iter().find_map(|sel| (0..3).find(|&cs| fits_case(&sel, cs)).map(|cs| (sel, cs))))
        .flatten();
    let Some((sel, case)) = found else {
        let best = (1..s.min(r + 1)).rev().find(|&t| combinations(r, t).iter().any(|sel| (0..3).any(|cs| fits_case(sel, cs))));
        return Err(Error::stage(
            "select",
            format!("no {s} hubs with uniform pair kinds; largest uniform selection has {} hubs", best.unwrap_or(0).max(1)),
        ));
    };
    let mut chosen: Vec<usize> = sel.iter().map(|&i| hubs[i]).collect();
    if case == 2 {
        chosen.reverse();
    }
    let stage_name = ["matching", "up", "reversed"][case];
    if case == 0 {
        let need = (binom2(s as u128)? as usize).max(1);
        if c.k() < need {
            return Err(Error::stage("matching", format!("k = {} is below C({s},2) = {need}", c.k())));
        }
        let leaves: Vec<Vec<usize>> = chosen.iter().map(|&h| c.w(h).unwrap()[..need].to_vec()).collect();
        let sub = clique_constellation(&chosen, &leaves);
        if let Some(v) = sub.validate(g).first() {
            return Err(Error::stage("matching", format!("selection is not a constellation ({v})")));
        }
        let (trace, grid) = extract_matching(g, &sub, &comparability_grid(n))?;
        let vertices = replay(g, &trace)?.graph.n();
        let stages = vec![StageReport { stage: stage_name, hubs: s, k: need, vertices }];
        return Ok(PipelineOutput { n, trace, grid, case: stage_name, stages });
    }
    if c.k() < s {
        return Err(Error::stage("up", format!("k = {} is below n² = {s}", c.k())));
    }
    let parts: Vec<Vec<usize>> = chosen.iter().map(|&h| c.w(h).unwrap()[..s].to_vec()).collect();
    let grid = grid_from_cliques(g, &parts, GridMode::Mixed).map_err(|e| Error::stage("grid", format!("{e}")))?;
    let mut keep = grid.clone();
    keep.sort_unstable();
    let trace = OperationTrace::from_steps(vec![Step::Keep(keep)]);
    let stages = vec![StageReport { stage: stage_name, hubs: s, k: s, vertices: s }];
    Ok(PipelineOutput { n, trace, grid, case: stage_name, stages })
}
