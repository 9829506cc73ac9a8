//! Realising a prescribed graph on a vertex sequence `Z` by local
//! complementations inside path-like components hanging off `Z`, and the
//! matching and star extractions built on it.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::coupling::CouplingKind;
use super::structure::Constellation;
use super::work::Work;
use crate::trace::{replay, OperationTrace, Step};
use crate::{Error, OrderedGraph, Result};

/// One component per pair: `((i, j), A_ij)` with `0 ≤ i < j < |Z|`.
pub type Components = Vec<((usize, usize), Vec<usize>)>;

fn hypothesis(clause: &str, detail: impl core::fmt::Display) -> Error {
    Error::precondition(format!("{clause}: {detail}"))
}

fn check_hypothesis(g: &OrderedGraph, z: &[usize], comps: &Components, h: &OrderedGraph) -> Result<()> {
    let n = z.len();
    g.check_set(z)?;
    if h.n() != n {
        return Err(hypothesis("target", format!("target has {} vertices but |Z| = {n}", h.n())));
    }
    let mut owner = vec![usize::MAX; g.n()];
    for &x in z {
        owner[x] = usize::MAX - 1;
    }
    let mut seen_pairs = vec![false; n * n];
    for (ci, &((i, j), ref a)) in comps.iter().enumerate() {
        if i >= j || j >= n {
            return Err(hypothesis("pairs", format!("({i},{j}) is not a pair i < j < {n}")));
        }
        if core::mem::replace(&mut seen_pairs[i * n + j], true) {
            return Err(hypothesis("pairs", format!("pair ({i},{j}) listed twice")));
        }
        if a.is_empty() {
            return Err(hypothesis("components", format!("A({i},{j}) is empty")));
        }
        g.check_set(a)?;
        for &x in a {
            if owner[x] != usize::MAX {
                return Err(hypothesis("components", format!("vertex {x} of A({i},{j}) is in Z or another component")));
            }
            owner[x] = ci;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if !seen_pairs[i * n + j] {
                return Err(hypothesis("pairs", format!("no component for pair ({i},{j})")));
            }
        }
    }
    for (ci, &((i, j), ref a)) in comps.iter().enumerate() {
        if !g.is_connected_on(a) {
            return Err(hypothesis("components", format!("A({i},{j}) is not connected")));
        }
        for &x in a {
            for y in g.neighbours(x) {
                match owner[y] {
                    o if o == ci => {}
                    o if o == usize::MAX - 1 => {
                        let t = z.iter().position(|&q| q == y).unwrap();
                        if t < i || t > j {
                            return Err(hypothesis("span", format!("A({i},{j}) has neighbour z_{t} outside z_{i}..z_{j}")));
                        }
                    }
                    _ => return Err(hypothesis("components", format!("A({i},{j}) is not a component of G - Z"))),
                }
            }
        }
        for t in [i, j] {
            if g.neighbours_in(z[t], a).is_empty() {
                return Err(hypothesis("ends", format!("z_{t} has no neighbour in A({i},{j})")));
            }
        }
    }
    Ok(())
}

/// Shortest path inside `a` from `N(zi) ∩ a` to `N(zj) ∩ a`, trimmed so that
/// `zi` sees only its first vertex and `zj` only its last.
fn induced_path(g: &OrderedGraph, a: &[usize], zi: usize, zj: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; g.n()];
    let mut inside = vec![false; g.n()];
    for &x in a {
        inside[x] = true;
    }
    let mut queue = VecDeque::new();
    for &x in a {
        if g.has_edge(zi, x) {
            parent[x] = x;
            queue.push_back(x);
        }
    }
    let mut end = None;
    while let Some(x) = queue.pop_front() {
        if g.has_edge(zj, x) {
            end = Some(x);
            break;
        }
        for y in g.neighbours(x) {
            if inside[y] && parent[y] == usize::MAX {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut path = vec![end.expect("A is connected and meets both neighbourhoods")];
    while let Some(&x) = path.last() {
        if parent[x] == x {
            break;
        }
        path.push(parent[x]);
    }
    path.reverse();
    let from = path.iter().rposition(|&x| g.has_edge(zi, x)).unwrap();
    path.drain(..from);
    let to = path.iter().position(|&x| g.has_edge(zj, x)).unwrap();
    path.truncate(to + 1);
    path
}

/// LC steps making `G[Z]` equal to `target` (vertex `t` of `target` is
/// `z[t]`), followed by a keep of `Z`.
pub fn fix_pairs(g: &OrderedGraph, z: &[usize], comps: &Components, target: &OrderedGraph) -> Result<OperationTrace> {
    check_hypothesis(g, z, comps, target)?;
    let n = z.len();
    let mut cur = g.clone();
    let mut trace = OperationTrace::new();
    let agrees = |cur: &OrderedGraph, i: usize, j: usize| cur.has_edge(z[i], z[j]) == target.has_edge(i, j);
    let fixed = |cur: &OrderedGraph, i: usize, j: usize| (0..=i).all(|a| (j..n).all(|b| a == b || agrees(cur, a, b)));
    let comp = |i: usize, j: usize| &comps.iter().find(|(p, _)| *p == (i, j)).unwrap().1;
    let mut rounds = 0;
    loop {
        let next = (0..n).find_map(|i| (i + 1..n).rev().find(|&j| !fixed(&cur, i, j)).map(|j| (i, j)));
        let Some((i, j)) = next else { break };
        rounds += 1;
        assert!(rounds <= n * n, "fixing did not terminate");
        for v in induced_path(&cur, comp(i, j), z[i], z[j]) {
            cur.local_complement_mut(v)?;
            trace.push(Step::Lc(v));
        }
        assert!(agrees(&cur, i, j), "LC chain did not toggle z_{i} z_{j}");
        for a in 0..=i {
            for b in a + 1..n {
                if a < i || b > j {
                    assert!(fixed(&cur, a, b), "fixing ({i},{j}) unfixed ({a},{b})");
                }
            }
        }
    }
    let mut keep = z.to_vec();
    keep.sort_unstable();
    trace.push(Step::Keep(keep));
    debug_assert!(replay(g, &trace).and_then(|r| r.induced_on(z)).is_ok_and(|h| h == *target));
    Ok(trace)
}

/// Lexicographic index of the pair `(i, j)`.
fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn shape_error(detail: impl core::fmt::Display) -> Error {
    Error::precondition(format!("shape: {detail}"))
}

fn require_valid(g: &OrderedGraph, c: &Constellation) -> Result<()> {
    match c.validate(g).first() {
        None => Ok(()),
        Some(v) => Err(shape_error(format!("not a constellation ({v})"))),
    }
}

/// Hubs of `K` in path order, starting at the end with the smaller label.
pub(crate) fn path_order(c: &Constellation) -> Option<Vec<usize>> {
    let n = c.n();
    if c.k_edges.len() + 1 != n {
        return None;
    }
    let deg = |h: usize| c.k_edges.iter().filter(|&&(a, b)| a == h || b == h).count();
    if n == 1 {
        return Some(c.k_vertices.clone());
    }
    let start = c.k_vertices.iter().copied().filter(|&h| deg(h) == 1).min()?;
    let mut order = vec![start];
    while order.len() < n {
        let last = *order.last().unwrap();
        let next = c.k_vertices.iter().copied().find(|&h| !order.contains(&h) && c.has_k_edge(last, h))?;
        order.push(next);
    }
    Some(order)
}

fn is_clique(c: &Constellation) -> bool {
    let n = c.n();
    c.k_edges.len() == n * (n - 1) / 2
        && c.k_vertices.iter().enumerate().all(|(i, &a)| c.k_vertices[i + 1..].iter().all(|&b| c.has_k_edge(a, b)))
}

/// Realise `target` on the hubs of a matching-coupled constellation whose
/// pattern graph is a path or a clique. Target vertex `t` is the `t`-th hub
/// in path order (clique: in the order of `k_vertices`).
pub fn extract_matching(g: &OrderedGraph, c: &Constellation, target: &OrderedGraph) -> Result<(OperationTrace, Vec<usize>)> {
    require_valid(g, c)?;
    let n = c.n();
    if target.n() != n {
        return Err(shape_error(format!("target has {} vertices, K has {n}", target.n())));
    }
    let (z, on_path) = if is_clique(c) && n > 2 {
        (c.k_vertices.clone(), false)
    } else {
        (path_order(c).ok_or_else(|| shape_error("K is neither a path nor a clique"))?, true)
    };
    let ps = pairs(n);
    if c.k() < ps.len() {
        return Err(shape_error(format!("k = {} is below C(n,2) = {}", c.k(), ps.len())));
    }
    for &(a, b) in &c.k_edges {
        if c.kind(g, a, b)? != CouplingKind::CoupledMatching {
            return Err(shape_error(format!("pair {a}-{b} is not a coupled matching")));
        }
    }
    let comps: Components = ps
        .iter()
        .enumerate()
        .map(|(l, &(i, j))| {
            let hubs: Vec<usize> = if on_path { z[i..=j].to_vec() } else { vec![z[i], z[j]] };
            ((i, j), hubs.iter().map(|&h| c.w(h).unwrap()[l]).collect())
        })
        .collect();
    let mut w = Work::new(g);
    let mut keep: Vec<usize> = z.clone();
    keep.extend(comps.iter().flat_map(|(_, a)| a.iter().copied()));
    w.keep(&keep)?;
    let local_z = w.positions(&z)?;
    let local_comps: Components =
        comps.iter().map(|(p, a)| Ok((*p, w.positions(a)?))).collect::<Result<_>>()?;
    let t = fix_pairs(&w.g, &local_z, &local_comps, target)?;
    w.extend_local(&t)?;
    Ok((w.trace, z))
}

/// Realise `target` (on `n` vertices) from a star constellation with
/// `C(n,2)` leaves and leaf sets of size at least `n + 2`. Returns the
/// trace and `Z`, the hub leaves realising the target in order.
pub fn extract_star(g: &OrderedGraph, c: &Constellation, target: &OrderedGraph) -> Result<(OperationTrace, Vec<usize>)> {
    require_valid(g, c)?;
    let n = target.n();
    let ps = pairs(n);
    if c.n() != ps.len() + 1 {
        return Err(shape_error(format!("K has {} vertices, expected C({n},2)+1 = {}", c.n(), ps.len() + 1)));
    }
    let centre = c
        .k_vertices
        .iter()
        .copied()
        .find(|&h| c.k_edges.iter().filter(|&&(a, b)| a == h || b == h).count() + 1 == c.n())
        .filter(|_| c.k_edges.len() + 1 == c.n())
        .ok_or_else(|| shape_error("K is not a star"))?;
    if c.k() < n + 2 {
        return Err(shape_error(format!("k = {} is below n + 2 = {}", c.k(), n + 2)));
    }
    let c = c.restrict_positions(&(0..n + 2).collect::<Vec<_>>())?;
    let wz = c.w(centre).unwrap().to_vec();
    let z = wz[1..=n].to_vec();
    let mut leaves: Vec<usize> = c.k_vertices.iter().copied().filter(|&h| h != centre).collect();
    leaves.sort_unstable();

    let mut w = Work::new(g);
    w.keep(&c.vertex_set())?;
    let mut comps: Components = Vec::new();
    for (&(i0, j0), &v) in ps.iter().zip(&leaves) {
        // Positions in (z_0, .., z_{n+1}).
        let (i, j) = (i0 + 1, j0 + 1);
        let x = c.w(v).unwrap();
        let kind = c.kind(g, v, centre)?;
        let seen = |w: &Work, a: usize| -> Vec<usize> { (0..n + 2).filter(|&p| w.has_edge(a, wz[p])).collect() };
        let find = |w: &Work, want: Vec<usize>| -> Result<usize> {
            x.iter()
                .copied()
                .find(|&a| seen(w, a) == want)
                .ok_or_else(|| shape_error(format!("no leaf of {v} has the expected neighbourhood")))
        };
        let a = match kind {
            CouplingKind::CoupledMatching => vec![x[i], v, x[j]],
            CouplingKind::DownHalf | CouplingKind::CoUpHalf => {
                let pivot_on = find(&w, (0..i).collect())?;
                let keep = find(&w, (0..=j).collect())?;
                w.pivot(v, pivot_on)?;
                vec![keep]
            }
            CouplingKind::UpHalf | CouplingKind::CoDownHalf => {
                let pivot_on = find(&w, (j + 1..n + 2).collect())?;
                let keep = find(&w, (i..n + 2).collect())?;
                w.pivot(v, pivot_on)?;
                vec![keep]
            }
            other => return Err(shape_error(format!("leaf pair carries {other}"))),
        };
        comps.push(((i0, j0), a));
    }
    let mut keep = z.clone();
    keep.extend(comps.iter().flat_map(|(_, a)| a.iter().copied()));
    w.keep(&keep)?;
    let local_z = w.positions(&z)?;
    let local_comps: Components =
        comps.iter().map(|(p, a)| Ok((*p, w.positions(a)?))).collect::<Result<_>>()?;
    let t = fix_pairs(&w.g, &local_z, &local_comps, target)?;
    w.extend_local(&t)?;
    Ok((w.trace, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{constellation_fixture, matching_fixture, random_graph, rng, with_noise, Shape};

    fn replays_to(g: &OrderedGraph, t: &OperationTrace, z: &[usize], h: &OrderedGraph) -> bool {
        replay(g, t).unwrap().induced_on(z).unwrap() == *h
    }

    /// Hub vertices `0..n` followed by one path per pair, attached to its
    /// ends and to random vertices strictly between them.
    fn comb(n: usize, seed: u64) -> (OrderedGraph, Vec<usize>, Components) {
        let mut r = rng(seed);
        let ps = pairs(n);
        let lens: Vec<usize> = ps.iter().map(|_| 1 + rand::Rng::gen_range(&mut r, 0..3)).collect();
        let total = n + lens.iter().sum::<usize>();
        let mut g = OrderedGraph::new(total);
        let mut next = n;
        let mut comps = Vec::new();
        for (&(i, j), &len) in ps.iter().zip(&lens) {
            let a: Vec<usize> = (next..next + len).collect();
            next += len;
            for w in a.windows(2) {
                g.set_edge(w[0], w[1], true);
            }
            g.set_edge(i, a[0], true);
            g.set_edge(j, *a.last().unwrap(), true);
            for t in i..=j {
                for &x in &a {
                    if rand::Rng::gen_bool(&mut r, 0.3) {
                        g.set_edge(t, x, true);
                    }
                }
            }
            comps.push(((i, j), a));
        }
        for u in 0..n {
            for v in u + 1..n {
                g.set_edge(u, v, rand::Rng::gen_bool(&mut r, 0.5));
            }
        }
        (g, (0..n).collect(), comps)
    }

    #[test]
    fn already_fixed_is_a_single_keep() {
        let (g, z, comps) = comb(3, 1);
        let h = g.subgraph(&z).unwrap();
        let t = fix_pairs(&g, &z, &comps, &h).unwrap();
        assert_eq!(t.steps, [Step::Keep(z)]);
    }

    #[test]
    fn single_pair_toggles_the_edge() {
        let g = OrderedGraph::from_edges(5, &[(0, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        let comps = vec![((0, 1), vec![2, 3, 4])];
        let t = fix_pairs(&g, &[0, 1], &comps, &OrderedGraph::complete(2)).unwrap();
        assert_eq!(t.len(), 4);
        assert!(replays_to(&g, &t, &[0, 1], &OrderedGraph::complete(2)));
    }

    #[test]
    fn random_targets_on_combs() {
        for seed in 0..20 {
            let (g, z, comps) = comb(4, seed);
            let h = random_graph(4, 0.5, &mut rng(seed + 100));
            let t = fix_pairs(&g, &z, &comps, &h).unwrap();
            assert!(matches!(t.steps.last(), Some(Step::Keep(_))));
            assert!(replays_to(&g, &t, &z, &h));
        }
    }

    #[test]
    fn hypothesis_violations_are_named() {
        let (mut g, z, comps) = comb(3, 4);
        let (i, j) = comps[0].0;
        g.set_edge(comps[0].1[0], comps[1].1[0], true);
        let e = fix_pairs(&g, &z, &comps, &OrderedGraph::new(3)).unwrap_err();
        assert!(format!("{e}").contains("components"), "{e} for ({i},{j})");
        let (g, z, comps) = comb(3, 4);
        let e = fix_pairs(&g, &z, &comps[1..].to_vec(), &OrderedGraph::new(3)).unwrap_err();
        assert!(format!("{e}").contains("pairs"));
        // Component of (0,1) touching z_2.
        let (mut g, z, comps) = comb(3, 4);
        g.set_edge(2, comps[0].1[0], true);
        assert!(format!("{}", fix_pairs(&g, &z, &comps, &OrderedGraph::new(3)).unwrap_err()).contains("span"));
    }

    #[test]
    fn matching_extraction_examples() {
        let (g, c) = matching_fixture(2, Shape::Path).unwrap();
        for h in [OrderedGraph::complete(2), OrderedGraph::new(2)] {
            let (t, z) = extract_matching(&g, &c, &h).unwrap();
            assert!(replays_to(&g, &t, &z, &h));
        }
        let (g, c) = matching_fixture(3, Shape::Path).unwrap();
        let (t, z) = extract_matching(&g, &c, &OrderedGraph::complete(3)).unwrap();
        assert!(replays_to(&g, &t, &z, &OrderedGraph::complete(3)));
        let (g, c) = matching_fixture(3, Shape::Clique).unwrap();
        let (t, z) = extract_matching(&g, &c, &OrderedGraph::path(3)).unwrap();
        assert!(replays_to(&g, &t, &z, &OrderedGraph::path(3)));
    }

    #[test]
    fn matching_extraction_ignores_noise() {
        let (g, c) = matching_fixture(4, Shape::Path).unwrap();
        let g = with_noise(&g, 6, 0.5, &mut rng(9));
        let h = random_graph(4, 0.5, &mut rng(10));
        let (t, z) = extract_matching(&g, &c, &h).unwrap();
        assert!(replays_to(&g, &t, &z, &h));
    }

    #[test]
    fn star_extraction_per_kind() {
        for kind in CouplingKind::CONSTELLATION_EDGE {
            let (g, c) = constellation_fixture(Shape::Star, 2, 0, 4, &[kind]).unwrap();
            for h in [OrderedGraph::complete(2), OrderedGraph::new(2)] {
                let (t, z) = extract_star(&g, &c, &h).unwrap();
                assert!(replays_to(&g, &t, &z, &h), "{kind}");
            }
        }
    }

    #[test]
    fn down_pivot_leaves_one_vertex_seeing_both_ends() {
        // The fixture couples (W_centre, W_leaf), so the leaf side sees the transpose.
        let (g, c) = constellation_fixture(Shape::Star, 2, 0, 4, &[CouplingKind::UpHalf]).unwrap();
        assert_eq!(c.kind(&g, c.hubs[1], c.hubs[0]).unwrap(), CouplingKind::DownHalf);
        let centre = c.hubs[0];
        let z: Vec<usize> = c.w(centre).unwrap()[1..=2].to_vec();
        let (v, x) = (c.hubs[1], c.w(c.hubs[1]).unwrap());
        // x_{i-1} = x_0 for the pair (1, 2); x_j = x_2 is kept.
        let h = g.pivot(v, x[0]).unwrap();
        assert_eq!(h.neighbours_in(x[2], &z), z);
    }

    #[test]
    fn star_extraction_mixed_kinds() {
        let kinds = [CouplingKind::UpHalf, CouplingKind::CoupledMatching, CouplingKind::CoUpHalf];
        let (g, c) = constellation_fixture(Shape::Star, 4, 0, 5, &kinds).unwrap();
        let (t, z) = extract_star(&g, &c, &OrderedGraph::path(3)).unwrap();
        assert!(replays_to(&g, &t, &z, &OrderedGraph::path(3)));
    }

    #[test]
    fn wrong_shapes_are_refused() {
        let (g, c) = constellation_fixture(Shape::Path, 3, 0, 3, &[CouplingKind::UpHalf]).unwrap();
        assert!(extract_matching(&g, &c, &OrderedGraph::new(3)).is_err());
        assert!(extract_star(&g, &c, &OrderedGraph::new(2)).is_err());
    }
}
