//! Exhaustive isomorphism testing for small graphs.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, OrderedGraph, Result};

/// Largest vertex count accepted by [`is_isomorphic`].
pub const ISO_CAP: usize = 10;

/// Decides whether `g` and `h` are isomorphic as unordered graphs.
///
/// On success returns `p` with `uv ∈ E(g) ⇔ p[u]p[v] ∈ E(h)`. Graphs above
/// [`ISO_CAP`] vertices are refused.
pub fn is_isomorphic(g: &OrderedGraph, h: &OrderedGraph) -> Result<Option<Vec<usize>>> {
    is_isomorphic_capped(g, h, ISO_CAP)
}

pub fn is_isomorphic_capped(
    g: &OrderedGraph,
    h: &OrderedGraph,
    cap: usize,
) -> Result<Option<Vec<usize>>> {
    let n = g.n();
    if n > cap || h.n() > cap {
        return Err(Error::CapExceeded { what: "isomorphism vertex count", limit: cap, actual: n.max(h.n()) });
    }
    if n != h.n() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    if g.degree_sequence() != h.degree_sequence() {
        return Ok(None);
    }
    let sig_g = signatures(g);
    let sig_h = signatures(h);
    let mut sorted_g = sig_g.clone();
    let mut sorted_h = sig_h.clone();
    sorted_g.sort();
    sorted_h.sort();
    if sorted_g != sorted_h {
        return Ok(None);
    }
    // Map high-degree vertices first; they constrain the search most.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sig_g[b].cmp(&sig_g[a]).then(a.cmp(&b)));
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(g, h, &sig_g, &sig_h, &order, 0, &mut map, &mut used) {
        debug_assert!(verify(g, h, &map));
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

/// Degree together with the sorted degrees of the neighbours.
fn signatures(g: &OrderedGraph) -> Vec<(usize, Vec<usize>)> {
    (0..g.n())
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbours(v).iter().map(|&u| g.degree(u)).collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &OrderedGraph,
    h: &OrderedGraph,
    sig_g: &[(usize, Vec<usize>)],
    sig_h: &[(usize, Vec<usize>)],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(depth) else { return true };
    for c in 0..h.n() {
        if used[c] || sig_g[v] != sig_h[c] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&u| g.has_edge(u, v) == h.has_edge(map[u], c));
        if !consistent {
            continue;
        }
        map[v] = c;
        used[c] = true;
        if extend(g, h, sig_g, sig_h, order, depth + 1, map, used) {
            return true;
        }
        used[c] = false;
        map[v] = usize::MAX;
    }
    false
}

/// Checks that `p` is an isomorphism from `g` onto `h`.
pub fn verify(g: &OrderedGraph, h: &OrderedGraph, p: &[usize]) -> bool {
    if g.n() != h.n() || p.len() != g.n() {
        return false;
    }
    let mut hit = vec![false; h.n()];
    for &x in p {
        if x >= h.n() || core::mem::replace(&mut hit[x], true) {
            return false;
        }
    }
    (0..g.n()).all(|u| (u + 1..g.n()).all(|v| g.has_edge(u, v) == h.has_edge(p[u], p[v])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::comparability_grid;

    #[test]
    fn graph_is_isomorphic_to_itself() {
        let g = OrderedGraph::cycle(6);
        let p = is_isomorphic(&g, &g).unwrap().unwrap();
        assert!(verify(&g, &g, &p));
    }

    #[test]
    fn path_and_claw_differ() {
        let p4 = OrderedGraph::path(4);
        let claw = OrderedGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(is_isomorphic(&p4, &claw).unwrap(), None);
    }

    #[test]
    fn cg2_is_k4_minus_an_edge() {
        let mut k4e = OrderedGraph::complete(4);
        k4e.set_edge(0, 1, false);
        let cg2 = comparability_grid(2);
        let p = is_isomorphic(&cg2, &k4e).unwrap().unwrap();
        assert!(verify(&cg2, &k4e, &p));
    }

    #[test]
    fn relabelled_copies_are_found() {
        let g = OrderedGraph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6)])
            .unwrap();
        let perm = [3, 6, 0, 5, 1, 4, 2];
        let mut h = OrderedGraph::new(7);
        for (u, v) in g.edges() {
            h.set_edge(perm[u], perm[v], true);
        }
        let p = is_isomorphic(&g, &h).unwrap().unwrap();
        assert!(verify(&g, &h, &p));
    }

    #[test]
    fn cap_is_enforced() {
        let g = OrderedGraph::new(11);
        assert!(is_isomorphic(&g, &g).unwrap_err().is_cap());
    }
}
