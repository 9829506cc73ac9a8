//! Recognising comparability grids among up-coupled families of sets.

use alloc::format;
use alloc::vec::Vec;

use super::coupling::{fits, CouplingKind};
use crate::circle::comparability_grid;
use crate::{Error, OrderedGraph, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMode {
    /// `n` cliques of size `n`, pairwise up-coupled.
    Pure,
    /// `n²` sets of size `n²`, pairwise up-coupled or co-down-coupled.
    Mixed,
}

fn clause(detail: impl core::fmt::Display) -> Error {
    Error::precondition(format!("grid: {detail}"))
}

fn isqrt(s: usize) -> Option<usize> {
    (0..=s).find(|r| r * r >= s).filter(|r| r * r == s)
}

/// Map from grid vertex `(i−1)n + (j−1)` to a vertex of `g`; the induced
/// subgraph on the image equals `comparability_grid(n)` exactly.
pub fn grid_from_cliques(g: &OrderedGraph, parts: &[Vec<usize>], mode: GridMode) -> Result<Vec<usize>> {
    for p in parts {
        g.check_set(p)?;
    }
    let (n, map) = match mode {
        GridMode::Pure => {
            let n = parts.len();
            for (i, p) in parts.iter().enumerate() {
                if p.len() != n {
                    return Err(clause(format!("part {i} has {} vertices, expected {n}", p.len())));
                }
                if !g.is_clique(p) {
                    return Err(clause(format!("part {i} is not a clique")));
                }
            }
            check_pairs(g, parts, &[CouplingKind::UpHalf])?;
            (n, parts.iter().flatten().copied().collect::<Vec<_>>())
        }
        GridMode::Mixed => {
            let s = parts.len();
            let n = isqrt(s).ok_or_else(|| clause(format!("{s} parts is not a square")))?;
            if let Some((i, p)) = parts.iter().enumerate().find(|(_, p)| p.len() != s) {
                return Err(clause(format!("part {i} has {} vertices, expected {s}", p.len())));
            }
            check_pairs(g, parts, &[CouplingKind::UpHalf, CouplingKind::CoDownHalf])?;
            let map = (1..=n)
                .flat_map(|i| (1..=n).map(move |j| (i, j)))
                .map(|(i, j)| parts[(i - 1) * n + j - 1][(j - 1) * n + i - 1])
                .collect();
            (n, map)
        }
    };
    let mut sorted = map.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(clause("parts overlap"));
    }
    if g.subgraph(&map)? != comparability_grid(n) {
        return Err(clause("selected vertices do not induce the comparability grid"));
    }
    Ok(map)
}

fn check_pairs(g: &OrderedGraph, parts: &[Vec<usize>], allowed: &[CouplingKind]) -> Result<()> {
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            if !allowed.iter().any(|&k| fits(g, &parts[i], &parts[j], k)) {
                return Err(clause(format!("pair ({i},{j}) is not of an allowed kind")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{mixed_grid_parts, pure_grid_parts};

    #[test]
    fn single_vertex() {
        let g = OrderedGraph::new(1);
        assert_eq!(grid_from_cliques(&g, &[alloc::vec![0]], GridMode::Pure).unwrap(), [0]);
        assert_eq!(grid_from_cliques(&g, &[alloc::vec![0]], GridMode::Mixed).unwrap(), [0]);
    }

    #[test]
    fn pure_fixtures() {
        for n in 1..=4 {
            let (g, parts) = pure_grid_parts(n);
            let map = grid_from_cliques(&g, &parts, GridMode::Pure).unwrap();
            assert_eq!(g.subgraph(&map).unwrap(), comparability_grid(n));
        }
    }

    #[test]
    fn mixed_fixtures() {
        for kinds in [
            &[CouplingKind::UpHalf][..],
            &[CouplingKind::UpHalf, CouplingKind::CoDownHalf],
            &[CouplingKind::CoDownHalf, CouplingKind::UpHalf, CouplingKind::UpHalf],
        ] {
            let (g, parts) = mixed_grid_parts(2, kinds);
            let map = grid_from_cliques(&g, &parts, GridMode::Mixed).unwrap();
            assert_eq!(g.subgraph(&map).unwrap(), comparability_grid(2));
        }
        let (g, parts) = mixed_grid_parts(3, &[CouplingKind::CoDownHalf, CouplingKind::UpHalf]);
        assert!(grid_from_cliques(&g, &parts, GridMode::Mixed).is_ok());
    }

    #[test]
    fn violations_are_named() {
        let (mut g, parts) = pure_grid_parts(3);
        g.set_edge(parts[0][0], parts[0][1], false);
        assert!(format!("{}", grid_from_cliques(&g, &parts, GridMode::Pure).unwrap_err()).contains("clique"));
        let (g, parts) = mixed_grid_parts(2, &[CouplingKind::DownHalf]);
        assert!(grid_from_cliques(&g, &parts, GridMode::Mixed).is_err());
        assert!(grid_from_cliques(&g, &parts[..3], GridMode::Mixed).is_err());
    }
}
