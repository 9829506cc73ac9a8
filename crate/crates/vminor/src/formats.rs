//! Text codecs: `.ogr` graphs, `.trc` traces, `.cwd` chord diagrams and
//! `.cst` constellations.
//!
//! Every parser reports 1-based line and column numbers. Lines whose first
//! non-blank character is `#` are comments in all four formats.

use std::fmt::Write as _;

use thiserror::Error;
use vminor_core::circle::ChordDiagram;
use vminor_core::constellation::{Augmentation, Constellation};
use vminor_core::{OperationTrace, OrderedGraph, Step};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, col, msg: msg.into() })
}

/// Non-comment, non-blank lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        })
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn number(line: usize, col: usize, tok: &str) -> Result<usize, ParseError> {
    tok.parse().or_else(|_| err(line, col, format!("expected a non-negative integer, found {tok:?}")))
}

pub fn parse_graph(text: &str) -> Result<OrderedGraph, ParseError> {
    let mut lines = content_lines(text);
    let Some((l0, first)) = lines.next() else {
        return err(1, 1, "missing vertex count");
    };
    let toks = tokens(first);
    if toks.len() != 1 {
        return err(l0, toks.get(1).map_or(1, |t| t.0), "first line must hold only the vertex count");
    }
    let n = number(l0, toks[0].0, toks[0].1)?;
    let mut rows: Vec<Vec<bool>> = Vec::with_capacity(n);
    let mut last = l0;
    for (ln, line) in lines {
        last = ln;
        if rows.len() == n {
            return err(ln, 1, format!("more than {n} adjacency rows"));
        }
        let body = line.trim_start();
        let offset = line.len() - body.len();
        let mut row = Vec::with_capacity(n);
        for (i, c) in body.chars().enumerate() {
            match c {
                '0' => row.push(false),
                '1' => row.push(true),
                _ => return err(ln, offset + i + 1, format!("unexpected character {c:?}")),
            }
        }
        if row.len() != n {
            return err(ln, offset + 1, format!("row has {} entries, expected {n}", row.len()));
        }
        let r = rows.len();
        if row[r] {
            return err(ln, offset + r + 1, "nonzero diagonal entry");
        }
        for (c, prev) in rows.iter().enumerate() {
            if prev[r] != row[c] {
                return err(ln, offset + c + 1, format!("entry ({r},{c}) differs from ({c},{r})"));
            }
        }
        rows.push(row);
    }
    if rows.len() != n {
        return err(last + 1, 1, format!("found {} adjacency rows, expected {n}", rows.len()));
    }
    OrderedGraph::from_matrix(&rows).or_else(|e| err(l0, 1, e.to_string()))
}

pub fn write_graph(g: &OrderedGraph) -> String {
    let mut s = format!("{}\n", g.n());
    for u in 0..g.n() {
        s.extend((0..g.n()).map(|v| if g.has_edge(u, v) { '1' } else { '0' }));
        s.push('\n');
    }
    s
}

pub fn parse_trace(text: &str) -> Result<OperationTrace, ParseError> {
    let mut steps = Vec::new();
    for (ln, line) in content_lines(text) {
        let toks = tokens(line);
        let (c0, op) = toks[0];
        let args: Vec<usize> = toks[1..].iter().map(|&(c, t)| number(ln, c, t)).collect::<Result<_, _>>()?;
        let arity = |want: usize| -> Result<(), ParseError> {
            if args.len() == want {
                Ok(())
            } else {
                err(ln, c0, format!("{op} takes {want} argument(s), found {}", args.len()))
            }
        };
        steps.push(match op {
            "LC" => {
                arity(1)?;
                Step::Lc(args[0])
            }
            "PIV" => {
                arity(2)?;
                Step::Pivot(args[0], args[1])
            }
            "DEL" => {
                arity(1)?;
                Step::Delete(args[0])
            }
            "KEEP" => Step::Keep(args),
            _ => return err(ln, c0, format!("unknown step {op:?}")),
        });
    }
    Ok(OperationTrace::from_steps(steps))
}

pub fn write_trace(t: &OperationTrace) -> String {
    let mut s = String::new();
    for step in &t.steps {
        match step {
            Step::Lc(v) => writeln!(s, "LC {v}"),
            Step::Pivot(u, v) => writeln!(s, "PIV {u} {v}"),
            Step::Delete(v) => writeln!(s, "DEL {v}"),
            Step::Keep(xs) => writeln!(s, "KEEP{}", join_prefixed(xs)),
        }
        .expect("writing to a String");
    }
    s
}

fn join_prefixed(xs: &[usize]) -> String {
    xs.iter().map(|x| format!(" {x}")).collect()
}

pub fn parse_diagram(text: &str) -> Result<ChordDiagram, ParseError> {
    let mut lines = content_lines(text);
    let Some((ln, line)) = lines.next() else {
        return err(1, 1, "empty diagram");
    };
    if let Some((extra, _)) = lines.next() {
        return err(extra, 1, "a diagram is a single line");
    }
    let toks = tokens(line);
    let names: Vec<&str> = toks.iter().map(|t| t.1).collect();
    for &(col, t) in &toks {
        let count = names.iter().filter(|&&x| x == t).count();
        if count != 2 {
            return err(ln, col, format!("chord {t:?} has {count} end(s), expected 2"));
        }
    }
    ChordDiagram::from_tokens(&names).or_else(|e| err(ln, 1, e.to_string()))
}

pub fn write_diagram(d: &ChordDiagram) -> String {
    format!("{}\n", d.tokens().join(" "))
}

/// A parsed `.cst` file: a constellation and, when the file has an
/// augmentation section, the augmentation built on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CstFile {
    pub c: Constellation,
    pub aug: Option<Augmentation>,
}

/// Reads the `.cst` layout:
///
/// ```text
/// n m k
/// H h_1 ... h_{n+m}
/// W h w_1 ... w_k        (one line per hub, in H order)
/// K v_1 ... v_n
/// E a b                  (one line per pattern edge)
/// AUG x y                (optional; then X1 and X2 lines)
/// X1 ...
/// X2 ...
/// ```
pub fn parse_cst(text: &str) -> Result<CstFile, ParseError> {
    let mut lines = content_lines(text).peekable();
    let Some((l0, head)) = lines.next() else {
        return err(1, 1, "missing header \"n m k\"");
    };
    let ht = tokens(head);
    if ht.len() != 3 {
        return err(l0, 1, "header must be \"n m k\"");
    }
    let n = number(l0, ht[0].0, ht[0].1)?;
    let m = number(l0, ht[1].0, ht[1].1)?;
    let k = number(l0, ht[2].0, ht[2].1)?;

    let mut last = l0;
    let mut expect = |tag: &str| -> Result<(usize, Vec<(usize, usize)>), ParseError> {
        let Some((ln, line)) = lines.next() else {
            return err(last + 1, 1, format!("missing {tag} line"));
        };
        last = ln;
        let toks = tokens(line);
        if toks[0].1 != tag {
            return err(ln, toks[0].0, format!("expected {tag}, found {:?}", toks[0].1));
        }
        let vals = toks[1..].iter().map(|&(c, t)| number(ln, c, t).map(|v| (c, v))).collect::<Result<_, _>>()?;
        Ok((ln, vals))
    };
    let values = |v: &[(usize, usize)]| v.iter().map(|x| x.1).collect::<Vec<_>>();

    let (lh, hv) = expect("H")?;
    if hv.len() != n + m {
        return err(lh, 1, format!("H lists {} hubs, header says {}", hv.len(), n + m));
    }
    let hubs = values(&hv);
    let mut leaves = Vec::with_capacity(hubs.len());
    for &h in &hubs {
        let (lw, wv) = expect("W")?;
        let Some((&(hc, hub), rest)) = wv.split_first() else {
            return err(lw, 1, "W line needs a hub");
        };
        if hub != h {
            return err(lw, hc, format!("expected the leaves of hub {h}, found hub {hub}"));
        }
        if rest.len() != k {
            return err(lw, 1, format!("W_{h} has {} vertices, header says {k}", rest.len()));
        }
        leaves.push(values(rest));
    }
    let (lk, kv) = expect("K")?;
    if kv.len() != n {
        return err(lk, 1, format!("K lists {} vertices, header says {n}", kv.len()));
    }
    for &(c, v) in &kv {
        if !hubs.contains(&v) {
            return err(lk, c, format!("{v} is not a hub"));
        }
    }
    let k_vertices = values(&kv);
    let mut k_edges = Vec::new();
    let mut aug_line = None;
    while let Some((ln, line)) = lines.next() {
        let toks = tokens(line);
        match toks[0].1 {
            "E" => {
                if toks.len() != 3 {
                    return err(ln, toks[0].0, "E takes two hubs");
                }
                let a = number(ln, toks[1].0, toks[1].1)?;
                let b = number(ln, toks[2].0, toks[2].1)?;
                for (col, v) in [(toks[1].0, a), (toks[2].0, b)] {
                    if !k_vertices.contains(&v) {
                        return err(ln, col, format!("{v} is not a vertex of K"));
                    }
                }
                k_edges.push((a, b));
            }
            "AUG" => {
                if toks.len() != 3 {
                    return err(ln, toks[0].0, "AUG takes the hubs x and y");
                }
                aug_line = Some((ln, number(ln, toks[1].0, toks[1].1)?, number(ln, toks[2].0, toks[2].1)?));
                break;
            }
            other => return err(ln, toks[0].0, format!("expected E or AUG, found {other:?}")),
        }
    }
    let c = Constellation { hubs, leaves, k_vertices, k_edges };
    let aug = match aug_line {
        None => None,
        Some((la, x, y)) => {
            let mut rest = |tag: &str| -> Result<Vec<usize>, ParseError> {
                match lines.next() {
                    Some((ln, line)) => {
                        let toks = tokens(line);
                        if toks[0].1 != tag {
                            return err(ln, toks[0].0, format!("expected {tag}, found {:?}", toks[0].1));
                        }
                        toks[1..].iter().map(|&(c, t)| number(ln, c, t)).collect()
                    }
                    None => err(la + 1, 1, format!("missing {tag} line")),
                }
            };
            let x1 = rest("X1")?;
            let x2 = rest("X2")?;
            Some(Augmentation { c: c.clone(), x, y, x1, x2 })
        }
    };
    if let Some((ln, _)) = lines.next() {
        return err(ln, 1, "unexpected trailing line");
    }
    Ok(CstFile { c, aug })
}

pub fn write_cst(c: &Constellation, aug: Option<&Augmentation>) -> String {
    let mut s = format!("{} {} {}\n", c.n(), c.m(), c.k());
    writeln!(s, "H{}", join_prefixed(&c.hubs)).unwrap();
    for (h, w) in c.hubs.iter().zip(&c.leaves) {
        writeln!(s, "W {h}{}", join_prefixed(w)).unwrap();
    }
    writeln!(s, "K{}", join_prefixed(&c.k_vertices)).unwrap();
    for (a, b) in &c.k_edges {
        writeln!(s, "E {a} {b}").unwrap();
    }
    if let Some(a) = aug {
        writeln!(s, "AUG {} {}", a.x, a.y).unwrap();
        writeln!(s, "X1{}", join_prefixed(&a.x1)).unwrap();
        writeln!(s, "X2{}", join_prefixed(&a.x2)).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use vminor_core::circle::comparability_grid;
    use vminor_core::gen::{constellation_fixture, grow_fixture, GrowCase, Shape};
    use vminor_core::constellation::CouplingKind;

    #[test]
    fn graph_round_trip_and_comments() {
        let g = comparability_grid(2);
        let text = write_graph(&g);
        assert_eq!(parse_graph(&text).unwrap(), g);
        let commented = format!("# grid\n{}", text.replacen('\n', "\n# rows follow\n", 1));
        assert_eq!(parse_graph(&commented).unwrap(), g);
        assert_eq!(parse_graph("0\n").unwrap().n(), 0);
    }

    #[test]
    fn graph_errors_have_positions() {
        let e = parse_graph("2\n01\n00\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 1));
        let e = parse_graph("2\n0x\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 2));
        let e = parse_graph("2\n10\n").unwrap_err();
        assert!(e.msg.contains("diagonal"));
        let e = parse_graph("3\n010\n101\n").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(parse_graph("").is_err());
    }

    #[test]
    fn trace_round_trip() {
        let t = OperationTrace::from_steps(vec![
            Step::Lc(3),
            Step::Pivot(0, 1),
            Step::Delete(2),
            Step::Keep(vec![0, 4]),
            Step::Keep(vec![]),
        ]);
        assert_eq!(parse_trace(&write_trace(&t)).unwrap(), t);
        let e = parse_trace("LC 1\nPIV 2\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 1));
        let e = parse_trace("LC a\n").unwrap_err();
        assert_eq!((e.line, e.col), (1, 4));
        assert!(parse_trace("SWAP 1 2").is_err());
    }

    #[test]
    fn diagram_round_trip() {
        let d = parse_diagram("a b a b\n").unwrap();
        assert_eq!(parse_diagram(&write_diagram(&d)).unwrap(), d);
        let e = parse_diagram("a b a c\n").unwrap_err();
        assert_eq!(e.col, 3);
        assert!(parse_diagram("a a\nb b\n").is_err());
    }

    #[test]
    fn cst_round_trip() {
        let (_, c) = constellation_fixture(Shape::Path, 3, 1, 2, &[CouplingKind::UpHalf]).unwrap();
        let text = write_cst(&c, None);
        assert_eq!(parse_cst(&text).unwrap(), CstFile { c, aug: None });
        let (_, a) = grow_fixture(GrowCase::Two, 4).unwrap();
        let text = write_cst(&a.c, Some(&a));
        let back = parse_cst(&text).unwrap();
        assert_eq!(back.aug, Some(a));
    }

    #[test]
    fn cst_errors_have_positions() {
        let e = parse_cst("1 0 1\nH 0\nW 0 1 2\nK 0\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_cst("1 0 1\nH 0\nW 0 1\nK 5\n").unwrap_err();
        assert_eq!((e.line, e.col), (4, 3));
        let e = parse_cst("2 0 1\nH 0 2\nW 0 1\nW 2 3\nK 0 2\nE 0 9\n").unwrap_err();
        assert_eq!((e.line, e.col), (6, 5));
        assert!(parse_cst("1 0 1\nH 0\nW 0 1\nK 0\nAUG 0 0\nX1 1\n").is_err());
    }

    proptest::proptest! {
        #[test]
        fn graphs_and_traces_survive_a_round_trip(
            n in 1usize..12,
            bits in proptest::collection::vec(proptest::bool::ANY, 66),
            ops in proptest::collection::vec((0u8..4, 0usize..12, 0usize..12), 0..10),
        ) {
            let mut g = OrderedGraph::new(n);
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    g.set_edge(u, v, bits[i]);
                    i += 1;
                }
            }
            proptest::prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
            let steps = ops
                .into_iter()
                .map(|(kind, a, b)| match kind {
                    0 => Step::Lc(a),
                    1 => Step::Pivot(a, b),
                    2 => Step::Delete(a),
                    _ => Step::Keep((0..=a).collect()),
                })
                .collect();
            let t = OperationTrace::from_steps(steps);
            proptest::prop_assert_eq!(parse_trace(&write_trace(&t)).unwrap(), t);
        }
    }
}
