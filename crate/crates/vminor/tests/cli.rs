use std::path::{Path, PathBuf};
use std::process::Command;

use vminor::formats::{parse_cst, parse_diagram, parse_graph, parse_trace};
use vminor_core::circle::comparability_grid;
use vminor_core::trace::replay;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Out {
    fn result(&self) -> &str {
        self.stdout.lines().last().unwrap_or("")
    }
}

fn vminor(args: &[&str]) -> Out {
    let o = Command::new(env!("CARGO_BIN_EXE_vminor")).args(args).output().unwrap();
    Out {
        code: o.status.code().unwrap(),
        stdout: String::from_utf8(o.stdout).unwrap(),
        stderr: String::from_utf8(o.stderr).unwrap(),
    }
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("vminor-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Everything before the summary line.
fn body(o: &Out) -> String {
    let mut lines: Vec<&str> = o.stdout.lines().collect();
    lines.pop();
    lines.iter().map(|l| format!("{l}\n")).collect()
}

#[test]
fn bounds_g_of_two() {
    let o = vminor(&["bounds", "g", "2"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.lines().next(), Some("7"));
    assert_eq!(o.result(), "RESULT bounds ok value=7");
    let o = vminor(&["bounds", "chain", "2"]);
    assert!(o.stdout.contains("k1=38"), "{}", o.stdout);
    assert_eq!(vminor(&["bounds", "nope", "1"]).code, 2);
}

#[test]
fn gen_grid_and_perm() {
    let o = vminor(&["gen", "grid", "3"]);
    assert_eq!(o.code, 0);
    let g = parse_graph(&body(&o)).unwrap();
    assert_eq!((g.n(), g.edge_count()), (9, 27));
    assert_eq!(g, comparability_grid(3));
    let o = vminor(&["gen", "perm", "2,3,1"]);
    assert_eq!(parse_graph(&body(&o)).unwrap().edge_count(), 2);
    assert_eq!(vminor(&["gen", "perm", "2,2,1"]).code, 2);
}

#[test]
fn rank_prints_an_integer() {
    let d = scratch("rank");
    let g = d.join("g.ogr");
    vminor(&["gen", "grid", "2", "--out", s(&g)]);
    let o = vminor(&["rank", s(&g), "--set", "0,1"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.lines().next().unwrap().parse::<usize>().is_ok());
    let o = vminor(&["lconn", s(&g), "--s", "0", "--t", "3"]);
    assert_eq!(o.result(), "RESULT lconn ok sqcap=1");
    let o = vminor(&["kappa", s(&g), "--s", "0", "--t", "3", "--extract", s(&d.join("k.trc")), "--verify"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let t = parse_trace(&std::fs::read_to_string(d.join("k.trc")).unwrap()).unwrap();
    assert!(t.pivot_minor_only());
}

#[test]
fn rankwidth_witness() {
    let d = scratch("rw");
    let g = d.join("g.ogr");
    vminor(&["gen", "grid", "2", "--out", s(&g)]);
    let o = vminor(&["rankwidth", s(&g), "--witness", "--verify"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("nodes 6"));
    assert!(o.result().starts_with("RESULT rankwidth ok width=1"));
}

#[test]
fn circle_togrid_two_chords() {
    let d = scratch("circle");
    let cwd = d.join("d.cwd");
    std::fs::write(&cwd, "a b a b\n").unwrap();
    let o = vminor(&["circle", "togrid", s(&cwd), "--verify", "--trace", s(&d.join("t.trc"))]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.result().contains("verified=true"));
    let ig = vminor(&["circle", "ig", s(&cwd)]);
    assert_eq!(parse_graph(&body(&ig)).unwrap().edge_count(), 1);
    let flip = vminor(&["circle", "flip", s(&cwd), "--chord", "a", "--verify"]);
    assert_eq!(flip.code, 0);
    parse_diagram(&body(&flip)).unwrap();
    let perm = vminor(&["circle", "toperm", s(&cwd), "--verify"]);
    assert_eq!(perm.code, 0);
}

#[test]
fn gen_cst_star_validates() {
    let d = scratch("star");
    let p = d.join("s");
    let o = vminor(&["gen", "cst", "--shape", "star", "--n", "3", "--out", s(&p)]);
    assert_eq!(o.code, 0);
    let v = vminor(&["cst", "validate", s(&p.with_extension("ogr")), s(&p.with_extension("cst"))]);
    assert_eq!(v.code, 0, "{}", v.stdout);
    assert_eq!(v.result(), "RESULT cst-validate ok kind=constellation violations=0");
}

#[test]
fn generated_files_round_trip() {
    let d = scratch("roundtrip");
    let cases: [&[&str]; 7] = [
        &["--shape", "star", "--n", "2"],
        &["--shape", "path", "--n", "2"],
        &["--shape", "clique", "--n", "2"],
        &["--shape", "matching", "--n", "3", "--pattern", "clique"],
        &["--shape", "grow", "--case", "one"],
        &["--shape", "grow", "--case", "two", "--t", "6"],
        &["--shape", "grow", "--case", "claim", "--t", "5"],
    ];
    for (i, extra) in cases.iter().enumerate() {
        let p = d.join(format!("c{i}"));
        let mut args = vec!["gen", "cst", "--out", s(&p)];
        args.extend_from_slice(extra);
        assert_eq!(vminor(&args).code, 0, "{extra:?}");
        let text = std::fs::read_to_string(p.with_extension("cst")).unwrap();
        let f = parse_cst(&text).unwrap();
        assert_eq!(vminor::formats::write_cst(&f.c, f.aug.as_ref()), text);
        let gtext = std::fs::read_to_string(p.with_extension("ogr")).unwrap();
        assert_eq!(vminor::formats::write_graph(&parse_graph(&gtext).unwrap()), gtext);
        let v = vminor(&["cst", "validate", s(&p.with_extension("ogr")), s(&p.with_extension("cst"))]);
        assert_eq!(v.code, 0, "{extra:?}: {}", v.stdout);
    }
    for kind in [vec!["graph", "--n", "7", "--p", "0.3"], vec!["diagram", "--n", "5"]] {
        let mut args = vec!["gen"];
        args.extend(kind.iter().copied());
        let o = vminor(&args);
        if kind[0] == "graph" {
            parse_graph(&body(&o)).unwrap();
        } else {
            parse_diagram(&body(&o)).unwrap();
        }
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["gen", "graph", "--n", "9", "--seed", "42"][..],
        &["gen", "diagram", "--n", "6", "--seed", "7"],
        &["gen", "cst", "--shape", "star", "--n", "3", "--seed", "5"],
        &["gen", "cst", "--shape", "clique", "--n", "2", "--seed", "1"],
    ] {
        assert_eq!(vminor(args).stdout, vminor(args).stdout);
    }
    let a = vminor(&["gen", "graph", "--n", "9", "--seed", "1"]).stdout;
    let b = vminor(&["gen", "graph", "--n", "9", "--seed", "2"]).stdout;
    assert_ne!(a, b);
}

#[test]
fn containment_and_exit_codes() {
    let d = scratch("vm");
    let k3 = d.join("k3.ogr");
    let e3 = d.join("e3.ogr");
    let c4 = d.join("c4.ogr");
    std::fs::write(&k3, "3\n011\n101\n110\n").unwrap();
    std::fs::write(&e3, "3\n000\n000\n000\n").unwrap();
    std::fs::write(&c4, "4\n0101\n1010\n0101\n1010\n").unwrap();
    let p3 = d.join("p3.ogr");
    std::fs::write(&p3, "3\n010\n101\n010\n").unwrap();
    let yes = vminor(&["vm", "contains", s(&c4), s(&p3), "--trace", s(&d.join("t.trc")), "--verify"]);
    assert_eq!(yes.code, 0, "{}", yes.stderr);
    let no = vminor(&["vm", "contains", s(&k3), s(&e3)]);
    assert_eq!((no.code, no.result()), (1, "RESULT vm-contains no"));
    let pm = vminor(&["pm", "contains", s(&c4), s(&p3)]);
    assert_eq!(pm.code, 0);
    let lec = vminor(&["lec", "size", s(&k3)]);
    assert_eq!(lec.stdout.lines().next(), Some("4"));
    assert_eq!(vminor(&["lec", "size", s(&c4), "--cap", "2"]).code, 3);

    let big = d.join("big.ogr");
    vminor(&["gen", "grid", "4", "--out", s(&big)]);
    let cap = vminor(&["vm", "contains", s(&big), s(&p3)]);
    assert_eq!((cap.code, cap.result()), (3, "RESULT vm-contains cap"));
    assert_eq!(vminor(&["rankwidth", s(&big), "--cap", "3"]).code, 3);
    assert_eq!(vminor(&["rankwidth", s(&big), "--cap", "99"]).code, 2);
    assert_eq!(vminor(&["frobnicate"]).code, 2);
}

#[test]
fn parse_errors_carry_positions() {
    let d = scratch("errors");
    let g = d.join("bad.ogr");
    std::fs::write(&g, "2\n01\n1x\n").unwrap();
    let o = vminor(&["rank", s(&g), "--set", "0"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 3, column 2"), "{}", o.stderr);
    assert_eq!(o.result(), "RESULT rank error");
    let o = vminor(&["rank", s(&d.join("missing.ogr")), "--set", "0"]);
    assert_eq!(o.code, 2);
}

#[test]
fn cst_grow_restrict_and_extract() {
    let d = scratch("cst");
    let p = d.join("a");
    vminor(&["gen", "cst", "--shape", "grow", "--case", "two", "--t", "6", "--out", s(&p)]);
    let out = d.join("b");
    let o = vminor(&[
        "cst",
        "grow",
        s(&p.with_extension("ogr")),
        s(&p.with_extension("cst")),
        "--out",
        s(&out),
        "--verify",
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.result().contains("branch=case-2"), "{}", o.result());
    assert!(o.result().contains("k=4"));
    let v = vminor(&["cst", "validate", s(&out.with_extension("ogr")), s(&out.with_extension("cst"))]);
    assert_eq!(v.code, 0, "{}", v.stdout);

    let q = d.join("path");
    vminor(&["gen", "cst", "--shape", "path", "--n", "2", "--seed", "3", "--out", s(&q)]);
    let (qg, qc) = (q.with_extension("ogr"), q.with_extension("cst"));
    let trc = d.join("path.trc");
    let o = vminor(&["cst", "extract", s(&qg), s(&qc), "--shape", "path", "--verify", "--trace", s(&trc)]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let grid: Vec<usize> = o
        .stdout
        .lines()
        .find_map(|l| l.strip_prefix("grid "))
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    let g = parse_graph(&std::fs::read_to_string(&qg).unwrap()).unwrap();
    let t = parse_trace(&std::fs::read_to_string(&trc).unwrap()).unwrap();
    assert_eq!(replay(&g, &t).unwrap().induced_on(&grid).unwrap(), comparability_grid(2));

    let f = parse_cst(&std::fs::read_to_string(&qc).unwrap()).unwrap();
    let h = f.c.hubs[0];
    let w = f.c.leaves[0][..3].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let r = vminor(&["cst", "restrict", s(&qg), s(&qc), "--hub", &h.to_string(), "--set", &w]);
    assert_eq!(r.code, 0);
    assert!(r.result().contains("k=3"));

    let m = d.join("m");
    vminor(&["gen", "cst", "--shape", "matching", "--n", "3", "--out", s(&m)]);
    let target = d.join("p3.ogr");
    std::fs::write(&target, "3\n010\n101\n010\n").unwrap();
    let o = vminor(&[
        "cst",
        "extract",
        s(&m.with_extension("ogr")),
        s(&m.with_extension("cst")),
        "--shape",
        "matching",
        "--target",
        s(&target),
        "--verify",
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let o = vminor(&["cst", "extract", s(&m.with_extension("ogr")), s(&m.with_extension("cst")), "--shape", "star"]);
    assert_eq!(o.code, 2);
}

#[test]
fn link_verbs() {
    let d = scratch("link");
    let g = d.join("g.ogr");
    // S = {0}, T = {3}, path 0-1-2-3 plus chord 1-3.
    std::fs::write(&g, "4\n0100\n1011\n0101\n0110\n").unwrap();
    let o = vminor(&["klink", "verify", s(&g), "--s", "0", "--t", "3", "--x1", "1", "--x2", "1"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let o = vminor(&["klink", "verify", s(&g), "--s", "0", "--t", "3", "--x1", "2", "--x2", "2"]);
    assert_eq!(o.code, 1);
    let o = vminor(&["klink", "find", s(&g), "--s", "0", "--t", "3", "--k", "1", "--verify"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let o = vminor(&["disentangle", s(&g), "--s", "0", "--t", "3", "--k", "2"]);
    assert_eq!(o.code, 1);
    let o = vminor(&["mintersect", s(&g), "--s", "0", "--t", "3", "--verify"]);
    assert!(o.result().starts_with("RESULT mintersect ok size=1"), "{}", o.result());
    let o = vminor(&["mfcheck", s(&g), "--m", "1"]);
    assert_eq!(o.code, 0);
}

#[test]
fn replay_applies_traces() {
    let d = scratch("replay");
    let g = d.join("g.ogr");
    std::fs::write(&g, "3\n010\n101\n010\n").unwrap();
    let t = d.join("t.trc");
    std::fs::write(&t, "# complement at the middle\nLC 1\nDEL 0\n").unwrap();
    let o = vminor(&["replay", s(&g), s(&t)]);
    assert_eq!(o.code, 0);
    assert_eq!(parse_graph(&body(&o)).unwrap().edge_count(), 1);
    assert!(o.result().ends_with("labels=1,2"));
}
