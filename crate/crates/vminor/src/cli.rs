//! Argument parsing and dispatch for the `vminor` binary.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;
use vminor_core::bounds;
use vminor_core::circle::{self, Arc, ChordDiagram, Permutation};
use vminor_core::constellation::{
    clique_pipeline, extract_matching, extract_star, grow_step, path_pipeline, Augmentation, Constellation, Grown,
    CLIQUE_HUB_CAP,
};
use vminor_core::gen::{self, GrowCase, Shape};
use vminor_core::iso::is_isomorphic;
use vminor_core::matroid::{
    cut_matroid, disentangle, matroid_intersection, max_common_independent, verify_k_link, Disentangled, Intersection,
    KLink, LinkMode, DISENTANGLE_CAP,
};
use vminor_core::rank::{
    check_mf_connected, cut_rank, extract_connected_pivot_minor, kappa, local_connectivity, rank_width, KappaMethod,
    MfReport, KAPPA_FREE_CAP, MF_CAP, RANK_WIDTH_CAP,
};
use vminor_core::search::{is_pivot_minor, is_vertex_minor, local_equivalence_class, CLASS_CAP, SEARCH_CAP};
use vminor_core::trace::{apply_trace, replay};
use vminor_core::{OperationTrace, OrderedGraph};

use crate::formats::{self, ParseError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] vminor_core::Error),
    #[error("emitted trace failed replay verification: {0}")]
    Unverified(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_cap() => 3,
            CliError::Core(vminor_core::Error::Stage { .. }) | CliError::Unverified(_) => 1,
            _ => 2,
        }
    }

    fn status(&self) -> &'static str {
        match (self, self.exit_code()) {
            (_, 3) => "cap",
            (_, 1) => "no",
            (CliError::Usage(_), _) => "usage",
            _ => "error",
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Comma-separated vertex list; the empty string is the empty set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexList(pub Vec<usize>);

impl FromStr for VertexList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim().is_empty() {
            return Ok(VertexList(Vec::new()));
        }
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| format!("{t:?} is not a vertex")))
            .collect::<Result<_, _>>()
            .map(VertexList)
    }
}

#[derive(Debug, Parser)]
#[command(name = "vminor", version, about = "Vertex-minor calculus on small graphs")]
pub struct Cli {
    /// Replay every emitted trace and check its claimed result.
    #[arg(long, global = true)]
    pub verify: bool,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cut-rank of a vertex set.
    Rank {
        graph: PathBuf,
        #[arg(long)]
        set: VertexList,
    },
    /// Local connectivity between two disjoint sets.
    Lconn(StArgs),
    /// Connectivity κ(S,T) and, optionally, the pivot-minor on S ∪ T that keeps it.
    Kappa {
        #[command(flatten)]
        st: StArgs,
        #[arg(long, value_enum, default_value_t = Method::Enumerate)]
        method: Method,
        /// Write the Delete/Pivot trace of the connected pivot-minor here.
        #[arg(long)]
        extract: Option<PathBuf>,
        #[arg(long, default_value_t = KAPPA_FREE_CAP)]
        cap: usize,
    },
    /// Exact rank-width.
    Rankwidth {
        graph: PathBuf,
        /// Print the decomposition tree.
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = RANK_WIDTH_CAP)]
        cap: usize,
    },
    /// Check (m,f)-connectivity with f = g or a constant.
    Mfcheck {
        graph: PathBuf,
        #[arg(long)]
        m: usize,
        /// `g` for the geometric size function, otherwise an integer.
        #[arg(long, default_value = "g")]
        f: String,
        #[arg(long, default_value_t = MF_CAP)]
        cap: usize,
    },
    /// Evaluate a bound function: g n | k0 k | L k | d m s | chain n | kcliques n | ncliques n.
    Bounds {
        name: String,
        args: Vec<u32>,
    },
    /// Maximum common independent set of the cut-matroids of S and T.
    Mintersect {
        #[command(flatten)]
        st: StArgs,
        /// Ask for a common independent set of this size.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Check or search for k-links.
    Klink {
        #[command(subcommand)]
        cmd: KlinkCmd,
    },
    /// Twin elimination, intersection and refinement towards a k-link.
    Disentangle {
        #[command(flatten)]
        st: StArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the resulting graph here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DISENTANGLE_CAP)]
        cap: usize,
    },
    /// Chord diagram operations.
    Circle {
        #[command(subcommand)]
        cmd: CircleCmd,
    },
    /// Generate fixtures.
    Gen {
        #[command(subcommand)]
        cmd: GenCmd,
    },
    /// Vertex-minor containment.
    Vm {
        #[command(subcommand)]
        cmd: ContainsCmd,
    },
    /// Pivot-minor containment.
    Pm {
        #[command(subcommand)]
        cmd: ContainsCmd,
    },
    /// Local equivalence classes.
    Lec {
        #[command(subcommand)]
        cmd: LecCmd,
    },
    /// Constellations and augmentations.
    Cst {
        #[command(subcommand)]
        cmd: CstCmd,
    },
    /// Apply a trace to a graph.
    Replay {
        graph: PathBuf,
        trace: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct StArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub s: VertexList,
    #[arg(long)]
    pub t: VertexList,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Method {
    Enumerate,
    Recursive,
}

#[derive(Debug, Subcommand)]
pub enum KlinkCmd {
    Verify {
        #[command(flatten)]
        st: StArgs,
        #[arg(long)]
        x1: VertexList,
        #[arg(long)]
        x2: VertexList,
        #[arg(long)]
        disjoint: bool,
    },
    Find {
        #[command(flatten)]
        st: StArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = DISENTANGLE_CAP)]
        cap: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CircleCmd {
    /// Intersection graph.
    Ig {
        diagram: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reverse the word between the ends of a chord.
    Flip {
        diagram: PathBuf,
        #[arg(long)]
        chord: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce to a permutation graph by making every chord cross an arc.
    Toperm {
        diagram: PathBuf,
        /// `start:len` in canonical positions; default minimises non-crossing chords.
        #[arg(long)]
        arc: Option<String>,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Realise the circle graph inside a comparability grid.
    Togrid {
        diagram: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CstShape {
    Star,
    Path,
    Clique,
    Matching,
    Grow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pattern {
    Path,
    Clique,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    One,
    Two,
    Claim,
}

#[derive(Debug, Subcommand)]
pub enum GenCmd {
    /// The comparability grid on n² vertices.
    Grid {
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Permutation graph of a 1-based one-line permutation such as 2,3,1.
    Perm {
        pi: VertexList,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// G(n, p) random graph.
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random chord diagram.
    Diagram {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Constellation fixture; `--out P` writes `P.ogr` and `P.cst`.
    Cst {
        #[arg(long, value_enum)]
        shape: CstShape,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pattern graph for `--shape matching`.
        #[arg(long, value_enum, default_value_t = Pattern::Path)]
        pattern: Pattern,
        /// Branch for `--shape grow`.
        #[arg(long, value_enum, default_value_t = CaseArg::One)]
        case: CaseArg,
        /// Linked set size for `--shape grow`.
        #[arg(long, default_value_t = 4)]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ContainsCmd {
    Contains {
        g: PathBuf,
        h: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = SEARCH_CAP)]
        cap: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum LecCmd {
    Size {
        graph: PathBuf,
        #[arg(long, default_value_t = CLASS_CAP)]
        cap: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CstCmd {
    /// Check the constellation clauses (and the augmentation clauses if present).
    Validate {
        graph: PathBuf,
        cst: PathBuf,
        /// Only the weak augmentation clauses.
        #[arg(long)]
        weak: bool,
    },
    /// Keep the positions a subset of one leaf set occupies.
    Restrict {
        graph: PathBuf,
        cst: PathBuf,
        #[arg(long)]
        hub: usize,
        #[arg(long)]
        set: VertexList,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One growth step on an augmentation; `--out P` writes `P.ogr` and `P.cst`.
    Grow {
        graph: PathBuf,
        cst: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract a target graph or a comparability grid.
    Extract {
        graph: PathBuf,
        cst: PathBuf,
        #[arg(long, value_enum)]
        shape: ExtractShape,
        /// Target for star and matching extraction.
        #[arg(long)]
        target: Option<PathBuf>,
        /// Grid side for clique and path extraction.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = CLIQUE_HUB_CAP)]
        cap: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExtractShape {
    Star,
    Matching,
    Clique,
    Path,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok,
    No,
}

struct Summary {
    status: Status,
    fields: Vec<(&'static str, String)>,
}

impl Summary {
    fn new(status: Status) -> Self {
        Summary { status, fields: Vec::new() }
    }

    fn ok() -> Self {
        Summary::new(Status::Ok)
    }

    fn with(mut self, key: &'static str, value: impl ToString) -> Self {
        self.fields.push((key, value.to_string()));
        self
    }
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    verify: bool,
}

impl Ctx<'_> {
    /// Writes `text` to `path`, or to standard output when no path is given.
    fn emit(&mut self, path: Option<&Path>, text: &str) -> CliResult<()> {
        match path {
            Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.into(), source }),
            None => self.out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
        }
    }

    fn line(&mut self, text: impl AsRef<str>) -> CliResult<()> {
        let mut s = text.as_ref().to_string();
        s.push('\n');
        self.emit(None, &s)
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn load<T>(path: &Path, parse: fn(&str) -> Result<T, ParseError>) -> CliResult<T> {
    parse(&read(path)?).map_err(|source| CliError::Parse { path: path.into(), source })
}

fn load_graph(path: &Path) -> CliResult<OrderedGraph> {
    load(path, formats::parse_graph)
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Refuses inputs above a cap; a cap above the library limit is a usage error.
fn cap_check(what: &'static str, cap: usize, limit: usize, actual: usize) -> CliResult<()> {
    if cap > limit {
        return Err(CliError::Usage(format!("--cap {cap} is above the supported maximum {limit} for {what}")));
    }
    if actual > cap {
        return Err(vminor_core::Error::CapExceeded { what, limit: cap, actual }.into());
    }
    Ok(())
}

fn verb_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Rank { .. } => "rank",
        Command::Lconn(_) => "lconn",
        Command::Kappa { .. } => "kappa",
        Command::Rankwidth { .. } => "rankwidth",
        Command::Mfcheck { .. } => "mfcheck",
        Command::Bounds { .. } => "bounds",
        Command::Mintersect { .. } => "mintersect",
        Command::Klink { cmd: KlinkCmd::Verify { .. } } => "klink-verify",
        Command::Klink { cmd: KlinkCmd::Find { .. } } => "klink-find",
        Command::Disentangle { .. } => "disentangle",
        Command::Circle { cmd } => match cmd {
            CircleCmd::Ig { .. } => "circle-ig",
            CircleCmd::Flip { .. } => "circle-flip",
            CircleCmd::Toperm { .. } => "circle-toperm",
            CircleCmd::Togrid { .. } => "circle-togrid",
        },
        Command::Gen { cmd } => match cmd {
            GenCmd::Grid { .. } => "gen-grid",
            GenCmd::Perm { .. } => "gen-perm",
            GenCmd::Graph { .. } => "gen-graph",
            GenCmd::Diagram { .. } => "gen-diagram",
            GenCmd::Cst { .. } => "gen-cst",
        },
        Command::Vm { .. } => "vm-contains",
        Command::Pm { .. } => "pm-contains",
        Command::Lec { .. } => "lec-size",
        Command::Cst { cmd } => match cmd {
            CstCmd::Validate { .. } => "cst-validate",
            CstCmd::Restrict { .. } => "cst-restrict",
            CstCmd::Grow { .. } => "cst-grow",
            CstCmd::Extract { .. } => "cst-extract",
        },
        Command::Replay { .. } => "replay",
    }
}

/// Runs one command line. Output goes to `out`, diagnostics to `err`; the
/// return value is the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
                let _ = writeln!(out, "RESULT - usage");
            }
            return code;
        }
    };
    let verb = verb_name(&cli.cmd);
    let mut ctx = Ctx { out, verify: cli.verify };
    let (code, line) = match dispatch(&mut ctx, cli.cmd) {
        Ok(s) => {
            let (word, code) = match s.status {
                Status::Ok => ("ok", 0),
                Status::No => ("no", 1),
            };
            let mut line = format!("RESULT {verb} {word}");
            for (k, v) in s.fields {
                write!(line, " {k}={v}").unwrap();
            }
            (code, line)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            (e.exit_code(), format!("RESULT {verb} {}", e.status()))
        }
    };
    let _ = writeln!(ctx.out, "{line}");
    code
}

fn dispatch(ctx: &mut Ctx, cmd: Command) -> CliResult<Summary> {
    match cmd {
        Command::Rank { graph, set } => {
            let g = load_graph(&graph)?;
            let r = cut_rank(&g, &set.0)?;
            ctx.line(r.to_string())?;
            Ok(Summary::ok().with("rho", r))
        }
        Command::Lconn(st) => {
            let g = load_graph(&st.graph)?;
            let r = local_connectivity(&g, &st.s.0, &st.t.0)?;
            ctx.line(r.to_string())?;
            Ok(Summary::ok().with("sqcap", r))
        }
        Command::Kappa { st, method, extract, cap } => kappa_cmd(ctx, st, method, extract, cap),
        Command::Rankwidth { graph, witness, cap } => {
            let g = load_graph(&graph)?;
            cap_check("rank-width vertex count", cap, RANK_WIDTH_CAP, g.n())?;
            let (w, d) = rank_width(&g)?;
            ctx.line(w.to_string())?;
            if witness {
                ctx.line(format!("nodes {}", d.node_count))?;
                for (a, b) in &d.edges {
                    ctx.line(format!("{a} {b}"))?;
                }
            }
            if ctx.verify && d.recompute_width(&g) != w {
                return Err(CliError::Unverified("decomposition width differs".into()));
            }
            Ok(Summary::ok().with("width", w).with("nodes", d.node_count))
        }
        Command::Mfcheck { graph, m, f, cap } => {
            let g = load_graph(&graph)?;
            cap_check("(m,f) check vertex count", cap, MF_CAP, g.n())?;
            let report = if f == "g" {
                check_mf_connected(&g, m, |r| bounds::g(r as u32).ok())?
            } else {
                let c: u128 = f.parse().map_err(|_| CliError::Usage(format!("--f must be g or an integer, got {f:?}")))?;
                check_mf_connected(&g, m, |_| Some(c))?
            };
            match report {
                MfReport::Connected => {
                    ctx.line("connected")?;
                    Ok(Summary::ok())
                }
                MfReport::Violated { x, y, rho } => {
                    ctx.line(format!("violated X={} Y={} rho={rho}", join(&x), join(&y)))?;
                    Ok(Summary::new(Status::No).with("rho", rho).with("x", join(&x)))
                }
            }
        }
        Command::Bounds { name, args } => bounds_cmd(ctx, &name, &args),
        Command::Mintersect { st, k } => {
            let g = load_graph(&st.graph)?;
            local_connectivity(&g, &st.s.0, &st.t.0)?;
            let m1 = cut_matroid(&g, &st.s.0)?.delete(&st.t.0);
            let m2 = cut_matroid(&g, &st.t.0)?.delete(&st.s.0);
            let (set, cert) = max_common_independent(&m1, &m2)?;
            ctx.line(format!("common {}", join(&set)))?;
            ctx.line(format!("partition P={} Q={} deficiency={}", join(&cert.p), join(&cert.q), cert.deficiency))?;
            if ctx.verify && !cert.verify(&m1, &m2) {
                return Err(CliError::Unverified("partition certificate".into()));
            }
            let s = Summary::ok().with("size", set.len());
            match k {
                None => Ok(s),
                Some(k) => match matroid_intersection(&m1, &m2, k)? {
                    Intersection::Common(_) => Ok(s.with("k", k)),
                    Intersection::Certificate(_) => Ok(Summary::new(Status::No).with("size", set.len()).with("k", k)),
                },
            }
        }
        Command::Klink { cmd: KlinkCmd::Verify { st, x1, x2, disjoint } } => {
            let g = load_graph(&st.graph)?;
            let mode = if disjoint { LinkMode::Disjoint } else { LinkMode::Equal };
            let link = KLink { x1: x1.0, x2: x2.0, mode };
            match verify_k_link(&g, &st.s.0, &st.t.0, &link) {
                Ok(()) => {
                    ctx.line("valid")?;
                    Ok(Summary::ok().with("k", link.k()))
                }
                Err(v) => {
                    ctx.line(format!("invalid: {v}"))?;
                    Ok(Summary::new(Status::No).with("clause", v.to_string().replace(' ', "-")))
                }
            }
        }
        Command::Klink { cmd: KlinkCmd::Find { st, k, trace, cap } } => {
            let g = load_graph(&st.graph)?;
            cap_check("disentangle vertex count", cap, DISENTANGLE_CAP, g.n())?;
            match disentangle(&g, &st.s.0, &st.t.0, k)? {
                Disentangled::Found { graph, trace: tr, link, .. } => {
                    verify_emitted(ctx, &g, &tr, &graph)?;
                    print_link(ctx, &link)?;
                    if let Some(p) = &trace {
                        ctx.emit(Some(p), &formats::write_trace(&tr))?;
                    }
                    Ok(Summary::ok().with("k", link.k()).with("steps", tr.len()))
                }
                Disentangled::NotFound { stage, .. } => {
                    ctx.line(format!("not found at stage {stage}"))?;
                    Ok(Summary::new(Status::No).with("stage", stage))
                }
            }
        }
        Command::Disentangle { st, k, trace, out, cap } => {
            let g = load_graph(&st.graph)?;
            cap_check("disentangle vertex count", cap, DISENTANGLE_CAP, g.n())?;
            match disentangle(&g, &st.s.0, &st.t.0, k)? {
                Disentangled::Found { graph, trace: tr, link, log } => {
                    verify_emitted(ctx, &g, &tr, &graph)?;
                    for t in &log {
                        ctx.line(format!(
                            "twin removed={} twin={} adjacent={} complemented={} kappa={}->{}",
                            t.removed, t.twin, t.adjacent, t.complemented, t.kappa_before, t.kappa_after
                        ))?;
                    }
                    print_link(ctx, &link)?;
                    if let Some(p) = &trace {
                        ctx.emit(Some(p), &formats::write_trace(&tr))?;
                    }
                    if let Some(p) = &out {
                        ctx.emit(Some(p), &formats::write_graph(&graph))?;
                    }
                    Ok(Summary::ok().with("k", link.k()).with("twins", log.len()).with("steps", tr.len()))
                }
                Disentangled::NotFound { stage, log } => {
                    ctx.line(format!("not found at stage {stage}"))?;
                    Ok(Summary::new(Status::No).with("stage", stage).with("twins", log.len()))
                }
            }
        }
        Command::Circle { cmd } => circle_cmd(ctx, cmd),
        Command::Gen { cmd } => gen_cmd(ctx, cmd),
        Command::Vm { cmd: ContainsCmd::Contains { g, h, trace, cap } } => contains_cmd(ctx, g, h, trace, cap, false),
        Command::Pm { cmd: ContainsCmd::Contains { g, h, trace, cap } } => contains_cmd(ctx, g, h, trace, cap, true),
        Command::Lec { cmd: LecCmd::Size { graph, cap } } => {
            let g = load_graph(&graph)?;
            if cap > CLASS_CAP {
                return Err(CliError::Usage(format!("--cap {cap} is above the supported maximum {CLASS_CAP}")));
            }
            let class = local_equivalence_class(&g, cap)?;
            ctx.line(class.len().to_string())?;
            Ok(Summary::ok().with("size", class.len()))
        }
        Command::Cst { cmd } => cst_cmd(ctx, cmd),
        Command::Replay { graph, trace, out } => {
            let g = load_graph(&graph)?;
            let t = load(&trace, formats::parse_trace)?;
            let r = replay(&g, &t)?;
            ctx.emit(out.as_deref(), &formats::write_graph(&r.graph))?;
            Ok(Summary::ok().with("n", r.graph.n()).with("labels", join(&r.labels)))
        }
    }
}

/// With `--verify`, replays `trace` on `start` and compares with `expected`.
fn verify_emitted(ctx: &Ctx, start: &OrderedGraph, trace: &OperationTrace, expected: &OrderedGraph) -> CliResult<()> {
    if ctx.verify && apply_trace(start, trace)? != *expected {
        return Err(CliError::Unverified("replayed graph differs".into()));
    }
    Ok(())
}

fn print_link(ctx: &mut Ctx, link: &KLink) -> CliResult<()> {
    let mode = match link.mode {
        LinkMode::Equal => "equal",
        LinkMode::Disjoint => "disjoint",
    };
    ctx.line(format!("link {mode} X1={} X2={}", join(&link.x1), join(&link.x2)))
}

fn kappa_cmd(ctx: &mut Ctx, st: StArgs, method: Method, extract: Option<PathBuf>, cap: usize) -> CliResult<Summary> {
    let g = load_graph(&st.graph)?;
    let (s, t) = (&st.s.0, &st.t.0);
    local_connectivity(&g, s, t)?;
    cap_check("free vertex count", cap, KAPPA_FREE_CAP, g.n().saturating_sub(s.len() + t.len()))?;
    let method = match method {
        Method::Enumerate => KappaMethod::Enumerate,
        Method::Recursive => KappaMethod::Recursive,
    };
    let k = kappa(&g, s, t, method)?;
    ctx.line(k.to_string())?;
    let mut summary = Summary::ok().with("kappa", k);
    if let Some(p) = extract {
        let (minor, trace) = extract_connected_pivot_minor(&g, s, t)?;
        verify_emitted(ctx, &g, &trace, &minor)?;
        ctx.emit(Some(&p), &formats::write_trace(&trace))?;
        summary = summary.with("steps", trace.len());
    }
    Ok(summary)
}

fn bounds_cmd(ctx: &mut Ctx, name: &str, args: &[u32]) -> CliResult<Summary> {
    let want = |n: usize| -> CliResult<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(CliError::Usage(format!("bounds {name} takes {n} argument(s)")))
        }
    };
    let value = match name {
        "g" => {
            want(1)?;
            bounds::g(args[0])?
        }
        "k0" => {
            want(1)?;
            bounds::k0(args[0])?
        }
        "L" => {
            want(1)?;
            bounds::big_l(args[0])?
        }
        "d" => {
            want(2)?;
            bounds::d_s(args[0], args[1])?
        }
        "kcliques" => {
            want(1)?;
            bounds::k_cliques(args[0])?
        }
        "ncliques" => {
            want(1)?;
            bounds::n_cliques_upper(args[0])?
        }
        "chain" => {
            want(1)?;
            let c = bounds::path_chain(args[0])?;
            ctx.line(format!(
                "m={} k3={} k2={} k1={} n_paths={} k_paths={}",
                c.m, c.k3, c.k2, c.k1, c.n_paths, c.k_paths
            ))?;
            return Ok(Summary::ok().with("m", c.m).with("k1", c.k1));
        }
        _ => return Err(CliError::Usage(format!("unknown bound {name:?}"))),
    };
    ctx.line(value.to_string())?;
    Ok(Summary::ok().with("value", value))
}

fn parse_arc(s: &str) -> CliResult<Arc> {
    let bad = || CliError::Usage(format!("--arc expects start:len, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok(Arc { start: a.parse().map_err(|_| bad())?, len: b.parse().map_err(|_| bad())? })
}

fn circle_cmd(ctx: &mut Ctx, cmd: CircleCmd) -> CliResult<Summary> {
    match cmd {
        CircleCmd::Ig { diagram, out } => {
            let d = load(&diagram, formats::parse_diagram)?;
            let g = circle::intersection_graph(&d);
            ctx.emit(out.as_deref(), &formats::write_graph(&g))?;
            Ok(Summary::ok().with("n", g.n()).with("edges", g.edge_count()).with("names", d.names().join(",")))
        }
        CircleCmd::Flip { diagram, chord, out } => {
            let d = load(&diagram, formats::parse_diagram)?;
            let f = circle::flip(&d, &chord)?;
            if ctx.verify {
                let v = d.chord(&chord)?;
                let lc = circle::intersection_graph(&d).local_complement(v)?;
                if circle::intersection_graph(&f) != lc {
                    return Err(CliError::Unverified("flip does not match local complementation".into()));
                }
            }
            ctx.emit(out.as_deref(), &formats::write_diagram(&f))?;
            Ok(Summary::ok().with("chords", f.chord_count()))
        }
        CircleCmd::Toperm { diagram, arc, trace } => {
            let d = load(&diagram, formats::parse_diagram)?;
            let arc = match arc {
                Some(a) => parse_arc(&a)?,
                None => circle_best_arc(&d)?,
            };
            let r = circle::circle_to_permutation(&d, arc)?;
            if ctx.verify {
                let replayed = replay(&circle::permutation_graph(&r.pi), &r.trace)?;
                if replayed.induced_on(&r.map)? != circle::intersection_graph(&d) {
                    return Err(CliError::Unverified("permutation trace".into()));
                }
            }
            ctx.line(format!("perm {}", join(r.pi.values())))?;
            ctx.line(format!("map {}", join(&r.map)))?;
            if let Some(p) = &trace {
                ctx.emit(Some(p), &formats::write_trace(&r.trace))?;
            }
            Ok(Summary::ok().with("len", r.pi.len()).with("rounds", r.stats.len()).with("steps", r.trace.len()))
        }
        CircleCmd::Togrid { diagram, trace } => {
            let d = load(&diagram, formats::parse_diagram)?;
            let r = circle::circle_to_grid(&d)?;
            if ctx.verify && !circle::verify_circle_to_grid(&d, &r)? {
                return Err(CliError::Unverified("grid trace".into()));
            }
            ctx.line(format!("grid {}", r.grid))?;
            ctx.line(format!("map {}", join(&r.map)))?;
            if let Some(p) = &trace {
                ctx.emit(Some(p), &formats::write_trace(&r.trace))?;
            }
            Ok(Summary::ok().with("grid", r.grid).with("steps", r.trace.len()).with("verified", ctx.verify))
        }
    }
}

/// The arc `circle_to_grid` would use.
fn circle_best_arc(d: &ChordDiagram) -> CliResult<Arc> {
    Ok(circle::circle_to_grid(d)?.arc)
}

fn gen_cmd(ctx: &mut Ctx, cmd: GenCmd) -> CliResult<Summary> {
    match cmd {
        GenCmd::Grid { n, out } => {
            let g = circle::comparability_grid(n);
            ctx.emit(out.as_deref(), &formats::write_graph(&g))?;
            Ok(Summary::ok().with("n", g.n()).with("edges", g.edge_count()))
        }
        GenCmd::Perm { pi, out } => {
            let p = Permutation::new(pi.0)?;
            let g = circle::permutation_graph(&p);
            ctx.emit(out.as_deref(), &formats::write_graph(&g))?;
            Ok(Summary::ok().with("n", g.n()).with("edges", g.edge_count()))
        }
        GenCmd::Graph { n, p, seed, out } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::Usage(format!("--p must lie in [0, 1], got {p}")));
            }
            let g = gen::random_graph(n, p, &mut gen::rng(seed));
            ctx.emit(out.as_deref(), &formats::write_graph(&g))?;
            Ok(Summary::ok().with("n", g.n()).with("edges", g.edge_count()).with("seed", seed))
        }
        GenCmd::Diagram { n, seed, out } => {
            let d = gen::random_diagram(n, &mut gen::rng(seed));
            ctx.emit(out.as_deref(), &formats::write_diagram(&d))?;
            Ok(Summary::ok().with("chords", d.chord_count()).with("seed", seed))
        }
        GenCmd::Cst { shape, n, seed, pattern, case, t, out } => {
            let (g, c, aug) = match shape {
                CstShape::Star => fixture(gen::shape_fixture(Shape::Star, n, seed)),
                CstShape::Path => fixture(gen::shape_fixture(Shape::Path, n, seed)),
                CstShape::Clique => fixture(gen::shape_fixture(Shape::Clique, n, seed)),
                CstShape::Matching => {
                    let p = if pattern == Pattern::Path { Shape::Path } else { Shape::Clique };
                    fixture(gen::matching_fixture(n, p))
                }
                CstShape::Grow => {
                    let case = match case {
                        CaseArg::One => GrowCase::One,
                        CaseArg::Two => GrowCase::Two,
                        CaseArg::Claim => GrowCase::Claim,
                    };
                    let (g, a) = gen::grow_fixture(case, t)?;
                    Ok((g, a.c.clone(), Some(a)))
                }
            }?;
            let violations = match &aug {
                Some(a) => a.validate(&g),
                None => c.validate(&g),
            };
            if let Some(v) = violations.first() {
                return Err(CliError::Unverified(format!("generated fixture fails {v}")));
            }
            write_pair(ctx, out.as_deref(), &g, &c, aug.as_ref())?;
            Ok(Summary::ok().with("n", c.n()).with("m", c.m()).with("k", c.k()).with("vertices", g.n()))
        }
    }
}

type Fixture = (OrderedGraph, Constellation, Option<Augmentation>);

fn fixture(r: vminor_core::Result<(OrderedGraph, Constellation)>) -> CliResult<Fixture> {
    let (g, c) = r?;
    Ok((g, c, None))
}

/// `P.ogr` and `P.cst`, or both on standard output.
fn write_pair(
    ctx: &mut Ctx,
    prefix: Option<&Path>,
    g: &OrderedGraph,
    c: &Constellation,
    aug: Option<&Augmentation>,
) -> CliResult<()> {
    let (gt, ct) = (formats::write_graph(g), formats::write_cst(c, aug));
    match prefix {
        Some(p) => {
            ctx.emit(Some(&p.with_extension("ogr")), &gt)?;
            ctx.emit(Some(&p.with_extension("cst")), &ct)
        }
        None => {
            ctx.emit(None, &gt)?;
            ctx.emit(None, &ct)
        }
    }
}

fn contains_cmd(ctx: &mut Ctx, g: PathBuf, h: PathBuf, trace: Option<PathBuf>, cap: usize, pivot: bool) -> CliResult<Summary> {
    let (g, h) = (load_graph(&g)?, load_graph(&h)?);
    cap_check("search host vertex count", cap, SEARCH_CAP, g.n())?;
    let found = if pivot { is_pivot_minor(&g, &h)? } else { is_vertex_minor(&g, &h)? };
    match found {
        Some(t) => {
            if ctx.verify && is_isomorphic(&apply_trace(&g, &t)?, &h)?.is_none() {
                return Err(CliError::Unverified("containment trace".into()));
            }
            ctx.line("yes")?;
            if let Some(p) = &trace {
                ctx.emit(Some(p), &formats::write_trace(&t))?;
            }
            Ok(Summary::ok().with("steps", t.len()))
        }
        None => {
            ctx.line("no")?;
            Ok(Summary::new(Status::No))
        }
    }
}

fn load_cst(path: &Path) -> CliResult<formats::CstFile> {
    load(path, formats::parse_cst)
}

fn cst_cmd(ctx: &mut Ctx, cmd: CstCmd) -> CliResult<Summary> {
    match cmd {
        CstCmd::Validate { graph, cst, weak } => {
            let g = load_graph(&graph)?;
            let f = load_cst(&cst)?;
            let (what, violations) = match &f.aug {
                Some(a) if weak => ("weak-augmentation", a.validate_weak(&g)),
                Some(a) => ("augmentation", a.validate(&g)),
                None => ("constellation", f.c.validate(&g)),
            };
            for v in &violations {
                ctx.line(v.to_string())?;
            }
            let status = if violations.is_empty() { Status::Ok } else { Status::No };
            let mut s = Summary::new(status).with("kind", what).with("violations", violations.len());
            if let Some(v) = violations.first() {
                s = s.with("clause", v.clause);
            }
            Ok(s)
        }
        CstCmd::Restrict { graph, cst, hub, set, out } => {
            let g = load_graph(&graph)?;
            let f = load_cst(&cst)?;
            let r = f.c.restrict(hub, &set.0)?;
            let violations = r.validate(&g);
            ctx.emit(out.as_deref(), &formats::write_cst(&r, None))?;
            let status = if violations.is_empty() { Status::Ok } else { Status::No };
            Ok(Summary::new(status).with("k", r.k()).with("violations", violations.len()))
        }
        CstCmd::Grow { graph, cst, trace, out } => {
            let g = load_graph(&graph)?;
            let f = load_cst(&cst)?;
            let aug = f.aug.ok_or_else(|| CliError::Usage("grow needs an augmentation (AUG section)".into()))?;
            let r = grow_step(&g, &aug)?;
            verify_emitted(ctx, &g, &r.trace, &r.graph)?;
            let (c, a) = match &r.result {
                Grown::Constellation(c) => (c.clone(), None),
                Grown::Augmentation(a) => (a.c.clone(), Some(a)),
            };
            write_pair(ctx, out.as_deref(), &r.graph, &c, a)?;
            if let Some(p) = &trace {
                ctx.emit(Some(p), &formats::write_trace(&r.trace))?;
            }
            let result = if a.is_some() { "augmentation" } else { "constellation" };
            Ok(Summary::ok()
                .with("branch", r.branch)
                .with("result", result)
                .with("n", c.n())
                .with("m", c.m())
                .with("k", c.k()))
        }
        CstCmd::Extract { graph, cst, shape, target, n, trace, cap } => {
            let g = load_graph(&graph)?;
            let f = load_cst(&cst)?;
            let c = f.c;
            let (tr, key, image, mut s) = match shape {
                ExtractShape::Star | ExtractShape::Matching => {
                    let path = target.ok_or_else(|| CliError::Usage("--target is required for this shape".into()))?;
                    let h = load_graph(&path)?;
                    let (tr, z) =
                        if shape == ExtractShape::Star { extract_star(&g, &c, &h)? } else { extract_matching(&g, &c, &h)? };
                    if ctx.verify && replay(&g, &tr)?.induced_on(&z)? != h {
                        return Err(CliError::Unverified("extraction trace".into()));
                    }
                    (tr, "z", z, Summary::ok())
                }
                ExtractShape::Clique | ExtractShape::Path => {
                    let n = match n {
                        Some(n) => n,
                        None => (1..=c.n()).find(|r| r * r >= c.n()).unwrap_or(1),
                    };
                    let out = if shape == ExtractShape::Clique {
                        cap_check("clique hub count", cap, CLIQUE_HUB_CAP, c.n())?;
                        clique_pipeline(&g, &c, n)?
                    } else {
                        path_pipeline(&g, &c, n)?
                    };
                    if ctx.verify && !out.verify(&g)? {
                        return Err(CliError::Unverified("grid trace".into()));
                    }
                    for st in &out.stages {
                        ctx.line(format!("stage {} hubs={} k={} vertices={}", st.stage, st.hubs, st.k, st.vertices))?;
                    }
                    (out.trace, "grid", out.grid, Summary::ok().with("case", out.case).with("n", n))
                }
            };
            ctx.line(format!("{key} {}", join(&image)))?;
            if let Some(p) = &trace {
                ctx.emit(Some(p), &formats::write_trace(&tr))?;
            }
            s = s.with("steps", tr.len()).with(key, join(&image));
            Ok(s)
        }
    }
}
