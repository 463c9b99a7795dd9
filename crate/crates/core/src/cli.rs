//! Instance files, generators, and the `crsndp` command line.
//!
//! ```text
//! # comment
//! nodes <count> [<name> ...]
//! edge <u> <v> <cost>
//! req <s> <t> <r>
//! kecss <k>
//! grace <t0> <t1> ... <tj>
//! ```
//!
//! Node names are mapped to ids in order of first appearance, unless the
//! `nodes` line lists them. Costs are exact: `3`, `1/2`, or `0.25`.

use crate::cutreq::{Demand, GraceProfile, SndpRequirements};
use crate::decomp::{decompose_instance, leaf_instances};
use crate::graph::Multigraph;
use crate::lp::solve_crlp_with;
use crate::rational::{fmt_decimal, fmt_exact, int, parse_rational, Rational};
use crate::sets::{EdgeSet, NodeSet};
use crate::solver::{
    check_cut_relative, check_path_relative, crndp_alg, exact_opt, kecss_reduction, Instance,
    Model, Requirement, Witness,
};
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: more than one requirement family")]
    MixedFamilies { line: usize },
    #[error("line {line}: grace levels must be non-increasing")]
    NonDecreasingTau { line: usize },
    #[error("line {line}: self-loop at node {node}")]
    SelfLoop { line: usize, node: String },
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

#[derive(Default)]
struct Names {
    ids: HashMap<String, usize>,
    names: Vec<String>,
    declared: Option<usize>,
    fixed: bool,
}

impl Names {
    fn id(&mut self, name: &str, line: usize) -> Result<usize, ParseError> {
        if let Some(&id) = self.ids.get(name) {
            return Ok(id);
        }
        if self.fixed {
            return Err(syntax(
                line,
                format!("node {name} is not listed on the nodes line"),
            ));
        }
        if self.declared.is_some_and(|n| self.names.len() >= n) {
            return Err(syntax(
                line,
                format!("node {name} exceeds the declared node count"),
            ));
        }
        let id = self.names.len();
        self.ids.insert(name.to_string(), id);
        self.names.push(name.to_string());
        Ok(id)
    }

    /// Pads to the declared count with unused names.
    fn finish(mut self) -> Vec<String> {
        let target = self.declared.unwrap_or(self.names.len());
        let mut i = self.names.len();
        while self.names.len() < target {
            let mut candidate = i.to_string();
            while self.ids.contains_key(&candidate) {
                candidate.insert(0, '_');
            }
            self.ids.insert(candidate.clone(), self.names.len());
            self.names.push(candidate);
            i += 1;
        }
        self.names
    }
}

enum Family {
    Sndp(Vec<Demand>),
    Kecss(u32),
    Grace(Vec<u32>),
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("bad {what} `{tok}`")))
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut names = Names::default();
    let mut edges: Vec<(usize, usize, Rational)> = Vec::new();
    let mut family: Option<Family> = None;
    let mut seen_content = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        let Some((&head, args)) = toks.split_first() else {
            continue;
        };
        match head {
            "nodes" => {
                if seen_content || names.declared.is_some() {
                    return Err(syntax(line, "nodes must be the first directive"));
                }
                let (&count, listed) = args
                    .split_first()
                    .ok_or_else(|| syntax(line, "nodes needs a count"))?;
                let count: usize = parse_num(count, line, "node count")?;
                if !listed.is_empty() {
                    if listed.len() != count {
                        return Err(syntax(
                            line,
                            format!("{} names for {count} nodes", listed.len()),
                        ));
                    }
                    for name in listed {
                        if names.ids.contains_key(*name) {
                            return Err(syntax(line, format!("node {name} listed twice")));
                        }
                        names.id(name, line)?;
                    }
                    names.fixed = true;
                }
                names.declared = Some(count);
            }
            "edge" => {
                let [u, v, cost] = args else {
                    return Err(syntax(line, "expected `edge <u> <v> <cost>`"));
                };
                if u == v {
                    return Err(ParseError::SelfLoop {
                        line,
                        node: u.to_string(),
                    });
                }
                let cost = parse_rational(cost)
                    .filter(|c| !c.is_negative())
                    .ok_or_else(|| syntax(line, format!("bad cost `{cost}`")))?;
                let (u, v) = (names.id(u, line)?, names.id(v, line)?);
                edges.push((u, v, cost));
            }
            "req" => {
                let [s, t, r] = args else {
                    return Err(syntax(line, "expected `req <s> <t> <r>`"));
                };
                let r: u32 = parse_num(r, line, "requirement")?;
                if r == 0 {
                    return Err(syntax(line, "requirement must be positive"));
                }
                if s == t {
                    return Err(syntax(line, "demand endpoints must differ"));
                }
                let (s, t) = (names.id(s, line)?, names.id(t, line)?);
                match &mut family {
                    None => family = Some(Family::Sndp(vec![Demand { s, t, r }])),
                    Some(Family::Sndp(d)) => d.push(Demand { s, t, r }),
                    Some(_) => return Err(ParseError::MixedFamilies { line }),
                }
            }
            "kecss" => {
                let [k] = args else {
                    return Err(syntax(line, "expected `kecss <k>`"));
                };
                let k: u32 = parse_num(k, line, "k")?;
                if k == 0 {
                    return Err(syntax(line, "k must be positive"));
                }
                if family.is_some() {
                    return Err(ParseError::MixedFamilies { line });
                }
                family = Some(Family::Kecss(k));
            }
            "grace" => {
                if args.is_empty() {
                    return Err(syntax(line, "grace needs at least one level"));
                }
                let tau = args
                    .iter()
                    .map(|t| parse_num::<u32>(t, line, "level"))
                    .collect::<Result<Vec<_>, _>>()?;
                if tau.windows(2).any(|w| w[1] > w[0]) {
                    return Err(ParseError::NonDecreasingTau { line });
                }
                if family.is_some() {
                    return Err(ParseError::MixedFamilies { line });
                }
                family = Some(Family::Grace(tau));
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
        seen_content = true;
    }

    let names = names.finish();
    let mut g = Multigraph::new(names.len());
    let mut costs = Vec::with_capacity(edges.len());
    for (u, v, c) in edges {
        g.add_edge(u, v).expect("endpoints validated");
        costs.push(c);
    }
    let requirement = match family {
        None => Requirement::Sndp(SndpRequirements::new(vec![]).expect("empty list is valid")),
        Some(Family::Sndp(d)) => {
            Requirement::Sndp(SndpRequirements::new(d).map_err(|e| syntax(0, e.to_string()))?)
        }
        Some(Family::Kecss(k)) => Requirement::Kecss(k),
        Some(Family::Grace(tau)) => {
            Requirement::Grace(GraceProfile::new(tau).map_err(|e| syntax(0, e.to_string()))?)
        }
    };
    Ok(Instance::new(g, costs, requirement)
        .map_err(|e| syntax(0, e.to_string()))?
        .with_names(names))
}

/// Text form of `inst`; parsing it yields the same ids, costs, and requirements.
pub fn print_instance(inst: &Instance) -> crate::Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "nodes {} {}", inst.names.len(), inst.names.join(" "));
    for e in inst.graph.edges() {
        let _ = writeln!(
            out,
            "edge {} {} {}",
            inst.name(e.u),
            inst.name(e.v),
            fmt_exact(&inst.costs[e.id])
        );
    }
    match &inst.requirement {
        Requirement::Sndp(reqs) => {
            for d in reqs.demands() {
                let _ = writeln!(out, "req {} {} {}", inst.name(d.s), inst.name(d.t), d.r);
            }
        }
        Requirement::Kecss(k) => {
            let _ = writeln!(out, "kecss {k}");
        }
        Requirement::Grace(p) if !p.has_measure() => {
            let levels: Vec<String> = p.tau().iter().map(u32::to_string).collect();
            let _ = writeln!(out, "grace {}", levels.join(" "));
        }
        _ => return Err(crate::Error::Unsupported("requirement has no text form")),
    }
    Ok(out)
}

/// The five-node instance whose LP has a non-laminar optimal vertex:
/// edges su sv uw vw sw wt, demand (s, t, 2), sw free and the rest unit cost.
pub fn nolam_instance() -> Instance {
    let g = Multigraph::from_edges(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (0, 3), (3, 4)])
        .expect("static graph");
    let reqs = SndpRequirements::from_triples(&[(0, 4, 2)]).expect("static demand");
    let costs = vec![int(1), int(1), int(1), int(1), int(0), int(1)];
    Instance::new(g, costs, Requirement::Sndp(reqs))
        .expect("static instance")
        .with_names(["s", "u", "v", "w", "t"].map(String::from).to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomParams {
    pub n: usize,
    pub m: usize,
    pub reqs: usize,
    pub rmax: u32,
    pub cmax: u32,
    pub seed: u64,
}

/// Seeded random SNDP instance. When m ≥ n - 1 the first n - 1 edges form a
/// random spanning tree; the rest join random distinct pairs.
pub fn random_instance(p: &RandomParams) -> crate::Result<Instance> {
    if p.n < 2 && (p.m > 0 || p.reqs > 0) {
        return Err(crate::Error::InvalidRequirement(
            "edges and demands need at least two nodes".into(),
        ));
    }
    if p.rmax == 0 && p.reqs > 0 {
        return Err(crate::Error::InvalidRequirement(
            "rmax must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut g = Multigraph::new(p.n);
    let mut costs = Vec::with_capacity(p.m);
    let pair = |rng: &mut ChaCha8Rng| {
        let u = rng.gen_range(0..p.n);
        let mut v = rng.gen_range(0..p.n - 1);
        if v >= u {
            v += 1;
        }
        (u, v)
    };
    for i in 0..p.m {
        let (u, v) = if p.m + 1 >= p.n && i + 1 < p.n {
            (rng.gen_range(0..=i), i + 1)
        } else {
            pair(&mut rng)
        };
        g.add_edge(u, v)?;
        costs.push(int(i64::from(rng.gen_range(0..=p.cmax))));
    }
    let mut demands = Vec::with_capacity(p.reqs);
    for _ in 0..p.reqs {
        let (s, t) = pair(&mut rng);
        demands.push(Demand {
            s,
            t,
            r: rng.gen_range(1..=p.rmax),
        });
    }
    Instance::new(g, costs, Requirement::Sndp(SndpRequirements::new(demands)?))
}

/// Reads `edge u v [...]` or `u v` lines; `key=value` lines, comments, and
/// blank lines are skipped. Parallel edges are matched to unused ids in order.
pub fn parse_solution(inst: &Instance, text: &str) -> Result<EdgeSet, ParseError> {
    let ids: HashMap<&str, usize> = inst
        .names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let mut out = EdgeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut toks: Vec<&str> = content.split_whitespace().collect();
        if toks.is_empty() || toks.iter().all(|t| t.contains('=')) {
            continue;
        }
        if toks[0] == "edge" {
            toks.remove(0);
        }
        let (Some(u), Some(v)) = (toks.first(), toks.get(1)) else {
            return Err(syntax(line, "expected `<u> <v>`"));
        };
        let lookup = |name: &str| {
            ids.get(name)
                .copied()
                .ok_or_else(|| syntax(line, format!("unknown node {name}")))
        };
        let (u, v) = (lookup(u)?, lookup(v)?);
        let id = inst
            .graph
            .edges()
            .iter()
            .find(|e| ((e.u, e.v) == (u, v) || (e.u, e.v) == (v, u)) && !out.contains(e.id))
            .map(|e| e.id)
            .ok_or_else(|| syntax(line, "no unused edge between these nodes"))?;
        out.insert(id);
    }
    Ok(out)
}

#[derive(Debug, Parser)]
#[command(
    name = "crsndp",
    about = "Cut-relative survivable network design",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Cut,
    Path,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Cut => Model::CutRelative,
            ModelArg::Path => Model::PathRelative,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Iterative rounding
    Solve { file: PathBuf },
    /// Extreme-point optimum of the LP relaxation
    Lp {
        file: PathBuf,
        /// Print the working cut constraints
        #[arg(long)]
        dump: bool,
    },
    /// Check an edge set against one of the two relative models
    Verify {
        file: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, value_enum)]
        model: ModelArg,
    },
    /// Brute-force optimum over all edge subsets
    Exact {
        file: PathBuf,
        #[arg(long, value_enum)]
        model: ModelArg,
    },
    /// Canonical decomposition tree, leaf partition, and forced edges
    Decompose { file: PathBuf },
    /// Write an instance file to stdout
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Debug, Subcommand)]
enum GenKind {
    Nolam,
    Kecss {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: u32,
    },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        reqs: usize,
        #[arg(long)]
        rmax: u32,
        #[arg(long, default_value_t = 9)]
        cmax: u32,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("{0}: {1}")]
    Parse(PathBuf, ParseError),
    #[error(transparent)]
    Core(#[from] crate::Error),
    #[error("write failed: {0}")]
    Output(#[from] std::io::Error),
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn load(path: &Path) -> Result<Instance, CliError> {
    parse_instance(&read(path)?).map_err(|e| CliError::Parse(path.to_path_buf(), e))
}

fn edge_lines(inst: &Instance, edges: &EdgeSet) -> String {
    let mut out = String::new();
    for id in edges.iter() {
        let e = inst.graph.edge(id).expect("solution edge exists");
        let _ = writeln!(
            out,
            "edge {} {} {}",
            inst.name(e.u),
            inst.name(e.v),
            fmt_exact(&inst.costs[id])
        );
    }
    out
}

fn named_set(inst: &Instance, s: &NodeSet) -> String {
    let names: Vec<&str> = s.iter().map(|x| inst.name(x)).collect();
    format!("{{{}}}", names.join(","))
}

fn named_edges(inst: &Instance, edges: &EdgeSet) -> String {
    let names: Vec<String> = edges
        .iter()
        .map(|id| {
            let e = inst.graph.edge(id).expect("edge exists");
            format!("{}-{}", inst.name(e.u), inst.name(e.v))
        })
        .collect();
    format!("{{{}}}", names.join(","))
}

/// Parses `args` (program name first), runs the command, and returns the
/// exit code: 0 for success or a feasible verdict, 1 for an infeasible
/// verdict, 2 for usage, parse, or size errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Solve { file } => {
            let inst = load(&file)?;
            let sol = crndp_alg(&inst)?;
            let ratio = if sol.lp_bound.is_zero() {
                int(1)
            } else {
                &sol.cost / &sol.lp_bound
            };
            writeln!(
                out,
                "cost={} lp={} ratio={}",
                fmt_exact(&sol.cost),
                fmt_exact(&sol.lp_bound),
                fmt_decimal(&ratio, 4)
            )?;
            write!(out, "{}", edge_lines(&inst, &sol.edges))?;
            Ok(0)
        }
        Command::Lp { file, dump } => {
            let inst = load(&file)?;
            let solved = solve_crlp_with(
                &inst.oracle(),
                &inst.graph,
                &inst.costs,
                &EdgeSet::new(),
                Default::default(),
            )?;
            writeln!(out, "lp={}", fmt_exact(&solved.solution.objective))?;
            for e in inst.graph.edges() {
                writeln!(
                    out,
                    "x {} {} {}",
                    inst.name(e.u),
                    inst.name(e.v),
                    fmt_exact(&solved.solution.x[e.id])
                )?;
            }
            if dump {
                write!(out, "{}", solved.dump(|x| inst.name(x).to_string()))?;
            }
            Ok(0)
        }
        Command::Verify {
            file,
            solution,
            model,
        } => {
            let inst = load(&file)?;
            let h = parse_solution(&inst, &read(&solution)?)
                .map_err(|e| CliError::Parse(solution.clone(), e))?;
            let report = match Model::from(model) {
                Model::CutRelative => check_cut_relative(&inst, &h)?,
                Model::PathRelative => check_path_relative(&inst, &h)?,
            };
            if report.feasible {
                writeln!(out, "feasible")?;
                return Ok(0);
            }
            writeln!(out, "infeasible")?;
            match report.witness {
                Some(Witness::Cut { side, have, need }) => writeln!(
                    out,
                    "witness cut S={} have={have} need={need}",
                    named_set(&inst, &side)
                )?,
                Some(Witness::Path { faults, s, t, .. }) => writeln!(
                    out,
                    "witness faults={} pair={},{}",
                    named_edges(&inst, &faults),
                    inst.name(s),
                    inst.name(t)
                )?,
                None => {}
            }
            Ok(1)
        }
        Command::Exact { file, model } => {
            let inst = load(&file)?;
            let (cost, h) = exact_opt(&inst, model.into())?;
            writeln!(out, "cost={}", fmt_exact(&cost))?;
            write!(out, "{}", edge_lines(&inst, &h))?;
            Ok(0)
        }
        Command::Decompose { file } => {
            let inst = load(&file)?;
            let tree = decompose_instance(&inst)?;
            write!(out, "{}", tree.dump(|x| inst.name(x).to_string()))?;
            let d = leaf_instances(&tree);
            let parts: Vec<String> = d.partition().iter().map(|p| named_set(&inst, p)).collect();
            writeln!(out, "partition {}", parts.join(" "))?;
            writeln!(out, "Z={}", named_edges(&inst, &d.forced_edges))?;
            Ok(0)
        }
        Command::Gen { kind } => {
            let inst = match kind {
                GenKind::Nolam => nolam_instance(),
                GenKind::Kecss { graph, k } => {
                    let base = load(&graph)?;
                    let red = kecss_reduction(&base.graph, &base.costs, k)?;
                    let mut names = base.names.clone();
                    for stem in ["s", "t"] {
                        let mut name = stem.to_string();
                        while names.contains(&name) {
                            name.push('\'');
                        }
                        names.push(name);
                    }
                    red.with_names(names)
                }
                GenKind::Random {
                    n,
                    m,
                    reqs,
                    rmax,
                    cmax,
                    seed,
                } => random_instance(&RandomParams {
                    n,
                    m,
                    reqs,
                    rmax,
                    cmax,
                    seed,
                })?,
            };
            write!(out, "{}", print_instance(&inst)?)?;
            Ok(0)
        }
    }
}
