//! Command-line front end: `solve`, `generate`, `bench` and `oracle-check`.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dominance::{read_tradeoffs, render_tradeoffs, TradeoffSet};
use crate::generator::{generate_moid, generate_tradeoffs, MoidParams, TradeoffParams};
use crate::model::{
    policy_expected_utility, read_diagram, write_diagram, InfluenceDiagram, Policy,
};
use crate::solver::{
    induced_width, legal_elimination_order, solve, LimitKind, PolicyEnumeration, SolveError,
    SolveReport, SolverLimits, DEFAULT_POLICY_CAP,
};
use crate::utility::{convex_equivalent, maximal_indices, DominanceRelation, UtilityVector};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ORACLE_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

/// Tolerance on mutual convex dominance in oracle checks.
const ORACLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "moid",
    version,
    about = "Multi-objective influence diagram solver"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one diagram and write a JSON report.
    Solve(SolveArgs),
    /// Generate random diagrams (and optionally tradeoff sets).
    Generate(GenerateArgs),
    /// Benchmark a grid of random classes and write a CSV table.
    Bench(BenchArgs),
    /// Compare the solver against exhaustive policy enumeration.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Pareto,
    Epsilon,
    Tradeoff,
}

impl fmt::Display for ModeArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModeArg::Pareto => "pareto",
            ModeArg::Epsilon => "epsilon",
            ModeArg::Tradeoff => "tradeoff",
        })
    }
}

/// `C,D,k,p,r,a,O`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassSpec(pub MoidParams);

impl FromStr for ClassSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|e| format!("`{x}`: {e}")))
            .collect::<Result<_, _>>()?;
        let [chance, decisions, max_domain, parents, roots, arity, objectives] = parts[..] else {
            return Err(format!(
                "expected 7 comma-separated integers C,D,k,p,r,a,O, got {}",
                parts.len()
            ));
        };
        let params = MoidParams {
            chance,
            decisions,
            max_domain,
            parents,
            roots,
            arity,
            objectives,
            seed: 0,
        };
        params.validate().map_err(|e| e.to_string())?;
        Ok(ClassSpec(params))
    }
}

impl ClassSpec {
    pub fn label(&self) -> String {
        format!(
            "({},{},{})",
            self.0.chance, self.0.decisions, self.0.objectives
        )
    }

    pub fn with_seed(&self, seed: u64) -> MoidParams {
        MoidParams { seed, ..self.0 }
    }
}

#[derive(Debug, Clone, Args)]
pub struct LimitArgs {
    /// Time limit per solve, in seconds.
    #[arg(long, env = "MOID_TIME_LIMIT", default_value_t = 1200.0)]
    pub time_limit: f64,
    /// Memory limit per solve, in bytes (suffixes K, M, G accepted).
    #[arg(long, env = "MOID_MEMORY_LIMIT", default_value = "8G", value_parser = parse_bytes)]
    pub memory_limit: u64,
}

impl LimitArgs {
    fn limits(&self) -> Result<SolverLimits> {
        if !self.time_limit.is_finite() || self.time_limit <= 0.0 {
            bail!("time limit must be positive");
        }
        if self.memory_limit == 0 {
            bail!("memory limit must be positive");
        }
        Ok(SolverLimits {
            time_limit: Duration::from_secs_f64(self.time_limit),
            memory_limit: self.memory_limit,
        })
    }
}

fn parse_bytes(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let (digits, mult) = match s.chars().last().map(|c| c.to_ascii_uppercase()) {
        Some('K') => (&s[..s.len() - 1], 1u64 << 10),
        Some('M') => (&s[..s.len() - 1], 1 << 20),
        Some('G') => (&s[..s.len() - 1], 1 << 30),
        _ => (s, 1),
    };
    digits
        .trim()
        .parse::<u64>()
        .map_err(|e| format!("`{s}`: {e}"))?
        .checked_mul(mult)
        .ok_or_else(|| format!("`{s}` overflows"))
}

/// Parameters for randomly drawn tradeoff sets.
#[derive(Debug, Clone, Args)]
pub struct TradeoffArgs {
    /// Number of objective pairs K.
    #[arg(long, default_value_t = 2)]
    pub pairs: usize,
    /// Number of objective triplets T.
    #[arg(long, default_value_t = 1)]
    pub triplets: usize,
    /// Coefficient range `lo,hi` within [0, 1).
    #[arg(long, default_value = "0.1,0.9", value_parser = parse_range)]
    pub coef_range: (f64, f64),
    /// Fixed reverse-pair strength c; drawn from the range when omitted.
    #[arg(long)]
    pub strength: Option<f64>,
}

impl TradeoffArgs {
    /// Parameters for a diagram with `p` objectives; triplets are dropped
    /// when `p < 3`.
    fn params(&self, seed: u64, p: usize) -> TradeoffParams {
        TradeoffParams {
            pairs: self.pairs,
            triplets: if p < 3 { 0 } else { self.triplets },
            range: self.coef_range,
            strength: self.strength,
            seed,
        }
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected lo,hi, got `{s}`"))?;
    let lo = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((lo, hi))
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Diagram document.
    #[arg(long)]
    pub input: PathBuf,
    /// Pruning relation.
    #[arg(long, value_enum, default_value_t = ModeArg::Pareto)]
    pub mode: ModeArg,
    /// Covering precision (epsilon mode only).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Tradeoff document (tradeoff mode only).
    #[arg(long)]
    pub tradeoffs: Option<PathBuf>,
    /// Base seed for instances, tradeoffs and tie-breaking.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Report path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    /// Random class `C,D,k,p,r,a,O`.
    #[arg(long)]
    pub class: ClassSpec,
    /// Number of diagrams; instance i uses seed + i.
    #[arg(long, default_value_t = 1)]
    pub instances: usize,
    /// Base seed for instances, tradeoffs and tie-breaking.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write a random tradeoff set next to every diagram.
    #[arg(long)]
    pub with_tradeoffs: bool,
    #[command(flatten)]
    pub tradeoff: TradeoffArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Random class `C,D,k,p,r,a,O`; repeatable.
    #[arg(long)]
    pub class: Vec<ClassSpec>,
    /// Fixed diagram benchmarked as its own class; repeatable.
    #[arg(long)]
    pub input: Vec<PathBuf>,
    /// Instances per random class.
    #[arg(long, default_value_t = 20)]
    pub instances: usize,
    /// Modes to run, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "pareto")]
    pub modes: Vec<ModeArg>,
    /// Epsilon values for epsilon mode, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.1,0.3")]
    pub epsilon: Vec<f64>,
    /// Tradeoff document used instead of random tradeoffs.
    /// Tradeoff document used instead of random tradeoffs.
    #[arg(long)]
    pub tradeoffs: Option<PathBuf>,
    #[command(flatten)]
    pub tradeoff: TradeoffArgs,
    /// Base seed for instances, tradeoffs and tie-breaking.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// CSV path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Random class `C,D,k,p,r,a,O`; repeatable.
    #[arg(long)]
    pub class: Vec<ClassSpec>,
    /// Fixed diagram checked on its own; repeatable.
    #[arg(long)]
    pub input: Vec<PathBuf>,
    /// Instances per random class.
    #[arg(long, default_value_t = 20)]
    pub instances: usize,
    /// Modes to check, comma separated.
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "pareto,epsilon,tradeoff"
    )]
    pub modes: Vec<ModeArg>,
    /// Epsilon values for epsilon mode, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.1,0.3")]
    pub epsilon: Vec<f64>,
    /// Tradeoff document used instead of random tradeoffs.
    #[arg(long)]
    pub tradeoffs: Option<PathBuf>,
    #[command(flatten)]
    pub tradeoff: TradeoffArgs,
    /// Base seed for instances, tradeoffs and tie-breaking.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest policy count the oracle will enumerate.
    #[arg(long, default_value_t = DEFAULT_POLICY_CAP)]
    pub cap: u64,
    #[command(flatten)]
    pub limits: LimitArgs,
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_INPUT
        }
    }
}

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Solve(a) => cmd_solve(&a),
        Command::Generate(a) => cmd_generate(&a),
        Command::Bench(a) => cmd_bench(&a),
        Command::OracleCheck(a) => cmd_oracle_check(&a),
    }
}

/// Rounds to six significant digits.
pub fn sig6(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    let mag = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(5 - mag);
    let r = (x * scale).round() / scale;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn vector_json(u: &UtilityVector) -> Value {
    Value::from(u.coords().iter().map(|&c| sig6(c)).collect::<Vec<f64>>())
}

fn policy_json(d: &InfluenceDiagram, policy: &Policy) -> Value {
    Value::from(
        policy
            .rules
            .iter()
            .map(|r| {
                let var = &d.variables[r.decision];
                json!({
                    "decision": var.name,
                    "parents": r.parents.iter().map(|&p| d.variables[p].name.clone()).collect::<Vec<_>>(),
                    "choices": r.choices.iter().map(|&c| var.domain[c].clone()).collect::<Vec<_>>(),
                })
            })
            .collect::<Vec<_>>(),
    )
}

/// JSON report for a successful solve.
pub fn report_json(d: &InfluenceDiagram, r: &SolveReport) -> Value {
    json!({
        "status": "solved",
        "diagram": d.name,
        "mode": r.mode,
        "seed": r.seed,
        "objectives": d.objectives,
        "maximal_utilities": r.maximal_utilities.iter().map(vector_json).collect::<Vec<_>>(),
        "policy": policy_json(d, &r.policy),
        "induced_width": r.induced_width,
        "wall_time_s": sig6(r.wall_time.as_secs_f64()),
        "set_size_trace": r.set_size_trace,
        "elimination_order": r.order.sequence.iter().map(|&v| d.variables[v].name.clone()).collect::<Vec<_>>(),
    })
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn relation_for(
    mode: ModeArg,
    epsilon: Option<f64>,
    tradeoffs: Option<&Path>,
    d: &InfluenceDiagram,
) -> Result<DominanceRelation> {
    Ok(match mode {
        ModeArg::Pareto => DominanceRelation::Pareto,
        ModeArg::Epsilon => {
            let eps = epsilon.context("--epsilon is required in epsilon mode")?;
            DominanceRelation::epsilon(eps)?
        }
        ModeArg::Tradeoff => {
            let path = tradeoffs.context("--tradeoffs is required in tradeoff mode")?;
            DominanceRelation::tradeoff(load_tradeoffs_for(path, d)?)
        }
    })
}

fn load_tradeoffs_for(path: &Path, d: &InfluenceDiagram) -> Result<TradeoffSet> {
    let (objectives, theta) = read_tradeoffs(path)?;
    if objectives != d.objectives {
        bail!(
            "objectives in {} do not match the diagram's objectives",
            path.display()
        );
    }
    Ok(theta)
}

fn cmd_solve(a: &SolveArgs) -> Result<i32> {
    let d = read_diagram(&a.input)?;
    let limits = a.limits.limits()?;
    let rel = relation_for(a.mode, a.epsilon, a.tradeoffs.as_deref(), &d)?;
    match solve(&d, &rel, &limits, a.seed) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report_json(&d, &report))? + "\n";
            write_output(a.out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Err(SolveError::LimitExceeded {
            kind,
            elapsed,
            completed_buckets,
            set_size_trace,
        }) => {
            let doc = json!({
                "status": "limit_exceeded",
                "diagram": d.name,
                "limit": kind,
                "elapsed_s": sig6(elapsed),
                "completed_buckets": completed_buckets,
                "set_size_trace": set_size_trace,
                "seed": a.seed,
            });
            write_output(
                a.out.as_deref(),
                &(serde_json::to_string_pretty(&doc)? + "\n"),
            )?;
            eprintln!(
                "error: {} limit exceeded",
                match kind {
                    LimitKind::Time => "time",
                    LimitKind::Memory => "memory",
                }
            );
            Ok(EXIT_LIMIT)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_generate(a: &GenerateArgs) -> Result<i32> {
    std::fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    for i in 0..a.instances {
        let seed = a.seed.wrapping_add(i as u64);
        let d = generate_moid(&a.class.with_seed(seed))?;
        let stem = &d.name;
        write_diagram(&a.out.join(format!("{stem}.json")), &d)?;
        if a.with_tradeoffs {
            let theta = generate_tradeoffs(
                &a.tradeoff.params(seed, d.num_objectives()),
                d.num_objectives(),
            )?;
            let path = a.out.join(format!("{stem}.tradeoffs.json"));
            std::fs::write(&path, render_tradeoffs(&d.objectives, &theta) + "\n")
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(EXIT_OK)
}

/// One benchmark population: a random class or a fixed diagram.
#[derive(Debug, Clone)]
enum Population {
    Class(ClassSpec),
    File(PathBuf, InfluenceDiagram),
}

impl Population {
    fn label(&self) -> String {
        match self {
            Population::Class(c) => c.label(),
            Population::File(p, _) => p.file_stem().map_or_else(
                || p.display().to_string(),
                |s| s.to_string_lossy().into_owned(),
            ),
        }
    }

    fn instance(&self, seed: u64) -> Result<InfluenceDiagram> {
        Ok(match self {
            Population::Class(c) => generate_moid(&c.with_seed(seed))?,
            Population::File(_, d) => d.clone(),
        })
    }
}

fn populations(classes: &[ClassSpec], inputs: &[PathBuf]) -> Result<Vec<Population>> {
    let mut out: Vec<Population> = classes.iter().copied().map(Population::Class).collect();
    for p in inputs {
        out.push(Population::File(p.clone(), read_diagram(p)?));
    }
    Ok(out)
}

/// Seed of instance `i` of population `k`.
fn instance_seed(base: u64, k: usize, i: usize) -> u64 {
    base.wrapping_add((k as u64) << 32).wrapping_add(i as u64)
}

/// One `(mode, ε)` column of the benchmark grid.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Setting {
    Pareto,
    Epsilon(f64),
    Tradeoff,
}

fn settings(modes: &[ModeArg], eps: &[f64]) -> Result<Vec<Setting>> {
    let mut out = Vec::new();
    for m in modes {
        match m {
            ModeArg::Pareto => out.push(Setting::Pareto),
            ModeArg::Tradeoff => out.push(Setting::Tradeoff),
            ModeArg::Epsilon => {
                if eps.is_empty() {
                    bail!("epsilon mode needs at least one --epsilon value");
                }
                out.extend(eps.iter().map(|&e| Setting::Epsilon(e)));
            }
        }
    }
    Ok(out)
}

/// One row of the benchmark table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub class: String,
    pub mode: String,
    pub epsilon: Option<f64>,
    pub w_star: f64,
    pub solved: usize,
    pub time_s: Option<f64>,
    pub avg: Option<f64>,
    pub stdev: Option<f64>,
    pub med: Option<usize>,
}

/// Mean, population standard deviation and lower median.
pub fn summarize(sizes: &[usize]) -> Option<(f64, f64, usize)> {
    if sizes.is_empty() {
        return None;
    }
    let n = sizes.len() as f64;
    let mean = sizes.iter().sum::<usize>() as f64 / n;
    let var = sizes
        .iter()
        .map(|&s| (s as f64 - mean).powi(2))
        .sum::<f64>()
        / n;
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    Some((mean, var.sqrt(), sorted[(sorted.len() - 1) / 2]))
}

struct Outcome {
    width: usize,
    solved: Option<(usize, f64)>,
}

fn bench_instance(
    d: &InfluenceDiagram,
    setting: Setting,
    theta: Option<&TradeoffSet>,
    tradeoff: &TradeoffArgs,
    limits: &SolverLimits,
    seed: u64,
) -> Result<Outcome> {
    let width = induced_width(d, &legal_elimination_order(d));
    let rel = match setting {
        Setting::Pareto => DominanceRelation::Pareto,
        Setting::Epsilon(e) => DominanceRelation::epsilon(e)?,
        Setting::Tradeoff => DominanceRelation::tradeoff(match theta {
            Some(t) => t.clone(),
            None => generate_tradeoffs(
                &tradeoff.params(seed, d.num_objectives()),
                d.num_objectives(),
            )?,
        }),
    };
    match solve(d, &rel, limits, seed) {
        Ok(r) => Ok(Outcome {
            width,
            solved: Some((r.maximal_utilities.len(), r.wall_time.as_secs_f64())),
        }),
        Err(SolveError::LimitExceeded { .. }) => Ok(Outcome {
            width,
            solved: None,
        }),
        Err(e) => Err(e.into()),
    }
}

/// Runs the benchmark grid. Rows come out in (population, mode, ε) order.
pub fn bench_rows(a: &BenchArgs) -> Result<Vec<BenchRow>> {
    let limits = a.limits.limits()?;
    let pops = populations(&a.class, &a.input)?;
    let grid = settings(&a.modes, &a.epsilon)?;
    let mut rows = Vec::new();
    if a.instances == 0 {
        return Ok(rows);
    }
    for (k, pop) in pops.iter().enumerate() {
        let instances: Vec<(u64, InfluenceDiagram)> = (0..a.instances)
            .map(|i| {
                let seed = instance_seed(a.seed, k, i);
                pop.instance(seed).map(|d| (seed, d))
            })
            .collect::<Result<_>>()?;
        let theta = match &a.tradeoffs {
            Some(p) if grid.contains(&Setting::Tradeoff) => {
                Some(load_tradeoffs_for(p, &instances[0].1)?)
            }
            _ => None,
        };
        for &setting in &grid {
            let outcomes: Vec<Outcome> = instances
                .par_iter()
                .map(|(seed, d)| {
                    bench_instance(d, setting, theta.as_ref(), &a.tradeoff, &limits, *seed)
                })
                .collect::<Result<_>>()?;
            let w_star =
                outcomes.iter().map(|o| o.width as f64).sum::<f64>() / outcomes.len() as f64;
            let solved: Vec<(usize, f64)> = outcomes.iter().filter_map(|o| o.solved).collect();
            let sizes: Vec<usize> = solved.iter().map(|s| s.0).collect();
            let stats = summarize(&sizes);
            let (mode, epsilon) = match setting {
                Setting::Pareto => ("pareto", None),
                Setting::Epsilon(e) => ("epsilon", Some(e)),
                Setting::Tradeoff => ("tradeoff", None),
            };
            rows.push(BenchRow {
                class: pop.label(),
                mode: mode.to_string(),
                epsilon,
                w_star,
                solved: solved.len(),
                time_s: (!solved.is_empty())
                    .then(|| solved.iter().map(|s| s.1).sum::<f64>() / solved.len() as f64),
                avg: stats.map(|s| s.0),
                stdev: stats.map(|s| s.1),
                med: stats.map(|s| s.2),
            });
        }
    }
    Ok(rows)
}

/// Renders rows as CSV with the fixed column order.
pub fn bench_csv(rows: &[BenchRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "class", "mode", "epsilon", "w_star", "solved", "time_s", "avg", "stdev", "med",
    ])?;
    let num = |x: Option<f64>| x.map_or_else(String::new, |v| sig6(v).to_string());
    for r in rows {
        w.write_record([
            r.class.clone(),
            r.mode.clone(),
            num(r.epsilon),
            num(Some(r.w_star)),
            r.solved.to_string(),
            num(r.time_s),
            num(r.avg),
            num(r.stdev),
            r.med.map_or_else(String::new, |m| m.to_string()),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn cmd_bench(a: &BenchArgs) -> Result<i32> {
    let rows = bench_rows(a)?;
    write_output(a.out.as_deref(), &bench_csv(&rows)?)?;
    Ok(EXIT_OK)
}

/// Outcome of one oracle comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    Fail(String),
    Refused(String),
}

/// True when every vector of `target` is `(1+ε)`-dominated by one of
/// `cover` (internal senses).
pub fn covers(cover: &[UtilityVector], target: &[UtilityVector], epsilon: f64) -> bool {
    target.iter().all(|v| {
        cover.iter().any(|u| {
            u.coords()
                .iter()
                .zip(v.coords())
                .all(|(&a, &b)| (1.0 + epsilon) * a >= b - 1e-9 * b.abs().max(1.0))
        })
    })
}

/// Compares the solver with exhaustive enumeration on one diagram.
pub fn oracle_verdict(
    d: &InfluenceDiagram,
    setting: OracleSetting,
    theta: Option<&TradeoffSet>,
    limits: &SolverLimits,
    seed: u64,
    cap: u64,
) -> Result<Verdict> {
    let all = match PolicyEnumeration::new(d, cap) {
        Ok(all) => all,
        Err(e @ (SolveError::PolicyCap { .. } | SolveError::JointTooLarge(_))) => {
            return Ok(Verdict::Refused(e.to_string()))
        }
        Err(e) => return Err(e.into()),
    };
    let pareto: Vec<UtilityVector> = maximal_indices(&all.utilities, &DominanceRelation::Pareto)?
        .into_iter()
        .map(|i| all.utilities[i].clone())
        .collect();
    let verdict = match setting {
        OracleSetting::Pareto => {
            let r = solve(d, &DominanceRelation::Pareto, limits, seed)?;
            let got = r.internal.elements();
            if !convex_equivalent(got, &pareto, ORACLE_TOLERANCE)? {
                Verdict::Fail(format!(
                    "solver returned {} vectors, oracle {}",
                    got.len(),
                    pareto.len()
                ))
            } else {
                let eu = policy_expected_utility(d, &r.policy)?;
                if got
                    .iter()
                    .any(|u| u.sub(&eu).coords().iter().all(|c| c.abs() <= 1e-6))
                {
                    Verdict::Pass
                } else {
                    Verdict::Fail("reported policy does not attain a reported vector".into())
                }
            }
        }
        OracleSetting::Epsilon(eps) => {
            let r = solve(d, &DominanceRelation::epsilon(eps)?, limits, seed)?;
            if covers(r.internal.elements(), &pareto, eps) {
                Verdict::Pass
            } else {
                Verdict::Fail(format!(
                    "output of size {} is not an {eps}-covering",
                    r.internal.len()
                ))
            }
        }
        OracleSetting::Tradeoff => {
            let theta = match theta {
                Some(t) => t.clone(),
                None => return Err(anyhow::anyhow!("tradeoff oracle needs a tradeoff set")),
            };
            let rel = DominanceRelation::tradeoff(theta);
            let r = solve(d, &rel, limits, seed)?;
            let expected: Vec<UtilityVector> = maximal_indices(&all.utilities, &rel)?
                .into_iter()
                .map(|i| all.utilities[i].clone())
                .collect();
            let got = r.internal.elements();
            if got.len() > pareto.len() {
                Verdict::Fail(format!(
                    "tradeoff output larger than the Pareto set ({} > {})",
                    got.len(),
                    pareto.len()
                ))
            } else if convex_equivalent(got, &expected, ORACLE_TOLERANCE)? {
                Verdict::Pass
            } else {
                Verdict::Fail(format!(
                    "solver returned {} vectors, oracle {}",
                    got.len(),
                    expected.len()
                ))
            }
        }
    };
    Ok(verdict)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleSetting {
    Pareto,
    Epsilon(f64),
    Tradeoff,
}

fn cmd_oracle_check(a: &OracleArgs) -> Result<i32> {
    let limits = a.limits.limits()?;
    let pops = populations(&a.class, &a.input)?;
    let grid: Vec<OracleSetting> = settings(&a.modes, &a.epsilon)?
        .into_iter()
        .map(|s| match s {
            Setting::Pareto => OracleSetting::Pareto,
            Setting::Epsilon(e) => OracleSetting::Epsilon(e),
            Setting::Tradeoff => OracleSetting::Tradeoff,
        })
        .collect();
    let (mut passed, mut failed, mut refused) = (0, 0, 0);
    for (k, pop) in pops.iter().enumerate() {
        let count = match pop {
            Population::Class(_) => a.instances,
            Population::File(..) => 1,
        };
        for i in 0..count {
            let seed = instance_seed(a.seed, k, i);
            let d = pop.instance(seed)?;
            let theta = match (&a.tradeoffs, grid.contains(&OracleSetting::Tradeoff)) {
                (_, false) => None,
                (Some(p), true) => Some(load_tradeoffs_for(p, &d)?),
                (None, true) if d.num_objectives() >= 2 => Some(generate_tradeoffs(
                    &a.tradeoff.params(seed, d.num_objectives()),
                    d.num_objectives(),
                )?),
                (None, true) => None,
            };
            for &setting in &grid {
                let label = match setting {
                    OracleSetting::Pareto => "pareto".to_string(),
                    OracleSetting::Epsilon(e) => format!("epsilon={e}"),
                    OracleSetting::Tradeoff => "tradeoff".to_string(),
                };
                let verdict = if setting == OracleSetting::Epsilon(0.0) {
                    Verdict::Refused("epsilon must be positive".into())
                } else if setting == OracleSetting::Tradeoff && theta.is_none() {
                    Verdict::Refused("tradeoffs need at least two objectives".into())
                } else {
                    match oracle_verdict(&d, setting, theta.as_ref(), &limits, seed, a.cap) {
                        Ok(v) => v,
                        Err(e) => Verdict::Refused(format!("{e:#}")),
                    }
                };
                let (tag, detail) = match &verdict {
                    Verdict::Pass => {
                        passed += 1;
                        ("pass", String::new())
                    }
                    Verdict::Fail(m) => {
                        failed += 1;
                        ("FAIL", format!(": {m}"))
                    }
                    Verdict::Refused(m) => {
                        refused += 1;
                        ("refused", format!(": {m}"))
                    }
                };
                println!("{} seed={seed} {label}: {tag}{detail}", pop.label());
            }
        }
    }
    let checked = passed + failed;
    println!("passed {passed}/{checked} ({refused} refused)");
    Ok(if failed > 0 {
        EXIT_ORACLE_FAILURE
    } else {
        EXIT_OK
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig6(17.56), 17.56);
        assert_eq!(sig6(1234567.0), 1234570.0);
        assert_eq!(sig6(0.000123456789), 0.000123457);
        assert_eq!(sig6(-22.5), -22.5);
        assert_eq!(sig6(0.0), 0.0);
        assert!(sig6(-0.0).is_sign_positive());
    }

    #[test]
    fn statistics() {
        assert_eq!(summarize(&[]), None);
        assert_eq!(summarize(&[4]), Some((4.0, 0.0, 4)));
        let (mean, sd, med) = summarize(&[1, 2, 3, 10]).unwrap();
        assert_eq!(mean, 4.0);
        assert!((sd - 12.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(med, 2);
    }

    #[test]
    fn class_spec_parsing() {
        let c: ClassSpec = "15,5,2,2,5,3,2".parse().unwrap();
        assert_eq!(c.label(), "(15,5,2)");
        assert!("15,5,2".parse::<ClassSpec>().is_err());
        assert!("15,5,1,2,5,3,2".parse::<ClassSpec>().is_err());
        assert!("a,5,2,2,5,3,2".parse::<ClassSpec>().is_err());
    }

    #[test]
    fn byte_sizes() {
        assert_eq!(parse_bytes("512"), Ok(512));
        assert_eq!(parse_bytes("2K"), Ok(2048));
        assert_eq!(parse_bytes("1g"), Ok(1 << 30));
        assert!(parse_bytes("x").is_err());
    }
}
