//! The `setwise-kemeny` command line.
//!
//! Exit codes: 0 success, 1 a verification suite failed, 2 the input file
//! could not be read or parsed, 3 invalid flags or a refused search size,
//! 4 a constraint cycle.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

use crate::distance::{ranking_distance, Rule};
use crate::error::Error;
use crate::experiments::{run_simulation, to_csv, SimulationConfig, DEFAULT_SEED};
use crate::lp::{
    build_lemma_lp1, star_sweep, verify_second_best_bounds, verify_six_candidate_rule,
};
use crate::model::{AlternativeRegistry, ConstraintSet, Profile, Ranking};
use crate::preflib;
use crate::reduction::{
    consensus_levels, reduction_rate_bound, run_method, run_method_with, GuaranteeTag, Method,
    ReductionReport,
};
use crate::solver::{
    brute_force_medians, constrained_medians, MedianResult, SearchOptions, DEFAULT_BRUTE_FORCE_CAP,
    DEFAULT_CONSTRAINED_CAP,
};
use crate::stats::OrderStatistics;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_CYCLE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "setwise-kemeny",
    version,
    about = "Set-wise Kemeny rank aggregation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certify pair orders of the medians and report how much of the search space they fix.
    Analyze(AnalyzeArgs),
    /// Compute every median exactly.
    Solve(SolveArgs),
    /// Run an exact LP verification suite.
    Verify(VerifyArgs),
    /// Monte-Carlo solved-pair fractions on uniform profiles.
    Simulate(SimulateArgs),
    /// k-wise distance between two rankings given as files or `a>b>c` text.
    Dist(DistArgs),
}

#[derive(Debug, Clone, Copy)]
enum OutputFormat {
    Json,
    Table,
}

#[derive(Debug, Args)]
struct Output {
    /// Emit key-sorted JSON.
    #[arg(long, conflicts_with = "table")]
    json: bool,
    /// Emit a human-readable table (default).
    #[arg(long)]
    table: bool,
}

impl Output {
    fn format(&self) -> OutputFormat {
        if self.json {
            OutputFormat::Json
        } else {
            OutputFormat::Table
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodChoice {
    At,
    Mot,
    Imot,
    Mote,
    All,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    rule: u8,
    #[arg(long, value_enum, default_value_t = MethodChoice::All)]
    method: MethodChoice,
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Known orders, one `a > b > ...` chain of labels per line.
    #[arg(long)]
    seed_constraints: Option<PathBuf>,
    /// Also compute the median set by brute force (up to the default cap).
    #[arg(long)]
    medians: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    rule: u8,
    /// Restrict the search to orders certified by the iterated test of the rule.
    #[arg(long)]
    use_reduction: bool,
    /// Largest alternative count to search exhaustively.
    #[arg(long)]
    cap: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Lp1,
    Star,
    SecondBest,
    SixCandidate,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Largest alternative count for the `star` sweep.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u8).range(2..=5))]
    max_n: u8,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    instances: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Comma-separated method names.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "3AT,3MOT,3MOTe,Iterated3MOT"
    )]
    methods: Vec<String>,
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Also write the CSV summary to this path.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct DistArgs {
    a: String,
    b: String,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    k: u8,
    #[command(flatten)]
    output: Output,
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. }
            | Error::UnsupportedFormat(_)
            | Error::Validation(_)
            | Error::Io(_) => EXIT_PARSE,
            Error::Cycle(_) => EXIT_CYCLE,
            Error::Input(_) | Error::CapExceeded { .. } => EXIT_USAGE,
        };
        let message = match &e {
            Error::CapExceeded { alternatives, .. } => {
                format!("{e} (pass --cap {alternatives} or use --use-reduction)")
            }
            _ => e.to_string(),
        };
        Failure { code, message }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let informational =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let rendered = e.render().to_string();
            if informational {
                let _ = write!(out, "{rendered}");
                return EXIT_OK;
            }
            let _ = write!(err, "{rendered}");
            return EXIT_USAGE;
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => analyze(&a, out, err),
        Command::Solve(a) => solve(&a, out, err),
        Command::Verify(a) => verify(&a, out, err),
        Command::Simulate(a) => simulate(&a, out),
        Command::Dist(a) => dist(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn emit_json(out: &mut dyn Write, value: &impl Serialize) -> CliResult<()> {
    // `serde_json::Value` objects are ordered maps, so this sorts every key.
    let value: Value = serde_json::to_value(value).map_err(|e| usage(e.to_string()))?;
    let text = serde_json::to_string_pretty(&value).map_err(|e| usage(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| Failure {
        code: EXIT_PARSE,
        message: e.to_string(),
    })
}

fn write_lines(out: &mut dyn Write, lines: &[String]) -> CliResult<()> {
    for l in lines {
        writeln!(out, "{l}").map_err(|e| usage(e.to_string()))?;
    }
    Ok(())
}

fn rule_of(k: u8) -> Rule {
    if k == 2 {
        Rule::TwoWise
    } else {
        Rule::ThreeWise
    }
}

#[derive(Debug, Serialize)]
pub struct Fraction {
    pub count: u64,
    pub total: u64,
    pub value: f64,
}

impl Fraction {
    fn of(r: Ratio<u64>, total: u64) -> Self {
        let count = if *r.denom() == 0 {
            0
        } else {
            r.numer() * total / r.denom()
        };
        Fraction {
            count,
            total,
            value: r.to_f64().unwrap_or(0.0),
        }
    }

    fn render(&self) -> String {
        format!("{}/{} ({:.2}%)", self.count, self.total, 100.0 * self.value)
    }
}

#[derive(Debug, Serialize)]
pub struct LabeledPair {
    pub first: usize,
    pub second: usize,
    pub first_label: String,
    pub second_label: String,
    /// Round that produced the order, counting from 0; absent for seed
    /// constraints.
    pub iteration: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct InputDescriptor {
    pub path: String,
    pub num_alternatives: usize,
    pub num_voters: u64,
    pub complete: bool,
    pub labels: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct MethodReport {
    pub method: Method,
    pub guarantee: GuaranteeTag,
    pub solved_fraction: Fraction,
    pub raw_fraction: Fraction,
    pub iterations_used: usize,
    /// Orders certified directly by the test.
    pub certified: Vec<LabeledPair>,
    /// Further orders implied by transitivity (`EVERY_MEDIAN` methods only).
    pub implied: Vec<LabeledPair>,
}

#[derive(Debug, Serialize)]
pub struct ConsensusLevels {
    pub l_3mot: Fraction,
    pub l_3mot_star: Fraction,
}

#[derive(Debug, Serialize)]
pub struct RateBound {
    /// Largest solved fraction among the `EVERY_MEDIAN` methods run.
    pub p: f64,
    /// `None` when every pair is fixed.
    pub value: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct RankingView {
    pub order: Vec<usize>,
    pub labels: Vec<String>,
}

impl RankingView {
    fn new(r: &Ranking, registry: &AlternativeRegistry) -> Self {
        RankingView {
            order: r.order().to_vec(),
            labels: r
                .order()
                .iter()
                .map(|&i| registry.label(i).to_string())
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct MedianView {
    pub rule: Rule,
    pub optimal_value: u64,
    pub nodes_explored: u64,
    pub medians: Vec<RankingView>,
}

impl MedianView {
    fn new(res: &MedianResult, registry: &AlternativeRegistry) -> Self {
        MedianView {
            rule: res.rule,
            optimal_value: res.optimal_value,
            nodes_explored: res.nodes_explored,
            medians: res
                .medians
                .iter()
                .map(|r| RankingView::new(r, registry))
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub input: InputDescriptor,
    pub rule: Rule,
    pub methods: Vec<MethodReport>,
    /// 3-wise only.
    pub consensus_levels: Option<ConsensusLevels>,
    pub reduction_rate_bound: Option<RateBound>,
    pub medians: Option<MedianView>,
}

fn load_profile(path: &Path) -> CliResult<Profile> {
    Ok(preflib::load(path)?)
}

fn selected_methods(rule: Rule, choice: MethodChoice) -> CliResult<Vec<Method>> {
    use MethodChoice::*;
    Ok(match (rule, choice) {
        (Rule::ThreeWise, At) => vec![Method::At3],
        (Rule::ThreeWise, Mot) => vec![Method::Mot3],
        (Rule::ThreeWise, Imot) => vec![Method::Iterated3Mot],
        (Rule::ThreeWise, Mote) => vec![Method::Mot3e],
        (Rule::ThreeWise, All) => vec![
            Method::At3,
            Method::Mot3,
            Method::Mot3e,
            Method::Iterated3Mot,
        ],
        (Rule::TwoWise, Mot) => vec![Method::Mot],
        (Rule::TwoWise, Imot) => vec![Method::ImprovedIteratedMot],
        (Rule::TwoWise, All) => vec![
            Method::Mot,
            Method::IteratedMot,
            Method::ImprovedIteratedMot,
        ],
        (Rule::TwoWise, c) => {
            return Err(usage(
                format!("--method {c:?} has no 2-wise variant; use mot, imot or all")
                    .to_lowercase(),
            ))
        }
    })
}

fn read_seed_constraints(path: &Path, registry: &AlternativeRegistry) -> CliResult<ConstraintSet> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::from(Error::Io(format!("{}: {e}", path.display()))))?;
    let mut cs = ConstraintSet::new(registry.len());
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let chain = registry.parse_sequence(line).map_err(|e| {
            Failure::from(Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })
        })?;
        for w in chain.windows(2) {
            cs.insert(w[0], w[1])?;
        }
    }
    Ok(cs)
}

fn pair_view(
    registry: &AlternativeRegistry,
    x: usize,
    y: usize,
    iteration: Option<usize>,
) -> LabeledPair {
    LabeledPair {
        first: x,
        second: y,
        first_label: registry.label(x).to_string(),
        second_label: registry.label(y).to_string(),
        iteration,
    }
}

fn method_report(report: &ReductionReport, registry: &AlternativeRegistry) -> MethodReport {
    let n = report.num_alternatives as u64;
    let total = n * n.saturating_sub(1) / 2;
    let mut certified = Vec::new();
    let mut implied = Vec::new();
    for p in &report.provenance {
        let view = pair_view(registry, p.x, p.y, p.iteration);
        if p.direct {
            certified.push(view);
        } else {
            implied.push(view);
        }
    }
    MethodReport {
        method: report.method,
        guarantee: report.guarantee(),
        solved_fraction: Fraction::of(report.solved_fraction(), total),
        raw_fraction: Fraction::of(report.raw_fraction(), total),
        iterations_used: report.iterations_used,
        certified,
        implied,
    }
}

/// The certification theorems assume complete votes; on truncated ballots the
/// certified orders are a heuristic and may exclude some medians.
fn warn_if_incomplete(profile: &Profile, err: &mut dyn Write) {
    if !profile.is_complete() {
        let _ = writeln!(
            err,
            "warning: the profile has incomplete votes; certified orders are only guaranteed for complete votes"
        );
    }
}

fn analyze(a: &AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let rule = rule_of(a.rule);
    let methods = selected_methods(rule, a.method)?;
    let profile = load_profile(&a.file)?;
    warn_if_incomplete(&profile, err);
    let registry = profile.registry();
    let n = profile.num_alternatives();
    let seed = match &a.seed_constraints {
        Some(p) => read_seed_constraints(p, registry)?,
        None => ConstraintSet::new(n),
    };
    let stats = OrderStatistics::compute(&profile);
    let reports = methods
        .iter()
        .map(|&m| run_method_with(&stats, m, &seed, a.max_iterations))
        .collect::<crate::error::Result<Vec<_>>>()?;

    let total = (n * n.saturating_sub(1) / 2) as u64;
    let consensus = if rule == Rule::ThreeWise {
        let base = run_method(&stats, Method::Mot3)?;
        let iterated = run_method_with(
            &stats,
            Method::Iterated3Mot,
            &ConstraintSet::new(n),
            a.max_iterations,
        )?;
        let (l, l_star) = consensus_levels(&iterated, &base)?;
        Some(ConsensusLevels {
            l_3mot: Fraction::of(l, total),
            l_3mot_star: Fraction::of(l_star, total),
        })
    } else {
        None
    };
    let best = reports
        .iter()
        .filter(|r| r.guarantee() == GuaranteeTag::EveryMedian)
        .map(|r| r.solved_fraction())
        .max();
    let bound = match best {
        Some(p) if total > 0 => {
            let pf = p.to_f64().unwrap_or(0.0);
            let value = if p < Ratio::from_integer(1) {
                Some(reduction_rate_bound(n, pf)?)
            } else {
                None
            };
            Some(RateBound { p: pf, value })
        }
        _ => None,
    };
    let medians = if a.medians {
        Some(MedianView::new(
            &brute_force_medians(&profile, rule, DEFAULT_BRUTE_FORCE_CAP)?,
            registry,
        ))
    } else {
        None
    };
    let report = AnalysisReport {
        schema_version: SCHEMA_VERSION,
        input: InputDescriptor {
            path: a.file.display().to_string(),
            num_alternatives: n,
            num_voters: profile.num_voters(),
            complete: profile.is_complete(),
            labels: registry.labels().to_vec(),
        },
        rule,
        methods: reports.iter().map(|r| method_report(r, registry)).collect(),
        consensus_levels: consensus,
        reduction_rate_bound: bound,
        medians,
    };
    match a.output.format() {
        OutputFormat::Json => emit_json(out, &report)?,
        OutputFormat::Table => write_lines(out, &analysis_table(&report))?,
    }
    Ok(EXIT_OK)
}

fn pair_list(pairs: &[LabeledPair]) -> String {
    if pairs.is_empty() {
        return "-".into();
    }
    pairs
        .iter()
        .map(|p| match p.iteration {
            Some(k) => format!("{}>{} (round {k})", p.first_label, p.second_label),
            None => format!("{}>{} (seed)", p.first_label, p.second_label),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn analysis_table(r: &AnalysisReport) -> Vec<String> {
    let mut lines = vec![
        format!("schema_version  {}", r.schema_version),
        format!(
            "input           {} ({} alternatives, {} voters, {})",
            r.input.path,
            r.input.num_alternatives,
            r.input.num_voters,
            if r.input.complete {
                "complete"
            } else {
                "incomplete"
            }
        ),
        format!("labels          {}", r.input.labels.join(", ")),
        format!(
            "rule            {}-wise",
            if r.rule == Rule::TwoWise { 2 } else { 3 }
        ),
    ];
    for m in &r.methods {
        lines.push(String::new());
        lines.push(format!("method          {} [{:?}]", m.method, m.guarantee));
        lines.push(format!("  solved        {}", m.solved_fraction.render()));
        lines.push(format!("  raw           {}", m.raw_fraction.render()));
        lines.push(format!("  iterations    {}", m.iterations_used));
        lines.push(format!("  certified     {}", pair_list(&m.certified)));
        lines.push(format!("  implied       {}", pair_list(&m.implied)));
    }
    lines.push(String::new());
    if let Some(c) = &r.consensus_levels {
        lines.push(format!("L_3MOT          {}", c.l_3mot.render()));
        lines.push(format!("L_3MOT*         {}", c.l_3mot_star.render()));
    }
    if let Some(b) = &r.reduction_rate_bound {
        match b.value {
            Some(v) => lines.push(format!("reduction bound {v:.3e} (p = {:.4})", b.p)),
            None => lines.push(format!("reduction bound all pairs fixed (p = {:.4})", b.p)),
        }
    }
    if let Some(m) = &r.medians {
        lines.extend(median_table(m));
    }
    lines
}

fn median_table(m: &MedianView) -> Vec<String> {
    let mut lines = vec![
        format!("optimal value   {}", m.optimal_value),
        format!("nodes explored  {}", m.nodes_explored),
    ];
    for med in &m.medians {
        lines.push(format!("median          {}", med.labels.join(">")));
    }
    lines
}

#[derive(Debug, Serialize)]
struct SolveReport {
    schema_version: u32,
    input: String,
    use_reduction: bool,
    /// Constraint count fed to the search.
    constraints: usize,
    result: MedianView,
}

fn solve(a: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let rule = rule_of(a.rule);
    let profile = load_profile(&a.file)?;
    let (result, constraints) = if a.use_reduction {
        warn_if_incomplete(&profile, err);
        let stats = OrderStatistics::compute(&profile);
        let method = match rule {
            Rule::ThreeWise => Method::Iterated3Mot,
            Rule::TwoWise => Method::ImprovedIteratedMot,
        };
        let report = run_method(&stats, method)?;
        let options = SearchOptions {
            cap: a.cap.unwrap_or(DEFAULT_CONSTRAINED_CAP),
            prune: true,
        };
        let res = constrained_medians(&profile, rule, &report.constraints, options)?;
        (res, report.constraints.edge_count())
    } else {
        (
            brute_force_medians(&profile, rule, a.cap.unwrap_or(DEFAULT_BRUTE_FORCE_CAP))?,
            0,
        )
    };
    let report = SolveReport {
        schema_version: SCHEMA_VERSION,
        input: a.file.display().to_string(),
        use_reduction: a.use_reduction,
        constraints,
        result: MedianView::new(&result, profile.registry()),
    };
    match a.output.format() {
        OutputFormat::Json => emit_json(out, &report)?,
        OutputFormat::Table => {
            let mut lines = vec![
                format!("schema_version  {}", report.schema_version),
                format!("input           {}", report.input),
                format!(
                    "use_reduction   {} ({} constraints)",
                    report.use_reduction, report.constraints
                ),
            ];
            lines.extend(median_table(&report.result));
            write_lines(out, &lines)?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    schema_version: u32,
    suite: String,
    pass: bool,
    summary: String,
    details: Value,
}

fn verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let (suite, pass, summary, details) = match a.suite {
        Suite::Lp1 => {
            let outcome = build_lemma_lp1().solve()?;
            let optimum = outcome.optimum.clone();
            let pass = optimum.as_ref().is_some_and(num_traits::Zero::is_zero);
            let text = optimum.map_or("none".to_string(), |o| o.to_string());
            let details = serde_json::json!({
                "status": outcome.status,
                "optimum": text,
                "pivots": outcome.pivots,
            });
            ("lp1", pass, format!("optimum {text}"), details)
        }
        Suite::Star => {
            let mut reports = Vec::new();
            let mut systems = 0;
            for n in 2..=a.max_n as usize {
                let r = star_sweep(n)?;
                systems += r.cases.len();
                reports.push(r);
            }
            let pass = reports.iter().all(|r| r.all_infeasible);
            let summary = if pass {
                format!("all {systems} systems infeasible for n <= {}", a.max_n)
            } else {
                format!("a feasible system exists for some n <= {}", a.max_n)
            };
            ("star", pass, summary, to_value(reports))
        }
        Suite::SecondBest => {
            let r = verify_second_best_bounds()?;
            let summary = format!(
                "optima {}, {}, {}",
                r.xzt_optimum, r.yzt_optimum, r.pair_of_triples_optimum
            );
            ("second-best", r.pass, summary, to_value(r))
        }
        Suite::SixCandidate => {
            let _ = writeln!(err, "warning: the six-candidate suite solves about 90 exact LPs with 720 variables; expect minutes");
            let reports = (0..=2)
                .map(verify_six_candidate_rule)
                .collect::<crate::error::Result<Vec<_>>>()?;
            let pass = reports.iter().all(|r| r.all_infeasible);
            let solved: usize = reports.iter().map(|r| r.systems_solved).sum();
            let covered: usize = reports.iter().map(|r| r.bad_rankings).sum();
            let summary = format!(
                "{solved} orbit systems covering {covered} bad rankings, all infeasible: {pass}"
            );
            ("six-candidate", pass, summary, to_value(reports))
        }
    };
    let report = VerifyReport {
        schema_version: SCHEMA_VERSION,
        suite: suite.into(),
        pass,
        summary,
        details,
    };
    let verdict = if pass { "PASS" } else { "FAIL" };
    match a.output.format() {
        OutputFormat::Json => emit_json(out, &report)?,
        OutputFormat::Table => {
            write_lines(out, &[format!("{suite}: {}, {verdict}", report.summary)])?
        }
    }
    Ok(if pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn simulate(a: &SimulateArgs, out: &mut dyn Write) -> CliResult<i32> {
    let methods = a
        .methods
        .iter()
        .map(|m| m.trim().parse::<Method>())
        .collect::<crate::error::Result<Vec<_>>>()?;
    let mut cfg = SimulationConfig::new(a.n, a.m, a.instances, a.seed, methods);
    cfg.max_iterations = a.max_iterations;
    let result = run_simulation(&cfg)?;
    let csv = to_csv(&result);
    if let Some(path) = &a.csv {
        std::fs::write(path, &csv)
            .map_err(|e| Failure::from(Error::Io(format!("{}: {e}", path.display()))))?;
    }
    match a.output.format() {
        OutputFormat::Json => emit_json(out, &result)?,
        OutputFormat::Table => {
            let mut lines = vec![format!(
                "n={} m={} instances={} seed={} ({:.2}s)",
                a.n, a.m, a.instances, a.seed, result.wall_time_seconds
            )];
            lines.push(format!(
                "{:<20} {:>9} {:>9} {:>9} {:>9} {:>9} {:>7}",
                "method", "solved%", "stderr", "raw%", "closed%", "ordered%", "iters"
            ));
            for s in &result.methods {
                lines.push(format!(
                    "{:<20} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>7.3}",
                    s.method.to_string(),
                    100.0 * s.mean_solved_fraction,
                    100.0 * s.stderr,
                    100.0 * s.mean_raw_fraction,
                    100.0 * s.mean_closed_fraction,
                    100.0 * s.mean_ordered_fraction,
                    s.mean_iterations
                ));
            }
            write_lines(out, &lines)?;
        }
    }
    Ok(EXIT_OK)
}

/// A ranking argument: the contents of a file when one exists at that path,
/// otherwise the text itself.
fn ranking_text(arg: &str) -> CliResult<String> {
    let path = Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path)
            .map(|t| t.trim().to_string())
            .map_err(|e| Failure::from(Error::Io(format!("{arg}: {e}"))));
    }
    Ok(arg.trim().to_string())
}

fn split_labels(text: &str) -> Vec<String> {
    text.split(['>', ','])
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty())
        .collect()
}

#[derive(Debug, Serialize)]
struct DistReport {
    schema_version: u32,
    k: u8,
    a: Vec<String>,
    b: Vec<String>,
    distance: u64,
}

fn dist(a: &DistArgs, out: &mut dyn Write) -> CliResult<i32> {
    let parse_failure = |e: Error| {
        Failure::from(Error::Parse {
            line: 1,
            message: e.to_string(),
        })
    };
    let labels_a = split_labels(&ranking_text(&a.a)?);
    let labels_b = split_labels(&ranking_text(&a.b)?);
    let registry = AlternativeRegistry::new(labels_a.clone()).map_err(parse_failure)?;
    let ra = Ranking::parse(&registry, &labels_a.join(">")).map_err(parse_failure)?;
    let rb = Ranking::parse(&registry, &labels_b.join(">")).map_err(parse_failure)?;
    let d = ranking_distance(&ra, &rb, rule_of(a.k))?;
    match a.output.format() {
        OutputFormat::Json => emit_json(
            out,
            &DistReport {
                schema_version: SCHEMA_VERSION,
                k: a.k,
                a: labels_a,
                b: labels_b,
                distance: d,
            },
        )?,
        OutputFormat::Table => write_lines(out, &[d.to_string()])?,
    }
    Ok(EXIT_OK)
}
