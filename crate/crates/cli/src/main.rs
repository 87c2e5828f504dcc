//! `symtan`: catalog listing, decompositions and theorem checks.
//!
//! Exit status is 0 when every verdict is `pass` or `expected-fail-confirmed`,
//! 1 when some verdict is `fail`, and 2 on usage or configuration errors.

mod cache;
mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use symtan::qcatalog::{A0Recipe, ALambdaRecipe, QAssignment, ScalarProfile, StructureProfile};
use symtan::symspace::{catalog, SpaceId};
use symtan::verify::{full_suite, run_spec, run_suite, CheckOptions, CheckSpec, Expectation, Relation, SpaceContext, SuiteReport, Tolerances, VerificationReport};

use config::RunConfig;

#[derive(Parser)]
#[command(name = "symtan", version, about = "Tangent-sphere-bundle structures on symmetric spaces")]
struct Cli {
    /// `key = value` run configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Decomposition cache directory (default: $SYMTAN_CACHE_DIR, then the temp dir).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the catalog spaces with their rank-one multiplicities.
    Catalog {
        #[arg(long)]
        json: bool,
    },
    /// Emit the restricted-root decomposition of a space as JSON.
    Decompose {
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run one theorem check.
    Check(CheckArgs),
    /// Run the full suite.
    Report {
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    Contact,
    Killing,
    Rank1,
    AlmostKahler,
    Normality,
    Tables,
    Decomposition,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum)]
    theorem: Option<Theorem>,
    #[arg(long)]
    space: Option<String>,
    /// `id`, `tanh:2`, `const:1.5`, `0.5*tanh+sinh`, `roots:1,2`, ...
    #[arg(long)]
    q: Option<String>,
    /// `const:<k>` or `contact`.
    #[arg(long)]
    a0: Option<String>,
    /// `explicit:<c,...>`, `ak` or `contact`.
    #[arg(long)]
    alambda: Option<String>,
    #[arg(long, value_parser = positive)]
    radius: Option<f64>,
    #[arg(long, value_parser = positive)]
    kappa: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CommonArgs {
    /// Generic residual tolerance.
    #[arg(long, value_parser = positive)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Samples per check in rank two and above.
    #[arg(long, value_parser = count)]
    samples: Option<usize>,
    /// Write the JSON report here.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    json: bool,
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(_) => Err(format!("must be positive, got `{s}`")),
        Err(e) => Err(e.to_string()),
    }
}

fn count(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("expected a positive integer, got `{s}`")),
    }
}

/// Marks an error as a usage error (exit status 2).
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Usage(msg.into()))
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.chain().any(|c| c.is::<Usage>()) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let file = match &cli.config {
        Some(path) => RunConfig::load(path).map_err(|e| usage(format!("{e:#}")))?,
        None => RunConfig::default(),
    };
    let global = RunConfig {
        cache_dir: cli.cache_dir.clone(),
        ..Default::default()
    };
    match cli.command {
        Command::Catalog { json } => {
            emit(&catalog_text(json))?;
            Ok(true)
        }
        Command::Decompose { space, seed, output } => {
            let cfg = RunConfig {
                space,
                seed,
                output,
                ..global
            }
            .or(file);
            decompose_cmd(&cfg)
        }
        Command::Check(args) => {
            let (cfg, json) = check_config(args, global, file);
            check_cmd(&cfg, json)
        }
        Command::Report { all, common } => {
            if !all {
                return Err(usage("`report` needs `--all`"));
            }
            let json = common.json;
            let cfg = common_config(common, global).or(file);
            report_cmd(&cfg, json)
        }
    }
}

fn common_config(c: CommonArgs, base: RunConfig) -> RunConfig {
    RunConfig {
        tol: c.tol,
        seed: c.seed,
        samples: c.samples,
        output: c.output,
        ..base
    }
}

fn check_config(a: CheckArgs, global: RunConfig, file: RunConfig) -> (RunConfig, bool) {
    let json = a.common.json;
    let theorem = a.theorem.map(|t| t.to_possible_value().expect("named variant").get_name().to_string());
    let flags = RunConfig {
        space: a.space,
        q: a.q,
        a0: a.a0,
        alambda: a.alambda,
        radius: a.radius,
        kappa: a.kappa,
        theorem,
        ..common_config(a.common, global)
    };
    (flags.or(file), json)
}

fn options(cfg: &RunConfig) -> CheckOptions {
    let d = Tolerances::default();
    CheckOptions {
        tol: Tolerances {
            pass: cfg.tol.unwrap_or(d.pass),
            contact: cfg.tol_contact.unwrap_or(d.contact),
            killing: cfg.tol_killing.unwrap_or(d.killing),
            kahler: cfg.tol_kahler.unwrap_or(d.kahler),
            riccati: cfg.tol_riccati.unwrap_or(d.riccati),
            floor: cfg.floor.unwrap_or(d.floor),
        },
        samples: cfg.samples.unwrap_or(CheckOptions::default().samples),
        seed: cfg.seed.unwrap_or(0),
    }
}

fn space_of(cfg: &RunConfig) -> Result<SpaceId> {
    let s = cfg.space_id().ok_or_else(|| usage("missing `--space`"))?;
    s.parse().map_err(|e| usage(format!("{e}")))
}

fn parse_lit<T: std::str::FromStr>(what: &str, s: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e| usage(format!("--{what} `{s}`: {e}")))
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn catalog_text(json: bool) -> String {
    let rows: Vec<_> = catalog()
        .into_iter()
        .map(|id| {
            let (alg, n) = id.algebra();
            (id, format!("{alg}({n})"), id.rank_one_multiplicities())
        })
        .collect();
    if json {
        let v: Vec<_> = rows
            .iter()
            .map(|(id, alg, m)| {
                json!({
                    "id": id.to_string(),
                    "quotient": id.quotient(),
                    "algebra": alg,
                    "rank": id.rank(),
                    "m_eps": m.map(|m| m.0),
                    "m_half_eps": m.map(|m| m.1),
                })
            })
            .collect();
        return serde_json::to_string_pretty(&v).expect("plain json") + "\n";
    }
    let mut s = String::new();
    let _ = writeln!(s, "{:<8} {:<24} {:<7} {:>4} {:>6} {:>8}", "id", "quotient", "algebra", "rank", "m_eps", "m_eps/2");
    for (id, alg, m) in rows {
        let (a, b) = m.map(|(a, b)| (a.to_string(), b.to_string())).unwrap_or(("-".into(), "-".into()));
        let _ = writeln!(s, "{:<8} {:<24} {:<7} {:>4} {:>6} {:>8}", id.to_string(), id.quotient(), alg, id.rank(), a, b);
    }
    s
}

fn decompose_cmd(cfg: &RunConfig) -> Result<bool> {
    let id = space_of(cfg)?;
    let dir = cache::resolve_dir(cfg.cache_dir.clone());
    let (text, _) = cache::load_or_build(&dir, id, cfg.seed.unwrap_or(0))?;
    match &cfg.output {
        Some(_) => write_output(&cfg.output, &text)?,
        None => emit(&(text + "\n"))?,
    }
    Ok(true)
}

fn build_spec(cfg: &RunConfig) -> Result<CheckSpec> {
    let theorem = cfg.theorem.as_deref().ok_or_else(|| usage("missing `--theorem`"))?;
    let theorem = Theorem::from_str(theorem, true).map_err(|_| usage(format!("unknown theorem `{theorem}`")))?;
    if theorem == Theorem::Tables {
        return Ok(CheckSpec::Tables);
    }
    let space = space_of(cfg)?;
    let r = cfg.radius.unwrap_or(1.0);
    let profile = |default_q: &str| -> Result<StructureProfile> {
        let q: QAssignment = parse_lit("q", cfg.q.as_deref().unwrap_or(default_q))?;
        let a0: A0Recipe = parse_lit("a0", cfg.a0.as_deref().unwrap_or("contact"))?;
        let al: ALambdaRecipe = parse_lit("alambda", cfg.alambda.as_deref().unwrap_or("contact"))?;
        Ok(StructureProfile::new(q, a0, al, Some(r)))
    };
    Ok(match theorem {
        Theorem::Tables => unreachable!(),
        Theorem::Decomposition => CheckSpec::Decomposition(space),
        Theorem::Contact => CheckSpec::Contact { space, profile: profile("tanh")?, r },
        Theorem::Killing => CheckSpec::Killing { space, profile: profile("tanh")?, r },
        Theorem::Normality => CheckSpec::Normality { space, profile: profile("roots:1")?, r },
        Theorem::Rank1 => {
            if space.rank() != 1 {
                bail!(usage(format!("rank1 needs a rank-one space, {space} has rank {}", space.rank())));
            }
            let q = match parse_lit::<QAssignment>("q", cfg.q.as_deref().unwrap_or("roots:1"))? {
                QAssignment::PerRoot(v) => v,
                QAssignment::Function(_) => bail!(usage("rank1 needs constant q, e.g. `--q roots:1` or `--q roots:2,0.5`")),
            };
            CheckSpec::Rank1 {
                space,
                kappa: cfg.kappa.unwrap_or(1.0),
                q,
                r,
            }
        }
        Theorem::AlmostKahler => {
            let q: ScalarProfile = parse_lit("q", cfg.q.as_deref().unwrap_or("tanh"))?;
            let a0 = match parse_lit::<A0Recipe>("a0", cfg.a0.as_deref().unwrap_or("const:1"))? {
                A0Recipe::Constant(k) if k > 0.0 => k,
                A0Recipe::Constant(k) => bail!(usage(format!("a0 must be positive, got {k}"))),
                A0Recipe::ContactRule => 1.0 / (2.0 * r),
            };
            if let Some(al) = &cfg.alambda {
                if parse_lit::<ALambdaRecipe>("alambda", al)? != ALambdaRecipe::AlmostKahler {
                    bail!(usage("almost-kahler fixes `--alambda ak`"));
                }
            }
            CheckSpec::AlmostKahler { space, q, a0 }
        }
    })
}

fn report_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    let expectation = match r.expectation {
        Expectation::Holds => "holds",
        Expectation::Fails => "fails",
    };
    let _ = writeln!(s, "{}", r.check_id);
    let _ = writeln!(s, "  verdict: {} (expectation: {expectation})", r.verdict.as_str());
    for (k, v) in &r.parameters {
        let _ = writeln!(s, "  {k} = {v}");
    }
    for (name, res) in &r.residuals {
        let rel = match res.relation {
            Relation::Le => "<=",
            Relation::Ge => ">=",
        };
        let _ = writeln!(
            s,
            "  {:<4} {:<40} {:>12.3e} {} {:.1e}",
            if res.ok { "ok" } else { "FAIL" },
            name,
            res.value,
            rel,
            res.bound
        );
    }
    for d in &r.discrepancies {
        let _ = writeln!(s, "  note: {d}");
    }
    s
}

fn check_cmd(cfg: &RunConfig, json: bool) -> Result<bool> {
    let spec = build_spec(cfg)?;
    let opts = options(cfg);
    let report = match spec.space() {
        Some(id) => {
            let dir = cache::resolve_dir(cfg.cache_dir.clone());
            let (_, space) = cache::load_or_build(&dir, id, opts.seed)?;
            let ctx = SpaceContext::from_space(space)?;
            run_spec(&spec, Some(&ctx), &opts)
        }
        None => run_spec(&spec, None, &opts),
    };
    let text = serde_json::to_string_pretty(&report)?;
    write_output(&cfg.output, &text)?;
    if json {
        emit(&(text + "\n"))?;
    } else {
        emit(&report_text(&report))?;
    }
    Ok(report.verdict.is_success())
}

fn report_cmd(cfg: &RunConfig, json: bool) -> Result<bool> {
    let opts = options(cfg);
    let suite: SuiteReport = run_suite(&full_suite(), &opts);
    let text = suite.to_json()?;
    write_output(&cfg.output, &text)?;
    if json {
        emit(&(text + "\n"))?;
    } else {
        let mut s = String::new();
        for r in &suite.reports {
            let failing = r.failures();
            let tail = if failing.is_empty() { String::new() } else { format!("  [{}]", failing.join(", ")) };
            let _ = writeln!(s, "{:<24} {}{}", r.verdict.as_str(), r.check_id, tail);
        }
        let _ = writeln!(
            s,
            "total {}  pass {}  expected-fail-confirmed {}  fail {}",
            suite.total, suite.passed, suite.expected_fail_confirmed, suite.failed
        );
        emit(&s)?;
    }
    Ok(suite.success())
}
