use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use grrap::benchmarks::{benchmark, TopologyStatus};
use grrap::experiment::{self, ExperimentSpec};
use grrap::reliability::{
    brute_force_reliability, exact_reliability, monte_carlo_reliability, BRUTE_FORCE_MAX_NODES,
};
use grrap::{
    enumerate_feasible_counts, Algorithm, Error, FactorLevels, Network, PenaltyConfig, PenaltyMode,
    PreparedProblem, ProblemInstance, Solution,
};

#[derive(Parser)]
#[command(
    name = "grrap",
    version,
    about = "Reliability redundancy allocation on general networks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate one solution: cost, volume, weight, reliabilities, fitness.
    Eval(EvalArgs),
    /// Seeded optimization runs with per-run and summary CSV rows.
    Solve(SolveArgs),
    /// Run the eight L8 factor combinations of the swarm.
    FactorScreen(ScreenArgs),
    /// Count the component-count vectors that meet the volume and weight limits.
    Comb(CombArgs),
    /// Cross-check exact, brute-force and Monte Carlo network reliability.
    Reliability(RelArgs),
}

#[derive(Args)]
struct ProblemArgs {
    /// Network file.
    #[arg(long, requires = "instance", conflicts_with = "bench")]
    network: Option<PathBuf>,
    /// Instance file (parameters and limits).
    #[arg(long, requires = "network")]
    instance: Option<PathBuf>,
    /// Use a bundled benchmark (1 to 6) instead of files.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
    bench: Option<u8>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Counts then reliabilities, comma or space separated (2m values).
    #[arg(long, allow_hyphen_values = true)]
    solution: String,
    #[arg(long, default_value_t = 3.0)]
    gamma: f64,
    /// Score with the cost-only penalty used when counts come from the feasible set.
    #[arg(long)]
    cost_only: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// key = value experiment file; flags override its settings.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    nsol: Option<usize>,
    #[arg(long)]
    ngen: Option<usize>,
    #[arg(long)]
    runs: Option<usize>,
    /// Master seed; run k uses seed + k.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// CSV output path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Algorithms to run, comma separated: bsso, sso, ga, pso.
    #[arg(long, value_delimiter = ',')]
    algo: Vec<Algorithm>,
    /// Swarm factor levels for bsso, as an ABCD bitmask (`1011`) or letters (`ACD`).
    #[arg(long)]
    factors: Option<FactorLevels>,
}

#[derive(Args)]
struct ScreenArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Also write one row per run under each combination.
    #[arg(long)]
    with_runs: bool,
}

#[derive(Args)]
struct CombArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Write every member to this CSV file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RelArgs {
    /// Network file.
    #[arg(long, conflicts_with = "bench")]
    network: Option<PathBuf>,
    /// Use the network of a bundled benchmark (1 to 6).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
    bench: Option<u8>,
    /// Node reliabilities, comma or space separated, one per node.
    #[arg(long)]
    rels: String,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Failure classes mapped to exit codes.
enum Fail {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Fail {
    fn from(e: anyhow::Error) -> Self {
        Fail::Runtime(e)
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Runtime(e.into())
    }
}

type CmdResult = Result<ExitCode, Fail>;

fn usage(e: impl Into<anyhow::Error>) -> Fail {
    Fail::Usage(e.into())
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_files(network: &Path, instance: &Path) -> anyhow::Result<ProblemInstance> {
    let net =
        Network::parse(&read(network)?).with_context(|| format!("in {}", network.display()))?;
    ProblemInstance::parse(&read(instance)?, net)
        .with_context(|| format!("in {}", instance.display()))
}

fn load(p: &ProblemArgs) -> Result<ProblemInstance, Fail> {
    match (&p.network, &p.instance, p.bench) {
        (Some(n), Some(i), None) => Ok(load_files(n, i)?),
        (None, None, Some(b)) => {
            let b = benchmark(b as usize)?;
            if b.status() == TopologyStatus::Surrogate {
                eprintln!("warning: benchmark {} uses a surrogate topology", b.id);
            }
            Ok(b.load()?)
        }
        _ => Err(usage(anyhow!("give --network and --instance, or --bench"))),
    }
}

fn parse_list(text: &str) -> Result<Vec<f64>, Fail> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| usage(anyhow!("`{t}` is not a number")))
        })
        .collect()
}

fn open_out(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn fmt_vec<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_eval(a: EvalArgs) -> CmdResult {
    let inst = load(&a.problem)?;
    let sol = Solution::parse_flat(&a.solution).map_err(usage)?;
    let m = inst.subsystem_count();
    if sol.len() != m {
        return Err(usage(anyhow!(
            "solution has {} subsystems but the instance has {m}",
            sol.len()
        )));
    }
    let mode = if a.cost_only {
        PenaltyMode::CostOnly
    } else {
        PenaltyMode::General
    };
    let cfg = PenaltyConfig::new(a.gamma, mode).map_err(usage)?;
    let ev = grrap::evaluate_solution(&inst, &sol, &cfg)?;
    let r = &ev.report;
    let status = |v: f64, lim: f64| if v <= lim { "ok" } else { "VIOLATED" };
    println!(
        "cost     {:.4}  (limit {}, {})",
        r.cost,
        inst.c_ub,
        status(r.cost, inst.c_ub)
    );
    println!(
        "volume   {:.4}  (limit {}, {})",
        r.volume,
        inst.v_ub,
        status(r.volume, inst.v_ub)
    );
    println!(
        "weight   {:.4}  (limit {}, {})",
        r.weight,
        inst.w_ub,
        status(r.weight, inst.w_ub)
    );
    for (i, ri) in ev.subsystem_rels.iter().enumerate() {
        println!("R{:<7} {ri:.10}", i + 1);
    }
    println!("Rs       {:.10}", ev.rs);
    if r.feasible() {
        println!("feasible yes");
    } else {
        let v: Vec<String> = r.violated.iter().map(ToString::to_string).collect();
        println!("feasible no ({})", v.join(", "));
    }
    println!("fitness  {:.10}", ev.fitness);
    Ok(ExitCode::SUCCESS)
}

fn build_spec(r: &RunArgs) -> Result<ExperimentSpec, Fail> {
    let mut spec = ExperimentSpec::default();
    if let Some(path) = &r.config {
        spec = experiment::parse_config(&read(path)?, spec)
            .with_context(|| format!("in {}", path.display()))
            .map_err(Fail::Usage)?;
    }
    if let Some(v) = r.nsol {
        spec.config.nsol = v;
    }
    if let Some(v) = r.ngen {
        spec.config.ngen = v;
    }
    if let Some(v) = r.runs {
        spec.runs = v;
    }
    if let Some(v) = r.seed {
        spec.config.seed = v;
    }
    if let Some(v) = r.gamma {
        spec.config.gamma = v;
    }
    if r.out.is_some() {
        spec.out.clone_from(&r.out);
    }
    if r.problem.network.is_some() {
        spec.network.clone_from(&r.problem.network);
        spec.instance.clone_from(&r.problem.instance);
    }
    Ok(spec)
}

fn load_for_spec(r: &RunArgs, spec: &ExperimentSpec) -> Result<ProblemInstance, Fail> {
    if r.problem.bench.is_some() {
        return load(&r.problem);
    }
    match (&spec.network, &spec.instance) {
        (Some(n), Some(i)) => Ok(load_files(n, i)?),
        _ => Err(usage(anyhow!(
            "give --network and --instance, --bench, or a config naming both"
        ))),
    }
}

fn print_summary(
    batches: &[experiment::Batch],
    label: impl Fn(usize, &experiment::Batch) -> String,
) {
    eprintln!(
        "{:<12} {:>5} {:>14} {:>14} {:>14} {:>12} {:>9}",
        "", "runs", "f_avg", "f_max", "f_min", "f_stdev", "t_avg"
    );
    for (i, b) in batches.iter().enumerate() {
        let s = &b.summary;
        eprintln!(
            "{:<12} {:>5} {:>14.10} {:>14.10} {:>14.10} {:>12.3e} {:>9.3}",
            label(i, b),
            s.runs,
            s.f_avg,
            s.f_max,
            s.f_min,
            s.f_stdev,
            s.t_avg
        );
    }
}

fn cmd_solve(a: SolveArgs) -> CmdResult {
    let mut spec = build_spec(&a.run)?;
    if !a.algo.is_empty() {
        spec.algorithms = a.algo;
    }
    if a.factors.is_some() {
        spec.factors = a.factors;
    }
    spec.validate().map_err(usage)?;
    let inst = load_for_spec(&a.run, &spec)?;
    let problem = PreparedProblem::new(&inst)?;
    let batches = experiment::solve(&problem, &spec)?;
    experiment::write_solve_csv(open_out(spec.out.as_deref())?, &batches)?;
    print_summary(&batches, |_, b| match b.factors {
        Some(f) if b.algorithm == Algorithm::Bsso || b.algorithm == Algorithm::Sso => {
            format!("{} {f}", b.algorithm)
        }
        _ => b.algorithm.to_string(),
    });
    Ok(ExitCode::SUCCESS)
}

fn cmd_screen(a: ScreenArgs) -> CmdResult {
    let spec = build_spec(&a.run)?;
    spec.validate().map_err(usage)?;
    let inst = load_for_spec(&a.run, &spec)?;
    let problem = PreparedProblem::new(&inst)?;
    let batches = experiment::factor_screen(&problem, &spec.config, spec.runs)?;
    experiment::write_screen_csv(open_out(spec.out.as_deref())?, &batches, a.with_runs)?;
    print_summary(&batches, |i, b| {
        format!(
            "{} {}",
            i + 1,
            b.factors.map(|f| f.to_string()).unwrap_or_default()
        )
    });
    Ok(ExitCode::SUCCESS)
}

fn cmd_comb(a: CombArgs) -> CmdResult {
    let inst = load(&a.problem)?;
    let set = enumerate_feasible_counts(&inst)?;
    println!("feasible count vectors: {}", set.len());
    if set.is_empty() {
        eprintln!("warning: no count vector satisfies the volume and weight limits");
        return Ok(ExitCode::from(1));
    }
    let by = |key: fn((f64, f64)) -> f64| {
        (0..set.len())
            .max_by(|&x, &y| key(set.usage(x)).total_cmp(&key(set.usage(y))))
            .unwrap_or(0)
    };
    for (name, k) in [("max volume", by(|u| u.0)), ("max weight", by(|u| u.1))] {
        let (v, w) = set.usage(k);
        println!(
            "{name:<10}  N = ({})  volume {v:.4}/{} ({:.1}%)  weight {w:.4}/{} ({:.1}%)",
            fmt_vec(set.get(k)),
            inst.v_ub,
            100.0 * v / inst.v_ub,
            inst.w_ub,
            100.0 * w / inst.w_ub
        );
    }
    if let Some(path) = &a.out {
        let mut out = open_out(Some(path))?;
        let header: Vec<String> = (1..=inst.subsystem_count())
            .map(|i| format!("n{i}"))
            .chain(["volume".into(), "weight".into()])
            .collect();
        writeln!(out, "{}", header.join(",")).context("write failed")?;
        for k in 0..set.len() {
            let (v, w) = set.usage(k);
            let n: Vec<String> = set.get(k).iter().map(u32::to_string).collect();
            writeln!(out, "{},{v:.6},{w:.6}", n.join(",")).context("write failed")?;
        }
        out.flush().context("write failed")?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_reliability(a: RelArgs) -> CmdResult {
    let net = match (&a.network, a.bench) {
        (Some(p), _) => Network::parse(&read(p)?).with_context(|| format!("in {}", p.display()))?,
        (None, Some(b)) => Network::parse(benchmark(b as usize)?.network)?,
        (None, None) => return Err(usage(anyhow!("give --network or --bench"))),
    };
    let rels = parse_list(&a.rels)?;
    if rels.len() != net.node_count() {
        return Err(usage(anyhow!(
            "{} reliabilities given for {} nodes",
            rels.len(),
            net.node_count()
        )));
    }
    let exact = exact_reliability(&net, &rels)?;
    println!(
        "exact        {:.12}  ({} of {} state vectors connected)",
        exact.value, exact.connected_vectors, exact.enumerated_vectors
    );
    if net.node_count() <= BRUTE_FORCE_MAX_NODES {
        let bf = brute_force_reliability(&net, &rels)?;
        println!(
            "brute force  {bf:.12}  (|diff| {:.1e})",
            (bf - exact.value).abs()
        );
    } else {
        println!("brute force  skipped (more than {BRUTE_FORCE_MAX_NODES} nodes)");
    }
    let mc = monte_carlo_reliability(&net, &rels, a.samples, a.seed)?;
    let z = if mc.std_error > 0.0 {
        (mc.estimate - exact.value).abs() / mc.std_error
    } else {
        0.0
    };
    println!(
        "monte carlo  {:.12}  (se {:.1e}, {z:.2} se from exact, {} samples)",
        mc.estimate, mc.std_error, a.samples
    );
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Eval(a) => cmd_eval(a),
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::FactorScreen(a) => cmd_screen(a),
        Cmd::Comb(a) => cmd_comb(a),
        Cmd::Reliability(a) => cmd_reliability(a),
    };
    match res {
        Ok(code) => code,
        Err(Fail::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Fail::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
