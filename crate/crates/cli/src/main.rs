//! Command-line front end: instance generation, SIW^π(k) solving, tabular
//! training, plan validation, benchmarking and sketch checking.

mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;
use widthdecomp::bench::{
    aggregate_to_csv, curve_to_csv, records_to_csv, report_line, run_suite, validation_score, BenchOptions, CurveRow,
    PolicySource, ValidationMetric,
};
use widthdecomp::executor::{emit_trace, siw_pi, ExecOptions, Selection};
use widthdecomp::generators::{generate, suite, DomainTag, GenParams, GenSpec};
use widthdecomp::pddl::{add_unsatisfied_goal_predicates, load_task, GroundedTask};
use widthdecomp::policy::{
    sketch_policy, train_actor_critic_with, Optimizer, PolicyConfig, Prior, SubgoalPolicy, TabularPolicy, TrainHooks,
    UniformPolicy,
};
use widthdecomp::sketch::{builtin_ruleset, check_safe_acyclic, Ruleset, RulesetName};
use widthdecomp::statespace::{validate, Plan, DEFAULT_STATE_CAP};
use widthdecomp::width::Width;

use manifest::Manifest;

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Unsolved(String),
    #[error("{0}")]
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Unsolved(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

type Run = Result<(), Failure>;

#[derive(Parser, Debug)]
#[command(name = "widthdecomp", version, about = "Width-bounded subgoal decompositions for classical planning")]
struct Cli {
    /// Where to write the run manifest (overrides the per-command default).
    #[arg(long, global = true)]
    manifest_out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Generate PDDL instances from domain flags or a suite manifest.
    Gen(GenArgs),
    /// Run SIW^π(k) on one instance and print the subgoal trace.
    Solve(SolveArgs),
    /// Train a tabular subgoal policy on a directory of instances.
    Train(TrainArgs),
    /// Check a plan file against an instance.
    Validate(ValidateArgs),
    /// Run a policy over a generated suite and write CSV metrics.
    Bench(BenchArgs),
    /// Check that a sketch is safe and acyclic on one instance.
    CheckSketch(CheckSketchArgs),
}

fn parse_width(s: &str) -> Result<Width, String> {
    match s {
        "1" => Ok(Width::ONE),
        "2" => Ok(Width::TWO),
        _ => Err(format!("width must be 1 or 2, got `{s}`")),
    }
}

/// `uniform`, `sketch:R1`..`sketch:R4`, `ruleset:PATH` or `trained:PATH`.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
enum PolicyArg {
    Uniform,
    Sketch(RulesetName),
    Ruleset(PathBuf),
    Trained(PathBuf),
}

fn parse_policy(s: &str) -> Result<PolicyArg, String> {
    match s.split_once(':') {
        None if s == "uniform" => Ok(PolicyArg::Uniform),
        Some(("sketch", r)) => r.parse().map(PolicyArg::Sketch).map_err(|e: widthdecomp::sketch::SketchError| e.to_string()),
        Some(("ruleset", p)) if !p.is_empty() => Ok(PolicyArg::Ruleset(p.into())),
        Some(("trained", p)) if !p.is_empty() => Ok(PolicyArg::Trained(p.into())),
        _ => Err(format!("expected uniform, sketch:R1..R4, ruleset:PATH or trained:PATH, got `{s}`")),
    }
}

impl PolicyArg {
    fn source(&self) -> Result<PolicySource, Failure> {
        Ok(match self {
            PolicyArg::Uniform => PolicySource::Uniform,
            PolicyArg::Sketch(r) => PolicySource::Sketch(*r),
            PolicyArg::Ruleset(p) => PolicySource::Ruleset(Ruleset::load(p).map_err(internal)?),
            PolicyArg::Trained(p) => PolicySource::Trained(Arc::new(TabularPolicy::load(p).map_err(internal)?)),
        })
    }

    fn input(&self) -> Option<&Path> {
        match self {
            PolicyArg::Ruleset(p) | PolicyArg::Trained(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct GenArgs {
    /// Domain tag (delivery, gripper, spanner, miconic, reward, visitall, blocks, childsnack).
    #[arg(long, required_unless_present = "suite")]
    domain: Option<DomainTag>,
    /// Suite manifest; replaces the domain flags.
    #[arg(long, conflicts_with = "domain")]
    suite: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args, Debug, Serialize)]
struct ParamArgs {
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    x: Option<usize>,
    #[arg(long)]
    y: Option<usize>,
    #[arg(long)]
    packages: Option<usize>,
    #[arg(long)]
    agents: Option<usize>,
    #[arg(long)]
    unique_targets: bool,
    #[arg(long)]
    balls: Option<usize>,
    #[arg(long)]
    spanners: Option<usize>,
    #[arg(long)]
    nuts: Option<usize>,
    #[arg(long)]
    locations: Option<usize>,
    #[arg(long)]
    floors: Option<usize>,
    #[arg(long)]
    passengers: Option<usize>,
    #[arg(long)]
    rewards: Option<usize>,
    #[arg(long)]
    obstacles: Option<usize>,
    #[arg(long)]
    visit_fraction: Option<f64>,
    #[arg(long)]
    blocks: Option<usize>,
    #[arg(long)]
    towers: Option<usize>,
    #[arg(long)]
    children: Option<usize>,
    #[arg(long)]
    gluten_ratio: Option<f64>,
    #[arg(long)]
    trays: Option<usize>,
    #[arg(long)]
    tables: Option<usize>,
}

impl ParamArgs {
    fn params(&self) -> GenParams {
        GenParams {
            size: self.size,
            x: self.x,
            y: self.y,
            packages: self.packages,
            agents: self.agents,
            unique_targets: self.unique_targets.then_some(true),
            balls: self.balls,
            spanners: self.spanners,
            nuts: self.nuts,
            locations: self.locations,
            floors: self.floors,
            passengers: self.passengers,
            rewards: self.rewards,
            obstacles: self.obstacles,
            visit_fraction: self.visit_fraction,
            blocks: self.blocks,
            towers: self.towers,
            children: self.children,
            gluten_ratio: self.gluten_ratio,
            trays: self.trays,
            tables: self.tables,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct InstanceArgs {
    #[arg(long)]
    domain_file: PathBuf,
    #[arg(long)]
    problem_file: PathBuf,
}

#[derive(Args, Debug, Serialize, Clone)]
struct ExecArgs {
    /// IW width per subgoal call.
    #[arg(long, default_value = "1", value_parser = parse_width)]
    width: Width,
    #[arg(long, default_value = "greedy")]
    selection: Selection,
    /// Never select a subgoal state twice.
    #[arg(long)]
    cycle_prevention: bool,
    /// IW call budget; defaults to 4 * (goal atoms + 1).
    #[arg(long)]
    max_calls: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Extend tasks with unsatisfied-goal atoms (needed for policies trained that way).
    #[arg(long)]
    unsatisfied_goal_atoms: bool,
}

impl ExecArgs {
    fn options(&self) -> ExecOptions {
        ExecOptions {
            k: self.width,
            cycle_prevention: self.cycle_prevention,
            max_calls: self.max_calls,
            selection: self.selection,
            seed: self.seed,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value = "uniform", value_parser = parse_policy)]
    policy: PolicyArg,
    #[command(flatten)]
    exec: ExecArgs,
    /// Also write the text trace here.
    #[arg(long)]
    trace_out: Option<PathBuf>,
    /// Write the trace as JSON.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct TrainArgs {
    /// Directory of problem files; the domain is read from `domain.pddl` there unless given.
    #[arg(long)]
    instances: PathBuf,
    #[arg(long)]
    domain_file: Option<PathBuf>,
    #[arg(long, default_value = "1", value_parser = parse_width)]
    width: Width,
    #[arg(long, default_value_t = 0.999)]
    gamma: f64,
    #[arg(long, default_value_t = 2e-4)]
    alpha: f64,
    /// Critic step size; defaults to alpha.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    iterations: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "uniform-alive", value_parser = parse_prior)]
    prior: Prior,
    #[arg(long, default_value = "sgd", value_parser = parse_optimizer)]
    optimizer: Optimizer,
    /// Stop once the validation ratio on the training instances reaches this value.
    #[arg(long)]
    early_stop_ratio: Option<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    eval_every: u64,
    #[arg(long, default_value = "primitive-length", value_parser = parse_metric)]
    validation_metric: ValidationMetric,
    #[arg(long)]
    unsatisfied_goal_atoms: bool,
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    state_cap: usize,
    #[arg(long)]
    out: PathBuf,
}

fn parse_prior(s: &str) -> Result<Prior, String> {
    match s {
        "uniform-alive" => Ok(Prior::UniformAlive),
        "init-only" => Ok(Prior::InitOnly),
        _ => Err(format!("expected uniform-alive or init-only, got `{s}`")),
    }
}

fn parse_optimizer(s: &str) -> Result<Optimizer, String> {
    match s {
        "sgd" => Ok(Optimizer::Sgd),
        "adam" => Ok(Optimizer::Adam),
        _ => Err(format!("expected sgd or adam, got `{s}`")),
    }
}

fn parse_metric(s: &str) -> Result<ValidationMetric, String> {
    match s {
        "primitive-length" => Ok(ValidationMetric::PrimitiveLength),
        "subgoal-count" => Ok(ValidationMetric::SubgoalCount),
        _ => Err(format!("expected primitive-length or subgoal-count, got `{s}`")),
    }
}

#[derive(Args, Debug, Serialize)]
struct ValidateArgs {
    #[arg(long)]
    plan: PathBuf,
    #[command(flatten)]
    instance: InstanceArgs,
}

#[derive(Args, Debug, Serialize)]
struct BenchArgs {
    /// Suite manifest (parameter grids per domain).
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long, default_value = "uniform", value_parser = parse_policy)]
    policy: PolicyArg,
    #[command(flatten)]
    exec: ExecArgs,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Skip the BFS optimum (no PQ column).
    #[arg(long)]
    no_oracle: bool,
    #[arg(long, default_value_t = 200_000)]
    oracle_cap: usize,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct CheckSketchArgs {
    /// Built-in ruleset name (R1..R4) or a ruleset JSON file.
    #[arg(long)]
    ruleset: String,
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value_t = 1_000_000)]
    state_cap: usize,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Internal(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))
}

fn load_instance(args: &InstanceArgs, ug: bool, m: &mut Manifest) -> Result<GroundedTask, Failure> {
    let dom = read(&args.domain_file)?;
    let prob = read(&args.problem_file)?;
    let mut task = load_task(&dom, &prob).map_err(|e| Failure::Internal(format!("{}: {e}", args.problem_file.display())))?;
    if ug {
        task = add_unsatisfied_goal_predicates(&task);
    }
    m.input(&args.domain_file, &dom);
    m.input(&args.problem_file, &prob);
    m.task(&task);
    Ok(task)
}

fn domain_tag(task: &GroundedTask) -> Result<DomainTag, Failure> {
    DomainTag::from_domain_name(&task.domain_name)
        .ok_or_else(|| Failure::Usage(format!("no built-in sketch bindings for domain `{}`", task.domain_name)))
}

fn cmd_gen(args: &GenArgs, m: &mut Manifest) -> Result<Vec<PathBuf>, Failure> {
    let specs = match (&args.suite, args.domain) {
        (Some(path), _) => {
            m.input(path, &read(path)?);
            suite(path).map_err(internal)?
        }
        (None, Some(domain)) => vec![GenSpec {
            domain,
            seed: args.seed,
            params: args.params.params(),
        }],
        (None, None) => return Err(Failure::Usage("either --domain or --suite is required".into())),
    };
    let mixed = specs.iter().any(|s| s.domain != specs[0].domain);
    let mut written = Vec::new();
    for spec in &specs {
        let (dom, prob) = generate(spec).map_err(|e| Failure::Usage(e.to_string()))?;
        let dir = if mixed { args.out_dir.join(spec.domain.as_str()) } else { args.out_dir.clone() };
        let domain_path = dir.join("domain.pddl");
        if !written.contains(&domain_path) {
            write(&domain_path, &dom)?;
            written.push(domain_path);
        }
        let path = dir.join(format!("{}.pddl", spec.instance_id()));
        write(&path, &prob)?;
        println!("{}", path.display());
        written.push(path);
    }
    m.resolved("specs", &specs);
    Ok(written)
}

fn make_policy(arg: &PolicyArg, task: &GroundedTask) -> Result<Box<dyn SubgoalPolicy>, Failure> {
    Ok(match arg {
        PolicyArg::Uniform => Box::new(UniformPolicy),
        PolicyArg::Sketch(r) => Box::new(sketch_policy(
            builtin_ruleset(*r, domain_tag(task)?).map_err(|e| Failure::Usage(e.to_string()))?,
        )),
        PolicyArg::Ruleset(p) => Box::new(sketch_policy(Ruleset::load(p).map_err(internal)?)),
        PolicyArg::Trained(p) => {
            let pol = TabularPolicy::load(p).map_err(internal)?;
            if pol.table(task).is_none() {
                warn!("{} holds no table for this instance; its choices are uniform", p.display());
            }
            Box::new(pol)
        }
    })
}

fn cmd_solve(args: &SolveArgs, m: &mut Manifest) -> Run {
    let task = load_instance(&args.instance, args.exec.unsatisfied_goal_atoms, m)?;
    if let Some(p) = args.policy.input() {
        m.input(p, &read(p)?);
    }
    let pol = make_policy(&args.policy, &task)?;
    let opts = args.exec.options();
    m.resolved("exec", &opts);
    m.resolved("max_calls", opts.max_calls_for(&task));
    m.resolved("policy", pol.name());
    let trace = siw_pi(&task, pol.as_ref(), &opts);
    let text = emit_trace(&trace, &task);
    print!("{text}");
    if let Some(p) = &args.trace_out {
        write(p, &text)?;
        m.output(p);
    }
    if let Some(p) = &args.json_out {
        let v = trace.to_json(&task);
        write(p, &serde_json::to_string_pretty(&v).map_err(internal)?)?;
        m.output(p);
    }
    if trace.solved {
        Ok(())
    } else {
        let reason = trace.failure.map_or("unknown", |f| f.as_str());
        Err(Failure::Unsolved(format!("unsolved: {reason}")))
    }
}

fn problem_files(dir: &Path, domain: &Path) -> Result<Vec<PathBuf>, Failure> {
    let entries = std::fs::read_dir(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "pddl") && p != domain)
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Failure::Usage(format!("no problem files in {}", dir.display())));
    }
    Ok(files)
}

fn cmd_train(args: &TrainArgs, m: &mut Manifest) -> Run {
    let domain_path = args.domain_file.clone().unwrap_or_else(|| args.instances.join("domain.pddl"));
    let mut tasks = Vec::new();
    for p in problem_files(&args.instances, &domain_path)? {
        let inst = InstanceArgs {
            domain_file: domain_path.clone(),
            problem_file: p,
        };
        tasks.push(load_instance(&inst, args.unsatisfied_goal_atoms, m)?);
    }
    let cfg = PolicyConfig {
        gamma: args.gamma,
        alpha: args.alpha,
        beta: args.beta.unwrap_or(args.alpha),
        iterations: args.iterations,
        seed: args.seed,
        k: args.width,
        prior: args.prior,
        optimizer: args.optimizer,
        state_cap: args.state_cap,
    };
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    m.resolved("config", &cfg);
    let exec = ExecOptions {
        k: args.width,
        ..Default::default()
    };
    let score = |pol: &TabularPolicy| validation_score(&tasks, pol, &exec, args.validation_metric, args.state_cap);
    let hooks = match args.early_stop_ratio {
        Some(target) => TrainHooks {
            eval_every: args.eval_every.max(1),
            on_eval: Some(Box::new(move |it, pol| match score(pol) {
                Ok(v) => {
                    info!("iteration {it}: validation ratio {:.4}", v.ratio);
                    v.ratio <= target
                }
                Err(e) => {
                    warn!("validation skipped: {e}");
                    false
                }
            })),
        },
        None => TrainHooks::default(),
    };
    let (pol, stats) = train_actor_critic_with(&tasks, &cfg, hooks).map_err(internal)?;
    pol.save(&args.out).map_err(internal)?;
    m.output(&args.out);
    m.resolved("iterations_run", stats.iterations);
    m.resolved("stopped_early", stats.stopped_early);
    println!(
        "trained {} iterations on {} instances ({} alive states){}",
        stats.iterations,
        tasks.len(),
        stats.alive_states,
        if stats.stopped_early { ", stopped early" } else { "" }
    );
    if args.early_stop_ratio.is_some() {
        let v = score(&pol).map_err(internal)?;
        println!("validation ratio {:.4} over {} states", v.ratio, v.states);
        m.resolved("validation", v);
    }
    Ok(())
}

fn cmd_validate(args: &ValidateArgs, m: &mut Manifest) -> Run {
    let task = load_instance(&args.instance, false, m)?;
    let text = read(&args.plan)?;
    m.input(&args.plan, &text);
    let plan = Plan::parse(&task, &text).map_err(|e| Failure::Usage(format!("{}: {e}", args.plan.display())))?;
    match validate(&task, task.init(), &plan) {
        Ok(_) => {
            println!("Plan valid ({} actions)", plan.len());
            Ok(())
        }
        Err(e) => Err(Failure::Unsolved(format!("Plan invalid: {e}"))),
    }
}

fn cmd_bench(args: &BenchArgs, m: &mut Manifest) -> Run {
    m.input(&args.manifest, &read(&args.manifest)?);
    if let Some(p) = args.policy.input() {
        m.input(p, &read(p)?);
    }
    let specs = suite(&args.manifest).map_err(|e| Failure::Usage(e.to_string()))?;
    let source = args.policy.source()?;
    let opts = BenchOptions {
        exec: args.exec.options(),
        unsatisfied_goal_atoms: args.exec.unsatisfied_goal_atoms,
        oracle: !args.no_oracle,
        oracle_state_cap: args.oracle_cap,
        jobs: args.jobs,
        suite_seed: args.exec.seed,
    };
    m.resolved("bench", &opts);
    m.resolved("specs", &specs);
    let (records, agg) = run_suite(&specs, &source, &opts).map_err(internal)?;
    let name = args.manifest.file_stem().map_or("suite".into(), |s| s.to_string_lossy().into_owned());
    let rows: Vec<CurveRow> = records
        .iter()
        .map(|r| CurveRow {
            instance: r.instance.clone(),
            x: r.objects,
            x_total: r.objects + r.agents.unwrap_or(0),
            y: r.subgoals,
            agents: r.agents,
            solved: r.solved,
        })
        .collect();
    for (file, text) in [
        ("records.csv", records_to_csv(&records)),
        ("aggregate.csv", aggregate_to_csv(&name, &agg)),
        ("curve.csv", curve_to_csv(&rows)),
    ] {
        let p = args.out_dir.join(file);
        write(&p, &text)?;
        m.output(&p);
    }
    println!("{}", report_line(&name, &agg));
    if agg.solved < agg.instances {
        return Err(Failure::Unsolved(format!("{} of {} instances unsolved", agg.instances - agg.solved, agg.instances)));
    }
    Ok(())
}

fn cmd_check_sketch(args: &CheckSketchArgs, m: &mut Manifest) -> Run {
    let task = load_instance(&args.instance, false, m)?;
    let ruleset = match args.ruleset.parse::<RulesetName>() {
        Ok(name) => builtin_ruleset(name, domain_tag(&task)?).map_err(|e| Failure::Usage(e.to_string()))?,
        Err(_) => {
            let p = Path::new(&args.ruleset);
            m.input(p, &read(p)?);
            Ruleset::load(p).map_err(|e| Failure::Usage(e.to_string()))?
        }
    };
    let report = check_safe_acyclic(&ruleset, &task, args.state_cap).map_err(internal)?;
    println!(
        "{}: {} reachable, {} alive, {} subgoal edges, {} stuck",
        ruleset.name, report.reachable_states, report.alive_states, report.edges, report.stuck_states
    );
    m.resolved("report", json!({
        "reachable_states": report.reachable_states,
        "alive_states": report.alive_states,
        "edges": report.edges,
        "stuck_states": report.stuck_states,
        "safe_and_acyclic": report.is_safe_and_acyclic(),
    }));
    match &report.violation {
        None => {
            println!("safe and acyclic");
            Ok(())
        }
        Some(v) => {
            println!("violation: {:?}", v.kind);
            for (i, s) in v.witness.iter().enumerate() {
                println!("  {i}: {}", s.display(&task));
            }
            Err(Failure::Unsolved(format!("{:?} found", v.kind)))
        }
    }
}

fn run(cli: &Cli) -> Run {
    let mut m = Manifest::new(&cli.command);
    let outcome = match &cli.command {
        Command::Gen(a) => cmd_gen(a, &mut m).map(|files| {
            m.default_path(a.out_dir.join("run-manifest.json"));
            for f in files {
                m.output(&f);
            }
        }),
        Command::Solve(a) => {
            if let Some(p) = a.json_out.as_ref().or(a.trace_out.as_ref()) {
                m.default_path(p.with_extension("manifest.json"));
            }
            cmd_solve(a, &mut m)
        }
        Command::Train(a) => {
            m.default_path(a.out.with_extension("manifest.json"));
            cmd_train(a, &mut m)
        }
        Command::Validate(a) => cmd_validate(a, &mut m),
        Command::Bench(a) => {
            m.default_path(a.out_dir.join("run-manifest.json"));
            cmd_bench(a, &mut m)
        }
        Command::CheckSketch(a) => cmd_check_sketch(a, &mut m),
    };
    if matches!(outcome, Ok(()) | Err(Failure::Unsolved(_))) {
        if let Some(path) = cli.manifest_out.clone().or_else(|| m.path().map(Path::to_path_buf)) {
            write(&path, &m.to_json())?;
        }
    }
    outcome
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("WIDTHDECOMP_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("widthdecomp: {f}");
            ExitCode::from(f.code())
        }
    }
}
