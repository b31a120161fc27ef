//! Command-line entry point: solve `.cdp` models (or built-in encodings),
//! run the brute-force verification oracle, generate benchmark-family
//! instances, and check set properties against a model.
//!
//! Exit codes: 0 success (an unsatisfiable model is not an error), 2 for
//! model/parse/usage problems, 3 when a limit was exceeded, 1 otherwise.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cdp_core::cpnet;
use cdp_core::dominance::{self, DominanceSpec, NogoodMode};
use cdp_core::driver::{
    self, backward_pass, brute_force_full_solution, check_complete, check_domination_free,
    check_equivalence_free, solve_forward_limited, Properties, RunLimits, RunReport, RunStats,
};
use cdp_core::dsl;
use cdp_core::encodings::{itemset_model, ItemsetKind, TransactionDb};
use cdp_core::engine::{self, SearchConfig, ValOrder, VarOrder};
use cdp_core::generate;
use cdp_core::ir::{instance_to_json, Instance, VarId};

#[derive(Parser)]
#[command(name = "cdp", version, about = "Constraint dominance problem solver")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a model with the solve-and-post-nogood loop
    Solve(SolveArgs),
    /// Enumerate all solutions and filter non-dominated ones by brute force
    Oracle(OracleArgs),
    /// Generate benchmark-family instances
    Gen(GenArgs),
    /// Check complete/domination-free/equivalence-free on a reported set
    Check(CheckArgs),
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Path to a `.cdp` model file
    model: Option<PathBuf>,
    /// CP-net file providing the dominance relation
    #[arg(long)]
    cpnet: Option<PathBuf>,
    /// Transaction database (one transaction per line)
    #[arg(long)]
    db: Option<PathBuf>,
    /// Itemset pattern family for --db
    #[arg(long, value_enum)]
    itemset: Option<ItemsetArg>,
    /// Minimum pattern frequency for --db
    #[arg(long)]
    theta: Option<u64>,
    /// Minimize a variable (total-order dominance)
    #[arg(long)]
    minimize: Option<String>,
    /// Lexicographically minimize comma-separated variables
    #[arg(long)]
    lex: Option<String>,
    /// Pareto-minimize comma-separated variables
    #[arg(long)]
    pareto: Option<String>,
    /// Subset-minimize a boolean array (or comma-separated variables)
    #[arg(long)]
    subset_min: Option<String>,
    /// Subset-maximize a boolean array (or comma-separated variables)
    #[arg(long)]
    subset_max: Option<String>,
    /// Nogood mode for relation-backed dominance
    #[arg(long, value_enum, default_value = "eq-free")]
    mode: ModeArg,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Drop forward solutions strictly dominated by later ones
    #[arg(long)]
    backward: bool,
    #[arg(long, value_enum, default_value = "input")]
    var_order: VarOrderArg,
    #[arg(long, value_enum, default_value = "min")]
    val_order: ValOrderArg,
    /// Stop after this many solutions (reported as truncated)
    #[arg(long)]
    limit_solutions: Option<u64>,
    /// Abort the search after this many nodes
    #[arg(long)]
    limit_nodes: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    emit: EmitArg,
    /// Recorded in the report for provenance
    #[arg(long)]
    seed: Option<u64>,
    /// Write the lowered instance as canonical JSON and continue
    #[arg(long)]
    dump_instance: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Maximum number of solutions to enumerate
    #[arg(long, default_value_t = 1_000_000)]
    limit: usize,
    #[arg(long, value_enum, default_value = "json")]
    emit: EmitArg,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    family: GenFamily,
}

#[derive(Subcommand)]
enum GenFamily {
    /// Weighted soft-constraint instances (reified model)
    Maxcsp {
        #[arg(long, default_value_t = 8)]
        vars: usize,
        #[arg(long, default_value_t = 12)]
        cons: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Bi-objective traveling salesman instances
    BiobjTsp {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Photo-row positioning with CP-net preferences
    CpnetPhoto {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Random transaction database plus pattern-mining model
    Itemset {
        #[arg(long, default_value_t = 5)]
        items: usize,
        #[arg(long, default_value_t = 8)]
        transactions: usize,
        #[arg(long, default_value_t = 2)]
        theta: u64,
        #[arg(long, value_enum, default_value = "maximal")]
        kind: ItemsetArg,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Report JSON whose final_set is the candidate set
    #[arg(long)]
    set: PathBuf,
    /// Enumeration limit for the completeness check
    #[arg(long, default_value_t = 1_000_000)]
    limit: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Exclude solutions equivalent to earlier ones
    EqFree,
    /// Keep equivalent solutions admissible
    Complete,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VarOrderArg {
    Input,
    FirstFail,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ValOrderArg {
    Min,
    Max,
    /// Booleans try 1 before 0; other variables ascend
    Preferred,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EmitArg {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ItemsetArg {
    Frequent,
    Closed,
    Maximal,
}

impl From<ItemsetArg> for ItemsetKind {
    fn from(a: ItemsetArg) -> ItemsetKind {
        match a {
            ItemsetArg::Frequent => ItemsetKind::Frequent,
            ItemsetArg::Closed => ItemsetKind::Closed,
            ItemsetArg::Maximal => ItemsetKind::Maximal,
        }
    }
}

/// Errors mapped to exit codes.
enum CliError {
    /// Unreadable/invalid model or incompatible flags (exit 2)
    Model(String),
    /// A limit was exceeded (exit 3)
    Limit(String),
    /// Everything else (exit 1)
    Other(String),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Model(_) => ExitCode::from(2),
            CliError::Limit(_) => ExitCode::from(3),
            CliError::Other(_) => ExitCode::from(1),
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Model(m) | CliError::Limit(m) | CliError::Other(m) => m,
        }
    }
}

fn model_err(msg: impl Into<String>) -> CliError {
    CliError::Model(msg.into())
}

struct Problem {
    instance: Instance,
    spec: Option<DominanceSpec>,
    mode: NogoodMode,
    model_path: Option<String>,
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| model_err(format!("{}: {e}", path.display())))
}

/// Resolves a comma-separated list of variable names, or an array name that
/// expands to its element variables in declaration order.
fn resolve_vars(instance: &Instance, names: &str) -> Result<Vec<VarId>, CliError> {
    let mut out = Vec::new();
    for name in names.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some(decl) = instance.var_by_name(name) {
            out.push(decl.id);
            continue;
        }
        let prefix = format!("{name}[");
        let elems: Vec<VarId> = instance
            .vars
            .iter()
            .filter(|v| v.name.starts_with(&prefix) && v.name.ends_with(']'))
            .map(|v| v.id)
            .collect();
        if elems.is_empty() {
            return Err(model_err(format!("unknown variable or array `{name}`")));
        }
        out.extend(elems);
    }
    if out.is_empty() {
        return Err(model_err("empty variable list"));
    }
    Ok(out)
}

fn build_problem(args: &ModelArgs) -> Result<Problem, CliError> {
    let mode = match args.mode {
        ModeArg::EqFree => NogoodMode::EquivalenceFree,
        ModeArg::Complete => NogoodMode::WithEquivalence,
    };

    // itemset route: a database instead of a model file
    if let Some(db_path) = &args.db {
        if args.model.is_some() {
            return Err(model_err("--db cannot be combined with a model file"));
        }
        let kind = args
            .itemset
            .ok_or_else(|| model_err("--db requires --itemset"))?;
        let theta = args
            .theta
            .ok_or_else(|| model_err("--db requires --theta"))?;
        let text = read_file(db_path)?;
        let db = TransactionDb::parse(&text, theta).map_err(|e| model_err(e.to_string()))?;
        let model = itemset_model(&db, kind.into()).map_err(|e| model_err(e.to_string()))?;
        return Ok(Problem {
            instance: model.instance,
            spec: model.spec,
            mode,
            model_path: Some(db_path.display().to_string()),
        });
    }

    let model_path = args
        .model
        .as_ref()
        .ok_or_else(|| model_err("expected a model file (or --db)"))?;
    let source = read_file(model_path)?;
    let ast =
        dsl::parse(&source).map_err(|e| model_err(format!("{}:{e}", model_path.display())))?;
    let lowered =
        dsl::lower(&ast).map_err(|e| model_err(format!("{}:{e}", model_path.display())))?;
    let instance = lowered.instance;

    // explicit relation flags take precedence over the model's template
    let mut specs: Vec<DominanceSpec> = Vec::new();
    if let Some(net_path) = &args.cpnet {
        let net = cpnet::parse_text(&read_file(net_path)?)
            .map_err(|e| model_err(format!("{}: {e}", net_path.display())))?;
        specs.push(
            DominanceSpec::cpnet(net, &instance, mode).map_err(|e| model_err(e.to_string()))?,
        );
    }
    if let Some(name) = &args.minimize {
        let vars = resolve_vars(&instance, name)?;
        if vars.len() != 1 {
            return Err(model_err("--minimize takes a single variable"));
        }
        specs.push(
            DominanceSpec::total_order(cdp_core::Expr::var(vars[0]), mode)
                .map_err(|e| model_err(e.to_string()))?,
        );
    }
    if let Some(names) = &args.lex {
        let vars = resolve_vars(&instance, names)?;
        let objectives = vars.into_iter().map(cdp_core::Expr::var).collect();
        specs.push(DominanceSpec::lex(objectives, mode).map_err(|e| model_err(e.to_string()))?);
    }
    if let Some(names) = &args.pareto {
        let vars = resolve_vars(&instance, names)?;
        let objectives = vars.into_iter().map(cdp_core::Expr::var).collect();
        specs.push(DominanceSpec::pareto(objectives, mode).map_err(|e| model_err(e.to_string()))?);
    }
    if let Some(names) = &args.subset_min {
        let vars = resolve_vars(&instance, names)?;
        specs.push(
            DominanceSpec::subset_min(vars, &instance, mode)
                .map_err(|e| model_err(e.to_string()))?,
        );
    }
    if let Some(names) = &args.subset_max {
        let vars = resolve_vars(&instance, names)?;
        specs.push(
            DominanceSpec::subset_max(vars, &instance, mode)
                .map_err(|e| model_err(e.to_string()))?,
        );
    }
    if specs.len() > 1 {
        return Err(model_err("conflicting dominance flags"));
    }
    let mut spec = specs.pop();
    if spec.is_none() {
        if let Some(template) = &lowered.nogood_template {
            let template_mode = if lowered.with_equivalence {
                NogoodMode::WithEquivalence
            } else {
                NogoodMode::EquivalenceFree
            };
            spec = Some(
                DominanceSpec::custom(template.clone(), template_mode)
                    .map_err(|e| model_err(e.to_string()))?,
            );
        }
    }
    let mode = spec.as_ref().map(|s| s.mode).unwrap_or(mode);
    Ok(Problem {
        instance,
        spec,
        mode,
        model_path: Some(model_path.display().to_string()),
    })
}

fn search_config(
    instance: &Instance,
    var_order: VarOrderArg,
    val_order: ValOrderArg,
    node_limit: Option<u64>,
) -> SearchConfig {
    SearchConfig {
        var_order: match var_order {
            VarOrderArg::Input => VarOrder::InputOrder,
            VarOrderArg::FirstFail => VarOrder::FirstFail,
        },
        val_order: match val_order {
            ValOrderArg::Min => ValOrder::MinFirst,
            ValOrderArg::Max => ValOrder::MaxFirst,
            ValOrderArg::Preferred => ValOrder::PreferredFirst(
                instance
                    .vars
                    .iter()
                    .filter(|v| v.domain.is_bool())
                    .map(|v| (v.id, vec![1, 0]))
                    .collect(),
            ),
        },
        node_limit,
    }
}

#[derive(Serialize)]
struct CliReport {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    model: Option<String>,
    mode: &'static str,
    backward: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(flatten)]
    report: RunReport,
}

fn mode_name(mode: NogoodMode) -> &'static str {
    match mode {
        NogoodMode::EquivalenceFree => "eq-free",
        NogoodMode::WithEquivalence => "complete",
    }
}

/// Prints to stdout, treating a closed pipe as a quiet exit.
fn print_out(text: &str) {
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{text}").is_err() {
        std::process::exit(0);
    }
}

fn emit_report(emit: EmitArg, report: &CliReport, instance: &Instance) {
    match emit {
        EmitArg::Json => {
            print_out(&serde_json::to_string_pretty(report).expect("serializable"));
        }
        EmitArg::Text => {
            // one solution per line in declaration order; stats on stderr
            let rows = if report.backward || report.report.solutions.is_empty() {
                &report.report.final_set
            } else {
                &report.report.solutions
            };
            for map in rows {
                let line: Vec<String> = instance
                    .vars
                    .iter()
                    .map(|v| format!("{}={}", v.name, map.get(&v.name).copied().unwrap_or(0)))
                    .collect();
                print_out(&line.join(" "));
            }
            eprintln!(
                "stats: oracle_calls={} nodes={} millis={}",
                report.report.stats.oracle_calls,
                report.report.stats.nodes,
                report.report.stats.millis
            );
        }
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<(), CliError> {
    let problem = build_problem(&args.model)?;
    if let Some(path) = &args.dump_instance {
        std::fs::write(path, instance_to_json(&problem.instance))
            .map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?;
    }
    let config = search_config(
        &problem.instance,
        args.var_order,
        args.val_order,
        args.limit_nodes,
    );
    let limits = RunLimits {
        max_solutions: args.limit_solutions,
    };

    let mut run = match &problem.spec {
        Some(spec) => solve_forward_limited(&problem.instance, spec, problem.mode, &config, limits)
            .map_err(|e| CliError::Other(e.to_string()))?,
        None => plain_enumeration(&problem.instance, &config, limits)?,
    };

    let mut properties = Properties::default();
    if args.backward {
        if run.truncated.is_some() {
            return Err(CliError::Limit(
                "run truncated by a limit; backward pass skipped".into(),
            ));
        }
        match &problem.spec {
            Some(spec) => {
                let final_set =
                    backward_pass(&run, spec).map_err(|e| CliError::Other(e.to_string()))?;
                if !spec.is_custom() {
                    properties.domination_free =
                        Some(check_domination_free(&final_set, spec).unwrap_or(false));
                    properties.equivalence_free =
                        Some(check_equivalence_free(&final_set, spec).unwrap_or(false));
                }
                run.final_set = Some(final_set);
            }
            None => run.final_set = Some(run.forward_solutions.clone()),
        }
    } else if run.final_set.is_none() {
        run.final_set = Some(run.forward_solutions.clone());
    }
    if run.truncated.is_some() {
        // partial runs make no completeness claims
        properties = Properties::default();
    }

    let report = CliReport {
        command: "solve",
        model: problem.model_path,
        mode: mode_name(problem.mode),
        backward: args.backward,
        seed: args.seed,
        report: run.report(properties),
    };
    emit_report(args.emit, &report, &problem.instance);
    if run.truncated.is_some() {
        return Err(CliError::Limit("run truncated by a limit".into()));
    }
    Ok(())
}

/// Enumeration pipeline for models without any dominance selection.
fn plain_enumeration(
    instance: &Instance,
    config: &SearchConfig,
    limits: RunLimits,
) -> Result<driver::CdpRun, CliError> {
    let start = std::time::Instant::now();
    let mut state = engine::post(instance).map_err(|e| model_err(e.to_string()))?;
    let mut forward = Vec::new();
    let mut truncated = None;
    let mut oracle_calls = 0;
    loop {
        if let Some(max) = limits.max_solutions {
            if forward.len() as u64 >= max {
                truncated = Some(driver::Truncation::Solutions);
                break;
            }
        }
        oracle_calls += 1;
        match state.next_solution(config) {
            Ok(Some(s)) => forward.push(s),
            Ok(None) => break,
            Err(engine::EngineError::NodeLimit) => {
                truncated = Some(driver::Truncation::Nodes);
                break;
            }
            Err(e) => return Err(CliError::Other(e.to_string())),
        }
    }
    Ok(driver::CdpRun {
        instance: instance.clone(),
        mode: NogoodMode::EquivalenceFree,
        config: config.clone(),
        forward_solutions: forward,
        final_set: None,
        stats: RunStats {
            oracle_calls,
            nodes: state.nodes(),
            millis: start.elapsed().as_millis() as u64,
        },
        truncated,
        nogoods_posted: 0,
    })
}

fn cmd_oracle(args: &OracleArgs) -> Result<(), CliError> {
    let problem = build_problem(&args.model)?;
    let start = std::time::Instant::now();
    let (final_set, properties) = match &problem.spec {
        Some(spec) if spec.is_custom() => {
            return Err(model_err(
                "relation check unavailable for dominance_nogood models; use `cdp check`",
            ));
        }
        Some(spec) => {
            let full = brute_force_full_solution(&problem.instance, spec, args.limit).map_err(
                |e| match e {
                    driver::DriverError::LimitExceeded(_) => CliError::Limit(e.to_string()),
                    other => CliError::Other(other.to_string()),
                },
            )?;
            let properties = Properties {
                complete: Some(
                    check_complete(&full, &problem.instance, spec, args.limit)
                        .map_err(|e| CliError::Other(e.to_string()))?,
                ),
                domination_free: Some(
                    check_domination_free(&full, spec)
                        .map_err(|e| CliError::Other(e.to_string()))?,
                ),
                equivalence_free: Some(
                    check_equivalence_free(&full, spec)
                        .map_err(|e| CliError::Other(e.to_string()))?,
                ),
            };
            (full, properties)
        }
        None => {
            let all =
                engine::enumerate_all(&problem.instance, args.limit).map_err(|e| match e {
                    engine::EngineError::SolutionLimit => CliError::Limit(e.to_string()),
                    other => CliError::Other(other.to_string()),
                })?;
            (all, Properties::default())
        }
    };
    let report = CliReport {
        command: "oracle",
        model: problem.model_path,
        mode: mode_name(problem.mode),
        backward: true,
        seed: None,
        report: RunReport {
            solutions: vec![],
            final_set: final_set
                .iter()
                .map(|s| driver::valuation_map(&problem.instance, s))
                .collect(),
            properties,
            stats: RunStats {
                oracle_calls: 1,
                nodes: 0,
                millis: start.elapsed().as_millis() as u64,
            },
            truncated: None,
        },
    };
    emit_report(args.emit, &report, &problem.instance);
    Ok(())
}

fn write_out(path: &Path, content: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::Other(format!("{}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, content)
        .map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?;
    print_out(&path.display().to_string());
    Ok(())
}

fn cmd_gen(args: &GenArgs) -> Result<(), CliError> {
    match &args.family {
        GenFamily::Maxcsp {
            vars,
            cons,
            seed,
            out,
        } => {
            if *vars < 2 || *cons < 1 {
                return Err(model_err("maxcsp needs --vars >= 2 and --cons >= 1"));
            }
            let gen = generate::random_maxcsp(*vars, *cons, *seed);
            let path = out.join(format!("maxcsp_v{vars}c{cons}_s{seed}.cdp"));
            write_out(&path, &dsl::print_model(&gen.reified_model()))?;
        }
        GenFamily::BiobjTsp { n, seed, out } => {
            if *n < 3 {
                return Err(model_err("biobj-tsp needs --n >= 3"));
            }
            let tsp = generate::biobj_tsp(*n, *seed);
            let path = out.join(format!("tsp_n{n}_s{seed}.cdp"));
            write_out(&path, &dsl::print_model(&tsp.model_ast()))?;
        }
        GenFamily::CpnetPhoto { n, k, seed, out } => {
            if *k >= *n {
                return Err(model_err("--k must be below --n"));
            }
            let net = cpnet::photo_net(*n, *k, *seed);
            let model = generate::photo_model_ast(&net);
            write_out(
                &out.join(format!("photo_n{n}k{k}_s{seed}.cdp")),
                &dsl::print_model(&model),
            )?;
            write_out(
                &out.join(format!("photo_n{n}k{k}_s{seed}.cpnet")),
                &cpnet::write_text(&net),
            )?;
        }
        GenFamily::Itemset {
            items,
            transactions,
            theta,
            kind,
            seed,
            out,
        } => {
            if *items < 1 || *items > 26 || *transactions < 1 || *theta < 1 {
                return Err(model_err(
                    "itemset needs 1 <= --items <= 26, --transactions >= 1, --theta >= 1",
                ));
            }
            let db = generate::random_db(*items, *transactions, *theta, *seed);
            write_out(
                &out.join(format!("itemset_i{items}t{transactions}_s{seed}.db")),
                &db.write(),
            )?;
            let model = generate::itemset_model_ast(&db, (*kind).into());
            write_out(
                &out.join(format!("itemset_i{items}t{transactions}_s{seed}.cdp")),
                &dsl::print_model(&model),
            )?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CheckReport {
    command: &'static str,
    model: Option<String>,
    properties: Properties,
    /// Indices of set members that do not satisfy the model's constraints.
    invalid_members: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    domination_witness: Option<(BTreeMap<String, i64>, BTreeMap<String, i64>)>,
}

fn cmd_check(args: &CheckArgs) -> Result<(), CliError> {
    let problem = build_problem(&args.model)?;
    let text = read_file(&args.set)?;
    let parsed: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| model_err(format!("set file: {e}")))?;
    let maps: Vec<BTreeMap<String, i64>> = match parsed.get("final_set") {
        Some(v) => {
            serde_json::from_value(v.clone()).map_err(|e| model_err(format!("set file: {e}")))?
        }
        None => serde_json::from_value(parsed).map_err(|e| model_err(format!("set file: {e}")))?,
    };
    let mut set = Vec::with_capacity(maps.len());
    for (i, map) in maps.iter().enumerate() {
        let v = driver::valuation_from_map(&problem.instance, map)
            .ok_or_else(|| model_err(format!("set member {i} missing variables")))?;
        set.push(v);
    }
    let mut invalid = Vec::new();
    for (i, v) in set.iter().enumerate() {
        if !cdp_core::ir::check(&problem.instance, v).unwrap_or(false) {
            invalid.push(i);
        }
    }

    let mut properties = Properties::default();
    let mut witness = None;
    match &problem.spec {
        None => {}
        Some(spec) if spec.is_custom() => {
            // nogood-based checks: a member excluded by another member's
            // nogood violates domination-freeness
            let mut free = true;
            'outer: for y in &set {
                for x in &set {
                    if std::ptr::eq(x, y) {
                        continue;
                    }
                    let admits = dominance::eval_nogood(spec, y, x)
                        .map_err(|e| CliError::Other(e.to_string()))?;
                    if !admits {
                        free = false;
                        witness = Some((
                            driver::valuation_map(&problem.instance, x),
                            driver::valuation_map(&problem.instance, y),
                        ));
                        break 'outer;
                    }
                }
            }
            properties.domination_free = Some(free);
            if spec.mode == NogoodMode::EquivalenceFree {
                // covered == some member's nogood excludes it
                let all = engine::enumerate_all(&problem.instance, args.limit)
                    .map_err(|e| CliError::Limit(e.to_string()))?;
                let mut complete = true;
                for x in &all {
                    let mut covered = false;
                    for y in &set {
                        if !dominance::eval_nogood(spec, y, x)
                            .map_err(|e| CliError::Other(e.to_string()))?
                        {
                            covered = true;
                            break;
                        }
                    }
                    if !covered {
                        complete = false;
                        break;
                    }
                }
                properties.complete = Some(complete);
            }
        }
        Some(spec) => {
            properties.complete = Some(
                check_complete(&set, &problem.instance, spec, args.limit).map_err(|e| match e {
                    driver::DriverError::LimitExceeded(_) => CliError::Limit(e.to_string()),
                    other => CliError::Other(other.to_string()),
                })?,
            );
            let mut free = true;
            'pairs: for x in &set {
                for y in &set {
                    if dominance::strictly_dominates(spec, y, x)
                        .map_err(|e| CliError::Other(e.to_string()))?
                    {
                        free = false;
                        witness = Some((
                            driver::valuation_map(&problem.instance, x),
                            driver::valuation_map(&problem.instance, y),
                        ));
                        break 'pairs;
                    }
                }
            }
            properties.domination_free = Some(free);
            properties.equivalence_free = Some(
                check_equivalence_free(&set, spec).map_err(|e| CliError::Other(e.to_string()))?,
            );
        }
    }

    let report = CheckReport {
        command: "check",
        model: problem.model_path,
        properties,
        invalid_members: invalid,
        domination_witness: witness,
    };
    print_out(&serde_json::to_string_pretty(&report).expect("serializable"));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Solve(args) => cmd_solve(args),
        Cmd::Oracle(args) => cmd_oracle(args),
        Cmd::Gen(args) => cmd_gen(args),
        Cmd::Check(args) => cmd_check(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
