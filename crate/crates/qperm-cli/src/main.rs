//! Command-line front end: Weingarten tables, model generation, analysis
//! passes, and graph export.
//!
//! Exit codes are a stable contract: 0 success, 1 a requested check failed,
//! 2 usage or parse error, 3 singular Gram matrix, 4 construction
//! integrity, 5 convergence or numerical degeneracy.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use qperm::generators::{
    check_stationary, f4_deformed, fourier_matrix, hadamard_model, profile_graph_of_model,
    s3_minimal_model_seeded, weyl_model, ComplexHadamard, GeneratorError,
};
use qperm::graphs::LabeledGraph;
use qperm::models::{
    check_double_flat, check_triple_flat, classify_transitivity, flatness_profile,
    model_from_json, model_to_json, orbit_graph, orbital_graph, orbital_structure, verify_magic,
    AnalysisConfig, MagicModel, ModelError, ModelJson, RationalJson,
};
use qperm::permgroup::{generate_group, group_model, GroupError, Permutation, PermutationGroup};
use qperm::weingarten::{
    gram, integrate_sn_weingarten, integrate_snplus, weingarten, PartitionFamily, WeingartenError,
};

// ---------------------------------------------------------------------------
// Errors and exit codes

#[derive(Debug)]
enum CliError {
    Usage(String),
    ChecksFailed(Vec<String>),
    Singular(String),
    Integrity(String),
    Convergence(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::ChecksFailed(_) => 1,
            CliError::Singular(_) => 3,
            CliError::Integrity(_) => 4,
            CliError::Convergence(_) => 5,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::ChecksFailed(names) => format!("checks failed: {}", names.join(", ")),
            CliError::Singular(m) | CliError::Integrity(m) | CliError::Convergence(m) => m.clone(),
        }
    }
}

impl From<WeingartenError> for CliError {
    fn from(e: WeingartenError) -> Self {
        match e {
            WeingartenError::SingularGram { .. } => CliError::Singular(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Convergence { .. } | ModelError::NumericalDegeneracy(_) => {
                CliError::Convergence(e.to_string())
            }
            ModelError::TransferIntegrity(_) => CliError::Integrity(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<GeneratorError> for CliError {
    fn from(e: GeneratorError) -> Self {
        match e {
            GeneratorError::Model(inner) => inner.into(),
            GeneratorError::BadHadamard { .. }
            | GeneratorError::ConstructionIntegrity(_)
            | GeneratorError::NonOrthonormal(_) => CliError::Integrity(e.to_string()),
            GeneratorError::UnsupportedWeylBase { .. }
            | GeneratorError::StationaryDegreeMismatch { .. } => CliError::Usage(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// Configuration

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum OutputFormat {
    #[default]
    Json,
    Text,
}

/// On-disk run configuration: the analysis tolerances plus output options.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
struct RunConfig {
    #[serde(flatten)]
    analysis: AnalysisConfig,
    format: OutputFormat,
}

fn validate_config(c: &RunConfig) -> Result<(), CliError> {
    let a = &c.analysis;
    let tols = [
        ("magic_tol", a.magic_tol),
        ("orbit_tol", a.orbit_tol),
        ("cesaro_tol", a.cesaro_tol),
        ("integrity_tol", a.integrity_tol),
        ("spectral_tol", a.spectral_tol),
    ];
    for (name, v) in tols {
        if !(v > 0.0 && v.is_finite()) {
            return Err(usage(format!("config: {name} must be positive, got {v}")));
        }
    }
    if a.max_iter == 0 {
        return Err(usage("config: max_iter must be positive"));
    }
    if a.transfer_dim_cap == 0 {
        return Err(usage("config: transfer_dim_cap must be positive"));
    }
    Ok(())
}

/// Flag-resolved output context shared by every command.
struct Ctx {
    analysis: AnalysisConfig,
    format: OutputFormat,
    timestamp: bool,
}

impl Ctx {
    fn resolve(cli: &Cli) -> Result<Ctx, CliError> {
        let mut run = match &cli.config {
            Some(path) => {
                let text = read_file(path)?;
                let cfg: RunConfig = serde_json::from_str(&text)
                    .map_err(|e| usage(format!("config {}: {e}", path.display())))?;
                cfg
            }
            None => RunConfig::default(),
        };
        if let Some(f) = cli.format {
            run.format = f;
        }
        validate_config(&run)?;
        Ok(Ctx {
            analysis: run.analysis,
            format: run.format,
            timestamp: !cli.no_timestamp,
        })
    }

    /// Finalizes a report: appends the timestamp unless suppressed, renders
    /// JSON or derived text, and writes to the file or stdout.
    fn emit(&self, mut report: Value, out: &Option<PathBuf>) -> Result<(), CliError> {
        if self.timestamp {
            if let Value::Object(map) = &mut report {
                let now = SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0);
                map.insert("timestamp".into(), json!(now));
            }
        }
        let rendered = match self.format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&report)
                    .map_err(|e| usage(format!("report serialization: {e}")))?;
                s.push('\n');
                s
            }
            OutputFormat::Text => {
                let mut s = String::new();
                render_text(&report, 0, &mut s);
                s
            }
        };
        match out {
            Some(path) => write_file(path, &rendered),
            None => {
                print!("{rendered}");
                Ok(())
            }
        }
    }
}

/// Key/value text rendering derived from the JSON report.
fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (key, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) if !is_short(val) => {
                        out.push_str(&format!("{pad}{key}:\n"));
                        render_text(val, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{key}: {}\n", short(val))),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if is_short(item) {
                    out.push_str(&format!("{pad}- {}\n", short(item)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render_text(item, indent + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", short(other))),
    }
}

fn is_short(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| !x.is_object() && !x.is_array()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn short(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(short).collect();
            format!("[{}]", inner.join(", "))
        }
        other => other.to_string(),
    }
}

// ---------------------------------------------------------------------------
// Command definitions

#[derive(Parser)]
#[command(
    name = "qperm",
    version,
    about = "Exact Weingarten tables and transitivity analysis of flat magic-unitary models"
)]
struct Cli {
    /// JSON config file with tolerances and output options.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output format (overrides the config file).
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Omit the timestamp field so identical runs are byte-identical.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Gram and Weingarten matrices for a partition family.
    Weingarten(WeingartenArgs),
    /// Build a model and write it as a JSON file.
    #[command(subcommand)]
    Generate(GenerateCmd),
    /// Run verification and analysis checks on a model file.
    Analyze(AnalyzeArgs),
    /// Export an orbit, orbital, or profile graph as DOT.
    Graph(GraphArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    All,
    #[value(alias = "nc")]
    Noncrossing,
}

impl From<FamilyArg> for PartitionFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::All => PartitionFamily::All,
            FamilyArg::Noncrossing => PartitionFamily::Noncrossing,
        }
    }
}

#[derive(Args)]
struct WeingartenArgs {
    /// Number of tensor factors (1..=12).
    #[arg(short)]
    k: usize,
    /// Dimension parameter of the Gram matrix.
    #[arg(short)]
    n: usize,
    /// Partition family: all partitions or noncrossing only.
    #[arg(long, value_enum, default_value_t = FamilyArg::All)]
    family: FamilyArg,
    /// Also integrate one representative of every kernel-pattern pair.
    #[arg(long)]
    sweep: bool,
    /// Write the report here instead of stdout.
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenerateCmd {
    /// Rank-1 model of the Fourier matrix F_N.
    Fourier {
        /// Matrix size N.
        #[arg(long)]
        n: usize,
        /// Deformation angle for the 4x4 family (requires --n 4).
        #[arg(long)]
        theta: Option<f64>,
        /// Destination for the model JSON
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Rank-1 model of a complex Hadamard matrix read from a JSON file.
    HadamardFile {
        /// JSON file with fields n and entries ([[re, im], ...] rows).
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Destination for the model JSON
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Weyl-operator model averaged over the Clifford group (n = 2 or 3).
    Weyl {
        /// Base size n; the model has N = K = n^2.
        #[arg(long)]
        n: usize,
        /// Destination for the model JSON
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Minimal rank-2 model on 3 points over a seeded random basis of C^6.
    S3 {
        /// Seed for the orthonormal basis.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Destination for the model JSON
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Zero-one model of a permutation group.
    Group {
        /// Named shortcut: S3, S4, A4, A5, Z(n), D(n).
        #[arg(long)]
        name: Option<String>,
        /// Number of points the generators act on (with --gens).
        #[arg(long)]
        degree: Option<usize>,
        /// Generator in cycle notation, e.g. "(1 2 3)(4 5)"; repeatable.
        #[arg(long)]
        gens: Vec<String>,
        /// Destination for the model JSON
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Magic,
    Flat,
    DoubleFlat,
    TripleFlat,
    Orbits,
    Orbitals,
    Transitivity,
    Stationary,
}

impl CheckKind {
    fn name(&self) -> &'static str {
        match self {
            CheckKind::Magic => "magic",
            CheckKind::Flat => "flat",
            CheckKind::DoubleFlat => "double-flat",
            CheckKind::TripleFlat => "triple-flat",
            CheckKind::Orbits => "orbits",
            CheckKind::Orbitals => "orbitals",
            CheckKind::Transitivity => "transitivity",
            CheckKind::Stationary => "stationary",
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Model JSON file.
    model: PathBuf,
    /// Comma-separated checks to run.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "magic")]
    checks: Vec<CheckKind>,
    /// Comparison group for the stationary check: shortcut or cycle notation.
    #[arg(long)]
    group: Option<String>,
    /// Word-length bound for the stationary comparison.
    #[arg(long, default_value_t = 4)]
    max_k: usize,
    /// Write the report here instead of stdout.
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphKind {
    Orbits,
    Orbitals,
    Profile,
}

#[derive(Args)]
struct GraphArgs {
    /// Model JSON file, or a Hadamard matrix JSON file (n + entries).
    input: PathBuf,
    /// Which graph to export.
    #[arg(long, value_enum)]
    kind: GraphKind,
    /// Write DOT here; without it DOT goes to stdout and the component
    /// count to stderr.
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// Shared input loading

#[derive(Debug, Clone, Serialize, Deserialize)]
struct HadamardJson {
    n: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

fn load_model(path: &Path) -> Result<MagicModel, CliError> {
    let text = read_file(path)?;
    let parsed: ModelJson = serde_json::from_str(&text)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(model_from_json(&parsed)?)
}

fn hadamard_from_json(h: &HadamardJson) -> Result<ComplexHadamard, CliError> {
    if h.entries.len() != h.n || h.entries.iter().any(|row| row.len() != h.n) {
        return Err(usage(format!(
            "Hadamard file: expected {0} x {0} entries",
            h.n
        )));
    }
    let entries = ndarray::Array2::from_shape_fn((h.n, h.n), |(i, j)| {
        num_complex::Complex64::new(h.entries[i][j][0], h.entries[i][j][1])
    });
    Ok(ComplexHadamard::from_entries(entries)?)
}

/// A graph input is either a model file or a Hadamard matrix file; the
/// object keys decide which.
fn load_model_or_hadamard(path: &Path, ctx: &Ctx) -> Result<MagicModel, CliError> {
    let text = read_file(path)?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if value.get("fibers").is_some() {
        let parsed: ModelJson = serde_json::from_value(value)
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
        Ok(model_from_json(&parsed)?)
    } else if value.get("entries").is_some() {
        let parsed: HadamardJson = serde_json::from_value(value)
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let h = hadamard_from_json(&parsed)?;
        Ok(hadamard_model(&h, &ctx.analysis)?)
    } else {
        Err(usage(format!(
            "{}: neither a model file (fibers) nor a Hadamard file (entries)",
            path.display()
        )))
    }
}

/// Accepts the named shortcuts S3, S4, A4, A5, Z(n), D(n) (parentheses
/// optional) or a cycle-notation generator, which needs a degree.
fn parse_group_spec(spec: &str, degree: Option<usize>) -> Result<PermutationGroup, CliError> {
    let s = spec.trim();
    if s.is_empty() {
        return Err(usage("empty group specification"));
    }
    if s.starts_with('(') {
        let n = degree.ok_or_else(|| {
            usage("cycle-notation group input needs an explicit degree")
        })?;
        let p = Permutation::from_cycles(n, s)?;
        return Ok(generate_group(n, &[p])?);
    }
    let head = s.chars().next().unwrap().to_ascii_uppercase();
    let digits = s[1..].trim_start_matches('(').trim_end_matches(')');
    let n: usize = digits
        .parse()
        .map_err(|_| usage(format!("bad group shortcut {s:?}: expected S3, A4, Z(n), D(n), or cycle notation")))?;
    let g = match head {
        'S' => PermutationGroup::symmetric(n)?,
        'A' => PermutationGroup::alternating(n)?,
        'Z' => PermutationGroup::cyclic(n)?,
        'D' => PermutationGroup::dihedral(n)?,
        _ => {
            return Err(usage(format!(
                "unknown group family {head:?}: expected S, A, Z, or D"
            )))
        }
    };
    Ok(g)
}

// ---------------------------------------------------------------------------
// weingarten

fn cmd_weingarten(args: &WeingartenArgs, ctx: &Ctx) -> Result<(), CliError> {
    let family: PartitionFamily = args.family.into();
    let g = gram(args.k, args.n, family)?;
    let w = weingarten(args.k, args.n, family)?;
    let partitions: Vec<String> = g.partitions().iter().map(|p| p.to_string()).collect();
    let gram_rows: Vec<Vec<String>> = g
        .entries()
        .iter()
        .map(|row| row.iter().map(|e| e.to_string()).collect())
        .collect();
    let wg_rows: Vec<Vec<RationalJson>> = w
        .entries()
        .iter()
        .map(|row| row.iter().map(RationalJson::from_rational).collect())
        .collect();
    let mut report = json!({
        "k": args.k,
        "n": args.n,
        "family": family,
        "partitions": partitions,
        "gram": gram_rows,
        "weingarten": wg_rows,
    });
    if args.sweep {
        let mut sweep = Vec::new();
        for p in g.partitions() {
            if p.num_blocks() > args.n {
                continue;
            }
            let i: Vec<usize> = p.rgs().iter().map(|x| x + 1).collect();
            for q in g.partitions() {
                if q.num_blocks() > args.n {
                    continue;
                }
                let j: Vec<usize> = q.rgs().iter().map(|x| x + 1).collect();
                let value = match family {
                    PartitionFamily::All => integrate_sn_weingarten(&i, &j, args.n)?,
                    PartitionFamily::Noncrossing => integrate_snplus(&i, &j, args.n)?,
                };
                sweep.push(json!({
                    "ker_i": p.to_string(),
                    "ker_j": q.to_string(),
                    "value": RationalJson::from_rational(&value),
                }));
            }
        }
        report["sweep"] = Value::Array(sweep);
    }
    ctx.emit(report, &args.output)
}

// ---------------------------------------------------------------------------
// generate

fn cmd_generate(cmd: &GenerateCmd, ctx: &Ctx) -> Result<(), CliError> {
    let (model, output) = match cmd {
        GenerateCmd::Fourier { n, theta, output } => {
            let h = match theta {
                None => fourier_matrix(check_positive(*n, "n")?),
                Some(t) => {
                    if *n != 4 {
                        return Err(usage("--theta is the 4x4 family deformation; use --n 4"));
                    }
                    f4_deformed(*t)
                }
            };
            (hadamard_model(&h, &ctx.analysis)?, output)
        }
        GenerateCmd::HadamardFile { input, output } => {
            let text = read_file(input)?;
            let parsed: HadamardJson = serde_json::from_str(&text)
                .map_err(|e| usage(format!("{}: {e}", input.display())))?;
            let h = hadamard_from_json(&parsed)?;
            (hadamard_model(&h, &ctx.analysis)?, output)
        }
        GenerateCmd::Weyl { n, output } => (weyl_model(*n, &ctx.analysis)?, output),
        GenerateCmd::S3 { seed, output } => (s3_minimal_model_seeded(*seed)?, output),
        GenerateCmd::Group {
            name,
            degree,
            gens,
            output,
        } => {
            let g = match (name, gens.is_empty()) {
                (Some(shortcut), true) => parse_group_spec(shortcut, *degree)?,
                (None, false) => {
                    let n = degree.ok_or_else(|| usage("--gens needs --degree"))?;
                    let perms = gens
                        .iter()
                        .map(|text| Permutation::from_cycles(n, text))
                        .collect::<Result<Vec<_>, _>>()?;
                    generate_group(n, &perms)?
                }
                (Some(_), false) => {
                    return Err(usage("give either --name or --gens, not both"))
                }
                (None, true) => return Err(usage("group needs --name or --degree with --gens")),
            };
            (group_model(&g), output)
        }
    };
    let json_model = model_to_json(&model);
    let mut text = serde_json::to_string_pretty(&json_model)
        .map_err(|e| usage(format!("model serialization: {e}")))?;
    text.push('\n');
    write_file(output, &text)?;
    println!(
        "model: n={}, k_dim={}, fibers={} -> {}",
        model.n(),
        model.kdim(),
        model.fibers().len(),
        output.display()
    );
    Ok(())
}

fn check_positive(n: usize, what: &str) -> Result<usize, CliError> {
    if n == 0 {
        Err(usage(format!("{what} must be positive")))
    } else {
        Ok(n)
    }
}

// ---------------------------------------------------------------------------
// analyze

/// Serializes a report struct and guarantees a boolean "pass" key.
fn check_value<T: Serialize>(rep: &T, pass: bool) -> Result<Value, CliError> {
    let mut v = serde_json::to_value(rep)
        .map_err(|e| usage(format!("report serialization: {e}")))?;
    if let Value::Object(map) = &mut v {
        map.insert("pass".into(), json!(pass));
    }
    Ok(v)
}

fn cmd_analyze(args: &AnalyzeArgs, ctx: &Ctx) -> Result<(), CliError> {
    let model = load_model(&args.model)?;
    let cfg = &ctx.analysis;
    let mut checks = serde_json::Map::new();
    let mut failed: Vec<String> = Vec::new();
    for kind in &args.checks {
        if checks.contains_key(kind.name()) {
            continue;
        }
        let (value, pass) = match kind {
            CheckKind::Magic => {
                let rep = verify_magic(&model, cfg.magic_tol);
                (check_value(&rep, rep.pass)?, rep.pass)
            }
            CheckKind::Flat => {
                let rep = flatness_profile(&model, cfg.magic_tol)?;
                let pass = rep.is_flat;
                (check_value(&rep, pass)?, pass)
            }
            CheckKind::DoubleFlat => {
                let rep = check_double_flat(&model, cfg.magic_tol);
                (check_value(&rep, rep.pass)?, rep.pass)
            }
            CheckKind::TripleFlat => {
                let rep = check_triple_flat(&model, cfg.magic_tol)?;
                (check_value(&rep, rep.pass)?, rep.pass)
            }
            CheckKind::Orbits => {
                let rep = orbital_structure(&model, 1, cfg)?;
                let mut v = check_value(&rep, true)?;
                v["num_classes"] = json!(rep.num_classes());
                (v, true)
            }
            CheckKind::Orbitals => {
                let rep = orbital_structure(&model, 2, cfg)?;
                let mut v = check_value(&rep, true)?;
                v["num_classes"] = json!(rep.num_classes());
                (v, true)
            }
            CheckKind::Transitivity => {
                let rep = classify_transitivity(&model, cfg)?;
                (check_value(&rep, true)?, true)
            }
            CheckKind::Stationary => {
                let spec = args
                    .group
                    .as_ref()
                    .ok_or_else(|| usage("the stationary check needs --group"))?;
                let g = parse_group_spec(spec, Some(model.n()))?;
                let rep = check_stationary(&model, &g, args.max_k.max(1), cfg.magic_tol)?;
                (check_value(&rep, rep.pass)?, rep.pass)
            }
        };
        if !pass {
            failed.push(kind.name().to_string());
        }
        checks.insert(kind.name().to_string(), value);
    }
    let report = json!({
        "model": {
            "file": args.model.display().to_string(),
            "n": model.n(),
            "k_dim": model.kdim(),
            "fibers": model.fibers().len(),
        },
        "checks": Value::Object(checks),
        "pass": failed.is_empty(),
    });
    ctx.emit(report, &args.output)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(failed))
    }
}

// ---------------------------------------------------------------------------
// graph

fn cmd_graph(args: &GraphArgs, ctx: &Ctx) -> Result<(), CliError> {
    let model = load_model_or_hadamard(&args.input, ctx)?;
    let (graph, name): (LabeledGraph, &str) = match args.kind {
        GraphKind::Orbits => (orbit_graph(&model, &ctx.analysis), "orbits"),
        GraphKind::Orbitals => (orbital_graph(&model, &ctx.analysis), "orbitals"),
        GraphKind::Profile => {
            let p = profile_graph_of_model(&model, &ctx.analysis);
            (p.graph, "profile")
        }
    };
    let components = graph.components().len();
    let dot = graph.to_dot(name);
    match &args.output {
        Some(path) => {
            write_file(path, &dot)?;
            println!("components: {components}");
        }
        None => {
            print!("{dot}");
            eprintln!("components: {components}");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------

fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = Ctx::resolve(&cli)?;
    match &cli.command {
        Command::Weingarten(args) => cmd_weingarten(args, &ctx),
        Command::Generate(cmd) => cmd_generate(cmd, &ctx),
        Command::Analyze(args) => cmd_analyze(args, &ctx),
        Command::Graph(args) => cmd_graph(args, &ctx),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {}", e.message());
        std::process::exit(e.code());
    }
}
