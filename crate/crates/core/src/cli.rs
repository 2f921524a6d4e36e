//! Report builders behind the `unichan` binary.
//!
//! Every subcommand produces a [`Report`] with the shape
//! `{tool, version, timestamp, seed, config, results, checks}`. JSON is the
//! canonical output; CSV flattens the `results` rows. Exit codes: 0 when
//! every check passes, 1 for usage or parse errors, 2 for resource caps,
//! 3 when a mathematical check fails.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::cayley::{
    build_cayley, laplacian_spectrum_with, walk_matrix_eigenvalues, walk_power, GroupDistribution,
    ScaleConstants, SpectrumOptions, EIGEN_TOL,
};
use crate::channel::{
    approx_errors, build_dilation, iterations_for_epsilon, qn_channel, seeded_rng, trace_norm,
    uniform_channel, DensityMatrix, QuantumChannel,
};
use crate::error::{Error, Result};
use crate::gip::{
    bernoulli_separation, default_iterations, efficiency_report, parse_graph_file, GraphCode,
    SymmetricAction,
};
use crate::group_rep::{
    enumerate_from_generators, star_generators, symmetric_group, FiniteGroup, GeneratorSet,
    GroupElement,
};

pub const TOOL_NAME: &str = "unichan";
/// Closure cap for `--gens` groups.
pub const GENS_GROUP_CAP: usize = 10080;

#[derive(Debug, Parser)]
#[command(name = TOOL_NAME, version, about = "Uniform quantum channel experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Spectrum,
    Approx,
    Gip,
    DilationCheck,
    Efficiency,
    SwapTest,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Laplacian and walk spectra of the Cayley graph
    Spectrum(Options),
    /// Trace-norm distance between QU(ρ) and Q_N^l(ρ) against its bounds
    Approx(Options),
    /// Isomorphism decision for two graphs
    Gip(Options),
    /// Dilation against Kraus application on seeded random states
    DilationCheck(Options),
    /// Efficiency certificate for S_n with star generators
    Efficiency(Options),
    /// The gip pipeline with the SWAP-test estimator
    SwapTest(Options),
}

impl Command {
    pub fn kind(&self) -> CommandKind {
        match self {
            Command::Spectrum(_) => CommandKind::Spectrum,
            Command::Approx(_) => CommandKind::Approx,
            Command::Gip(_) => CommandKind::Gip,
            Command::DilationCheck(_) => CommandKind::DilationCheck,
            Command::Efficiency(_) => CommandKind::Efficiency,
            Command::SwapTest(_) => CommandKind::SwapTest,
        }
    }

    pub fn options(&self) -> &Options {
        match self {
            Command::Spectrum(o)
            | Command::Approx(o)
            | Command::Gip(o)
            | Command::DilationCheck(o)
            | Command::Efficiency(o)
            | Command::SwapTest(o) => o,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GipMode {
    Oracle,
    SwapTest,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Options {
    /// S_n acting on C(n,2) edge qubits, star transposition generators
    #[arg(long, value_name = "N")]
    pub sym: Option<usize>,
    /// Generator file: `perm <images…>` or `unitary <re im …>` per line
    #[arg(long, value_name = "FILE")]
    pub gens: Option<PathBuf>,
    /// Graph file, or `<n>:<code>` (repeatable)
    #[arg(long = "graph", value_name = "FILE|N:CODE")]
    pub graphs: Vec<String>,
    /// Step count (approx: largest l; gip: walk length, default n³)
    #[arg(long)]
    pub l: Option<u64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Input state for approx: `random-pure`, `random-mixed`, `mixed` or `basis:<x>`
    #[arg(long, default_value = "random-pure")]
    pub rho: String,
    #[arg(long, value_enum, default_value_t = GipMode::Oracle)]
    pub mode: GipMode,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub no_timestamp: bool,
    /// Use λ₂ = 1 for S_n past the computable range
    #[arg(long)]
    pub cite_lambda2: bool,
}

/// The echoed configuration of one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub subcommand: CommandKind,
    #[serde(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckRow {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub timestamp: Option<u64>,
    pub seed: u64,
    pub config: RunConfig,
    pub results: Vec<Value>,
    pub checks: Vec<CheckRow>,
}

impl Report {
    fn new(config: &RunConfig) -> Self {
        let timestamp = (!config.options.no_timestamp).then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        Self {
            tool: TOOL_NAME.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp,
            seed: config.options.seed,
            config: config.clone(),
            results: Vec::new(),
            checks: Vec::new(),
        }
    }

    fn push<T: Serialize>(&mut self, row: &T) {
        self.results
            .push(serde_json::to_value(row).expect("report rows serialize"));
    }

    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(CheckRow::new(name, pass, detail));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            3
        }
    }
}

pub fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::SizeLimit(_) | Error::Overflow { .. } => 2,
        _ => 1,
    }
}

/// Parses a generator file. Each non-comment line is either
/// `perm i₀ i₁ …` (0-based basis images) or `unitary re im re im …`
/// (row-major entries).
pub fn parse_gens(text: &str) -> Result<Vec<GroupElement>> {
    let mut gens = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let kind = fields.next().unwrap_or_default();
        let rest: Vec<&str> = fields.collect();
        let err = |msg: String| Error::Parse(format!("generator line {}: {msg}", no + 1));
        let element = match kind {
            "perm" => {
                let images = rest
                    .iter()
                    .map(|s| s.parse::<usize>().map_err(|e| err(format!("bad index {s:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                GroupElement::basis_permutation(images).map_err(|e| err(e.to_string()))?
            }
            "unitary" => {
                let values = rest
                    .iter()
                    .map(|s| s.parse::<f64>().map_err(|e| err(format!("bad number {s:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                if values.len() % 2 != 0 {
                    return Err(err("odd number of real/imaginary parts".into()));
                }
                let entries: Vec<Complex64> = values
                    .chunks(2)
                    .map(|c| Complex64::new(c[0], c[1]))
                    .collect();
                let dim = (entries.len() as f64).sqrt().round() as usize;
                if dim * dim != entries.len() {
                    return Err(err(format!("{} entries do not form a square matrix", entries.len())));
                }
                GroupElement::unitary(DMatrix::from_row_slice(dim, dim, &entries))
                    .map_err(|e| err(e.to_string()))?
            }
            other => return Err(err(format!("unknown element kind {other:?}"))),
        };
        gens.push(element);
    }
    if gens.is_empty() {
        return Err(Error::Parse("generator file has no elements".into()));
    }
    if gens.iter().any(|g| !g.is_permutation()) {
        gens = gens
            .iter()
            .map(|g| GroupElement::unitary(g.to_dense()))
            .collect::<Result<_>>()?;
    }
    Ok(gens)
}

struct Instance {
    group: Arc<FiniteGroup>,
    generators: GeneratorSet,
    sym: Option<usize>,
}

fn load_instance(options: &Options) -> Result<Instance> {
    match (options.sym, &options.gens) {
        (Some(n), None) => Ok(Instance {
            group: Arc::new(symmetric_group(n)?),
            generators: star_generators(n)?,
            sym: Some(n),
        }),
        (None, Some(path)) => {
            let gens = parse_gens(&std::fs::read_to_string(path)?)?;
            let group = enumerate_from_generators(&gens, GENS_GROUP_CAP)?;
            Ok(Instance {
                group: Arc::new(group),
                generators: GeneratorSet::new(gens),
                sym: None,
            })
        }
        _ => Err(Error::InvalidInput(
            "exactly one of --sym or --gens is required".into(),
        )),
    }
}

fn load_graph(spec: &str) -> Result<GraphCode> {
    if Path::new(spec).is_file() {
        parse_graph_file(&std::fs::read_to_string(spec)?)
    } else if spec.contains(':') {
        GraphCode::parse_raw(spec)
    } else {
        Err(Error::Parse(format!("{spec:?} is neither a file nor <n>:<code>")))
    }
}

fn scale_constants(options: &Options, instance: &Instance) -> Result<Option<ScaleConstants>> {
    let num_qubits = instance.group.num_qubits();
    match (options.b, options.beta, instance.sym) {
        (Some(b), Some(beta), _) => Ok(Some(ScaleConstants { b, beta, num_qubits })),
        (None, None, Some(n)) if n >= 3 => {
            let r = efficiency_report(n, None, options.cite_lambda2)?;
            Ok(Some(r.constants()))
        }
        (None, None, _) => Ok(None),
        _ => Err(Error::InvalidInput("--b and --beta must be given together".into())),
    }
}

pub fn cmd_spectrum(config: &RunConfig) -> Result<Report> {
    let options = &config.options;
    let instance = load_instance(options)?;
    let graph = build_cayley(&instance.group, &instance.generators)?;
    let spectrum = laplacian_spectrum_with(
        &graph,
        SpectrumOptions {
            iterative_fallback: true,
            ..Default::default()
        },
    )?;
    let mut report = Report::new(config);
    let degree = graph.degree() as f64;
    let mut row = serde_json::to_value(&spectrum).expect("serialize");
    row["radius_bound"] = json!(spectrum.radius_bound());
    report.results.push(row);

    if let Some(lambdas) = &spectrum.laplacian_eigenvalues {
        report.check(
            "lambda1_is_zero",
            lambdas[0].abs() <= EIGEN_TOL,
            format!("λ₁ = {:e}", lambdas[0]),
        );
        let top = *lambdas.last().unwrap();
        report.check(
            "lambda_max_at_most_2S",
            top <= 2.0 * degree + EIGEN_TOL,
            format!("λ_max = {top}, 2|S| = {}", 2.0 * degree),
        );
        let direct = walk_matrix_eigenvalues(&graph);
        let mapped = spectrum.walk_eigenvalues.as_ref().unwrap();
        let worst = direct
            .iter()
            .zip(mapped)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        report.check(
            "walk_spectrum_affine_map",
            worst <= EIGEN_TOL,
            format!("max |μ_direct - μ_mapped| = {worst:e}"),
        );
    }
    report.check(
        "nonprincipal_radius_bound",
        spectrum.nonprincipal_radius <= spectrum.radius_bound() + EIGEN_TOL,
        format!(
            "radius {} vs bound {}",
            spectrum.nonprincipal_radius,
            spectrum.radius_bound()
        ),
    );
    Ok(report)
}

fn input_state(options: &Options, dim: usize) -> Result<DensityMatrix> {
    let mut rng = seeded_rng(options.seed);
    match options.rho.as_str() {
        "random-pure" => DensityMatrix::random_pure(dim, &mut rng),
        "random-mixed" => DensityMatrix::random_mixed(dim, &mut rng),
        "mixed" => DensityMatrix::maximally_mixed(dim),
        other => match other.strip_prefix("basis:") {
            Some(x) => DensityMatrix::basis(
                dim,
                x.parse()
                    .map_err(|e| Error::Parse(format!("bad basis index {x:?}: {e}")))?,
            ),
            None => Err(Error::Parse(format!("unknown --rho {other:?}"))),
        },
    }
}

/// `‖QU(ρ) - Q(M^l δ_id)(ρ)‖₁` through the walk on the group, for large `l`.
fn error_via_mixture(instance: &Instance, rho: &DensityMatrix, l: u64) -> Result<f64> {
    let graph = build_cayley(&instance.group, &instance.generators)?;
    let start = GroupDistribution::delta(instance.group.len(), instance.group.identity_index());
    let mixture = walk_power(&graph, &start, l as usize)?;
    let approx = QuantumChannel::new(instance.group.clone(), mixture)?.apply(rho)?;
    let target = uniform_channel(instance.group.clone()).apply(rho)?;
    trace_norm(&(target.matrix() - approx.matrix()))
}

pub fn cmd_approx(config: &RunConfig) -> Result<Report> {
    let options = &config.options;
    let instance = load_instance(options)?;
    let rho = input_state(options, instance.group.dim())?;
    let constants = scale_constants(options, &instance)?;
    let max_l = options.l.unwrap_or(60) as usize;
    let rows = approx_errors(
        instance.group.clone(),
        &instance.generators,
        &rho,
        max_l,
        constants,
    )?;
    let mut report = Report::new(config);
    for r in &rows {
        report.push(r);
    }
    let worst_spectral = rows
        .iter()
        .map(|r| r.error - r.spectral_bound)
        .fold(f64::NEG_INFINITY, f64::max);
    report.check(
        "error_below_spectral_bound",
        worst_spectral <= 1e-9,
        format!("max(error - bound) = {worst_spectral:e}"),
    );
    let monotone = rows.windows(2).all(|w| w[1].error <= w[0].error + 1e-12);
    report.check("error_non_increasing", monotone, "");
    let chain = rows
        .iter()
        .all(|r| r.error <= r.deviation_l1 + 1e-12 && r.deviation_l1 <= r.deviation_l2_scaled + 1e-12);
    report.check("l1_l2_chain", chain, "‖A‖₁ ≤ Σ|v| ≤ √|G|·‖v‖₂");
    let paper_ok = rows
        .iter()
        .filter_map(|r| r.paper_bound.map(|p| r.error <= p))
        .all(|ok| ok);
    let applicable = rows.iter().any(|r| r.paper_bound.is_some());
    report.check(
        "error_below_paper_bound",
        paper_ok,
        if applicable { "constants verified" } else { "not applicable" },
    );

    if let Some(epsilon) = options.epsilon {
        let c = constants.ok_or_else(|| {
            Error::InvalidInput("--epsilon needs --b/--beta or --sym with n >= 3".into())
        })?;
        let l = iterations_for_epsilon(epsilon, c.b, c.beta, c.num_qubits)?;
        let error = error_via_mixture(&instance, &rho, l)?;
        report.results.push(json!({
            "epsilon": epsilon,
            "iterations": l,
            "error_at_iterations": error,
            "b": c.b,
            "beta": c.beta,
        }));
        report.check(
            "epsilon_iterations_suffice",
            error <= epsilon,
            format!("error {error:e} at l = {l}"),
        );
    }
    Ok(report)
}

fn two_graphs(options: &Options) -> Result<(GraphCode, GraphCode)> {
    match options.graphs.as_slice() {
        [a, b] => {
            let (a, b) = (load_graph(a)?, load_graph(b)?);
            if a.n != b.n {
                return Err(Error::InvalidInput(format!(
                    "graphs have {} and {} vertices",
                    a.n, b.n
                )));
            }
            Ok((a, b))
        }
        other => Err(Error::InvalidInput(format!(
            "gip needs exactly two --graph arguments, got {}",
            other.len()
        ))),
    }
}

pub fn cmd_gip(config: &RunConfig, mode: GipMode) -> Result<Report> {
    let options = &config.options;
    let (x1, x2) = two_graphs(options)?;
    let action = SymmetricAction::new(x1.n)?;
    let l = options.l.unwrap_or_else(|| default_iterations(x1.n));
    let mut report = Report::new(config);
    match mode {
        GipMode::Oracle => {
            let decision = action.decide_isomorphic(x1, x2, Some(l))?;
            report.push(&decision);
            report.check(
                "verdict_matches_brute_force",
                (decision.verdict == crate::gip::Verdict::Isomorphic) == decision.brute_force_isomorphic,
                format!("brute force isomorphic = {}", decision.brute_force_isomorphic),
            );
            report.check(
                "automorphism_count_matches",
                decision.consistent,
                format!("brute force |Aut| = {}", decision.brute_force_automorphisms),
            );
        }
        GipMode::SwapTest => {
            let entry = action.qn_walk_entry(x1, x2, l)?;
            let lambda = action.lambda_y(x1, x2)?;
            let expected = (1.0 + lambda.as_f64()) / 2.0;
            let p = (1.0 + entry) / 2.0;
            let zeros = crate::channel::bernoulli_count(p, options.samples, options.seed)?;
            let frequency = zeros as f64 / options.samples as f64;
            let se = (p * (1.0 - p) / options.samples as f64).sqrt();
            let separation = bernoulli_separation(x1.n, 0.05)?;
            report.results.push(json!({
                "x1": x1,
                "x2": x2,
                "l": l,
                "walk_entry": entry,
                "lambda_exact": lambda,
                "zero_probability": p,
                "samples": options.samples,
                "zero_count": zeros,
                "frequency": frequency,
                "estimate": 2.0 * frequency - 1.0,
                "ci_low": frequency - 4.0 * se,
                "ci_high": frequency + 4.0 * se,
                "required_samples": separation.samples,
                "samples_sufficient": options.samples as f64 >= separation.samples,
            }));
            report.check(
                "ci_contains_expected",
                (frequency - expected).abs() <= 4.0 * se + f64::EPSILON,
                format!("frequency {frequency} vs (1+λ)/2 = {expected}"),
            );
        }
    }
    Ok(report)
}

pub fn cmd_dilation_check(config: &RunConfig) -> Result<Report> {
    let options = &config.options;
    let instance = load_instance(options)?;
    let dilation = build_dilation(&instance.group, &instance.generators)?;
    let qn = qn_channel(instance.group.clone(), &instance.generators)?;
    let mut rng = seeded_rng(options.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let rho = DensityMatrix::random_mixed(instance.group.dim(), &mut rng)?;
        let a = dilation.apply(&rho)?;
        let b = qn.apply_kraus(&rho)?;
        worst = worst.max(crate::channel::max_abs(&(a.matrix() - b.matrix())));
    }
    let mut report = Report::new(config);
    report.results.push(json!({
        "group_size": instance.group.len(),
        "generator_count": instance.generators.len(),
        "env_dim": dilation.env_dim,
        "regime": dilation.regime,
        "active_blocks": dilation.active_blocks,
        "system_dim": dilation.system_dim(),
        "states": 10,
        "max_deviation": worst,
    }));
    report.check(
        "dilation_matches_kraus",
        worst <= 1e-10,
        format!("max entrywise deviation {worst:e}"),
    );
    Ok(report)
}

pub fn cmd_efficiency(config: &RunConfig) -> Result<Report> {
    let options = &config.options;
    let n = options
        .sym
        .ok_or_else(|| Error::InvalidInput("efficiency needs --sym <n>".into()))?;
    let constants = match (options.b, options.beta) {
        (Some(b), Some(beta)) => Some((b, beta)),
        (None, None) => None,
        _ => return Err(Error::InvalidInput("--b and --beta must be given together".into())),
    };
    let r = efficiency_report(n, constants, options.cite_lambda2)?;
    let mut report = Report::new(config);
    report.push(&r);
    for c in &r.checks {
        report.check(c.name.clone(), c.pass, format!("{} vs {}", c.value, c.bound));
    }
    Ok(report)
}

pub fn run(command: &Command) -> Result<Report> {
    let config = RunConfig {
        subcommand: command.kind(),
        options: command.options().clone(),
    };
    match command {
        Command::Spectrum(_) => cmd_spectrum(&config),
        Command::Approx(_) => cmd_approx(&config),
        Command::Gip(o) => cmd_gip(&config, o.mode),
        Command::SwapTest(_) => cmd_gip(&config, GipMode::SwapTest),
        Command::DilationCheck(_) => cmd_dilation_check(&config),
        Command::Efficiency(_) => cmd_efficiency(&config),
    }
}

pub fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            Ok(s)
        }
        Format::Csv => render_csv(&report.results),
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Map<String, Value>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        other => {
            out.insert(prefix.to_string(), other.clone());
        }
    }
}

fn cell(value: &Value) -> String {
    match value {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

fn render_csv(rows: &[Value]) -> Result<String> {
    let flat: Vec<Map<String, Value>> = rows
        .iter()
        .map(|r| {
            let mut m = Map::new();
            flatten("", r, &mut m);
            m
        })
        .collect();
    let mut header: Vec<String> = Vec::new();
    for row in &flat {
        for k in row.keys() {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    writer.write_record(&header).map_err(csv_err)?;
    for row in &flat {
        writer
            .write_record(header.iter().map(|k| row.get(k).map(cell).unwrap_or_default()))
            .map_err(csv_err)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes through a sibling temp file and a rename.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp-{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    {
        let mut file = std::fs::File::create(&tmp)?;
        file.write_all(content.as_bytes())?;
        file.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Full CLI entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let options = cli.command.options();
    let outcome = run(&cli.command).and_then(|report| {
        let text = render(&report, options.format)?;
        match &options.out {
            Some(path) => write_atomic(path, &text)?,
            None => print!("{text}"),
        }
        Ok(report.exit_code())
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{TOOL_NAME}: {e}");
            exit_code_for(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Report> {
        let cli = Cli::try_parse_from(std::iter::once(TOOL_NAME).chain(args.iter().copied()))
            .expect("valid arguments");
        run(&cli.command)
    }

    #[test]
    fn spectrum_of_s3() {
        let r = run_args(&["spectrum", "--sym", "3", "--no-timestamp"]).unwrap();
        assert!(r.all_pass());
        let lambdas = r.results[0]["laplacian_eigenvalues"].as_array().unwrap();
        assert_eq!(lambdas.len(), 6);
        assert!((lambdas[5].as_f64().unwrap() - 4.0).abs() < 1e-8);
    }

    #[test]
    fn gens_file_parsing() {
        let gens = parse_gens("# Z4 on one qubit\nunitary 1 0 0 0  0 0 0 1\n").unwrap();
        assert_eq!(gens.len(), 1);
        let perms = parse_gens("perm 1 0 3 2\nperm 2 3 0 1\n").unwrap();
        assert!(perms.iter().all(GroupElement::is_permutation));
        let mixed = parse_gens("perm 1 0\nunitary 0 0 1 0 1 0 0 0\n").unwrap();
        assert!(mixed.iter().all(|g| !g.is_permutation()));
        assert!(enumerate_from_generators(&mixed, 8).unwrap().len() == 2);
        assert!(matches!(parse_gens("perm 0 0\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_gens("rotate 1 2\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_gens("unitary 1 0 0\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_gens("# nothing\n"), Err(Error::Parse(_))));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code_for(&Error::SizeLimit("x".into())), 2);
        assert_eq!(exit_code_for(&Error::Parse("x".into())), 1);
        assert_eq!(main_with_args([TOOL_NAME, "spectrum", "--sym", "x"]), 1);
        assert_eq!(main_with_args([TOOL_NAME, "efficiency", "--sym", "10"]), 2);
    }

    #[test]
    fn csv_projection() {
        let rows = vec![
            json!({"a": 1, "b": {"c": [1.5, 2.5]}}),
            json!({"a": 2, "d": "x"}),
        ];
        let csv = render_csv(&rows).unwrap();
        assert_eq!(csv, "a,b.c,d\n1,1.5;2.5,\n2,,x\n");
    }
}
