//! Command dispatch for the `scap` binary.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use scap_core::clique_packing::{fcc, PackingError};
use scap_core::entropy::gadget::{CoverCertificate, CoverSpec};
use scap_core::entropy::info_lp::FULL_MODE_MAX_N;
use scap_core::entropy::partition::FIND_PARTITION_MAX_N;
use scap_core::entropy::{
    chorded_cycle_certificate, find_partition, info_lp_bound, verify_gadget_cover, verify_partition, InfoLpError,
    LpMode, PartitionCertificate, PartitionError,
};
use scap_core::exact::{
    ind_exact_chromatic, matching_cover, sandwich_check, scap_exact_mis, scap_exact_recovery_enum_with, ExactError,
    ExactResult, SandwichReport, ValueKind, DEFAULT_WORK_CAP_BITS,
};
use scap_core::graph::io::{self, Format};
use scap_core::graph::{cartesian_product, maximum_matching, minimum_vertex_cover, GraphError};
use scap_core::partial::{delta_grid, sweep, sweep_csv, PartialError, DEFAULT_DIGITS};
use scap_core::planar::{approx_scap_planar, round_vc_4_3, ApproxReport, PlanarError, RoundedCover};
use scap_core::ptas::{decompose_with, default_cap, ptas_with, PtasError, PtasReport};
use scap_core::rational::{self, format_rational, from_usize, parse_rational, to_f64};
use scap_core::{Graph, Rational};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_CAP: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;
pub const EXIT_INTERNAL: u8 = 70;

/// Largest graph for the exhaustive vertex cover in `bounds`.
pub const VC_MAX_N: usize = 18;
/// Largest graph for the automatic partition search in `bounds`.
pub const AUTO_PARTITION_MAX_N: usize = 16;

#[derive(Debug, Parser)]
#[command(name = "scap", version, about = "Storage capacity and index coding bounds for graphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Global {
    /// Input graph format.
    #[arg(long, value_enum, default_value_t = InputFormat::Edgelist, global = true)]
    pub format: InputFormat,
    /// Report format.
    #[arg(long, value_enum, global = true)]
    pub out: Option<OutFormat>,
    /// Alphabet size.
    #[arg(long, default_value_t = 2, global = true)]
    pub q: u64,
    /// Bound on q^n for the exact solvers.
    #[arg(long, default_value_t = 1 << 24, global = true)]
    pub cap_states: u64,
    /// Seed for sampled separator sources.
    #[arg(long, default_value_t = scap_core::ptas::DEFAULT_SEED, global = true)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Edgelist,
    Dimacs,
}

impl From<InputFormat> for Format {
    fn from(f: InputFormat) -> Self {
        match f {
            InputFormat::Edgelist => Format::EdgeList,
            InputFormat::Dimacs => Format::Dimacs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Table,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Scap,
    Ind,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExactMethod {
    Auto,
    Mis,
    Enum,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower and upper bounds on scap(G) from every applicable method.
    Bounds {
        graph: PathBuf,
        /// Gadget cover file to verify and include.
        #[arg(long)]
        cover: Option<PathBuf>,
        /// Partition side X, comma separated.
        #[arg(long, value_delimiter = ',')]
        partition: Option<Vec<usize>>,
    },
    /// Exact scap_q and ind_q on small graphs.
    Exact {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Quantity::Both)]
        kind: Quantity,
        #[arg(long, value_enum, default_value_t = ExactMethod::Auto)]
        method: ExactMethod,
        /// log2 bound on recovery enumeration work.
        #[arg(long, default_value_t = DEFAULT_WORK_CAP_BITS)]
        work_cap_bits: f64,
    },
    /// Separator decomposition with exact component values.
    Ptas {
        graph: PathBuf,
        #[arg(long, default_value = "1/2")]
        eps: String,
        #[arg(long, value_enum, default_value_t = Quantity::Scap)]
        kind: Quantity,
        /// Component size cap; defaults to ceil(4 / eps^2).
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Gadget cover certificates.
    Gadget {
        #[command(subcommand)]
        action: GadgetAction,
    },
    /// Vertex partition certificates.
    Partition {
        #[command(subcommand)]
        action: PartitionAction,
    },
    /// Certificate for a Hamiltonian cycle with non-crossing chords.
    Chords {
        graph: PathBuf,
        /// Hamiltonian cycle, comma separated.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
    },
    /// Partial-recovery bounds at one delta or over a grid.
    Partial {
        graph: PathBuf,
        #[arg(long)]
        delta: Option<String>,
        /// Number of grid points on [0, 1].
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_DIGITS)]
        digits: usize,
    },
    /// Cartesian product of two graphs, written in the input format.
    Product { first: PathBuf, second: PathBuf },
    /// Planar approximation report.
    Approx {
        graph: PathBuf,
        /// Also round the fractional vertex cover (triangle-free inputs).
        #[arg(long)]
        round: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum GadgetAction {
    Verify { graph: PathBuf, cover: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum PartitionAction {
    Find {
        graph: PathBuf,
    },
    Verify {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<usize>,
    },
}

/// Failures that map to a dedicated exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

/// Exit code for an error chain.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<CliError>() {
            return match e {
                CliError::Io { .. } | CliError::Input(_) => EXIT_INPUT,
                CliError::Cap(_) => EXIT_CAP,
                CliError::Inconsistent(_) => EXIT_INTERNAL,
            };
        }
        if cause.is::<GraphError>() || cause.is::<serde_json::Error>() || cause.is::<rational::ParseRationalError>() {
            return EXIT_INPUT;
        }
        if let Some(e) = cause.downcast_ref::<PtasError>() {
            return match e {
                PtasError::InvalidEps(_) => EXIT_INPUT,
                _ => EXIT_CAP,
            };
        }
        if let Some(e) = cause.downcast_ref::<ExactError>() {
            return match e {
                ExactError::InvalidAlphabet(_) => EXIT_INPUT,
                _ => EXIT_CAP,
            };
        }
        if let Some(e) = cause.downcast_ref::<InfoLpError>() {
            return match e {
                InfoLpError::TooManySubsets { .. } => EXIT_CAP,
                InfoLpError::RateOutOfRange(_) | InfoLpError::InvalidFamily => EXIT_INPUT,
                _ => EXIT_INTERNAL,
            };
        }
        if let Some(e) = cause.downcast_ref::<PackingError>() {
            return match e {
                PackingError::AlphabetOverflow { .. } | PackingError::CodeTooLarge { .. } => EXIT_CAP,
                PackingError::DeltaOutOfRange { .. } => EXIT_INPUT,
                _ => EXIT_INTERNAL,
            };
        }
        if let Some(e) = cause.downcast_ref::<PartitionError>() {
            return match e {
                PartitionError::SearchSpaceTooLarge { .. } => EXIT_CAP,
                _ => EXIT_VERIFY,
            };
        }
        if let Some(e) = cause.downcast_ref::<PlanarError>() {
            return match e {
                PlanarError::Packing(_) => EXIT_INTERNAL,
                _ => EXIT_INPUT,
            };
        }
        if let Some(e) = cause.downcast_ref::<PartialError>() {
            return match e {
                PartialError::DomainError(_) | PartialError::EvenCycle(_) => EXIT_INPUT,
                _ => EXIT_INTERNAL,
            };
        }
    }
    EXIT_INTERNAL
}

/// Rendered output and the exit code to finish with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub body: String,
    pub code: u8,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome { body, code: EXIT_OK }
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
        .into()
    })
}

pub fn load_graph(path: &Path, format: InputFormat) -> Result<Graph> {
    let text = read_text(path)?;
    io::parse(&text, format.into()).with_context(|| format!("parsing {}", path.display()))
}

fn parse_rat(s: &str, what: &str) -> Result<Rational> {
    parse_rational(s).with_context(|| format!("invalid {what} `{s}`"))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialise")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Lower,
    Upper,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub method: String,
    pub kind: BoundKind,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    /// How to re-check the entry, when it rests on a certificate.
    pub certificate: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: usize,
    pub m: usize,
    pub entries: Vec<BoundEntry>,
    #[serde(with = "rational::serde_str")]
    pub best_lower: Rational,
    #[serde(with = "rational::serde_str")]
    pub best_upper: Rational,
    pub consistent: bool,
}

impl BoundsReport {
    fn from_entries(g: &Graph, entries: Vec<BoundEntry>) -> Self {
        let lowers = entries.iter().filter(|e| e.kind != BoundKind::Upper).map(|e| &e.value);
        let uppers = entries.iter().filter(|e| e.kind != BoundKind::Lower).map(|e| &e.value);
        let best_lower = lowers.max().cloned().unwrap_or_else(|| from_usize(0));
        let best_upper = uppers.min().cloned().unwrap_or_else(|| from_usize(g.n()));
        BoundsReport {
            n: g.n(),
            m: g.m(),
            consistent: best_lower <= best_upper,
            entries,
            best_lower,
            best_upper,
        }
    }
}

fn entry(method: &str, kind: BoundKind, value: Rational, certificate: Option<String>) -> BoundEntry {
    BoundEntry {
        method: method.to_string(),
        kind,
        value,
        certificate,
    }
}

fn join(vs: &[usize]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Runs every applicable bound on `scap(G)`.
pub fn bounds_report(
    g: &Graph,
    cover: Option<(&CoverSpec, &str)>,
    partition: Option<&[usize]>,
) -> Result<(BoundsReport, Vec<String>)> {
    let mut entries = Vec::new();
    let mut notes = Vec::new();
    entries.push(entry("matching", BoundKind::Lower, from_usize(maximum_matching(g).len()), None));
    entries.push(entry("fcc", BoundKind::Lower, fcc(g)?.value, None));
    entries.push(entry("trivial", BoundKind::Upper, from_usize(g.n()), None));
    if g.n() <= VC_MAX_N {
        entries.push(entry("vertex_cover", BoundKind::Upper, from_usize(minimum_vertex_cover(g).len()), None));
    } else {
        notes.push(format!("vertex cover skipped: n > {VC_MAX_N}"));
    }
    if g.n() <= FULL_MODE_MAX_N {
        entries.push(entry("info_lp", BoundKind::Upper, info_lp_bound(g, &LpMode::Full)?, None));
    } else {
        notes.push(format!("info LP skipped: n > {FULL_MODE_MAX_N}"));
    }
    if let Some((spec, path)) = cover {
        let built = spec.build(g).map_err(|e| CliError::Input(e.to_string()))?;
        match verify_gadget_cover(g, &built) {
            Ok(cert) => entries.push(entry(
                "gadget_cover",
                BoundKind::Upper,
                cert.bound,
                Some(format!("scap gadget verify <graph> {path}")),
            )),
            Err(v) => notes.push(format!("gadget cover rejected: {v}")),
        }
    }
    let cert = match partition {
        Some(x) => match verify_partition(g, x) {
            Ok(c) => Some(c),
            Err(v) => {
                notes.push(format!("partition rejected: {v}"));
                None
            }
        },
        None if g.n() <= AUTO_PARTITION_MAX_N && g.m() > 0 => find_partition(g).ok(),
        None => None,
    };
    if let Some(c) = cert {
        entries.push(entry(
            "partition",
            BoundKind::Upper,
            c.bound,
            Some(format!("scap partition verify <graph> --x {}", join(&c.x))),
        ));
    }
    let report = BoundsReport::from_entries(g, entries);
    if !report.consistent {
        return Err(CliError::Inconsistent(format!(
            "best lower {} exceeds best upper {}",
            format_rational(&report.best_lower),
            format_rational(&report.best_upper)
        ))
        .into());
    }
    Ok((report, notes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactReport {
    pub n: usize,
    pub q: u64,
    pub scap: Option<ExactResult>,
    pub ind: Option<ExactResult>,
    pub sandwich: Option<SandwichReport>,
}

fn check_states(g: &Graph, q: u64, cap: u64) -> Result<()> {
    let states = (q as f64).powi(g.n() as i32);
    if states > cap as f64 {
        return Err(CliError::Cap(format!("q^n = {q}^{} exceeds --cap-states {cap}", g.n())).into());
    }
    Ok(())
}

pub fn exact_report(
    g: &Graph,
    q: u64,
    kind: Quantity,
    method: ExactMethod,
    cap_states: u64,
    work_cap_bits: f64,
) -> Result<ExactReport> {
    if q < 2 {
        return Err(CliError::Input(format!("q = {q} must be at least 2")).into());
    }
    let scap = if kind != Quantity::Ind {
        Some(match method {
            ExactMethod::Enum => scap_exact_recovery_enum_with(g, q, work_cap_bits)?,
            ExactMethod::Mis => {
                check_states(g, q, cap_states)?;
                scap_exact_mis(g, q)?
            }
            ExactMethod::Auto => match matching_cover(g, q, ValueKind::Scap) {
                Some(r) => r,
                None => {
                    check_states(g, q, cap_states)?;
                    scap_exact_mis(g, q)?
                }
            },
        })
    } else {
        None
    };
    let ind = if kind != Quantity::Scap {
        Some(match (method, matching_cover(g, q, ValueKind::Ind)) {
            (ExactMethod::Auto, Some(r)) => r,
            _ => {
                check_states(g, q, cap_states)?;
                ind_exact_chromatic(g, q)?
            }
        })
    } else {
        None
    };
    for r in scap.iter().chain(&ind) {
        if !r.verify(g) {
            return Err(CliError::Inconsistent(format!("{:?} witness fails verification", r.kind)).into());
        }
    }
    let sandwich = match (&scap, &ind) {
        (Some(s), Some(i)) => {
            let report = sandwich_check(g.n(), q, &s.value.arg, &i.value.arg);
            if !report.lower {
                return Err(CliError::Inconsistent("n - ind_q exceeds scap_q".into()).into());
            }
            Some(report)
        }
        _ => None,
    };
    Ok(ExactReport {
        n: g.n(),
        q,
        scap,
        ind,
        sandwich,
    })
}

fn log_display(r: &ExactResult) -> String {
    match r.value.as_rational() {
        Some(v) => format_rational(&v),
        None => format!("log_{}({}) ≈ {:.6}", r.value.base, r.value.arg, r.value.to_f64()),
    }
}

fn table(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
    out
}

fn row(k: impl Into<String>, v: impl Into<String>) -> (String, String) {
    (k.into(), v.into())
}

fn bounds_table(r: &BoundsReport, notes: &[String]) -> String {
    let mut out = format!("n = {}, m = {}\n", r.n, r.m);
    let mut rows = vec![row("method", "kind      value")];
    for e in &r.entries {
        let kind = format!("{:?}", e.kind).to_lowercase();
        rows.push(row(&e.method, format!("{kind:<9} {}", format_rational(&e.value))));
    }
    out += &table(&rows);
    let _ = writeln!(out, "best lower {} / best upper {}", format_rational(&r.best_lower), format_rational(&r.best_upper));
    for n in notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

fn exact_table(r: &ExactReport) -> String {
    let mut rows = vec![row("n", r.n.to_string()), row("q", r.q.to_string())];
    if let Some(s) = &r.scap {
        rows.push(row("scap_q", format!("{} via {:?}", log_display(s), s.method)));
    }
    if let Some(i) = &r.ind {
        rows.push(row("ind_q", format!("{} via {:?}", log_display(i), i.method)));
    }
    if let Some(s) = &r.sandwich {
        rows.push(row("n - ind_q <= scap_q", s.lower.to_string()));
        rows.push(row("scap_q <= n - ind_q + log_q(n ln q)", format!("{:?}", s.upper).to_lowercase()));
    }
    table(&rows)
}

fn ptas_table(r: &PtasReport, n: usize) -> String {
    let d = &r.decomposition;
    let mut rows = vec![
        row("eps", format_rational(&d.eps)),
        row("cap", d.cap.to_string()),
        row("|V0|", format!("{} (eps n = {:.3}, within: {})", d.removed.len(), to_f64(&d.eps) * n as f64, d.within_eps)),
        row("components", r.components.len().to_string()),
        row("value", format!("{:.6}", r.value_f64())),
    ];
    match r.kind {
        ValueKind::Scap => rows.push(row("scap_q band", format!("[{:.6}, {:.6}]", r.value_f64(), r.scap_upper_f64()))),
        ValueKind::Ind => rows.push(row("ratio bound", format!("{:.6}", r.band))),
    }
    table(&rows)
}

fn approx_table(r: &ApproxReport, rounded: Option<&RoundedCover>) -> String {
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    let mut rows = vec![
        row("n", r.n.to_string()),
        row("fcc", format_rational(&r.fcc)),
        row("disjoint triangles t", r.t.to_string()),
        row("triangle-free", r.triangle_free.to_string()),
        row("scap lower", format_rational(&r.scap_lower)),
        row("scap upper (vc)", opt(r.scap_upper_vc.map(|v| v.to_string()))),
        row("scap guarantee", format_rational(&r.guarantee_scap)),
        row("k = vc(G - T)", opt(r.k.map(|v| v.to_string()))),
        row("scap guarantee at k", opt(r.guarantee_scap_at_k.as_ref().map(format_rational))),
        row("ind upper", format_rational(&r.ind_upper)),
        row("ind guarantee", format_rational(&r.guarantee_ind)),
        row("ind guarantee at t", format_rational(&r.guarantee_ind_at_t)),
    ];
    if let Some(c) = rounded {
        rows.push(row("rounded cover", format!("{} vertices: {}", c.cover.len(), join(&c.cover))));
        rows.push(row("fractional cover", format_rational(&c.fractional)));
    }
    table(&rows)
}

fn cover_table(c: &CoverCertificate) -> String {
    table(&[
        row("verdict", "valid"),
        row("colours k", c.k.to_string()),
        row("total weight", c.total_weight.to_string()),
        row("bound", format_rational(&c.bound)),
    ])
}

fn partition_table(c: &PartitionCertificate) -> String {
    table(&[
        row("X", join(&c.x)),
        row("Y", join(&c.y)),
        row("S_X", join(&c.s_x)),
        row("S_Y", join(&c.s_y)),
        row("bound", format_rational(&c.bound)),
    ])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxOutput {
    pub report: ApproxReport,
    pub rounded: Option<RoundedCover>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict<C, V> {
    Valid { certificate: C },
    Invalid { violation: V },
}

fn verdict_outcome<C: Serialize, V: Serialize + std::fmt::Display>(
    out: OutFormat,
    result: Result<C, V>,
    render: impl Fn(&C) -> String,
) -> Outcome {
    match result {
        Ok(c) => Outcome::ok(match out {
            OutFormat::Json => to_json(&Verdict::<&C, &V>::Valid { certificate: &c }),
            _ => render(&c),
        }),
        Err(v) => Outcome {
            body: match out {
                OutFormat::Json => to_json(&Verdict::<&C, &V>::Invalid { violation: &v }),
                _ => format!("verdict  invalid\nreason   {v}\n"),
            },
            code: EXIT_VERIFY,
        },
    }
}

fn reject_csv(out: OutFormat, command: &str) -> Result<()> {
    if out == OutFormat::Csv {
        bail!(CliError::Input(format!("`{command}` has no CSV output")));
    }
    Ok(())
}

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let gl = &cli.global;
    let load = |p: &Path| load_graph(p, gl.format);
    match &cli.command {
        Command::Bounds { graph, cover, partition } => {
            let out = gl.out.unwrap_or(OutFormat::Table);
            reject_csv(out, "bounds")?;
            let g = load(graph)?;
            let spec = match cover {
                Some(p) => Some((
                    serde_json::from_str::<CoverSpec>(&read_text(p)?)
                        .with_context(|| format!("parsing {}", p.display()))?,
                    p.display().to_string(),
                )),
                None => None,
            };
            let (report, notes) = bounds_report(&g, spec.as_ref().map(|(s, p)| (s, p.as_str())), partition.as_deref())?;
            Ok(Outcome::ok(match out {
                OutFormat::Json => to_json(&report),
                _ => bounds_table(&report, &notes),
            }))
        }
        Command::Exact { graph, kind, method, work_cap_bits } => {
            let out = gl.out.unwrap_or(OutFormat::Table);
            reject_csv(out, "exact")?;
            let g = load(graph)?;
            let report = exact_report(&g, gl.q, *kind, *method, gl.cap_states, *work_cap_bits)?;
            Ok(Outcome::ok(match out {
                OutFormat::Json => to_json(&report),
                _ => exact_table(&report),
            }))
        }
        Command::Ptas { graph, eps, kind, cap } => {
            let out = gl.out.unwrap_or(OutFormat::Table);
            reject_csv(out, "ptas")?;
            let g = load(graph)?;
            let eps = parse_rat(eps, "eps")?;
            if eps <= from_usize(0) || eps > from_usize(1) {
                return Err(PtasError::InvalidEps(eps).into());
            }
            let value_kind = match kind {
                Quantity::Scap => ValueKind::Scap,
                Quantity::Ind => ValueKind::Ind,
                Quantity::Both => bail!(CliError::Input("ptas takes --kind scap or --kind ind".into())),
            };
            let d = decompose_with(&g, &eps, cap.unwrap_or_else(|| default_cap(&eps)), gl.seed);
            let report = ptas_with(&g, gl.q, d, value_kind)?;
            Ok(Outcome::ok(match out {
                OutFormat::Json => to_json(&report),
                _ => ptas_table(&report, g.n()),
            }))
        }
        Command::Gadget {
            action: GadgetAction::Verify { graph, cover },
        } => {
            let out = gl.out.unwrap_or(OutFormat::Table);
            reject_csv(out, "gadget verify")?;
            let g = load(graph)?;
            let spec: CoverSpec =
                serde_json::from_str(&read_text(cover)?).with_context(|| format!("parsing {}", cover.display()))?;
            let built = spec.build(&g).map_err(|e| CliError::Input(e.to_string()))?;
            Ok(verdict_outcome(out, verify_gadget_cover(&g, &built), cover_table))
        }
        Command::Partition { action } => {
            let out = gl.out.unwrap_or(OutFormat::Table);
            reject_csv(out, "partition")?;
            match action {
                PartitionAction::Find { graph } => {
                    let g = load(graph)?;
                    if g.n() > FIND_PARTITION_MAX_N {
                        bail!(PartitionError::SearchSpaceTooLarge {
                            n: g.n(),
                            limit: FIND_PARTITION_MAX_N
                        });
                    }
                    Ok(verdict_outcome(out, find_partition(&g).map_err(|e| e.to_string()), partition_table))
                }
                PartitionAction::Verify { graph, x } => {
                    let g = load(graph)?;
                    Ok(verdict_outcome(out, verify_partition(&g, x), partition_table))
                }
            }
        }
        Command::Chords { graph, order } => {
            let out = gl.out.unwrap_or(OutFormat::Table);
            reject_csv(out, "chords")?;
            let g = load(graph)?;
            let result = chorded_cycle_certificate(&g, order.as_deref());
            if let Err(e @ PartitionError::SearchSpaceTooLarge { .. }) = &result {
                bail!(e.clone());
            }
            Ok(verdict_outcome(out, result.map_err(|e| e.to_string()), |c| {
                let mut s = table(&[
                    row("cycle", join(&c.order)),
                    row("chords", c.chords.iter().map(|(a, b)| format!("{a}-{b}")).collect::<Vec<_>>().join(" ")),
                    row("endpoints", join(&c.endpoints)),
                    row("middles", join(&c.middles)),
                ]);
                s += &partition_table(&c.partition);
                s
            }))
        }
        Command::Partial { graph, delta, grid, digits } => {
            let out = gl.out.unwrap_or(OutFormat::Csv);
            let g = load(graph)?;
            let deltas = match delta {
                Some(d) => vec![parse_rat(d, "delta")?],
                None => {
                    if *grid < 2 {
                        bail!(CliError::Input("--grid needs at least 2 points".into()));
                    }
                    delta_grid(*grid)
                }
            };
            let reports = sweep(&g, gl.q, &deltas, *digits)?;
            if let Some(bad) = reports.iter().find(|r| !r.consistent()) {
                bail!(CliError::Inconsistent(format!(
                    "lower bound exceeds an upper bound at delta = {}",
                    format_rational(&bad.delta)
                )));
            }
            Ok(Outcome::ok(match out {
                OutFormat::Json => to_json(&reports),
                _ => sweep_csv(&reports, 12),
            }))
        }
        Command::Product { first, second } => {
            let (a, b) = (load(first)?, load(second)?);
            Ok(Outcome::ok(io::emit(&cartesian_product(&a, &b), gl.format.into())))
        }
        Command::Approx { graph, round } => {
            let out = gl.out.unwrap_or(OutFormat::Table);
            reject_csv(out, "approx")?;
            let g = load(graph)?;
            let report = approx_scap_planar(&g)?;
            let rounded = if *round { Some(round_vc_4_3(&g)?) } else { None };
            Ok(Outcome::ok(match out {
                OutFormat::Json => to_json(&ApproxOutput { report, rounded }),
                _ => approx_table(&report, rounded.as_ref()),
            }))
        }
    }
}
