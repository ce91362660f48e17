//! The `twisted` command line. Every command reads an optional JSON config,
//! applies flag overrides and writes a deterministic report to `--out` or
//! stdout. Exit codes: 0 pass, 1 check or computation failure, 2 config error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cohomology::{derivation_chain, sobolev_profile};
use crate::config::{
    build_algebra_matrix, build_matrix, cochain_by_name, AlgebraSpec, ComplexSpec, CoverSpec, ElementSpec, GroupSpec,
    MultiplierSpec, ProfileSpec, TermSpec, TraceSpec,
};
use crate::error::{Error, Result};
use crate::group::GroupDescriptor;
use crate::linalg::CMatrix;
use crate::mishchenko::lott_pairing_circle;
use crate::multiplier::Multiplier;
use crate::phase::{format_rational, parse_rational};
use crate::representations::butterfly_csv;
use crate::sampling::DEFAULT_SEED;
use crate::spectral::{
    betti_from_complex, eta_closed_form, eta_germ, eta_operator_matrix, eta_quadrature, spectral_flow, twisted_betti,
    twisted_betti_bloch, EtaEstimate, EtaMethod, EtaNormalization, SpectralFlowOptions, SpectralPath,
};
use crate::suites::{run_suite, Suite, SuiteContext};
use crate::traces::TraceFunctional;

#[derive(Debug, Parser)]
#[command(name = "twisted", version, about = "Twisted group algebras: checks, spectra and invariants")]
pub struct Cli {
    /// JSON config for the command; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for randomized suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file (stdout if absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = NormalizationArg::Half)]
    pub eta_normalization: NormalizationArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    Half,
    Full,
}

impl From<NormalizationArg> for EtaNormalization {
    fn from(n: NormalizationArg) -> Self {
        match n {
            NormalizationArg::Half => EtaNormalization::Half,
            NormalizationArg::Full => EtaNormalization::Full,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run property suites.
    Verify {
        /// Comma-separated subset of algebra,multiplier,traces,spectral,cohomology,mishchenko.
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        /// Short group name: z, z2, s3, a5, c3, trivial.
        #[arg(long)]
        group: Option<String>,
        /// Short multiplier: trivial, magnetic:p/q, magnetic:p/q:symmetric.
        #[arg(long)]
        multiplier: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Harper spectra over all fluxes p/q with q ≤ qmax, as CSV.
    Butterfly {
        #[arg(long)]
        qmax: Option<usize>,
        #[arg(long)]
        kgrid: Option<usize>,
    },
    /// Eta invariant of a matrix or of an operator over the twisted algebra.
    Eta {
        /// Matrix as JSON rows, e.g. '[[1,0],[0,-2]]'.
        #[arg(long)]
        matrix: Option<String>,
        /// Tabulate over the powers σ^s of the multiplier, e.g. 0,1/8,1/4.
        #[arg(long, value_delimiter = ',')]
        s_grid: Vec<String>,
    },
    /// Spectral flow along a path of Hermitian matrices.
    SpectralFlow,
    /// Betti numbers from Laplacian blocks, an odd graded operator or a cycle graph.
    Betti {
        /// de Rham complex of the cycle graph on this many vertices.
        #[arg(long)]
        cycle: Option<usize>,
        #[arg(long)]
        zero_tol: Option<f64>,
    },
    /// Rapid-decay Sobolev norms and the derivation chain.
    Sobolev {
        /// Single group element as comma-separated integers, e.g. 3,-2.
        #[arg(long, allow_hyphen_values = true)]
        element: Option<String>,
        #[arg(long, value_delimiter = ',')]
        s_grid: Vec<String>,
        #[arg(long)]
        j_max: Option<usize>,
    },
    /// Pairing of a degree-one cochain on ℤ with a circle cover.
    PairingCircle {
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        patches: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        winding: Option<i64>,
        #[arg(long)]
        cochain: Option<String>,
    },
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            let kind = if is_config_error(&e) { "config" } else { "computation" };
            eprintln!("{}", json!({ "error": kind, "message": e.to_string() }));
            exit_code(&e)
        }
    }
}

fn is_config_error(e: &Error) -> bool {
    matches!(e, Error::Config(_) | Error::Json(_) | Error::Io(_) | Error::InvalidRational(_))
}

pub fn exit_code(e: &Error) -> i32 {
    if is_config_error(e) {
        2
    } else {
        1
    }
}

pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Verify {
            suite,
            group,
            multiplier,
            samples,
        } => {
            let mut cfg: VerifyConfig = load(cli)?;
            if !suite.is_empty() {
                cfg.suites = suite.clone();
            }
            if let Some(g) = group {
                cfg.group = Some(GroupSpec::parse_short(g)?);
            }
            if let Some(m) = multiplier {
                cfg.multiplier = Some(MultiplierSpec::parse_short(m)?);
            }
            if samples.is_some() {
                cfg.samples = *samples;
            }
            cfg.seed = cli.seed.or(cfg.seed);
            let (value, pass) = verify(&cfg)?;
            emit_json(cli, &value)?;
            Ok(if pass { 0 } else { 1 })
        }
        Command::Butterfly { qmax, kgrid } => {
            let mut cfg: ButterflyConfig = load(cli)?;
            cfg.qmax = qmax.unwrap_or(cfg.qmax);
            cfg.kgrid = kgrid.unwrap_or(cfg.kgrid);
            if !(1..=64).contains(&cfg.qmax) || cfg.kgrid == 0 {
                return Err(Error::Config(format!("need 1 ≤ qmax ≤ 64 and kgrid ≥ 1, got {} and {}", cfg.qmax, cfg.kgrid)));
            }
            with_output(cli, |w| butterfly_csv(cfg.qmax, cfg.kgrid, w))?;
            Ok(0)
        }
        Command::Eta { matrix, s_grid } => {
            let mut cfg: EtaConfig = load(cli)?;
            if let Some(m) = matrix {
                cfg.matrix = Some(serde_json::from_str(m)?);
                cfg.operator = None;
            }
            if !s_grid.is_empty() {
                cfg.s_grid = s_grid.clone();
            }
            emit_json(cli, &eta(&cfg, cli.eta_normalization.into())?)?;
            Ok(0)
        }
        Command::SpectralFlow => {
            let cfg: SpectralFlowConfig = load(cli)?;
            let report = spectral_flow(&cfg.path()?, &SpectralFlowOptions {
                zero_tol: cfg.zero_tol,
                ..Default::default()
            })?;
            let pass = (report.sf as f64 - report.eta_formula).abs() <= 1e-9;
            emit_json(cli, &json!({ "sf": report.sf, "pass": pass, "report": report }))?;
            Ok(if pass { 0 } else { 1 })
        }
        Command::Betti { cycle, zero_tol } => {
            let mut cfg: BettiConfig = load(cli)?;
            if let Some(n) = cycle {
                cfg = BettiConfig {
                    cycle: Some(*n),
                    zero_tol: cfg.zero_tol,
                    ..Default::default()
                };
            }
            cfg.zero_tol = zero_tol.unwrap_or(cfg.zero_tol);
            emit_json(cli, &betti(&cfg)?)?;
            Ok(0)
        }
        Command::Sobolev { element, s_grid, j_max } => {
            let mut cfg: SobolevConfig = load(cli)?;
            if let Some(e) = element {
                let v = e
                    .split(',')
                    .map(|x| x.trim().parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::Config(format!("bad element '{e}'")))?;
                cfg.element = Some(AlgebraSpec::Terms {
                    terms: vec![TermSpec {
                        g: ElementSpec::Vector(v),
                        re: 1.0,
                        im: 0.0,
                    }],
                });
            }
            if !s_grid.is_empty() {
                cfg.s = s_grid.clone();
            }
            if j_max.is_some() {
                cfg.j_max = *j_max;
            }
            emit_json(cli, &sobolev(&cfg)?)?;
            Ok(0)
        }
        Command::PairingCircle {
            grid,
            patches,
            winding,
            cochain,
        } => {
            let mut cfg: PairingConfig = load(cli)?;
            cfg.grid = grid.unwrap_or(cfg.grid);
            cfg.patches = patches.unwrap_or(cfg.patches);
            cfg.winding = winding.unwrap_or(cfg.winding);
            if let Some(c) = cochain {
                cfg.cochain = c.clone();
            }
            let cover = CoverSpec::Circle {
                grid: cfg.grid,
                patches: cfg.patches,
                winding: cfg.winding,
                ramp: cfg.ramp.clone(),
                profile: cfg.profile,
            }
            .build()?;
            let c = cochain_by_name(&cfg.cochain, Arc::new(GroupDescriptor::free_abelian(1)))?;
            let value = lott_pairing_circle(&cover, &c)?;
            emit_json(cli, &json!({ "cochain": cfg.cochain, "winding": cfg.winding, "pairing": value }))?;
            Ok(0)
        }
    }
}

fn load<T: DeserializeOwned + Default>(cli: &Cli) -> Result<T> {
    match &cli.config {
        Some(path) => Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?),
        None => Ok(T::default()),
    }
}

fn with_output(cli: &Cli, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match &cli.out {
        Some(path) => {
            let mut w = BufWriter::new(create(path)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let mut w = BufWriter::new(io::stdout().lock());
            f(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

fn emit_json<T: Serialize>(cli: &Cli, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    with_output(cli, |w| Ok(writeln!(w, "{text}")?))
}

fn group_or(spec: &Option<GroupSpec>, default: GroupDescriptor) -> Result<Arc<GroupDescriptor>> {
    Ok(Arc::new(match spec {
        Some(g) => g.build()?,
        None => default,
    }))
}

fn multiplier_or_trivial(spec: &Option<MultiplierSpec>, group: Arc<GroupDescriptor>) -> Result<Arc<Multiplier>> {
    Ok(Arc::new(match spec {
        Some(m) => m.build(group)?,
        None => Multiplier::trivial(group),
    }))
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub group: Option<GroupSpec>,
    pub multiplier: Option<MultiplierSpec>,
    /// All suites if empty.
    pub suites: Vec<String>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

pub const DEFAULT_SAMPLES: usize = 1000;

pub fn verify(cfg: &VerifyConfig) -> Result<(serde_json::Value, bool)> {
    let group = group_or(&cfg.group, GroupDescriptor::z2())?;
    let multiplier = multiplier_or_trivial(&cfg.multiplier, group)?;
    let suites = if cfg.suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        cfg.suites.iter().map(|s| s.parse()).collect::<Result<Vec<Suite>>>()?
    };
    let ctx = SuiteContext {
        multiplier,
        samples: cfg.samples.unwrap_or(DEFAULT_SAMPLES),
        seed: cfg.seed.unwrap_or(DEFAULT_SEED),
    };
    let reports = suites.into_iter().map(|s| run_suite(s, &ctx)).collect::<Result<Vec<_>>>()?;
    let pass = reports.iter().all(|r| r.pass);
    let value = json!({
        "pass": pass,
        "seed": ctx.seed,
        "samples": ctx.samples,
        "suites": reports,
    });
    Ok((value, pass))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ButterflyConfig {
    pub qmax: usize,
    pub kgrid: usize,
}

impl Default for ButterflyConfig {
    fn default() -> Self {
        ButterflyConfig { qmax: 8, kgrid: 64 }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixEtaMethod {
    #[default]
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MethodSpec {
    Bloch { grid: usize },
    Truncation { radius: usize },
}

impl From<MethodSpec> for EtaMethod {
    fn from(m: MethodSpec) -> Self {
        match m {
            MethodSpec::Bloch { grid } => EtaMethod::Bloch { grid },
            MethodSpec::Truncation { radius } => EtaMethod::Truncation { radius },
        }
    }
}

/// A square matrix over `ℂ(Γ,σ)` with a trace and an evaluation method.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub group: Option<GroupSpec>,
    pub multiplier: MultiplierSpec,
    pub matrix: Vec<Vec<AlgebraSpec>>,
    pub trace: Option<TraceSpec>,
    pub method: MethodSpec,
}

impl OperatorSpec {
    fn build_with(&self, multiplier: &MultiplierSpec) -> Result<(crate::algebra::AlgebraMatrix, TraceFunctional)> {
        let group = group_or(&self.group, GroupDescriptor::z2())?;
        let m = Arc::new(multiplier.build(group)?);
        let a = build_algebra_matrix(&self.matrix, m.clone())?;
        let tau = match &self.trace {
            Some(t) => t.build(m)?,
            None => TraceFunctional::regular(m),
        };
        Ok((a, tau))
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EtaConfig {
    pub matrix: Option<Vec<Vec<ComplexSpec>>>,
    pub method: MatrixEtaMethod,
    pub n_points: Option<usize>,
    pub t_max: Option<f64>,
    pub zero_tol: Option<f64>,
    pub operator: Option<OperatorSpec>,
    /// Exponents `s` as `"p/q"`; evaluates the operator over `σ^s`.
    pub s_grid: Vec<String>,
}

fn normalized(e: EtaEstimate, n: EtaNormalization) -> serde_json::Value {
    json!({
        "eta": n.apply(e.eta),
        "error_bound": n.apply(e.error_bound),
        "method": e.method,
        "params": e.params,
    })
}

pub fn eta(cfg: &EtaConfig, n: EtaNormalization) -> Result<serde_json::Value> {
    let mut out = match (&cfg.matrix, &cfg.operator) {
        (Some(rows), None) => {
            if !cfg.s_grid.is_empty() {
                return Err(Error::Config("s_grid needs an operator, not a matrix".into()));
            }
            let a = build_matrix(rows)?;
            let e = match cfg.method {
                MatrixEtaMethod::ClosedForm => EtaEstimate {
                    eta: eta_closed_form(&a, cfg.zero_tol)?,
                    error_bound: 0.0,
                    method: "closed-form".into(),
                    params: json!({ "zero_tol": cfg.zero_tol }),
                },
                MatrixEtaMethod::Quadrature => eta_quadrature(&a, cfg.t_max, cfg.n_points.unwrap_or(64), cfg.zero_tol)?,
            };
            normalized(e, n)
        }
        (None, Some(op)) if cfg.s_grid.is_empty() => {
            let (a, tau) = op.build_with(&op.multiplier)?;
            normalized(eta_operator_matrix(&a, &tau, op.method.into())?, n)
        }
        (None, Some(op)) => {
            let grid = cfg.s_grid.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            let germ = eta_germ(
                |s| {
                    op.build_with(&MultiplierSpec::Power {
                        base: Box::new(op.multiplier.clone()),
                        s: format_rational(&s),
                    })
                },
                &grid,
                op.method.into(),
            )?;
            json!({
                "germ": germ
                    .into_iter()
                    .map(|(s, e)| {
                        let mut v = normalized(e, n);
                        v["s"] = json!(s);
                        v
                    })
                    .collect::<Vec<_>>(),
            })
        }
        _ => return Err(Error::Config("eta needs exactly one of 'matrix' or 'operator'".into())),
    };
    out["normalization"] = json!(match n {
        EtaNormalization::Half => "half",
        EtaNormalization::Full => "full",
    });
    Ok(out)
}

/// `{"path": [A₀, …, A_n]}` at equally spaced times, or
/// `{"generator": "linear", "A0": …, "A1": …}`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectralFlowConfig {
    pub path: Option<Vec<Vec<Vec<ComplexSpec>>>>,
    pub generator: Option<String>,
    #[serde(rename = "A0")]
    pub a0: Option<Vec<Vec<ComplexSpec>>>,
    #[serde(rename = "A1")]
    pub a1: Option<Vec<Vec<ComplexSpec>>>,
    pub zero_tol: Option<f64>,
}

impl SpectralFlowConfig {
    pub fn path(&self) -> Result<SpectralPath> {
        match (&self.path, self.generator.as_deref(), &self.a0, &self.a1) {
            (Some(samples), None, None, None) => {
                if samples.len() < 2 {
                    return Err(Error::Config("a sampled path needs at least two matrices".into()));
                }
                let last = (samples.len() - 1) as f64;
                Ok(SpectralPath::Samples(
                    samples
                        .iter()
                        .enumerate()
                        .map(|(i, m)| Ok((i as f64 / last, build_matrix(m)?)))
                        .collect::<Result<_>>()?,
                ))
            }
            (None, Some("linear"), Some(a0), Some(a1)) => Ok(SpectralPath::Linear {
                a0: build_matrix(a0)?,
                a1: build_matrix(a1)?,
            }),
            (None, Some(g), _, _) if g != "linear" => Err(Error::Config(format!("unknown generator '{g}'"))),
            _ => Err(Error::Config("spectral-flow needs 'path' or a linear generator with A0 and A1".into())),
        }
    }
}

/// Laplacian blocks over `ℂ(ℤ²,σ)`, averaged over Bloch fibers.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlochBettiSpec {
    pub multiplier: MultiplierSpec,
    pub even: Vec<Vec<AlgebraSpec>>,
    pub odd: Vec<Vec<AlgebraSpec>>,
    pub grid: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BettiConfig {
    pub even: Option<Vec<Vec<ComplexSpec>>>,
    pub odd: Option<Vec<Vec<ComplexSpec>>>,
    pub d: Option<Vec<Vec<ComplexSpec>>>,
    pub grading: Option<Vec<i8>>,
    pub cycle: Option<usize>,
    pub bloch: Option<BlochBettiSpec>,
    pub zero_tol: f64,
}

impl Default for BettiConfig {
    fn default() -> Self {
        BettiConfig {
            even: None,
            odd: None,
            d: None,
            grading: None,
            cycle: None,
            bloch: None,
            zero_tol: 1e-9,
        }
    }
}

/// `D = [[0, dᵀ], [d, 0]]` for the coboundary `d` from vertex to edge
/// functions of the cycle graph on `n` vertices, graded `+1` on vertices.
pub fn cycle_graph_complex(n: usize) -> Result<(CMatrix, Vec<i8>)> {
    if n < 3 {
        return Err(Error::Config(format!("a cycle graph needs at least 3 vertices, got {n}")));
    }
    let d = CMatrix::from_fn(n, n, |e, v| {
        if v == (e + 1) % n {
            Complex64::new(1.0, 0.0)
        } else if v == e {
            Complex64::new(-1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let full = CMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, false) => d.row(j - n)[i].conj(),
        (false, true) => d.row(i - n)[j],
        _ => Complex64::new(0.0, 0.0),
    });
    let grading = (0..2 * n).map(|i| if i < n { 1 } else { -1 }).collect();
    Ok((full, grading))
}

pub fn betti(cfg: &BettiConfig) -> Result<serde_json::Value> {
    let b = match (&cfg.even, &cfg.odd, &cfg.d, &cfg.grading, cfg.cycle, &cfg.bloch) {
        (Some(e), Some(o), None, None, None, None) => twisted_betti(&build_matrix(e)?, &build_matrix(o)?, cfg.zero_tol)?,
        (None, None, Some(d), Some(z), None, None) => betti_from_complex(&build_matrix(d)?, z, cfg.zero_tol)?,
        (None, None, None, None, Some(n), None) => {
            let (d, z) = cycle_graph_complex(n)?;
            betti_from_complex(&d, &z, cfg.zero_tol)?
        }
        (None, None, None, None, None, Some(spec)) => {
            let m = Arc::new(spec.multiplier.build(Arc::new(GroupDescriptor::z2()))?);
            let even = build_algebra_matrix(&spec.even, m.clone())?;
            let odd = build_algebra_matrix(&spec.odd, m)?;
            twisted_betti_bloch(&even, &odd, spec.grid, cfg.zero_tol)?
        }
        _ => {
            return Err(Error::Config(
                "betti needs exactly one of {even, odd}, {d, grading}, cycle or bloch".into(),
            ))
        }
    };
    Ok(json!({ "b_even": b.b_even, "b_odd": b.b_odd, "euler": b.b_even - b.b_odd, "zero_tol": b.zero_tol }))
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SobolevConfig {
    pub group: Option<GroupSpec>,
    pub multiplier: Option<MultiplierSpec>,
    pub element: Option<AlgebraSpec>,
    /// Exponents as `"p/q"`; `["1"]` if empty.
    pub s: Vec<String>,
    /// Also report the derivation chain up to this order.
    pub j_max: Option<usize>,
    pub radius: Option<usize>,
}

pub fn sobolev(cfg: &SobolevConfig) -> Result<serde_json::Value> {
    let group = group_or(&cfg.group, GroupDescriptor::z2())?;
    let m = multiplier_or_trivial(&cfg.multiplier, group)?;
    let a = cfg
        .element
        .as_ref()
        .ok_or_else(|| Error::Config("sobolev needs an element".into()))?
        .build(m)?;
    let labels = if cfg.s.is_empty() { vec!["1".to_string()] } else { cfg.s.clone() };
    let grid = labels
        .iter()
        .map(|s| {
            let q = parse_rational(s)?;
            if q < num_rational::Rational64::from_integer(0) {
                return Err(Error::Config(format!("negative exponent {s}")));
            }
            Ok(*q.numer() as f64 / *q.denom() as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    let profile = sobolev_profile(&a, &grid)?;
    let norms: Vec<_> = labels
        .iter()
        .zip(&profile)
        .map(|(s, (_, v))| json!({ "s": s, "norm": v }))
        .collect();
    let mut out = json!({ "sobolev": norms });
    if let Some(j) = cfg.j_max {
        let radius = cfg.radius.unwrap_or_else(|| a.sup_support_length());
        out["chain"] = serde_json::to_value(derivation_chain(&a, j, radius)?)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PairingConfig {
    pub grid: usize,
    pub patches: usize,
    pub winding: i64,
    pub ramp: String,
    pub profile: ProfileSpec,
    pub cochain: String,
}

impl Default for PairingConfig {
    fn default() -> Self {
        PairingConfig {
            grid: 1024,
            patches: 2,
            winding: 1,
            ramp: "1/16".into(),
            profile: ProfileSpec::Cosine,
            cochain: "linear-z(0)".into(),
        }
    }
}
