//! The `fmc` command line: read operators, partitions and symbols from text
//! files, run one analysis, write a file or a JSON report.
//!
//! Exit codes: 0 success, 1 `check` found the operator not invariant,
//! 2 invalid arguments or inputs, 3 a numerical contract failed,
//! 4 an I/O or parse error.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use fmc_core::analysis::{
    operator_norm_from_symbol, schatten_norm, sobolev_fit_with_lambdas, trace_from_symbol,
    SchattenExponent,
};
use fmc_core::format::{self, SymbolFile};
use fmc_core::multiplier::{compose_symbols, extract_symbol, is_invariant, quantize, DEFAULT_INVARIANCE_TOL};
use fmc_core::spectral::{partition_from_operator, ClusteringPolicy};
use fmc_core::{report, torus, DenseOperator, EigenPartition};
use serde_json::{Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_INVARIANT: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

const DEFAULT_CLUSTER_REL_TOL: f64 = 1e-9;
const DEFAULT_CLUSTER_ABS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Eigenspace partition of a Hermitian operator (CMAT -> PART).
    Partition,
    /// Invariance test of an operator against a partition.
    Check,
    /// Matrix symbol of an operator (CMAT + PART -> SYM).
    Symbol,
    /// Operator from a symbol (SYM + PART -> CMAT).
    Quantize,
    /// Operator norm or Schatten norms from a symbol.
    Norm,
    /// Trace from a symbol.
    Trace,
    /// Product of two symbols (SYM x SYM -> SYM).
    Compose,
    /// Growth order fit of a symbol.
    Sobolev,
    /// Torus model: multiplicity table, partitions, invariance contrast.
    TorusDemo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "fmc", version, about = "Fourier multipliers relative to a reference operator")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Operator matrix (CMAT v1).
    #[arg(long = "op", value_name = "PATH")]
    pub op: Option<PathBuf>,
    /// Symbol file (SYM v1); `compose` takes two.
    #[arg(long = "symbol", value_name = "PATH")]
    pub symbols: Vec<PathBuf>,
    /// Partition file (PART v1).
    #[arg(long, value_name = "PATH")]
    pub partition: Option<PathBuf>,
    /// Invariance tolerance; for `partition`, the relative clustering tolerance.
    #[arg(long, value_name = "REAL")]
    pub tol: Option<f64>,
    /// Relative clustering tolerance (overrides --tol for `partition`).
    #[arg(long = "cluster-tol", value_name = "REAL")]
    pub cluster_tol: Option<f64>,
    /// Comma-separated Schatten exponents, `inf` allowed.
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    pub schatten: Vec<String>,
    /// Order of the reference operator.
    #[arg(long, value_name = "REAL")]
    pub nu: Option<f64>,
    /// Torus dimension.
    #[arg(long, value_name = "INT")]
    pub dim: Option<usize>,
    /// Torus frequency cutoff.
    #[arg(long, value_name = "INT")]
    pub cutoff: Option<usize>,
    /// Output file (a directory for `torus-demo`); stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub op: Option<PathBuf>,
    pub symbols: Vec<PathBuf>,
    pub partition: Option<PathBuf>,
    pub tol: f64,
    pub cluster_policy: ClusteringPolicy,
    pub schatten: Vec<SchattenExponent>,
    pub nu: Option<f64>,
    pub dim: Option<usize>,
    pub cutoff: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Numerical,
    Io,
}

#[derive(Debug, Clone)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Validation,
            message: message.into(),
        }
    }

    fn io(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Io,
            message: message.into(),
        }
    }

    fn from_core(err: fmc_core::Error, path: Option<&Path>) -> Self {
        let kind = match &err {
            fmc_core::Error::Parse(_) => ErrorKind::Io,
            e if e.is_numerical() => ErrorKind::Numerical,
            _ => ErrorKind::Validation,
        };
        let message = match (path, err) {
            (Some(p), fmc_core::Error::Parse(e)) => format!("{}: {e}", p.display()),
            (Some(p), e) => format!("{}: {e}", p.display()),
            (None, e) => e.to_string(),
        };
        Self { kind, message }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Validation => EXIT_VALIDATION,
            ErrorKind::Numerical => EXIT_NUMERICAL,
            ErrorKind::Io => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

type CliResult<T> = Result<T, CliError>;

fn positive(name: &str, x: f64) -> CliResult<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(CliError::validation(format!("{name} must be positive, got {x}")))
    }
}

impl RunConfig {
    pub fn from_args(args: Args) -> CliResult<Self> {
        let tol = positive("--tol", args.tol.unwrap_or(DEFAULT_INVARIANCE_TOL))?;
        let rel = match (args.cluster_tol, args.tol) {
            (Some(c), _) => positive("--cluster-tol", c)?,
            (None, Some(t)) if args.command == Command::Partition => t,
            _ => DEFAULT_CLUSTER_REL_TOL,
        };
        let cluster_policy = ClusteringPolicy::new(rel, DEFAULT_CLUSTER_ABS_TOL)
            .map_err(|e| CliError::from_core(e, None))?;
        let schatten = args
            .schatten
            .iter()
            .map(|s| s.parse::<SchattenExponent>().map_err(|e| CliError::from_core(e, None)))
            .collect::<CliResult<Vec<_>>>()?;
        if let Some(nu) = args.nu {
            positive("--nu", nu)?;
        }
        let needs = |flag: bool, name: &str| -> CliResult<()> {
            if flag {
                Ok(())
            } else {
                Err(CliError::validation(format!(
                    "command `{}` requires {name}",
                    command_name(args.command)
                )))
            }
        };
        match args.command {
            Command::Partition => needs(args.op.is_some(), "--op")?,
            Command::Check | Command::Symbol => {
                needs(args.op.is_some(), "--op")?;
                needs(args.partition.is_some(), "--partition")?;
            }
            Command::Quantize => {
                needs(args.symbols.len() == 1, "exactly one --symbol")?;
                needs(args.partition.is_some(), "--partition")?;
            }
            Command::Norm | Command::Trace => needs(args.symbols.len() == 1, "exactly one --symbol")?,
            Command::Compose => needs(args.symbols.len() == 2, "exactly two --symbol")?,
            Command::Sobolev => {
                needs(args.symbols.len() == 1, "exactly one --symbol")?;
                needs(args.nu.is_some(), "--nu")?;
            }
            Command::TorusDemo => {
                needs(args.dim.is_some(), "--dim")?;
                needs(args.cutoff.is_some(), "--cutoff")?;
            }
        }
        Ok(Self {
            command: args.command,
            op: args.op,
            symbols: args.symbols,
            partition: args.partition,
            tol,
            cluster_policy,
            schatten,
            nu: args.nu,
            dim: args.dim,
            cutoff: args.cutoff,
            out: args.out,
            format: args.format,
        })
    }
}

pub fn command_name(c: Command) -> &'static str {
    match c {
        Command::Partition => "partition",
        Command::Check => "check",
        Command::Symbol => "symbol",
        Command::Quantize => "quantize",
        Command::Norm => "norm",
        Command::Trace => "trace",
        Command::Compose => "compose",
        Command::Sobolev => "sobolev",
        Command::TorusDemo => "torus-demo",
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn load<T>(path: &Path, parse: impl Fn(&str) -> fmc_core::Result<T>) -> CliResult<T> {
    let text = read_text(path)?;
    parse(&text).map_err(|e| CliError::from_core(e, Some(path)))
}

fn load_operator(path: &Path) -> CliResult<DenseOperator> {
    load(path, format::read_operator)
}

fn load_partition(path: &Path) -> CliResult<EigenPartition> {
    load(path, format::read_partition)
}

fn load_symbol(path: &Path) -> CliResult<SymbolFile> {
    load(path, format::read_symbol)
}

fn core<T>(r: fmc_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::from_core(e, None))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

/// Sends a file payload to `--out` or stdout.
fn emit(config: &RunConfig, stdout: &mut dyn Write, text: &str) -> CliResult<()> {
    match &config.out {
        Some(path) => write_file(path, text),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(format!("stdout: {e}"))),
    }
}

fn render_report(config: &RunConfig, report: Value) -> String {
    match config.format {
        Format::Json => format!("{report}\n"),
        Format::Text => report::to_text(&report),
    }
}

fn object(entries: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in entries {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

/// Multiplicity table as TSV with header `ell\td`.
pub fn multiplicity_tsv(levels: &[torus::CoarseLevel]) -> String {
    let mut out = String::from("ell\td\n");
    for l in levels {
        out.push_str(&format!("{}\t{}\n", l.ell, l.multiplicity));
    }
    out
}

/// Runs one command. Returns the process exit status on success; payloads go
/// to `--out` or `stdout`.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> CliResult<i32> {
    log::info!("running `{}`", command_name(config.command));
    match config.command {
        Command::Partition => {
            let path = config.op.as_deref().expect("validated");
            let e = load_operator(path)?;
            let p = partition_from_operator(&e, &config.cluster_policy)
                .map_err(|err| CliError::from_core(err, Some(path)))?;
            emit(config, stdout, &format::write_partition(&p))?;
            Ok(EXIT_OK)
        }
        Command::Check => {
            let t = load_operator(config.op.as_deref().expect("validated"))?;
            let p = load_partition(config.partition.as_deref().expect("validated"))?;
            let r = core(is_invariant(&t, &p, config.tol))?;
            let rep = object(vec![("invariance", report::invariance(&r))]);
            emit(config, stdout, &render_report(config, rep))?;
            Ok(if r.invariant { EXIT_OK } else { EXIT_NOT_INVARIANT })
        }
        Command::Symbol => {
            let t = load_operator(config.op.as_deref().expect("validated"))?;
            let p = load_partition(config.partition.as_deref().expect("validated"))?;
            let s = core(extract_symbol(&t, &p))?;
            emit(config, stdout, &core(format::write_symbol(&s, &p.lambdas()))?)?;
            Ok(EXIT_OK)
        }
        Command::Quantize => {
            let s = load_symbol(&config.symbols[0])?;
            let p = load_partition(config.partition.as_deref().expect("validated"))?;
            let t = core(quantize(&s.symbol, &p))?;
            emit(config, stdout, &format::write_cmat(t.matrix()))?;
            Ok(EXIT_OK)
        }
        Command::Norm => {
            let s = load_symbol(&config.symbols[0])?;
            let rep = if config.schatten.is_empty() {
                object(vec![("op_norm", report::number(core(operator_norm_from_symbol(&s.symbol))?))])
            } else {
                let values = config
                    .schatten
                    .iter()
                    .map(|&r| Ok((r, core(schatten_norm(&s.symbol, r))?)))
                    .collect::<CliResult<Vec<_>>>()?;
                object(vec![("schatten", report::schatten(&values))])
            };
            emit(config, stdout, &render_report(config, rep))?;
            Ok(EXIT_OK)
        }
        Command::Trace => {
            let s = load_symbol(&config.symbols[0])?;
            let rep = object(vec![("trace", report::complex(trace_from_symbol(&s.symbol)))]);
            emit(config, stdout, &render_report(config, rep))?;
            Ok(EXIT_OK)
        }
        Command::Compose => {
            let a = load_symbol(&config.symbols[0])?;
            let b = load_symbol(&config.symbols[1])?;
            if a.lambdas != b.lambdas {
                return Err(CliError::validation(
                    "symbols live on partitions with different eigenvalues",
                ));
            }
            let ab = core(compose_symbols(&a.symbol, &b.symbol))?;
            emit(config, stdout, &core(format::write_symbol(&ab, &a.lambdas))?)?;
            Ok(EXIT_OK)
        }
        Command::Sobolev => {
            let s = load_symbol(&config.symbols[0])?;
            let lambdas = match &config.partition {
                Some(path) => {
                    let p = load_partition(path)?;
                    core(s.symbol.check_aligned(&p))?;
                    p.lambdas()
                }
                None => s.lambdas.clone(),
            };
            let nu = config.nu.expect("validated");
            let fit = core(sobolev_fit_with_lambdas(&s.symbol, &lambdas, nu))?;
            let rep = object(vec![("sobolev", report::sobolev(&fit))]);
            emit(config, stdout, &render_report(config, rep))?;
            Ok(EXIT_OK)
        }
        Command::TorusDemo => torus_demo(config, stdout),
    }
}

fn torus_demo(config: &RunConfig, stdout: &mut dyn Write) -> CliResult<i32> {
    let model = core(torus::build_torus_model(
        config.dim.expect("validated"),
        config.cutoff.expect("validated"),
    ))?;
    let levels = model.coarse_levels();
    let tsv = multiplicity_tsv(&levels);
    let Some(dir) = &config.out else {
        stdout
            .write_all(tsv.as_bytes())
            .map_err(|e| CliError::io(format!("stdout: {e}")))?;
        return Ok(EXIT_OK);
    };
    fs::create_dir_all(dir).map_err(|e| CliError::io(format!("{}: {e}", dir.display())))?;
    write_file(&dir.join("multiplicities.tsv"), &tsv)?;
    write_file(
        &dir.join("fine.part"),
        &format::write_partition(&torus::fine_partition(&model)),
    )?;
    write_file(
        &dir.join("coarse.part"),
        &format::write_partition(&torus::coarse_partition(&model)),
    )?;
    let contrast = core(torus::two_partition_contrast(&model, config.tol))?;
    let rep = object(vec![
        (
            "torus",
            object(vec![
                ("n", Value::from(model.n())),
                ("cutoff", Value::from(model.cutoff())),
                ("dim", Value::from(model.dim())),
            ]),
        ),
        ("multiplicities", report::multiplicity_table(&levels)),
        ("contrast", report::contrast(&contrast)),
    ]);
    let name = match config.format {
        Format::Json => "report.json",
        Format::Text => "report.txt",
    };
    write_file(&dir.join(name), &render_report(config, rep))?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Args {
        let mut v = vec!["fmc"];
        v.extend_from_slice(list);
        Args::try_parse_from(v).unwrap()
    }

    #[test]
    fn partition_tol_sets_clustering() {
        let c = RunConfig::from_args(args(&["partition", "--op", "e.cmat", "--tol", "1e-6"])).unwrap();
        assert_eq!(c.cluster_policy.rel_tol(), 1e-6);
        let c = RunConfig::from_args(args(&["check", "--op", "t", "--partition", "p", "--tol", "1e-6"])).unwrap();
        assert_eq!(c.cluster_policy.rel_tol(), DEFAULT_CLUSTER_REL_TOL);
        assert_eq!(c.tol, 1e-6);
    }

    #[test]
    fn validation_errors() {
        let err = RunConfig::from_args(args(&["check", "--op", "t"])).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_VALIDATION);
        let err = RunConfig::from_args(args(&["norm", "--symbol", "s", "--schatten", "1,0"])).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_VALIDATION);
        let err = RunConfig::from_args(args(&["check", "--op", "t", "--partition", "p", "--tol=-1"])).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_VALIDATION);
        let err = RunConfig::from_args(args(&["sobolev", "--symbol", "s"])).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_VALIDATION);
    }

    #[test]
    fn schatten_list_parses() {
        let c = RunConfig::from_args(args(&["norm", "--symbol", "s", "--schatten", "1,2,inf"])).unwrap();
        let rs: Vec<String> = c.schatten.iter().map(|r| r.to_string()).collect();
        assert_eq!(rs, ["1", "2", "inf"]);
    }

    #[test]
    fn tsv_layout() {
        let model = torus::build_torus_model(1, 2).unwrap();
        assert_eq!(multiplicity_tsv(&model.coarse_levels()), "ell\td\n0\t1\n1\t2\n4\t2\n");
    }
}
