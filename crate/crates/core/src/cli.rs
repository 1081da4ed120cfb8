//! The `wick` command line.
//!
//! ```text
//! wick expand --stats fermi --model abstract "A(1) A(2) A(3)"
//! wick vev --model fermisea --modes 3 --filled 1 "c(2) c+(3) c(3) c+(2)"
//! wick green --modes 2 --filled 1 --x "psi(2)@0.5" --y "psi(2)@0"
//! wick check --stats fermi --modes 4 "c(1) c+(2) c(3) c+(4)"
//! ```
//!
//! Exit codes: 0 success, 1 failed oracle check, 2 bad input, 3 model error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{OperatorSymbol, Statistics};
use crate::dsl::{self, OperatorExpr};
use crate::error::Error;
use crate::fock::{FockSpace, Oracle, MAX_BOSE_DIMENSION};
use crate::models::{load_model, AbstractModel, BcsModel, BcsPair, BecModel, FermiSeaModel, ModelDictionary};
use crate::render::{format_complex, format_float, render_json, render_json_scalar, render_text, Provenance};
use crate::time_ordered::{green_product, n_particle_green, vev_t, wick_expand_t};
use crate::wick::{vev, vev_symbolic, wick_expand, ContractionMode, ExpandOptions};

/// Oracle deviations above this fail a check.
pub const CHECK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutput {
    fn ok(stdout: String) -> Self {
        CommandOutput {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        CommandOutput {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "wick", version, about = "Wick expansions, expectation values and Green functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand a product into normal-ordered terms.
    Expand(ExprArgs),
    /// Reference-state expectation value of a product.
    Vev(ExprArgs),
    /// n-particle free Green function.
    Green(GreenArgs),
    /// Maximum oracle deviation of the expansion of a product.
    Check(ExprArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StatsArg {
    Fermi,
    Bose,
}

impl From<StatsArg> for Statistics {
    fn from(s: StatsArg) -> Self {
        match s {
            StatsArg::Fermi => Statistics::Fermi,
            StatsArg::Bose => Statistics::Bose,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Abstract,
    Vacuum,
    Fermisea,
    Bcs,
    Bec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum FormatArg {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Exchange statistics.
    #[arg(long, value_enum)]
    stats: Option<StatsArg>,
    /// Reference state.
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    /// TOML model description; overrides --model.
    #[arg(long, value_name = "PATH")]
    model_file: Option<PathBuf>,
    /// Number of modes (default: the largest mode used).
    #[arg(long, value_name = "M")]
    modes: Option<usize>,
    /// Bosonic occupation cutoff for the oracle.
    #[arg(long, value_name = "N")]
    cutoff: Option<usize>,
    /// Filled levels of the Fermi sea (default: half of the modes).
    #[arg(long, value_name = "N")]
    filled: Option<usize>,
    /// Condensate density N/V.
    #[arg(long)]
    density: Option<f64>,
    /// BCS amplitudes `u,v` of one pair; repeat per pair.
    #[arg(long, value_name = "U,V")]
    uv: Vec<String>,
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct ExprArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Operator product, e.g. "c+(1) c(2) c+(3)@0.5".
    expr: String,
    /// Use T-contractions; every atom needs a time label.
    #[arg(long)]
    time_ordered: bool,
    /// Verify the result against the Fock-space oracle.
    #[arg(long)]
    oracle_check: bool,
    /// Keep contractions formal.
    #[arg(long, conflicts_with = "evaluated")]
    symbolic: bool,
    /// Multiply contraction values into the coefficients.
    #[arg(long)]
    evaluated: bool,
    /// Drop terms with zero coefficient.
    #[arg(long)]
    prune: bool,
}

#[derive(Args, Debug)]
struct GreenArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Annihilation points, e.g. "psi(1)@0.5 psi(2)@0.1".
    #[arg(long)]
    x: String,
    /// Creation points, same form.
    #[arg(long)]
    y: String,
    /// Compare with the Fock-space oracle.
    #[arg(long)]
    oracle_check: bool,
}

enum Failure {
    Input(String),
    Model(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::EmptyProduct
            | Error::MissingTime { .. }
            | Error::OddLength(_)
            | Error::ShapeError(_)
            | Error::NotPureClass { .. }
            | Error::InvalidPermutation { .. } => Failure::Input(e.to_string()),
            other => Failure::Model(other.to_string()),
        }
    }
}

impl From<dsl::ParseError> for Failure {
    fn from(e: dsl::ParseError) -> Self {
        Failure::Input(format!("parse error at {e}"))
    }
}

type Outcome = std::result::Result<CommandOutput, Failure>;

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandOutput::fail(2, text)
            } else {
                CommandOutput::ok(text)
            };
        }
    };
    let result = match cli.command {
        Command::Expand(args) => expand(&args),
        Command::Vev(args) => run_vev(&args),
        Command::Green(args) => green(&args),
        Command::Check(args) => check(&args),
    };
    match result {
        Ok(out) => out,
        Err(Failure::Input(msg)) => CommandOutput::fail(2, format!("error: {msg}\n")),
        Err(Failure::Model(msg)) => CommandOutput::fail(3, format!("error: {msg}\n")),
    }
}

fn max_mode(symbols: &[OperatorSymbol]) -> usize {
    symbols.iter().map(|s| s.mode + 1).max().unwrap_or(1)
}

fn parse_uv(text: &str) -> std::result::Result<BcsPair, Failure> {
    let bad = || Failure::Input(format!("--uv expects `u,v`, got `{text}`"));
    let (u, v) = text.split_once(',').ok_or_else(bad)?;
    let u: f64 = u.trim().parse().map_err(|_| bad())?;
    let v: f64 = v.trim().parse().map_err(|_| bad())?;
    Ok(BcsPair::real(u, v))
}

fn build_model(
    args: &ModelArgs,
    symbols: &[OperatorSymbol],
    default: ModelArg,
) -> std::result::Result<Box<dyn ModelDictionary>, Failure> {
    let model: Box<dyn ModelDictionary> = if let Some(path) = &args.model_file {
        load_model(path)?
    } else {
        let kind = args.model.unwrap_or(default);
        let modes = args.modes.unwrap_or_else(|| max_mode(symbols));
        let stats = args.stats.map(Statistics::from);
        match kind {
            ModelArg::Abstract => Box::new(AbstractModel::new(stats.unwrap_or(Statistics::Fermi), modes)),
            ModelArg::Vacuum => Box::new(FermiSeaModel::vacuum(stats.unwrap_or(Statistics::Fermi), modes)),
            ModelArg::Fermisea => {
                let stats = stats.unwrap_or(Statistics::Fermi);
                let filled = args.filled.unwrap_or(if stats.is_fermi() { modes / 2 } else { 0 });
                Box::new(FermiSeaModel::with_statistics(stats, modes, filled)?)
            }
            ModelArg::Bcs => {
                if args.uv.is_empty() {
                    return Err(Failure::Model("the bcs model needs --uv u,v per pair or --model-file".into()));
                }
                let pairs = args.uv.iter().map(|t| parse_uv(t)).collect::<std::result::Result<_, _>>()?;
                Box::new(BcsModel::new(pairs)?)
            }
            ModelArg::Bec => Box::new(BecModel::new(modes, args.density.unwrap_or(1.0))?),
        }
    };
    if let Some(s) = args.stats {
        if Statistics::from(s) != model.statistics() {
            return Err(Failure::Model(format!(
                "--stats {} conflicts with the {} model ({})",
                Statistics::from(s),
                model.name(),
                model.statistics()
            )));
        }
    }
    Ok(model)
}

fn default_cutoff(model: &dyn ModelDictionary, n_operators: usize) -> usize {
    let modes = model.bare_modes().max(1) as u32;
    let mut cutoff = n_operators + 2;
    while cutoff > 1 && (cutoff + 1).pow(modes) > MAX_BOSE_DIMENSION {
        cutoff -= 1;
    }
    cutoff
}

fn oracle_for<'m>(
    model: &'m dyn ModelDictionary,
    args: &ModelArgs,
    n_operators: usize,
) -> std::result::Result<Oracle<'m>, Failure> {
    let cutoff = args.cutoff.unwrap_or_else(|| default_cutoff(model, n_operators));
    let space = FockSpace::new(model.statistics(), model.bare_modes(), cutoff)?;
    Ok(Oracle::with_space(model, space)?)
}

fn parse_product(text: &str) -> std::result::Result<(OperatorExpr, Vec<OperatorSymbol>), Failure> {
    let expr = dsl::parse(text)?;
    if expr.is_empty() {
        return Err(Error::EmptyProduct.into());
    }
    let symbols = expr.symbols();
    Ok((expr, symbols))
}

fn labels(expr: &OperatorExpr) -> Vec<String> {
    expr.atoms.iter().map(|a| a.to_string()).collect()
}

/// Abstract products stay symbolic unless asked otherwise; concrete models
/// evaluate.
fn contraction_mode(args: &ExprArgs, model: &dyn ModelDictionary) -> ContractionMode {
    if args.symbolic || (!args.evaluated && model.name() == "abstract") {
        ContractionMode::Symbolic
    } else {
        ContractionMode::Evaluated
    }
}

#[derive(Serialize)]
struct Deviation {
    oracle_deviation: f64,
    tolerance: f64,
    passed: bool,
}

fn deviation_line(d: f64) -> String {
    let verdict = if d <= CHECK_TOLERANCE { "ok" } else { "FAILED" };
    format!("oracle deviation {} (tolerance {CHECK_TOLERANCE:e}): {verdict}\n", format_float(d))
}

fn expansion_for(args: &ExprArgs, symbols: &[OperatorSymbol], model: &dyn ModelDictionary) -> crate::error::Result<crate::algebra::Expansion> {
    let options = ExpandOptions {
        mode: contraction_mode(args, model),
        prune_zeros: args.prune,
    };
    if args.time_ordered {
        wick_expand_t(symbols, model, options)
    } else {
        wick_expand(symbols, model, options)
    }
}

fn expand(args: &ExprArgs) -> Outcome {
    let (expr, symbols) = parse_product(&args.expr)?;
    let model = build_model(&args.model, &symbols, ModelArg::Abstract)?;
    let model = model.as_ref();
    let expansion = expansion_for(args, &symbols, model)?;
    let deviation = if args.oracle_check {
        Some(oracle_for(model, &args.model, symbols.len())?.check_identity(&symbols, &expansion)?)
    } else {
        None
    };
    let names = labels(&expr);
    let mut out = match args.model.format {
        FormatArg::Text => render_text(&expansion, &names),
        FormatArg::Json => render_json(
            &expansion,
            &names,
            Provenance {
                command: "expand",
                model: model.name(),
            },
        ),
    };
    let mut code = 0;
    if let Some(d) = deviation {
        if d > CHECK_TOLERANCE {
            code = 1;
        }
        match args.model.format {
            FormatArg::Text => out.push_str(&deviation_line(d)),
            FormatArg::Json => {
                out = json_with_deviation(&out, d);
            }
        }
    }
    Ok(CommandOutput {
        code,
        stdout: out,
        stderr: String::new(),
    })
}

fn json_with_deviation(doc: &str, d: f64) -> String {
    let mut v: serde_json::Value = serde_json::from_str(doc).expect("own output parses");
    v["oracle_deviation"] = serde_json::Value::from(d);
    v["passed"] = serde_json::Value::from(d <= CHECK_TOLERANCE);
    let mut s = serde_json::to_string(&v).expect("serializes");
    s.push('\n');
    s
}

fn run_vev(args: &ExprArgs) -> Outcome {
    let (expr, symbols) = parse_product(&args.expr)?;
    let model = build_model(&args.model, &symbols, ModelArg::Abstract)?;
    let model = model.as_ref();
    let origin = Provenance {
        command: "vev",
        model: model.name(),
    };
    if contraction_mode(args, model) == ContractionMode::Symbolic {
        let expansion = vev_symbolic(&symbols, model)?;
        let names = labels(&expr);
        return Ok(CommandOutput::ok(match args.model.format {
            FormatArg::Text => render_text(&expansion, &names),
            FormatArg::Json => render_json(&expansion, &names, origin),
        }));
    }
    let value = if args.time_ordered {
        vev_t(&symbols, model)?
    } else {
        vev(&symbols, model)?
    };
    scalar_output(value, args.oracle_check, &args.model, origin, || {
        let oracle = oracle_for(model, &args.model, symbols.len())?;
        Ok(if args.time_ordered {
            oracle.vev_t(&symbols)?
        } else {
            oracle.vev(&symbols)?
        })
    })
}

fn scalar_output(
    value: Complex64,
    oracle_check: bool,
    args: &ModelArgs,
    origin: Provenance<'_>,
    oracle_value: impl FnOnce() -> std::result::Result<Complex64, Failure>,
) -> Outcome {
    let deviation = if oracle_check {
        Some((oracle_value()? - value).norm())
    } else {
        None
    };
    let code = i32::from(deviation.is_some_and(|d| d > CHECK_TOLERANCE));
    let stdout = match args.format {
        FormatArg::Text => {
            let mut s = format!("{}\n", format_complex(value));
            if let Some(d) = deviation {
                s.push_str(&deviation_line(d));
            }
            s
        }
        FormatArg::Json => match deviation {
            Some(d) => render_json_scalar(
                value,
                origin,
                Deviation {
                    oracle_deviation: d,
                    tolerance: CHECK_TOLERANCE,
                    passed: d <= CHECK_TOLERANCE,
                },
            ),
            None => render_json_scalar(value, origin, serde_json::Map::new()),
        },
    };
    Ok(CommandOutput {
        code,
        stdout,
        stderr: String::new(),
    })
}

fn points(text: &str, flag: &str) -> std::result::Result<Vec<(usize, f64)>, Failure> {
    let expr = dsl::parse(text)?;
    expr.atoms
        .iter()
        .map(|a| {
            let s = a.to_symbol();
            if !s.is_field() {
                return Err(Failure::Input(format!("{flag}: `{a}` is not a field operator")));
            }
            let t = s
                .time
                .ok_or_else(|| Failure::Input(format!("{flag}: `{a}` has no time label")))?;
            Ok((s.mode, t))
        })
        .collect()
}

fn green(args: &GreenArgs) -> Outcome {
    let xs = points(&args.x, "--x")?;
    let ys = points(&args.y, "--y")?;
    let probe: Vec<OperatorSymbol> = xs.iter().chain(&ys).map(|&(m, _)| OperatorSymbol::psi(m)).collect();
    let model = build_model(&args.model, &probe, ModelArg::Fermisea)?;
    let model = model.as_ref();
    let value = n_particle_green(&xs, &ys, model)?;
    let method = if model.has_anomalous() || model.has_condensate() {
        "partitions"
    } else if model.statistics().is_fermi() {
        "determinant"
    } else {
        "permanent"
    };
    #[derive(Serialize)]
    struct Extra<'a> {
        method: &'a str,
        #[serde(skip_serializing_if = "Option::is_none")]
        oracle_deviation: Option<f64>,
    }
    let deviation = if args.oracle_check {
        let product = green_product(&xs, &ys);
        let oracle = oracle_for(model, &args.model, product.len())?;
        let phase = Complex64::new(0.0, -1.0).powu(xs.len() as u32);
        Some((phase * oracle.vev_t(&product)? - value).norm())
    } else {
        None
    };
    let code = i32::from(deviation.is_some_and(|d| d > CHECK_TOLERANCE));
    let stdout = match args.model.format {
        FormatArg::Text => {
            let mut s = format!("{}\n", format_complex(value));
            if let Some(d) = deviation {
                s.push_str(&deviation_line(d));
            }
            s
        }
        FormatArg::Json => render_json_scalar(
            value,
            Provenance {
                command: "green",
                model: model.name(),
            },
            Extra {
                method,
                oracle_deviation: deviation,
            },
        ),
    };
    Ok(CommandOutput {
        code,
        stdout,
        stderr: String::new(),
    })
}

fn check(args: &ExprArgs) -> Outcome {
    let (_, symbols) = parse_product(&args.expr)?;
    let model = build_model(&args.model, &symbols, ModelArg::Fermisea)?;
    let model = model.as_ref();
    let expansion = expansion_for(args, &symbols, model)?;
    let oracle = oracle_for(model, &args.model, symbols.len())?;
    let d = oracle.check_identity(&symbols, &expansion)?;
    let passed = d <= CHECK_TOLERANCE;
    let stdout = match args.model.format {
        FormatArg::Text => deviation_line(d),
        FormatArg::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                schema: u32,
                command: &'a str,
                model: &'a str,
                terms: usize,
                oracle_deviation: f64,
                tolerance: f64,
                passed: bool,
            }
            let mut s = serde_json::to_string(&Doc {
                schema: crate::render::SCHEMA_VERSION,
                command: "check",
                model: model.name(),
                terms: expansion.len(),
                oracle_deviation: d,
                tolerance: CHECK_TOLERANCE,
                passed,
            })
            .expect("serializes");
            s.push('\n');
            s
        }
    };
    Ok(CommandOutput {
        code: i32::from(!passed),
        stdout,
        stderr: String::new(),
    })
}
