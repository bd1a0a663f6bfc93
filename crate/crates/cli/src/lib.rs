//! Command-line front end for the `dynatomic` library.

pub mod commands;
pub mod document;
pub mod parse;

use clap::{Args, Parser, Subcommand};
use dynatomic::Model;

use crate::document::{InputEcho, ResultDocument, Status};
use crate::parse::{parse_field, parse_map, MapSpec};

#[derive(Parser, Debug)]
#[command(
    name = "dynatomic",
    version,
    about = "Periodic and dynatomic cycles of polynomial maps"
)]
pub struct Cli {
    /// Indent the output document.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// φⁿ(z) − z and the dynatomic polynomial Φ*ₙ.
    Dynatomic(DynatomicArgs),
    /// a_P(n) and a*_P(n) at one point.
    Multiplicity(MultiplicityArgs),
    /// The cycles Φₙ and Φ*ₙ with an effectivity check.
    Cycle(CycleArgs),
    /// Deformation checks for φ(z) + t.
    DeformCheck(DeformArgs),
    /// Effectivity, Möbius inversion and monotonicity for every m ≤ n.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct MapArgs {
    /// Coordinate expressions, comma separated.
    #[arg(long)]
    pub map: String,
    /// Q, F<p> or F<p>^<k>.
    #[arg(long)]
    pub field: Option<String>,
    /// Variable names, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub vars: Vec<String>,
    /// affine or P1.
    #[arg(long, default_value = "affine")]
    pub model: String,
}

#[derive(Args, Debug)]
pub struct DynatomicArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long)]
    pub n: u64,
}

#[derive(Args, Debug)]
pub struct MultiplicityArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long)]
    pub n: u64,
    /// Coordinates, comma separated; `inf` for the point at infinity of P1.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
}

#[derive(Args, Debug)]
pub struct CycleArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long)]
    pub n: u64,
    /// Largest extension degree enumerated over finite fields.
    #[arg(long, default_value_t = 1)]
    pub ext_cap: u32,
    /// Candidate points for multivariate maps over Q, separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
}

#[derive(Args, Debug)]
pub struct DeformArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long)]
    pub n: u64,
    /// Parameter values decreasing to 0, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub t_sequence: Vec<String>,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Decimal digits for numeric root refinement.
    #[arg(long, default_value_t = 30)]
    pub precision: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// Largest period checked.
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub ext_cap: u32,
    /// Candidate points for multivariate maps over Q, separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Dynatomic(_) => "dynatomic",
            Command::Multiplicity(_) => "multiplicity",
            Command::Cycle(_) => "cycle",
            Command::DeformCheck(_) => "deform-check",
            Command::Verify(_) => "verify",
        }
    }

    fn map_args(&self) -> &MapArgs {
        match self {
            Command::Dynatomic(a) => &a.map,
            Command::Multiplicity(a) => &a.map,
            Command::Cycle(a) => &a.map,
            Command::DeformCheck(a) => &a.map,
            Command::Verify(a) => &a.map,
        }
    }
}

pub fn parse_model(text: &str) -> Result<Model, String> {
    match text {
        "affine" => Ok(Model::Affine),
        "P1" => Ok(Model::P1),
        other => Err(format!("unknown model '{other}'; expected affine or P1")),
    }
}

pub fn load_map(args: &MapArgs) -> Result<MapSpec, String> {
    let field = args
        .field
        .as_deref()
        .ok_or("field descriptor required (--field Q, F<p> or F<p>^<k>)")?;
    let field = parse_field(field).map_err(|e| e.to_string())?;
    let model = parse_model(&args.model)?;
    parse_map(&args.map, &field, &args.vars, model).map_err(|e| format!("--map: {e}"))
}

/// Runs one invocation; `args` excludes the program name. Returns the
/// text for standard output and the exit code.
pub fn run(args: &[String]) -> (String, i32) {
    let argv = std::iter::once("dynatomic".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (e.to_string(), 0);
            }
            let name = args.first().cloned().unwrap_or_default();
            let mut doc = ResultDocument::new(&name, args);
            doc.fail(Status::Error, e.to_string().trim_end().to_string());
            return (doc.render(false), 1);
        }
    };
    let mut doc = ResultDocument::new(cli.command.name(), args);
    match load_map(cli.command.map_args()) {
        Ok(spec) => {
            doc.input = Some(InputEcho::new(&spec));
            let outcome = match &cli.command {
                Command::Dynatomic(a) => commands::dynatomic(&spec, a, &mut doc),
                Command::Multiplicity(a) => commands::multiplicity(&spec, a, &mut doc),
                Command::Cycle(a) => commands::cycle(&spec, a, &mut doc),
                Command::DeformCheck(a) => commands::deform_check(&spec, a, &mut doc),
                Command::Verify(a) => commands::verify(&spec, a, &mut doc),
            };
            if let Err(e) = outcome {
                doc.fail_with(&e);
            }
        }
        Err(message) => doc.fail(Status::Error, message),
    }
    (doc.render(cli.pretty), doc.status.exit_code())
}
