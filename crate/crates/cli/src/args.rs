//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "cpw",
    version,
    about = "Exact conformal partial waves, intertwiners and six-point positivity data"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the run manifest here instead of stderr.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// A previous JSON output: wave data for casimir-check/reduce, a g series
    /// for `exotic g`, otherwise the recorded parameters are replayed.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form chiral partial wave series.
    Wave(WaveArgs),
    /// Residuals of the invariant Casimir equations on a wave.
    CasimirCheck(CasimirArgs),
    /// Intertwining operators.
    #[command(subcommand)]
    Intertwiner(IntertwinerCommand),
    /// Fuse an end pair of a wave with E_h.
    Reduce(ReduceArgs),
    /// Six-point structures, g series, channel coefficients and positivity.
    #[command(subcommand)]
    Exotic(ExoticCommand),
}

#[derive(Args, Debug, Clone)]
pub struct WaveArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Field dimensions d1,...,dN.
    #[arg(long, allow_hyphen_values = true)]
    pub dims: Option<String>,
    /// Inner projection dimensions a2,...,a(N-2).
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    pub proj: String,
    #[arg(long)]
    pub cap: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct CasimirArgs {
    #[command(flatten)]
    pub wave: WaveArgs,
    /// Wave JSON as written by `wave` (same as --input).
    #[arg(long = "wave")]
    pub wave_file: Option<PathBuf>,
    /// Only this equation (1, 2 or 3); all applicable ones by default.
    #[arg(long)]
    pub which: Option<u8>,
}

#[derive(Subcommand, Debug)]
pub enum IntertwinerCommand {
    Chiral(ChiralArgs),
    Tensor(TensorArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    E,
    D,
}

#[derive(Args, Debug, Clone)]
pub struct ChiralArgs {
    #[arg(long)]
    pub h: u32,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub d1: String,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub d2: String,
    #[arg(long, value_enum, ignore_case = true, default_value_t = Kind::E)]
    pub kind: Kind,
}

#[derive(Args, Debug, Clone)]
pub struct TensorArgs {
    #[arg(long)]
    pub kappa: u32,
    #[arg(long = "L", alias = "l")]
    pub l: u32,
    /// With --d2: solve for the full operator space at these dimensions.
    #[arg(long, allow_hyphen_values = true, requires = "d2")]
    pub d1: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "d1")]
    pub d2: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct ReduceArgs {
    /// Wave JSON as written by `wave` (same as --input).
    #[arg(long)]
    pub wave: Option<PathBuf>,
    /// End pair to fuse: 1,2 or (n-1),n.
    #[arg(long, default_value = "1,2")]
    pub pair: String,
    #[arg(long)]
    pub h: u32,
}

#[derive(Subcommand, Debug)]
pub enum ExoticCommand {
    Build(BuildArgs),
    G(GArgs),
    Coeff(CoeffArgs),
    Amplitudes(AmplitudeArgs),
    Positivity(PositivityArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuildName {
    E6,
    B,
    #[value(name = "B-E/2", alias = "bmhe")]
    BMinusHalfE,
}

#[derive(Args, Debug, Clone)]
pub struct BuildArgs {
    #[arg(long, value_enum, ignore_case = true)]
    pub name: BuildName,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Recursion,
    Closed,
}

#[derive(Args, Debug, Clone)]
pub struct GArgs {
    #[arg(long, default_value_t = 8)]
    pub cap: u32,
    #[arg(long, value_enum, ignore_case = true, default_value_t = Method::Recursion)]
    pub method: Method,
    #[arg(long)]
    pub check_biharmonic: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Weight {
    B,
    H,
}

#[derive(Args, Debug, Clone)]
pub struct CoeffArgs {
    #[arg(long)]
    pub hplus: u32,
    #[arg(long)]
    pub hminus: u32,
    #[arg(long, value_enum, ignore_case = true)]
    pub structure: Weight,
}

#[derive(Args, Debug, Clone)]
pub struct AmplitudeArgs {
    #[arg(long)]
    pub h: u32,
    #[arg(long)]
    pub hprime: u32,
    #[arg(long, default_value_t = 6)]
    pub cap: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PosStructure {
    B,
    H,
    /// Twist-2 part of E.
    E,
}

#[derive(Args, Debug, Clone)]
pub struct PositivityArgs {
    #[arg(long, value_enum, ignore_case = true)]
    pub structure: PosStructure,
    #[arg(long, default_value_t = 3)]
    pub hmax: u32,
    #[arg(long, default_value_t = 1)]
    pub kmax: u32,
    /// Also write the report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
