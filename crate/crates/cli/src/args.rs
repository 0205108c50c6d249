//! Command-line grammar.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "zeroclass",
    version,
    about = "Admissibility, zero-class admissibility and Carleson analysis for diagonal observation systems",
    after_help = "Grids are given as min,max,points_per_decade. Set THREADS to cap worker threads."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Profile the admissibility constant K_eta as eta -> 0.
    Analyze(AnalyzeArgs),
    /// Profile the resolvent constant m(r) as r -> infinity.
    Weiss(WeissArgs),
    /// Profile the windowed output constant K_tau as tau -> 0.
    B2(B2Args),
    /// Box ratios and classification of a measure in the right half-plane.
    Carleson(CarlesonArgs),
    /// Evaluate sufficient conditions for zero-class admissibility.
    #[command(subcommand)]
    Sufficient(SufficientCommand),
    /// Build the blow-up counterexample and its profiles.
    Counterexample(CounterexampleArgs),
    /// Write a builtin reference system to system.json.
    Builtin(BuiltinArgs),
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Directory receiving report.json and the CSV files.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// System description (JSON).
    pub system: PathBuf,
    /// Strictly decreasing horizons spanning at least two decades.
    #[arg(long, value_delimiter = ',', default_value = "1,0.1,0.01,0.001")]
    pub etas: Vec<f64>,
    /// Decay ratio below which a profile counts as tending to zero.
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct WeissArgs {
    pub system: PathBuf,
    /// r grid; defaults to a range matched to the system's spectral scale.
    #[arg(long)]
    pub r_grid: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct B2Args {
    pub system: PathBuf,
    /// tau grid; defaults to a range matched to the system's spectral scale.
    #[arg(long)]
    pub tau_grid: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["measure", "system"])))]
pub struct CarlesonArgs {
    /// Measure file {"atoms": [{"re", "im", "mass"}, ...]}.
    #[arg(long)]
    pub measure: Option<PathBuf>,
    /// System file; its spectral measure is analysed.
    #[arg(long)]
    pub system: Option<PathBuf>,
    /// Evaluate h(r) at these sides only, without classification.
    #[arg(long, value_delimiter = ',')]
    pub r: Vec<f64>,
    /// Sides for the large-box trend.
    #[arg(long, default_value = "1,1e3,8")]
    pub r_grid: String,
    /// Sides for the small-box scan.
    #[arg(long, default_value = "1e-4,1e-1,8")]
    pub small_grid: String,
    /// Size of the exhausting compact and the vanishing threshold.
    #[arg(long, default_value_t = 1e-2)]
    pub epsilon: f64,
    /// Ratios above this count as unbounded.
    #[arg(long, default_value_t = 1e6)]
    pub cap: f64,
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Subcommand)]
pub enum SufficientCommand {
    /// Summability of g(base^n)^-2 for g(t) = (ln(2+t))^p, optionally with a resolvent bound check.
    Zwart(ZwartArgs),
    /// Bound on K_eta for C = S(-A)^alpha with an analytic semigroup.
    Analytic(AnalyticArgs),
    /// Bound on K_eta for spectra in {v + iw : |w| <= a + b v^beta}.
    Sector(SectorArgs),
}

#[derive(Debug, Args)]
pub struct ZwartArgs {
    /// Exponent p of g(t) = (ln(2+t))^p.
    #[arg(long, default_value_t = 1.0)]
    pub log_power: f64,
    #[arg(long, default_value_t = 2.0)]
    pub base: f64,
    #[arg(long, default_value_t = 1000)]
    pub n_max: usize,
    /// Largest admissible extrapolated tail relative to the partial sum.
    #[arg(long, default_value_t = 0.1)]
    pub tail_tolerance: f64,
    /// System whose resolvent is checked against m / (g(Re s) sqrt(Re s)).
    #[arg(long, requires = "m")]
    pub system: Option<PathBuf>,
    #[arg(long, requires = "system")]
    pub m: Option<f64>,
    /// Re s grid for the bound check.
    #[arg(long, default_value = "1e-2,1e4,8")]
    pub r_grid: String,
    /// Im s values for the bound check.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0",
        allow_hyphen_values = true
    )]
    pub omegas: Vec<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    /// Norm of the bounded factor S.
    #[arg(long, default_value_t = 1.0)]
    pub s_norm: f64,
    /// Constant M in ||(-A)^alpha T(t)|| <= M t^-alpha.
    #[arg(long)]
    pub m: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, value_delimiter = ',', default_value = "1,0.1,0.01,0.001")]
    pub etas: Vec<f64>,
    /// System whose measured K_eta is compared with the bound.
    #[arg(long)]
    pub system: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SectorArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub alpha: f64,
    /// Constant c2 of the growth estimate.
    #[arg(long, default_value_t = 1.0)]
    pub c2: f64,
    #[arg(long, value_delimiter = ',', default_value = "1,0.1,0.01,0.001")]
    pub etas: Vec<f64>,
    /// System whose spectrum is tested for membership in the region.
    #[arg(long)]
    pub system: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    /// Exponent of the singular target |t|^-beta, in (1/4, 1/2).
    #[arg(long, default_value_t = 0.4)]
    pub beta: f64,
    /// Exponent of the modified resolvent condition, in (0, 1/2).
    #[arg(long, default_value_t = 0.25)]
    pub alpha: f64,
    /// Number of blocks N = 1..=max_n.
    #[arg(long, default_value_t = 10)]
    pub max_n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub r_min: f64,
    #[arg(long, default_value_t = 1e8)]
    pub r_max: f64,
    #[arg(long, default_value_t = 8)]
    pub per_decade: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BuiltinKind {
    Heat,
    Wave,
}

#[derive(Debug, Args)]
pub struct BuiltinArgs {
    pub kind: BuiltinKind,
    #[arg(long)]
    pub modes: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn grammar_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn scientific_notation_in_lists() {
        let cli = Cli::try_parse_from(["zeroclass", "analyze", "s.json", "--etas", "1,1e-1,1e-2"])
            .unwrap();
        match cli.command {
            Command::Analyze(a) => assert_eq!(a.etas, vec![1.0, 0.1, 0.01]),
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn carleson_needs_an_input() {
        assert!(Cli::try_parse_from(["zeroclass", "carleson", "--r", "2.5"]).is_err());
    }
}
