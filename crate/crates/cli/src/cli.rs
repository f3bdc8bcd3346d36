use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thauma_core::bounds::TargetState;

#[derive(Debug, Parser)]
#[command(name = "thaumakit", version, about = "Magic monotones and distillation bounds for qudit states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format; defaults to the extension of --out, else json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Named state from the built-in registry.
    #[arg(long, conflicts_with = "file")]
    pub state: Option<String>,

    /// HermitianOperator JSON file {"dim", "re", "im"}.
    #[arg(long)]
    pub file: Option<PathBuf>,

    /// Comma-separated local dimensions, e.g. 3,3.
    #[arg(long, value_delimiter = ',')]
    pub factors: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct XiArgs {
    /// Named output state.
    #[arg(long, conflicts_with = "xi_file")]
    pub xi: Option<String>,

    /// Output state as HermitianOperator JSON.
    #[arg(long)]
    pub xi_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TargetArg {
    /// Distillation target: Hplus or T.
    #[arg(long, default_value = "Hplus", value_parser = parse_target)]
    pub target: TargetState,
}

#[derive(Debug, Args)]
pub struct TolArg {
    /// Frank–Wolfe gap tolerance.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
}

fn parse_target(s: &str) -> Result<TargetState, String> {
    s.parse().map_err(|e: thauma_core::Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discrete Wigner function.
    Wigner {
        #[command(flatten)]
        state: StateArgs,
    },
    /// Sum-negativity mana.
    Mana {
        #[command(flatten)]
        state: StateArgs,
    },
    /// Min-thauma.
    ThetaMin {
        #[command(flatten)]
        state: StateArgs,
        /// Include primal and dual witnesses.
        #[arg(long)]
        witness: bool,
    },
    /// Max-thauma.
    ThetaMax {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        witness: bool,
    },
    /// Relative-entropy thauma by Frank–Wolfe.
    Theta {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        tol: TolArg,
        #[arg(long)]
        witness: bool,
    },
    /// Hypothesis-testing relative entropy D_H^ε(ρ‖σ).
    Dh {
        #[command(flatten)]
        state: StateArgs,
        /// Named σ.
        #[arg(long, conflicts_with = "sigma_file")]
        sigma: Option<String>,
        /// σ as HermitianOperator JSON.
        #[arg(long)]
        sigma_file: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long)]
        witness: bool,
    },
    /// min over W of D_H^ε(ρ‖σ).
    MinDh {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long)]
        witness: bool,
    },
    /// One-shot distillable magic bound.
    OneShot {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[command(flatten)]
        target: TargetArg,
    },
    /// Distillation overhead lower bound.
    Overhead {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[command(flatten)]
        target: TargetArg,
    },
    /// Asymptotic distillation rate bound.
    Asymptotic {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        target: TargetArg,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Second-order n-copy bound (up to O(log n)).
    SecondOrder {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        eps: f64,
        #[command(flatten)]
        target: TargetArg,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Efficiency lower bounds for ρ → ξ from mana and max-thauma.
    Efficiency {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        xi: XiArgs,
    },
    /// Upper bound on the asymptotic conversion rate ρ → ξ.
    Interconversion {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        xi: XiArgs,
    },
    /// Efficiency bounds along the noisy-H₊ family.
    Figure1 {
        #[arg(long, default_value_t = 0.1)]
        p2: f64,
        /// p1 grid as START:STEP:STOP.
        #[arg(long, default_value = "0:0.01:0.9")]
        grid: String,
    },
    /// Print a named state, the registry, or a stabilizer orbit.
    NamedState {
        name: Option<String>,
        /// List registered names.
        #[arg(long)]
        list: bool,
        /// Export all pure stabilizer states for --factors.
        #[arg(long)]
        stabilizers: bool,
        #[arg(long, value_delimiter = ',', default_value = "3")]
        factors: Vec<usize>,
    },
    /// Compare computed thaumas with their closed forms.
    VerifyProp2 {
        #[command(flatten)]
        tol: TolArg,
    },
    /// Largest overlap with a pure stabilizer state.
    StabFidelity {
        #[command(flatten)]
        state: StateArgs,
    },
}
