use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod json;
mod presets;

#[derive(Debug, Parser)]
#[command(name = "lagtor", version, about = "Classify Lagrangian product tori and certify isotopies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub input: Inputs,
}

/// Inline values parse as rationals over the basis {1}; with `--json` they are read as
/// constants over the document's basis and override the document's fields.
#[derive(Debug, Default, clap::Args)]
pub struct Inputs {
    /// Input document (`"format": "lagtor/1"`)
    #[arg(long, global = true, value_name = "FILE")]
    pub json: Option<PathBuf>,

    /// Write the result here instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Area vector, e.g. 1,3,5 or 1/2,3
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<String>,

    /// Second area vector
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub e: Option<String>,

    /// Chart capacity of `a`, or the ball size for `obstruct`
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b: Option<String>,

    /// Chart capacity of `e`
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub be: Option<String>,

    /// Lower bound of the shifted entries (`shift`)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c: Option<String>,

    /// Start vector (`path`, `oracle`, `shift`)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub d: Option<String>,

    /// Perturbation added to `a` (`energy`)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub s: Option<String>,

    /// Ambient manifold, e.g. aspherical, s2xs2:3,4, cp2:1
    #[arg(long, global = true)]
    pub preset: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = SettingArg::LiouvilleTame)]
    pub setting: SettingArg,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// State cap of the breadth-first oracle
    #[arg(long, global = true, default_value_t = lagtor::oracle::DEFAULT_NODE_CAP)]
    pub node_cap: usize,
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SettingArg {
    #[default]
    LiouvilleTame,
    AsphericalTameWithCapacity,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ua, m, |a|, ‖a‖ and Γ of `a`
    Invariants,
    /// Whether `a` and `e` have the same invariants
    Equiv,
    /// Displacement energy of `a` (capacity `b`), optionally perturbed by `s`
    Energy,
    /// Lift `a` to the Clifford torus vector in CP^n(b)
    Clifford,
    /// Can `a` be moved to `e` inside the ball of size `b`
    Obstruct,
    /// Classification verdict under `--setting`
    Classify,
    /// Low admissible path from `d` to `e`
    Path,
    /// Isotopy certificate from `a` to `e`
    Certificate,
    /// Re-validate a serialized path or certificate
    Check {
        /// The document to check; `--json` works as well
        file: Option<PathBuf>,
    },
    /// Shift equivalence of (c,..,c,c+d) and (c,..,c,c+e) in the ambient `--preset`
    Shift,
    /// Breadth-first search for a low path between integer vectors `d` and `e`
    Oracle,
    /// Run the numeric checks with `--seed`
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = commands::run(&cli);
    if let Some(msg) = &out.message {
        eprintln!("lagtor: {}", msg);
    }
    let mut text = serde_json::to_string_pretty(&out.value).expect("serializable output");
    text.push('\n');
    match &cli.input.out {
        Some(path) if !out.is_error => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("lagtor: cannot write {}: {}", path.display(), e);
                return ExitCode::from(1);
            }
        }
        _ => print!("{}", text),
    }
    ExitCode::from(out.code)
}
