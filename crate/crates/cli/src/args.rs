use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "supermaps",
    version,
    about = "Quantum channels and superchannels"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Tolerance for Hermiticity, positivity and validity checks.
    #[arg(long, global = true, default_value_t = supermaps::DEFAULT_TOL)]
    pub tol: f64,

    /// Relative threshold for numeric ranks.
    #[arg(long = "rank-rtol", global = true, default_value_t = supermaps::DEFAULT_RANK_RTOL)]
    pub rank_rtol: f64,

    /// Seed for the generators.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output path (documents) or prefix (realize). Defaults to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetKind {
    Choi,
    Kraus,
    Stinespring,
    Liouville,
    Superchannel,
    Gour,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a channel (CP, TP) or superchannel (CP, TP, no-signalling).
    Validate { file: PathBuf },

    /// Convert between representations.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: TargetKind,
    },

    /// Apply a superchannel to a channel, or a channel to a state.
    Apply { map: PathBuf, input: PathBuf },

    /// Choi operator of f2 after f1.
    Compose { f1: PathBuf, f2: PathBuf },

    /// Choi to Gour operator, or back with --inverse.
    Gour {
        file: PathBuf,
        #[arg(long)]
        inverse: bool,
    },

    /// Sequential realization; writes <out>.V.json and <out>.W.json.
    Realize { file: PathBuf },

    /// Minimal memory dimension of a superchannel.
    MemoryCost { file: PathBuf },

    /// Entanglement-breaking report for a channel or superchannel.
    Breaking { file: PathBuf },

    /// Generate documents.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Random channel in Kraus form.
    Channel {
        #[arg(long, default_value_t = 2)]
        d_in: usize,
        #[arg(long, default_value_t = 2)]
        d_out: usize,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// Random superchannel from random parts.
    Superchannel {
        /// Dimensions of A1,A2,B1,B2.
        #[arg(long, value_delimiter = ',', default_values_t = [2, 2, 2, 2])]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        memory: usize,
    },
    /// Random superchannel separable across A1A2|B1B2.
    EbSuperchannel {
        #[arg(long, value_delimiter = ',', default_values_t = [2, 2, 2, 2])]
        dims: Vec<usize>,
        /// Outcomes per measurement stage.
        #[arg(long, default_value_t = 2)]
        terms: usize,
    },
    /// Superchannel that is type-I but not type-II entanglement breaking.
    Type1Example {
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Depolarizing channel (1-p) Gamma + (p/d) 1.
    Depolarizing {
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_split_on_commas() {
        let cli =
            Cli::try_parse_from(["supermaps", "gen", "superchannel", "--dims", "1,2,3,4"]).unwrap();
        match cli.command {
            Command::Gen(GenCommand::Superchannel { dims, memory }) => {
                assert_eq!(dims, [1, 2, 3, 4]);
                assert_eq!(memory, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn global_flags_follow_subcommands() {
        let cli = Cli::try_parse_from([
            "supermaps",
            "validate",
            "x.json",
            "--format",
            "json",
            "--tol",
            "1e-6",
        ])
        .unwrap();
        assert_eq!(cli.global.format, Format::Json);
        assert_eq!(cli.global.tol, 1e-6);
    }

    #[test]
    fn unknown_target_is_rejected() {
        assert!(Cli::try_parse_from(["supermaps", "convert", "x.json", "--to", "ptm"]).is_err());
    }
}
