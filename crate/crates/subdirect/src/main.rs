//! `subdirect`: reproducible JSON reports for uniform-automorphism and
//! strip-factorisation analyses. The binary is a thin shell over the library;
//! see the crate examples for the full API surface.
//!
//! Exit codes: 0 = analysis completed (regardless of mathematical outcome),
//! 2 = invalid input, 3 = cap or budget exceeded.

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use subdirect::error::Error;
use subdirect::factorisation::SearchMode;
use subdirect::group::GroupSpec;
use subdirect::report::{
    cmd_diag_build, cmd_diag_embed, cmd_diag_no_embed, cmd_diag_verify_witness, cmd_g6,
    cmd_stripfact, cmd_uniform, default_caps, parse_strips,
};
use subdirect::WitnessFile;

#[derive(Parser)]
#[command(name = "subdirect")]
#[command(about = "Strip factorisations of direct powers, uniform automorphisms, and diagonal-type actions")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Enumerate Aut(G) and report the uniform (fixed-point-free) members
    Uniform {
        /// Group spec `kind:param[,param]`, e.g. `cyclic:9`; prefix a path
        /// with `@` to load the JSON form
        #[arg(long)]
        group: String,

        /// Group order cap
        #[arg(long, default_value_t = default_caps().0)]
        cap: usize,
    },

    /// Search for factorisations T^k = XY over strip-product pairs
    Stripfact {
        /// Group spec for the base group T
        #[arg(long)]
        group: String,

        /// Number of direct factors (k >= 2)
        #[arg(long)]
        k: usize,

        /// `exhaustive` or `sampled`
        #[arg(long, default_value = "exhaustive")]
        mode: String,

        /// Sample size in sampled mode
        #[arg(long, default_value_t = 10_000)]
        n: u64,

        /// PRNG seed for sampled mode (xoshiro256++)
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Cap on per-pair verdict evaluations
        #[arg(long, default_value_t = default_caps().2)]
        budget: u128,

        /// Group order cap
        #[arg(long, default_value_t = default_caps().0)]
        cap: usize,
    },

    /// Joint-uniformity analysis in G^6 (two long strips against three short)
    G6 {
        /// Group spec for G
        #[arg(long)]
        group: String,

        /// Cap on automorphism pairs
        #[arg(long, default_value_t = default_caps().2)]
        budget: u128,

        /// Group order cap
        #[arg(long, default_value_t = default_caps().0)]
        cap: usize,
    },

    /// Diagonal-type coset actions and product-action embeddings
    Diag {
        #[command(subcommand)]
        command: DiagCommands,
    },
}

#[derive(Subcommand)]
enum DiagCommands {
    /// Build the coset action and run the structural checks
    Build {
        #[arg(long)]
        base: String,
        #[arg(long)]
        k: usize,
        /// Strips as 1-based coordinate groups, e.g. `12,34` or `123`
        #[arg(long)]
        strips: String,
        #[arg(long, default_value_t = default_caps().1)]
        cap: u128,
    },

    /// Construct and verify the product-action embedding (compound type)
    Embed {
        #[arg(long)]
        base: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        strips: String,
        #[arg(long, default_value_t = default_caps().1)]
        cap: u128,
        /// Seed for sampled equivariance verification on large actions
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where to write the witness file
        #[arg(long, default_value = "witness.json")]
        out: String,
    },

    /// Enumerate invariant cartesian factorisations above the stabiliser
    /// (empty for simple type)
    NoEmbedCheck {
        #[arg(long)]
        base: String,
        #[arg(long)]
        k: usize,
        /// Defaults to the single full-support strip
        #[arg(long)]
        strips: Option<String>,
        #[arg(long, default_value_t = default_caps().1)]
        cap: u128,
    },

    /// Re-verify a witness file produced by `diag embed`
    VerifyWitness {
        #[arg(long)]
        witness: String,
        #[arg(long, default_value_t = default_caps().1)]
        cap: u128,
    },
}

fn parse_group(arg: &str) -> Result<GroupSpec, Error> {
    if let Some(path) = arg.strip_prefix('@') {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read group file {path}: {e}")))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidInput(format!("bad group JSON in {path}: {e}")))
    } else {
        arg.parse()
    }
}

fn run() -> Result<String, Error> {
    let cli = Cli::parse();
    let (order_cap, _point_cap, _budget) = default_caps();
    match cli.command {
        Commands::Uniform { group, cap } => {
            let spec = parse_group(&group)?;
            Ok(cmd_uniform(&spec, cap)?.to_json())
        }
        Commands::Stripfact {
            group,
            k,
            mode,
            n,
            seed,
            budget,
            cap,
        } => {
            let spec = parse_group(&group)?;
            let mode = match mode.as_str() {
                "exhaustive" => SearchMode::Exhaustive,
                "sampled" => SearchMode::Sampled { n, seed },
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown mode `{other}`; use exhaustive or sampled"
                    )))
                }
            };
            Ok(cmd_stripfact(&spec, k, mode, cap, budget)?.to_json())
        }
        Commands::G6 { group, budget, cap } => {
            let spec = parse_group(&group)?;
            Ok(cmd_g6(&spec, cap, budget)?.to_json())
        }
        Commands::Diag { command } => match command {
            DiagCommands::Build {
                base,
                k,
                strips,
                cap,
            } => {
                let spec = parse_group(&base)?;
                let supports = parse_strips(&strips, k)?;
                Ok(cmd_diag_build(&spec, k, &supports, order_cap, cap)?.to_json())
            }
            DiagCommands::Embed {
                base,
                k,
                strips,
                cap,
                seed,
                out,
            } => {
                let spec = parse_group(&base)?;
                let supports = parse_strips(&strips, k)?;
                let output =
                    cmd_diag_embed(&spec, k, &supports, order_cap, cap, seed, Some(out.clone()))?;
                let text = serde_json::to_string_pretty(&output.witness)
                    .expect("witness files serialize");
                fs::write(&out, text).map_err(|e| {
                    Error::InvalidInput(format!("cannot write witness to {out}: {e}"))
                })?;
                Ok(output.report.to_json())
            }
            DiagCommands::NoEmbedCheck {
                base,
                k,
                strips,
                cap,
            } => {
                let spec = parse_group(&base)?;
                let supports = match strips {
                    Some(s) => parse_strips(&s, k)?,
                    None => vec![(0..k).collect()],
                };
                Ok(cmd_diag_no_embed(&spec, k, &supports, order_cap, cap)?.to_json())
            }
            DiagCommands::VerifyWitness { witness, cap } => {
                let text = fs::read_to_string(&witness).map_err(|e| {
                    Error::InvalidInput(format!("cannot read witness {witness}: {e}"))
                })?;
                let file: WitnessFile = serde_json::from_str(&text)
                    .map_err(|e| Error::InvalidInput(format!("bad witness JSON: {e}")))?;
                Ok(cmd_diag_verify_witness(&file, cap)?.to_json())
            }
        },
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(json) => {
            println!("{json}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
