//! `gshift`: command-line access to the gshift library.
//!
//! Exit status is 0 on success, 1 when a check was carried out and failed,
//! and 2 on any error.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "gshift", version, about = "Sofic shifts, property (D), g-functions and g-measures")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args)]
pub struct ShiftInput {
    /// Presentation file (`src symbol dst` lines).
    pub presentation: PathBuf,
    /// Read the input as a forbidden-word file instead.
    #[arg(long)]
    pub forbidden: bool,
}

#[derive(Args)]
pub struct GInput {
    #[command(flatten)]
    pub shift: ShiftInput,
    /// Weight file (`state symbol p/q` lines).
    #[arg(long)]
    pub weights: PathBuf,
}

#[derive(Args)]
pub struct Resolution {
    #[arg(long, default_value_t = gshift::measure_graph::DEFAULT_K)]
    pub k: usize,
    /// `p/q`.
    #[arg(long, default_value = "1/1024")]
    pub eps: String,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Mode {
    Omega,
    OmegaInfinity,
}

#[derive(Subcommand)]
enum Command {
    /// Admissible words of a given length.
    Lang {
        #[command(flatten)]
        input: ShiftInput,
        #[arg(long)]
        length: usize,
    },
    /// Extensions of an admissible word.
    Gamma {
        #[command(flatten)]
        input: ShiftInput,
        word: String,
        #[arg(long)]
        length: usize,
        /// Left extensions instead of right ones.
        #[arg(long)]
        backward: bool,
    },
    /// Futures forced after every past of a word.
    Omega {
        #[command(flatten)]
        input: ShiftInput,
        word: String,
        #[arg(long)]
        length: usize,
    },
    /// Forced futures of the eventually periodic past `…cycle cycle tail`.
    OmegaPast {
        #[command(flatten)]
        input: ShiftInput,
        #[arg(long)]
        cycle: String,
        #[arg(long, default_value = "")]
        tail: String,
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value_t = Mode::OmegaInfinity)]
        mode: Mode,
    },
    /// Decide property (D) and list certificates.
    CheckD {
        #[command(flatten)]
        input: ShiftInput,
    },
    /// The presenting graph of the synchronized futures.
    BuildGd {
        #[command(flatten)]
        input: ShiftInput,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Stationary g-measure table.
    Gmeasure {
        #[command(flatten)]
        input: GInput,
        #[arg(long)]
        depth: usize,
    },
    /// Check a measure table against g.
    VerifyGmeasure {
        #[command(flatten)]
        input: GInput,
        /// JSON table as written by `gmeasure --format json`.
        #[arg(long)]
        table: PathBuf,
        /// Defaults to one less than the table depth.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// A reproducible trajectory of the weighted graph.
    Sample {
        #[command(flatten)]
        input: GInput,
        /// Start state; defaults to the first state.
        #[arg(long)]
        start: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        length: usize,
    },
    /// Check conditions (I), (II), (III) for a measure vertex set.
    MgraphCheck {
        #[command(flatten)]
        input: GInput,
        /// Vertex file (`name state:p/q,…` lines).
        #[arg(long)]
        vertices: PathBuf,
        #[command(flatten)]
        resolution: Resolution,
    },
    /// The g-function of a residually contractive vertex set.
    GFromM {
        #[command(flatten)]
        input: GInput,
        #[arg(long)]
        vertices: PathBuf,
        #[command(flatten)]
        resolution: Resolution,
    },
    /// The vertex set of future laws of g.
    MFromG {
        #[command(flatten)]
        input: GInput,
    },
    /// Carry g (and optionally a measure table) across a bipartite coding.
    Transport {
        #[command(flatten)]
        input: GInput,
        /// Coding file (`psi:` and `psitilde:` lines).
        #[arg(long, conflicts_with_all = ["doubling", "higher_block"])]
        coding: Option<PathBuf>,
        #[arg(long, conflicts_with = "higher_block")]
        doubling: bool,
        #[arg(long)]
        higher_block: bool,
        #[arg(long)]
        table: Option<PathBuf>,
        /// Depth of the range-invariant future tables.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Normalize weights along a filtration, or recover weights from a chain.
    Eta {
        /// JSON filtration model with `weights` and/or `chain`.
        model: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Lang { input, length } => commands::lang(&input, length),
        Command::Gamma {
            input,
            word,
            length,
            backward,
        } => commands::gamma(&input, &word, length, backward),
        Command::Omega { input, word, length } => commands::omega(&input, &word, length),
        Command::OmegaPast {
            input,
            cycle,
            tail,
            length,
            mode,
        } => commands::omega_past(&input, &cycle, &tail, length, mode),
        Command::CheckD { input } => commands::check_d(&input),
        Command::BuildGd { input, depth } => commands::build_gd(&input, depth),
        Command::Gmeasure { input, depth } => commands::gmeasure(&input, depth),
        Command::VerifyGmeasure { input, table, depth } => commands::verify_gmeasure(&input, &table, depth),
        Command::Sample {
            input,
            start,
            seed,
            length,
        } => commands::sample(&input, start.as_deref(), seed, length),
        Command::MgraphCheck {
            input,
            vertices,
            resolution,
        } => commands::mgraph_check(&input, &vertices, &resolution),
        Command::GFromM {
            input,
            vertices,
            resolution,
        } => commands::g_from_m(&input, &vertices, &resolution),
        Command::MFromG { input } => commands::m_from_g(&input),
        Command::Transport {
            input,
            coding,
            doubling,
            higher_block,
            table,
            depth,
        } => {
            let how = match (coding, doubling, higher_block) {
                (Some(path), _, _) => commands::CodingSource::File(path),
                (None, true, _) => commands::CodingSource::Doubling,
                (None, false, true) => commands::CodingSource::HigherBlock,
                (None, false, false) => commands::CodingSource::Doubling,
            };
            commands::transport(&input, how, table.as_deref(), depth)
        }
        Command::Eta { model } => commands::eta(&model),
    };
    match result {
        Ok(report) => {
            let out = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report.json).expect("plain data") + "\n",
                Format::Text => report.text,
            };
            // A closed pipe downstream is not an error of ours.
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}: {e}", e.kind());
            ExitCode::from(2)
        }
    }
}
