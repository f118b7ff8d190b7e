//! biostego: enroll and verify fingerprints, then send or receive hidden
//! payloads over the LSB image channel or the playlist list channel.
//! Channel operations run only after the fingerprint verifies.
//!
//! Exit codes: 0 success/accepted, 1 verification rejected, 2 usage or
//! not-found, 3 data errors.

mod commands;
mod config_file;
mod errors;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use biostego_core::PipelineConfig;

#[derive(Parser)]
#[command(name = "biostego", version, about = "Biometric-gated steganography toolkit")]
struct Cli {
    /// Template store directory.
    #[arg(long, global = true, env = "BIOSTEGO_STORE", default_value = "store")]
    store: PathBuf,

    /// TOML file with pipeline settings; flags below override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(flatten)]
    overrides: Overrides,

    #[command(subcommand)]
    command: Command,
}

/// Per-knob overrides. Defaults: k 0.45, FFT block 32, binarize block 16,
/// direction block 16, normalized coherence threshold 0.05, ROI radius 16,
/// spur budget 4, border margin 10, minutiae floor 4, r0 10 px, theta0
/// pi/6, similarity gate 0.8, decision threshold 25.
#[derive(Args, Clone)]
struct Overrides {
    /// Spectral boost exponent k; stronger boosts repair gapped ridges
    /// but can bleed neighbors together.
    #[arg(long, global = true)]
    k: Option<f64>,
    /// FFT enhancement block edge, pixels.
    #[arg(long, global = true)]
    fft_block: Option<u32>,
    /// Adaptive binarization block edge, pixels.
    #[arg(long, global = true)]
    binarize_block: Option<u32>,
    /// Direction/certainty block edge W, pixels.
    #[arg(long, global = true)]
    direction_block: Option<u32>,
    /// Normalized foreground coherence threshold.
    #[arg(long, global = true)]
    e_threshold: Option<f64>,
    /// Structuring radius for ROI open/close, pixels.
    #[arg(long, global = true)]
    roi_radius: Option<u32>,
    /// Maximum pruned spur length, pixels.
    #[arg(long, global = true)]
    spur_iterations: Option<u32>,
    /// Minutiae closer than this to the border are dropped, pixels.
    #[arg(long, global = true)]
    border_margin: Option<u32>,
    /// Enrollment floor on minutiae count.
    #[arg(long, global = true)]
    min_minutiae: Option<usize>,
    /// Elastic matcher positional tolerance, pixels.
    #[arg(long, global = true)]
    r0: Option<f64>,
    /// Elastic matcher angular tolerance, radians.
    #[arg(long, global = true)]
    theta0: Option<f64>,
    /// Ridge correlation gate for reference pairs.
    #[arg(long, global = true)]
    similarity_threshold: Option<f64>,
    /// Accept scores at or above this value (0-100).
    #[arg(long, global = true)]
    decision_threshold: Option<u32>,
}

impl Overrides {
    fn apply(&self, cfg: &mut PipelineConfig) {
        macro_rules! set {
            ($($flag:ident => $field:ident),*) => {
                $(if let Some(v) = self.$flag { cfg.$field = v; })*
            };
        }
        set!(
            k => fft_k,
            fft_block => fft_block,
            binarize_block => binarize_block,
            direction_block => direction_block,
            e_threshold => e_threshold,
            roi_radius => roi_radius,
            spur_iterations => spur_iterations,
            border_margin => border_margin,
            min_minutiae => min_minutiae,
            r0 => r0,
            theta0 => theta0,
            similarity_threshold => similarity_threshold,
            decision_threshold => decision_threshold
        );
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Channel {
    /// Least-significant-bit embedding in a lossless cover image.
    Lsb,
    /// Playlist list-cover built from a song bank.
    List,
}

#[derive(Subcommand)]
enum Command {
    /// Extract a minutiae template from a fingerprint and store it.
    Enroll {
        #[arg(long)]
        user: String,
        #[arg(long)]
        fingerprint: PathBuf,
        /// Replace an existing template.
        #[arg(long)]
        overwrite: bool,
    },
    /// Match a fingerprint against a stored template.
    Verify {
        #[arg(long)]
        user: String,
        #[arg(long)]
        fingerprint: PathBuf,
    },
    /// Verify, then hide a payload in the chosen channel.
    Send {
        #[arg(long)]
        user: String,
        #[arg(long)]
        fingerprint: PathBuf,
        #[arg(long, value_enum)]
        channel: Channel,
        /// File whose bytes are hidden.
        #[arg(long)]
        payload: PathBuf,
        /// Cover image (lsb channel).
        #[arg(long)]
        cover: Option<PathBuf>,
        /// Song bank file (list channel).
        #[arg(long)]
        bank: Option<PathBuf>,
        /// Seed for list-cover title selection.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify, then recover a payload from the chosen channel.
    Receive {
        #[arg(long)]
        user: String,
        #[arg(long)]
        fingerprint: PathBuf,
        #[arg(long, value_enum)]
        channel: Channel,
        /// Stego image (lsb) or list cover (list).
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Dump every pipeline intermediate for a fingerprint.
    Analyze {
        #[arg(long)]
        fingerprint: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let mut config = match config_file::load(cli.config.as_deref()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    cli.overrides.apply(&mut config);
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }

    let result = match cli.command {
        Command::Enroll { user, fingerprint, overwrite } => {
            commands::enroll(&cli.store, &user, &fingerprint, overwrite, &config)
        }
        Command::Verify { user, fingerprint } => {
            commands::verify(&cli.store, &user, &fingerprint, &config)
        }
        Command::Send { user, fingerprint, channel, payload, cover, bank, seed, out } => {
            commands::send(commands::SendArgs {
                store: &cli.store,
                user: &user,
                fingerprint: &fingerprint,
                channel,
                payload: &payload,
                cover: cover.as_deref(),
                bank: bank.as_deref(),
                seed,
                out: &out,
                config: &config,
            })
        }
        Command::Receive { user, fingerprint, channel, input, out } => {
            commands::receive(&cli.store, &user, &fingerprint, channel, &input, &out, &config)
        }
        Command::Analyze { fingerprint, out_dir } => {
            commands::analyze(&fingerprint, &out_dir, &config)
        }
    };

    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
