use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use puzzlegram_audio::{build_manifest, synth, validate_manifest_file, MANIFEST_FILE};

#[derive(Parser)]
#[command(name = "puzzlegram-audio", about = "Prepare song segments for Puzzlegram")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split four layer stems into 16 segments each and write the manifest.
    Split {
        #[arg(long)]
        stems: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check a manifest and the segment files it references.
    Validate {
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Render the synthesized test song stems.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = synth::DEFAULT_SAMPLE_RATE)]
        sample_rate: u32,
        #[arg(long, default_value_t = synth::DEFAULT_SECONDS)]
        seconds: u32,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Split { stems, out, seed } => {
            let manifest = build_manifest(&stems, seed, &out)?;
            println!(
                "wrote {} layers × {} segments to {}",
                manifest.layers.len(),
                manifest.segment_frames.len(),
                out.join(MANIFEST_FILE).display()
            );
        }
        Command::Validate { manifest } => {
            let report = validate_manifest_file(&manifest)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if !report.is_valid() {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Synth {
            out,
            sample_rate,
            seconds,
        } => {
            synth::write_test_song(&out, sample_rate, seconds)?;
            println!("wrote test stems to {}", out.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}
