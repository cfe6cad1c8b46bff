use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::Parser;
use puzzlegram_sim::{report, run_simulation, write_logs, BotKind};

#[derive(Parser)]
#[command(name = "puzzlegram-sim", about = "Play Puzzlegram games with scripted bots")]
struct Args {
    /// Three comma-separated strategies: random, memory, noisy or noisy:<p>.
    #[arg(long, default_value = "memory,memory,memory")]
    bots: String,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Report path; a `.csv` extension writes per-level rows instead of JSON.
    #[arg(long, default_value = "report.json")]
    out: PathBuf,
    /// Also write one JSONL event log per trial here.
    #[arg(long)]
    logs_dir: Option<PathBuf>,
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args = Args::parse();
    let kinds: Vec<BotKind> = args
        .bots
        .split(',')
        .map(str::parse)
        .collect::<Result<_, _>>()?;
    let kinds: [BotKind; 3] = kinds
        .try_into()
        .map_err(|k: Vec<BotKind>| format!("expected 3 bots, got {}", k.len()))?;

    let logs = run_simulation(&kinds, args.trials, args.seed)?;
    if let Some(dir) = &args.logs_dir {
        write_logs(&logs, dir)?;
    }
    let summary = report(&logs)?;
    let out = BufWriter::new(File::create(&args.out)?);
    if args.out.extension().is_some_and(|e| e == "csv") {
        summary.write_csv(out)?;
    } else {
        summary.write_json(out)?;
    }
    for s in &summary.strategies {
        let first = s.mean_presses[..4].iter().sum::<f64>() / 4.0;
        let last = s.mean_presses[12..].iter().sum::<f64>() / 4.0;
        eprintln!(
            "{:<12} levels 1-4 {first:.2} presses, levels 13-16 {last:.2} presses",
            s.strategy
        );
    }
    eprintln!(
        "{} trials, completion rate {:.3}, report at {}",
        summary.trials,
        summary.completion_rate,
        args.out.display()
    );
    Ok(())
}
