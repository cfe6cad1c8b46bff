use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use puzzlegram_core::telemetry::{
    compute_session_metrics, exposure_trend, read_log_file, SessionMetrics, DEFAULT_BOOTSTRAP_SEED,
};

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "puzzlegram-metrics", about = "Derive gameplay metrics from session logs")]
struct Args {
    /// Session event log (JSONL).
    #[arg(long, required_unless_present = "trend")]
    log: Option<PathBuf>,
    /// Glob of session logs to fit the exposure trend over.
    #[arg(long)]
    trend: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    out: Format,
    #[arg(long, default_value_t = DEFAULT_BOOTSTRAP_SEED)]
    bootstrap_seed: u64,
}

fn write_metrics_csv(metrics: &SessionMetrics, out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "session_id",
        "player_id",
        "level",
        "time_to_match_ms",
        "presses",
        "distinct_regions_touched",
    ])?;
    for m in &metrics.levels {
        w.write_record([
            metrics.session_id.clone(),
            m.player_id.to_string(),
            m.level.to_string(),
            m.time_to_match_ms.map(|t| t.to_string()).unwrap_or_default(),
            m.presses.to_string(),
            m.distinct_regions_touched.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args = Args::parse();
    let stdout = io::stdout().lock();

    if let Some(pattern) = &args.trend {
        let mut sessions = Vec::new();
        for path in glob::glob(pattern)? {
            sessions.push(compute_session_metrics(&read_log_file(path?)?));
        }
        let report = exposure_trend(&sessions, args.bootstrap_seed)?;
        match args.out {
            Format::Json => serde_json::to_writer_pretty(stdout, &report)?,
            Format::Csv => {
                let mut w = csv::Writer::from_writer(stdout);
                w.write_record(["level", "mean_presses"])?;
                for (i, m) in report.mean_presses.iter().enumerate() {
                    w.write_record([(i + 1).to_string(), format!("{m:.6}")])?;
                }
                w.flush()?;
                eprintln!(
                    "slope {:.4} (95% CI {:.4} .. {:.4}) over {} sessions",
                    report.slope, report.ci_low, report.ci_high, report.sessions
                );
            }
        }
        return Ok(());
    }

    let path = args.log.expect("clap enforces --log without --trend");
    let parsed = read_log_file(&path)?;
    if parsed.parse_errors > 0 {
        eprintln!("skipped {} malformed line(s)", parsed.parse_errors);
    }
    let metrics = compute_session_metrics(&parsed);
    match args.out {
        Format::Json => serde_json::to_writer_pretty(stdout, &metrics)?,
        Format::Csv => write_metrics_csv(&metrics, stdout)?,
    }
    Ok(())
}
