use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use super::event::EventRecord;

/// Append-only JSONL writer. Every record is written as one line and flushed
/// before `record` returns, so a killed process can only leave a truncated tail.
#[derive(Debug)]
pub struct EventLog<W: Write> {
    out: W,
    written: u64,
}

impl EventLog<File> {
    pub fn open(path: impl AsRef<Path>) -> io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Self::new(file))
    }
}

impl<W: Write> EventLog<W> {
    pub fn new(out: W) -> Self {
        Self { out, written: 0 }
    }

    pub fn record(&mut self, event: &EventRecord) -> io::Result<()> {
        let mut line = serde_json::to_vec(event)?;
        line.push(b'\n');
        self.out.write_all(&line)?;
        self.out.flush()?;
        self.written += 1;
        Ok(())
    }

    pub fn written(&self) -> u64 {
        self.written
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedLog {
    pub events: Vec<EventRecord>,
    /// Lines that were not valid event records and were skipped.
    pub parse_errors: usize,
}

pub fn read_log(reader: impl BufRead) -> io::Result<ParsedLog> {
    let mut parsed = ParsedLog::default();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(&line) {
            Ok(event) => parsed.events.push(event),
            Err(err) => {
                log::debug!("skipping malformed event line: {err}");
                parsed.parse_errors += 1;
            }
        }
    }
    Ok(parsed)
}

pub fn read_log_file(path: impl AsRef<Path>) -> io::Result<ParsedLog> {
    read_log(BufReader::new(File::open(path)?))
}
