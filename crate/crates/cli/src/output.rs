use std::io::Write;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use clap::ValueEnum;
use cstore::gf2::RankProgress;
use serde::Serialize;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

const PROGRESS_EVERY: Duration = Duration::from_secs(2);

/// Rate-limited pivot counter on stderr.
pub(crate) struct Progress {
    label: String,
    last: Mutex<Instant>,
}

impl Progress {
    pub(crate) fn new(label: impl Into<String>) -> Self {
        Progress {
            label: label.into(),
            last: Mutex::new(Instant::now()),
        }
    }

    pub(crate) fn tick(&self, p: RankProgress) {
        let mut last = self.last.lock().unwrap();
        if last.elapsed() >= PROGRESS_EVERY {
            *last = Instant::now();
            eprintln!(
                "[{}] {} pivots, column {}/{} ({} rows)",
                self.label, p.pivots, p.column, p.cols, p.rows
            );
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure::Input(format!("writing output: {e}"))
}

pub(crate) fn json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<(), Failure> {
    let s = serde_json::to_string_pretty(value).map_err(|e| Failure::Input(e.to_string()))?;
    writeln!(out, "{s}").map_err(io)
}

pub(crate) fn text(s: &str, out: &mut dyn Write) -> Result<(), Failure> {
    out.write_all(s.as_bytes()).map_err(io)
}

pub(crate) fn csv<T: Serialize>(rows: &[T], out: &mut dyn Write) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Failure::Input(e.to_string()))?;
    }
    w.flush().map_err(io)
}
