//! Trace events and sinks. The JSONL format is one header comment line
//! followed by one JSON object per event.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use square4_core::{ConfigClass, Point};

pub const TRACE_HEADER: &str = "# square4-trace v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Look,
    Compute,
    MoveStart,
    MoveStep,
    MoveEnd,
    ClassChange,
    SquareFormed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub seq: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub robot: Option<usize>,
    pub kind: EventKind,
    pub pos: [[f64; 2]; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dest: Option<[f64; 2]>,
}

fn xy(p: Point) -> [f64; 2] {
    [p.x, p.y]
}

impl TraceEvent {
    pub fn new(
        seq: u64,
        robot: Option<usize>,
        kind: EventKind,
        pos: &[Point; 4],
        class: Option<ConfigClass>,
        dest: Option<Point>,
    ) -> Self {
        TraceEvent {
            seq,
            robot,
            kind,
            pos: pos.map(xy),
            class: class.map(|c| c.name().to_string()),
            dest: dest.map(xy),
        }
    }

    pub fn positions(&self) -> [Point; 4] {
        self.pos.map(|[x, y]| Point::new(x, y))
    }
}

pub trait TraceSink {
    /// Whether events should be built at all.
    fn enabled(&self) -> bool {
        true
    }
    fn record(&mut self, e: &TraceEvent);
    fn finish(&mut self) {}
}

/// Discards everything.
pub struct NullSink;

impl TraceSink for NullSink {
    fn enabled(&self) -> bool {
        false
    }
    fn record(&mut self, _: &TraceEvent) {}
}

#[derive(Default)]
pub struct VecSink {
    pub events: Vec<TraceEvent>,
}

impl TraceSink for VecSink {
    fn record(&mut self, e: &TraceEvent) {
        self.events.push(e.clone());
    }
}

/// Streams JSONL, flushing after every event so aborted runs leave a usable
/// prefix. The first write error is kept and later writes are skipped.
pub struct JsonlWriter<W: Write> {
    out: W,
    error: Option<io::Error>,
    last_seq: Option<u64>,
}

impl<W: Write> JsonlWriter<W> {
    pub fn new(mut out: W) -> io::Result<Self> {
        writeln!(out, "{TRACE_HEADER}")?;
        out.flush()?;
        Ok(JsonlWriter { out, error: None, last_seq: None })
    }

    pub fn error(&self) -> Option<&io::Error> {
        self.error.as_ref()
    }

    pub fn into_inner(self) -> W {
        self.out
    }

    fn write(&mut self, e: &TraceEvent) -> io::Result<()> {
        serde_json::to_writer(&mut self.out, e)?;
        self.out.write_all(b"\n")?;
        self.out.flush()
    }
}

impl<W: Write> TraceSink for JsonlWriter<W> {
    fn record(&mut self, e: &TraceEvent) {
        if self.error.is_some() {
            return;
        }
        // Several events can share an engine clock value; renumber so the
        // stream is strictly increasing.
        let seq = match self.last_seq {
            Some(s) => s + 1,
            None => 0,
        };
        self.last_seq = Some(seq);
        let mut e = e.clone();
        e.seq = seq;
        if let Err(err) = self.write(&e) {
            self.error = Some(err);
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TraceReadError {
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {source}")]
    Parse { line: usize, source: serde_json::Error },
    #[error("missing `{TRACE_HEADER}` header")]
    Header,
}

/// Parse a JSONL trace, skipping comment lines after the header.
pub fn read_trace(input: impl BufRead) -> Result<Vec<TraceEvent>, TraceReadError> {
    let mut events = Vec::new();
    let mut saw_header = false;
    for (n, line) in input.lines().enumerate() {
        let line = line?;
        if n == 0 {
            if line.trim() != TRACE_HEADER {
                return Err(TraceReadError::Header);
            }
            saw_header = true;
            continue;
        }
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let e = serde_json::from_str(&line).map_err(|source| TraceReadError::Parse { line: n + 1, source })?;
        events.push(e);
    }
    if !saw_header {
        return Err(TraceReadError::Header);
    }
    Ok(events)
}
