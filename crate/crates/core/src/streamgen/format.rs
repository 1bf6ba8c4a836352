//! Plain-text stream files: one `<id> <+|->` event per LF-terminated line.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::event::{Action, LogEvent, ObjectId};

pub fn write_events<W: Write>(mut out: W, events: &[LogEvent]) -> io::Result<()> {
    for e in events {
        writeln!(out, "{} {}", e.object, e.action.symbol())?;
    }
    out.flush()
}

pub fn write_stream(path: impl AsRef<Path>, events: &[LogEvent]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_events(BufWriter::new(file), events).map_err(|e| Error::io(path, e))
}

fn parse_line(line: &str) -> std::result::Result<LogEvent, String> {
    let (id, action) = line
        .split_once(' ')
        .ok_or_else(|| format!("expected `<id> <+|->`, got {line:?}"))?;
    let action = match action {
        "+" => Action::Add,
        "-" => Action::Remove,
        other => return Err(format!("bad action {other:?}")),
    };
    if id.is_empty() || !id.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("bad object id {id:?}"));
    }
    let id: u32 = id.parse().map_err(|_| format!("object id {id} too large"))?;
    let object = ObjectId::new(id).map_err(|_| "object id 0 is not allowed".to_string())?;
    Ok(LogEvent::new(object, action))
}

/// Parses a stream; `origin` labels errors.
pub fn read_events<R: BufRead>(input: R, origin: &Path) -> Result<Vec<LogEvent>> {
    let mut events = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::io(origin, e))?;
        let event = parse_line(&line).map_err(|reason| Error::MalformedLine {
            path: origin.to_path_buf(),
            line: i + 1,
            reason,
        })?;
        events.push(event);
    }
    Ok(events)
}

pub fn read_stream(path: impl AsRef<Path>) -> Result<Vec<LogEvent>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_events(BufReader::new(file), path)
}
