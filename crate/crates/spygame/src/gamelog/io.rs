//! Writing and loading game log files.

use std::fs::{File, OpenOptions};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::game::{GameEvent, LoggedEvent};

use super::{
    BodyLine, GameHeader, GameRecord, LogError, LogLine, OutcomeLine, RawCompletion,
};

/// Appends one game's lines to its own file. Every append is flushed and
/// fsynced before it returns, so a crash leaves a clean prefix.
pub struct GameLogWriter {
    file: File,
    path: PathBuf,
    last_seq: u64,
    finished: bool,
}

impl GameLogWriter {
    /// Creates the log file and writes (and syncs) the header line.
    pub fn create(dir: &Path, header: &GameHeader) -> Result<Self, LogError> {
        header.check()?;
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.jsonl", header.game_id));
        let file = OpenOptions::new()
            .create(true)
            .write(true)
            .truncate(true)
            .open(&path)?;
        let mut writer = GameLogWriter {
            file,
            path,
            last_seq: 0,
            finished: false,
        };
        writer.write_line(&LogLine::Header(header.clone()))?;
        Ok(writer)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn write_line(&mut self, line: &LogLine) -> Result<(), LogError> {
        let mut bytes = serde_json::to_vec(line).map_err(|e| LogError::Schema {
            line: 0,
            message: format!("serialization failed: {e}"),
        })?;
        bytes.push(b'\n');
        self.file.write_all(&bytes)?;
        self.file.flush()?;
        self.file.sync_data()?;
        Ok(())
    }

    /// Appends one event; the sequence number must be exactly last + 1.
    pub fn append_event(&mut self, event: &LoggedEvent) -> Result<(), LogError> {
        if self.finished {
            return Err(LogError::AlreadyFinished);
        }
        if event.seq != self.last_seq + 1 {
            return Err(LogError::OutOfOrderAppend {
                expected: self.last_seq + 1,
                got: event.seq,
            });
        }
        self.write_line(&LogLine::Event(event.clone()))?;
        self.last_seq = event.seq;
        Ok(())
    }

    /// Appends a raw-completion sidecar line (no sequence number).
    pub fn append_raw(&mut self, raw: &RawCompletion) -> Result<(), LogError> {
        if self.finished {
            return Err(LogError::AlreadyFinished);
        }
        self.write_line(&LogLine::Raw(raw.clone()))
    }

    /// Writes the terminal outcome line and closes the record.
    pub fn finish(&mut self, outcome: &OutcomeLine) -> Result<(), LogError> {
        if self.finished {
            return Err(LogError::AlreadyFinished);
        }
        self.write_line(&LogLine::Outcome(outcome.clone()))?;
        self.finished = true;
        Ok(())
    }
}

/// A parsed log file plus any non-fatal findings (e.g. a torn final line).
#[derive(Debug, Clone)]
pub struct LoadedGame {
    pub record: GameRecord,
    pub warnings: Vec<String>,
}

fn event_sanity(event: &GameEvent) -> Result<(), String> {
    match event {
        GameEvent::SecretGuess { certainty, .. } => {
            if *certainty > 10 {
                return Err(format!("certainty {certainty} is outside 0..=10"));
            }
        }
        GameEvent::GameEnd { winner, cause } => {
            if *winner != cause.winner() {
                return Err(format!("winner {winner:?} inconsistent with cause {cause:?}"));
            }
        }
        _ => {}
    }
    Ok(())
}

/// Parses one game log. Structural problems are hard errors naming the line;
/// a torn final line (no trailing newline) is dropped with a warning, and a
/// missing outcome line yields an incomplete record plus a warning.
pub fn load_game(path: &Path) -> Result<LoadedGame, LogError> {
    let mut contents = String::new();
    File::open(path)?.read_to_string(&mut contents)?;
    load_game_str(&contents)
}

pub(crate) fn load_game_str(contents: &str) -> Result<LoadedGame, LogError> {
    let mut warnings = Vec::new();
    let complete_portion = match contents.rfind('\n') {
        Some(idx) => {
            if idx + 1 < contents.len() {
                warnings.push(format!(
                    "dropped torn final line ({} bytes without a newline)",
                    contents.len() - idx - 1
                ));
            }
            &contents[..=idx]
        }
        None => {
            if !contents.is_empty() {
                return Err(LogError::MissingHeader);
            }
            contents
        }
    };

    let mut header: Option<GameHeader> = None;
    let mut body: Vec<BodyLine> = Vec::new();
    let mut outcome: Option<OutcomeLine> = None;
    let mut last_seq = 0u64;

    for (idx, line) in complete_portion.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: LogLine = serde_json::from_str(line).map_err(|e| LogError::Schema {
            line: line_no,
            message: e.to_string(),
        })?;
        if outcome.is_some() {
            return Err(LogError::AfterOutcome { line: line_no });
        }
        match parsed {
            LogLine::Header(h) => {
                if header.is_some() {
                    return Err(LogError::Schema {
                        line: line_no,
                        message: "second header line".into(),
                    });
                }
                if line_no != 1 {
                    return Err(LogError::Schema {
                        line: line_no,
                        message: "header is not the first line".into(),
                    });
                }
                h.check()?;
                header = Some(h);
            }
            LogLine::Event(event) => {
                if header.is_none() {
                    return Err(LogError::MissingHeader);
                }
                if event.seq != last_seq + 1 {
                    return Err(LogError::SequenceGap {
                        line: line_no,
                        expected: last_seq + 1,
                        got: event.seq,
                    });
                }
                event_sanity(&event.event).map_err(|message| LogError::Schema {
                    line: line_no,
                    message,
                })?;
                last_seq = event.seq;
                body.push(BodyLine::Event(event));
            }
            LogLine::Raw(raw) => {
                if header.is_none() {
                    return Err(LogError::MissingHeader);
                }
                body.push(BodyLine::Raw(raw));
            }
            LogLine::Outcome(o) => {
                if header.is_none() {
                    return Err(LogError::MissingHeader);
                }
                outcome = Some(o);
            }
        }
    }

    let header = header.ok_or(LogError::MissingHeader)?;
    if outcome.is_none() {
        warnings.push("no outcome line: loaded a prefix of an unfinished game".into());
    } else {
        let ends = body
            .iter()
            .filter(|b| matches!(b, BodyLine::Event(e) if matches!(e.event, GameEvent::GameEnd { .. })))
            .count();
        if ends != 1 {
            return Err(LogError::HeaderMismatch(format!(
                "complete record has {ends} game-end events"
            )));
        }
    }

    Ok(LoadedGame {
        record: GameRecord {
            header,
            body,
            outcome,
        },
        warnings,
    })
}

/// Loads every `*.jsonl` file under `dir`, sorted by file name.
pub fn load_dir(dir: &Path) -> Result<Vec<LoadedGame>, LogError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "jsonl"))
        .collect();
    paths.sort();
    paths.iter().map(|p| load_game(p)).collect()
}

#[cfg(test)]
#[path = "io_tests.rs"]
mod tests;
