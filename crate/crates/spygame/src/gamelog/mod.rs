//! Append-only persistence of games as event streams, replay validation,
//! and corpus statistics.
//!
//! A game log is one UTF-8 JSON object per line: a header line, then event
//! lines (with raw model completions interleaved as sidecar lines), then an
//! outcome line. The file name is the game id.

mod io;
mod replay;
mod stats;

pub use io::{load_dir, load_game, GameLogWriter, LoadedGame};
pub use replay::{validate_replay, ReplayReport};
pub use stats::{corpus_stats, CorpusStats, GroupStats};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{Assignment, GameConfig, LoggedEvent, Outcome, PlayerId};

pub const SCHEMA_VERSION: u32 = 1;

/// Seeds recorded so any single game can be reproduced in isolation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    /// The game's master seed, derived from the experiment base seed.
    pub game: u64,
    /// Sub-seed used for dealing roles and characters.
    pub deal: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameHeader {
    pub schema_version: u32,
    pub game_id: String,
    pub config: GameConfig,
    pub assignment: Assignment,
    /// Canonical location name; must match `assignment.location.name`.
    pub location: String,
    pub spy_seat: PlayerId,
    pub spy_agent_id: String,
    pub citizen_agent_id: String,
    pub citizen_strength: String,
    pub seeds: Seeds,
    pub started_unix_ms: u64,
}

impl GameHeader {
    fn check(&self) -> Result<(), LogError> {
        if self.location != self.assignment.location.name {
            return Err(LogError::HeaderMismatch(format!(
                "header location {:?} does not match assignment {:?}",
                self.location, self.assignment.location.name
            )));
        }
        if self.spy_seat != self.assignment.spy_seat {
            return Err(LogError::HeaderMismatch(format!(
                "header spy seat {} does not match assignment {}",
                self.spy_seat, self.assignment.spy_seat
            )));
        }
        Ok(())
    }
}

/// Verbatim model output, kept for audit and excluded from replay folding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawCompletion {
    pub seat: PlayerId,
    pub request: String,
    pub attempt: u32,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeLine {
    #[serde(flatten)]
    pub outcome: Outcome,
    pub finished_unix_ms: u64,
}

/// One line of a game log file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "line", rename_all = "snake_case")]
pub enum LogLine {
    Header(GameHeader),
    Event(LoggedEvent),
    Raw(RawCompletion),
    Outcome(OutcomeLine),
}

/// Body line of a log: a game event or a raw-completion sidecar.
#[derive(Debug, Clone, PartialEq)]
pub enum BodyLine {
    Event(LoggedEvent),
    Raw(RawCompletion),
}

/// One game as persisted: header, ordered body, and (when the file is
/// complete) the terminal outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct GameRecord {
    pub header: GameHeader,
    pub body: Vec<BodyLine>,
    pub outcome: Option<OutcomeLine>,
}

impl GameRecord {
    /// Replay-relevant events, in order, excluding raw sidecar lines.
    pub fn events(&self) -> impl Iterator<Item = &LoggedEvent> {
        self.body.iter().filter_map(|l| match l {
            BodyLine::Event(e) => Some(e),
            BodyLine::Raw(_) => None,
        })
    }

    pub fn raw_completions(&self) -> impl Iterator<Item = &RawCompletion> {
        self.body.iter().filter_map(|l| match l {
            BodyLine::Raw(r) => Some(r),
            BodyLine::Event(_) => None,
        })
    }

    pub fn is_complete(&self) -> bool {
        self.outcome.is_some()
    }

    /// Terminal outcome of a complete record.
    pub fn terminal_outcome(&self) -> Result<Outcome, LogError> {
        self.outcome
            .as_ref()
            .map(|o| o.outcome)
            .ok_or(LogError::Incomplete)
    }

    /// The log as lines, in file order.
    pub fn lines(&self) -> Vec<LogLine> {
        let mut lines = vec![LogLine::Header(self.header.clone())];
        for body in &self.body {
            lines.push(match body {
                BodyLine::Event(e) => LogLine::Event(e.clone()),
                BodyLine::Raw(r) => LogLine::Raw(r.clone()),
            });
        }
        if let Some(outcome) = &self.outcome {
            lines.push(LogLine::Outcome(outcome.clone()));
        }
        lines
    }

    /// Serializes the record exactly as the writer lays it out on disk.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for line in self.lines() {
            out.push_str(&serde_json::to_string(&line).expect("log lines serialize"));
            out.push('\n');
        }
        out
    }

    /// Stable digest of the deterministic content: everything except
    /// wall-clock timestamps. Rerunning a seeded scripted game yields the
    /// same hash.
    pub fn content_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        let mut header = self.header.clone();
        header.started_unix_ms = 0;
        hasher.update(serde_json::to_vec(&header).expect("header serializes"));
        for body in &self.body {
            let line = match body {
                BodyLine::Event(e) => serde_json::to_vec(&LogLine::Event(e.clone())),
                BodyLine::Raw(r) => serde_json::to_vec(&LogLine::Raw(r.clone())),
            };
            hasher.update(line.expect("body lines serialize"));
            hasher.update(b"\n");
        }
        if let Some(outcome) = &self.outcome {
            let mut o = outcome.clone();
            o.finished_unix_ms = 0;
            hasher.update(serde_json::to_vec(&o).expect("outcome serializes"));
        }
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Error)]
pub enum LogError {
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("log file has no header line")]
    MissingHeader,
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("line {line}: sequence number {got} where {expected} was expected")]
    SequenceGap { line: usize, expected: u64, got: u64 },
    #[error("line {line}: content after the outcome line")]
    AfterOutcome { line: usize },
    #[error("header is inconsistent: {0}")]
    HeaderMismatch(String),
    #[error("record has no outcome line")]
    Incomplete,
    #[error("append would skip sequence numbers: expected {expected}, got {got}")]
    OutOfOrderAppend { expected: u64, got: u64 },
    #[error("log already has its outcome line")]
    AlreadyFinished,
    #[error("empty corpus")]
    EmptyCorpus,
}

/// Milliseconds since the Unix epoch; the only wall-clock the logs record.
pub fn unix_millis_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}
