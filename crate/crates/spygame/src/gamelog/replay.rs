//! Re-derives a record's terminal state by folding its events through the
//! game reducer, reporting the first divergence if the log is inconsistent.

use crate::game::{init_game, GameState};

use super::GameRecord;

#[derive(Debug, Clone, PartialEq)]
pub enum ReplayReport {
    Identical,
    Divergent { seq: u64, reason: String },
}

impl ReplayReport {
    pub fn is_identical(&self) -> bool {
        matches!(self, ReplayReport::Identical)
    }
}

impl std::fmt::Display for ReplayReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReplayReport::Identical => write!(f, "identical"),
            ReplayReport::Divergent { seq, reason } => {
                write!(f, "divergent at seq {seq}: {reason}")
            }
        }
    }
}

/// Folds the record's events from the dealt initial state. Divergence is a
/// report, not an error.
pub fn validate_replay(record: &GameRecord) -> ReplayReport {
    match replay_terminal_state(record) {
        Ok(_) => ReplayReport::Identical,
        Err(report) => report,
    }
}

/// Like [`validate_replay`], but hands back the re-derived terminal state on
/// success so callers can compare it byte-for-byte with a live state.
pub fn replay_terminal_state(record: &GameRecord) -> Result<GameState, ReplayReport> {
    let mut state = match init_game(
        record.header.config.clone(),
        record.header.assignment.clone(),
    ) {
        Ok(state) => state,
        Err(e) => {
            return Err(ReplayReport::Divergent {
                seq: 0,
                reason: format!("header does not initialize: {e}"),
            })
        }
    };

    for entry in record.events() {
        state = match state.apply_event(entry) {
            Ok(next) => next,
            Err(e) => {
                return Err(ReplayReport::Divergent {
                    seq: entry.seq,
                    reason: e.to_string(),
                })
            }
        };
    }

    let last_seq = state.transcript().last().map(|e| e.seq).unwrap_or(0);
    match (&record.outcome, state.outcome()) {
        (Some(line), Some(derived)) if line.outcome == derived => Ok(state),
        (Some(line), Some(derived)) => Err(ReplayReport::Divergent {
            seq: last_seq,
            reason: format!(
                "outcome line says {:?}/{:?}, replay derives {:?}/{:?}",
                line.outcome.winner, line.outcome.cause, derived.winner, derived.cause
            ),
        }),
        (Some(_), None) => Err(ReplayReport::Divergent {
            seq: last_seq,
            reason: "outcome line present but replay does not reach a game end".into(),
        }),
        (None, _) => Err(ReplayReport::Divergent {
            seq: last_seq,
            reason: "record has no outcome line".into(),
        }),
    }
}
