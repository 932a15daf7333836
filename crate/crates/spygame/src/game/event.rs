use serde::{Deserialize, Serialize};

/// A seat at the table, 0-indexed internally and rendered as `Player1..N`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct PlayerId(pub u8);

impl PlayerId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// All seats of an `n`-player game in ascending order.
    pub fn seats(n: u8) -> impl Iterator<Item = PlayerId> {
        (0..n).map(PlayerId)
    }
}

impl std::fmt::Display for PlayerId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Player{}", self.0 + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Winner {
    Spy,
    Citizens,
}

/// Terminal cause; the winner is fully determined by the cause.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndCause {
    DayVoteCitizenEliminated,
    DayVoteSpyEliminated,
    GuessCorrect,
    GuessWrong,
    FinalVoteCitizenTopped,
    FinalVoteSpyToppedOrTie,
    Aborted,
}

impl EndCause {
    pub fn winner(self) -> Winner {
        match self {
            EndCause::DayVoteCitizenEliminated
            | EndCause::GuessCorrect
            | EndCause::FinalVoteCitizenTopped => Winner::Spy,
            EndCause::DayVoteSpyEliminated
            | EndCause::GuessWrong
            | EndCause::FinalVoteSpyToppedOrTie
            | EndCause::Aborted => Winner::Citizens,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub winner: Winner,
    pub cause: EndCause,
}

impl Outcome {
    pub fn from_cause(cause: EndCause) -> Self {
        Outcome {
            winner: cause.winner(),
            cause,
        }
    }

    pub fn spy_won(&self) -> bool {
        self.winner == Winner::Spy
    }
}

/// One element of the append-only game log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GameEvent {
    TurnStart {
        turn: u32,
        leader: PlayerId,
    },
    Reasoning {
        player: PlayerId,
        text: String,
    },
    Question {
        asker: PlayerId,
        target: PlayerId,
        text: String,
    },
    Answer {
        responder: PlayerId,
        text: String,
    },
    Accusation {
        accuser: PlayerId,
        accused: PlayerId,
    },
    DayVoteBallot {
        voter: PlayerId,
        agree: bool,
    },
    DayVoteResult {
        unanimous: bool,
    },
    SecretGuess {
        location_text: String,
        certainty: u8,
    },
    GuessAnnounced {
        location_text: String,
        correct: bool,
    },
    FinalVoteBallot {
        voter: PlayerId,
        target: PlayerId,
    },
    GameEnd {
        winner: Winner,
        cause: EndCause,
    },
}

impl GameEvent {
    /// The seat whose utterance this is, when the event is an utterance
    /// (question or answer).
    pub fn utterance(&self) -> Option<(PlayerId, &str)> {
        match self {
            GameEvent::Question { asker, text, .. } => Some((*asker, text)),
            GameEvent::Answer { responder, text } => Some((*responder, text)),
            _ => None,
        }
    }

    pub fn is_ballot(&self) -> bool {
        matches!(
            self,
            GameEvent::DayVoteBallot { .. } | GameEvent::FinalVoteBallot { .. }
        )
    }
}

/// A game event stamped with its position in the log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoggedEvent {
    pub seq: u64,
    #[serde(flatten)]
    pub event: GameEvent,
}
