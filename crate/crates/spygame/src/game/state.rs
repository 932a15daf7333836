use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::assignment::Assignment;
use super::config::GameConfig;
use super::event::{EndCause, GameEvent, LoggedEvent, Outcome, PlayerId, Winner};
use crate::metrics::text::match_location;

/// What the engine is waiting for next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    AwaitLeaderAction,
    AwaitAnswer { asker: PlayerId, responder: PlayerId },
    AwaitDayVotes,
    AwaitSpyGuess,
    AwaitFinalVotes,
    /// A high-certainty secret guess was recorded; the announcement is due.
    Announcing,
    /// The cause of the ending is fixed; the `GameEnd` event is due.
    Concluding { cause: EndCause },
    /// The turn closed; the next `TurnStart` is due.
    BetweenTurns,
    Ended,
}

/// The request the engine puts to the acting seat.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RequestKind {
    LeaderAction,
    Answer,
    DayBallot,
    SpyGuess,
    FinalBallot,
}

impl std::fmt::Display for RequestKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RequestKind::LeaderAction => "leader_action",
            RequestKind::Answer => "answer",
            RequestKind::DayBallot => "day_ballot",
            RequestKind::SpyGuess => "spy_guess",
            RequestKind::FinalBallot => "final_ballot",
        };
        f.write_str(s)
    }
}

/// One legal move, optionally preceded by the mover's reasoning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reasoning: Vec<String>,
    pub action: Action,
}

impl Decision {
    pub fn of(action: Action) -> Self {
        Decision {
            reasoning: Vec::new(),
            action,
        }
    }

    pub fn with_reasoning(action: Action, reasoning: impl Into<String>) -> Self {
        Decision {
            reasoning: vec![reasoning.into()],
            action,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum Action {
    AskQuestion { target: PlayerId, text: String },
    Accuse { target: PlayerId },
    Answer { text: String },
    DayBallot { agree: bool },
    SpyGuess { location_text: String, certainty: u8 },
    FinalBallot { target: PlayerId },
}

impl Action {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Action::AskQuestion { .. } => "ask_question",
            Action::Accuse { .. } => "accuse",
            Action::Answer { .. } => "answer",
            Action::DayBallot { .. } => "day_ballot",
            Action::SpyGuess { .. } => "spy_guess",
            Action::FinalBallot { .. } => "final_ballot",
        }
    }

    fn matches_request(&self, kind: RequestKind) -> bool {
        matches!(
            (self, kind),
            (Action::AskQuestion { .. }, RequestKind::LeaderAction)
                | (Action::Accuse { .. }, RequestKind::LeaderAction)
                | (Action::Answer { .. }, RequestKind::Answer)
                | (Action::DayBallot { .. }, RequestKind::DayBallot)
                | (Action::SpyGuess { .. }, RequestKind::SpyGuess)
                | (Action::FinalBallot { .. }, RequestKind::FinalBallot)
        )
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum RuleError {
    #[error("the game has already ended")]
    GameEnded,
    #[error("no decision is expected in the current phase")]
    NoDecisionExpected,
    #[error("expected {expected} to act, got {got}")]
    WrongActor { expected: PlayerId, got: PlayerId },
    #[error("phase expects a {expected} decision, got {got}")]
    WrongDecisionKind {
        expected: RequestKind,
        got: &'static str,
    },
    #[error("{actor} may not target themselves with {rule}")]
    SelfTarget { actor: PlayerId, rule: &'static str },
    #[error("seat {0} does not exist in this game")]
    SeatOutOfRange(PlayerId),
    #[error("utterance text must be non-empty")]
    EmptyText,
    #[error("certainty {0} is outside 0..=10")]
    CertaintyOutOfRange(u8),
    #[error("final vote needs {need} ballots, got {have}")]
    BallotCountMismatch { have: usize, need: usize },
    #[error("seat {0} cast more than one ballot")]
    DuplicateVoter(PlayerId),
    #[error(transparent)]
    Assignment(#[from] super::assignment::AssignmentError),
    #[error(transparent)]
    Config(#[from] super::config::ConfigError),
}

/// Why an event cannot be applied to a state during a replay fold.
#[derive(Debug, Error)]
pub enum ApplyError {
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("event is inconsistent with the state: {0}")]
    Inconsistent(String),
}

/// Full authoritative state of one game. Transitions never mutate in place:
/// [`GameState::advance`] returns the successor state plus the events that
/// produced it, and folding those events through [`GameState::apply_event`]
/// yields the identical successor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameState {
    config: GameConfig,
    assignment: Assignment,
    phase: Phase,
    turn: u32,
    leader: PlayerId,
    next_leader: PlayerId,
    pending_accusation: Option<(PlayerId, PlayerId)>,
    day_ballots: Vec<(PlayerId, bool)>,
    final_ballots: Vec<(PlayerId, PlayerId)>,
    spy_guessed_this_turn: bool,
    pending_guess: Option<String>,
    transcript: Vec<LoggedEvent>,
    outcome: Option<Outcome>,
}

/// Sets up a fresh game: turn 1, the dealt first leader, empty transcript.
pub fn init_game(config: GameConfig, assignment: Assignment) -> Result<GameState, RuleError> {
    config.validate()?;
    assignment.validate(&config)?;
    let leader = assignment.first_leader;
    Ok(GameState {
        config,
        assignment,
        phase: Phase::AwaitLeaderAction,
        turn: 1,
        leader,
        next_leader: leader,
        pending_accusation: None,
        day_ballots: Vec::new(),
        final_ballots: Vec::new(),
        spy_guessed_this_turn: false,
        pending_guess: None,
        transcript: Vec::new(),
        outcome: None,
    })
}

impl GameState {
    pub fn config(&self) -> &GameConfig {
        &self.config
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn turn(&self) -> u32 {
        self.turn
    }

    pub fn leader(&self) -> PlayerId {
        self.leader
    }

    pub fn transcript(&self) -> &[LoggedEvent] {
        &self.transcript
    }

    pub fn outcome(&self) -> Option<Outcome> {
        self.outcome
    }

    pub fn is_ended(&self) -> bool {
        self.outcome.is_some()
    }

    pub fn num_players(&self) -> u8 {
        self.config.num_players
    }

    pub fn spy_seat(&self) -> PlayerId {
        self.assignment.spy_seat
    }

    pub fn pending_accusation(&self) -> Option<(PlayerId, PlayerId)> {
        self.pending_accusation
    }

    fn next_seq(&self) -> u64 {
        self.transcript.len() as u64 + 1
    }

    fn day_vote_size(&self) -> usize {
        self.config.num_players as usize - 2
    }

    /// Day-vote voters in solicitation order: every seat except the accuser
    /// and the accused, ascending.
    pub fn day_voters(&self) -> Vec<PlayerId> {
        match self.pending_accusation {
            Some((accuser, accused)) => PlayerId::seats(self.config.num_players)
                .filter(|s| *s != accuser && *s != accused)
                .collect(),
            None => Vec::new(),
        }
    }

    fn guess_due(&self) -> bool {
        self.turn >= self.config.guess_start_turn && !self.spy_guessed_this_turn
    }

    /// Phase reached after a turn's action (and guess, when due) resolves.
    fn turn_close_phase(&self) -> Phase {
        if self.guess_due() {
            Phase::AwaitSpyGuess
        } else if self.turn >= self.config.final_turn {
            Phase::AwaitFinalVotes
        } else {
            Phase::BetweenTurns
        }
    }

    /// The seat that must act now and what is asked of it, if any. `None`
    /// means a system event is due (see [`GameState::required_system_event`])
    /// or the game is over.
    pub fn expected_actor(&self) -> Option<(PlayerId, RequestKind)> {
        match self.phase {
            Phase::AwaitLeaderAction => Some((self.leader, RequestKind::LeaderAction)),
            Phase::AwaitAnswer { responder, .. } => Some((responder, RequestKind::Answer)),
            Phase::AwaitDayVotes => self
                .day_voters()
                .into_iter()
                .find(|s| !self.day_ballots.iter().any(|(v, _)| v == s))
                .map(|s| (s, RequestKind::DayBallot)),
            Phase::AwaitSpyGuess => Some((self.assignment.spy_seat, RequestKind::SpyGuess)),
            Phase::AwaitFinalVotes => PlayerId::seats(self.config.num_players)
                .find(|s| !self.final_ballots.iter().any(|(v, _)| v == s))
                .map(|s| (s, RequestKind::FinalBallot)),
            _ => None,
        }
    }

    /// The engine-emitted event that must come next, if any.
    fn required_system_event(&self) -> Option<GameEvent> {
        match self.phase {
            Phase::AwaitDayVotes if self.day_ballots.len() == self.day_vote_size() => {
                let unanimous = self.day_ballots.iter().all(|(_, agree)| *agree);
                Some(GameEvent::DayVoteResult { unanimous })
            }
            Phase::AwaitFinalVotes
                if self.final_ballots.len() == self.config.num_players as usize =>
            {
                let outcome = decide_winner(
                    &self.final_ballots,
                    self.assignment.spy_seat,
                    self.config.num_players,
                )
                .expect("collected final ballots are complete by construction");
                Some(GameEvent::GameEnd {
                    winner: outcome.winner,
                    cause: outcome.cause,
                })
            }
            Phase::Announcing => {
                let text = self
                    .pending_guess
                    .clone()
                    .expect("Announcing phase holds a pending guess");
                let correct = match_location(&text, &self.assignment.location);
                Some(GameEvent::GuessAnnounced {
                    location_text: text,
                    correct,
                })
            }
            Phase::Concluding { cause } => Some(GameEvent::GameEnd {
                winner: cause.winner(),
                cause,
            }),
            Phase::BetweenTurns => Some(GameEvent::TurnStart {
                turn: self.turn + 1,
                leader: self.next_leader,
            }),
            _ => None,
        }
    }

    fn check_seat(&self, seat: PlayerId) -> Result<(), RuleError> {
        if seat.0 >= self.config.num_players {
            return Err(RuleError::SeatOutOfRange(seat));
        }
        Ok(())
    }

    fn check_action(&self, actor: PlayerId, action: &Action) -> Result<(), RuleError> {
        match action {
            Action::AskQuestion { target, text } => {
                self.check_seat(*target)?;
                if *target == actor {
                    return Err(RuleError::SelfTarget {
                        actor,
                        rule: "a question",
                    });
                }
                if text.trim().is_empty() {
                    return Err(RuleError::EmptyText);
                }
            }
            Action::Accuse { target } => {
                self.check_seat(*target)?;
                if *target == actor {
                    return Err(RuleError::SelfTarget {
                        actor,
                        rule: "an accusation",
                    });
                }
            }
            Action::Answer { text } => {
                if text.trim().is_empty() {
                    return Err(RuleError::EmptyText);
                }
            }
            Action::DayBallot { .. } => {}
            Action::SpyGuess { certainty, .. } => {
                if *certainty > 10 {
                    return Err(RuleError::CertaintyOutOfRange(*certainty));
                }
            }
            Action::FinalBallot { target } => {
                self.check_seat(*target)?;
                if *target == actor {
                    return Err(RuleError::SelfTarget {
                        actor,
                        rule: "a final vote",
                    });
                }
            }
        }
        Ok(())
    }

    /// Applies one decision by the acting seat. Returns the successor state
    /// and every event emitted, including engine follow-ups (vote results,
    /// announcements, turn starts, game end).
    pub fn advance(
        &self,
        actor: PlayerId,
        decision: &Decision,
    ) -> Result<(GameState, Vec<LoggedEvent>), RuleError> {
        if self.is_ended() {
            return Err(RuleError::GameEnded);
        }
        let (expected, kind) = self.expected_actor().ok_or(RuleError::NoDecisionExpected)?;
        if actor != expected {
            return Err(RuleError::WrongActor {
                expected,
                got: actor,
            });
        }
        if !decision.action.matches_request(kind) {
            return Err(RuleError::WrongDecisionKind {
                expected: kind,
                got: decision.action.kind_name(),
            });
        }
        self.check_action(actor, &decision.action)?;

        let mut events: Vec<GameEvent> = decision
            .reasoning
            .iter()
            .filter(|t| !t.trim().is_empty())
            .map(|t| GameEvent::Reasoning {
                player: actor,
                text: t.clone(),
            })
            .collect();
        events.push(match decision.action.clone() {
            Action::AskQuestion { target, text } => GameEvent::Question {
                asker: actor,
                target,
                text,
            },
            Action::Accuse { target } => GameEvent::Accusation {
                accuser: actor,
                accused: target,
            },
            Action::Answer { text } => GameEvent::Answer {
                responder: actor,
                text,
            },
            Action::DayBallot { agree } => GameEvent::DayVoteBallot {
                voter: actor,
                agree,
            },
            Action::SpyGuess {
                location_text,
                certainty,
            } => GameEvent::SecretGuess {
                location_text,
                certainty,
            },
            Action::FinalBallot { target } => GameEvent::FinalVoteBallot {
                voter: actor,
                target,
            },
        });

        Ok(self.emit(events))
    }

    /// Ends the game from any live phase without a winner on merit.
    pub fn abort(&self) -> Result<(GameState, Vec<LoggedEvent>), RuleError> {
        if self.is_ended() {
            return Err(RuleError::GameEnded);
        }
        Ok(self.emit(vec![GameEvent::GameEnd {
            winner: Winner::Citizens,
            cause: EndCause::Aborted,
        }]))
    }

    /// Applies the given events, then any engine follow-ups they force.
    fn emit(&self, events: Vec<GameEvent>) -> (GameState, Vec<LoggedEvent>) {
        let mut state = self.clone();
        let mut logged = Vec::with_capacity(events.len());
        for event in events {
            let entry = LoggedEvent {
                seq: state.next_seq(),
                event,
            };
            state = state
                .apply_event(&entry)
                .expect("engine-emitted event must apply");
            logged.push(entry);
        }
        while let Some(event) = state.required_system_event() {
            let entry = LoggedEvent {
                seq: state.next_seq(),
                event,
            };
            state = state
                .apply_event(&entry)
                .expect("engine-emitted event must apply");
            logged.push(entry);
        }
        (state, logged)
    }

    /// The pure reducer: validates `entry` against this state and returns the
    /// successor. Replay folds a log through this to detect divergence.
    pub fn apply_event(&self, entry: &LoggedEvent) -> Result<GameState, ApplyError> {
        if entry.seq != self.next_seq() {
            return Err(ApplyError::Inconsistent(format!(
                "sequence number {} where {} was expected",
                entry.seq,
                self.next_seq()
            )));
        }
        if self.is_ended() {
            return Err(ApplyError::Rule(RuleError::GameEnded));
        }

        let mut next = self.clone();
        match &entry.event {
            GameEvent::Reasoning { player, .. } => {
                let (expected, _) = self
                    .expected_actor()
                    .ok_or(ApplyError::Rule(RuleError::NoDecisionExpected))?;
                if *player != expected {
                    return Err(ApplyError::Rule(RuleError::WrongActor {
                        expected,
                        got: *player,
                    }));
                }
            }
            GameEvent::Question {
                asker,
                target,
                text,
            } => {
                self.expect_request(*asker, RequestKind::LeaderAction)?;
                self.check_action(
                    *asker,
                    &Action::AskQuestion {
                        target: *target,
                        text: text.clone(),
                    },
                )?;
                next.phase = Phase::AwaitAnswer {
                    asker: *asker,
                    responder: *target,
                };
                next.next_leader = *target;
            }
            GameEvent::Answer { responder, text } => {
                self.expect_request(*responder, RequestKind::Answer)?;
                self.check_action(*responder, &Action::Answer { text: text.clone() })?;
                next.phase = next.turn_close_phase();
            }
            GameEvent::Accusation { accuser, accused } => {
                self.expect_request(*accuser, RequestKind::LeaderAction)?;
                self.check_action(*accuser, &Action::Accuse { target: *accused })?;
                next.phase = Phase::AwaitDayVotes;
                next.pending_accusation = Some((*accuser, *accused));
                next.next_leader = *accused;
                next.day_ballots.clear();
            }
            GameEvent::DayVoteBallot { voter, agree } => {
                self.expect_request(*voter, RequestKind::DayBallot)?;
                next.day_ballots.push((*voter, *agree));
            }
            GameEvent::DayVoteResult { unanimous } => {
                if self.phase != Phase::AwaitDayVotes
                    || self.day_ballots.len() != self.day_vote_size()
                {
                    return Err(ApplyError::Inconsistent(
                        "day-vote result without a completed ballot set".into(),
                    ));
                }
                let actual = self.day_ballots.iter().all(|(_, agree)| *agree);
                if *unanimous != actual {
                    return Err(ApplyError::Inconsistent(format!(
                        "day-vote result claims unanimous={unanimous}, ballots say {actual}"
                    )));
                }
                let (_, accused) = self
                    .pending_accusation
                    .expect("day vote implies an accusation");
                if *unanimous {
                    let cause = if accused == self.assignment.spy_seat {
                        EndCause::DayVoteSpyEliminated
                    } else {
                        EndCause::DayVoteCitizenEliminated
                    };
                    next.phase = Phase::Concluding { cause };
                } else {
                    next.pending_accusation = None;
                    next.day_ballots.clear();
                    next.phase = next.turn_close_phase();
                }
            }
            GameEvent::SecretGuess {
                location_text,
                certainty,
            } => {
                let spy = self.assignment.spy_seat;
                self.expect_request(spy, RequestKind::SpyGuess)?;
                self.check_action(
                    spy,
                    &Action::SpyGuess {
                        location_text: location_text.clone(),
                        certainty: *certainty,
                    },
                )?;
                if self.turn < self.config.guess_start_turn {
                    return Err(ApplyError::Inconsistent(format!(
                        "secret guess at turn {} before guess_start_turn {}",
                        self.turn, self.config.guess_start_turn
                    )));
                }
                next.spy_guessed_this_turn = true;
                if *certainty >= self.config.certainty_threshold {
                    next.pending_guess = Some(location_text.clone());
                    next.phase = Phase::Announcing;
                } else {
                    next.phase = next.turn_close_phase();
                }
            }
            GameEvent::GuessAnnounced {
                location_text,
                correct,
            } => {
                if self.phase != Phase::Announcing {
                    return Err(ApplyError::Inconsistent(
                        "guess announcement without a qualifying secret guess".into(),
                    ));
                }
                let pending = self.pending_guess.as_deref().unwrap_or_default();
                if location_text != pending {
                    return Err(ApplyError::Inconsistent(format!(
                        "announced text {location_text:?} differs from the secret guess {pending:?}"
                    )));
                }
                let actual = match_location(location_text, &self.assignment.location);
                if *correct != actual {
                    return Err(ApplyError::Inconsistent(format!(
                        "announcement claims correct={correct}, location match says {actual}"
                    )));
                }
                let cause = if *correct {
                    EndCause::GuessCorrect
                } else {
                    EndCause::GuessWrong
                };
                next.pending_guess = None;
                next.phase = Phase::Concluding { cause };
            }
            GameEvent::FinalVoteBallot { voter, target } => {
                self.expect_request(*voter, RequestKind::FinalBallot)?;
                self.check_action(*voter, &Action::FinalBallot { target: *target })?;
                next.final_ballots.push((*voter, *target));
            }
            GameEvent::TurnStart { turn, leader } => {
                if self.phase != Phase::BetweenTurns {
                    return Err(ApplyError::Inconsistent(
                        "turn start outside a turn boundary".into(),
                    ));
                }
                if *turn != self.turn + 1 || *turn > self.config.final_turn {
                    return Err(ApplyError::Inconsistent(format!(
                        "turn start numbered {} after turn {}",
                        turn, self.turn
                    )));
                }
                if *leader != self.next_leader {
                    return Err(ApplyError::Inconsistent(format!(
                        "turn leader {} where {} was due",
                        leader, self.next_leader
                    )));
                }
                next.turn = *turn;
                next.leader = *leader;
                next.spy_guessed_this_turn = false;
                next.phase = Phase::AwaitLeaderAction;
            }
            GameEvent::GameEnd { winner, cause } => {
                if *winner != cause.winner() {
                    return Err(ApplyError::Inconsistent(format!(
                        "game end pairs winner {winner:?} with cause {cause:?}"
                    )));
                }
                match cause {
                    EndCause::Aborted => {}
                    _ => match self.phase {
                        Phase::Concluding { cause: due } => {
                            if *cause != due {
                                return Err(ApplyError::Inconsistent(format!(
                                    "game end cause {cause:?} where {due:?} was due"
                                )));
                            }
                        }
                        Phase::AwaitFinalVotes => {
                            let outcome = decide_winner(
                                &self.final_ballots,
                                self.assignment.spy_seat,
                                self.config.num_players,
                            )
                            .map_err(ApplyError::Rule)?;
                            if outcome.cause != *cause {
                                return Err(ApplyError::Inconsistent(format!(
                                    "final vote decides {:?}, game end claims {:?}",
                                    outcome.cause, cause
                                )));
                            }
                        }
                        _ => {
                            return Err(ApplyError::Inconsistent(format!(
                                "game end with cause {cause:?} in phase {:?}",
                                self.phase
                            )));
                        }
                    },
                }
                next.outcome = Some(Outcome {
                    winner: *winner,
                    cause: *cause,
                });
                next.phase = Phase::Ended;
            }
        }

        next.transcript.push(entry.clone());
        Ok(next)
    }

    fn expect_request(&self, actor: PlayerId, kind: RequestKind) -> Result<(), ApplyError> {
        match self.expected_actor() {
            Some((expected, expected_kind)) if expected_kind == kind => {
                if actor != expected {
                    Err(ApplyError::Rule(RuleError::WrongActor {
                        expected,
                        got: actor,
                    }))
                } else {
                    Ok(())
                }
            }
            Some((_, expected_kind)) => Err(ApplyError::Rule(RuleError::WrongDecisionKind {
                expected: expected_kind,
                got: "other",
            })),
            None => Err(ApplyError::Rule(RuleError::NoDecisionExpected)),
        }
    }
}

/// Resolves the final vote: the spy wins if and only if a single citizen
/// holds the strict maximum tally; any tie, or a spy maximum, hands the game
/// to the citizens.
pub fn decide_winner(
    final_ballots: &[(PlayerId, PlayerId)],
    spy_seat: PlayerId,
    num_players: u8,
) -> Result<Outcome, RuleError> {
    if final_ballots.len() != num_players as usize {
        return Err(RuleError::BallotCountMismatch {
            have: final_ballots.len(),
            need: num_players as usize,
        });
    }
    let mut seen = std::collections::BTreeSet::new();
    for (voter, _) in final_ballots {
        if !seen.insert(*voter) {
            return Err(RuleError::DuplicateVoter(*voter));
        }
    }

    let mut tally = vec![0usize; num_players as usize];
    for (_, target) in final_ballots {
        tally[target.index()] += 1;
    }
    let max = *tally.iter().max().expect("non-empty tally");
    let leaders: Vec<PlayerId> = (0..num_players)
        .map(PlayerId)
        .filter(|s| tally[s.index()] == max)
        .collect();

    let cause = if leaders.len() == 1 && leaders[0] != spy_seat {
        EndCause::FinalVoteCitizenTopped
    } else {
        EndCause::FinalVoteSpyToppedOrTie
    };
    Ok(Outcome::from_cause(cause))
}

/// True when the spy holds or shares the maximum final-vote tally.
pub fn spy_holds_or_shares_max(final_ballots: &[(PlayerId, PlayerId)], spy_seat: PlayerId) -> bool {
    let mut tally = std::collections::BTreeMap::new();
    for (_, target) in final_ballots {
        *tally.entry(*target).or_insert(0usize) += 1;
    }
    let max = tally.values().copied().max().unwrap_or(0);
    max > 0 && tally.get(&spy_seat).copied().unwrap_or(0) == max
}
