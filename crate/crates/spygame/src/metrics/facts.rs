//! Reduces one game record to the booleans and counters all metrics are
//! pure aggregations of.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{
    spy_holds_or_shares_max, EndCause, GameEvent, LocationCard, PlayerId, VoteSources,
};
use crate::gamelog::GameRecord;

use super::text::{detect_exposure, match_location};

#[derive(Debug, Error)]
pub enum FactsError {
    #[error("header location {0:?} is not in the deck")]
    UnknownLocation(String),
    #[error("record is incomplete (no outcome line)")]
    Incomplete,
}

/// Knobs that change how facts are read out of a record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactsOptions {
    /// Which votes feed the suspicion-ballot pool; `None` uses the mode the
    /// game was recorded with.
    pub vote_sources: Option<VoteSources>,
    /// Count a shared final-vote maximum as the spy being caught.
    pub caught_on_shared_max: bool,
}

impl Default for FactsOptions {
    fn default() -> Self {
        FactsOptions {
            vote_sources: None,
            caught_on_shared_max: true,
        }
    }
}

/// Per-game derived facts; every metric is a pure aggregation over these.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameFacts {
    pub game_id: String,
    pub spy_agent: String,
    pub citizen_strength: String,
    pub location: String,
    pub spy_seat: PlayerId,
    pub spy_won: bool,
    pub end_turn: u32,
    /// A guess crossed the threshold and was announced.
    pub guess_attempted: bool,
    pub guess_correct: bool,
    /// Some secret guess (any certainty) matched the location.
    pub noticed: bool,
    /// A citizen utterance literally contained the location.
    pub exposure_occurred: bool,
    pub spy_lost: bool,
    pub spy_caught: bool,
    /// Citizen suspicion ballots (voter, target); the spy's own votes are
    /// excluded.
    pub suspicion_ballots: Vec<(PlayerId, PlayerId)>,
    pub aborted: bool,
}

/// Scans a record once and derives every fact field.
pub fn derive_facts(
    record: &GameRecord,
    deck: &[LocationCard],
    options: &FactsOptions,
) -> Result<GameFacts, FactsError> {
    let header = &record.header;
    let card = deck
        .iter()
        .find(|c| c.name == header.location)
        .ok_or_else(|| FactsError::UnknownLocation(header.location.clone()))?;
    let outcome = record
        .outcome
        .as_ref()
        .map(|o| o.outcome)
        .ok_or(FactsError::Incomplete)?;
    let spy = header.spy_seat;
    let vote_sources = options.vote_sources.unwrap_or(header.config.vote_sources);

    let mut end_turn = 1u32;
    let mut guess_attempted = false;
    let mut guess_correct = false;
    let mut noticed = false;
    let mut exposure_occurred = false;
    let mut suspicion_ballots = Vec::new();
    let mut final_ballots = Vec::new();
    let mut pending_accused: Option<PlayerId> = None;

    for entry in record.events() {
        match &entry.event {
            GameEvent::TurnStart { turn, .. } => end_turn = end_turn.max(*turn),
            GameEvent::SecretGuess { location_text, .. } => {
                noticed |= match_location(location_text, card);
            }
            GameEvent::GuessAnnounced { correct, .. } => {
                guess_attempted = true;
                guess_correct |= *correct;
            }
            GameEvent::Accusation { accused, .. } => pending_accused = Some(*accused),
            GameEvent::DayVoteBallot { voter, agree } => {
                if vote_sources == VoteSources::FinalAndDay && *voter != spy && *agree {
                    if let Some(accused) = pending_accused {
                        suspicion_ballots.push((*voter, accused));
                    }
                }
            }
            GameEvent::FinalVoteBallot { voter, target } => {
                final_ballots.push((*voter, *target));
                if *voter != spy {
                    suspicion_ballots.push((*voter, *target));
                }
            }
            _ => {}
        }
        if let Some((seat, text)) = entry.event.utterance() {
            if seat != spy {
                exposure_occurred |= detect_exposure(text, card);
            }
        }
    }

    let aborted = outcome.cause == EndCause::Aborted;
    let spy_won = outcome.spy_won() && !aborted;
    let spy_lost = !outcome.spy_won() && !aborted;
    let caught_in_day_vote = outcome.cause == EndCause::DayVoteSpyEliminated;
    let caught_in_final_vote = !final_ballots.is_empty()
        && if options.caught_on_shared_max {
            spy_holds_or_shares_max(&final_ballots, spy)
        } else {
            strict_spy_max(&final_ballots, spy)
        };
    let spy_caught = spy_lost && (caught_in_day_vote || caught_in_final_vote);

    Ok(GameFacts {
        game_id: header.game_id.clone(),
        spy_agent: header.spy_agent_id.clone(),
        citizen_strength: header.citizen_strength.clone(),
        location: header.location.clone(),
        spy_seat: spy,
        spy_won,
        end_turn,
        guess_attempted,
        guess_correct,
        noticed,
        exposure_occurred,
        spy_lost,
        spy_caught,
        suspicion_ballots,
        aborted,
    })
}

fn strict_spy_max(final_ballots: &[(PlayerId, PlayerId)], spy: PlayerId) -> bool {
    let mut tally = std::collections::BTreeMap::new();
    for (_, target) in final_ballots {
        *tally.entry(*target).or_insert(0usize) += 1;
    }
    let spy_votes = tally.get(&spy).copied().unwrap_or(0);
    spy_votes > 0
        && tally
            .iter()
            .all(|(seat, count)| *seat == spy || *count < spy_votes)
}
