use serde::{Deserialize, Serialize};

use super::card::LocationCard;
use super::event::{GameEvent, LoggedEvent, PlayerId};
use super::state::{GameState, RequestKind};

/// What one seat is allowed to know about itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum RoleView {
    Spy,
    Citizen {
        location: LocationCard,
        character: String,
    },
}

impl RoleView {
    pub fn is_spy(&self) -> bool {
        matches!(self, RoleView::Spy)
    }
}

/// Everything one seat may see: the public transcript, its own private
/// identity, and the request currently addressed to it (if any).
///
/// Information hiding holds by construction: a citizen's observation never
/// names the spy seat, and the spy's observation carries no location card.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub seat: PlayerId,
    pub num_players: u8,
    pub turn: u32,
    pub leader: PlayerId,
    pub identity: RoleView,
    pub request: Option<RequestKind>,
    pub pending_accusation: Option<(PlayerId, PlayerId)>,
    pub public_transcript: Vec<LoggedEvent>,
    pub game_over: bool,
}

/// Projects the state onto what `player` may see.
///
/// The public transcript excludes secret guesses, other seats' reasoning,
/// and individual ballots while the game is still live (ballots are
/// disclosed only once the game has ended, so suspicion stays independent).
pub fn observation_for(state: &GameState, player: PlayerId) -> Observation {
    let ended = state.is_ended();
    let public_transcript = state
        .transcript()
        .iter()
        .filter(|entry| match &entry.event {
            GameEvent::SecretGuess { .. } => false,
            GameEvent::Reasoning { player: p, .. } => *p == player,
            e if e.is_ballot() => ended,
            _ => true,
        })
        .cloned()
        .collect();

    let identity = if state.assignment().is_spy(player) {
        RoleView::Spy
    } else {
        RoleView::Citizen {
            location: state.assignment().location.clone(),
            character: state
                .assignment()
                .character_of
                .get(&player)
                .expect("citizen seat has a character")
                .clone(),
        }
    };

    let request = match state.expected_actor() {
        Some((seat, kind)) if seat == player => Some(kind),
        _ => None,
    };

    Observation {
        seat: player,
        num_players: state.num_players(),
        turn: state.turn(),
        leader: state.leader(),
        identity,
        request,
        pending_accusation: state.pending_accusation(),
        public_transcript,
        game_over: ended,
    }
}
