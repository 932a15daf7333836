//! Game rules: seat/role assignment, the turn state machine, win conditions,
//! and per-seat information hiding.

mod assignment;
mod card;
mod config;
mod event;
mod observation;
mod state;
#[cfg(test)]
#[path = "state_tests.rs"]
mod state_tests;

pub use assignment::{deal, Assignment, AssignmentError, DealError};
pub use card::{default_deck, CardError, LocationCard};
pub use config::{ConfigError, GameConfig, VoteSources};
pub use event::{EndCause, GameEvent, LoggedEvent, Outcome, PlayerId, Winner};
pub use observation::{observation_for, Observation, RoleView};
pub use state::{
    decide_winner, init_game, spy_holds_or_shares_max, Action, ApplyError, Decision, GameState,
    Phase, RequestKind, RuleError,
};
