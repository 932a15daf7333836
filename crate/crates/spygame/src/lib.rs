//! A deterministic, replayable implementation of the SpyGame social-deduction
//! environment, with pluggable agents and a metrics engine over event logs.
//!
//! The crate is organized around an event-sourced game core: every game is a
//! sequence of [`game::GameEvent`]s, and folding that sequence through the
//! pure reducer reproduces the terminal [`game::GameState`] exactly. Agents
//! (scripted fixtures or remote chat-completion endpoints) plug in behind a
//! single decision contract; logs are one JSON object per line; metrics and
//! annotation statistics are pure functions over loaded records.

pub mod agents;
pub mod annotation;
pub mod cli;
pub mod game;
pub mod gamelog;
pub mod gateway;
pub mod metrics;
pub mod runner;

pub use game::{
    Assignment, GameConfig, GameEvent, GameState, LocationCard, LoggedEvent, Observation, Outcome,
    PlayerId,
};
