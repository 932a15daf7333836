use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::card::{default_deck, LocationCard};

/// Which vote events feed the per-game suspicion-ballot pool used by the
/// vote-based metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum VoteSources {
    FinalOnly,
    #[default]
    FinalAndDay,
}

impl std::fmt::Display for VoteSources {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VoteSources::FinalOnly => write!(f, "final_only"),
            VoteSources::FinalAndDay => write!(f, "final_and_day"),
        }
    }
}

/// Rule parameters for one game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub num_players: u8,
    /// A secret guess at or above this certainty (out of 10) is announced.
    pub certainty_threshold: u8,
    /// The game proceeds to the final vote once this turn completes.
    pub final_turn: u32,
    /// The spy's guess is solicited each turn from this turn on.
    pub guess_start_turn: u32,
    pub location_deck: Vec<LocationCard>,
    pub seed: u64,
    pub vote_sources: VoteSources,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig {
            num_players: 7,
            certainty_threshold: 9,
            final_turn: 9,
            guess_start_turn: 2,
            location_deck: default_deck(),
            seed: 0,
            vote_sources: VoteSources::default(),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("num_players must be at least 3, got {0}")]
    TooFewPlayers(u8),
    #[error("certainty_threshold must be within 0..=10, got {0}")]
    CertaintyThresholdOutOfRange(u8),
    #[error("final_turn ({final_turn}) must be >= guess_start_turn ({guess_start_turn}) >= 2")]
    TurnBoundsInvalid { final_turn: u32, guess_start_turn: u32 },
    #[error(transparent)]
    Card(#[from] super::card::CardError),
}

impl GameConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.num_players < 3 {
            return Err(ConfigError::TooFewPlayers(self.num_players));
        }
        if self.certainty_threshold > 10 {
            return Err(ConfigError::CertaintyThresholdOutOfRange(
                self.certainty_threshold,
            ));
        }
        if self.guess_start_turn < 2 || self.final_turn < self.guess_start_turn {
            return Err(ConfigError::TurnBoundsInvalid {
                final_turn: self.final_turn,
                guess_start_turn: self.guess_start_turn,
            });
        }
        for card in &self.location_deck {
            card.validate(self.num_players as usize)?;
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        GameConfig::default().validate().unwrap();
    }

    #[test]
    fn turn_bounds_enforced() {
        let cfg = GameConfig {
            final_turn: 1,
            guess_start_turn: 2,
            ..GameConfig::default()
        };
        assert!(matches!(
            cfg.validate(),
            Err(ConfigError::TurnBoundsInvalid { .. })
        ));
    }
}
