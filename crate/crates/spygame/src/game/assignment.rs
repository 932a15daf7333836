use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::card::LocationCard;
use super::config::GameConfig;
use super::event::PlayerId;

/// Hidden setup of one game: who the spy is, which character each citizen
/// plays, and who leads the first turn.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub location: LocationCard,
    pub spy_seat: PlayerId,
    /// Citizen seats only; the spy has no entry.
    pub character_of: BTreeMap<PlayerId, String>,
    pub first_leader: PlayerId,
}

#[derive(Debug, Error)]
pub enum DealError {
    #[error("location {name:?} has {have} characters but {need} citizen seats need one each")]
    TooFewCharacters {
        name: String,
        have: usize,
        need: usize,
    },
}

impl Assignment {
    pub fn is_spy(&self, seat: PlayerId) -> bool {
        seat == self.spy_seat
    }

    pub fn validate(&self, config: &GameConfig) -> Result<(), AssignmentError> {
        let n = config.num_players;
        if self.spy_seat.0 >= n {
            return Err(AssignmentError::SeatOutOfRange(self.spy_seat));
        }
        if self.first_leader.0 >= n {
            return Err(AssignmentError::SeatOutOfRange(self.first_leader));
        }
        if self.character_of.contains_key(&self.spy_seat) {
            return Err(AssignmentError::SpyHasCharacter(self.spy_seat));
        }
        let citizens: Vec<PlayerId> = PlayerId::seats(n).filter(|s| !self.is_spy(*s)).collect();
        if self.character_of.len() != citizens.len() {
            return Err(AssignmentError::WrongCitizenCount {
                have: self.character_of.len(),
                need: citizens.len(),
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for seat in citizens {
            match self.character_of.get(&seat) {
                None => return Err(AssignmentError::MissingCharacter(seat)),
                Some(c) => {
                    if !seen.insert(c.clone()) {
                        return Err(AssignmentError::DuplicateCharacter(c.clone()));
                    }
                    if !self.location.characters.contains(c) {
                        return Err(AssignmentError::UnknownCharacter(c.clone()));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum AssignmentError {
    #[error("seat {0} is out of range for this game")]
    SeatOutOfRange(PlayerId),
    #[error("spy seat {0} must not have a character")]
    SpyHasCharacter(PlayerId),
    #[error("assignment has {have} characters for {need} citizen seats")]
    WrongCitizenCount { have: usize, need: usize },
    #[error("citizen seat {0} has no character")]
    MissingCharacter(PlayerId),
    #[error("character {0:?} assigned to more than one seat")]
    DuplicateCharacter(String),
    #[error("character {0:?} is not on the location card")]
    UnknownCharacter(String),
}

/// Deals seats for one game: a uniformly random spy seat, distinct characters
/// drawn without replacement for the citizen seats, and a uniformly random
/// first leader. Fully determined by `rng_seed`.
pub fn deal(
    config: &GameConfig,
    location: &LocationCard,
    rng_seed: u64,
) -> Result<Assignment, DealError> {
    let n = config.num_players;
    let need = n as usize - 1;
    if location.characters.len() < need {
        return Err(DealError::TooFewCharacters {
            name: location.name.clone(),
            have: location.characters.len(),
            need,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let spy_seat = PlayerId(rng.random_range(0..n));
    let first_leader = PlayerId(rng.random_range(0..n));

    let mut pool: Vec<&String> = location.characters.iter().collect();
    pool.shuffle(&mut rng);
    let character_of = PlayerId::seats(n)
        .filter(|s| *s != spy_seat)
        .zip(pool)
        .map(|(seat, c)| (seat, c.clone()))
        .collect();

    Ok(Assignment {
        location: location.clone(),
        spy_seat,
        character_of,
        first_leader,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::card::default_deck;

    fn school() -> LocationCard {
        default_deck().into_iter().find(|c| c.name == "school").unwrap()
    }

    #[test]
    fn deal_assigns_one_spy_and_distinct_characters() {
        let config = GameConfig::default();
        for seed in 0..50u64 {
            let a = deal(&config, &school(), seed).unwrap();
            a.validate(&config).unwrap();
            assert_eq!(a.character_of.len(), 6);
            let distinct: std::collections::BTreeSet<_> = a.character_of.values().collect();
            assert_eq!(distinct.len(), 6);
        }
    }

    #[test]
    fn deal_draws_characters_from_the_card() {
        let config = GameConfig::default();
        let card = school();
        let a = deal(&config, &card, 7).unwrap();
        for c in a.character_of.values() {
            assert!(card.characters.contains(c));
        }
    }

    // Determinism oracle: run twice, compare.
    #[test]
    fn deal_is_deterministic_in_the_seed() {
        let config = GameConfig::default();
        for seed in [0u64, 1, 42, u64::MAX] {
            let a = deal(&config, &school(), seed).unwrap();
            let b = deal(&config, &school(), seed).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn deal_rejects_cards_with_too_few_characters() {
        let config = GameConfig::default();
        let card = LocationCard::new("shed", Vec::<String>::new(), ["gardener"]);
        assert!(matches!(
            deal(&config, &card, 0),
            Err(DealError::TooFewCharacters { .. })
        ));
    }

    #[test]
    fn spy_seat_and_leader_cover_all_seats_across_seeds() {
        let config = GameConfig::default();
        let mut spies = std::collections::BTreeSet::new();
        let mut leaders = std::collections::BTreeSet::new();
        for seed in 0..200u64 {
            let a = deal(&config, &school(), seed).unwrap();
            spies.insert(a.spy_seat);
            leaders.insert(a.first_leader);
        }
        assert_eq!(spies.len(), 7);
        assert_eq!(leaders.len(), 7);
    }
}
