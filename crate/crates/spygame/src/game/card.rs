use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A hidden-location definition: canonical name, surface aliases (plural
/// forms and common variants), and the characters citizens can play there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocationCard {
    pub name: String,
    #[serde(default)]
    pub aliases: Vec<String>,
    pub characters: Vec<String>,
}

#[derive(Debug, Error, PartialEq)]
pub enum CardError {
    #[error("location card has an empty name")]
    EmptyName,
    #[error("location card {name:?} lists its own name as an alias")]
    NameInAliases { name: String },
    #[error("location card {name:?} has duplicate characters")]
    DuplicateCharacters { name: String },
    #[error("location card {name:?} has {have} characters, needs at least {need}")]
    TooFewCharacters {
        name: String,
        have: usize,
        need: usize,
    },
}

impl LocationCard {
    pub fn new(
        name: impl Into<String>,
        aliases: impl IntoIterator<Item = impl Into<String>>,
        characters: impl IntoIterator<Item = impl Into<String>>,
    ) -> Self {
        LocationCard {
            name: name.into(),
            aliases: aliases.into_iter().map(Into::into).collect(),
            characters: characters.into_iter().map(Into::into).collect(),
        }
    }

    /// Checks the card's structural invariants for a game of `num_players`.
    pub fn validate(&self, num_players: usize) -> Result<(), CardError> {
        if self.name.trim().is_empty() {
            return Err(CardError::EmptyName);
        }
        if self.aliases.iter().any(|a| a == &self.name) {
            return Err(CardError::NameInAliases {
                name: self.name.clone(),
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for c in &self.characters {
            if !seen.insert(c) {
                return Err(CardError::DuplicateCharacters {
                    name: self.name.clone(),
                });
            }
        }
        let need = num_players.saturating_sub(1);
        if self.characters.len() < need {
            return Err(CardError::TooFewCharacters {
                name: self.name.clone(),
                have: self.characters.len(),
                need,
            });
        }
        Ok(())
    }

    /// Canonical name plus all aliases, for matching and leak detection.
    pub fn surface_forms(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.name.as_str()).chain(self.aliases.iter().map(String::as_str))
    }
}

/// The seven-location deck shipped with the default experiment config.
pub fn default_deck() -> Vec<LocationCard> {
    vec![
        LocationCard::new(
            "school",
            ["schools"],
            [
                "student",
                "principal",
                "teacher",
                "janitor",
                "librarian",
                "coach",
                "lunch lady",
            ],
        ),
        LocationCard::new(
            "airplane",
            ["airplanes", "plane", "planes", "aeroplane"],
            [
                "pilot",
                "co-pilot",
                "flight attendant",
                "first-class passenger",
                "air marshal",
                "tourist",
                "mechanic",
            ],
        ),
        LocationCard::new(
            "restaurant",
            ["restaurants"],
            [
                "chef",
                "waiter",
                "sommelier",
                "dishwasher",
                "host",
                "food critic",
                "busboy",
            ],
        ),
        LocationCard::new(
            "hospital",
            ["hospitals"],
            [
                "surgeon",
                "nurse",
                "patient",
                "paramedic",
                "receptionist",
                "pharmacist",
                "anesthesiologist",
            ],
        ),
        LocationCard::new(
            "beach",
            ["beaches"],
            [
                "lifeguard",
                "surfer",
                "ice cream vendor",
                "sunbather",
                "fisherman",
                "photographer",
                "kite flyer",
            ],
        ),
        LocationCard::new(
            "casino",
            ["casinos"],
            [
                "dealer",
                "bouncer",
                "gambler",
                "bartender",
                "pit boss",
                "slot technician",
                "security guard",
            ],
        ),
        LocationCard::new(
            "supermarket",
            ["supermarkets", "grocery store", "grocery stores"],
            [
                "cashier",
                "butcher",
                "shelf stocker",
                "store manager",
                "delivery driver",
                "customer",
                "florist",
            ],
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_deck_is_valid_for_seven_players() {
        let deck = default_deck();
        assert_eq!(deck.len(), 7);
        for card in &deck {
            card.validate(7).unwrap();
            assert!(card.characters.len() >= 6);
        }
    }

    #[test]
    fn too_few_characters_rejected() {
        let card = LocationCard::new("shed", Vec::<String>::new(), ["gardener", "rake"]);
        assert!(matches!(
            card.validate(7),
            Err(CardError::TooFewCharacters { need: 6, have: 2, .. })
        ));
    }

    #[test]
    fn name_duplicated_in_aliases_rejected() {
        let card = LocationCard::new("pier", ["pier"], ["a", "b", "c", "d", "e", "f"]);
        assert!(matches!(card.validate(7), Err(CardError::NameInAliases { .. })));
    }
}
