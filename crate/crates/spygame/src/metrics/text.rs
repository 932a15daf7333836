//! Location-text matching: guess correctness and exposure detection.

use crate::game::LocationCard;

/// Lowercases, strips punctuation, collapses whitespace, and drops one
/// leading article so that "An Airplane." compares equal to "airplane".
fn normalize_guess(text: &str) -> String {
    let cleaned: String = text
        .chars()
        .map(|c| {
            if c.is_alphanumeric() {
                c.to_lowercase().next().unwrap_or(c)
            } else {
                ' '
            }
        })
        .collect();
    let mut words: Vec<&str> = cleaned.split_whitespace().collect();
    if words.len() > 1 && matches!(words[0], "a" | "an" | "the") {
        words.remove(0);
    }
    words.join(" ")
}

/// Does the guess name the hidden location? Case-insensitive, tolerant of
/// surrounding punctuation and a leading article, matched against the
/// canonical name and every alias.
pub fn match_location(guess_text: &str, card: &LocationCard) -> bool {
    let guess = normalize_guess(guess_text);
    if guess.is_empty() {
        return false;
    }
    card.surface_forms().any(|form| normalize_guess(form) == guess)
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

/// Whole-word, case-insensitive search for `needle` inside `haystack`.
/// Multi-word needles match across whitespace/punctuation boundaries.
fn contains_whole_word(haystack: &str, needle: &str) -> bool {
    let hay: Vec<char> = haystack.to_lowercase().chars().collect();
    let needle_words: Vec<Vec<char>> = needle
        .to_lowercase()
        .split_whitespace()
        .map(|w| w.chars().collect())
        .collect();
    if needle_words.is_empty() {
        return false;
    }

    // Tokenize the haystack into words with positions, then look for the
    // needle's word sequence as a contiguous run.
    let mut words: Vec<Vec<char>> = Vec::new();
    let mut current = Vec::new();
    for &c in &hay {
        if is_word_char(c) {
            current.push(c);
        } else if !current.is_empty() {
            words.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        words.push(current);
    }

    words
        .windows(needle_words.len())
        .any(|run| run == needle_words.as_slice())
}

/// True when the utterance literally contains the hidden location: the
/// canonical name or any alias as a case-insensitive whole-word match.
pub fn detect_exposure(utterance_text: &str, card: &LocationCard) -> bool {
    card.surface_forms()
        .any(|form| contains_whole_word(utterance_text, form))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn card(name: &str, aliases: &[&str]) -> LocationCard {
        LocationCard::new(
            name,
            aliases.iter().copied(),
            ["a", "b", "c", "d", "e", "f"],
        )
    }

    #[test]
    fn guess_matching_normalizes_articles_case_punctuation() {
        let c = card("airplane", &[]);
        assert!(match_location("An Airplane.", &c));
        assert!(match_location("airplane", &c));
        assert!(match_location("  THE AIRPLANE!  ", &c));
        assert!(!match_location("airport", &c));
        assert!(!match_location("", &c));
    }

    #[test]
    fn guess_matching_uses_aliases() {
        let c = card("school", &["schools"]);
        assert!(match_location("schools", &c));
        assert!(match_location("A school", &c));
        assert!(!match_location("schoolyard", &c));
    }

    #[test]
    fn multi_word_guesses() {
        let c = card("supermarket", &["grocery store"]);
        assert!(match_location("a grocery store", &c));
        assert!(match_location("Grocery  Store", &c));
        assert!(!match_location("grocery", &c));
    }

    #[test]
    fn exposure_is_whole_word() {
        let c = card("airplane", &[]);
        assert!(detect_exposure(
            "What is the maximum speed of an airplane in an emergency situation?",
            &c
        ));
        assert!(detect_exposure("AIRPLANE food is bad", &c));
        assert!(!detect_exposure("I collect airplanes", &c));
        let school = card("school", &["schools"]);
        assert!(!detect_exposure("the schoolyard was empty", &school));
        assert!(detect_exposure("schools are noisy", &school));
        assert!(!detect_exposure("preschool is different", &school));
    }

    #[test]
    fn exposure_negative_on_unrelated_text() {
        let c = card("restaurant", &[]);
        assert!(!detect_exposure("The ambiance here is lovely", &c));
    }

    #[test]
    fn exposure_matches_multi_word_alias_across_punctuation() {
        let c = card("supermarket", &["grocery store"]);
        assert!(detect_exposure("I was at the grocery store yesterday", &c));
        assert!(detect_exposure("grocery, store", &c));
        assert!(!detect_exposure("the grocery was closed", &c));
    }
}
