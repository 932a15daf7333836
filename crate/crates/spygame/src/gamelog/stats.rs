//! Corpus statistics over collected logs: mean turns, reasoning steps,
//! utterances, and words per utterance, per matchup and overall.

use std::collections::BTreeMap;

use crate::game::GameEvent;

use super::{GameRecord, LogError};

#[derive(Debug, Clone, PartialEq)]
pub struct GroupStats {
    pub games: usize,
    pub mean_turns: f64,
    pub mean_reasoning_steps: f64,
    pub mean_utterances: f64,
    pub mean_words_per_utterance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    /// Rows keyed by matchup (citizen strength), in key order.
    pub groups: Vec<(String, GroupStats)>,
    pub overall: GroupStats,
}

#[derive(Debug, Clone, Copy, Default)]
struct PerGame {
    turns: u32,
    reasoning_steps: usize,
    utterances: usize,
    words: usize,
}

impl PerGame {
    fn words_per_utterance(&self) -> f64 {
        if self.utterances == 0 {
            0.0
        } else {
            self.words as f64 / self.utterances as f64
        }
    }
}

fn scan(record: &GameRecord) -> PerGame {
    let mut g = PerGame {
        turns: 1,
        ..PerGame::default()
    };
    for entry in record.events() {
        match &entry.event {
            GameEvent::TurnStart { turn, .. } => g.turns = (*turn).max(g.turns),
            GameEvent::Reasoning { .. } => g.reasoning_steps += 1,
            GameEvent::Question { text, .. } => {
                g.utterances += 1;
                g.words += text.split_whitespace().count();
            }
            GameEvent::Answer { text, .. } => {
                g.utterances += 1;
                g.words += text.split_whitespace().count();
            }
            _ => {}
        }
    }
    g
}

fn mean_of(games: &[PerGame]) -> GroupStats {
    let n = games.len() as f64;
    GroupStats {
        games: games.len(),
        mean_turns: games.iter().map(|g| g.turns as f64).sum::<f64>() / n,
        mean_reasoning_steps: games.iter().map(|g| g.reasoning_steps as f64).sum::<f64>() / n,
        mean_utterances: games.iter().map(|g| g.utterances as f64).sum::<f64>() / n,
        mean_words_per_utterance: games.iter().map(|g| g.words_per_utterance()).sum::<f64>() / n,
    }
}

/// Computes per-matchup and overall averages. Turns are the terminal turn
/// number; words are whitespace-delimited tokens; the overall row is the
/// game-weighted mean of the groups.
pub fn corpus_stats(records: &[GameRecord]) -> Result<CorpusStats, LogError> {
    if records.is_empty() {
        return Err(LogError::EmptyCorpus);
    }
    let mut by_group: BTreeMap<String, Vec<PerGame>> = BTreeMap::new();
    let mut all = Vec::with_capacity(records.len());
    for record in records {
        let g = scan(record);
        by_group
            .entry(format!("vs {}", record.header.citizen_strength))
            .or_default()
            .push(g);
        all.push(g);
    }
    Ok(CorpusStats {
        groups: by_group
            .into_iter()
            .map(|(key, games)| (key, mean_of(&games)))
            .collect(),
        overall: mean_of(&all),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn per_game_words_per_utterance() {
        let g = PerGame {
            turns: 4,
            reasoning_steps: 3,
            utterances: 2,
            words: 8,
        };
        assert_eq!(g.words_per_utterance(), 4.0);
        assert_eq!(PerGame::default().words_per_utterance(), 0.0);
    }
}
