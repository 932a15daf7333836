//! The nine gameplay metrics, the exposure detector, and report assembly.
//!
//! Every metric is a pure function of [`GameFacts`]; record order never
//! changes a value. Ratio metrics return `None` when their denominator is
//! empty, which reports render as a dash.

mod facts;
mod report;
pub mod text;

pub use facts::{derive_facts, FactsError, FactsOptions, GameFacts};
pub use report::{build_report, GroupKey, MetricReport, MetricsRow, ReportOptions};
pub use text::{detect_exposure, match_location};

fn percentage(numerator: usize, denominator: usize) -> Option<f64> {
    if denominator == 0 {
        None
    } else {
        Some(100.0 * numerator as f64 / denominator as f64)
    }
}

/// WR: percentage of games won by the spy.
pub fn win_rate(facts: &[GameFacts]) -> Option<f64> {
    percentage(facts.iter().filter(|f| f.spy_won).count(), facts.len())
}

/// LR: mean turn number at which games ended.
pub fn living_round(facts: &[GameFacts]) -> Option<f64> {
    if facts.is_empty() {
        return None;
    }
    Some(facts.iter().map(|f| f.end_turn as f64).sum::<f64>() / facts.len() as f64)
}

/// GS: share of announced guesses that were correct, over games where a
/// guess was attempted. Returns the value and the attempt count.
pub fn guess_success(facts: &[GameFacts]) -> (Option<f64>, usize) {
    let attempted = facts.iter().filter(|f| f.guess_attempted).count();
    let correct = facts
        .iter()
        .filter(|f| f.guess_attempted && f.guess_correct)
        .count();
    (percentage(correct, attempted), attempted)
}

/// NR: share of games where some secret guess matched the location,
/// regardless of whether the spy chose to announce.
pub fn notice_rate(facts: &[GameFacts]) -> Option<f64> {
    percentage(facts.iter().filter(|f| f.noticed).count(), facts.len())
}

/// IC: share of exposure games the spy converted into a correct guess.
pub fn information_catching(facts: &[GameFacts]) -> (Option<f64>, usize) {
    let exposed = facts.iter().filter(|f| f.exposure_occurred).count();
    let won = facts
        .iter()
        .filter(|f| f.exposure_occurred && f.guess_correct)
        .count();
    (percentage(won, exposed), exposed)
}

/// ID: share of exposure-free games the spy still guessed correctly.
pub fn information_deduction(facts: &[GameFacts]) -> (Option<f64>, usize) {
    let unexposed = facts.iter().filter(|f| !f.exposure_occurred).count();
    let won = facts
        .iter()
        .filter(|f| !f.exposure_occurred && f.guess_correct)
        .count();
    (percentage(won, unexposed), unexposed)
}

/// CR: share of lost games in which the spy was caught.
pub fn caught_rate(facts: &[GameFacts]) -> (Option<f64>, usize) {
    let lost = facts.iter().filter(|f| f.spy_lost).count();
    let caught = facts.iter().filter(|f| f.spy_caught).count();
    (percentage(caught, lost), lost)
}

/// VR: share of citizen suspicion ballots that targeted the spy, pooled
/// across the set. Returns the value and the ballot count.
pub fn vote_rate(facts: &[GameFacts]) -> (Option<f64>, usize) {
    let mut total = 0usize;
    let mut on_spy = 0usize;
    for f in facts {
        for (_, target) in &f.suspicion_ballots {
            total += 1;
            if *target == f.spy_seat {
                on_spy += 1;
            }
        }
    }
    (percentage(on_spy, total), total)
}

/// Shannon entropy (natural log) of one game's suspicion-target counts.
pub fn ballot_entropy(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total as f64;
            -p * p.ln()
        })
        .sum()
}

/// VE: mean per-game entropy of suspicion-ballot targets, over games with
/// at least one qualifying ballot.
pub fn vote_entropy(facts: &[GameFacts]) -> Option<f64> {
    let mut entropies = Vec::new();
    for f in facts {
        if f.suspicion_ballots.is_empty() {
            continue;
        }
        let mut counts = std::collections::BTreeMap::new();
        for (_, target) in &f.suspicion_ballots {
            *counts.entry(*target).or_insert(0usize) += 1;
        }
        let counts: Vec<usize> = counts.into_values().collect();
        entropies.push(ballot_entropy(&counts));
    }
    if entropies.is_empty() {
        None
    } else {
        Some(entropies.iter().sum::<f64>() / entropies.len() as f64)
    }
}

#[cfg(test)]
#[path = "metrics_tests.rs"]
mod tests;
