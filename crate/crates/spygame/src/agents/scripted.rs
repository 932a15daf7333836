//! Scripted players. These are instrumentation, not models of play: the
//! citizen's leak probability and the spy's guess schedule are the knobs
//! tests turn to make metric values analytically predictable.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Agent, Refusal};
use crate::game::{
    Action, Decision, GameEvent, LocationCard, Observation, PlayerId, RequestKind, RoleView,
};
use crate::metrics::text::detect_exposure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strength {
    Strong,
    Weak,
}

impl std::fmt::Display for Strength {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Strength::Strong => write!(f, "strong"),
            Strength::Weak => write!(f, "weak"),
        }
    }
}

/// When and whom a scripted citizen accuses, and how it votes in day votes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccusePolicy {
    /// Accuse the top suspect once its suspicion reaches this level;
    /// `None` means the citizen never accuses.
    pub suspicion_threshold: Option<f64>,
    /// Base probability of agreeing in a day vote when the accused is not
    /// this citizen's top suspect (the citizen always agrees when it is).
    pub agree_probability: f64,
}

impl Default for AccusePolicy {
    fn default() -> Self {
        AccusePolicy {
            suspicion_threshold: Some(1.5),
            agree_probability: 0.5,
        }
    }
}

impl AccusePolicy {
    /// Never accuse, never agree unless the accused is the top suspect.
    pub fn passive() -> Self {
        AccusePolicy {
            suspicion_threshold: None,
            agree_probability: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CitizenProfile {
    pub strength: Strength,
    /// Per-answer probability of literally naming the location (weak only;
    /// forced to zero for strong citizens).
    pub leak_probability: f64,
    pub accuse_policy: AccusePolicy,
}

impl CitizenProfile {
    pub fn strong() -> Self {
        CitizenProfile {
            strength: Strength::Strong,
            leak_probability: 0.0,
            accuse_policy: AccusePolicy::default(),
        }
    }

    pub fn weak(leak_probability: f64) -> Self {
        CitizenProfile {
            strength: Strength::Weak,
            leak_probability,
            accuse_policy: AccusePolicy::default(),
        }
    }

    fn normalized(mut self) -> Self {
        if self.strength == Strength::Strong {
            self.leak_probability = 0.0;
        }
        self.leak_probability = self.leak_probability.clamp(0.0, 1.0);
        self
    }
}

/// Where a scripted spy's guess text comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GuessSource {
    /// The dealt location, injected by the runner (fixture-only knowledge).
    TrueLocation,
    Fixed(String),
    /// The last word of the most recent public utterance.
    LastHeardToken,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpyPolicy {
    /// Per-turn overrides; any turn not listed uses `fallback`.
    pub guess_schedule: BTreeMap<u32, (GuessSource, u8)>,
    pub fallback: (GuessSource, u8),
    /// Probability of agreeing in a day vote it participates in.
    pub agree_probability: f64,
}

impl SpyPolicy {
    /// Knows the location and announces immediately: wins every game by
    /// guess at the first opportunity.
    pub fn oracle() -> Self {
        SpyPolicy {
            guess_schedule: BTreeMap::new(),
            fallback: (GuessSource::TrueLocation, 10),
            agree_probability: 1.0,
        }
    }

    /// Never crosses the announcement threshold and never matches the
    /// location: the game always runs its full course.
    pub fn mute() -> Self {
        SpyPolicy {
            guess_schedule: BTreeMap::new(),
            fallback: (GuessSource::Fixed("unknown".into()), 0),
            agree_probability: 1.0,
        }
    }

    /// Quietly guesses the last word it heard each turn; notices leaks but
    /// never announces.
    pub fn echo() -> Self {
        SpyPolicy {
            guess_schedule: BTreeMap::new(),
            fallback: (GuessSource::LastHeardToken, 0),
            agree_probability: 1.0,
        }
    }

    /// Announces the last word it heard at the first opportunity, right or
    /// wrong.
    pub fn parrot() -> Self {
        SpyPolicy {
            guess_schedule: BTreeMap::new(),
            fallback: (GuessSource::LastHeardToken, 10),
            agree_probability: 1.0,
        }
    }
}

const QUESTION_TEMPLATES: &[&str] = &[
    "What's the first thing you notice when you arrive?",
    "How do you usually pass a slow stretch of the day?",
    "Who do you end up talking to the most?",
    "What would you change about this place if you could?",
    "What does a really bad day look like for you?",
];

const CITIZEN_ANSWER_TEMPLATES: &[&str] = &[
    "As the {character}, I mostly keep to my usual routine.",
    "Someone in my position notices the small things, so I stay alert.",
    "My days as {character} are busier than people assume.",
    "I take my duties as {character} seriously, even the dull parts.",
];

const LEAK_ANSWER_TEMPLATES: &[&str] = &[
    "Honestly, most of my time goes to keeping things running at the {location}",
    "You hear everything when you spend your whole day at the {location}",
    "Between us, there is never a quiet hour at the {location}",
];

const SPY_ANSWER_TEMPLATES: &[&str] = &[
    "Hard to say, it really depends on the day.",
    "I try not to overthink it and just do my part.",
    "Nothing unusual comes to mind, same as anyone else here.",
    "I keep my head down and get on with it.",
];

/// Removes every whole-word occurrence of the card's surface forms until the
/// text can no longer expose the location. Falls back to "." if nothing
/// survives.
fn scrub_location(text: &str, card: &LocationCard) -> String {
    let mut out = text.to_string();
    let mut guard = 0;
    while detect_exposure(&out, card) && guard < 16 {
        for form in card.surface_forms() {
            out = remove_whole_word(&out, form);
        }
        guard += 1;
    }
    let out = out.split_whitespace().collect::<Vec<_>>().join(" ");
    if out.is_empty() {
        ".".to_string()
    } else {
        out
    }
}

fn remove_whole_word(haystack: &str, needle: &str) -> String {
    let needle_lower = needle.to_lowercase();
    let needle_words: Vec<&str> = needle_lower.split_whitespace().collect();
    if needle_words.is_empty() {
        return haystack.to_string();
    }
    // Split into word/non-word runs, keeping separators.
    let mut tokens: Vec<(bool, String)> = Vec::new();
    for c in haystack.chars() {
        let word = c.is_alphanumeric();
        match tokens.last_mut() {
            Some((w, s)) if *w == word => s.push(c),
            _ => tokens.push((word, c.to_string())),
        }
    }
    let word_positions: Vec<usize> = tokens
        .iter()
        .enumerate()
        .filter(|(_, (w, _))| *w)
        .map(|(i, _)| i)
        .collect();
    let mut drop = vec![false; tokens.len()];
    let mut wi = 0;
    while wi + needle_words.len() <= word_positions.len() {
        let matches = (0..needle_words.len())
            .all(|k| tokens[word_positions[wi + k]].1.to_lowercase() == needle_words[k]);
        if matches {
            for k in 0..needle_words.len() {
                drop[word_positions[wi + k]] = true;
            }
            wi += needle_words.len();
        } else {
            wi += 1;
        }
    }
    tokens
        .into_iter()
        .enumerate()
        .filter(|(i, _)| !drop[*i])
        .map(|(_, (_, s))| s)
        .collect()
}

/// Suspicion bookkeeping shared by scripted citizens and spies:
/// rng-seeded priors, bumped by public accusation activity.
#[derive(Debug, Clone)]
struct Suspicion {
    scores: Vec<f64>,
    last_seen_seq: u64,
}

impl Suspicion {
    fn new(rng: &mut ChaCha8Rng, num_players: u8, own_seat: PlayerId) -> Self {
        let scores = (0..num_players)
            .map(|s| {
                if PlayerId(s) == own_seat {
                    f64::NEG_INFINITY
                } else {
                    rng.random::<f64>()
                }
            })
            .collect();
        Suspicion {
            scores,
            last_seen_seq: 0,
        }
    }

    fn update(&mut self, observation: &Observation) {
        let events = &observation.public_transcript;
        for (idx, entry) in events.iter().enumerate() {
            if entry.seq <= self.last_seen_seq {
                continue;
            }
            match &entry.event {
                GameEvent::Accusation { accused, .. } => {
                    if accused.index() < self.scores.len() {
                        self.scores[accused.index()] += 0.3;
                    }
                }
                GameEvent::DayVoteResult { unanimous: false } => {
                    // A failed accusation reflects on the accuser.
                    let accuser = events[..idx].iter().rev().find_map(|e| match &e.event {
                        GameEvent::Accusation { accuser, .. } => Some(*accuser),
                        _ => None,
                    });
                    if let Some(accuser) = accuser {
                        if accuser.index() < self.scores.len() {
                            self.scores[accuser.index()] += 0.2;
                        }
                    }
                }
                _ => {}
            }
            self.last_seen_seq = entry.seq;
        }
    }

    fn top_suspect(&self) -> PlayerId {
        let mut best = 0usize;
        for i in 1..self.scores.len() {
            if self.scores[i] > self.scores[best] {
                best = i;
            }
        }
        PlayerId(best as u8)
    }

    fn max_score(&self) -> f64 {
        self.scores[self.top_suspect().index()]
    }
}

/// Seat that has answered the fewest questions so far, own seat excluded.
fn least_questioned_seat(observation: &Observation) -> PlayerId {
    let n = observation.num_players;
    let mut asked = vec![0usize; n as usize];
    for entry in &observation.public_transcript {
        if let GameEvent::Question { target, .. } = &entry.event {
            asked[target.index()] += 1;
        }
    }
    PlayerId::seats(n)
        .filter(|s| *s != observation.seat)
        .min_by_key(|s| (asked[s.index()], s.0))
        .expect("at least two seats")
}

fn last_heard_token(observation: &Observation) -> String {
    observation
        .public_transcript
        .iter()
        .rev()
        .find_map(|e| e.event.utterance())
        .and_then(|(_, text)| {
            text.split(|c: char| !c.is_alphanumeric())
                .filter(|w| !w.is_empty())
                .next_back()
                .map(|w| w.to_lowercase())
        })
        .unwrap_or_else(|| "unknown".to_string())
}

pub struct ScriptedCitizen {
    profile: CitizenProfile,
    rng: ChaCha8Rng,
    suspicion: Option<Suspicion>,
}

/// Builds a deterministic scripted citizen. Strong citizens never utter the
/// location name or any alias; weak citizens leak the canonical name inside
/// an answer with the profile's per-answer probability.
pub fn make_scripted_citizen(profile: CitizenProfile, seed: u64) -> ScriptedCitizen {
    ScriptedCitizen {
        profile: profile.normalized(),
        rng: ChaCha8Rng::seed_from_u64(seed),
        suspicion: None,
    }
}

impl ScriptedCitizen {
    fn card<'a>(&self, observation: &'a Observation) -> Result<&'a LocationCard, Refusal> {
        match &observation.identity {
            RoleView::Citizen { location, .. } => Ok(location),
            RoleView::Spy => Err(Refusal::new("citizen agent seated as the spy")),
        }
    }

    fn character(observation: &Observation) -> &str {
        match &observation.identity {
            RoleView::Citizen { character, .. } => character,
            RoleView::Spy => "",
        }
    }

    fn pick<'a>(&mut self, bank: &[&'a str]) -> &'a str {
        bank[self.rng.random_range(0..bank.len())]
    }
}

impl Agent for ScriptedCitizen {
    fn decide(
        &mut self,
        observation: &Observation,
        request: RequestKind,
    ) -> Result<Decision, Refusal> {
        let card = self.card(observation)?.clone();
        let suspicion = self.suspicion.get_or_insert_with(|| {
            Suspicion::new(&mut self.rng, observation.num_players, observation.seat)
        });
        suspicion.update(observation);
        let top = suspicion.top_suspect();
        let max_score = suspicion.max_score();

        match request {
            RequestKind::LeaderAction => {
                let accuse = self
                    .profile
                    .accuse_policy
                    .suspicion_threshold
                    .is_some_and(|t| max_score >= t);
                if accuse {
                    Ok(Decision {
                        reasoning: vec![
                            format!("{top} has drawn the most suspicion so far."),
                            "An accusation is worth the risk now.".to_string(),
                        ],
                        action: Action::Accuse { target: top },
                    })
                } else {
                    let target = least_questioned_seat(observation);
                    let text = scrub_location(self.pick(QUESTION_TEMPLATES), &card);
                    Ok(Decision {
                        reasoning: vec![format!("{target} has said the least; probing them.")],
                        action: Action::AskQuestion { target, text },
                    })
                }
            }
            RequestKind::Answer => {
                let leak = self.profile.leak_probability > 0.0
                    && self.rng.random::<f64>() < self.profile.leak_probability;
                let text = if leak {
                    let template = self.pick(LEAK_ANSWER_TEMPLATES);
                    format!("{}.", template.replace("{location}", &card.name))
                } else {
                    let template = self.pick(CITIZEN_ANSWER_TEMPLATES);
                    scrub_location(
                        &template.replace("{character}", Self::character(observation)),
                        &card,
                    )
                };
                Ok(Decision {
                    reasoning: vec!["Answering in character without giving too much away.".into()],
                    action: Action::Answer { text },
                })
            }
            RequestKind::DayBallot => {
                let accused = observation.pending_accusation.map(|(_, a)| a);
                let agree = accused == Some(top)
                    || self.rng.random::<f64>() < self.profile.accuse_policy.agree_probability;
                Ok(Decision {
                    reasoning: vec!["Weighing the accusation against my own suspicions.".into()],
                    action: Action::DayBallot { agree },
                })
            }
            RequestKind::FinalBallot => Ok(Decision {
                reasoning: vec![format!("{top} remains my most suspicious player.")],
                action: Action::FinalBallot { target: top },
            }),
            RequestKind::SpyGuess => Err(Refusal::new("citizens are never asked to guess")),
        }
    }
}

pub struct ScriptedSpy {
    policy: SpyPolicy,
    rng: ChaCha8Rng,
    suspicion: Option<Suspicion>,
    true_location: Option<String>,
}

/// Builds a deterministic scripted spy that follows its guess schedule
/// exactly, never accuses, and blends via template answers.
pub fn make_scripted_spy(policy: SpyPolicy, seed: u64) -> ScriptedSpy {
    ScriptedSpy {
        policy,
        rng: ChaCha8Rng::seed_from_u64(seed),
        suspicion: None,
        true_location: None,
    }
}

impl ScriptedSpy {
    /// Fixture-only side channel: lets the runner or a test hand the dealt
    /// location to a `TrueLocation` guess schedule.
    pub fn with_true_location(mut self, name: impl Into<String>) -> Self {
        self.true_location = Some(name.into());
        self
    }

    fn pick<'a>(&mut self, bank: &[&'a str]) -> &'a str {
        bank[self.rng.random_range(0..bank.len())]
    }

    fn guess_for_turn(&mut self, observation: &Observation) -> (String, u8) {
        let (source, certainty) = self
            .policy
            .guess_schedule
            .get(&observation.turn)
            .cloned()
            .unwrap_or_else(|| self.policy.fallback.clone());
        let text = match source {
            GuessSource::TrueLocation => self
                .true_location
                .clone()
                .unwrap_or_else(|| "unknown".to_string()),
            GuessSource::Fixed(text) => text,
            GuessSource::LastHeardToken => last_heard_token(observation),
        };
        (text, certainty)
    }
}

impl Agent for ScriptedSpy {
    fn decide(
        &mut self,
        observation: &Observation,
        request: RequestKind,
    ) -> Result<Decision, Refusal> {
        let suspicion = self.suspicion.get_or_insert_with(|| {
            Suspicion::new(&mut self.rng, observation.num_players, observation.seat)
        });
        suspicion.update(observation);
        let top = suspicion.top_suspect();

        match request {
            RequestKind::LeaderAction => {
                let target = least_questioned_seat(observation);
                let text = self.pick(QUESTION_TEMPLATES).to_string();
                Ok(Decision {
                    reasoning: vec!["Asking something safe that fits any place.".into()],
                    action: Action::AskQuestion { target, text },
                })
            }
            RequestKind::Answer => {
                let text = self.pick(SPY_ANSWER_TEMPLATES).to_string();
                Ok(Decision {
                    reasoning: vec!["Keeping the answer vague enough to fit anywhere.".into()],
                    action: Action::Answer { text },
                })
            }
            RequestKind::DayBallot => {
                let agree = self.rng.random::<f64>() < self.policy.agree_probability;
                Ok(Decision {
                    reasoning: vec!["Any elimination of a citizen works in my favor.".into()],
                    action: Action::DayBallot { agree },
                })
            }
            RequestKind::SpyGuess => {
                let (location_text, certainty) = self.guess_for_turn(observation);
                let mut reasoning = vec!["Piecing together what the others let slip.".into()];
                if certainty >= 9 {
                    reasoning.push("Confident enough to stake the game on it.".into());
                }
                Ok(Decision {
                    reasoning,
                    action: Action::SpyGuess {
                        location_text,
                        certainty,
                    },
                })
            }
            RequestKind::FinalBallot => Ok(Decision {
                reasoning: vec![format!("Directing suspicion toward {top}.")],
                action: Action::FinalBallot { target: top },
            }),
        }
    }
}

#[cfg(test)]
#[path = "scripted_tests.rs"]
mod tests;
