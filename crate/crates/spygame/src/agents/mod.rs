//! The decision contract every player implements, plus deterministic
//! scripted policies used as test fixtures and baseline opponents.

mod scripted;

pub use scripted::{
    make_scripted_citizen, make_scripted_spy, AccusePolicy, CitizenProfile, GuessSource,
    ScriptedCitizen, ScriptedSpy, SpyPolicy, Strength,
};

pub use crate::game::{Action, Decision, Observation, RequestKind};

/// An agent declined to produce a decision (endpoint failure, unparseable
/// output, or an explicit refusal). The runner records the game as aborted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refusal {
    pub reason: String,
}

impl Refusal {
    pub fn new(reason: impl Into<String>) -> Self {
        Refusal {
            reason: reason.into(),
        }
    }
}

impl std::fmt::Display for Refusal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "agent refused: {}", self.reason)
    }
}

/// A seat's decision procedure. Implementations must return a decision legal
/// for the request kind, or an explicit refusal.
pub trait Agent {
    fn decide(
        &mut self,
        observation: &Observation,
        request: RequestKind,
    ) -> Result<Decision, Refusal>;
}
