use super::*;
use crate::game::{LocationCard, LoggedEvent, RoleView};
use crate::metrics::text::detect_exposure;

fn school_card() -> LocationCard {
    crate::game::default_deck()
        .into_iter()
        .find(|c| c.name == "school")
        .unwrap()
}

fn citizen_observation(request: RequestKind) -> Observation {
    Observation {
        seat: PlayerId(1),
        num_players: 7,
        turn: 2,
        leader: PlayerId(0),
        identity: RoleView::Citizen {
            location: school_card(),
            character: "teacher".into(),
        },
        request: Some(request),
        pending_accusation: None,
        public_transcript: vec![],
        game_over: false,
    }
}

fn spy_observation(request: RequestKind, transcript: Vec<LoggedEvent>) -> Observation {
    Observation {
        seat: PlayerId(6),
        num_players: 7,
        turn: 2,
        leader: PlayerId(0),
        identity: RoleView::Spy,
        request: Some(request),
        pending_accusation: None,
        public_transcript: transcript,
        game_over: false,
    }
}

#[test]
fn decision_kind_matches_request() {
    let obs = citizen_observation(RequestKind::DayBallot);
    let mut obs = obs;
    obs.pending_accusation = Some((PlayerId(0), PlayerId(2)));
    let mut agent = make_scripted_citizen(CitizenProfile::strong(), 3);
    let d = agent.decide(&obs, RequestKind::DayBallot).unwrap();
    assert!(matches!(d.action, Action::DayBallot { .. }));

    let obs = citizen_observation(RequestKind::FinalBallot);
    let d = agent.decide(&obs, RequestKind::FinalBallot).unwrap();
    match d.action {
        Action::FinalBallot { target } => assert_ne!(target, obs.seat),
        other => panic!("expected a final ballot, got {other:?}"),
    }
}

// Determinism oracle: two fresh agents with the same seed, same observation.
#[test]
fn same_seed_same_observation_same_decision() {
    let obs = citizen_observation(RequestKind::Answer);
    for seed in [0u64, 7, 1234] {
        let mut a = make_scripted_citizen(CitizenProfile::weak(0.5), seed);
        let mut b = make_scripted_citizen(CitizenProfile::weak(0.5), seed);
        assert_eq!(
            a.decide(&obs, RequestKind::Answer).unwrap(),
            b.decide(&obs, RequestKind::Answer).unwrap()
        );
    }
    let obs = spy_observation(RequestKind::SpyGuess, vec![]);
    let mut a = make_scripted_spy(SpyPolicy::echo(), 9);
    let mut b = make_scripted_spy(SpyPolicy::echo(), 9);
    assert_eq!(
        a.decide(&obs, RequestKind::SpyGuess).unwrap(),
        b.decide(&obs, RequestKind::SpyGuess).unwrap()
    );
}

#[test]
fn oracle_spy_guesses_the_true_location_at_full_certainty() {
    let obs = spy_observation(RequestKind::SpyGuess, vec![]);
    let mut spy = make_scripted_spy(SpyPolicy::oracle(), 0).with_true_location("school");
    let d = spy.decide(&obs, RequestKind::SpyGuess).unwrap();
    assert_eq!(
        d.action,
        Action::SpyGuess {
            location_text: "school".into(),
            certainty: 10
        }
    );
}

#[test]
fn mute_spy_never_crosses_the_threshold() {
    let obs = spy_observation(RequestKind::SpyGuess, vec![]);
    let mut spy = make_scripted_spy(SpyPolicy::mute(), 0);
    for _ in 0..20 {
        match spy.decide(&obs, RequestKind::SpyGuess).unwrap().action {
            Action::SpyGuess { certainty, .. } => assert_eq!(certainty, 0),
            other => panic!("expected a guess, got {other:?}"),
        }
    }
}

#[test]
fn echo_spy_guesses_the_last_word_it_heard() {
    let transcript = vec![
        LoggedEvent {
            seq: 1,
            event: crate::game::GameEvent::Question {
                asker: PlayerId(0),
                target: PlayerId(1),
                text: "what do you do here?".into(),
            },
        },
        LoggedEvent {
            seq: 2,
            event: crate::game::GameEvent::Answer {
                responder: PlayerId(1),
                text: "All my time goes to the school.".into(),
            },
        },
    ];
    let obs = spy_observation(RequestKind::SpyGuess, transcript);
    let mut spy = make_scripted_spy(SpyPolicy::echo(), 0);
    match spy.decide(&obs, RequestKind::SpyGuess).unwrap().action {
        Action::SpyGuess { location_text, certainty } => {
            assert_eq!(location_text, "school");
            assert_eq!(certainty, 0);
        }
        other => panic!("expected a guess, got {other:?}"),
    }
}

#[test]
fn fully_leaky_citizen_names_the_location_in_every_answer() {
    let obs = citizen_observation(RequestKind::Answer);
    let card = school_card();
    let mut agent = make_scripted_citizen(CitizenProfile::weak(1.0), 11);
    for _ in 0..50 {
        match agent.decide(&obs, RequestKind::Answer).unwrap().action {
            Action::Answer { text } => {
                assert!(detect_exposure(&text, &card), "no leak in {text:?}");
            }
            other => panic!("expected an answer, got {other:?}"),
        }
    }
}

#[test]
fn strong_citizen_never_exposes_the_location() {
    let card = school_card();
    let mut agent = make_scripted_citizen(CitizenProfile::strong(), 5);
    for _ in 0..200 {
        let obs = citizen_observation(RequestKind::Answer);
        match agent.decide(&obs, RequestKind::Answer).unwrap().action {
            Action::Answer { text } => {
                assert!(!detect_exposure(&text, &card), "leak in {text:?}");
            }
            other => panic!("expected an answer, got {other:?}"),
        }
        let obs = citizen_observation(RequestKind::LeaderAction);
        match agent.decide(&obs, RequestKind::LeaderAction).unwrap().action {
            Action::AskQuestion { text, .. } => {
                assert!(!detect_exposure(&text, &card), "leak in {text:?}");
            }
            Action::Accuse { target } => assert_ne!(target, obs.seat),
            other => panic!("unexpected action {other:?}"),
        }
    }
}

#[test]
fn strong_profile_forces_leak_probability_to_zero() {
    let profile = CitizenProfile {
        strength: Strength::Strong,
        leak_probability: 0.9,
        accuse_policy: AccusePolicy::default(),
    };
    let obs = citizen_observation(RequestKind::Answer);
    let card = school_card();
    let mut agent = make_scripted_citizen(profile, 21);
    for _ in 0..100 {
        if let Action::Answer { text } = agent.decide(&obs, RequestKind::Answer).unwrap().action {
            assert!(!detect_exposure(&text, &card));
        }
    }
}

// Monte-Carlo oracle for the leak rate.
#[test]
fn weak_citizen_leak_rate_matches_the_profile() {
    let obs = citizen_observation(RequestKind::Answer);
    let card = school_card();
    let mut agent = make_scripted_citizen(CitizenProfile::weak(0.5), 42);
    let trials = 10_000;
    let mut leaks = 0usize;
    for _ in 0..trials {
        if let Action::Answer { text } = agent.decide(&obs, RequestKind::Answer).unwrap().action {
            if detect_exposure(&text, &card) {
                leaks += 1;
            }
        }
    }
    let rate = leaks as f64 / trials as f64;
    assert!((rate - 0.5).abs() <= 0.02, "leak rate {rate}");
}

#[test]
fn citizens_refuse_spy_guess_requests() {
    let obs = citizen_observation(RequestKind::SpyGuess);
    let mut agent = make_scripted_citizen(CitizenProfile::strong(), 0);
    assert!(agent.decide(&obs, RequestKind::SpyGuess).is_err());
}

#[test]
fn scrub_survives_adversarial_cards() {
    // A card whose surface forms collide with ordinary template words.
    let card = LocationCard::new(
        "routine",
        ["position", "day", "days"],
        ["a", "b", "c", "d", "e", "f"],
    );
    let scrubbed = scrub_location("My days as clerk are busier than people assume.", &card);
    assert!(!detect_exposure(&scrubbed, &card));
    assert!(!scrubbed.is_empty());
    let scrubbed = scrub_location("routine position day days", &card);
    assert!(!detect_exposure(&scrubbed, &card));
    assert_eq!(scrubbed, ".");
}
