use std::collections::BTreeMap;

use super::*;
use crate::game::{
    deal, default_deck, init_game, observation_for, Action, Assignment, Decision, EndCause,
    GameConfig, GameEvent, GameState, Phase, PlayerId, RequestKind, RuleError, Winner,
};

fn school_config() -> GameConfig {
    GameConfig::default()
}

/// Spy at seat 6, leader at seat 0, characters assigned in card order.
fn fixed_assignment(config: &GameConfig) -> Assignment {
    let location = config.location_deck[0].clone();
    let mut character_of = BTreeMap::new();
    for (i, seat) in PlayerId::seats(config.num_players)
        .filter(|s| s.0 != 6)
        .enumerate()
    {
        character_of.insert(seat, location.characters[i].clone());
    }
    Assignment {
        location,
        spy_seat: PlayerId(6),
        character_of,
        first_leader: PlayerId(0),
    }
}

fn new_game() -> GameState {
    let config = school_config();
    let assignment = fixed_assignment(&config);
    init_game(config, assignment).unwrap()
}

fn ask(state: &GameState, asker: u8, target: u8) -> GameState {
    let (next, _) = state
        .advance(
            PlayerId(asker),
            &Decision::of(Action::AskQuestion {
                target: PlayerId(target),
                text: format!("asking Player{}", target + 1),
            }),
        )
        .unwrap();
    next
}

fn answer(state: &GameState, responder: u8) -> GameState {
    let (next, _) = state
        .advance(
            PlayerId(responder),
            &Decision::of(Action::Answer {
                text: "a perfectly ordinary reply".into(),
            }),
        )
        .unwrap();
    next
}

fn guess(state: &GameState, text: &str, certainty: u8) -> GameState {
    let spy = state.spy_seat();
    let (next, _) = state
        .advance(
            spy,
            &Decision::of(Action::SpyGuess {
                location_text: text.into(),
                certainty,
            }),
        )
        .unwrap();
    next
}

/// Plays turn 1 (leader asks, target answers); no guess is due yet.
fn play_turn_one(state: GameState) -> GameState {
    let s = ask(&state, 0, 1);
    answer(&s, 1)
}

#[test]
fn init_starts_at_turn_one_with_empty_transcript() {
    let game = new_game();
    assert_eq!(game.turn(), 1);
    assert_eq!(game.phase(), Phase::AwaitLeaderAction);
    assert!(game.transcript().is_empty());
    assert!(game.outcome().is_none());
}

#[test]
fn init_rejects_inconsistent_assignment() {
    let config = school_config();
    let mut assignment = fixed_assignment(&config);
    // Give the spy a character: now two seats claim the same one.
    assignment
        .character_of
        .insert(assignment.spy_seat, assignment.location.characters[0].clone());
    assert!(init_game(config, assignment).is_err());
}

#[test]
fn questioned_player_becomes_next_leader() {
    let game = new_game();
    let s = ask(&game, 0, 3);
    assert_eq!(
        s.phase(),
        Phase::AwaitAnswer {
            asker: PlayerId(0),
            responder: PlayerId(3)
        }
    );
    let s = answer(&s, 3);
    // Turn 1 closes without a guess; turn 2 starts led by Player4.
    assert_eq!(s.turn(), 2);
    assert_eq!(s.leader(), PlayerId(3));
    assert_eq!(s.phase(), Phase::AwaitLeaderAction);
}

#[test]
fn spy_guess_is_solicited_from_turn_two() {
    let game = play_turn_one(new_game());
    assert_eq!(game.turn(), 2);
    let s = ask(&game, 1, 2);
    let s = answer(&s, 2);
    assert_eq!(s.phase(), Phase::AwaitSpyGuess);
    assert_eq!(
        s.expected_actor(),
        Some((PlayerId(6), RequestKind::SpyGuess))
    );
}

#[test]
fn low_certainty_guess_stays_secret_and_game_continues() {
    let game = play_turn_one(new_game());
    let s = answer(&ask(&game, 1, 2), 2);
    let s = guess(&s, "school", 8);
    assert!(s.outcome().is_none());
    assert_eq!(s.turn(), 3);
    assert!(!s
        .transcript()
        .iter()
        .any(|e| matches!(e.event, GameEvent::GuessAnnounced { .. })));
}

#[test]
fn threshold_certainty_announces_and_ends_game() {
    let game = play_turn_one(new_game());
    let s = answer(&ask(&game, 1, 2), 2);
    let s = guess(&s, "An Airplane.", 9);
    // Deck card 0 is "school": the guess is wrong.
    let outcome = s.outcome().unwrap();
    assert_eq!(outcome.winner, Winner::Citizens);
    assert_eq!(outcome.cause, EndCause::GuessWrong);

    let game = play_turn_one(new_game());
    let s = answer(&ask(&game, 1, 2), 2);
    let s = guess(&s, "the school", 10);
    let outcome = s.outcome().unwrap();
    assert_eq!(outcome.winner, Winner::Spy);
    assert_eq!(outcome.cause, EndCause::GuessCorrect);
    assert!(s.transcript().iter().any(|e| matches!(
        e.event,
        GameEvent::GuessAnnounced { correct: true, .. }
    )));
}

fn run_day_vote(state: &GameState, accuser: u8, accused: u8, agrees: &[bool]) -> GameState {
    let (mut s, _) = state
        .advance(
            PlayerId(accuser),
            &Decision::of(Action::Accuse {
                target: PlayerId(accused),
            }),
        )
        .unwrap();
    let voters = s.day_voters();
    assert_eq!(voters.len(), agrees.len());
    for (voter, agree) in voters.into_iter().zip(agrees.iter().copied()) {
        let (next, _) = s
            .advance(voter, &Decision::of(Action::DayBallot { agree }))
            .unwrap();
        s = next;
    }
    s
}

#[test]
fn unanimous_day_vote_on_citizen_hands_spy_the_win() {
    let game = new_game();
    let s = run_day_vote(&game, 0, 1, &[true; 5]);
    let outcome = s.outcome().unwrap();
    assert_eq!(outcome.winner, Winner::Spy);
    assert_eq!(outcome.cause, EndCause::DayVoteCitizenEliminated);
}

#[test]
fn unanimous_day_vote_on_spy_hands_citizens_the_win() {
    let game = new_game();
    let s = run_day_vote(&game, 0, 6, &[true; 5]);
    let outcome = s.outcome().unwrap();
    assert_eq!(outcome.winner, Winner::Citizens);
    assert_eq!(outcome.cause, EndCause::DayVoteSpyEliminated);
}

#[test]
fn split_day_vote_continues_with_accused_as_leader() {
    let game = new_game();
    let s = run_day_vote(&game, 0, 1, &[true, true, true, true, false]);
    assert!(s.outcome().is_none());
    // Turn 1 had no guess due; the vote closes the turn.
    assert_eq!(s.turn(), 2);
    assert_eq!(s.leader(), PlayerId(1));
    assert!(s
        .transcript()
        .iter()
        .any(|e| matches!(e.event, GameEvent::DayVoteResult { unanimous: false })));
}

#[test]
fn day_vote_collects_exactly_num_players_minus_two_ballots() {
    let game = new_game();
    let (s, _) = game
        .advance(
            PlayerId(0),
            &Decision::of(Action::Accuse { target: PlayerId(3) }),
        )
        .unwrap();
    let voters = s.day_voters();
    assert_eq!(voters.len(), 5);
    assert!(!voters.contains(&PlayerId(0)));
    assert!(!voters.contains(&PlayerId(3)));
}

#[test]
fn failed_day_vote_still_solicits_the_guess() {
    let game = play_turn_one(new_game());
    assert_eq!(game.turn(), 2);
    let s = run_day_vote(&game, 1, 2, &[false, true, true, true, true]);
    assert_eq!(s.phase(), Phase::AwaitSpyGuess);
}

fn reach_final_vote() -> GameState {
    let mut s = new_game();
    // Leader i asks i+1 each turn; spy answers with the rest.
    for turn in 1..=9u8 {
        let leader = s.leader();
        let target = PlayerId((leader.0 + 1) % 7);
        s = ask(&s, leader.0, target.0);
        s = answer(&s, target.0);
        if turn >= 2 {
            s = guess(&s, "no idea", 0);
        }
    }
    assert_eq!(s.phase(), Phase::AwaitFinalVotes);
    s
}

fn cast_final_ballots(mut s: GameState, targets: &[u8]) -> GameState {
    for (voter, target) in (0u8..7).zip(targets.iter().copied()) {
        let (next, _) = s
            .advance(
                PlayerId(voter),
                &Decision::of(Action::FinalBallot {
                    target: PlayerId(target),
                }),
            )
            .unwrap();
        s = next;
    }
    s
}

#[test]
fn game_reaches_final_vote_after_final_turn() {
    let s = reach_final_vote();
    assert_eq!(s.turn(), 9);
}

#[test]
fn final_vote_citizen_strict_max_means_spy_wins() {
    let s = reach_final_vote();
    // Four votes on Player2 (a citizen), three spread: strict citizen max.
    let s = cast_final_ballots(s, &[1, 2, 1, 1, 1, 0, 0]);
    let outcome = s.outcome().unwrap();
    assert_eq!(outcome.winner, Winner::Spy);
    assert_eq!(outcome.cause, EndCause::FinalVoteCitizenTopped);
}

#[test]
fn final_vote_spy_max_means_citizens_win() {
    let s = reach_final_vote();
    let s = cast_final_ballots(s, &[6, 6, 6, 6, 6, 6, 0]);
    let outcome = s.outcome().unwrap();
    assert_eq!(outcome.winner, Winner::Citizens);
    assert_eq!(outcome.cause, EndCause::FinalVoteSpyToppedOrTie);
}

#[test]
fn final_vote_tie_means_citizens_win() {
    let s = reach_final_vote();
    // 3 on Player1, 3 on Player2, 1 on Player3: tie for max.
    let s = cast_final_ballots(s, &[1, 0, 0, 0, 1, 1, 2]);
    let outcome = s.outcome().unwrap();
    assert_eq!(outcome.winner, Winner::Citizens);
    assert_eq!(outcome.cause, EndCause::FinalVoteSpyToppedOrTie);
}

// --- protocol errors ---

#[test]
fn wrong_actor_is_rejected() {
    let game = new_game();
    let err = game
        .advance(
            PlayerId(2),
            &Decision::of(Action::AskQuestion {
                target: PlayerId(1),
                text: "hm?".into(),
            }),
        )
        .unwrap_err();
    assert_eq!(
        err,
        RuleError::WrongActor {
            expected: PlayerId(0),
            got: PlayerId(2)
        }
    );
}

#[test]
fn out_of_phase_decision_is_rejected() {
    let game = new_game();
    let err = game
        .advance(
            PlayerId(0),
            &Decision::of(Action::FinalBallot { target: PlayerId(1) }),
        )
        .unwrap_err();
    assert!(matches!(err, RuleError::WrongDecisionKind { .. }));
}

#[test]
fn self_question_and_self_accusation_are_rejected() {
    let game = new_game();
    let err = game
        .advance(
            PlayerId(0),
            &Decision::of(Action::AskQuestion {
                target: PlayerId(0),
                text: "talking to myself".into(),
            }),
        )
        .unwrap_err();
    assert!(matches!(err, RuleError::SelfTarget { .. }));
    let err = game
        .advance(
            PlayerId(0),
            &Decision::of(Action::Accuse { target: PlayerId(0) }),
        )
        .unwrap_err();
    assert!(matches!(err, RuleError::SelfTarget { .. }));
}

#[test]
fn self_final_vote_is_rejected() {
    let s = reach_final_vote();
    let err = s
        .advance(
            PlayerId(0),
            &Decision::of(Action::FinalBallot { target: PlayerId(0) }),
        )
        .unwrap_err();
    assert!(matches!(err, RuleError::SelfTarget { .. }));
}

#[test]
fn certainty_out_of_range_is_rejected() {
    let game = play_turn_one(new_game());
    let s = answer(&ask(&game, 1, 2), 2);
    let err = s
        .advance(
            PlayerId(6),
            &Decision::of(Action::SpyGuess {
                location_text: "school".into(),
                certainty: 11,
            }),
        )
        .unwrap_err();
    assert_eq!(err, RuleError::CertaintyOutOfRange(11));
}

#[test]
fn decisions_after_game_end_are_rejected() {
    let game = new_game();
    let s = run_day_vote(&game, 0, 1, &[true; 5]);
    let err = s
        .advance(
            PlayerId(1),
            &Decision::of(Action::Answer { text: "too late".into() }),
        )
        .unwrap_err();
    assert_eq!(err, RuleError::GameEnded);
}

// --- replay determinism ---

#[test]
fn replaying_zero_events_reproduces_the_initial_state() {
    let config = school_config();
    let assignment = fixed_assignment(&config);
    let a = init_game(config.clone(), assignment.clone()).unwrap();
    let b = init_game(config, assignment).unwrap();
    assert_eq!(
        serde_json::to_vec(&a).unwrap(),
        serde_json::to_vec(&b).unwrap()
    );
}

#[test]
fn folding_the_transcript_reproduces_the_terminal_state_byte_identically() {
    let terminal = {
        let s = reach_final_vote();
        cast_final_ballots(s, &[1, 2, 3, 4, 5, 6, 0])
    };
    let config = school_config();
    let assignment = fixed_assignment(&config);
    let mut replayed = init_game(config, assignment).unwrap();
    for entry in terminal.transcript() {
        replayed = replayed.apply_event(entry).unwrap();
    }
    assert_eq!(
        serde_json::to_vec(&terminal).unwrap(),
        serde_json::to_vec(&replayed).unwrap()
    );
}

#[test]
fn advance_is_a_pure_transition() {
    let game = new_game();
    let d = Decision::of(Action::AskQuestion {
        target: PlayerId(2),
        text: "what do you see around you?".into(),
    });
    let (a, ea) = game.advance(PlayerId(0), &d).unwrap();
    let (b, eb) = game.advance(PlayerId(0), &d).unwrap();
    assert_eq!(ea, eb);
    assert_eq!(
        serde_json::to_vec(&a).unwrap(),
        serde_json::to_vec(&b).unwrap()
    );
}

// --- event-log invariants ---

#[test]
fn sequence_numbers_are_contiguous_from_one() {
    let s = reach_final_vote();
    let s = cast_final_ballots(s, &[1, 2, 3, 4, 5, 6, 0]);
    for (i, entry) in s.transcript().iter().enumerate() {
        assert_eq!(entry.seq, i as u64 + 1);
    }
}

#[test]
fn terminal_log_has_exactly_one_game_end() {
    let s = reach_final_vote();
    let s = cast_final_ballots(s, &[1, 2, 3, 4, 5, 6, 0]);
    let ends = s
        .transcript()
        .iter()
        .filter(|e| matches!(e.event, GameEvent::GameEnd { .. }))
        .count();
    assert_eq!(ends, 1);
}

#[test]
fn no_announcement_below_threshold_and_no_guess_before_start_turn() {
    let s = reach_final_vote();
    let s = cast_final_ballots(s, &[1, 2, 3, 4, 5, 6, 0]);
    let mut turn = 1u32;
    for entry in s.transcript() {
        match &entry.event {
            GameEvent::TurnStart { turn: t, .. } => turn = *t,
            GameEvent::SecretGuess { certainty, .. } => {
                assert!(turn >= 2);
                assert!(*certainty <= 10);
            }
            GameEvent::GuessAnnounced { .. } => {
                panic!("no guess in this game crossed the threshold");
            }
            _ => {}
        }
    }
}

#[test]
fn abort_ends_the_game_for_the_citizens() {
    let game = play_turn_one(new_game());
    let (s, events) = game.abort().unwrap();
    assert_eq!(
        s.outcome().unwrap().cause,
        EndCause::Aborted
    );
    assert_eq!(s.outcome().unwrap().winner, Winner::Citizens);
    assert_eq!(events.len(), 1);
}

// --- observations ---

#[test]
fn spy_observation_hides_location_and_characters() {
    let game = play_turn_one(new_game());
    let obs = observation_for(&game, PlayerId(6));
    assert!(obs.identity.is_spy());
    let json = serde_json::to_string(&obs).unwrap();
    let location = &game.assignment().location;
    assert!(!json.contains(&location.name));
    for character in game.assignment().character_of.values() {
        assert!(!json.contains(character));
    }
}

#[test]
fn citizen_observation_has_own_identity_but_not_the_spy_seat() {
    let game = play_turn_one(new_game());
    let obs = observation_for(&game, PlayerId(2));
    match &obs.identity {
        crate::game::RoleView::Citizen { location, character } => {
            assert_eq!(location.name, game.assignment().location.name);
            assert_eq!(
                character,
                game.assignment().character_of.get(&PlayerId(2)).unwrap()
            );
        }
        other => panic!("citizen saw {other:?}"),
    }
    let json = serde_json::to_string(&obs).unwrap();
    assert!(!json.contains("spy_seat"));
}

#[test]
fn secret_guesses_never_appear_in_observations() {
    let game = play_turn_one(new_game());
    let s = answer(&ask(&game, 1, 2), 2);
    let s = guess(&s, "library", 5);
    for seat in 0..7u8 {
        let obs = observation_for(&s, PlayerId(seat));
        assert!(!obs
            .public_transcript
            .iter()
            .any(|e| matches!(e.event, GameEvent::SecretGuess { .. })));
    }
}

#[test]
fn reasoning_is_visible_only_to_its_author() {
    let game = new_game();
    let d = Decision::with_reasoning(
        Action::AskQuestion {
            target: PlayerId(1),
            text: "how busy is it here?".into(),
        },
        "I suspect Player5; probing indirectly.",
    );
    let (s, _) = game.advance(PlayerId(0), &d).unwrap();
    let own = observation_for(&s, PlayerId(0));
    assert!(own
        .public_transcript
        .iter()
        .any(|e| matches!(e.event, GameEvent::Reasoning { .. })));
    let other = observation_for(&s, PlayerId(4));
    assert!(!other
        .public_transcript
        .iter()
        .any(|e| matches!(e.event, GameEvent::Reasoning { .. })));
}

/// Monotone-disclosure oracle: sweep every transcript prefix; ballots are
/// invisible while the game is live and fully visible once it has ended,
/// and nothing visible ever disappears again.
#[test]
fn ballots_are_hidden_until_game_end_and_disclosure_is_monotone() {
    // A game that ends in a final vote, with one failed day vote on the way.
    let game = play_turn_one(new_game());
    let s = run_day_vote(&game, 1, 2, &[false, true, true, true, true]);
    let s = guess(&s, "somewhere", 0);
    let mut s = s;
    for _ in 3..=9u32 {
        let leader = s.leader();
        let target = PlayerId((leader.0 + 1) % 7);
        s = ask(&s, leader.0, target.0);
        s = answer(&s, target.0);
        s = guess(&s, "somewhere", 0);
    }
    let terminal = cast_final_ballots(s, &[1, 2, 3, 4, 5, 6, 0]);
    let full_log = terminal.transcript().to_vec();
    let total_ballots = full_log.iter().filter(|e| e.event.is_ballot()).count();
    assert_eq!(total_ballots, 5 + 7);

    let config = school_config();
    let assignment = fixed_assignment(&config);
    let mut state = init_game(config, assignment).unwrap();
    let mut seen_so_far: Vec<std::collections::BTreeSet<u64>> =
        vec![std::collections::BTreeSet::new(); 7];
    for entry in &full_log {
        state = state.apply_event(entry).unwrap();
        for seat in 0..7u8 {
            let obs = observation_for(&state, PlayerId(seat));
            let visible: std::collections::BTreeSet<u64> =
                obs.public_transcript.iter().map(|e| e.seq).collect();
            let ballots_visible = obs
                .public_transcript
                .iter()
                .filter(|e| e.event.is_ballot())
                .count();
            if state.is_ended() {
                assert_eq!(ballots_visible, total_ballots);
            } else {
                assert_eq!(ballots_visible, 0);
            }
            assert!(
                seen_so_far[seat as usize].is_subset(&visible),
                "disclosure regressed for seat {seat}"
            );
            seen_so_far[seat as usize] = visible;
        }
    }
    assert!(state.is_ended());
}

// --- decide_winner unit cases ---

#[test]
fn decide_winner_requires_a_full_ballot_set() {
    let ballots = vec![(PlayerId(0), PlayerId(1))];
    let err = decide_winner(&ballots, PlayerId(6), 7).unwrap_err();
    assert_eq!(err, RuleError::BallotCountMismatch { have: 1, need: 7 });
}

#[test]
fn decide_winner_rejects_duplicate_voters() {
    let ballots: Vec<_> = (0..7).map(|_| (PlayerId(0), PlayerId(1))).collect();
    let err = decide_winner(&ballots, PlayerId(6), 7).unwrap_err();
    assert_eq!(err, RuleError::DuplicateVoter(PlayerId(0)));
}

#[test]
fn deal_plus_init_round_trip() {
    let config = school_config();
    let a = deal(&config, &default_deck()[1], 99).unwrap();
    let game = init_game(config, a).unwrap();
    assert_eq!(game.turn(), 1);
}
