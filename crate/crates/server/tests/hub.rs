mod common;

use std::sync::{Arc, Barrier};
use std::thread;

use common::{malformed_frames, pinned_hub, press_order, sequential_display_stream, Client};
use puzzlegram_core::telemetry::{progress_events, read_log_file, replay};
use puzzlegram_core::{GameConfig, Phase, SessionState};
use puzzlegram_server::{ClientMessage, ErrorCode, Hub, HubConfig, Role, ServerMessage};

const SEED: u64 = 42;

fn error_codes(messages: &[ServerMessage]) -> Vec<ErrorCode> {
    messages
        .iter()
        .filter_map(|m| match m {
            ServerMessage::Error { code, .. } => Some(*code),
            _ => None,
        })
        .collect()
}

fn seat_three(hub: &Hub, session: &str) -> Vec<Client> {
    ["ada", "bo", "cy"]
        .iter()
        .map(|name| {
            let mut c = Client::connect(hub);
            c.join(hub, session, name, Role::Controller);
            c
        })
        .collect()
}

fn snapshot(hub: &Hub, session: &str) -> SessionState {
    hub.session(session).unwrap().lock().unwrap().state().clone()
}

/// Region where `player` currently sees the reference color.
fn matching_region(state: &SessionState, player: usize) -> usize {
    let reference = state.reference_index().unwrap();
    state.players[player].color_map.region_of(reference)
}

#[test]
fn third_join_activates_and_everyone_sees_level_one() {
    let hub = pinned_hub(SEED);
    let mut players = seat_three(&hub, "room");
    for (id, p) in players.iter_mut().enumerate() {
        let msgs = p.messages();
        assert!(matches!(msgs[0], ServerMessage::Joined { player_id, .. } if player_id == id));
        match msgs.last().unwrap() {
            ServerMessage::State {
                phase,
                level,
                reference_color_hex,
                players,
                ..
            } => {
                assert_eq!((*phase, *level, players.len()), (Phase::Active, 1, 3));
                assert!(reference_color_hex.is_some());
            }
            other => panic!("expected state, got {other:?}"),
        }
    }
}

#[test]
fn errors_are_reported_to_the_sender_only() {
    let hub = pinned_hub(SEED);
    let mut early = Client::connect(&hub);
    early.press(&hub, 0);
    assert_eq!(error_codes(&early.messages()), vec![ErrorCode::NotJoined]);

    early.join(&hub, "room", "ada", Role::Controller);
    early.press(&hub, 0);
    early.join(&hub, "room", "ada", Role::Controller);
    let codes = error_codes(&early.messages());
    assert_eq!(codes, vec![ErrorCode::NotStarted, ErrorCode::AlreadyJoined]);

    let mut others = [Client::connect(&hub), Client::connect(&hub)];
    others[0].join(&hub, "room", "bo", Role::Controller);
    others[1].join(&hub, "room", "cy", Role::Controller);
    let mut fourth = Client::connect(&hub);
    fourth.join(&hub, "room", "dee", Role::Controller);
    assert_eq!(error_codes(&fourth.messages()), vec![ErrorCode::SessionFull]);
    assert!(error_codes(&others[0].messages()).is_empty());
    assert_eq!(snapshot(&hub, "room").players.len(), 3);
}

#[test]
fn displays_cannot_press() {
    let hub = pinned_hub(SEED);
    let _players = seat_three(&hub, "room");
    let mut display = Client::connect(&hub);
    display.join(&hub, "room", "wall", Role::Display);
    let before = snapshot(&hub, "room");
    display.press(&hub, 4);
    assert_eq!(error_codes(&display.messages()), vec![ErrorCode::Forbidden]);
    assert_eq!(snapshot(&hub, "room"), before);
}

#[test]
fn reconnecting_by_name_resumes_the_seat() {
    let hub = pinned_hub(SEED);
    let mut players = seat_three(&hub, "room");
    let state = snapshot(&hub, "room");
    players[1].press(&hub, (matching_region(&state, 1) + 1) % 16);
    hub.disconnect(&mut players[1].conn);

    let mut again = Client::connect(&hub);
    again.join(&hub, "room", "bo", Role::Controller);
    let msgs = again.messages();
    assert!(matches!(msgs[0], ServerMessage::Joined { player_id: 1, .. }));
    let after = snapshot(&hub, "room");
    assert_eq!(after.players.len(), 3);
    assert_eq!(after.players[1].presses_this_level, 1);

    again.press(&hub, matching_region(&after, 1));
    assert!(snapshot(&hub, "room").players[1].matched);
}

#[test]
fn sessions_are_isolated() {
    let hub = pinned_hub(SEED);
    let mut a = seat_three(&hub, "a");
    let mut b = seat_three(&hub, "b");
    for c in a.iter_mut().chain(b.iter_mut()) {
        c.frames();
    }
    let state = snapshot(&hub, "a");
    a[0].press(&hub, matching_region(&state, 0));
    assert!(!a[1].frames().is_empty());
    assert!(b.iter_mut().all(|c| c.frames().is_empty()));
    assert!(snapshot(&hub, "a").players[0].matched);
    assert!(!snapshot(&hub, "b").players[0].matched);
    assert_eq!(hub.session_ids(), vec!["a".to_string(), "b".to_string()]);
}

#[test]
fn mute_is_broadcast_and_stored() {
    let hub = pinned_hub(SEED);
    let mut players = seat_three(&hub, "room");
    players[2].send(&hub, ClientMessage::SetMuted { muted: true });
    assert!(snapshot(&hub, "room").muted);
    let last = players[0].messages().pop().unwrap();
    assert!(matches!(last, ServerMessage::State { muted: true, .. }));
}

#[test]
fn fuzzed_frames_only_produce_bad_message() {
    let hub = pinned_hub(SEED);
    let mut players = seat_three(&hub, "room");
    let mut display = Client::connect(&hub);
    display.join(&hub, "room", "wall", Role::Display);
    let state = snapshot(&hub, "room");
    players[0].press(&hub, matching_region(&state, 0));
    let before = snapshot(&hub, "room");
    for c in players.iter_mut().chain([&mut display]) {
        c.frames();
    }

    let frames = malformed_frames(0xF022, 10_000);
    for (i, frame) in frames.iter().enumerate() {
        hub.handle_frame(&mut players[i % 3].conn, frame);
    }

    let mut rejected = 0;
    for p in players.iter_mut() {
        for m in p.messages() {
            assert!(
                matches!(m, ServerMessage::Error { code: ErrorCode::BadMessage, .. }),
                "{m:?}"
            );
            rejected += 1;
        }
    }
    assert_eq!(rejected, frames.len());
    assert!(display.frames().is_empty());
    let after = snapshot(&hub, "room");
    assert_eq!(after, before);
    assert_eq!(after.phase, Phase::Active);
    assert!(after.players[0].matched && !after.players[1].matched);
}

#[test]
fn concurrent_presses_linearize_in_arrival_order() {
    for seed in [1u64, 2, 3, 99] {
        let hub = Arc::new(pinned_hub(seed));
        let mut display = Client::connect(&hub);
        display.join(&hub, "race", "display", Role::Display);
        let players = seat_three(&hub, "race");
        let barrier = Arc::new(Barrier::new(3));

        let workers: Vec<_> = players
            .into_iter()
            .enumerate()
            .map(|(id, mut client)| {
                let hub = hub.clone();
                let barrier = barrier.clone();
                thread::spawn(move || {
                    barrier.wait();
                    // Cycling through all regions always finds the match;
                    // presses after matching are revealed but change nothing.
                    let session = hub.session("race").unwrap();
                    let mut r = id;
                    while session.lock().unwrap().state().phase != Phase::Complete {
                        client.press(&hub, r % 16);
                        r += 1;
                    }
                })
            })
            .collect();
        for w in workers {
            w.join().unwrap();
        }

        let live = display.frames();
        assert_eq!(snapshot(&hub, "race").phase, Phase::Complete);
        let order = press_order(&live);
        let replayed = sequential_display_stream(seed, "race", &["ada", "bo", "cy"], &order);
        assert_eq!(live, replayed, "seed {seed}");
    }
}

#[test]
fn telemetry_log_replays_to_the_same_progress() {
    let dir = tempfile::tempdir().unwrap();
    let hub = Hub::new(HubConfig {
        seed: Some(SEED),
        log_dir: Some(dir.path().to_path_buf()),
        ..Default::default()
    });
    let mut players = seat_three(&hub, "logged/../room");
    players[0].send(&hub, ClientMessage::SetMuted { muted: true });
    while snapshot(&hub, "logged/../room").phase == Phase::Active {
        let state = snapshot(&hub, "logged/../room");
        for p in 0..3 {
            if !state.players[p].matched {
                players[p].press(&hub, (matching_region(&state, p) + 5) % 16);
                players[p].press(&hub, matching_region(&state, p));
                break;
            }
        }
    }

    let log_path = dir.path().join("logged____room.jsonl");
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("logged____room.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["seed"], SEED);
    let parsed = read_log_file(&log_path).unwrap();
    assert_eq!(parsed.parse_errors, 0);
    let again = replay(GameConfig::new(SEED), &parsed.events).unwrap();
    assert_eq!(again.state.phase, Phase::Complete);
    let strip = |v: Vec<&puzzlegram_core::telemetry::EventRecord>| -> Vec<_> {
        v.into_iter()
            .map(|e| (e.event, e.player_id, e.level, e.tick))
            .collect()
    };
    assert_eq!(
        strip(progress_events(&parsed.events)),
        strip(progress_events(&again.events))
    );
}
