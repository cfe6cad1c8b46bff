use puzzlegram_core::model::derive_reference_sequence;
use puzzlegram_core::GameConfig;
use puzzlegram_server::protocol::ServerMessage;
use puzzlegram_server::{decode_message, encode_client_message, encode_message, Role, Session};
use serde::Deserialize;

#[derive(Deserialize)]
struct ClientFixture {
    frame: String,
    canonical: String,
}

fn client_fixtures() -> Vec<ClientFixture> {
    serde_json::from_str(include_str!("fixtures/client_messages.json")).unwrap()
}

fn server_fixtures() -> Vec<String> {
    serde_json::from_str(include_str!("fixtures/server_messages.json")).unwrap()
}

#[test]
fn client_frames_canonicalize() {
    for f in client_fixtures() {
        let decoded = decode_message(f.frame.as_bytes()).unwrap();
        assert_eq!(encode_client_message(&decoded), f.canonical, "{}", f.frame);
        assert_eq!(decode_message(f.canonical.as_bytes()).unwrap(), decoded);
    }
}

#[test]
fn server_frames_round_trip_byte_for_byte() {
    for text in server_fixtures() {
        let message: ServerMessage = serde_json::from_str(&text).unwrap();
        assert_eq!(encode_message(&message), text);
    }
}

#[test]
fn palette_color_zero_is_encoded_uppercase() {
    let seed = (0..)
        .find(|&s| derive_reference_sequence(s).colors[0] == 0)
        .unwrap();
    let mut session = Session::new("hex", GameConfig::new(seed), None).unwrap();
    let (tx, _rx) = tokio::sync::mpsc::unbounded_channel();
    for (conn, name) in ["a", "b", "c"].into_iter().enumerate() {
        session.join(conn as u64, tx.clone(), name, Role::Controller).unwrap();
    }
    let text = encode_message(&session.state_message());
    assert!(text.contains(r##""reference_color_hex":"#E62E2E""##), "{text}");
    assert!(!text.contains('.'), "no floats on the wire: {text}");
    assert_eq!(text, encode_message(&session.state_message()));
}
