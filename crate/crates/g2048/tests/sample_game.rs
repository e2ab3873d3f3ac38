use g2048::wire::read_transcript;
use g2048_core::harness::TranscriptError;
use g2048_core::{max_tile, replay_transcript, Board, BoardShape, Position};

const FIXTURE: &str = include_str!("fixtures/sample_game_2x2.jsonl");

// Panels of the 2x2 sample game as (0,0), (0,1), (1,0), (1,1) exponents, 0 for empty.
const PANELS: [[u8; 4]; 18] = [
    [2, 1, 0, 0],
    [2, 1, 0, 1],
    [2, 2, 0, 1],
    [3, 1, 0, 1],
    [3, 2, 0, 1],
    [3, 2, 1, 1],
    [3, 2, 1, 2],
    [3, 3, 1, 2],
    [4, 2, 1, 1],
    [4, 2, 1, 2],
    [4, 3, 1, 1],
    [4, 3, 2, 2],
    [4, 3, 2, 3],
    [4, 4, 1, 1],
    [5, 2, 2, 2],
    [5, 3, 2, 3],
    [5, 4, 2, 2],
    [5, 4, 2, 3],
];

// Panels whose predecessor cannot produce them with a whole-board slide.
const SKIPPED: [usize; 3] = [4, 9, 14];

fn panel_board(p: &[u8; 4]) -> Board {
    Board::from_raw(&BoardShape::new(&[2, 2]).unwrap(), p.to_vec()).unwrap()
}

#[test]
fn sample_transcript_replays_to_thirty_two() {
    let t = read_transcript(FIXTURE).unwrap();
    let st = replay_transcript(&t).unwrap();
    assert_eq!(max_tile(&st.board), Some(5));
    let at = |c: &[usize]| st.board.get(&Position::new(c));
    assert_eq!(at(&[0, 0]), Some(5));
    assert_eq!(at(&[0, 1]), Some(4));
    assert_eq!(at(&[1, 1]), Some(3));
    assert_eq!(at(&[1, 0]), Some(2));
    let mut exps: Vec<u8> = st.board.raw().to_vec();
    exps.sort_unstable();
    assert_eq!(exps, vec![2, 3, 4, 5]);
    assert!(st.is_over());
}

#[test]
fn sample_panels_appear_in_order() {
    let t = read_transcript(FIXTURE).unwrap();
    let mut at = 0;
    let mut matched = Vec::new();
    for (k, p) in PANELS.iter().enumerate() {
        let want = panel_board(p);
        if let Some(off) = t.events[at..].iter().position(|e| e.board_after == want) {
            at += off + 1;
            matched.push(k + 1);
        }
    }
    let expected: Vec<usize> = (1..=18).filter(|k| !SKIPPED.contains(k)).collect();
    assert_eq!(matched, expected);
    assert_eq!(t.events.last().unwrap().board_after, panel_board(&PANELS[17]));
}

#[test]
fn tampered_board_is_reported_at_its_index() {
    let mut lines: Vec<String> = FIXTURE.lines().map(str::to_string).collect();
    // line 0 is the header, so event 12 is line 13
    let old = lines[13].clone();
    let mut v: serde_json::Value = serde_json::from_str(&old).unwrap();
    let cells = v["board"]["cells"].as_array_mut().unwrap();
    let e = cells[0]["exp"].as_u64().unwrap();
    cells[0]["exp"] = serde_json::json!(e + 1);
    lines[13] = v.to_string();
    let t = read_transcript(&lines.join("\n")).unwrap();
    assert_eq!(replay_transcript(&t).unwrap_err(), TranscriptError::BoardMismatch { index: 12 });
}

#[test]
fn illegal_step_is_reported() {
    let mut lines: Vec<String> = FIXTURE.lines().map(str::to_string).collect();
    let mut v: serde_json::Value = serde_json::from_str(&lines[2]).unwrap();
    // the opening 4 sits at (0,0); sliding toward it changes nothing
    v["action"] = serde_json::json!({"kind": "move", "axis": 0, "sign": -1});
    lines[2] = v.to_string();
    let t = read_transcript(&lines.join("\n")).unwrap();
    assert!(matches!(replay_transcript(&t), Err(TranscriptError::IllegalStep { index: 1, .. })));
}
