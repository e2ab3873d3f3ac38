//! JSON shapes shared by the CLI, transcripts and the service.
//!
//! Boards are `{"shape":[..],"cells":[{"pos":[..],"exp":k}]}` with cells in
//! snake order. Transcripts are JSON lines: one header, one line per event,
//! and an end line carrying the outcome.

use std::collections::BTreeMap;
use std::fmt;

use g2048_core::harness::{Aggregate, Claim, GameRow, TranscriptHeader};
use g2048_core::{
    Action, Actor, AdversaryMode, Board, BoardShape, Event, Move, OracleResult, Outcome, Placement, Position,
    Report, Tag, Transcript,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WireError(pub String);

impl fmt::Display for WireError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for WireError {}

fn err<T>(msg: impl Into<String>) -> Result<T, WireError> {
    Err(WireError(msg.into()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellJson {
    pub pos: Vec<usize>,
    pub exp: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoardJson {
    pub shape: Vec<usize>,
    pub cells: Vec<CellJson>,
}

impl BoardJson {
    pub fn from_board(b: &Board) -> Self {
        BoardJson {
            shape: b.shape().dims().to_vec(),
            cells: b.tiles().into_iter().map(|(p, exp)| CellJson { pos: p.0, exp }).collect(),
        }
    }

    pub fn to_board(&self) -> Result<Board, WireError> {
        let shape = BoardShape::new(&self.shape).map_err(|e| WireError(format!("bad shape: {e}")))?;
        let mut b = Board::empty(&shape);
        for c in &self.cells {
            if c.exp == 0 {
                return err("cell with exponent 0");
            }
            b.place(&Position(c.pos.clone()), c.exp).map_err(|e| WireError(format!("bad cell {:?}: {e}", c.pos)))?;
        }
        Ok(b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ActionJson {
    Place { pos: Vec<usize>, exp: u8 },
    Move { axis: usize, sign: i8 },
}

impl ActionJson {
    pub fn from_action(a: &Action) -> Self {
        match a {
            Action::Place(p) => ActionJson::Place { pos: p.pos.0.clone(), exp: p.exp },
            Action::Move(m) => ActionJson::Move { axis: m.axis, sign: m.sign },
        }
    }

    pub fn to_action(&self) -> Result<Action, WireError> {
        match self {
            ActionJson::Place { pos, exp } => Ok(Action::Place(Placement { pos: Position(pos.clone()), exp: *exp })),
            ActionJson::Move { axis, sign } if *sign == 1 || *sign == -1 => Ok(Action::Move(Move::new(*axis, *sign))),
            ActionJson::Move { sign, .. } => err(format!("sign must be 1 or -1, got {sign}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActorJson {
    Computer,
    Player,
}

impl From<Actor> for ActorJson {
    fn from(a: Actor) -> Self {
        match a {
            Actor::Computer => ActorJson::Computer,
            Actor::Player => ActorJson::Player,
        }
    }
}

impl From<ActorJson> for Actor {
    fn from(a: ActorJson) -> Self {
        match a {
            ActorJson::Computer => Actor::Computer,
            ActorJson::Player => Actor::Player,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventJson {
    pub turn: usize,
    pub actor: ActorJson,
    pub action: ActionJson,
    #[serde(default)]
    pub tag: Option<String>,
    pub board: BoardJson,
}

impl EventJson {
    pub fn from_event(e: &Event) -> Self {
        EventJson {
            turn: e.turn,
            actor: e.actor.into(),
            action: ActionJson::from_action(&e.action),
            tag: e.tag.map(|t| t.as_str().to_string()),
            board: BoardJson::from_board(&e.board_after),
        }
    }

    pub fn to_event(&self) -> Result<Event, WireError> {
        let tag = match &self.tag {
            None => None,
            Some(s) => Some(Tag::parse(s).ok_or_else(|| WireError(format!("unknown tag {s:?}")))?),
        };
        Ok(Event {
            turn: self.turn,
            actor: self.actor.into(),
            action: self.action.to_action()?,
            tag,
            board_after: self.board.to_board()?,
        })
    }
}

/// One transcript line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Line {
    Header {
        shape: Vec<usize>,
        mode: String,
        mode_label: String,
        seed: u64,
        policy_version: String,
        max_turns: usize,
    },
    Event(EventJson),
    End {
        outcome: String,
        final_max: u8,
        events: usize,
    },
}

pub fn header_line(h: &TranscriptHeader) -> Line {
    Line::Header {
        shape: h.shape.dims().to_vec(),
        mode: h.mode.as_str().into(),
        mode_label: h.mode_label.clone(),
        seed: h.seed,
        policy_version: h.policy_version.clone(),
        max_turns: h.max_turns,
    }
}

pub fn end_line(t: &Transcript, outcome: Outcome) -> Line {
    Line::End {
        outcome: outcome.as_str().into(),
        final_max: g2048_core::max_tile(&t.final_board()).unwrap_or(0),
        events: t.events.len(),
    }
}

pub fn to_line(l: &Line) -> String {
    serde_json::to_string(l).expect("lines always serialise")
}

/// Serialises a transcript as JSON lines, each terminated by `\n`.
pub fn write_transcript(t: &Transcript) -> String {
    let mut out = to_line(&header_line(&t.header));
    out.push('\n');
    for e in &t.events {
        out.push_str(&to_line(&Line::Event(EventJson::from_event(e))));
        out.push('\n');
    }
    if let Some(o) = t.outcome {
        out.push_str(&to_line(&end_line(t, o)));
        out.push('\n');
    }
    out
}

pub fn parse_mode(s: &str) -> Result<AdversaryMode, WireError> {
    AdversaryMode::parse(s).ok_or_else(|| WireError(format!("unknown mode {s:?}")))
}

/// Parses JSON lines back into a transcript. Blank lines are skipped.
pub fn read_transcript(text: &str) -> Result<Transcript, WireError> {
    let mut header = None;
    let mut events = Vec::new();
    let mut outcome = None;
    for (no, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let line: Line = serde_json::from_str(raw).map_err(|e| WireError(format!("line {}: {e}", no + 1)))?;
        match line {
            Line::Header { shape, mode, mode_label, seed, policy_version, max_turns } => {
                if header.is_some() {
                    return err(format!("line {}: second header", no + 1));
                }
                let shape = BoardShape::new(&shape).map_err(|e| WireError(format!("bad shape: {e}")))?;
                header = Some(TranscriptHeader {
                    shape,
                    mode: parse_mode(&mode)?,
                    mode_label,
                    seed,
                    policy_version,
                    max_turns,
                });
            }
            Line::Event(e) => {
                if header.is_none() {
                    return err(format!("line {}: event before header", no + 1));
                }
                events.push(e.to_event().map_err(|e| WireError(format!("line {}: {e}", no + 1)))?);
            }
            Line::End { outcome: o, .. } => {
                outcome = Some(Outcome::parse(&o).ok_or_else(|| WireError(format!("unknown outcome {o:?}")))?);
            }
        }
    }
    let header = header.ok_or_else(|| WireError("missing header line".into()))?;
    Ok(Transcript { header, events, outcome })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleJson {
    pub shape: Vec<usize>,
    pub mode: String,
    pub max_exponent: u8,
    pub states_visited: u64,
    pub partial: bool,
    pub witness: Vec<ActionJson>,
}

impl OracleJson {
    pub fn from_result(r: &OracleResult) -> Self {
        OracleJson {
            shape: r.shape.dims().to_vec(),
            mode: r.mode.as_str().into(),
            max_exponent: r.max_exponent,
            states_visited: r.states_visited,
            partial: r.partial,
            witness: r.witness.iter().map(ActionJson::from_action).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowJson {
    pub seed: u64,
    pub final_max: u8,
    pub turns: usize,
    pub outcome: String,
    pub prefix_trajectory: Vec<usize>,
    pub prefix_monotone: bool,
    pub final_prefix: usize,
    pub tag_counts: BTreeMap<String, usize>,
}

impl RowJson {
    fn from_row(r: &GameRow) -> Self {
        RowJson {
            seed: r.seed,
            final_max: r.final_max,
            turns: r.turns,
            outcome: r.outcome.as_str().into(),
            prefix_trajectory: r.prefix_trajectory.clone(),
            prefix_monotone: r.prefix_monotone,
            final_prefix: r.final_prefix,
            tag_counts: r.tag_counts.iter().map(|(t, n)| (t.as_str().to_string(), *n)).collect(),
        }
    }

    pub fn to_row(&self) -> Result<GameRow, WireError> {
        let mut tag_counts = BTreeMap::new();
        for (k, n) in &self.tag_counts {
            tag_counts.insert(Tag::parse(k).ok_or_else(|| WireError(format!("unknown tag {k:?}")))?, *n);
        }
        Ok(GameRow {
            seed: self.seed,
            final_max: self.final_max,
            turns: self.turns,
            outcome: Outcome::parse(&self.outcome).ok_or_else(|| WireError("unknown outcome".into()))?,
            prefix_trajectory: self.prefix_trajectory.clone(),
            prefix_monotone: self.prefix_monotone,
            final_prefix: self.final_prefix,
            tag_counts,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateJson {
    pub games: usize,
    pub min: u8,
    pub median: f64,
    pub max: u8,
    pub full_prefix_games: usize,
    pub monotone_games: usize,
}

impl From<&Aggregate> for AggregateJson {
    fn from(a: &Aggregate) -> Self {
        AggregateJson {
            games: a.games,
            min: a.min,
            median: a.median,
            max: a.max,
            full_prefix_games: a.full_prefix_games,
            monotone_games: a.monotone_games,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimJson {
    pub name: String,
    pub holds: bool,
    pub gating: bool,
    pub detail: String,
}

impl From<&Claim> for ClaimJson {
    fn from(c: &Claim) -> Self {
        ClaimJson { name: c.name.clone(), holds: c.holds, gating: c.gating, detail: c.detail.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub shape: Vec<usize>,
    pub mode: String,
    pub mode_label: String,
    pub bound: u8,
    pub mismatch: bool,
    pub aggregate: AggregateJson,
    pub claims: Vec<ClaimJson>,
    pub oracle: Option<OracleJson>,
    pub rows: Vec<RowJson>,
}

impl ReportJson {
    pub fn from_report(r: &Report) -> Self {
        ReportJson {
            shape: r.shape.dims().to_vec(),
            mode: r.mode.as_str().into(),
            mode_label: r.mode_label.clone(),
            bound: r.bound,
            mismatch: r.mismatch(),
            aggregate: (&r.aggregate).into(),
            claims: r.claims.iter().map(ClaimJson::from).collect(),
            oracle: r.oracle.as_ref().map(OracleJson::from_result),
            rows: r.rows.iter().map(RowJson::from_row).collect(),
        }
    }
}

/// Accepts `"2x3"` or `[2,3]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ShapeSpec {
    Dims(Vec<usize>),
    Text(String),
}

impl ShapeSpec {
    pub fn resolve(&self) -> Result<BoardShape, WireError> {
        match self {
            ShapeSpec::Dims(d) => BoardShape::new(d),
            ShapeSpec::Text(s) => BoardShape::parse(s),
        }
        .map_err(|e| WireError(format!("{e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use g2048_core::run_match;

    #[test]
    fn board_round_trip_is_snake_sorted() {
        let s = BoardShape::new(&[2, 2]).unwrap();
        let b = Board::from_raw(&s, vec![3, 0, 1, 2]).unwrap();
        let j = BoardJson::from_board(&b);
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(
            text,
            r#"{"shape":[2,2],"cells":[{"pos":[0,0],"exp":3},{"pos":[1,1],"exp":2},{"pos":[1,0],"exp":1}]}"#
        );
        assert_eq!(j.to_board().unwrap(), b);
    }

    #[test]
    fn action_json() {
        let a: ActionJson = serde_json::from_str(r#"{"kind":"move","axis":1,"sign":-1}"#).unwrap();
        assert_eq!(a.to_action().unwrap(), Action::Move(Move::new(1, -1)));
        let bad: ActionJson = serde_json::from_str(r#"{"kind":"move","axis":1,"sign":2}"#).unwrap();
        assert!(bad.to_action().is_err());
        let p = ActionJson::Place { pos: vec![0, 1], exp: 2 };
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"kind":"place","pos":[0,1],"exp":2}"#);
    }

    #[test]
    fn transcript_round_trip() {
        let s = BoardShape::new(&[2, 3]).unwrap();
        let t = run_match(&s, AdversaryMode::Paper, 4, 60);
        let text = write_transcript(&t);
        assert_eq!(text.lines().count(), t.events.len() + 2);
        assert_eq!(read_transcript(&text).unwrap(), t);
    }

    #[test]
    fn rejects_events_before_header() {
        let s = BoardShape::new(&[1, 2]).unwrap();
        let t = run_match(&s, AdversaryMode::Paper, 0, 10);
        let text = write_transcript(&t);
        let body: Vec<&str> = text.lines().skip(1).collect();
        assert!(read_transcript(&body.join("\n")).is_err());
    }
}
