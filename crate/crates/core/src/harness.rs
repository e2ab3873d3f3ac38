//! Match runner, transcript replay and claim verification.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::board::{favourable_prefix, max_tile, Board};
use crate::game::{run_policy_turn, Actor, Engine, Event, GameError, GameState};
use crate::oracle::{reachable_max, OracleResult, Solver, ORACLE_GUARD_CELLS};
use crate::shape::BoardShape;
use crate::strategy::{Action, AdversaryMode, Tag};

/// Version string written to transcript headers.
pub const POLICY_VERSION: &str = "1";

/// Default event cap: `10 * cell_count^2`.
pub fn default_max_turns(shape: &BoardShape) -> usize {
    let n = shape.cell_count();
    n.saturating_mul(n).saturating_mul(10)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// No legal move and no empty cell.
    GameOver,
    /// The chain covers the board and the head holds `cell_count + 1`.
    Ceiling,
    TurnCap,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::GameOver => "game-over",
            Outcome::Ceiling => "ceiling",
            Outcome::TurnCap => "turn-cap",
        }
    }

    pub fn parse(s: &str) -> Option<Outcome> {
        [Outcome::GameOver, Outcome::Ceiling, Outcome::TurnCap].into_iter().find(|o| o.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptHeader {
    pub shape: BoardShape,
    pub mode: AdversaryMode,
    /// Mode label, e.g. `cooperative-greedy`.
    pub mode_label: String,
    pub seed: u64,
    pub policy_version: String,
    pub max_turns: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub header: TranscriptHeader,
    pub events: Vec<Event>,
    pub outcome: Option<Outcome>,
}

impl Transcript {
    pub fn final_board(&self) -> Board {
        self.events.last().map(|e| e.board_after.clone()).unwrap_or_else(|| Board::empty(&self.header.shape))
    }

    /// Favourable prefix each time the player is about to move.
    pub fn prefix_trajectory(&self) -> Vec<usize> {
        self.events
            .iter()
            .filter(|e| e.actor == Actor::Computer)
            .map(|e| favourable_prefix(&e.board_after))
            .collect()
    }
}

fn at_ceiling(b: &Board) -> bool {
    let n = b.shape().cell_count();
    max_tile(b).map(usize::from) == Some(n + 1) && favourable_prefix(b) == n
}

/// Plays the policies against each other until game over, ceiling or `max_turns` events.
pub fn run_match(shape: &BoardShape, mode: AdversaryMode, seed: u64, max_turns: usize) -> Transcript {
    let mut engine = Engine::new(shape, mode);
    run_match_with(&mut engine, seed, max_turns)
}

/// [`run_match`] reusing an engine's search caches.
pub fn run_match_with(engine: &mut Engine, seed: u64, max_turns: usize) -> Transcript {
    let shape = engine.shape().clone();
    let mut state = GameState::new(&shape, engine.mode(), seed);
    let outcome = loop {
        if state.is_over() {
            break Outcome::GameOver;
        }
        if at_ceiling(&state.board) {
            break Outcome::Ceiling;
        }
        if state.history.len() >= max_turns {
            break Outcome::TurnCap;
        }
        run_policy_turn(&mut state, engine).expect("policies only produce legal actions");
    };
    Transcript {
        header: TranscriptHeader {
            shape,
            mode: engine.mode(),
            mode_label: engine.label().into(),
            seed,
            policy_version: POLICY_VERSION.into(),
            max_turns,
        },
        events: state.history,
        outcome: Some(outcome),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TranscriptError {
    IllegalStep { index: usize, detail: String },
    BoardMismatch { index: usize },
    TurnMismatch { index: usize },
    ShapeMismatch { index: usize },
}

impl fmt::Display for TranscriptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TranscriptError::IllegalStep { index, detail } => write!(f, "event {index} is illegal: {detail}"),
            TranscriptError::BoardMismatch { index } => {
                write!(f, "event {index}: recorded board differs from the replayed one")
            }
            TranscriptError::TurnMismatch { index } => write!(f, "event {index}: turn number or actor out of order"),
            TranscriptError::ShapeMismatch { index } => write!(f, "event {index}: board shape differs from header"),
        }
    }
}

impl core::error::Error for TranscriptError {}

/// Replays every event, checking legality, order and each recorded board.
pub fn replay_transcript(t: &Transcript) -> Result<GameState, TranscriptError> {
    let mut state = GameState::new(&t.header.shape, t.header.mode, t.header.seed);
    for (index, e) in t.events.iter().enumerate() {
        if e.turn != index || e.actor != state.to_act {
            return Err(TranscriptError::TurnMismatch { index });
        }
        if e.board_after.shape() != &t.header.shape {
            return Err(TranscriptError::ShapeMismatch { index });
        }
        state.apply(e.actor, e.action.clone(), e.tag).map_err(|err| TranscriptError::IllegalStep {
            index,
            detail: match err {
                GameError::IllegalAction(s) => s,
                other => alloc::format!("{other}"),
            },
        })?;
        if state.board != e.board_after {
            return Err(TranscriptError::BoardMismatch { index });
        }
    }
    Ok(state)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameRow {
    pub seed: u64,
    pub final_max: u8,
    pub turns: usize,
    pub outcome: Outcome,
    pub prefix_trajectory: Vec<usize>,
    pub prefix_monotone: bool,
    pub final_prefix: usize,
    pub tag_counts: BTreeMap<Tag, usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub games: usize,
    pub min: u8,
    pub median: f64,
    pub max: u8,
    /// Games whose chain covered the whole board.
    pub full_prefix_games: usize,
    pub monotone_games: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub name: String,
    pub holds: bool,
    /// Only gating claims count toward [`Report::mismatch`].
    pub gating: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub shape: BoardShape,
    pub mode: AdversaryMode,
    pub mode_label: String,
    /// `cell_count + 1`.
    pub bound: u8,
    pub rows: Vec<GameRow>,
    pub aggregate: Aggregate,
    pub oracle: Option<OracleResult>,
    pub claims: Vec<Claim>,
}

impl Report {
    /// True when any gating claim fails.
    pub fn mismatch(&self) -> bool {
        self.claims.iter().any(|c| c.gating && !c.holds)
    }

    pub fn claim(&self, name: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.name == name)
    }
}

pub fn row_from_transcript(t: &Transcript) -> GameRow {
    let traj = t.prefix_trajectory();
    let mut tag_counts = BTreeMap::new();
    for e in &t.events {
        if let Some(tag) = e.tag {
            *tag_counts.entry(tag).or_insert(0) += 1;
        }
    }
    let end = t.final_board();
    GameRow {
        seed: t.header.seed,
        final_max: max_tile(&end).unwrap_or(0),
        turns: t.events.len(),
        outcome: t.outcome.unwrap_or(Outcome::TurnCap),
        prefix_monotone: traj.windows(2).all(|w| w[0] <= w[1]),
        final_prefix: favourable_prefix(&end),
        prefix_trajectory: traj,
        tag_counts,
    }
}

/// Recomputes aggregate statistics from rows.
pub fn aggregate(rows: &[GameRow], cells: usize) -> Aggregate {
    let mut v: Vec<u8> = rows.iter().map(|r| r.final_max).collect();
    v.sort_unstable();
    let median = match v.len() {
        0 => 0.0,
        n if n % 2 == 1 => f64::from(v[n / 2]),
        n => (f64::from(v[n / 2 - 1]) + f64::from(v[n / 2])) / 2.0,
    };
    Aggregate {
        games: rows.len(),
        min: v.first().copied().unwrap_or(0),
        median,
        max: v.last().copied().unwrap_or(0),
        full_prefix_games: rows.iter().filter(|r| r.final_prefix == cells).count(),
        monotone_games: rows.iter().filter(|r| r.prefix_monotone).count(),
    }
}

/// Plays one match per seed and checks the observed maxima against `cell_count + 1`
/// and, on small shapes, against the oracle.
pub fn verify_claims(shape: &BoardShape, mode: AdversaryMode, seeds: &[u64]) -> Report {
    let n = shape.cell_count();
    let bound = (n + 1).min(u8::MAX as usize) as u8;
    let mut engine = Engine::new(shape, mode);
    let max_turns = default_max_turns(shape);
    let mut openings = Vec::new();
    let rows: Vec<GameRow> = seeds
        .iter()
        .map(|&s| {
            let t = run_match_with(&mut engine, s, max_turns);
            openings.push(t.events.first().map(|e| e.board_after.clone()));
            row_from_transcript(&t)
        })
        .collect();
    let agg = aggregate(&rows, n);
    let mut claims = Vec::new();

    let worst = rows.iter().map(|r| r.final_max).max().unwrap_or(0);
    claims.push(Claim {
        name: "bound".into(),
        gating: true,
        holds: worst <= bound,
        detail: alloc::format!("largest observed exponent {worst}, bound {bound}"),
    });

    let oracle = if n <= ORACLE_GUARD_CELLS { reachable_max(shape, mode, u64::MAX).ok() } else { None };
    if let Some(o) = &oracle {
        claims.push(Claim {
            name: "oracle-bound".into(),
            gating: true,
            holds: o.max_exponent <= bound,
            detail: alloc::format!("oracle {} vs bound {bound}", o.max_exponent),
        });
        if mode == AdversaryMode::Adversarial {
            // the adversary's own opening would be a minimiser, but games open at random,
            // so each game is held to the value of the board it actually opened with
            let mut solver = Solver::new(shape, mode);
            let over: Vec<u64> = rows
                .iter()
                .zip(&openings)
                .filter(|(r, b)| b.as_ref().is_some_and(|b| r.final_max > solver.player_value(b.raw())))
                .map(|(r, _)| r.seed)
                .collect();
            claims.push(Claim {
                name: "games-within-oracle".into(),
                gating: true,
                holds: over.is_empty(),
                detail: alloc::format!("games above the oracle value of their opening: {over:?}"),
            });
        } else {
            claims.push(Claim {
                name: "games-within-oracle".into(),
                gating: true,
                holds: worst <= o.max_exponent,
                detail: alloc::format!("games reached {worst}, oracle {}", o.max_exponent),
            });
        }
        if mode == AdversaryMode::Cooperative {
            claims.push(Claim {
                name: "formula".into(),
                gating: true,
                holds: o.max_exponent == bound,
                detail: alloc::format!("oracle {} vs cell_count + 1 = {bound}", o.max_exponent),
            });
            if !rows.is_empty() {
                claims.push(Claim {
                    name: "policy-attains-oracle".into(),
                    gating: false,
                    holds: worst == o.max_exponent,
                    detail: alloc::format!("policy games reached {worst}, oracle {}", o.max_exponent),
                });
            }
        }
    }

    Report {
        shape: shape.clone(),
        mode,
        mode_label: mode.label(shape).into(),
        bound,
        rows,
        aggregate: agg,
        oracle,
        claims,
    }
}

/// The witness of a report's oracle result as a transcript action list.
pub fn witness_actions(r: &Report) -> &[Action] {
    r.oracle.as_ref().map(|o| o.witness.as_slice()).unwrap_or(&[])
}
