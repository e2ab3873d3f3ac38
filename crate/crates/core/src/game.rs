//! Game state and turn alternation. The computer moves first.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::board::{max_tile, Board};
use crate::moves::{apply_move, is_game_over};
use crate::shape::BoardShape;
use crate::strategy::{
    Action, Adversary, AdversaryMode, PlayerPolicy, PlayerPolicyState, StrategyDecision, StrategyError, Tag,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Actor {
    Computer,
    Player,
}

impl Actor {
    pub fn as_str(&self) -> &'static str {
        match self {
            Actor::Computer => "computer",
            Actor::Player => "player",
        }
    }

    pub fn other(&self) -> Actor {
        match self {
            Actor::Computer => Actor::Player,
            Actor::Player => Actor::Computer,
        }
    }
}

impl fmt::Display for Actor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    /// Zero-based event index.
    pub turn: usize,
    pub actor: Actor,
    pub action: Action,
    /// Present for machine decisions.
    pub tag: Option<Tag>,
    pub board_after: Board,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameError {
    GameOver,
    NotYourTurn { expected: Actor },
    IllegalAction(String),
    Strategy(StrategyError),
}

impl fmt::Display for GameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameError::GameOver => write!(f, "the game is over"),
            GameError::NotYourTurn { expected } => write!(f, "it is the {expected}'s turn"),
            GameError::IllegalAction(why) => write!(f, "illegal action: {why}"),
            GameError::Strategy(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for GameError {}

impl From<StrategyError> for GameError {
    fn from(e: StrategyError) -> Self {
        GameError::Strategy(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    pub board: Board,
    pub to_act: Actor,
    pub history: Vec<Event>,
    pub seed: u64,
    pub policy: PlayerPolicyState,
    pub mode: AdversaryMode,
}

impl GameState {
    pub fn new(shape: &BoardShape, mode: AdversaryMode, seed: u64) -> Self {
        GameState {
            board: Board::empty(shape),
            to_act: Actor::Computer,
            history: Vec::new(),
            seed,
            policy: PlayerPolicyState::new(),
            mode,
        }
    }

    pub fn shape(&self) -> &BoardShape {
        self.board.shape()
    }

    pub fn is_over(&self) -> bool {
        is_game_over(&self.board)
    }

    pub fn max_exponent(&self) -> u8 {
        max_tile(&self.board).unwrap_or(0)
    }

    /// Applies `action` for `actor` after checking turn order and legality.
    pub fn apply(&mut self, actor: Actor, action: Action, tag: Option<Tag>) -> Result<&Event, GameError> {
        if self.is_over() {
            return Err(GameError::GameOver);
        }
        if actor != self.to_act {
            return Err(GameError::NotYourTurn { expected: self.to_act });
        }
        match (&action, actor) {
            (Action::Place(p), Actor::Computer) => {
                if p.exp != 1 && p.exp != 2 {
                    return Err(GameError::IllegalAction(alloc::format!("exponent {} is not 1 or 2", p.exp)));
                }
                self.board
                    .place(&p.pos, p.exp)
                    .map_err(|e| GameError::IllegalAction(alloc::format!("{e}")))?;
            }
            (Action::Move(mv), Actor::Player) => {
                if !mv.is_valid_for(self.shape()) {
                    return Err(GameError::IllegalAction(alloc::format!("move {mv} does not exist")));
                }
                let out = apply_move(&self.board, *mv);
                if !out.changed {
                    return Err(GameError::IllegalAction(alloc::format!("move {mv} changes nothing")));
                }
                self.policy.observe(&self.board);
                self.board = out.board_after;
            }
            (Action::Place(_), Actor::Player) => {
                return Err(GameError::IllegalAction("the player moves, it does not place".into()))
            }
            (Action::Move(_), Actor::Computer) => {
                return Err(GameError::IllegalAction("the computer places, it does not move".into()))
            }
        }
        self.to_act = actor.other();
        let turn = self.history.len();
        self.history.push(Event { turn, actor, action, tag, board_after: self.board.clone() });
        Ok(self.history.last().expect("just pushed"))
    }

    pub fn last_move(&self) -> Option<crate::moves::Move> {
        self.history.iter().rev().find_map(|e| match e.action {
            Action::Move(m) => Some(m),
            Action::Place(_) => None,
        })
    }
}

/// Both machine sides for one shape and mode.
#[derive(Debug)]
pub struct Engine {
    adversary: Adversary,
    policy: PlayerPolicy,
}

impl Engine {
    pub fn new(shape: &BoardShape, mode: AdversaryMode) -> Self {
        let adversary = Adversary::new(shape, mode);
        let policy = PlayerPolicy::from_layout(adversary.layout());
        Engine { adversary, policy }
    }

    pub fn shape(&self) -> &BoardShape {
        self.adversary.shape()
    }

    pub fn mode(&self) -> AdversaryMode {
        self.adversary.mode()
    }

    pub fn label(&self) -> &'static str {
        self.adversary.label()
    }

    /// What the side to act would do; does not change `state`.
    pub fn decide(&mut self, state: &GameState) -> Result<StrategyDecision, GameError> {
        if state.is_over() {
            return Err(GameError::GameOver);
        }
        match state.to_act {
            Actor::Computer if state.board.is_empty() => Ok(self.adversary.open(state.seed)),
            Actor::Computer => Ok(self.adversary.respond(
                &state.board,
                state.last_move(),
                state.seed,
                state.history.len() as u64,
                &state.policy,
            )?),
            Actor::Player => Ok(self.policy.choose(&state.board, &state.policy)?),
        }
    }
}

/// Plays one event for whichever side is to act.
pub fn run_policy_turn(state: &mut GameState, engine: &mut Engine) -> Result<(), GameError> {
    let d = engine.decide(state)?;
    let actor = state.to_act;
    state.apply(actor, d.action, Some(d.tag))?;
    Ok(())
}
