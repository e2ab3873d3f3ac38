//! Generalised 2048 on d-dimensional boards.
//!
//! Geometry and move mechanics live in [`shape`], [`snake`], [`neighbourhood`],
//! [`board`] and [`moves`]. [`strategy`] holds the computer and player
//! policies, [`oracle`] the exhaustive search, and [`game`] / [`harness`]
//! drive matches and transcripts.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod board;
pub mod game;
pub mod harness;
pub mod layout;
pub mod moves;
pub mod neighbourhood;
pub mod oracle;
pub mod shape;
pub mod snake;
pub mod strategy;

pub use board::{favourable_prefix, is_favourable, max_tile, Board, BoardError};
pub use moves::{all_moves, apply_move, is_game_over, legal_moves, Move, MoveOutcome};
pub use neighbourhood::{diagonal_neighbourhood, rectilinear_neighbourhood};
pub use shape::{cell_count, BoardShape, GeometryError, Position, ShapeError};
pub use snake::{prev_tile, snake_index, snake_rank, SnakeTable};
pub use game::{run_policy_turn, Actor, Engine, Event, GameError, GameState};
pub use harness::{replay_transcript, run_match, verify_claims, Outcome, Report, Transcript};
pub use oracle::{reachable_max, replay, unreachability_check, OracleResult};
pub use strategy::{
    adversary_open, adversary_respond, player_choose, Action, AdversaryMode, Placement, PlayerPolicyState,
    StrategyDecision, Tag,
};
