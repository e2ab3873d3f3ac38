//! Computer placement strategies and the player policy.

use core::fmt;

use crate::moves::Move;
use crate::shape::{BoardShape, Position};

pub mod adversary;
pub mod player;

pub use adversary::{adversary_open, adversary_respond, Adversary};
pub use player::{player_choose, PlayerPolicy, PlayerPolicyState};

/// Largest shape on which cooperative and adversarial modes search exhaustively.
pub const SEARCH_GUARD_CELLS: usize = 6;

/// Which rule produced a decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Case1,
    Case2,
    Case3,
    Step1,
    Step2,
    Step3,
    Fallback,
}

impl Tag {
    pub const ALL: [Tag; 7] =
        [Tag::Case1, Tag::Case2, Tag::Case3, Tag::Step1, Tag::Step2, Tag::Step3, Tag::Fallback];

    pub fn as_str(&self) -> &'static str {
        match self {
            Tag::Case1 => "case1",
            Tag::Case2 => "case2",
            Tag::Case3 => "case3",
            Tag::Step1 => "step1",
            Tag::Step2 => "step2",
            Tag::Step3 => "step3",
            Tag::Fallback => "fallback",
        }
    }

    pub fn parse(s: &str) -> Option<Tag> {
        Tag::ALL.iter().copied().find(|t| t.as_str() == s)
    }

    pub fn is_player_tag(&self) -> bool {
        matches!(self, Tag::Case1 | Tag::Case2 | Tag::Case3 | Tag::Fallback)
    }

    pub fn is_computer_tag(&self) -> bool {
        matches!(self, Tag::Step1 | Tag::Step2 | Tag::Step3 | Tag::Fallback)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A spawned tile; `exp` is 1 or 2 (value 2 or 4).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Placement {
    pub pos: Position,
    pub exp: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdversaryMode {
    Paper,
    Cooperative,
    Adversarial,
    Random,
}

impl AdversaryMode {
    pub const ALL: [AdversaryMode; 4] =
        [AdversaryMode::Paper, AdversaryMode::Cooperative, AdversaryMode::Adversarial, AdversaryMode::Random];

    pub fn as_str(&self) -> &'static str {
        match self {
            AdversaryMode::Paper => "paper",
            AdversaryMode::Cooperative => "cooperative",
            AdversaryMode::Adversarial => "adversarial",
            AdversaryMode::Random => "random",
        }
    }

    /// Accepts the plain names and the `-greedy` labels.
    pub fn parse(s: &str) -> Option<AdversaryMode> {
        match s {
            "paper" => Some(AdversaryMode::Paper),
            "cooperative" | "cooperative-greedy" => Some(AdversaryMode::Cooperative),
            "adversarial" | "adversarial-greedy" => Some(AdversaryMode::Adversarial),
            "random" => Some(AdversaryMode::Random),
            _ => None,
        }
    }

    /// Whether this mode falls back to a one-ply greedy rule on `shape`.
    pub fn is_greedy_on(&self, shape: &BoardShape) -> bool {
        matches!(self, AdversaryMode::Cooperative | AdversaryMode::Adversarial)
            && shape.cell_count() > SEARCH_GUARD_CELLS
    }

    /// Output label; greedy approximations are named as such.
    pub fn label(&self, shape: &BoardShape) -> &'static str {
        match (self, self.is_greedy_on(shape)) {
            (AdversaryMode::Cooperative, true) => "cooperative-greedy",
            (AdversaryMode::Adversarial, true) => "adversarial-greedy",
            _ => self.as_str(),
        }
    }
}

impl fmt::Display for AdversaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A single game event.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Action {
    Place(Placement),
    Move(Move),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyDecision {
    pub action: Action,
    pub tag: Tag,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrategyError {
    NoLegalMove,
    NoEmptyCell,
    BoardNotEmpty,
    ShapeMismatch,
}

impl fmt::Display for StrategyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyError::NoLegalMove => write!(f, "no legal move: the game is over"),
            StrategyError::NoEmptyCell => write!(f, "no empty cell to place a tile"),
            StrategyError::BoardNotEmpty => write!(f, "the opening needs an empty board"),
            StrategyError::ShapeMismatch => write!(f, "board shape does not match the strategy"),
        }
    }
}

impl core::error::Error for StrategyError {}
