//! Exhaustive game-tree search for the largest reachable tile.
//!
//! Nodes are boards plus the side to act. The value of a node is the largest
//! exponent reached on the way to the end of the game. The player always
//! maximises; the computer maximises in cooperative and random mode,
//! minimises in adversarial mode and follows the deterministic placement rule
//! in paper mode (the paper-mode opening, a 4, is maximised over every cell).
//! Random mode therefore measures plain reachability, same as cooperative.
//!
//! Every placement raises the tile sum, so the tree is a finite DAG and the
//! recursion terminates. Boards are memoised by a nibble packing in snake
//! order.

use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;

use crate::board::Board;
use crate::layout::Layout;
use crate::moves::{apply_move, Move};
use crate::shape::BoardShape;
use crate::strategy::adversary::paper_placement;
use crate::strategy::{Action, AdversaryMode, Placement, SEARCH_GUARD_CELLS};

/// Inclusive cell-count limit of the oracle.
pub const ORACLE_GUARD_CELLS: usize = SEARCH_GUARD_CELLS;

/// State budget used by [`unreachability_check`].
pub const DEFAULT_CAP: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub shape: BoardShape,
    pub mode: AdversaryMode,
    pub max_exponent: u8,
    /// Alternating placements and moves from the empty board.
    pub witness: Vec<Action>,
    pub states_visited: u64,
    /// Set when the cap stopped the search; `max_exponent` is then a lower bound.
    pub partial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    ShapeTooLarge { cells: usize, limit: usize },
    CapExceeded(OracleResult),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::ShapeTooLarge { cells, limit } => {
                write!(f, "{cells} cells exceeds the oracle limit of {limit}")
            }
            OracleError::CapExceeded(r) => write!(
                f,
                "state cap exceeded after {} states; best exponent seen {}",
                r.states_visited, r.max_exponent
            ),
        }
    }
}

impl core::error::Error for OracleError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of expanded states.
    pub cap: u64,
    /// Use the transposition table.
    pub memo: bool,
    /// Stop after this many plies and score the board by its largest tile.
    pub depth_limit: Option<u32>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { cap: u64::MAX, memo: true, depth_limit: None }
    }
}

const UNLIMITED: u32 = u32::MAX;

fn top(cells: &[u8]) -> u8 {
    cells.iter().copied().max().unwrap_or(0)
}

/// Memoised evaluator for one shape and mode.
#[derive(Debug)]
pub struct Solver {
    layout: Layout,
    mode: AdversaryMode,
    opts: SearchOptions,
    memo: HashMap<u64, u8>,
    visited: u64,
    aborted: bool,
    best_seen: u8,
}

impl Solver {
    pub fn new(shape: &BoardShape, mode: AdversaryMode) -> Self {
        Solver::with_options(shape, mode, SearchOptions::default())
    }

    pub fn with_options(shape: &BoardShape, mode: AdversaryMode, opts: SearchOptions) -> Self {
        Solver {
            layout: Layout::new(shape),
            mode,
            opts,
            memo: HashMap::new(),
            visited: 0,
            aborted: false,
            best_seen: 0,
        }
    }

    pub fn states_visited(&self) -> u64 {
        self.visited
    }

    fn root_depth(&self) -> u32 {
        self.opts.depth_limit.unwrap_or(UNLIMITED)
    }

    fn key(&self, cells: &[u8], computer: bool, last: Option<Move>, depth: u32) -> u64 {
        let mut k = self.layout.pack(cells);
        if computer {
            k |= 1 << 32;
            if let (AdversaryMode::Paper, Some(mv)) = (self.mode, last) {
                k |= ((mv.ordinal() as u64) + 1) << 33;
            }
        }
        if depth != UNLIMITED {
            k |= u64::from(depth) << 40;
        }
        k
    }

    fn enter(&mut self, cells: &[u8]) -> bool {
        self.visited += 1;
        self.best_seen = self.best_seen.max(top(cells));
        if self.visited > self.opts.cap {
            self.aborted = true;
        }
        !self.aborted
    }

    /// Value of a player-to-move node.
    pub fn player_value(&mut self, cells: &[u8]) -> u8 {
        let d = self.root_depth();
        self.player(cells, d)
    }

    fn child_depth(depth: u32) -> u32 {
        if depth == UNLIMITED {
            UNLIMITED
        } else {
            depth - 1
        }
    }

    fn player(&mut self, cells: &[u8], depth: u32) -> u8 {
        let k = self.key(cells, false, None, depth);
        if self.opts.memo {
            if let Some(&v) = self.memo.get(&k) {
                return v;
            }
        }
        let mut v = top(cells);
        if !self.enter(cells) || depth == 0 {
            return v;
        }
        let moves: Vec<Move> = self.layout.plan.moves().to_vec();
        let mut merged = Vec::new();
        for mv in moves {
            let mut after = cells.to_vec();
            if self.layout.plan.apply_raw(&mut after, mv, &mut merged) {
                v = v.max(self.computer(&after, Some(mv), Self::child_depth(depth)));
            }
        }
        if self.opts.memo && !self.aborted {
            self.memo.insert(k, v);
        }
        v
    }

    fn placements(&self, cells: &[u8], last: Option<Move>) -> Vec<(usize, u8)> {
        let root = cells.iter().all(|&e| e == 0);
        let empties = self.layout.snake.order().iter().copied().filter(|&i| cells[i] == 0);
        match self.mode {
            AdversaryMode::Paper if root => empties.map(|i| (i, 2)).collect(),
            AdversaryMode::Paper => paper_placement(&self.layout, cells, last)
                .map(|(i, e, _)| alloc::vec![(i, e)])
                .unwrap_or_default(),
            _ => empties.flat_map(|i| [(i, 2), (i, 1)]).collect(),
        }
    }

    fn computer(&mut self, cells: &[u8], last: Option<Move>, depth: u32) -> u8 {
        let k = self.key(cells, true, last, depth);
        if self.opts.memo {
            if let Some(&v) = self.memo.get(&k) {
                return v;
            }
        }
        let here = top(cells);
        if !self.enter(cells) || depth == 0 {
            return here;
        }
        let menu = self.placements(cells, last);
        if menu.is_empty() {
            return here;
        }
        let minimise = self.mode == AdversaryMode::Adversarial;
        let mut agg: Option<u8> = None;
        let mut buf = cells.to_vec();
        for (i, e) in menu {
            buf[i] = e;
            let v = self.player(&buf, Self::child_depth(depth));
            buf[i] = 0;
            agg = Some(match agg {
                None => v,
                Some(a) if minimise => a.min(v),
                Some(a) => a.max(v),
            });
        }
        let v = here.max(agg.unwrap_or(0));
        if self.opts.memo && !self.aborted {
            self.memo.insert(k, v);
        }
        v
    }

    /// Follows value-preserving children from the empty board until `target` appears.
    fn witness(&mut self, target: u8) -> Vec<Action> {
        let shape = self.layout.shape.clone();
        let mut cells = alloc::vec![0u8; self.layout.cells()];
        let mut out = Vec::new();
        let mut last = None;
        let mut depth = self.root_depth();
        let mut computer_to_act = true;
        while top(&cells) < target && depth > 0 {
            let child_depth = Self::child_depth(depth);
            if computer_to_act {
                let mut pick = None;
                for (i, e) in self.placements(&cells, last) {
                    let mut buf = cells.clone();
                    buf[i] = e;
                    if self.player(&buf, child_depth) == target {
                        pick = Some((i, e));
                        break;
                    }
                }
                let Some((i, e)) = pick else { break };
                cells[i] = e;
                out.push(Action::Place(Placement { pos: shape.position(i), exp: e }));
            } else {
                let mut pick = None;
                let mut merged = Vec::new();
                let moves: Vec<Move> = self.layout.plan.moves().to_vec();
                for mv in moves {
                    let mut after = cells.clone();
                    if self.layout.plan.apply_raw(&mut after, mv, &mut merged)
                        && self.computer(&after, Some(mv), child_depth) >= target
                    {
                        pick = Some((mv, after));
                        break;
                    }
                }
                let Some((mv, after)) = pick else { break };
                cells = after;
                last = Some(mv);
                out.push(Action::Move(mv));
            }
            computer_to_act = !computer_to_act;
            depth = child_depth;
        }
        out
    }

    /// Searches from the empty board.
    pub fn solve(&mut self) -> OracleResult {
        let empty = alloc::vec![0u8; self.layout.cells()];
        let d = self.root_depth();
        let v = self.computer(&empty, None, d);
        let partial = self.aborted;
        let max_exponent = if partial { self.best_seen } else { v };
        let witness = if !partial && self.opts.memo { self.witness(max_exponent) } else { Vec::new() };
        OracleResult {
            shape: self.layout.shape.clone(),
            mode: self.mode,
            max_exponent,
            witness,
            states_visited: self.visited,
            partial,
        }
    }
}

fn guard(shape: &BoardShape) -> Result<(), OracleError> {
    let cells = shape.cell_count();
    if cells > ORACLE_GUARD_CELLS {
        return Err(OracleError::ShapeTooLarge { cells, limit: ORACLE_GUARD_CELLS });
    }
    Ok(())
}

/// Exact maximum exponent reachable on `shape` under `mode`.
pub fn reachable_max(shape: &BoardShape, mode: AdversaryMode, cap: u64) -> Result<OracleResult, OracleError> {
    reachable_max_with(shape, mode, SearchOptions { cap, ..SearchOptions::default() })
}

pub fn reachable_max_with(
    shape: &BoardShape,
    mode: AdversaryMode,
    opts: SearchOptions,
) -> Result<OracleResult, OracleError> {
    guard(shape)?;
    let r = Solver::with_options(shape, mode, opts).solve();
    if r.partial {
        Err(OracleError::CapExceeded(r))
    } else {
        Ok(r)
    }
}

struct Reach {
    layout: Layout,
    mode: AdversaryMode,
    target: u8,
    memo: HashMap<u64, bool>,
    visited: u64,
    cap: u64,
    aborted: bool,
}

impl Reach {
    fn key(&self, cells: &[u8], computer: bool, last: Option<Move>) -> u64 {
        let mut k = self.layout.pack(cells);
        if computer {
            k |= 1 << 32;
            if let (AdversaryMode::Paper, Some(mv)) = (self.mode, last) {
                k |= ((mv.ordinal() as u64) + 1) << 33;
            }
        }
        k
    }

    fn bump(&mut self) -> bool {
        self.visited += 1;
        if self.visited > self.cap {
            self.aborted = true;
        }
        !self.aborted
    }

    fn player(&mut self, cells: &[u8]) -> bool {
        if top(cells) >= self.target {
            return true;
        }
        let k = self.key(cells, false, None);
        if let Some(&r) = self.memo.get(&k) {
            return r;
        }
        if !self.bump() {
            return false;
        }
        let mut r = false;
        let mut merged = Vec::new();
        for i in 0..self.layout.plan.moves().len() {
            let mv = self.layout.plan.moves()[i];
            let mut after = cells.to_vec();
            if self.layout.plan.apply_raw(&mut after, mv, &mut merged) && self.computer(&after, Some(mv)) {
                r = true;
                break;
            }
        }
        self.memo.insert(k, r);
        r
    }

    fn computer(&mut self, cells: &[u8], last: Option<Move>) -> bool {
        if top(cells) >= self.target {
            return true;
        }
        let k = self.key(cells, true, last);
        if let Some(&r) = self.memo.get(&k) {
            return r;
        }
        if !self.bump() {
            return false;
        }
        let root = cells.iter().all(|&e| e == 0);
        let empties: Vec<usize> = (0..cells.len()).filter(|&i| cells[i] == 0).collect();
        let mut buf = cells.to_vec();
        let mut try_place = |s: &mut Reach, i: usize, e: u8| {
            buf[i] = e;
            let r = s.player(&buf);
            buf[i] = 0;
            r
        };
        let r = match self.mode {
            AdversaryMode::Paper if root => empties.iter().any(|&i| try_place(self, i, 2)),
            AdversaryMode::Paper => match paper_placement(&self.layout, cells, last) {
                Some((i, e, _)) => try_place(self, i, e),
                None => false,
            },
            AdversaryMode::Adversarial => {
                !empties.is_empty() && empties.iter().all(|&i| try_place(self, i, 1) && try_place(self, i, 2))
            }
            AdversaryMode::Cooperative | AdversaryMode::Random => {
                empties.iter().any(|&i| try_place(self, i, 2) || try_place(self, i, 1))
            }
        };
        self.memo.insert(k, r);
        r
    }
}

/// True iff no play under `mode` produces a tile of exponent `exponent` or more.
///
/// In adversarial mode "play" means what the player can force.
pub fn unreachability_check(shape: &BoardShape, exponent: u8, mode: AdversaryMode) -> Result<bool, OracleError> {
    guard(shape)?;
    let mut r = Reach {
        layout: Layout::new(shape),
        mode,
        target: exponent,
        memo: HashMap::new(),
        visited: 0,
        cap: DEFAULT_CAP,
        aborted: false,
    };
    let empty = alloc::vec![0u8; shape.cell_count()];
    let reached = r.computer(&empty, None);
    if r.aborted {
        return Err(OracleError::CapExceeded(OracleResult {
            shape: shape.clone(),
            mode,
            max_exponent: 0,
            witness: Vec::new(),
            states_visited: r.visited,
            partial: true,
        }));
    }
    Ok(!reached)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplayError {
    /// Step `index` is not legal on the board reached so far.
    IllegalStep { index: usize },
    /// Step `index` breaks the placement/move alternation.
    OutOfTurn { index: usize },
}

impl fmt::Display for ReplayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReplayError::IllegalStep { index } => write!(f, "step {index} is illegal"),
            ReplayError::OutOfTurn { index } => write!(f, "step {index} is out of turn"),
        }
    }
}

impl core::error::Error for ReplayError {}

/// Replays alternating placements and moves from the empty board.
pub fn replay(witness: &[Action], shape: &BoardShape) -> Result<Board, ReplayError> {
    let mut b = Board::empty(shape);
    for (index, a) in witness.iter().enumerate() {
        let computer_turn = index % 2 == 0;
        match a {
            Action::Place(p) => {
                if !computer_turn {
                    return Err(ReplayError::OutOfTurn { index });
                }
                if !(p.exp == 1 || p.exp == 2) || b.place(&p.pos, p.exp).is_err() {
                    return Err(ReplayError::IllegalStep { index });
                }
            }
            Action::Move(mv) => {
                if computer_turn {
                    return Err(ReplayError::OutOfTurn { index });
                }
                let out = apply_move(&b, *mv);
                if !out.changed {
                    return Err(ReplayError::IllegalStep { index });
                }
                b = out.board_after;
            }
        }
    }
    Ok(b)
}
