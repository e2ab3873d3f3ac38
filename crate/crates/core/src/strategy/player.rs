//! The deterministic player policy.
//!
//! The player builds the descending chain along the snake `S`. `current_m`
//! names the target cell `S_m`; cells before it are finished and frozen.
//! The head `S_0` is grown toward `cell_count + 1`; afterwards the target
//! `S_m` is grown toward one less than `S_{m-1}`.
//!
//! A move is vetoed when it shortens the favourable prefix or disturbs a
//! frozen cell. Among the rest the policy maximises, in order: the exponent
//! on the target, the number of merges, not accidentally chaining onto the
//! head early, and the largest exponent feeding the target along its
//! rectilinear neighbourhood. Remaining ties go to the higher axis, negative
//! sign first, which makes "row wise" moves (axis 1 in 2-D) preferred.

use alloc::vec::Vec;

use crate::board::{prefix_raw, Board};
use crate::layout::Layout;
use crate::moves::Move;
use crate::shape::BoardShape;
use crate::snake::SnakeTable;
use crate::strategy::{Action, StrategyDecision, StrategyError, Tag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PlayerPolicyState {
    /// Index of the current target cell in `S`.
    pub current_m: usize,
}

impl PlayerPolicyState {
    pub fn new() -> Self {
        PlayerPolicyState { current_m: 0 }
    }

    /// Advances the target past every finished cell of `b`.
    pub fn observe(&mut self, b: &Board) {
        let t = SnakeTable::new(b.shape());
        self.current_m = advance_raw(b.raw(), &t, self.current_m);
    }
}

fn goal(cells: &[u8], t: &SnakeTable, cm: usize) -> Option<usize> {
    if cm == 0 {
        return Some(t.len() + 1);
    }
    match cells[t.cell(cm - 1)] {
        0 | 1 => None,
        e => Some(e as usize - 1),
    }
}

pub(crate) fn advance_raw(cells: &[u8], t: &SnakeTable, mut cm: usize) -> usize {
    let prefix = prefix_raw(cells, t);
    while cm + 1 < t.len() {
        let e = cells[t.cell(cm)];
        if e == 0 || Some(e as usize) != goal(cells, t, cm) || prefix < cm + 1 {
            break;
        }
        cm += 1;
    }
    cm
}

#[derive(Debug, Clone)]
pub struct PlayerPolicy {
    layout: Layout,
    /// Most preferred first.
    preference: Vec<Move>,
}

struct Candidate {
    mv: Move,
    after: Vec<u8>,
    merges: usize,
    prefix: usize,
}

impl PlayerPolicy {
    pub fn new(shape: &BoardShape) -> Self {
        PlayerPolicy::from_layout(&Layout::new(shape))
    }

    pub fn from_layout(layout: &Layout) -> Self {
        let d = layout.shape.d();
        let preference = (0..d).rev().flat_map(|a| [Move::new(a, -1), Move::new(a, 1)]).collect();
        PlayerPolicy { layout: layout.clone(), preference }
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    /// Tie-break order, most preferred first.
    pub fn preference(&self) -> &[Move] {
        &self.preference
    }

    /// The largest `m' >= cm` such that `S_cm .. S_{m'-1}` are finished.
    pub fn advance(&self, cells: &[u8], cm: usize) -> usize {
        advance_raw(cells, &self.layout.snake, cm)
    }

    /// Picks a move for raw cells; `cm` must already be advanced.
    pub fn decide_raw(&self, cells: &[u8], cm: usize) -> Option<(Move, Tag)> {
        let lay = &self.layout;
        let t = &lay.snake;
        let before_prefix = prefix_raw(cells, t);
        let occupied = cells.iter().filter(|&&e| e != 0).count();
        let mut legal = Vec::new();
        for &mv in &self.preference {
            let mut after = cells.to_vec();
            let mut merged = Vec::new();
            if lay.plan.apply_raw(&mut after, mv, &mut merged) {
                let prefix = prefix_raw(&after, t);
                legal.push(Candidate { mv, merges: merged.len(), prefix, after });
            }
        }
        if legal.is_empty() {
            return None;
        }
        debug_assert!(legal.iter().all(|c| c.merges == occupied - c.after.iter().filter(|&&e| e != 0).count()));

        let frozen: Vec<usize> = (0..cm).map(|m| t.cell(m)).collect();
        let allowed: Vec<&Candidate> = legal
            .iter()
            .filter(|c| c.prefix >= before_prefix && frozen.iter().all(|&i| c.after[i] == cells[i]))
            .collect();

        if allowed.is_empty() {
            // preference order is already the iteration order, so the first maximum wins
            let best = legal
                .iter()
                .fold(None::<&Candidate>, |acc, c| match acc {
                    Some(a) if a.prefix >= c.prefix => Some(a),
                    _ => Some(c),
                })
                .expect("non-empty");
            return Some((best.mv, Tag::Fallback));
        }

        let head = t.cell(cm);
        let score = |c: &Candidate| {
            let h = c.after[head];
            let accidental = cm == 0 && c.prefix >= 2;
            let feeder = lay.rect[head]
                .iter()
                .filter(|&&j| t.rank(j) >= cm)
                .map(|&j| c.after[j])
                .max()
                .unwrap_or(0);
            (h, c.merges, !accidental, feeder)
        };
        let mut best = allowed[0];
        let mut best_score = score(best);
        for &c in &allowed[1..] {
            let s = score(c);
            if s > best_score {
                best = c;
                best_score = s;
            }
        }

        let before_t = cells[head];
        let after_t = best.after[head];
        let tag = if (before_t == 0 && after_t == 2) || (before_t == 2 && after_t == 3) {
            Tag::Case1
        } else if best.merges > 0 {
            Tag::Case2
        } else {
            let occ = |v: &[u8]| lay.rect[head].iter().filter(|&&j| v[j] != 0).count();
            if occ(&best.after) > occ(cells) {
                Tag::Case3
            } else {
                Tag::Fallback
            }
        };
        Some((best.mv, tag))
    }

    pub fn choose(&self, b: &Board, st: &PlayerPolicyState) -> Result<StrategyDecision, StrategyError> {
        if b.shape() != &self.layout.shape {
            return Err(StrategyError::ShapeMismatch);
        }
        let cm = self.advance(b.raw(), st.current_m);
        let (mv, tag) = self.decide_raw(b.raw(), cm).ok_or(StrategyError::NoLegalMove)?;
        Ok(StrategyDecision { action: Action::Move(mv), tag })
    }
}

/// The policy's move for `b` given its progress `st`.
pub fn player_choose(b: &Board, st: &PlayerPolicyState) -> Result<StrategyDecision, StrategyError> {
    PlayerPolicy::new(b.shape()).choose(b, st)
}
