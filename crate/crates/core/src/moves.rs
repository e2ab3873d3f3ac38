//! Slide-and-merge moves.
//!
//! A move slides every tile along `axis` toward the `sign` end. Each 1-D
//! fiber is compacted; equal neighbours merge once, scanning from the
//! destination end, and a merged tile does not merge again in the same move.

use alloc::vec::Vec;
use core::fmt;

use crate::board::Board;
use crate::shape::{BoardShape, Position};

/// One of the `2d` slide directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub axis: usize,
    /// `-1` or `+1`.
    pub sign: i8,
}

impl Move {
    pub const fn new(axis: usize, sign: i8) -> Self {
        Move { axis, sign }
    }

    pub fn is_valid_for(&self, shape: &BoardShape) -> bool {
        self.axis < shape.d() && (self.sign == 1 || self.sign == -1)
    }

    /// Position in [`all_moves`].
    pub fn ordinal(&self) -> usize {
        self.axis * 2 + usize::from(self.sign > 0)
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { '-' } else { '+' };
        write!(f, "{}{}", s, self.axis)
    }
}

/// All `2d` moves: axis 0 negative, axis 0 positive, axis 1 negative, ...
pub fn all_moves(d: usize) -> Vec<Move> {
    (0..d).flat_map(|a| [Move::new(a, -1), Move::new(a, 1)]).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveOutcome {
    pub board_after: Board,
    /// Target cell and resulting exponent of each merge.
    pub merges: Vec<(Position, u8)>,
    pub changed: bool,
}

/// Compacts `line` (index 0 is the destination end) in place.
/// Pushes the index of every merged cell to `merged` and reports whether anything changed.
pub fn compact_line(line: &mut [u8], merged: &mut Vec<usize>) -> bool {
    let before_len = merged.len();
    let mut write = 0;
    let mut last_free = false;
    let mut changed = false;
    for read in 0..line.len() {
        let e = line[read];
        if e == 0 {
            continue;
        }
        line[read] = 0;
        if write > 0 && last_free && line[write - 1] == e {
            line[write - 1] = e + 1;
            merged.push(write - 1);
            last_free = false;
            changed = true;
        } else {
            if write != read {
                changed = true;
            }
            line[write] = e;
            write += 1;
            last_free = true;
        }
    }
    debug_assert!(changed || merged.len() == before_len);
    changed
}

/// Fibers of every move as lists of linear indices, destination end first.
#[derive(Debug, Clone)]
pub struct FiberPlan {
    moves: Vec<Move>,
    fibers: Vec<Vec<Vec<usize>>>,
}

impl FiberPlan {
    pub fn new(shape: &BoardShape) -> Self {
        let moves = all_moves(shape.d());
        let strides = shape.strides();
        let mut fibers = Vec::with_capacity(moves.len());
        for mv in &moves {
            let n = shape.dims()[mv.axis];
            let stride = strides[mv.axis];
            let mut per = Vec::new();
            for start in 0..shape.cell_count() {
                if !(start / stride).is_multiple_of(n) {
                    continue;
                }
                let mut f: Vec<usize> = (0..n).map(|k| start + k * stride).collect();
                if mv.sign > 0 {
                    f.reverse();
                }
                per.push(f);
            }
            fibers.push(per);
        }
        FiberPlan { moves, fibers }
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn fibers(&self, mv: Move) -> &[Vec<usize>] {
        &self.fibers[mv.ordinal()]
    }

    /// Applies a move to raw cells; returns whether anything changed.
    /// Linear indices of merge targets are pushed to `merged`.
    pub fn apply_raw(&self, cells: &mut [u8], mv: Move, merged: &mut Vec<usize>) -> bool {
        let mut changed = false;
        let mut buf = [0u8; 64];
        let mut local = Vec::new();
        for f in &self.fibers[mv.ordinal()] {
            let n = f.len();
            let mut heap;
            let line: &mut [u8] = if n <= buf.len() {
                &mut buf[..n]
            } else {
                heap = alloc::vec![0u8; n];
                &mut heap[..]
            };
            for (k, &i) in f.iter().enumerate() {
                line[k] = cells[i];
            }
            local.clear();
            if compact_line(line, &mut local) {
                changed = true;
                for (k, &i) in f.iter().enumerate() {
                    cells[i] = line[k];
                }
                merged.extend(local.iter().map(|&k| f[k]));
            }
        }
        changed
    }

    pub fn legal_raw(&self, cells: &[u8], mv: Move) -> bool {
        for f in &self.fibers[mv.ordinal()] {
            let mut seen_empty = false;
            let mut prev = 0u8;
            for &i in f {
                let e = cells[i];
                if e == 0 {
                    seen_empty = true;
                } else {
                    if seen_empty || e == prev {
                        return true;
                    }
                    prev = e;
                }
            }
        }
        false
    }
}

/// Slides the whole board.
pub fn apply_move(b: &Board, mv: Move) -> MoveOutcome {
    let shape = b.shape();
    if !mv.is_valid_for(shape) {
        return MoveOutcome { board_after: b.clone(), merges: Vec::new(), changed: false };
    }
    let plan = FiberPlan::new(shape);
    apply_move_with(b, mv, &plan)
}

/// [`apply_move`] with a precomputed plan.
pub fn apply_move_with(b: &Board, mv: Move, plan: &FiberPlan) -> MoveOutcome {
    let mut after = b.clone();
    let mut merged = Vec::new();
    let changed = plan.apply_raw(after.raw_mut(), mv, &mut merged);
    let merges = merged
        .into_iter()
        .map(|i| (b.shape().position(i), after.raw()[i]))
        .collect();
    MoveOutcome { board_after: after, merges, changed }
}

/// Moves that change the board.
pub fn legal_moves(b: &Board) -> Vec<Move> {
    let plan = FiberPlan::new(b.shape());
    legal_moves_with(b, &plan)
}

pub fn legal_moves_with(b: &Board, plan: &FiberPlan) -> Vec<Move> {
    plan.moves().iter().copied().filter(|&mv| plan.legal_raw(b.raw(), mv)).collect()
}

/// No empty cell and no legal move.
pub fn is_game_over(b: &Board) -> bool {
    b.is_full() && legal_moves(b).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(v: &[u8]) -> (Vec<u8>, usize) {
        let mut l = v.to_vec();
        let mut m = Vec::new();
        compact_line(&mut l, &mut m);
        (l, m.len())
    }

    #[test]
    fn fiber_examples() {
        assert_eq!(line(&[1, 1]), (alloc::vec![2, 0], 1));
        assert_eq!(line(&[1, 1, 1, 1]), (alloc::vec![2, 2, 0, 0], 2));
        assert_eq!(line(&[2, 1, 1, 0]), (alloc::vec![2, 2, 0, 0], 1));
        assert_eq!(line(&[1, 1, 1]), (alloc::vec![2, 1, 0], 1));
        assert_eq!(line(&[0, 0, 3]), (alloc::vec![3, 0, 0], 0));
    }

    fn sh(d: &[usize]) -> BoardShape {
        BoardShape::new(d).unwrap()
    }

    #[test]
    fn whole_board_slide() {
        let s = sh(&[2, 2]);
        let b = Board::from_cells(&s, &[(Position::new(&[0, 1]), 1), (Position::new(&[1, 1]), 1)])
            .unwrap();
        let out = apply_move(&b, Move::new(0, -1));
        assert!(out.changed);
        assert_eq!(out.merges, alloc::vec![(Position::new(&[0, 1]), 2)]);
        assert_eq!(out.board_after.get(&Position::new(&[0, 1])), Some(2));
        assert_eq!(out.board_after.occupied(), 1);
        let out = apply_move(&b, Move::new(1, 1));
        assert!(!out.changed);
        assert_eq!(out.board_after, b);
    }

    #[test]
    fn legal_moves_examples() {
        let s = sh(&[2, 2]);
        assert!(legal_moves(&Board::empty(&s)).is_empty());
        let b = Board::from_cells(&s, &[(Position::new(&[0, 0]), 1)]).unwrap();
        assert_eq!(legal_moves(&b), alloc::vec![Move::new(0, 1), Move::new(1, 1)]);
        let full = Board::from_cells(
            &s,
            &[
                (Position::new(&[0, 0]), 1),
                (Position::new(&[0, 1]), 2),
                (Position::new(&[1, 0]), 3),
                (Position::new(&[1, 1]), 4),
            ],
        )
        .unwrap();
        assert!(legal_moves(&full).is_empty());
    }

    #[test]
    fn game_over_examples() {
        let s = sh(&[2, 2]);
        assert!(!is_game_over(&Board::empty(&s)));
        let checker = Board::from_cells(
            &s,
            &[
                (Position::new(&[0, 0]), 1),
                (Position::new(&[0, 1]), 2),
                (Position::new(&[1, 0]), 2),
                (Position::new(&[1, 1]), 1),
            ],
        )
        .unwrap();
        assert!(is_game_over(&checker));
        let twos = Board::from_raw(&s, alloc::vec![1, 1, 1, 1]).unwrap();
        assert!(!is_game_over(&twos));
    }

    #[test]
    fn three_d_move() {
        let s = sh(&[2, 2, 2]);
        let b = Board::from_cells(&s, &[(Position::new(&[1, 1, 0]), 1), (Position::new(&[1, 1, 1]), 1)])
            .unwrap();
        let out = apply_move(&b, Move::new(2, 1));
        assert_eq!(out.merges, alloc::vec![(Position::new(&[1, 1, 1]), 2)]);
        assert!(!apply_move(&b, Move::new(0, 1)).changed);
        assert!(apply_move(&b, Move::new(0, -1)).changed);
    }

    #[test]
    fn invalid_move_is_noop() {
        let s = sh(&[2, 2]);
        let b = Board::from_cells(&s, &[(Position::new(&[0, 1]), 1)]).unwrap();
        assert!(!apply_move(&b, Move::new(2, 1)).changed);
        assert!(!apply_move(&b, Move { axis: 0, sign: 0 }).changed);
    }
}
