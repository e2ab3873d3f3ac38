//! Boards: a shape plus tile exponents (tile value `2^exp`).

use alloc::vec::Vec;
use core::fmt;

use crate::shape::{BoardShape, Position};
use crate::snake::{snake_index, SnakeTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoardError {
    InvalidPosition(Position),
    ZeroExponent(Position),
    Duplicate(Position),
    Occupied(Position),
    BadExponent(u8),
    LengthMismatch { expected: usize, got: usize },
}

impl fmt::Display for BoardError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoardError::InvalidPosition(p) => write!(f, "position {p} is off the board"),
            BoardError::ZeroExponent(p) => write!(f, "tile at {p} has exponent 0"),
            BoardError::Duplicate(p) => write!(f, "position {p} listed twice"),
            BoardError::Occupied(p) => write!(f, "cell {p} is occupied"),
            BoardError::BadExponent(e) => write!(f, "exponent {e} is not allowed here"),
            BoardError::LengthMismatch { expected, got } => {
                write!(f, "expected {expected} cells, got {got}")
            }
        }
    }
}

impl core::error::Error for BoardError {}

/// Dense board: one byte per cell in row-major order, 0 for empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Board {
    shape: BoardShape,
    cells: Vec<u8>,
}

impl Board {
    pub fn empty(shape: &BoardShape) -> Self {
        Board { shape: shape.clone(), cells: alloc::vec![0; shape.cell_count()] }
    }

    pub fn from_cells(shape: &BoardShape, tiles: &[(Position, u8)]) -> Result<Self, BoardError> {
        let mut b = Board::empty(shape);
        for (p, e) in tiles {
            let idx = shape.linear(p).map_err(|_| BoardError::InvalidPosition(p.clone()))?;
            if *e == 0 {
                return Err(BoardError::ZeroExponent(p.clone()));
            }
            if b.cells[idx] != 0 {
                return Err(BoardError::Duplicate(p.clone()));
            }
            b.cells[idx] = *e;
        }
        Ok(b)
    }

    /// Builds a board from raw row-major exponents.
    pub fn from_raw(shape: &BoardShape, cells: Vec<u8>) -> Result<Self, BoardError> {
        if cells.len() != shape.cell_count() {
            return Err(BoardError::LengthMismatch { expected: shape.cell_count(), got: cells.len() });
        }
        Ok(Board { shape: shape.clone(), cells })
    }

    pub fn shape(&self) -> &BoardShape {
        &self.shape
    }

    pub fn raw(&self) -> &[u8] {
        &self.cells
    }

    pub(crate) fn raw_mut(&mut self) -> &mut [u8] {
        &mut self.cells
    }

    pub fn get(&self, p: &Position) -> Option<u8> {
        let idx = self.shape.linear(p).ok()?;
        match self.cells[idx] {
            0 => None,
            e => Some(e),
        }
    }

    pub fn get_index(&self, idx: usize) -> Option<u8> {
        match self.cells.get(idx) {
            Some(&e) if e != 0 => Some(e),
            _ => None,
        }
    }

    /// Places a tile on an empty cell.
    pub fn place(&mut self, p: &Position, exp: u8) -> Result<(), BoardError> {
        let idx = self.shape.linear(p).map_err(|_| BoardError::InvalidPosition(p.clone()))?;
        if exp == 0 {
            return Err(BoardError::ZeroExponent(p.clone()));
        }
        if self.cells[idx] != 0 {
            return Err(BoardError::Occupied(p.clone()));
        }
        self.cells[idx] = exp;
        Ok(())
    }

    pub fn occupied(&self) -> usize {
        self.cells.iter().filter(|&&e| e != 0).count()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(|&e| e == 0)
    }

    pub fn is_full(&self) -> bool {
        self.cells.iter().all(|&e| e != 0)
    }

    pub fn empty_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells.iter().enumerate().filter(|(_, &e)| e == 0).map(|(i, _)| i)
    }

    /// Occupied cells sorted by snake rank.
    pub fn tiles(&self) -> Vec<(Position, u8)> {
        let table = SnakeTable::new(&self.shape);
        table
            .order()
            .iter()
            .filter(|&&i| self.cells[i] != 0)
            .map(|&i| (self.shape.position(i), self.cells[i]))
            .collect()
    }

    /// Sum of tile values, `None` on overflow.
    pub fn value_sum(&self) -> Option<u128> {
        let mut s: u128 = 0;
        for &e in &self.cells {
            if e != 0 {
                let v = 1u128.checked_shl(e as u32)?;
                s = s.checked_add(v)?;
            }
        }
        Some(s)
    }
}

/// Largest exponent on the board.
pub fn max_tile(b: &Board) -> Option<u8> {
    b.cells.iter().copied().filter(|&e| e != 0).max()
}

/// Length of the chain `S_0, S_1, ...` whose exponents descend by exactly one.
pub fn favourable_prefix(b: &Board) -> usize {
    let shape = b.shape();
    let idx = |m: usize| shape.linear(&snake_index(m, shape).expect("in range")).expect("on board");
    let head = b.cells[idx(0)];
    let mut l = 0;
    while l < shape.cell_count() && head as usize > l && b.cells[idx(l)] as usize == head as usize - l {
        l += 1;
    }
    l
}

/// [`favourable_prefix`] against a precomputed table.
pub fn favourable_prefix_with(b: &Board, t: &SnakeTable) -> usize {
    prefix_raw(&b.cells, t)
}

pub(crate) fn prefix_raw(cells: &[u8], t: &SnakeTable) -> usize {
    let head = cells[t.cell(0)] as usize;
    let mut l = 0;
    while l < t.len() && head > l && cells[t.cell(l)] as usize == head - l {
        l += 1;
    }
    l
}

/// True when every occupied cell is on the chain and the chain covers them all.
pub fn is_favourable(b: &Board) -> bool {
    let l = favourable_prefix(b);
    l > 0 && l == b.occupied()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sh(d: &[usize]) -> BoardShape {
        BoardShape::new(d).unwrap()
    }

    fn sample_board() -> Board {
        let s = sh(&[4, 4]);
        let tiles: Vec<(Position, u8)> =
            (0..16).map(|m| (snake_index(m, &s).unwrap(), 17 - m as u8)).collect();
        Board::from_cells(&s, &tiles).unwrap()
    }

    #[test]
    fn sample_board_prefix_and_max() {
        let b = sample_board();
        assert_eq!(favourable_prefix(&b), 16);
        assert_eq!(max_tile(&b), Some(17));
        assert!(is_favourable(&b));
        assert_eq!(favourable_prefix_with(&b, &SnakeTable::new(b.shape())), 16);
    }

    #[test]
    fn prefix_small_cases() {
        let s = sh(&[4, 4]);
        assert_eq!(favourable_prefix(&Board::empty(&s)), 0);
        let b = Board::from_cells(&s, &[(Position::new(&[0, 0]), 5), (Position::new(&[0, 1]), 3)])
            .unwrap();
        assert_eq!(favourable_prefix(&b), 1);
        let b = Board::from_cells(&s, &[(Position::new(&[0, 1]), 3)]).unwrap();
        assert_eq!(favourable_prefix(&b), 0);
    }

    #[test]
    fn prefix_stops_at_exponent_one() {
        let s = sh(&[1, 4]);
        let b = Board::from_cells(
            &s,
            &[(Position::new(&[0, 0]), 2), (Position::new(&[0, 1]), 1), (Position::new(&[0, 2]), 1)],
        )
        .unwrap();
        assert_eq!(favourable_prefix(&b), 2);
    }

    #[test]
    fn max_tile_examples() {
        let s = sh(&[2, 2]);
        assert_eq!(max_tile(&Board::empty(&s)), None);
        let b = Board::from_cells(&s, &[(Position::new(&[0, 0]), 5), (Position::new(&[1, 1]), 3)])
            .unwrap();
        assert_eq!(max_tile(&b), Some(5));
    }

    #[test]
    fn construction_errors() {
        let s = sh(&[2, 2]);
        let p = Position::new(&[0, 0]);
        assert!(matches!(Board::from_cells(&s, &[(p.clone(), 0)]), Err(BoardError::ZeroExponent(_))));
        assert!(matches!(
            Board::from_cells(&s, &[(p.clone(), 1), (p.clone(), 2)]),
            Err(BoardError::Duplicate(_))
        ));
        assert!(matches!(
            Board::from_cells(&s, &[(Position::new(&[2, 0]), 1)]),
            Err(BoardError::InvalidPosition(_))
        ));
        let mut b = Board::empty(&s);
        b.place(&p, 1).unwrap();
        assert_eq!(b.place(&p, 1), Err(BoardError::Occupied(p)));
    }

    #[test]
    fn tiles_in_snake_order() {
        let s = sh(&[2, 2]);
        let b = Board::from_cells(
            &s,
            &[(Position::new(&[1, 0]), 2), (Position::new(&[0, 0]), 5), (Position::new(&[1, 1]), 3)],
        )
        .unwrap();
        let order: Vec<Position> = b.tiles().into_iter().map(|(p, _)| p).collect();
        assert_eq!(order, alloc::vec![Position::new(&[0, 0]), Position::new(&[1, 1]), Position::new(&[1, 0])]);
        assert_eq!(b.value_sum(), Some(32 + 8 + 4));
    }
}
