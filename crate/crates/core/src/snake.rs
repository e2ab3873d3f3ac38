//! The snake (boustrophedon) sequence `S` of target cells.
//!
//! In two dimensions row `q` is walked left to right when `q` is even and
//! right to left when odd, so axis 1 is the fast axis. A d-dimensional board
//! is `n_d` layers along the last axis; layer `k` walks the (d-1)-dimensional
//! sequence, reversed when `k` is odd.

use alloc::vec::Vec;

use crate::shape::{BoardShape, GeometryError, Position};

fn index_into(m: usize, dims: &[usize], out: &mut [usize]) {
    match dims.len() {
        1 => out[0] = m,
        2 => {
            let n2 = dims[1];
            let q = m / n2;
            let r = m % n2;
            out[0] = q;
            out[1] = if q.is_multiple_of(2) { r } else { n2 - 1 - r };
        }
        d => {
            let inner: usize = dims[..d - 1].iter().product();
            let k = m / inner;
            let r = m % inner;
            let r = if k.is_multiple_of(2) { r } else { inner - 1 - r };
            out[d - 1] = k;
            index_into(r, &dims[..d - 1], &mut out[..d - 1]);
        }
    }
}

fn rank_of(c: &[usize], dims: &[usize]) -> usize {
    match dims.len() {
        1 => c[0],
        2 => {
            let n2 = dims[1];
            let r = if c[0].is_multiple_of(2) { c[1] } else { n2 - 1 - c[1] };
            c[0] * n2 + r
        }
        d => {
            let inner: usize = dims[..d - 1].iter().product();
            let k = c[d - 1];
            let r = rank_of(&c[..d - 1], &dims[..d - 1]);
            let r = if k.is_multiple_of(2) { r } else { inner - 1 - r };
            k * inner + r
        }
    }
}

/// The `m`-th cell of the snake sequence.
pub fn snake_index(m: usize, shape: &BoardShape) -> Result<Position, GeometryError> {
    let cells = shape.cell_count();
    if m >= cells {
        return Err(GeometryError::IndexOutOfRange { index: m, cells });
    }
    let mut out = alloc::vec![0; shape.d()];
    index_into(m, shape.dims(), &mut out);
    Ok(Position(out))
}

/// Inverse of [`snake_index`].
pub fn snake_rank(p: &Position, shape: &BoardShape) -> Result<usize, GeometryError> {
    if !shape.contains(p) {
        return Err(GeometryError::InvalidPosition);
    }
    Ok(rank_of(p.coords(), shape.dims()))
}

/// The previous tile: the snake predecessor `S_{m-1}` of `p = S_m`.
pub fn prev_tile(p: &Position, shape: &BoardShape) -> Result<Position, GeometryError> {
    let m = snake_rank(p, shape)?;
    if m == 0 {
        return Err(GeometryError::NoPredecessor);
    }
    snake_index(m - 1, shape)
}

/// Precomputed snake order in row-major linear indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnakeTable {
    order: Vec<usize>,
    rank: Vec<usize>,
}

impl SnakeTable {
    pub fn new(shape: &BoardShape) -> Self {
        let n = shape.cell_count();
        let mut order = Vec::with_capacity(n);
        let mut rank = alloc::vec![0; n];
        let mut buf = alloc::vec![0; shape.d()];
        for m in 0..n {
            index_into(m, shape.dims(), &mut buf);
            let mut idx = 0;
            for (c, d) in buf.iter().zip(shape.dims()) {
                idx = idx * d + c;
            }
            order.push(idx);
            rank[idx] = m;
        }
        SnakeTable { order, rank }
    }

    /// Linear index of `S_m`.
    pub fn cell(&self, m: usize) -> usize {
        self.order[m]
    }

    /// Snake rank of a linear index.
    pub fn rank(&self, idx: usize) -> usize {
        self.rank[idx]
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sh(d: &[usize]) -> BoardShape {
        BoardShape::new(d).unwrap()
    }

    fn p(c: &[usize]) -> Position {
        Position::new(c)
    }

    #[test]
    fn head_is_origin() {
        assert_eq!(snake_index(0, &sh(&[4, 4])).unwrap(), p(&[0, 0]));
    }

    #[test]
    fn four_by_four_values() {
        let s = sh(&[4, 4]);
        assert_eq!(snake_index(5, &s).unwrap(), p(&[1, 2]));
        assert_eq!(snake_rank(&p(&[0, 0]), &s).unwrap(), 0);
        assert_eq!(snake_rank(&p(&[1, 2]), &s).unwrap(), 5);
        assert_eq!(snake_rank(&p(&[0, 3]), &s).unwrap(), 3);
        let first: Vec<Position> = (0..8).map(|m| snake_index(m, &s).unwrap()).collect();
        let want = [[0, 0], [0, 1], [0, 2], [0, 3], [1, 3], [1, 2], [1, 1], [1, 0]];
        assert_eq!(first, want.iter().map(|c| p(c)).collect::<Vec<_>>());
    }

    #[test]
    fn cube_order() {
        let s = sh(&[2, 2, 2]);
        let got: Vec<Position> = (0..8).map(|m| snake_index(m, &s).unwrap()).collect();
        let want = [
            [0, 0, 0],
            [0, 1, 0],
            [1, 1, 0],
            [1, 0, 0],
            [1, 0, 1],
            [1, 1, 1],
            [0, 1, 1],
            [0, 0, 1],
        ];
        assert_eq!(got, want.iter().map(|c| p(c)).collect::<Vec<_>>());
        assert_eq!(got[3].manhattan(&got[4]), 1);
    }

    #[test]
    fn prev_tile_examples() {
        let s = sh(&[4, 4]);
        assert_eq!(prev_tile(&p(&[0, 1]), &s).unwrap(), p(&[0, 0]));
        assert_eq!(prev_tile(&p(&[1, 3]), &s).unwrap(), p(&[0, 3]));
        assert_eq!(prev_tile(&p(&[0, 0]), &s), Err(GeometryError::NoPredecessor));
    }

    #[test]
    fn errors() {
        let s = sh(&[2, 2]);
        assert!(snake_index(4, &s).is_err());
        assert!(snake_rank(&p(&[2, 0]), &s).is_err());
    }

    #[test]
    fn one_dimensional_and_single_cell() {
        let s = sh(&[5]);
        assert_eq!(snake_index(3, &s).unwrap(), p(&[3]));
        assert_eq!(snake_index(0, &sh(&[1, 1])).unwrap(), p(&[0, 0]));
    }

    #[test]
    fn table_matches_functions() {
        let s = sh(&[3, 2, 2]);
        let t = SnakeTable::new(&s);
        for m in 0..s.cell_count() {
            let want = s.linear(&snake_index(m, &s).unwrap()).unwrap();
            assert_eq!(t.cell(m), want);
            assert_eq!(t.rank(want), m);
        }
    }
}
