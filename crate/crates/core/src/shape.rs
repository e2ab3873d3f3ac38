//! Board shapes and positions for d-dimensional grids.

use alloc::vec::Vec;
use core::fmt;

/// Largest supported cell count.
pub const MAX_CELLS: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShapeError {
    Empty,
    ZeroDim { axis: usize },
    TooLarge,
    Parse,
}

impl fmt::Display for ShapeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeError::Empty => write!(f, "shape needs at least one dimension"),
            ShapeError::ZeroDim { axis } => write!(f, "dimension {axis} is zero"),
            ShapeError::TooLarge => write!(f, "cell count exceeds 2^32"),
            ShapeError::Parse => write!(f, "expected a shape like 4x4 or 2x2x2"),
        }
    }
}

impl core::error::Error for ShapeError {}

/// Errors raised by geometry queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeometryError {
    InvalidPosition,
    IndexOutOfRange { index: usize, cells: usize },
    NoPredecessor,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::InvalidPosition => write!(f, "position does not lie on the board"),
            GeometryError::IndexOutOfRange { index, cells } => {
                write!(f, "sequence index {index} out of range for {cells} cells")
            }
            GeometryError::NoPredecessor => write!(f, "the head cell has no previous tile"),
        }
    }
}

impl core::error::Error for GeometryError {}

/// Dimension sizes `(n_1, ..., n_d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoardShape {
    dims: Vec<usize>,
}

impl BoardShape {
    pub fn new(dims: &[usize]) -> Result<Self, ShapeError> {
        if dims.is_empty() {
            return Err(ShapeError::Empty);
        }
        let mut total: u64 = 1;
        for (axis, &n) in dims.iter().enumerate() {
            if n == 0 {
                return Err(ShapeError::ZeroDim { axis });
            }
            total = total.checked_mul(n as u64).ok_or(ShapeError::TooLarge)?;
            if total > MAX_CELLS {
                return Err(ShapeError::TooLarge);
            }
        }
        if total > usize::MAX as u64 {
            return Err(ShapeError::TooLarge);
        }
        Ok(BoardShape { dims: dims.to_vec() })
    }

    /// Parses `AxBxC` syntax.
    pub fn parse(s: &str) -> Result<Self, ShapeError> {
        let mut dims = Vec::new();
        for part in s.trim().split(['x', 'X']) {
            let n: usize = part.trim().parse().map_err(|_| ShapeError::Parse)?;
            dims.push(n);
        }
        BoardShape::new(&dims)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn d(&self) -> usize {
        self.dims.len()
    }

    pub fn cell_count(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn contains(&self, p: &Position) -> bool {
        p.0.len() == self.dims.len() && p.0.iter().zip(&self.dims).all(|(c, n)| c < n)
    }

    /// Row-major stride of each axis (last axis fastest).
    pub fn strides(&self) -> Vec<usize> {
        let mut s = alloc::vec![1; self.dims.len()];
        for a in (0..self.dims.len().saturating_sub(1)).rev() {
            s[a] = s[a + 1] * self.dims[a + 1];
        }
        s
    }

    /// Row-major linear index of a position.
    pub fn linear(&self, p: &Position) -> Result<usize, GeometryError> {
        if !self.contains(p) {
            return Err(GeometryError::InvalidPosition);
        }
        let mut idx = 0;
        for (c, n) in p.0.iter().zip(&self.dims) {
            idx = idx * n + c;
        }
        Ok(idx)
    }

    pub fn position(&self, mut idx: usize) -> Position {
        let mut coords = alloc::vec![0; self.dims.len()];
        for a in (0..self.dims.len()).rev() {
            coords[a] = idx % self.dims[a];
            idx /= self.dims[a];
        }
        Position(coords)
    }

    /// All positions in row-major order.
    pub fn positions(&self) -> impl Iterator<Item = Position> + '_ {
        (0..self.cell_count()).map(|i| self.position(i))
    }
}

impl fmt::Display for BoardShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.dims.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

/// Total cell count of a shape.
pub fn cell_count(shape: &BoardShape) -> usize {
    shape.cell_count()
}

/// A d-tuple of cell coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn new(coords: &[usize]) -> Self {
        Position(coords.to_vec())
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    pub fn origin(d: usize) -> Self {
        Position(alloc::vec![0; d])
    }

    /// Number of coordinates in which two positions differ.
    pub fn hamming(&self, other: &Position) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    /// Sum of absolute coordinate differences.
    pub fn manhattan(&self, other: &Position) -> usize {
        self.0.iter().zip(&other.0).map(|(a, b)| a.abs_diff(*b)).sum()
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_counts() {
        assert_eq!(BoardShape::new(&[4, 4]).unwrap().cell_count(), 16);
        assert_eq!(BoardShape::new(&[2, 2]).unwrap().cell_count(), 4);
        assert_eq!(BoardShape::new(&[5, 5, 5]).unwrap().cell_count(), 125);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(BoardShape::new(&[]), Err(ShapeError::Empty));
        assert_eq!(BoardShape::new(&[3, 0]), Err(ShapeError::ZeroDim { axis: 1 }));
        assert_eq!(BoardShape::new(&[1 << 16, 1 << 16]).map(|s| s.cell_count()), Ok(1 << 32));
        assert_eq!(BoardShape::new(&[1 << 16, (1 << 16) + 1]), Err(ShapeError::TooLarge));
        assert_eq!(BoardShape::new(&[usize::MAX, usize::MAX]), Err(ShapeError::TooLarge));
    }

    #[test]
    fn parse_and_display() {
        let s = BoardShape::parse("2x3x4").unwrap();
        assert_eq!(s.dims(), &[2, 3, 4]);
        assert_eq!(alloc::format!("{s}"), "2x3x4");
        assert!(BoardShape::parse("2by3").is_err());
        assert!(BoardShape::parse("").is_err());
    }

    #[test]
    fn linear_round_trip() {
        let s = BoardShape::new(&[2, 3, 4]).unwrap();
        for i in 0..s.cell_count() {
            assert_eq!(s.linear(&s.position(i)).unwrap(), i);
        }
        assert_eq!(s.strides(), alloc::vec![12, 4, 1]);
        assert!(s.linear(&Position::new(&[2, 0, 0])).is_err());
        assert!(s.linear(&Position::new(&[0, 0])).is_err());
    }
}
