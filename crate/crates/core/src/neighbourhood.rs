//! Rectilinear and diagonal neighbourhoods.
//!
//! `R_p` holds every other cell sharing an axis line with `p`; the diagonal
//! set is the rest of the board minus `p`.

use alloc::vec::Vec;

use crate::shape::{BoardShape, GeometryError, Position};

/// Cells that differ from `p` in exactly one coordinate, ordered by axis then coordinate.
pub fn rectilinear_neighbourhood(
    p: &Position,
    shape: &BoardShape,
) -> Result<Vec<Position>, GeometryError> {
    if !shape.contains(p) {
        return Err(GeometryError::InvalidPosition);
    }
    let mut out = Vec::new();
    for (axis, &n) in shape.dims().iter().enumerate() {
        for c in 0..n {
            if c != p.0[axis] {
                let mut q = p.clone();
                q.0[axis] = c;
                out.push(q);
            }
        }
    }
    Ok(out)
}

/// Cells outside `R_p` and distinct from `p`, in row-major order.
pub fn diagonal_neighbourhood(
    p: &Position,
    shape: &BoardShape,
) -> Result<Vec<Position>, GeometryError> {
    if !shape.contains(p) {
        return Err(GeometryError::InvalidPosition);
    }
    Ok(shape.positions().filter(|q| q.hamming(p) >= 2).collect())
}
