//! Precomputed per-shape tables shared by the strategies and the oracle.

use alloc::vec::Vec;

use crate::moves::FiberPlan;
use crate::shape::BoardShape;
use crate::snake::SnakeTable;

#[derive(Debug, Clone)]
pub struct Layout {
    pub shape: BoardShape,
    pub snake: SnakeTable,
    pub plan: FiberPlan,
    /// Coordinates of each linear index.
    pub coords: Vec<Vec<usize>>,
    /// Rectilinear neighbourhood of each linear index, ascending.
    pub rect: Vec<Vec<usize>>,
}

impl Layout {
    pub fn new(shape: &BoardShape) -> Self {
        let n = shape.cell_count();
        let coords: Vec<Vec<usize>> = (0..n).map(|i| shape.position(i).0).collect();
        let rect = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| coords[i].iter().zip(&coords[j]).filter(|(a, b)| a != b).count() == 1)
                    .collect()
            })
            .collect();
        Layout { shape: shape.clone(), snake: SnakeTable::new(shape), plan: FiberPlan::new(shape), coords, rect }
    }

    pub fn cells(&self) -> usize {
        self.coords.len()
    }

    pub fn is_rect(&self, a: usize, b: usize) -> bool {
        self.rect[a].binary_search(&b).is_ok()
    }

    /// Snake-order nibble packing; valid while `cells <= 15` and exponents stay below 16.
    pub fn pack(&self, cells: &[u8]) -> u64 {
        let mut k = 0u64;
        for &i in self.snake.order().iter().rev() {
            k = (k << 4) | u64::from(cells[i] & 0xF);
        }
        k
    }
}
