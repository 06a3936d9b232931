use thiserror::Error;

use crate::geometry::Cell;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("family {0} is outside 0..=11")]
    FamilyOutOfRange(u32),

    #[error("order {0} is not supported (must be in {1}..={2})")]
    OrderOutOfRange(u32, u32, u32),

    #[error("invalid quadrant rule for quadrant {quadrant}: {reason}")]
    InvalidRule { quadrant: usize, reason: String },

    #[error("broken connectivity between quadrant {from} and quadrant {to}")]
    BrokenConnectivity { from: usize, to: usize },

    #[error("curve of order {order} must have {expected} cells, got {actual}")]
    CellCount {
        order: u32,
        expected: usize,
        actual: usize,
    },

    #[error("cell ({}, {}) is outside the order-{order} grid", cell.col, cell.row)]
    CellOutOfGrid { cell: Cell, order: u32 },

    #[error("orders differ: {0} vs {1}")]
    OrderMismatch(u32, u32),

    #[error("word of length {actual} cannot encode an order-{order} curve (needs {expected})")]
    WordLength {
        order: u32,
        expected: usize,
        actual: usize,
    },

    #[error("invalid move letter {0:?}")]
    InvalidLetter(char),

    #[error("walk leaves the grid at stroke {0}")]
    WalkOutOfBounds(usize),

    #[error("walk revisits a cell at stroke {0}")]
    SelfIntersection(usize),

    #[error("index {index} is outside 0..4^{order}")]
    IndexOutOfRange { index: u64, order: u32 },

    #[error("census at order {0} is not tractable (supported: 2..=3)")]
    CensusTooLarge(u32),
}
