use thiserror::Error;

use crate::grid::CellAddr;

pub type Result<T, E = LabyError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabyError {
    #[error("pattern has no white cells")]
    EmptyPattern,
    #[error("cell ({col}, {row}) is outside a grid of width {width}")]
    BadAddress { col: usize, row: usize, width: usize },
    #[error("width {width} exceeds the materialization cap {cap}")]
    TooLarge { width: u64, cap: u64 },
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("expected exactly one vertical and one horizontal exit pair, found {vertical} and {horizontal}")]
    MissingExits { vertical: usize, horizontal: usize },
    #[error("pattern is not a labyrinth pattern")]
    NotLabyrinth,
    #[error("pattern graph is not a tree")]
    NotTree,
    #[error("cell ({}, {}) is black", .0.col, .0.row)]
    NotWhite(CellAddr),
    #[error("no path between ({}, {}) and ({}, {})", .0.col, .0.row, .1.col, .1.row)]
    Unreachable(CellAddr, CellAddr),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}
