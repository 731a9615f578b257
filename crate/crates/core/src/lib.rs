//! Labyrinth patterns and the mixed labyrinth fractals built from them.
//!
//! A pattern is an `m x m` grid of black and white squares. Composing a
//! sequence of patterns by substitution yields the white squares of each
//! level; the exit-to-exit paths through those levels approximate the arcs of
//! the limit set, and their counts give its box-counting dimension.

pub mod dimension;
pub mod error;
pub mod generators;
pub mod grid;
pub mod paths;
pub mod props;
pub mod render;

pub use error::{LabyError, Result};
pub use generators::{decorate, plain_cross, snake_cross, Chirality, SnakeSpec};
pub use grid::{compose, compose_sequence, make_pattern, read_pattern, write_pattern, CellAddr, Limits, Pattern};
pub use props::{core, validate, Exit, ExitSet, ValidationReport};
