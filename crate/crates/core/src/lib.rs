//! Division sudokus: latin squares all of whose conjugates are sudokus.
//!
//! Symbols, rows and columns are 0-based internally; text I/O is 1-based.

pub mod algebra;
pub mod classification;
pub mod corpus;
pub mod enumeration;
pub mod error;
pub mod invariants;
pub mod io;
pub mod multipart;
pub mod partition;
pub mod perm;
pub mod random;
pub mod square;
pub mod sudoku;
pub mod verify;

pub use error::{Error, Result};
pub use partition::{SudokuPartition, TriPartition};
pub use perm::Permutation;
pub use square::{ConjugateLabel, Isotopism, LatinSquare, PartialLatinSquare};
