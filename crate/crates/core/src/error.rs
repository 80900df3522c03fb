use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("order {order} is not a perfect square")]
    NotSquareOrder { order: usize },
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("not a permutation: {0}")]
    NotPermutation(String),
    #[error("symbol {symbol} repeated in row {row}")]
    RowRepeat { row: usize, symbol: usize },
    #[error("symbol {symbol} repeated in column {col}")]
    ColumnRepeat { col: usize, symbol: usize },
    #[error("symbol {symbol} out of range 1..={order} at row {row}, column {col}")]
    SymbolOutOfRange {
        row: usize,
        col: usize,
        symbol: usize,
        order: usize,
    },
    #[error("malformed input at line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("tri-partition is not synchronized")]
    NotSynchronized,
    #[error("not a division sudoku: {0}")]
    NotDivisionSudoku(String),
    #[error("square does not extend the canonical template")]
    NotTemplateExtension,
    #[error("operation requires rank {expected}, found rank {found}")]
    UnsupportedRank { expected: usize, found: usize },
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("invalid construction parameter: {0}")]
    InvalidParameter(String),
    #[error("invariant kinds differ")]
    KindMismatch,
    #[error("incomplete extension list: {0}")]
    IncompleteInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
