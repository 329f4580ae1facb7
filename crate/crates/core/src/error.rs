use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("universe size {n} outside 1..={max}")]
    UniverseSize { n: u32, max: u32 },
    #[error("mask {mask:#x} has bits outside a universe of size {n}")]
    MaskOutOfRange { mask: u64, n: u32 },
    #[error("element {elem} outside 1..={n}")]
    ElementOutOfRange { elem: u64, n: u32 },
    #[error("cover limit {0} outside 1..=8")]
    CoverLimit(u32),
    #[error("arity k={0} must be at least 2")]
    Arity(u32),
    #[error("family must be nonempty")]
    EmptyFamily,
    #[error("invalid parameters k={k}, n={n}: {reason}")]
    Params { k: u32, n: u32, reason: &'static str },
    #[error("block index {index} outside 1..={max}")]
    BlockIndex { index: usize, max: usize },
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("starting family is not {k}-wise intersecting")]
    NotKwise { k: u32 },
    #[error("malformed witness: {0}")]
    Witness(String),
    #[error("cover backends disagree: {0}")]
    BackendMismatch(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
