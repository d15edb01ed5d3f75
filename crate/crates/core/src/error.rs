use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet size must be at least 2")]
    AlphabetTooSmall,
    #[error("word length must be at least 1")]
    EmptyWord,
    #[error("symbol {symbol} is out of range for alphabet size {q}")]
    InvalidDigit { symbol: String, q: String },
    #[error("cannot parse word: {0}")]
    Parse(String),
    #[error("block {block} of the binary word encodes a value >= q")]
    InvalidBlock { block: usize },
    #[error("bit length {len} is not a multiple of block width {block}")]
    RaggedBits { len: usize, block: usize },
    #[error("{p} does not divide {n}")]
    NotADivisor { p: usize, n: usize },
    #[error("word is periodic; Lyndon ranking needs fundamental period n")]
    NotAperiodic,
    #[error("words have different length or alphabet")]
    ShapeMismatch,
    #[error("programs have different layer counts or alphabets")]
    LayerMismatch,
    #[error("direct q-ary path needs a small alphabet (got q = {0})")]
    AlphabetTooLarge(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("conjugates collide: the element lies in a proper subfield")]
    ConjugatesCollide,
    #[error("coefficient does not lie in the base field")]
    CoefficientNotInBase,
    #[error("value does not lie in the base field")]
    NotInBaseField,
    #[error("factorization check failed: {0}")]
    BadFactorization(String),
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("modulus is not primitive")]
    NotPrimitive,
    #[error("invalid advice: {0}")]
    InvalidAdvice(String),
    #[error("word is not binary")]
    NotBinary,
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("constant word has no distinguished rotation")]
    ConstantString,
    #[error("input too big for brute-force enumeration")]
    TooBig,
    #[error("indices start at 1")]
    ZeroIndex,
    #[error("index is larger than the number of rows")]
    TooLarge,
    #[error("column 0 is not a parity-check column")]
    ZeroColumn,
    #[error("designed distance out of range")]
    DistanceOutOfRange,
}

pub type Result<T> = std::result::Result<T, Error>;
