use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two residues live in different rings.
    #[error("modulus mismatch: 2^{left}-1 vs 2^{right}-1")]
    ModulusMismatch { left: u32, right: u32 },

    /// `gcd(l, 2^n-1) > 1`.
    #[error("{what} is not invertible modulo 2^{n}-1")]
    NotInvertible { what: String, n: u32 },

    /// A parameter is outside the range an operation accepts.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The all-ones word is the second representative of 0 and is never accepted.
    #[error("the all-ones word of length {0} is not a canonical residue")]
    AllOnesWord(u32),

    /// No seed closes the carry recurrence, so the congruence does not hold.
    #[error("no carry sequence exists: s is not l*a modulo 2^{0}-1")]
    Inconsistent(u32),

    /// A closed form failed its own re-verification. Indicates a bug.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
