use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("enumeration cap exceeded in {what}: needs {needed} work units, cap is {cap}")]
    CapExceeded { what: String, needed: u128, cap: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("level {0} is degenerate for this operation")]
    DegenerateLevel(u32),

    #[error("coset {v} is not constant: {w1} and {w2} give residues {r1} and {r2}")]
    NonConstantCoset {
        v: String,
        w1: String,
        w2: String,
        r1: u64,
        r2: u64,
    },

    #[error("invalid stabilizer group: {0}")]
    InvalidStabilizer(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Default work budget for every exponential loop.
pub const DEFAULT_CAP: u64 = 1 << 22;

/// Fails with `CapExceeded` when `needed` work units exceed `cap`.
pub fn check_cap(what: &str, needed: u128, cap: u64) -> Result<()> {
    if needed > cap as u128 {
        return Err(Error::CapExceeded {
            what: what.to_string(),
            needed,
            cap,
        });
    }
    Ok(())
}

/// 2^e as u128, saturating for huge exponents.
pub fn pow2(e: usize) -> u128 {
    if e >= 127 {
        u128::MAX
    } else {
        1u128 << e
    }
}
