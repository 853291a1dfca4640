use alloc::string::String;
use core::fmt;

/// Failures of the algorithms. Validation problems use [`crate::ValidationReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A 64-bit matrix entry overflowed.
    Overflow,
    /// Materializing a power would exceed the cell cap.
    CapExceeded { needed: u64, cap: usize },
    /// An orbit period above the configured cap was requested.
    PeriodCapExceeded { period: usize, cap: usize },
    /// The operation needs a binary incidence matrix.
    NotBinary,
    /// The operation needs a mixing incidence matrix.
    NotMixing,
    /// A word is not an admissible primitive cyclic word.
    BadOrbit(String),
    /// Two interval codes coincide, so they cannot be ordered.
    IdenticalCodes,
    /// A periodic s-label found no periodic u-label with the same word.
    NoMatchingULabel { i: usize, eps: i8 },
    /// Singularity classes are inconsistent (odd size, extra partners, bad genus).
    Inconsistent(String),
    /// An argument is outside the accepted range.
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Overflow => write!(f, "matrix entry overflow beyond 64 bits"),
            Error::CapExceeded { needed, cap } => {
                write!(f, "power needs {} cells, above the cap of {}", needed, cap)
            }
            Error::PeriodCapExceeded { period, cap } => {
                write!(f, "period {} is above the cap of {}", period, cap)
            }
            Error::NotBinary => write!(f, "incidence matrix is not binary"),
            Error::NotMixing => write!(f, "incidence matrix is not mixing"),
            Error::BadOrbit(s) => write!(f, "bad orbit: {}", s),
            Error::IdenticalCodes => write!(f, "identical codes cannot be ordered"),
            Error::NoMatchingULabel { i, eps } => {
                write!(f, "no matching u-label for periodic s-label ({},{:+})", i + 1, eps)
            }
            Error::Inconsistent(s) => write!(f, "inconsistent data: {}", s),
            Error::InvalidArgument(s) => write!(f, "invalid argument: {}", s),
        }
    }
}
