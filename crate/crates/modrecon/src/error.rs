//! Crate-wide error type.

use std::fmt;

/// Errors reported by signal, kernel, optimizer, and harness operations.
#[derive(Debug)]
pub enum Error {
    /// A length or cutoff precondition on a signal was violated.
    InvalidDimension(String),
    /// Two sequences that must have equal length do not.
    LengthMismatch { expected: usize, got: usize },
    /// Two grids that must have equal shape do not.
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    /// Trimming left fewer than two interior samples.
    EmptyInterior,
    /// Noise cannot be scaled against a zero-energy signal.
    ZeroEnergyInput,
    /// Kernel period must be at least 1.
    InvalidPeriod(usize),
    /// Record length is not divisible by the sampling period.
    IndivisibleLength { len: usize, period: usize },
    /// A kernel and a sampled series disagree on the period.
    PeriodMismatch { kernel: usize, series: usize },
    /// Kernel taps do not fit in the requested record length.
    KernelTooLong { taps: usize, len: usize },
    /// More modules requested than the period admits.
    ModuleCountExceeded { modules: usize, max: usize },
    /// Lowpass cutoff reaches into the replica band.
    CutoffTooWide { cutoff: usize, limit: usize },
    /// Impulse-train banks exist only for even periods.
    OddPeriod(usize),
    /// Module shift index outside 0..=T/2.
    ShiftOutOfRange { shift: usize, max: usize },
    /// Passband rows extend beyond the supported bin range.
    PassbandTooWide { max_bin: usize, limit: usize },
    /// The design matrix is identically zero.
    DegenerateSystem,
    /// Coefficient vector length does not match the system.
    CoeffLengthMismatch { expected: usize, got: usize },
    /// Joint 2-D system has more unknowns than equations.
    JointSystemTooLarge { unknowns: usize, rows: usize },
    /// A coefficient table line could not be parsed.
    MalformedTable { line: usize, reason: String },
    /// No table record matches the requested key.
    KeyNotFound(String),
    /// Hybrid iteration variants need a module bank.
    MissingBank,
    /// Iterate energy exceeded the divergence guard.
    Divergence { iteration: usize },
    /// PGM header is not a maxval-255 grayscale P2/P5 header.
    MalformedHeader(String),
    /// PGM pixel payload ended early.
    TruncatedData { expected: usize, got: usize },
    /// Underlying I/O failure.
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension(msg) => write!(f, "invalid dimension: {msg}"),
            Error::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            Error::ShapeMismatch { expected, got } => write!(
                f,
                "shape mismatch: expected {}x{}, got {}x{}",
                expected.0, expected.1, got.0, got.1
            ),
            Error::EmptyInterior => write!(f, "trim leaves fewer than 2 interior samples"),
            Error::ZeroEnergyInput => write!(f, "input signal has zero energy"),
            Error::InvalidPeriod(t) => write!(f, "invalid period {t}: must be >= 1"),
            Error::IndivisibleLength { len, period } => {
                write!(f, "length {len} is not divisible by period {period}")
            }
            Error::PeriodMismatch { kernel, series } => {
                write!(
                    f,
                    "kernel period {kernel} does not match series period {series}"
                )
            }
            Error::KernelTooLong { taps, len } => {
                write!(f, "kernel with {taps} taps does not fit in {len} points")
            }
            Error::ModuleCountExceeded { modules, max } => write!(
                f,
                "{modules} modules exceed the maximum floor(T/2) = {max} for this period"
            ),
            Error::CutoffTooWide { cutoff, limit } => {
                write!(
                    f,
                    "cutoff bin {cutoff} must be strictly below N/(2T) = {limit}"
                )
            }
            Error::OddPeriod(t) => {
                write!(f, "impulse-train bank needs an even period, got {t}")
            }
            Error::ShiftOutOfRange { shift, max } => {
                write!(f, "module shift {shift} outside 0..={max}")
            }
            Error::PassbandTooWide { max_bin, limit } => {
                write!(f, "passband bin {max_bin} must be below {limit}")
            }
            Error::DegenerateSystem => write!(f, "design matrix is identically zero"),
            Error::CoeffLengthMismatch { expected, got } => {
                write!(
                    f,
                    "coefficient count {got} does not match system width {expected}"
                )
            }
            Error::JointSystemTooLarge { unknowns, rows } => {
                write!(
                    f,
                    "joint system has {unknowns} unknowns but only {rows} rows"
                )
            }
            Error::MalformedTable { line, reason } => {
                write!(f, "malformed coefficient table at line {line}: {reason}")
            }
            Error::KeyNotFound(key) => write!(f, "no coefficient record for key {key}"),
            Error::MissingBank => write!(f, "hybrid variant requires a module bank"),
            Error::Divergence { iteration } => {
                write!(f, "iteration diverged at step {iteration}")
            }
            Error::MalformedHeader(msg) => write!(f, "malformed PGM header: {msg}"),
            Error::TruncatedData { expected, got } => {
                write!(
                    f,
                    "truncated PGM data: expected {expected} pixels, got {got}"
                )
            }
            Error::Io(e) => write!(f, "I/O error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
