//! Error type shared by all modules.

use core::fmt;

/// Everything that can go wrong when building models or running solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A physical rate was zero, negative, or not finite.
    InvalidRate { name: &'static str, value: f64 },
    /// Drive amplitude was negative or not finite.
    InvalidDrive { value: f64 },
    /// A detuning grid was empty.
    EmptyGrid,
    /// A grid or cutoff list was not strictly increasing.
    UnsortedGrid,
    /// A search interval did not contain the spectrum center.
    BadInterval { lo: f64, hi: f64 },
    /// Fock cutoff outside the supported range 1..=12.
    FockCutoff { n_max: usize },
    /// Atom number outside the supported range 0..=4.
    AtomCount { n_atoms: u32 },
    /// Hilbert-space dimension exceeds the hard cap.
    DimensionLimit { dim: usize, max: usize },
    /// The trace-constrained steady-state system was singular, i.e. the
    /// Liouvillian kernel is degenerate.
    SingularSteadyState,
    /// The iterative steady-state fallback did not reach its residual
    /// target within the step budget.
    NotConverged { residual: f64, target: f64 },
    /// Integration step too large for the fastest rate in the model.
    StepSize { dt: f64, max: f64 },
    /// A non-finite value appeared during evaluation.
    NonFinite { what: &'static str },
    /// Weak-field amplitudes requested for an undriven model.
    ZeroDrive,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidRate { name, value } => {
                write!(f, "rate `{name}` must be positive and finite, got {value}")
            }
            Error::InvalidDrive { value } => {
                write!(f, "drive amplitude must be nonnegative and finite, got {value}")
            }
            Error::EmptyGrid => write!(f, "detuning grid is empty"),
            Error::UnsortedGrid => write!(f, "grid must be strictly increasing"),
            Error::BadInterval { lo, hi } => {
                write!(f, "search interval [{lo}, {hi}] must contain 0")
            }
            Error::FockCutoff { n_max } => {
                write!(f, "Fock cutoff n_max = {n_max} outside supported range 1..=12")
            }
            Error::AtomCount { n_atoms } => {
                write!(f, "atom number {n_atoms} outside supported range 0..=4")
            }
            Error::DimensionLimit { dim, max } => {
                write!(f, "Hilbert dimension {dim} exceeds cap {max}")
            }
            Error::SingularSteadyState => {
                write!(f, "steady-state system is singular beyond the trace degeneracy")
            }
            Error::NotConverged { residual, target } => {
                write!(f, "steady-state iteration stalled at residual {residual} (target {target})")
            }
            Error::StepSize { dt, max } => {
                write!(f, "step dt = {dt} too large; need dt < {max}")
            }
            Error::NonFinite { what } => write!(f, "non-finite value in {what}"),
            Error::ZeroDrive => write!(f, "weak-field extraction needs a nonzero drive"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
