use core::fmt;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the operation's domain.
    Domain {
        op: &'static str,
        reason: &'static str,
    },
    /// Argument sits on (or within rounding of) a pole.
    Pole { op: &'static str },
    /// NaN or infinity supplied where a finite value is required.
    NonFinite { op: &'static str },
    /// A truncated series or product hit its term cap before meeting the
    /// requested tolerance.
    CapExceeded { op: &'static str, terms: usize },
    /// Theta series whose terms grow before they decay (|Im v| too large
    /// for the nome).
    DivergenceRisk { op: &'static str },
    /// Adaptive quadrature exhausted its panel budget.
    NonConvergence { op: &'static str, panels: usize },
    /// A principal power landed on the branch cut.
    BranchCut { op: &'static str },
    /// Not enough usable points for a least-squares fit.
    InsufficientData { needed: usize, got: usize },
}

impl Error {
    /// Stable identifier, printed by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "DomainError",
            Error::Pole { .. } => "PoleError",
            Error::NonFinite { .. } => "NonFiniteError",
            Error::CapExceeded { .. } => "CapExceededError",
            Error::DivergenceRisk { .. } => "DivergenceRiskError",
            Error::NonConvergence { .. } => "NonConvergenceError",
            Error::BranchCut { .. } => "BranchCutError",
            Error::InsufficientData { .. } => "InsufficientDataError",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { op, reason } => write!(f, "{op}: domain error: {reason}"),
            Error::Pole { op } => write!(f, "{op}: argument is a pole"),
            Error::NonFinite { op } => write!(f, "{op}: non-finite argument"),
            Error::CapExceeded { op, terms } => write!(
                f,
                "{op}: term cap of {terms} reached before tolerance; q is too close to 1 for this strategy"
            ),
            Error::DivergenceRisk { op } => {
                write!(f, "{op}: |Im v| too large for the nome, series terms grow")
            }
            Error::NonConvergence { op, panels } => {
                write!(f, "{op}: quadrature did not converge within {panels} panels")
            }
            Error::BranchCut { op } => write!(f, "{op}: principal branch cut reached"),
            Error::InsufficientData { needed, got } => {
                write!(f, "need at least {needed} positive-error points for a fit, got {got}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
