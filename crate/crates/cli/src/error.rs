use spinstat_core::Error as CoreError;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("invalid argument: {0}")]
    Usage(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("{0}")]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Io { .. } | CliError::Usage(_) => EXIT_PARSE,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Inconsistent(_) => EXIT_INCONSISTENT,
            CliError::Core(e) => core_exit_code(e),
        }
    }
}

/// Input errors → 2, inadmissible specs → 3, anything the pipeline should
/// never produce on a valid spec → 4.
pub fn core_exit_code(e: &CoreError) -> i32 {
    use CoreError::*;
    match e {
        Syntax { .. }
        | UnknownParameter { .. }
        | ZeroDivisor { .. }
        | UnknownCatalog(_)
        | CatalogSpin { .. }
        | ZeroDirection => EXIT_PARSE,
        ZeroMPlus
        | InvalidHelicity { .. }
        | NegativeEnergySquared { .. }
        | GaplessMode { .. }
        | ZeroEnergySquared
        | Pole { .. }
        | DivisionByZero => EXIT_VALIDATION,
        EigenResidual { .. }
        | NumericalBreakdown(_)
        | EmptyLambdaSpace
        | NonRealCoefficient { .. }
        | MixedSign
        | Inconsistent(_)
        | DegreeZero
        | RadiusUnderflow { .. } => EXIT_INCONSISTENT,
    }
}
