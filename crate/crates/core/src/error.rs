use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("syntax error at column {}: {message}", .pos + 1)]
    Syntax { pos: usize, message: String },

    #[error("unknown parameter `{name}` at column {}", .pos + 1)]
    UnknownParameter { name: String, pos: usize },

    #[error("division by the zero polynomial at column {}", .pos + 1)]
    ZeroDivisor { pos: usize },

    #[error("division by the zero function")]
    DivisionByZero,

    #[error("pole at evaluation point (x = {x}, y = {y})")]
    Pole { x: String, y: String },

    #[error("M+ is the zero function: the particle loses its dynamics")]
    ZeroMPlus,

    #[error("invalid helicity 2*sigma = {sigma_two} for 2j = {two_j}")]
    InvalidHelicity { two_j: u32, sigma_two: i32 },

    #[error("direction vector has zero length")]
    ZeroDirection,

    #[error("negative E^2 = {value:e} at p = {p}, 2*sigma = {sigma_two}")]
    NegativeEnergySquared { p: f64, sigma_two: i32, value: f64 },

    #[error("gapless mode: E = {energy:e} below tolerance at p = {p}, 2*sigma = {sigma_two}")]
    GaplessMode { p: f64, sigma_two: i32, energy: f64 },

    #[error("eigenvector residual {residual:e} exceeds tolerance for 2*sigma = {sigma_two}")]
    EigenResidual { sigma_two: i32, residual: f64 },

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    #[error("Lambda constraint system has no nonzero solution")]
    EmptyLambdaSpace,

    #[error("Hamiltonian coefficient is not real (imaginary part {imag:e})")]
    NonRealCoefficient { imag: f64 },

    #[error("Hamiltonian coefficient B changes sign across sampled modes")]
    MixedSign,

    #[error("statistics verdict contradicts its own evidence: {0}")]
    Inconsistent(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),

    #[error("catalog entry `{name}` has fixed spin and does not accept 2j = {two_j}")]
    CatalogSpin { name: String, two_j: u32 },

    #[error("polynomial has degree zero")]
    DegreeZero,

    #[error("E^2 restricted to the ray is identically zero")]
    ZeroEnergySquared,

    #[error("monodromy contour radius {radius:e} too small near {center}")]
    RadiusUnderflow { center: String, radius: f64 },
}
