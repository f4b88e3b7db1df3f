use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported root system {family}{rank}: {reason}")]
    UnsupportedRootSystem { family: String, rank: usize, reason: String },

    #[error("cannot parse root system name {0:?} (expected FAMILY:RANK, e.g. A:2 or A:1xA:1)")]
    BadSpec(String),

    #[error("Weyl group closure exceeded {bound} elements")]
    WeylGroupTooLarge { bound: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("exponent ν = {nu} does not match the {expected} for rank {rank} with {positive_roots} positive roots")]
    ParityMismatch { nu: u32, rank: usize, positive_roots: usize, expected: &'static str },

    #[error("quadrature did not converge: estimated error {achieved:.3e} exceeds requested {requested:.3e} ({context})")]
    Quadrature { achieved: f64, requested: f64, context: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
