use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside its domain (pulse id, level component, sample count, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A named physical parameter failed validation.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    /// A numerical invariant does not hold on an input or intermediate value.
    #[error("{property} violated: residual {residual:e} exceeds tolerance {tolerance:e}")]
    Validation {
        property: Property,
        residual: f64,
        tolerance: f64,
    },

    /// An input file could not be read or parsed.
    #[error("input file: {0}")]
    Input(String),
}

/// The invariant named by an [`Error::Validation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Hermiticity,
    Positivity,
    Trace,
    Unitarity,
    Normalization,
    ProbabilityBounds,
}

impl std::fmt::Display for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Property::Hermiticity => "hermiticity",
            Property::Positivity => "positivity",
            Property::Trace => "trace",
            Property::Unitarity => "unitarity",
            Property::Normalization => "normalization",
            Property::ProbabilityBounds => "probability bounds",
        };
        f.write_str(name)
    }
}

impl Error {
    pub(crate) fn invalid_argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn validation(property: Property, residual: f64, tolerance: f64) -> Self {
        Error::Validation {
            property,
            residual,
            tolerance,
        }
    }

    /// Attach a parameter name to an error raised while checking that parameter.
    pub fn for_parameter(self, name: &str) -> Self {
        match self {
            Error::InvalidParameter { .. } => self,
            other => Error::InvalidParameter {
                name: name.to_string(),
                reason: other.to_string(),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
