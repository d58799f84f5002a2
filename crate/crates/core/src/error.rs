use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    /// A point lies outside the chart domain or a warping function is not positive there.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("shape mismatch in {context}: expected {expected}, found {found}")]
    Shape {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("invalid specification: {0}")]
    Validation(String),
    #[error("degenerate metric: {0}")]
    Degeneracy(String),
    #[error("invalid null plane: {0}")]
    Plane(String),
    #[error("cannot construct null vector: {0}")]
    Construction(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("signature error: {0}")]
    Signature(String),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("missing derivative data: {0}")]
    Capability(String),
    #[error("serialization: {0}")]
    Serialization(String),
}

impl GeometryError {
    pub(crate) fn shape(context: &'static str, expected: usize, found: usize) -> Self {
        Self::Shape {
            context,
            expected,
            found,
        }
    }

    /// True for errors caused by evaluating outside a chart's domain.
    pub fn is_domain(&self) -> bool {
        matches!(self, Self::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, GeometryError>;
