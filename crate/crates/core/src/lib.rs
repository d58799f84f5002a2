pub mod dual;
pub mod error;
pub mod formulas;
pub mod manifold;
pub mod models;
pub mod null;
pub mod oracle;
pub mod scalar;
pub mod tensor;
