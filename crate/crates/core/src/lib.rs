//! Exact exterior calculus on finitely presented Lie algebroids, Nambu
//! structures, their induced Leibniz algebroids, and modular classes.

pub mod algebroid;
pub mod chart;
pub mod nambu;
pub mod elw;
pub mod error;
pub mod leibniz;
pub mod library;
pub mod linalg;
pub mod model;
pub mod modular;
pub mod random;
pub mod report;
pub mod scalar;
pub mod suite;
pub mod tensor;

pub use chart::Chart;
pub use error::{Error, Result};
pub use scalar::{parse_expr, Decision, Scalar, ZeroConfig};
pub use algebroid::{Algebroid, Presentation};
pub use nambu::{NambuStatus, NambuStructure};
pub use report::{Status, VerificationReport};
pub use tensor::{Blade, ExteriorTensor, Variance};
