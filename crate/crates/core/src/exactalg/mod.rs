//! Exact linear algebra over ℤ, ℚ and 𝔽_p.

pub mod cohom;
pub mod field;
pub mod linalg;
pub mod matrix;
pub mod smith;
pub mod subquotient;

pub use cohom::{cohomology_of_pair, GroupSummary, IntegralCohomology};
pub use field::{fmt_scalar, int, Coefficients, Scalar};
pub use matrix::Matrix;
pub use smith::{smith, IntMatrix, SmithDecomposition};
pub use subquotient::Subquotient;
