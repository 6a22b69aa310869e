//! Exact computations around HR-forms: the path module and standard modules
//! `V(λ)`, verification of HR-forms and the resulting Lie algebra action,
//! decomposition into cyclic summands, and p-adic lattices with divided
//! powers, Weyl filtrations and tilting verdicts.

pub mod error;
pub mod graded;
pub mod hrform;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod padic;
pub mod paths;
pub mod roots;
pub mod scalar;

pub use error::{HrError, Result};
pub use graded::{BlockForm, GradedModule, GradedOp, GradedVector, Subspace};
pub use linalg::Matrix;
pub use roots::{RootSystem, UpSet, Weight};
pub use scalar::{Field, Rat, Ring};
