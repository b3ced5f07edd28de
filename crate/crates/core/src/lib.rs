//! Entropic conjugation toolkit.
//!
//! - [`algebra`]: exact linear combinations of subset entropies, conjugation,
//!   the `u_k` basis and symmetry classification.
//! - [`metrics`]: TC, DTC, TSE, interaction information, O- and S-information.
//! - [`dist`]: discrete joint distributions and plug-in entropy evaluation.
//! - [`pid`]: PID atoms as monotone Boolean functions and their duality.
//! - [`spin`]: Boltzmann spin ensembles, `u_k` profiles and PCA.

pub mod algebra;
pub mod dist;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod pca;
pub mod pid;
pub mod rational;
pub mod spin;
pub mod subset;

pub use algebra::{
    classify, from_u_basis, mutual_information_expr, span_dimensions, to_u_basis, u_expression,
    u_inner_product, EntropyExpression, SymmetryClass, UBasisVector,
};
pub use error::{Error, Result};
pub use subset::SubsetIndex;
