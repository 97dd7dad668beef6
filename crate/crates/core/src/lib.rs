//! Exact computation of the map from syzygy matrices of rational curves in
//! `P^n` to morphisms `O(2) -> O(d+q)^a + O(d+q+1)^b`, together with exact
//! Jacobian-rank certificates for its dominance.

pub mod batch;
pub mod certify;
pub mod expr;
pub mod homog;
pub mod matrix;
pub mod oracle;
pub mod pipeline;
pub mod rank;
pub mod reference;
pub mod scalar;
