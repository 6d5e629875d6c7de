//! Exact and numeric algebra for vector fields with a crossing
//! singularity `x ∂/∂x + Σ bᵢ(x, z) ∂/∂zᵢ`.

pub mod coeff;
pub mod error;
pub mod holonomy;
pub mod lie;
pub mod normalform;
pub mod parse;
pub mod resonance;
pub mod series;

pub use coeff::{Coeff, GaussianRational, LaurentPoly};
pub use error::{Error, Result};
pub use lie::{Automorphism, VectorField};
pub use series::{grlex_cmp, grlex_compare, Shape, TransverseSeries, VectorMonomialIndex, ZExp};
