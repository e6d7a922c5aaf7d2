//! Integral cohomology rings of blow-ups and their total Chern classes.
//!
//! Given a center `X` inside `M` with complex normal bundle, the crate builds
//! `H*(M̃)` as `f*H*(M) ⊕ H*(X){ω, …, ω^{k-1}}`, evaluates the total Chern
//! class of `M̃` through a closed formula and, independently, through the Thom
//! space of the tautological line bundle over the exceptional divisor, and
//! checks the results against Euler characteristic, restriction and rank
//! oracles.
//!
//! ```
//! use blowup_chern::{catalog, BlowupContext, SignConvention};
//!
//! let model = catalog::load("p2_point").unwrap();
//! let ctx = BlowupContext::new(model, SignConvention::Calibrated).unwrap();
//! let c = ctx.total_chern().unwrap();
//! assert_eq!(ctx.display(&c), "1 + (3·H + ω) + 4·H²");
//! ```

pub mod blowup;
pub mod chern;
pub mod cli;
pub mod io;
pub mod lattice;
pub mod model;
pub mod ring;
pub mod thom;

/// Coefficient type of every ring in the crate.
pub type Int = i128;

pub use blowup::{BlowupContext, BlowupElement, BlowupError, SignConvention, VerifyReport};
pub use chern::{ChernError, Pairing, TotalClass};
pub use io::catalog;
pub use model::{EmbeddingModel, ManifoldModel, ModelError};
pub use ring::{GeneratorSpec, GradedElement, Monomial, Ring, RingError, RingMap};
pub use thom::{ThomElement, ThomRing};
