//! Exact Clifford algebras `Cl(p,q)`, Vahlen matrices and conformal
//! invariance of the Dirac equation.

pub mod blade;
pub mod conformal;
pub mod element;
pub mod error;
pub mod exec;
pub mod function;
pub mod invariance;
pub mod linalg;
pub mod lipschitz;
pub mod matrix;
pub mod orthogonal;
pub mod rational;
pub mod signature;
pub mod suite;

pub use blade::Blade;
pub use element::{CliffordElement, Involution, Vector};
pub use error::{Error, Result};
pub use rational::Rational;
pub use signature::Signature;
