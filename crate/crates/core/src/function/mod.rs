pub mod canon;
pub mod diff;
pub mod eval;
pub mod expr;
pub mod parse;
pub mod poly;

pub use canon::{is_zero, is_zero_with, Canonicalizer, Stage, ZeroDecision};
pub use diff::{dirac, dirac_from_basis, dstar_from_frame, factorization_residual, partial, wave, DiracKind};
pub use eval::{eval, eval_exact, eval_float, Chamber, FloatElement, Mode, Value};
pub use expr::{Expr, Kind};
pub use parse::{parse_element, parse_expr};
