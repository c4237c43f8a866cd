//! Symbolic partial derivatives and the Dirac operators built from them.

use std::str::FromStr;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::element::{gram_matrix, CliffordElement};
use crate::error::{Error, Result};
use crate::function::expr::{Expr, Kind};
use crate::linalg::RatMatrix;
use crate::signature::Signature;

/// `∂f/∂x_{i+1}` for a zero-based axis `i`.
pub fn partial(f: &Expr, i: usize) -> Expr {
    assert!(i < f.sig().dim(), "axis {i} outside {}", f.sig());
    let mut memo = FxHashMap::default();
    partial_rec(f, i, &mut memo)
}

fn partial_rec(f: &Expr, i: usize, memo: &mut FxHashMap<u64, Expr>) -> Expr {
    if let Some(d) = memo.get(&f.id()) {
        return d.clone();
    }
    let sig = f.sig();
    let d = match f.kind() {
        Kind::Const(_) => Expr::zero(sig),
        Kind::Coord(j) => {
            if *j == i {
                Expr::one(sig)
            } else {
                Expr::zero(sig)
            }
        }
        Kind::VectorX => Expr::constant(CliffordElement::generator(sig, i)),
        Kind::Add(a, b) => partial_rec(a, i, memo).add(&partial_rec(b, i, memo)),
        Kind::Mul(a, b) => {
            let da = partial_rec(a, i, memo);
            let db = partial_rec(b, i, memo);
            da.mul(b).add(&a.mul(&db))
        }
        Kind::Inv(u) => {
            let du = partial_rec(u, i, memo);
            if du.is_zero_const() {
                Expr::zero(sig)
            } else {
                f.mul(&du).mul(f).neg()
            }
        }
        Kind::AbsPow(rho, s) => {
            let drho = partial_rec(rho, i, memo);
            if drho.is_zero_const() {
                Expr::zero(sig)
            } else {
                f.scale(s).mul(&rho.inv()).mul(&drho)
            }
        }
        Kind::Sgn(_) => Expr::zero(sig),
        Kind::Part(a, b) => partial_rec(a, i, memo).part(*b),
    };
    memo.insert(f.id(), d.clone());
    d
}

/// Which Dirac-type operator to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DiracKind {
    /// `Σ_{j≤p} e_j ∂_j - Σ_{j>p} e_j ∂_j`, acting from the left.
    D,
    /// `Σ_j e_j ∂_j`, acting from the left.
    Dstar,
    /// `D` with the generators multiplied on the right.
    RightD,
    /// `Dstar` with the generators multiplied on the right.
    RightDstar,
}

impl DiracKind {
    pub fn is_right(self) -> bool {
        matches!(self, DiracKind::RightD | DiracKind::RightDstar)
    }

    pub fn is_signed(self) -> bool {
        matches!(self, DiracKind::D | DiracKind::RightD)
    }

    pub fn name(self) -> &'static str {
        match self {
            DiracKind::D => "D",
            DiracKind::Dstar => "Dstar",
            DiracKind::RightD => "right-D",
            DiracKind::RightDstar => "right-Dstar",
        }
    }
}

impl FromStr for DiracKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "D" => Ok(DiracKind::D),
            "Dstar" | "D*" => Ok(DiracKind::Dstar),
            "right-D" | "Dright" => Ok(DiracKind::RightD),
            "right-Dstar" | "Dstar-right" => Ok(DiracKind::RightDstar),
            _ => Err(Error::InvalidParameter(format!("unknown operator '{s}'"))),
        }
    }
}

/// Applies `Σ_{j,k} e_j M_{jk} ∂_k` to `f`, with `e_j` on the left or right.
pub fn first_order(f: &Expr, coeffs: &RatMatrix, right: bool) -> Expr {
    let sig = f.sig();
    let n = sig.dim();
    let partials: Vec<Expr> = (0..n).map(|k| partial(f, k)).collect();
    let mut out = Expr::zero(sig);
    for j in 0..n {
        let mut inner = Expr::zero(sig);
        for (k, dk) in partials.iter().enumerate() {
            let m = &coeffs[(j, k)];
            if !m.is_zero() {
                inner = inner.add(&dk.scale(m));
            }
        }
        if inner.is_zero_const() {
            continue;
        }
        let ej = Expr::constant(CliffordElement::generator(sig, j));
        out = out.add(&if right { inner.mul(&ej) } else { ej.mul(&inner) });
    }
    out
}

pub fn dirac(f: &Expr, kind: DiracKind) -> Expr {
    let sig = f.sig();
    let coeffs = if kind.is_signed() { gram_matrix(&sig) } else { RatMatrix::identity(sig.dim()) };
    first_order(f, &coeffs, kind.is_right())
}

/// `Σ_{j≤p} ∂_j² f - Σ_{j>p} ∂_j² f`.
pub fn wave(f: &Expr) -> Expr {
    let sig = f.sig();
    let mut out = Expr::zero(sig);
    for j in 0..sig.dim() {
        let d2 = partial(&partial(f, j), j);
        out = if sig.q_of(j) > 0 { out.add(&d2) } else { out.sub(&d2) };
    }
    out
}

/// `DDf + □f`, which vanishes identically.
pub fn factorization_residual(f: &Expr) -> Expr {
    dirac(&dirac(f, DiracKind::D), DiracKind::D).add(&wave(f))
}

/// Rows of `frame` are the basis vectors `e'_i` in standard coordinates.
/// Returns the coefficient matrix of `Σ_{λ,μ} e'_λ [B⁻¹]_{λμ} ∂/∂x'_μ` in
/// the standard frame, where `B` is the Gram matrix of the new basis.
pub fn dirac_coefficients_from_frame(sig: &Signature, frame: &RatMatrix) -> Result<RatMatrix> {
    check_frame(sig, frame)?;
    let b_inv = frame_gram(sig, frame).inverse().ok_or(Error::SingularGram)?;
    Ok(&(&frame.transpose() * &b_inv) * frame)
}

fn check_frame(sig: &Signature, frame: &RatMatrix) -> Result<()> {
    let n = sig.dim();
    if frame.rows() != n || frame.cols() != n {
        return Err(Error::Dimension(format!("{}x{} frame for {sig}", frame.rows(), frame.cols())));
    }
    Ok(())
}

/// Gram matrix `B(e'_i, e'_j)` of the basis given by the rows of `frame`.
pub fn frame_gram(sig: &Signature, frame: &RatMatrix) -> RatMatrix {
    &(frame * &gram_matrix(sig)) * &frame.transpose()
}

/// The Dirac operator written in the basis given by the rows of `frame`.
/// Agrees with [`dirac`] with `DiracKind::D` for every invertible frame.
pub fn dirac_from_basis(frame: &RatMatrix, f: &Expr) -> Result<Expr> {
    let coeffs = dirac_coefficients_from_frame(&f.sig(), frame)?;
    Ok(first_order(f, &coeffs, false))
}

/// `Σ_i e'_i ∂/∂x'_i` for the basis given by the rows of `frame`: the
/// all-plus operator, which depends on the frame.
pub fn dstar_from_frame(frame: &RatMatrix, f: &Expr) -> Result<Expr> {
    check_frame(&f.sig(), frame)?;
    Ok(first_order(f, &(&frame.transpose() * frame), false))
}
