//! Point evaluation of expressions, exactly or in double precision.

use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::blade::{blade_product, Blade};
use crate::element::{CliffordElement, Involution};
use crate::error::{Error, Result};
use crate::function::expr::{Expr, Kind};
use crate::rational::Rational;
use crate::signature::Signature;

/// Declared signs of the scalar bases under `abs_pow` and `sgn`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chamber {
    signs: BTreeMap<Expr, i8>,
}

impl Chamber {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, base: Expr, sign: i8) -> Self {
        self.declare(base, sign);
        self
    }

    pub fn declare(&mut self, base: Expr, sign: i8) {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        self.signs.insert(base, sign);
    }

    pub fn sign_of(&self, base: &Expr) -> Option<i8> {
        self.signs.get(base).copied()
    }

    pub fn bases(&self) -> impl Iterator<Item = (&Expr, i8)> {
        self.signs.iter().map(|(e, s)| (e, *s))
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Fails with `ChamberIncomplete` unless every base in `f` has a sign.
    pub fn covers(&self, f: &Expr) -> Result<()> {
        for b in f.chamber_bases() {
            if !self.signs.contains_key(&b) {
                return Err(Error::ChamberIncomplete(b.to_string()));
            }
        }
        Ok(())
    }

    /// The chamber of `f` containing `point`: every base of `f` gets the sign
    /// it takes there. Fails when the point sits on a sign boundary.
    pub fn containing(f: &Expr, point: &[f64]) -> Result<Chamber> {
        let mut ch = Chamber::new();
        for b in f.chamber_bases() {
            let v = eval_float(&b, point, &ch)?.scalar();
            if v.abs() < 1e-12 {
                return Err(Error::ChamberMismatch(format!("point lies on the boundary of {b}")));
            }
            ch.declare(b, if v > 0.0 { 1 } else { -1 });
        }
        Ok(ch)
    }

    /// Merges the declarations of `other`; conflicting signs are an error.
    pub fn merge(&mut self, other: &Chamber) -> Result<()> {
        for (b, s) in other.bases() {
            match self.sign_of(b) {
                Some(t) if t != s => return Err(Error::ChamberMismatch(format!("conflicting signs for {b}"))),
                _ => self.declare(b.clone(), s),
            }
        }
        Ok(())
    }
}

impl Serialize for Chamber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(self.signs.iter().map(|(e, v)| (e.to_string(), *v)))
    }
}

/// Evaluation mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            _ => Err(Error::InvalidParameter(format!("unknown mode '{s}'"))),
        }
    }
}

/// A multivector with dense `f64` coefficients indexed by blade mask.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatElement {
    sig: Signature,
    coeffs: Vec<f64>,
}

impl FloatElement {
    pub fn zero(sig: Signature) -> Self {
        Self { sig, coeffs: vec![0.0; sig.blade_count()] }
    }

    pub fn scalar_value(sig: Signature, v: f64) -> Self {
        let mut out = Self::zero(sig);
        out.coeffs[0] = v;
        out
    }

    pub fn from_exact(e: &CliffordElement) -> Self {
        Self { sig: e.sig(), coeffs: e.to_f64_dense() }
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, b: Blade) -> f64 {
        self.coeffs[b.0 as usize]
    }

    pub fn scalar(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { sig: self.sig, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { sig: self.sig, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { sig: self.sig, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![0.0; self.coeffs.len()];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                let (sign, blade) = blade_product(Blade(i as u32), Blade(j as u32), &self.sig);
                out[blade.0 as usize] += f64::from(sign) * a * b;
            }
        }
        Self { sig: self.sig, coeffs: out }
    }

    pub fn involution(&self, kind: Involution) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if kind.sign(Blade(i as u32)) < 0 { -c } else { *c })
            .collect();
        Self { sig: self.sig, coeffs }
    }

    fn scalar_norm(&self, kind: Involution) -> Option<f64> {
        let bar = self.involution(kind);
        let n = self.mul(&bar);
        let tol = 1e-12 * n.max_abs().max(1e-300);
        n.coeffs[1..].iter().all(|c| c.abs() <= tol).then_some(n.coeffs[0])
    }

    /// Inverse, or `None` when the element is numerically singular.
    pub fn invert(&self) -> Option<Self> {
        let scale = self.max_abs();
        if scale == 0.0 {
            return None;
        }
        if self.coeffs[1..].iter().all(|c| *c == 0.0) {
            return Some(Self::scalar_value(self.sig, 1.0 / self.coeffs[0]));
        }
        for kind in [Involution::Conjugation, Involution::Reversal] {
            if let Some(n) = self.scalar_norm(kind) {
                if n.abs() <= 1e-13 * scale * scale {
                    return None;
                }
                return Some(self.involution(kind).scale(1.0 / n));
            }
        }
        self.invert_dense(scale)
    }

    #[allow(clippy::needless_range_loop)]
    fn invert_dense(&self, scale: f64) -> Option<Self> {
        let size = self.coeffs.len();
        let mut m = vec![vec![0.0; size + 1]; size];
        for j in 0..size {
            for (a, &c) in self.coeffs.iter().enumerate() {
                if c != 0.0 {
                    let (sign, blade) = blade_product(Blade(a as u32), Blade(j as u32), &self.sig);
                    m[blade.0 as usize][j] = f64::from(sign) * c;
                }
            }
        }
        m[0][size] = 1.0;
        for col in 0..size {
            let piv = (col..size).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
            if m[piv][col].abs() <= 1e-13 * scale {
                return None;
            }
            m.swap(col, piv);
            for r in 0..size {
                if r != col {
                    let f = m[r][col] / m[col][col];
                    if f != 0.0 {
                        for k in col..=size {
                            m[r][k] -= f * m[col][k];
                        }
                    }
                }
            }
        }
        Some(Self { sig: self.sig, coeffs: (0..size).map(|i| m[i][size] / m[i][i]).collect() })
    }
}

impl fmt::Display for FloatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(Blade, f64)> =
            self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0.0).map(|(i, c)| (Blade(i as u32), *c)).collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        terms.sort_by(|a, b| a.0.display_cmp(b.0));
        for (i, (b, c)) in terms.into_iter().enumerate() {
            match (i, c < 0.0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if b == Blade::SCALAR {
                write!(f, "{}", c.abs())?;
            } else {
                write!(f, "{}*{b}", c.abs())?;
            }
        }
        Ok(())
    }
}

impl Serialize for FloatElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Result of [`eval`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Exact(CliffordElement),
    Float(FloatElement),
}

impl Value {
    pub fn to_float(&self) -> FloatElement {
        match self {
            Value::Exact(e) => FloatElement::from_exact(e),
            Value::Float(f) => f.clone(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(e) => write!(f, "{e}"),
            Value::Float(v) => write!(f, "{v}"),
        }
    }
}

/// Evaluates `f` at a rational point.
pub fn eval(f: &Expr, point: &[Rational], chamber: &Chamber, mode: Mode) -> Result<Value> {
    match mode {
        Mode::Exact => eval_exact(f, point, chamber).map(Value::Exact),
        Mode::Float => {
            let p: Vec<f64> = point.iter().map(Rational::to_f64).collect();
            eval_float(f, &p, chamber).map(Value::Float)
        }
    }
}

fn check_point_len(f: &Expr, n: usize) -> Result<()> {
    if n != f.sig().dim() {
        return Err(Error::Dimension(format!("point of length {n} in {}", f.sig())));
    }
    Ok(())
}

fn check_sign(chamber: &Chamber, base: &Expr, sign: i32) -> Result<()> {
    if base.as_const().is_some() {
        return Ok(());
    }
    let declared = chamber.sign_of(base).ok_or_else(|| Error::ChamberIncomplete(base.to_string()))?;
    if sign == 0 {
        return Err(Error::ChamberMismatch(format!("{base} vanishes at the point")));
    }
    if sign != i32::from(declared) {
        return Err(Error::ChamberMismatch(format!("{base} has sign {sign}, declared {declared}")));
    }
    Ok(())
}

/// Exact evaluation; powers must resolve to rationals.
pub fn eval_exact(f: &Expr, point: &[Rational], chamber: &Chamber) -> Result<CliffordElement> {
    check_point_len(f, point.len())?;
    let mut memo = FxHashMap::default();
    exact_rec(f, point, chamber, &mut memo)
}

fn exact_rec(
    f: &Expr,
    point: &[Rational],
    chamber: &Chamber,
    memo: &mut FxHashMap<u64, CliffordElement>,
) -> Result<CliffordElement> {
    if let Some(v) = memo.get(&f.id()) {
        return Ok(v.clone());
    }
    let sig = f.sig();
    let v = match f.kind() {
        Kind::Const(c) => c.clone(),
        Kind::Coord(i) => CliffordElement::scalar(sig, point[*i].clone()),
        Kind::VectorX => CliffordElement::vector(sig, point),
        Kind::Add(a, b) => &exact_rec(a, point, chamber, memo)? + &exact_rec(b, point, chamber, memo)?,
        Kind::Mul(a, b) => &exact_rec(a, point, chamber, memo)? * &exact_rec(b, point, chamber, memo)?,
        Kind::Inv(a) => exact_rec(a, point, chamber, memo)?
            .invert()
            .map_err(|_| Error::Pole(format!("{a} is not invertible at the point")))?,
        Kind::AbsPow(a, s) => {
            let base = exact_rec(a, point, chamber, memo)?.scalar_part();
            check_sign(chamber, a, base.signum())?;
            let v = base.abs_pow(s).ok_or_else(|| Error::InexactPower(format!("|{base}|^({s})")))?;
            CliffordElement::scalar(sig, v)
        }
        Kind::Sgn(a) => {
            let base = exact_rec(a, point, chamber, memo)?.scalar_part();
            check_sign(chamber, a, base.signum())?;
            CliffordElement::scalar(sig, Rational::from_int(i64::from(base.signum())))
        }
        Kind::Part(a, b) => CliffordElement::scalar(sig, exact_rec(a, point, chamber, memo)?.coeff(*b)),
    };
    memo.insert(f.id(), v.clone());
    Ok(v)
}

/// Double-precision evaluation.
pub fn eval_float(f: &Expr, point: &[f64], chamber: &Chamber) -> Result<FloatElement> {
    eval_float_scaled(f, point, chamber).map(|(v, _)| v)
}

/// Double-precision evaluation that also reports the largest coefficient
/// magnitude met in any intermediate value, as a cancellation scale.
pub fn eval_float_scaled(f: &Expr, point: &[f64], chamber: &Chamber) -> Result<(FloatElement, f64)> {
    check_point_len(f, point.len())?;
    let mut memo = FxHashMap::default();
    let mut scale = 0.0f64;
    let v = float_rec(f, point, chamber, &mut memo, &mut scale)?;
    Ok((v, scale))
}

fn float_rec(
    f: &Expr,
    point: &[f64],
    chamber: &Chamber,
    memo: &mut FxHashMap<u64, FloatElement>,
    scale: &mut f64,
) -> Result<FloatElement> {
    if let Some(v) = memo.get(&f.id()) {
        return Ok(v.clone());
    }
    let sig = f.sig();
    let v = match f.kind() {
        Kind::Const(c) => FloatElement::from_exact(c),
        Kind::Coord(i) => FloatElement::scalar_value(sig, point[*i]),
        Kind::VectorX => {
            let mut out = FloatElement::zero(sig);
            for (j, x) in point.iter().enumerate() {
                out.coeffs[1 << j] = *x;
            }
            out
        }
        Kind::Add(a, b) => float_rec(a, point, chamber, memo, scale)?.add(&float_rec(b, point, chamber, memo, scale)?),
        Kind::Mul(a, b) => float_rec(a, point, chamber, memo, scale)?.mul(&float_rec(b, point, chamber, memo, scale)?),
        Kind::Inv(a) => float_rec(a, point, chamber, memo, scale)?
            .invert()
            .ok_or_else(|| Error::Pole(format!("{a} is not invertible at the point")))?,
        Kind::AbsPow(a, s) => {
            let base = float_rec(a, point, chamber, memo, scale)?.scalar();
            check_sign(chamber, a, float_sign(base))?;
            FloatElement::scalar_value(sig, base.abs().powf(s.to_f64()))
        }
        Kind::Sgn(a) => {
            let base = float_rec(a, point, chamber, memo, scale)?.scalar();
            let sign = float_sign(base);
            check_sign(chamber, a, sign)?;
            FloatElement::scalar_value(sig, f64::from(sign))
        }
        Kind::Part(a, b) => FloatElement::scalar_value(sig, float_rec(a, point, chamber, memo, scale)?.coeff(*b)),
    };
    *scale = scale.max(v.max_abs());
    memo.insert(f.id(), v.clone());
    Ok(v)
}

fn float_sign(v: f64) -> i32 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::parse::parse_expr;
    use crate::rational::q;

    #[test]
    fn appendix_function_value() {
        let s = Signature::new(2, 1).unwrap();
        let f = parse_expr("x1*e1 - x2*e2", s).unwrap();
        let v = eval_exact(&f, &[q(1, 1), q(2, 1), q(0, 1)], &Chamber::new()).unwrap();
        assert_eq!(v.to_string(), "e1 - 2*e2");
    }

    #[test]
    fn inverse_of_unit_vector() {
        let s = Signature::new(2, 1).unwrap();
        let f = parse_expr("inv(X)", s).unwrap();
        let v = eval_exact(&f, &[q(1, 1), q(0, 1), q(0, 1)], &Chamber::new()).unwrap();
        assert_eq!(v.to_string(), "-e1");
        let fl = eval_float(&f, &[1.0, 0.0, 0.0], &Chamber::new()).unwrap();
        assert_eq!(fl.coeff(Blade(1)), -1.0);
    }

    #[test]
    fn inversion_weight_in_split_plane() {
        // sgn(x²) x |x²|^{-1} with n = 2
        let s = Signature::new(1, 1).unwrap();
        let f = parse_expr("sgn(X*X)*X*abs_pow(X*X, -1)", s).unwrap();
        let base = parse_expr("X*X", s).unwrap();
        let point = [q(1, 1), q(2, 1)];
        // x² = -Q(x) = -(1 - 4) = 3
        let ch = Chamber::new().with(base.clone(), 1);
        let v = eval_exact(&f, &point, &ch).unwrap();
        assert_eq!(v.to_string(), "1/3*e1 + 2/3*e2");
        assert!(matches!(eval_exact(&f, &point, &Chamber::new().with(base, -1)), Err(Error::ChamberMismatch(_))));
        assert!(matches!(eval_exact(&f, &point, &Chamber::new()), Err(Error::ChamberIncomplete(_))));
    }

    #[test]
    fn errors() {
        let s = Signature::new(1, 1).unwrap();
        let f = parse_expr("inv(X)", s).unwrap();
        assert!(matches!(eval_exact(&f, &[q(1, 1), q(1, 1)], &Chamber::new()), Err(Error::Pole(_))));
        let g = parse_expr("abs_pow(x1, 1/2)", s).unwrap();
        let ch = Chamber::new().with(Expr::coord(s, 0), 1);
        assert!(matches!(eval_exact(&g, &[q(2, 1), q(0, 1)], &ch), Err(Error::InexactPower(_))));
        assert_eq!(eval_exact(&g, &[q(9, 4), q(0, 1)], &ch).unwrap().to_string(), "3/2");
        let fl = eval_float(&g, &[2.0, 0.0], &ch).unwrap();
        assert!((fl.scalar() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn float_inverse_matches_exact() {
        let s = Signature::new(2, 2).unwrap();
        let e = crate::function::parse::parse_element("1 + e12 + 2*e3 - 1/2*e1234", s).unwrap();
        let exact = FloatElement::from_exact(&e.invert().unwrap());
        let fl = FloatElement::from_exact(&e).invert().unwrap();
        assert!(exact.sub(&fl).max_abs() < 1e-12);
    }

    #[test]
    fn chamber_from_point() {
        let s = Signature::new(1, 1).unwrap();
        let f = parse_expr("abs_pow(X*X, -1)", s).unwrap();
        let ch = Chamber::containing(&f, &[1.0, 2.0]).unwrap();
        assert_eq!(ch.sign_of(&parse_expr("X*X", s).unwrap()), Some(1));
        assert!(Chamber::containing(&f, &[1.0, 1.0]).is_err());
    }
}
