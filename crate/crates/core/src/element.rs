//! Elements of the universal Clifford algebra `Cl(p,q)` with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::Serialize;

use crate::blade::{blade_product, conjugation_sign, grade_sign, reversal_sign, Blade};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::rational::Rational;
use crate::signature::Signature;

/// The three standard involutions of a Clifford algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Involution {
    /// `e_A -> (-1)^{|A|} e_A`, an automorphism.
    Grade,
    /// `e_A -> (-1)^{|A|(|A|-1)/2} e_A`, an anti-automorphism.
    Reversal,
    /// Grade involution composed with reversal, an anti-automorphism.
    Conjugation,
}

impl Involution {
    pub const ALL: [Involution; 3] = [Involution::Grade, Involution::Reversal, Involution::Conjugation];

    pub fn sign(self, b: Blade) -> i8 {
        match self {
            Involution::Grade => grade_sign(b),
            Involution::Reversal => reversal_sign(b),
            Involution::Conjugation => conjugation_sign(b),
        }
    }

    /// Whether the involution reverses the order of products.
    pub fn is_anti(self) -> bool {
        !matches!(self, Involution::Grade)
    }
}

impl FromStr for Involution {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grade" => Ok(Involution::Grade),
            "reversal" | "reverse" => Ok(Involution::Reversal),
            "conjugation" | "conj" => Ok(Involution::Conjugation),
            _ => Err(Error::InvalidParameter(format!("unknown involution {s:?}"))),
        }
    }
}

/// An element `Σ c_A e_A` of `Cl(p,q)`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CliffordElement {
    sig: Signature,
    coeffs: BTreeMap<Blade, Rational>,
}

impl CliffordElement {
    pub fn zero(sig: Signature) -> Self {
        Self { sig, coeffs: BTreeMap::new() }
    }

    pub fn scalar(sig: Signature, value: Rational) -> Self {
        Self::blade(sig, Blade::SCALAR, value)
    }

    pub fn one(sig: Signature) -> Self {
        Self::scalar(sig, Rational::one())
    }

    pub fn blade(sig: Signature, blade: Blade, value: Rational) -> Self {
        assert!(blade.is_valid_for(&sig), "blade {blade} outside {sig}");
        let mut coeffs = BTreeMap::new();
        if !value.is_zero() {
            coeffs.insert(blade, value);
        }
        Self { sig, coeffs }
    }

    /// The generator `e_{j+1}` (zero-based `j`).
    pub fn generator(sig: Signature, j: usize) -> Self {
        Self::blade(sig, Blade::generator(j), Rational::one())
    }

    pub fn vector(sig: Signature, coords: &[Rational]) -> Self {
        assert_eq!(coords.len(), sig.dim());
        Self::from_terms(
            sig,
            coords.iter().enumerate().map(|(j, c)| (Blade::generator(j), c.clone())),
        )
    }

    pub fn from_terms(sig: Signature, terms: impl IntoIterator<Item = (Blade, Rational)>) -> Self {
        let mut out = Self::zero(sig);
        for (b, c) in terms {
            out.add_term(b, &c);
        }
        out
    }

    pub(crate) fn add_term(&mut self, b: Blade, c: &Rational) {
        debug_assert!(b.is_valid_for(&self.sig));
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&b) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.coeffs.remove(&b);
                }
            }
            None => {
                self.coeffs.insert(b, c.clone());
            }
        }
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn coeff(&self, b: Blade) -> Rational {
        self.coeffs.get(&b).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &Rational)> {
        self.coeffs.iter().map(|(b, c)| (*b, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// The coefficient of `e_0 = 1`.
    pub fn scalar_part(&self) -> Rational {
        self.coeff(Blade::SCALAR)
    }

    /// `Some(c)` iff the element is the scalar `c` (including zero).
    pub fn as_scalar(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => self.coeffs.get(&Blade::SCALAR).cloned(),
            _ => None,
        }
    }

    pub fn is_scalar(&self) -> bool {
        self.as_scalar().is_some()
    }

    /// True iff every stored blade has grade `k`.
    pub fn is_homogeneous(&self, k: u32) -> bool {
        self.coeffs.keys().all(|b| b.grade() == k)
    }

    /// Grade-1 (including zero).
    pub fn is_vector(&self) -> bool {
        self.is_homogeneous(1)
    }

    /// Bitset of grades present.
    pub fn grades(&self) -> u32 {
        self.coeffs.keys().fold(0, |acc, b| acc | (1 << b.grade()))
    }

    pub fn grade_part(&self, k: u32) -> Self {
        Self {
            sig: self.sig,
            coeffs: self.coeffs.iter().filter(|(b, _)| b.grade() == k).map(|(b, c)| (*b, c.clone())).collect(),
        }
    }

    /// Coordinates `(x_1..x_n)` when the element is grade-1.
    pub fn vector_coords(&self) -> Option<Vec<Rational>> {
        self.is_vector()
            .then(|| (0..self.sig.dim()).map(|j| self.coeff(Blade::generator(j))).collect())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.sig);
        }
        Self { sig: self.sig, coeffs: self.coeffs.iter().map(|(b, c)| (*b, c * s)).collect() }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.sig.check_same(&rhs.sig)?;
        let mut out = self.clone();
        for (b, c) in &rhs.coeffs {
            out.add_term(*b, c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.sig.check_same(&rhs.sig)?;
        let mut acc: BTreeMap<Blade, Rational> = BTreeMap::new();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &rhs.coeffs {
                let (sign, blade) = blade_product(*a, *b, &self.sig);
                let mut prod = ca * cb;
                if sign < 0 {
                    prod = -prod;
                }
                let slot = acc.entry(blade).or_default();
                *slot += &prod;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Self { sig: self.sig, coeffs: acc })
    }

    pub fn involution(&self, kind: Involution) -> Self {
        Self {
            sig: self.sig,
            coeffs: self
                .coeffs
                .iter()
                .map(|(b, c)| (*b, if kind.sign(*b) < 0 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// `â`
    pub fn grade_involution(&self) -> Self {
        self.involution(Involution::Grade)
    }

    /// `ã`
    pub fn reversal(&self) -> Self {
        self.involution(Involution::Reversal)
    }

    /// `ā`
    pub fn conjugation(&self) -> Self {
        self.involution(Involution::Conjugation)
    }

    /// Multiplicative inverse.
    ///
    /// When `a ā` is a nonzero scalar the inverse is `ā / (a ā)`; otherwise the
    /// `2^n`-dimensional linear system of left multiplication is solved exactly.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        if let Some(s) = self.as_scalar() {
            return Ok(Self::scalar(self.sig, s.recip().expect("nonzero")));
        }
        for kind in [Involution::Conjugation, Involution::Reversal] {
            let bar = self.involution(kind);
            if let Some(norm) = (self * &bar).as_scalar() {
                if norm.is_zero() {
                    break;
                }
                let inv = bar.scale(&norm.recip().expect("nonzero"));
                if (&inv * self).as_scalar() == Some(Rational::one()) {
                    return Ok(inv);
                }
            }
        }
        self.invert_dense()
    }

    fn invert_dense(&self) -> Result<Self> {
        let size = self.sig.blade_count();
        // column j holds self * e_j
        let mut l = RatMatrix::zeros(size, size);
        for j in 0..size {
            for (a, c) in &self.coeffs {
                let (sign, blade) = blade_product(*a, Blade(j as u32), &self.sig);
                l[(blade.0 as usize, j)] = if sign < 0 { -c } else { c.clone() };
            }
        }
        let mut rhs = vec![Rational::zero(); size];
        rhs[0] = Rational::one();
        let x = l.solve(&rhs).ok_or(Error::NotInvertible)?;
        Ok(Self::from_terms(self.sig, x.into_iter().enumerate().map(|(j, c)| (Blade(j as u32), c))))
    }

    /// Largest absolute coefficient, as a float.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Dense float coefficients indexed by blade mask.
    pub fn to_f64_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.sig.blade_count()];
        for (b, c) in &self.coeffs {
            out[b.0 as usize] = c.to_f64();
        }
        out
    }
}

impl Add for &CliffordElement {
    type Output = CliffordElement;
    fn add(self, rhs: &CliffordElement) -> CliffordElement {
        self.try_add(rhs).expect("signature mismatch")
    }
}

impl Sub for &CliffordElement {
    type Output = CliffordElement;
    fn sub(self, rhs: &CliffordElement) -> CliffordElement {
        self.try_add(&-rhs).expect("signature mismatch")
    }
}

impl Mul for &CliffordElement {
    type Output = CliffordElement;
    fn mul(self, rhs: &CliffordElement) -> CliffordElement {
        self.try_mul(rhs).expect("signature mismatch")
    }
}

impl Neg for &CliffordElement {
    type Output = CliffordElement;
    fn neg(self) -> CliffordElement {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_element_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for CliffordElement {
            type Output = CliffordElement;
            fn $m(self, rhs: CliffordElement) -> CliffordElement { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a CliffordElement> for CliffordElement {
            type Output = CliffordElement;
            fn $m(self, rhs: &CliffordElement) -> CliffordElement { (&self).$m(rhs) }
        }
        impl<'a> $tr<CliffordElement> for &'a CliffordElement {
            type Output = CliffordElement;
            fn $m(self, rhs: CliffordElement) -> CliffordElement { self.$m(&rhs) }
        }
    )*};
}
forward_element_ops!(Add add, Sub sub, Mul mul);

impl Neg for CliffordElement {
    type Output = CliffordElement;
    fn neg(self) -> CliffordElement {
        -&self
    }
}

/// Renders as `3/2 + 2*e13 - e2`.
impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(Blade, &Rational)> = self.terms().collect();
        terms.sort_by(|a, b| a.0.display_cmp(b.0));
        for (i, (b, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if b == Blade::SCALAR {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{b}")?;
            } else {
                write!(f, "{mag}*{b}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.sig, self)
    }
}

impl Serialize for CliffordElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A grade-1 element `x = Σ x_j e_j`, stored by coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector {
    sig: Signature,
    coords: Vec<Rational>,
}

impl Vector {
    pub fn new(sig: Signature, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != sig.dim() {
            return Err(Error::Dimension(format!("{} coordinates for signature {sig}", coords.len())));
        }
        Ok(Self { sig, coords })
    }

    pub fn zero(sig: Signature) -> Self {
        Self { sig, coords: vec![Rational::zero(); sig.dim()] }
    }

    pub fn basis(sig: Signature, j: usize) -> Self {
        let mut v = Self::zero(sig);
        v.coords[j] = Rational::one();
        v
    }

    pub fn from_element(e: &CliffordElement) -> Result<Self> {
        let coords = e.vector_coords().ok_or_else(|| Error::NotVector(e.to_string()))?;
        Ok(Self { sig: e.sig(), coords })
    }

    pub fn to_element(&self) -> CliffordElement {
        CliffordElement::vector(self.sig, &self.coords)
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rational::is_zero)
    }

    /// `Q(v) = Σ_{j<=p} v_j^2 - Σ_{j>p} v_j^2`.
    pub fn quadratic_form(&self) -> Rational {
        quadratic_form_coords(&self.sig, &self.coords)
    }

    /// `B(u, v)`, the symmetric bilinear form of `Q`.
    pub fn bilinear_form(&self, other: &Vector) -> Rational {
        bilinear_form_coords(&self.sig, &self.coords, &other.coords)
    }

    pub fn is_null(&self) -> bool {
        self.quadratic_form().is_zero()
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector { sig: self.sig, coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector { sig: self.sig, coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: &Rational) -> Vector {
        Vector { sig: self.sig, coords: self.coords.iter().map(|a| a * s).collect() }
    }
}

impl Serialize for Vector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.to_element())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_element())
    }
}

pub(crate) fn quadratic_form_coords(sig: &Signature, v: &[Rational]) -> Rational {
    bilinear_form_coords(sig, v, v)
}

pub(crate) fn bilinear_form_coords(sig: &Signature, u: &[Rational], v: &[Rational]) -> Rational {
    u.iter()
        .zip(v)
        .enumerate()
        .map(|(j, (a, b))| if sig.q_of(j) > 0 { a * b } else { -(a * b) })
        .sum()
}

/// `Q(v)` of a grade-1 element.
pub fn quadratic_form(v: &CliffordElement) -> Result<Rational> {
    Ok(Vector::from_element(v)?.quadratic_form())
}

/// `B(u, v)` of two grade-1 elements.
pub fn bilinear_form(u: &CliffordElement, v: &CliffordElement) -> Result<Rational> {
    u.sig().check_same(&v.sig())?;
    Ok(Vector::from_element(u)?.bilinear_form(&Vector::from_element(v)?))
}

/// The Gram matrix `diag(+1 × p, -1 × q)` of `B` in the standard basis.
pub fn gram_matrix(sig: &Signature) -> RatMatrix {
    let diag: Vec<Rational> = (0..sig.dim()).map(|j| Rational::from_int(sig.q_of(j))).collect();
    RatMatrix::diagonal(&diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn sig21() -> Signature {
        Signature::new(2, 1).unwrap()
    }

    fn e(j: usize) -> CliffordElement {
        CliffordElement::generator(sig21(), j - 1)
    }

    fn one() -> CliffordElement {
        CliffordElement::one(sig21())
    }

    #[test]
    fn products() {
        // (1+e1)(1-e1) = 1 - e1^2 = 2
        assert_eq!((&one() + &e(1)) * (&one() - &e(1)), CliffordElement::scalar(sig21(), q(2, 1)));
        // (e1 e2) e2 = -e1
        assert_eq!((&e(1) * &e(2)) * e(2), -e(1));
        let other = CliffordElement::one(Signature::new(3, 0).unwrap());
        assert!(e(1).try_mul(&other).is_err());
    }

    #[test]
    fn involutions() {
        let e12 = &e(1) * &e(2);
        let e123 = &e12 * &e(3);
        assert_eq!(e12.grade_involution(), e12);
        assert_eq!(e123.reversal(), -&e123);
        assert_eq!(e(1).conjugation(), -e(1));
    }

    #[test]
    fn forms() {
        assert_eq!(quadratic_form(&e(1)).unwrap(), q(1, 1));
        assert_eq!(quadratic_form(&(&e(1) + &e(3))).unwrap(), q(0, 1));
        assert_eq!(bilinear_form(&e(1), &e(2)).unwrap(), q(0, 1));
        assert!(quadratic_form(&(&e(1) * &e(2))).is_err());
    }

    #[test]
    fn inverses() {
        assert_eq!(e(3).invert().unwrap(), e(3));
        assert_eq!(e(1).invert().unwrap(), -e(1));
        assert_eq!((&e(1) + &e(3)).invert(), Err(Error::NotInvertible));
        // needs the dense path: a ā is not scalar for 1 + e1 + e23 + e123 style elements
        let s = Signature::new(3, 0).unwrap();
        let a = CliffordElement::from_terms(
            s,
            [(Blade(0), q(2, 1)), (Blade(1), q(1, 1)), (Blade(0b110), q(1, 3)), (Blade(0b111), q(1, 2))],
        );
        let inv = a.invert().unwrap();
        assert_eq!(&a * &inv, CliffordElement::one(s));
        assert_eq!(&inv * &a, CliffordElement::one(s));
    }

    #[test]
    fn display() {
        let s = sig21();
        let x = CliffordElement::from_terms(
            s,
            [(Blade(0), q(3, 2)), (Blade(0b101), q(2, 1)), (Blade(0b010), q(-1, 1))],
        );
        assert_eq!(x.to_string(), "3/2 + 2*e13 - e2");
        assert_eq!((-e(2)).to_string(), "-e2");
        assert_eq!(CliffordElement::zero(s).to_string(), "0");
    }
}
