//! The conformal compactification: null cone of `V ⊕ R^{1,1}`, its
//! projectivization, and the conformal space of first columns of Vahlen
//! matrices.

use std::fmt;

use serde::Serialize;

use crate::element::{CliffordElement, Involution, Vector};
use crate::error::{Error, Result};
use crate::linalg::primitive;
use crate::matrix::{Mat2, VahlenMatrix};
use crate::rational::Rational;
use crate::signature::Signature;

/// A nonzero vector `v + x₋ e₋ + x₊ e₊` with `Q(v) - x₋² + x₊² = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NullVector {
    v: Vector,
    xminus: Rational,
    xplus: Rational,
}

impl NullVector {
    pub fn new(v: Vector, xminus: Rational, xplus: Rational) -> Result<Self> {
        let q = v.quadratic_form() - &xminus * &xminus + &xplus * &xplus;
        if !q.is_zero() || (v.is_zero() && xminus.is_zero() && xplus.is_zero()) {
            return Err(Error::MalformedPoint);
        }
        Ok(Self { v, xminus, xplus })
    }

    pub fn v(&self) -> &Vector {
        &self.v
    }

    pub fn xminus(&self) -> &Rational {
        &self.xminus
    }

    pub fn xplus(&self) -> &Rational {
        &self.xplus
    }

    /// `ĵ(v + x₋ e₋ + x₊ e₊) = ((v, x₋ - x₊), (x₋ + x₊, -v))`.
    pub fn to_mat2(&self) -> Mat2 {
        let sig = self.v.sig();
        let v = self.v.to_element();
        Mat2 {
            a: v.clone(),
            b: CliffordElement::scalar(sig, &self.xminus - &self.xplus),
            c: CliffordElement::scalar(sig, &self.xminus + &self.xplus),
            d: -v,
        }
    }

    /// Reads a null vector back from its matrix form.
    pub fn from_mat2(m: &Mat2) -> Result<Self> {
        let v = Vector::from_element(&m.a).map_err(|_| Error::MalformedPoint)?;
        let diff = m.b.as_scalar().ok_or(Error::MalformedPoint)?;
        let sum = m.c.as_scalar().ok_or(Error::MalformedPoint)?;
        if m.d != -&m.a {
            return Err(Error::MalformedPoint);
        }
        let half = Rational::new(1, 2);
        Self::new(v, (&sum + &diff) * &half, (&sum - &diff) * &half)
    }

    fn coordinates(&self) -> Vec<Rational> {
        let mut out = vec![self.xminus.clone(), self.xplus.clone()];
        out.extend(self.v.coords().iter().cloned());
        out
    }
}

/// A point of `N(V)`: a null vector up to nonzero scale, stored as the
/// primitive integer representative whose first nonzero coordinate in the
/// order `(x₋, x₊, v₁, …, v_n)` is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct NPoint(NullVector);

impl NPoint {
    pub fn new(xi: NullVector) -> Self {
        let sig = xi.v.sig();
        let c = primitive(&xi.coordinates());
        let v = Vector::new(sig, c[2..].to_vec()).expect("dimension");
        NPoint(NullVector { v, xminus: c[0].clone(), xplus: c[1].clone() })
    }

    pub fn representative(&self) -> &NullVector {
        &self.0
    }

    pub fn sig(&self) -> Signature {
        self.0.v.sig()
    }
}

impl fmt::Display for NPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; {}; {}]", self.0.v.to_element(), self.0.xminus, self.0.xplus)
    }
}

/// `v ↦ [v + ½(1 + Q(v)) e₋ + ½(1 - Q(v)) e₊]`.
pub fn embed(v: &Vector) -> NPoint {
    NPoint::new(embed_null(v))
}

/// The un-projectivized null vector of [`embed`].
pub fn embed_null(v: &Vector) -> NullVector {
    let q = v.quadratic_form();
    let half = Rational::new(1, 2);
    let one = Rational::one();
    NullVector { v: v.clone(), xminus: (&one + &q) * &half, xplus: (&one - &q) * &half }
}

/// The three kinds of points of `N(V)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", content = "witness", rename_all = "snake_case")]
pub enum PointClass {
    /// The image of `v ∈ V` under [`embed`].
    Finite(Vector),
    /// The inversion of a null vector `v`, scaled to `x₋ = -½, x₊ = ½`.
    InvertedNull(Vector),
    /// The limit point of the line spanned by a nonzero null `v`.
    Infinity(Vector),
}

impl PointClass {
    pub fn name(&self) -> &'static str {
        match self {
            PointClass::Finite(_) => "finite",
            PointClass::InvertedNull(_) => "inverted_null",
            PointClass::Infinity(_) => "infinity",
        }
    }

    pub fn witness(&self) -> &Vector {
        match self {
            PointClass::Finite(v) | PointClass::InvertedNull(v) | PointClass::Infinity(v) => v,
        }
    }
}

/// Classifies by scale-invariant conditions: `x₋ + x₊ ≠ 0` is finite,
/// `x₋ + x₊ = 0 ≠ x₋` is an inverted null vector, `x₋ = x₊ = 0` is at infinity.
pub fn classify_npoint(pt: &NPoint) -> Result<PointClass> {
    let xi = &pt.0;
    let sum = &xi.xminus + &xi.xplus;
    if let Some(inv) = sum.recip() {
        return Ok(PointClass::Finite(xi.v.scale(&inv)));
    }
    if let Some(inv) = xi.xminus.recip() {
        // scale x₋ to -½
        return Ok(PointClass::InvertedNull(xi.v.scale(&(Rational::new(-1, 2) * inv))));
    }
    if xi.v.is_zero() || !xi.v.is_null() {
        return Err(Error::MalformedPoint);
    }
    Ok(PointClass::Infinity(xi.v.clone()))
}

/// `γ(x, y) = ((x ȳ, x x̄), (y ȳ, -x ȳ))`; fails with `ZeroImage` when all
/// three products vanish.
pub fn gamma_pair(x: &CliffordElement, y: &CliffordElement) -> Result<Mat2> {
    x.sig().check_same(&y.sig())?;
    let xy = x * &y.conjugation();
    let xx = x * &x.conjugation();
    let yy = y * &y.conjugation();
    if xy.is_zero() && xx.is_zero() && yy.is_zero() {
        return Err(Error::ZeroImage);
    }
    Ok(Mat2 { a: xy.clone(), b: xx, c: yy, d: -xy })
}

/// A pair `(x, y)` that can be the first column of a Vahlen matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WPoint {
    x: CliffordElement,
    y: CliffordElement,
}

impl WPoint {
    /// Requires `x x̄`, `y ȳ` scalar and `x ȳ` a vector, not all zero.
    pub fn new(x: CliffordElement, y: CliffordElement) -> Result<Self> {
        x.sig().check_same(&y.sig())?;
        let xy = &x * &y.conjugation();
        let xx = &x * &x.conjugation();
        let yy = &y * &y.conjugation();
        if !xx.is_scalar() || !yy.is_scalar() || !xy.is_vector() {
            return Err(Error::MalformedPoint);
        }
        if xy.is_zero() && xx.is_zero() && yy.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(Self { x, y })
    }

    /// `(v, 1)`.
    pub fn from_vector(v: &Vector) -> Self {
        Self { x: v.to_element(), y: CliffordElement::one(v.sig()) }
    }

    /// The first column `(a, c)` of a Vahlen matrix.
    pub fn first_column(m: &VahlenMatrix) -> Self {
        Self { x: m.matrix().a.clone(), y: m.matrix().c.clone() }
    }

    pub fn x(&self) -> &CliffordElement {
        &self.x
    }

    pub fn y(&self) -> &CliffordElement {
        &self.y
    }

    pub fn sig(&self) -> Signature {
        self.x.sig()
    }

    pub fn gamma(&self) -> Mat2 {
        gamma_pair(&self.x, &self.y).expect("validated at construction")
    }

    pub fn null_vector(&self) -> NullVector {
        NullVector::from_mat2(&self.gamma()).expect("γ lands on the null cone")
    }

    pub fn npoint(&self) -> NPoint {
        NPoint::new(self.null_vector())
    }
}

impl fmt::Display for WPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn gamma(w: &WPoint) -> Mat2 {
    w.gamma()
}

/// Classes of the conformal space with a simpler equivalent representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WClassification {
    pub class: WClass,
    pub witness: Vector,
    pub representative: WPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WClass {
    /// `y ȳ ≠ 0`, equivalent to `(x y⁻¹, 1)`.
    Finite,
    /// `y ȳ = 0 ≠ x x̄`, equivalent to `(1, y x⁻¹)`.
    InversionOfNull,
    /// `x x̄ = y ȳ = 0`, labelled by the null vector `x ȳ`.
    Infinity,
}

pub fn w_classify(w: &WPoint) -> Result<WClassification> {
    let sig = w.sig();
    let one = CliffordElement::one(sig);
    let yy = (&w.y * &w.y.conjugation()).scalar_part();
    if !yy.is_zero() {
        let v = Vector::from_element(&(&w.x * &w.y.invert()?))?;
        return Ok(WClassification {
            class: WClass::Finite,
            representative: WPoint { x: v.to_element(), y: one },
            witness: v,
        });
    }
    let xx = (&w.x * &w.x.conjugation()).scalar_part();
    if !xx.is_zero() {
        let v = Vector::from_element(&(&w.y * &w.x.invert()?))?;
        return Ok(WClassification {
            class: WClass::InversionOfNull,
            representative: WPoint { x: one, y: v.to_element() },
            witness: v,
        });
    }
    let xy = &w.x * &w.y.conjugation();
    if xy.is_zero() {
        return Err(Error::Degenerate);
    }
    Ok(WClassification { class: WClass::Infinity, witness: Vector::from_element(&xy)?, representative: w.clone() })
}

/// Whether `λ ≠ 0` exists with `lhs = λ rhs`.
pub fn proportional(lhs: &Mat2, rhs: &Mat2) -> bool {
    if lhs.sig() != rhs.sig() || lhs.is_zero() != rhs.is_zero() {
        return false;
    }
    let pivot = rhs.entries().into_iter().zip(lhs.entries()).find_map(|(r, l)| {
        let (blade, rc) = r.terms().next()?;
        Some(l.coeff(blade) / rc)
    });
    match pivot {
        Some(lambda) if !lambda.is_zero() => rhs.scale(&lambda) == *lhs,
        _ => lhs.is_zero(),
    }
}

/// Equivalence modulo right multiplication by `Γ(V)`, decided by
/// proportionality of the `γ` images.
pub fn w_equivalent(w1: &WPoint, w2: &WPoint) -> bool {
    proportional(&w1.gamma(), &w2.gamma())
}

/// `(x, y) ↦ (a x + b y, c x + d y)`.
pub fn w_act(m: &VahlenMatrix, w: &WPoint) -> Result<WPoint> {
    m.sig().check_same(&w.sig())?;
    let a = m.matrix();
    WPoint::new(&a.a * &w.x + &a.b * &w.y, &a.c * &w.x + &a.d * &w.y)
}

/// `A γ Ã`, the action of a Vahlen matrix on the null cone.
pub fn sandwich(m: &Mat2, g: &Mat2) -> Mat2 {
    &(m * g) * &m.involution(Involution::Reversal)
}
