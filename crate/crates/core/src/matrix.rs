//! 2×2 matrices over `Cl(V)` as a model of `Cl(V ⊕ R^{1,1})`, Vahlen
//! matrices and their Möbius action on `V`.

use std::fmt;
use std::ops::Mul;

use serde::Serialize;

use crate::blade::{blade_product, Blade};
use crate::element::{CliffordElement, Involution, Vector};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::lipschitz::lipschitz_member;
use crate::rational::Rational;
use crate::signature::Signature;

/// A matrix `((a, b), (c, d))` with entries in `Cl(V)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: CliffordElement,
    pub b: CliffordElement,
    pub c: CliffordElement,
    pub d: CliffordElement,
}

impl Mat2 {
    pub fn new(a: CliffordElement, b: CliffordElement, c: CliffordElement, d: CliffordElement) -> Result<Self> {
        let sig = a.sig();
        for e in [&b, &c, &d] {
            sig.check_same(&e.sig())?;
        }
        Ok(Self { a, b, c, d })
    }

    pub fn from_scalars(sig: Signature, entries: [[i64; 2]; 2]) -> Self {
        let s = |v: i64| CliffordElement::scalar(sig, Rational::from_int(v));
        Self { a: s(entries[0][0]), b: s(entries[0][1]), c: s(entries[1][0]), d: s(entries[1][1]) }
    }

    pub fn identity(sig: Signature) -> Self {
        Self::from_scalars(sig, [[1, 0], [0, 1]])
    }

    pub fn zero(sig: Signature) -> Self {
        Self::from_scalars(sig, [[0, 0], [0, 0]])
    }

    pub fn sig(&self) -> Signature {
        self.a.sig()
    }

    pub fn entries(&self) -> [&CliffordElement; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn entries_mut(&mut self) -> [&mut CliffordElement; 4] {
        [&mut self.a, &mut self.b, &mut self.c, &mut self.d]
    }

    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(|e| e.is_zero())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        self.map(|e| e.scale(s))
    }

    fn map(&self, f: impl Fn(&CliffordElement) -> CliffordElement) -> Self {
        Self { a: f(&self.a), b: f(&self.b), c: f(&self.c), d: f(&self.d) }
    }

    pub fn try_mul(&self, rhs: &Mat2) -> Result<Mat2> {
        self.sig().check_same(&rhs.sig())?;
        Ok(Mat2 {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        })
    }

    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        Mat2 { a: &self.a + &rhs.a, b: &self.b + &rhs.b, c: &self.c + &rhs.c, d: &self.d + &rhs.d }
    }

    /// Image of `a + b e₋ + c e₊ + d e₋e₊` under the periodicity isomorphism.
    pub fn jhat(a: &CliffordElement, b: &CliffordElement, c: &CliffordElement, d: &CliffordElement) -> Result<Mat2> {
        Mat2::new(
            a + d,
            b - c,
            b.grade_involution() + c.grade_involution(),
            a.grade_involution() - d.grade_involution(),
        )
    }

    /// The components `(a, b, c, d)` with `ĵ(a + b e₋ + c e₊ + d e₋e₊) = self`.
    pub fn jhat_inverse(&self) -> [CliffordElement; 4] {
        let half = Rational::new(1, 2);
        let d_hat = self.d.grade_involution();
        let c_hat = self.c.grade_involution();
        [
            (&self.a + &d_hat).scale(&half),
            (&self.b + &c_hat).scale(&half),
            (&c_hat - &self.b).scale(&half),
            (&self.a - &d_hat).scale(&half),
        ]
    }

    /// The matrix as an element of `Cl(p+1, q+1)`, see [`ExtendedLayout`].
    pub fn to_extended(&self) -> Result<CliffordElement> {
        let layout = ExtendedLayout::new(self.sig())?;
        let [a, b, c, d] = self.jhat_inverse();
        let ext = layout.extended;
        let em = CliffordElement::generator(ext, layout.minus);
        let ep = CliffordElement::generator(ext, layout.plus);
        Ok(layout.embed(&a) + layout.embed(&b) * &em + layout.embed(&c) * &ep + layout.embed(&d) * &em * &ep)
    }

    /// Inverse of [`Mat2::to_extended`].
    pub fn from_extended(sig: Signature, x: &CliffordElement) -> Result<Mat2> {
        let layout = ExtendedLayout::new(sig)?;
        layout.extended.check_same(&x.sig())?;
        let mut parts = [
            CliffordElement::zero(sig),
            CliffordElement::zero(sig),
            CliffordElement::zero(sig),
            CliffordElement::zero(sig),
        ];
        let plus_bit = 1u32 << layout.plus;
        let minus_bit = 1u32 << layout.minus;
        for (blade, coeff) in x.terms() {
            let s = blade.0 & (plus_bit | minus_bit);
            let rest = Blade(blade.0 & !s);
            // e_rest · e_s = sign · e_blade with e_s in ascending order (e₊ before e₋)
            let (sign, _) = blade_product(rest, Blade(s), &layout.extended);
            let mut c = coeff.clone();
            if sign < 0 {
                c = -c;
            }
            let slot = match (s & minus_bit != 0, s & plus_bit != 0) {
                (false, false) => 0,
                (true, false) => 1,
                (false, true) => 2,
                (true, true) => {
                    // e₊e₋ = -e₋e₊
                    c = -c;
                    3
                }
            };
            parts[slot].add_term(layout.restrict(rest), &c);
        }
        let [a, b, c, d] = parts;
        Mat2::jhat(&a, &b, &c, &d)
    }

    /// The involutions of `Cl(V ⊕ R^{1,1})` transported to matrices.
    pub fn involution(&self, kind: Involution) -> Mat2 {
        match kind {
            Involution::Grade => Mat2 {
                a: self.a.grade_involution(),
                b: -self.b.grade_involution(),
                c: -self.c.grade_involution(),
                d: self.d.grade_involution(),
            },
            Involution::Reversal => Mat2 {
                a: self.d.conjugation(),
                b: self.b.conjugation(),
                c: self.c.conjugation(),
                d: self.a.conjugation(),
            },
            Involution::Conjugation => Mat2 {
                a: self.d.reversal(),
                b: -self.b.reversal(),
                c: -self.c.reversal(),
                d: self.a.reversal(),
            },
        }
    }

    /// `Δ(A) = a d̃ - b c̃`.
    pub fn pseudo_det(&self) -> CliffordElement {
        &self.a * &self.d.reversal() - &self.b * &self.c.reversal()
    }

    /// `c x + d`.
    pub fn right_denominator(&self, x: &Vector) -> CliffordElement {
        &self.c * &x.to_element() + &self.d
    }

    /// `x c̃ + d̃`.
    pub fn left_denominator(&self, x: &Vector) -> CliffordElement {
        &x.to_element() * &self.c.reversal() + self.d.reversal()
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: &Mat2) -> Mat2 {
        self.try_mul(rhs).expect("signature mismatch")
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({}, {}), ({}, {}))", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.sig(), self)
    }
}

impl Serialize for Mat2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [[&self.a, &self.b], [&self.c, &self.d]].serialize(s)
    }
}

/// Generator layout of `Cl(p+1, q+1)`: positive generators first as always,
/// so `e₊` (with `Q = +1`) sits right after the positive generators of `V`
/// and `e₋` (with `Q = -1`) comes last.
#[derive(Clone, Copy, Debug)]
pub struct ExtendedLayout {
    pub base: Signature,
    pub extended: Signature,
    /// Zero-based index of `e₊`.
    pub plus: usize,
    /// Zero-based index of `e₋`.
    pub minus: usize,
}

impl ExtendedLayout {
    pub fn new(base: Signature) -> Result<Self> {
        Ok(Self { base, extended: base.extended()?, plus: base.p(), minus: base.dim() + 1 })
    }

    /// Zero-based index of the generator `e_{j+1}` of `V` in the extension.
    pub fn index_of(&self, j: usize) -> usize {
        if j < self.base.p() {
            j
        } else {
            j + 1
        }
    }

    fn lift(&self, b: Blade) -> Blade {
        let p = self.base.p();
        let low = b.0 & ((1 << p) - 1);
        Blade(low | ((b.0 >> p) << (p + 1)))
    }

    fn restrict(&self, b: Blade) -> Blade {
        let p = self.base.p();
        let low = b.0 & ((1 << p) - 1);
        Blade(low | ((b.0 >> (p + 1)) << p))
    }

    /// `Cl(V) ⊂ Cl(V ⊕ R^{1,1})`; generator order is preserved so no signs appear.
    pub fn embed(&self, x: &CliffordElement) -> CliffordElement {
        CliffordElement::from_terms(self.extended, x.terms().map(|(b, c)| (self.lift(b), c.clone())))
    }
}

/// Outcome of the six Maks criteria for membership in `Γ(V ⊕ R^{1,1})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VahlenReport {
    /// `a ā, b b̄, c c̄, d d̄` are scalars.
    pub norms_scalar: bool,
    /// `a c̄, b d̄` are vectors.
    pub column_products_vector: bool,
    /// `a v b̄ - b v ā` and `c v d̄ - d v c̄` are scalars for every `v`.
    pub row_sandwich_scalar: bool,
    /// `a v d̄ - b v c̄` is a vector for every `v`.
    pub cross_sandwich_vector: bool,
    /// `a b̃ = b ã` and `c d̃ = d c̃`.
    pub reversal_symmetric: bool,
    /// `Δ` is a nonzero scalar.
    pub pseudo_det_nonzero_scalar: bool,
    pub verdict: bool,
    pub pseudo_det: CliffordElement,
}

impl VahlenReport {
    pub fn criteria(&self) -> [bool; 6] {
        [
            self.norms_scalar,
            self.column_products_vector,
            self.row_sandwich_scalar,
            self.cross_sandwich_vector,
            self.reversal_symmetric,
            self.pseudo_det_nonzero_scalar,
        ]
    }
}

/// Evaluates the six Maks criteria; conditions quantified over `v ∈ V` are
/// linear in `v` and are checked on the generators.
pub fn vahlen_check(m: &Mat2) -> VahlenReport {
    let sig = m.sig();
    let (a, b, c, d) = (&m.a, &m.b, &m.c, &m.d);
    let (ac, bc, cc, dc) = (a.conjugation(), b.conjugation(), c.conjugation(), d.conjugation());
    let norms_scalar = [(a, &ac), (b, &bc), (c, &cc), (d, &dc)].iter().all(|(x, xc)| (*x * *xc).is_scalar());
    let column_products_vector = (a * &cc).is_vector() && (b * &dc).is_vector();
    let mut row_sandwich_scalar = true;
    let mut cross_sandwich_vector = true;
    for j in 0..sig.dim() {
        let v = CliffordElement::generator(sig, j);
        let av = a * &v;
        let bv = b * &v;
        let cv = c * &v;
        let dv = d * &v;
        row_sandwich_scalar &= (&av * &bc - &bv * &ac).is_scalar() && (&cv * &dc - &dv * &cc).is_scalar();
        cross_sandwich_vector &= (&av * &dc - &bv * &cc).is_vector();
        if !row_sandwich_scalar && !cross_sandwich_vector {
            break;
        }
    }
    let reversal_symmetric = a * &b.reversal() == b * &a.reversal() && c * &d.reversal() == d * &c.reversal();
    let pseudo_det = m.pseudo_det();
    let pseudo_det_nonzero_scalar = pseudo_det.as_scalar().is_some_and(|s| !s.is_zero());
    let verdict = norms_scalar
        && column_products_vector
        && row_sandwich_scalar
        && cross_sandwich_vector
        && reversal_symmetric
        && pseudo_det_nonzero_scalar;
    VahlenReport {
        norms_scalar,
        column_products_vector,
        row_sandwich_scalar,
        cross_sandwich_vector,
        reversal_symmetric,
        pseudo_det_nonzero_scalar,
        verdict,
        pseudo_det,
    }
}

/// The elementary conformal maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `x ↦ x + b`.
    Translation(Vector),
    /// `x ↦ a x â⁻¹` for `a ∈ Γ(V)`.
    Orthogonal(CliffordElement),
    /// `x ↦ μ² x`; the square keeps everything rational.
    Dilation(Rational),
    /// `x ↦ x⁻¹`.
    Inversion,
}

impl Generator {
    pub fn matrix(&self, sig: Signature) -> Result<Mat2> {
        let zero = CliffordElement::zero(sig);
        let one = CliffordElement::one(sig);
        match self {
            Generator::Translation(b) => {
                sig.check_same(&b.sig())?;
                Ok(Mat2 { a: one.clone(), b: b.to_element(), c: zero, d: one })
            }
            Generator::Orthogonal(a) => {
                sig.check_same(&a.sig())?;
                if !lipschitz_member(a) {
                    return Err(Error::InvalidParameter(format!("{a} is not in the Lipschitz group")));
                }
                Ok(Mat2 { a: a.clone(), b: zero.clone(), c: zero, d: a.grade_involution() })
            }
            Generator::Dilation(mu) => {
                let inv = mu.recip().ok_or_else(|| Error::InvalidParameter("dilation by zero".into()))?;
                Ok(Mat2 {
                    a: CliffordElement::scalar(sig, mu.clone()),
                    b: zero.clone(),
                    c: zero,
                    d: CliffordElement::scalar(sig, inv),
                })
            }
            Generator::Inversion => Ok(Mat2::from_scalars(sig, [[0, 1], [1, 0]])),
        }
    }

    pub fn vahlen(&self, sig: Signature) -> Result<VahlenMatrix> {
        VahlenMatrix::new(self.matrix(sig)?)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Translation(b) => write!(f, "T({})", b.to_element()),
            Generator::Orthogonal(a) => write!(f, "R({a})"),
            Generator::Dilation(mu) => write!(f, "S({mu})"),
            Generator::Inversion => write!(f, "I"),
        }
    }
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A matrix known to lie in `Γ(V ⊕ R^{1,1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct VahlenMatrix(Mat2);

impl VahlenMatrix {
    pub fn new(m: Mat2) -> Result<Self> {
        if vahlen_check(&m).verdict {
            Ok(Self(m))
        } else {
            Err(Error::NotVahlen)
        }
    }

    pub fn identity(sig: Signature) -> Self {
        Self(Mat2::identity(sig))
    }

    /// Product `g₁ g₂ ⋯ g_k` of generator matrices.
    pub fn word(sig: Signature, word: &[Generator]) -> Result<Self> {
        let mut m = Mat2::identity(sig);
        for g in word {
            m = &m * &g.matrix(sig)?;
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat2 {
        self.0
    }

    pub fn sig(&self) -> Signature {
        self.0.sig()
    }

    /// The real number `Δ(A)`.
    pub fn pseudo_det(&self) -> Rational {
        self.0.pseudo_det().as_scalar().expect("Vahlen pseudo-determinant is scalar")
    }

    /// `(c x + d)⁻¹`, or `DenominatorNotInvertible` outside the chart.
    pub fn denominator_inverse(&self, x: &Vector) -> Result<CliffordElement> {
        self.0.right_denominator(x).invert().map_err(|_| Error::DenominatorNotInvertible)
    }

    /// The scalar `ρ(x) = (x c̃ + d̃)(c x + d)`.
    pub fn rho(&self, x: &Vector) -> Result<Rational> {
        let rho = &self.0.left_denominator(x) * &self.0.right_denominator(x);
        rho.as_scalar().ok_or(Error::NotVahlen)
    }

    /// `(a x + b)(c x + d)⁻¹`.
    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        self.sig().check_same(&x.sig())?;
        let den = self.denominator_inverse(x)?;
        let num = &self.0.a * &x.to_element() + &self.0.b;
        Vector::from_element(&(num * den))
    }

    /// Jacobian matrix; column `μ` holds `Δ (x c̃ + d̃)⁻¹ e_μ (c x + d)⁻¹`.
    pub fn jacobian(&self, x: &Vector) -> Result<RatMatrix> {
        self.sig().check_same(&x.sig())?;
        let sig = self.sig();
        let right = self.denominator_inverse(x)?;
        let left = self.0.left_denominator(x).invert().map_err(|_| Error::DenominatorNotInvertible)?;
        let left = left.scale(&self.pseudo_det());
        let n = sig.dim();
        let mut jac = RatMatrix::zeros(n, n);
        for mu in 0..n {
            let col = &left * &CliffordElement::generator(sig, mu) * &right;
            let coords = col.vector_coords().ok_or(Error::NotVahlen)?;
            for (k, v) in coords.into_iter().enumerate() {
                jac[(k, mu)] = v;
            }
        }
        Ok(jac)
    }

    /// `Ω_A(x) = Δ(A) / ρ(x)`.
    pub fn conformal_factor(&self, x: &Vector) -> Result<Rational> {
        self.sig().check_same(&x.sig())?;
        let rho = self.rho(x)?;
        let inv = rho.recip().ok_or(Error::DenominatorNotInvertible)?;
        Ok(self.pseudo_det() * inv)
    }

    pub fn compose(&self, rhs: &VahlenMatrix) -> VahlenMatrix {
        VahlenMatrix(&self.0 * &rhs.0)
    }
}

impl Mul for &VahlenMatrix {
    type Output = VahlenMatrix;
    fn mul(self, rhs: &VahlenMatrix) -> VahlenMatrix {
        self.compose(rhs)
    }
}

pub fn mobius_apply(m: &Mat2, x: &Vector) -> Result<Vector> {
    VahlenMatrix::new(m.clone())?.apply(x)
}

pub fn mobius_jacobian(m: &Mat2, x: &Vector) -> Result<RatMatrix> {
    VahlenMatrix::new(m.clone())?.jacobian(x)
}

pub fn conformal_factor(m: &Mat2, x: &Vector) -> Result<Rational> {
    VahlenMatrix::new(m.clone())?.conformal_factor(x)
}

/// All products of at most `max_len` generators, shortest first.
pub fn words(generators: &[Generator], max_len: usize) -> Vec<Vec<Generator>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in generators {
                let mut w2: Vec<Generator> = w.clone();
                w2.push(g.clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Renders a word as `T(e1)·I·S(2)`, or `id` when empty.
pub fn word_name(word: &[Generator]) -> String {
    if word.is_empty() {
        return "id".into();
    }
    word.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("·")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn s21() -> Signature {
        Signature::new(2, 1).unwrap()
    }

    fn e(sig: Signature, j: usize) -> CliffordElement {
        CliffordElement::generator(sig, j - 1)
    }

    #[test]
    fn jhat_generators() {
        let s = s21();
        let (zero, one) = (CliffordElement::zero(s), CliffordElement::one(s));
        assert_eq!(Mat2::jhat(&zero, &one, &zero, &zero).unwrap(), Mat2::from_scalars(s, [[0, 1], [1, 0]]));
        assert_eq!(Mat2::jhat(&zero, &zero, &one, &zero).unwrap(), Mat2::from_scalars(s, [[0, -1], [1, 0]]));
        assert_eq!(Mat2::jhat(&one, &zero, &zero, &zero).unwrap(), Mat2::identity(s));
    }

    #[test]
    fn involutions_and_pseudo_det() {
        let s = s21();
        let inv = Mat2::from_scalars(s, [[0, 1], [1, 0]]);
        assert_eq!(inv.involution(Involution::Reversal), inv);
        assert_eq!(Mat2::identity(s).involution(Involution::Conjugation), Mat2::identity(s));
        let z = CliffordElement::zero(s);
        let m = Mat2::new(e(s, 1), z.clone(), z.clone(), -e(s, 1)).unwrap();
        let g = Mat2::new(-e(s, 1), z.clone(), z, e(s, 1)).unwrap();
        assert_eq!(m.involution(Involution::Grade), g);
        assert_eq!(inv.pseudo_det(), CliffordElement::scalar(s, q(-1, 1)));
    }

    #[test]
    fn vahlen_examples() {
        let s = s21();
        let t = Generator::Translation(Vector::basis(s, 0)).matrix(s).unwrap();
        assert!(vahlen_check(&t).verdict);
        let mut bad = t.clone();
        bad.b = &e(s, 1) * &e(s, 2);
        let r = vahlen_check(&bad);
        assert!(!r.column_products_vector);
        assert!(!r.verdict);
        let i = vahlen_check(&Generator::Inversion.matrix(s).unwrap());
        assert!(i.verdict);
        assert_eq!(i.pseudo_det.as_scalar(), Some(q(-1, 1)));
    }

    #[test]
    fn generator_actions() {
        let s = s21();
        let x = Vector::new(s, vec![q(1, 1), q(2, 1), q(1, 3)]).unwrap();
        let dil = Generator::Dilation(q(2, 1)).vahlen(s).unwrap();
        assert_eq!(dil.apply(&x).unwrap(), x.scale(&q(4, 1)));
        assert_eq!(dil.conformal_factor(&x).unwrap(), q(4, 1));
        assert_eq!(dil.jacobian(&x).unwrap(), RatMatrix::identity(3).scale(&q(4, 1)));
        let inv = Generator::Inversion.vahlen(s).unwrap();
        let qx = x.quadratic_form();
        assert_eq!(inv.apply(&x).unwrap(), x.scale(&(-qx.recip().unwrap())));
        assert_eq!(inv.conformal_factor(&x).unwrap(), qx.recip().unwrap());
        let null = Vector::new(s, vec![q(1, 1), q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(inv.apply(&null), Err(Error::DenominatorNotInvertible));
        let orth = Generator::Orthogonal(e(s, 1)).matrix(s).unwrap();
        assert_eq!(orth.d, -e(s, 1));
    }

    #[test]
    fn extended_round_trip() {
        let s = s21();
        let m = Mat2::new(
            &e(s, 1) * &e(s, 2) + CliffordElement::one(s),
            e(s, 3),
            e(s, 2).scale(&q(3, 2)),
            &e(s, 1) * &e(s, 3),
        )
        .unwrap();
        let x = m.to_extended().unwrap();
        assert_eq!(Mat2::from_extended(s, &x).unwrap(), m);
    }

    #[test]
    fn word_enumeration() {
        let gens = [Generator::Inversion, Generator::Dilation(q(2, 1))];
        let w = words(&gens, 3);
        assert_eq!(w.len(), 1 + 2 + 4 + 8);
        assert_eq!(word_name(&w[3]), "I·I");
    }
}
