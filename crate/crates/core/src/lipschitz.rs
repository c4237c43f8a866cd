//! Lipschitz, pin and spin groups and the twisted adjoint action.

use serde::Serialize;

use crate::element::{CliffordElement, Vector};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Membership in `Γ(V)`: `a ā` is a nonzero scalar and `a e_j ã` is a vector
/// for every generator (which covers all of `V` by linearity).
pub fn lipschitz_member(a: &CliffordElement) -> bool {
    let Some(norm) = (a * &a.conjugation()).as_scalar() else {
        return false;
    };
    if norm.is_zero() {
        return false;
    }
    let sig = a.sig();
    let rev = a.reversal();
    (0..sig.dim()).all(|j| (a * &CliffordElement::generator(sig, j) * &rev).is_vector())
}

/// Classification against `Pin(V)` and `Spin(V)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PinSpin {
    None,
    PinOnly,
    Spin,
}

/// `Pin(V) = {a ∈ Γ(V) : ā a = ±1}`, `Spin(V)` adds `â = a`.
pub fn pin_spin_member(a: &CliffordElement) -> PinSpin {
    if !lipschitz_member(a) {
        return PinSpin::None;
    }
    match (&a.conjugation() * a).as_scalar() {
        Some(s) if s.abs().is_one() => {
            if a.grade_involution() == *a {
                PinSpin::Spin
            } else {
                PinSpin::PinOnly
            }
        }
        _ => PinSpin::None,
    }
}

/// `σ_a(x) = a x â⁻¹`.
pub fn twisted_adjoint(a: &CliffordElement, x: &Vector) -> Result<Vector> {
    a.sig().check_same(&x.sig())?;
    if !lipschitz_member(a) {
        return Err(Error::NotLipschitz);
    }
    let image = a * &x.to_element() * a.grade_involution().invert()?;
    Vector::from_element(&image)
}

/// Reflection along a non-null `v`: `x - 2 B(x,v)/Q(v) v`, which equals `σ_v(x)`.
pub fn reflect(v: &Vector, x: &Vector) -> Result<Vector> {
    let qv = v.quadratic_form();
    let inv = qv.recip().ok_or(Error::NotInvertible)?;
    let k = Rational::from_int(2) * x.bilinear_form(v) * inv;
    Ok(x.sub(&v.scale(&k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::signature::Signature;

    fn s() -> Signature {
        Signature::new(2, 1).unwrap()
    }

    fn e(j: usize) -> CliffordElement {
        CliffordElement::generator(s(), j - 1)
    }

    #[test]
    fn membership() {
        assert!(lipschitz_member(&(&e(1) * &e(2))));
        // (1+e1) e1 (1+e1)~ = -2 is scalar, not a vector
        assert!(!lipschitz_member(&(&CliffordElement::one(s()) + &e(1))));
        assert!(!lipschitz_member(&CliffordElement::zero(s())));
        assert!(!lipschitz_member(&(&e(1) + &e(3))));
    }

    #[test]
    fn pin_spin() {
        assert_eq!(pin_spin_member(&e(1)), PinSpin::PinOnly);
        assert_eq!(pin_spin_member(&(&e(1) * &e(2))), PinSpin::Spin);
        assert_eq!(pin_spin_member(&e(1).scale(&q(2, 1))), PinSpin::None);
    }

    #[test]
    fn twisted_adjoint_reflects() {
        let e1 = Vector::basis(s(), 0);
        let e2 = Vector::basis(s(), 1);
        assert_eq!(twisted_adjoint(&e(1), &e1).unwrap(), e1.scale(&q(-1, 1)));
        assert_eq!(twisted_adjoint(&e(1), &e2).unwrap(), e2);
        assert_eq!(twisted_adjoint(&(&e(1) * &e(2)), &e1).unwrap(), e1.scale(&q(-1, 1)));
        assert_eq!(twisted_adjoint(&(&CliffordElement::one(s()) + &e(1)), &e1), Err(Error::NotLipschitz));
        let v = Vector::new(s(), vec![q(1, 1), q(2, 1), q(1, 1)]).unwrap();
        let x = Vector::new(s(), vec![q(-1, 2), q(3, 1), q(5, 1)]).unwrap();
        assert_eq!(twisted_adjoint(&v.to_element(), &x).unwrap(), reflect(&v, &x).unwrap());
    }
}
