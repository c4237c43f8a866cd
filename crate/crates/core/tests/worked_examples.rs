//! Worked examples for each module, checked through the public API.

use monogen::blade::{blade_product, Blade};
use monogen::conformal::{classify_npoint, embed, gamma, w_act, w_classify, w_equivalent, NPoint, NullVector, PointClass, WClass, WPoint};
use monogen::function::{dirac, eval, eval_exact, is_zero, parse_element, parse_expr, partial, wave, Chamber, DiracKind, Mode, Value};
use monogen::invariance::{cocycle_check, jfactor, transform_left, verify_main};
use monogen::lipschitz::{lipschitz_member, pin_spin_member, twisted_adjoint, PinSpin};
use monogen::matrix::{mobius_apply, vahlen_check, Generator, Mat2, VahlenMatrix};
use monogen::orthogonal::{cartan_dieudonne, OrthogonalMap};
use monogen::rational::q;
use monogen::{CliffordElement, Error, Involution, Rational, Signature, Vector};

fn s21() -> Signature {
    Signature::new(2, 1).unwrap()
}

fn s11() -> Signature {
    Signature::new(1, 1).unwrap()
}

fn el(text: &str, sig: Signature) -> CliffordElement {
    parse_element(text, sig).unwrap()
}

fn vector(sig: Signature, coords: &[i64]) -> Vector {
    Vector::new(sig, coords.iter().map(|&c| Rational::from_int(c)).collect()).unwrap()
}

/// Reduces a word of generator indices by adjacent swaps and contractions.
fn word_oracle(word: &[usize], sig: Signature) -> (i8, Vec<usize>) {
    let mut w = word.to_vec();
    let mut sign = 1i8;
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < w.len() {
            if w[i] > w[i + 1] {
                w.swap(i, i + 1);
                sign = -sign;
                changed = true;
            } else if w[i] == w[i + 1] {
                // e_j² = -Q(e_j)
                sign *= -(sig.q_of(w[i]) as i8);
                w.drain(i..i + 2);
                changed = true;
                continue;
            }
            i += 1;
        }
        if !changed {
            return (sign, w);
        }
    }
}

#[test]
fn generator_squares_follow_the_form() {
    let s = s21();
    assert_eq!(blade_product(Blade::generator(0), Blade::generator(0), &s), (-1, Blade::SCALAR));
    assert_eq!(blade_product(Blade::generator(2), Blade::generator(2), &s), (1, Blade::SCALAR));
}

#[test]
fn bivector_product_matches_word_reduction() {
    let s = s21();
    let (sign, rest) = word_oracle(&[0, 1, 1, 2], s);
    assert_eq!(rest, vec![0, 2]);
    let blade = |idx: &[usize]| Blade::from_indices(idx, &s).unwrap();
    assert_eq!(blade_product(blade(&[1, 2]), blade(&[2, 3]), &s), (sign, blade(&[1, 3])));
    assert_eq!(sign, -1);
}

#[test]
fn element_products() {
    let s = s21();
    assert_eq!(&el("1 + e1", s) * &el("1 - e1", s), el("2", s));
    assert_eq!(&el("e12", s) * &el("e2", s), el("-e1", s));
    let a = el("3/2 + 2*e13 - e2", s);
    assert_eq!(&CliffordElement::one(s) * &a, a);
}

#[test]
fn involution_signs() {
    let s = s21();
    assert_eq!(el("e12", s).grade_involution(), el("e12", s));
    assert_eq!(el("e123", s).reversal(), el("-e123", s));
    assert_eq!(el("e1", s).involution(Involution::Conjugation), el("-e1", s));
}

#[test]
fn quadratic_form_values() {
    let s = s21();
    assert_eq!(vector(s, &[1, 0, 0]).quadratic_form(), q(1, 1));
    assert_eq!(vector(s, &[1, 0, 1]).quadratic_form(), q(0, 1));
    assert_eq!(vector(s, &[1, 0, 0]).bilinear_form(&vector(s, &[0, 1, 0])), q(0, 1));
}

#[test]
fn inverses() {
    let s = s21();
    assert_eq!(el("e3", s).invert().unwrap(), el("e3", s));
    assert_eq!(el("e1", s).invert().unwrap(), el("-e1", s));
    assert_eq!(el("e1 + e3", s).invert(), Err(Error::NotInvertible));
}

#[test]
fn group_membership() {
    let s = s21();
    assert!(lipschitz_member(&el("e12", s)));
    assert!(!lipschitz_member(&el("1 + e1", s)));
    assert!(!lipschitz_member(&CliffordElement::zero(s)));
    assert_eq!(pin_spin_member(&el("e1", s)), PinSpin::PinOnly);
    assert_eq!(pin_spin_member(&el("e12", s)), PinSpin::Spin);
    assert_eq!(pin_spin_member(&el("2*e1", s)), PinSpin::None);
}

#[test]
fn twisted_adjoint_reflects() {
    let s = s21();
    let e1 = vector(s, &[1, 0, 0]);
    let e2 = vector(s, &[0, 1, 0]);
    assert_eq!(twisted_adjoint(&el("e1", s), &e1).unwrap(), e1.scale(&q(-1, 1)));
    assert_eq!(twisted_adjoint(&el("e1", s), &e2).unwrap(), e2);
    assert_eq!(twisted_adjoint(&el("e12", s), &e1).unwrap(), e1.scale(&q(-1, 1)));
}

#[test]
fn reflection_factorizations() {
    let s = Signature::new(2, 0).unwrap();
    assert!(cartan_dieudonne(&OrthogonalMap::identity(s)).unwrap().is_empty());
    let minus = OrthogonalMap::new(s, monogen::linalg::RatMatrix::identity(2).scale(&q(-1, 1))).unwrap();
    let f = cartan_dieudonne(&minus).unwrap();
    assert_eq!(f.len(), 2);
    assert_eq!(OrthogonalMap::compose_reflections(s, &f).unwrap(), minus);

    let h = monogen::linalg::RatMatrix::from_rows(vec![vec![q(5, 4), q(3, 4)], vec![q(3, 4), q(5, 4)]]);
    let boost = OrthogonalMap::new(s11(), h).unwrap();
    let f = cartan_dieudonne(&boost).unwrap();
    assert_eq!(f.len(), 2);
    assert_eq!(OrthogonalMap::compose_reflections(s11(), &f).unwrap(), boost);
}

#[test]
fn jhat_and_involutions() {
    let s = s21();
    let (zero, one) = (CliffordElement::zero(s), CliffordElement::one(s));
    assert_eq!(Mat2::jhat(&zero, &one, &zero, &zero).unwrap(), Mat2::from_scalars(s, [[0, 1], [1, 0]]));
    assert_eq!(Mat2::jhat(&zero, &zero, &one, &zero).unwrap(), Mat2::from_scalars(s, [[0, -1], [1, 0]]));
    assert_eq!(Mat2::jhat(&one, &zero, &zero, &zero).unwrap(), Mat2::identity(s));
    let inv = Mat2::from_scalars(s, [[0, 1], [1, 0]]);
    assert_eq!(inv.involution(Involution::Reversal), inv);
    assert_eq!(Mat2::identity(s).involution(Involution::Conjugation), Mat2::identity(s));
    let m = Mat2::new(el("e1", s), zero.clone(), zero.clone(), el("-e1", s)).unwrap();
    let expected = Mat2::new(el("-e1", s), zero.clone(), zero, el("e1", s)).unwrap();
    assert_eq!(m.involution(Involution::Grade), expected);
}

#[test]
fn pseudo_determinants() {
    let s = s21();
    assert_eq!(Mat2::from_scalars(s, [[0, 1], [1, 0]]).pseudo_det(), el("-1", s));
    let t = Generator::Translation(vector(s, &[1, 2, 0])).matrix(s).unwrap();
    assert_eq!(t.pseudo_det(), el("1", s));
    // ĵ of a vector of the extended space has Δ = Q(v) - x₋² + x₊²
    let v = vector(s, &[1, 2, 1]);
    let xi = Mat2 {
        a: v.to_element(),
        b: CliffordElement::scalar(s, q(3, 1) - q(1, 1)),
        c: CliffordElement::scalar(s, q(3, 1) + q(1, 1)),
        d: -v.to_element(),
    };
    let expected = v.quadratic_form() - q(9, 1) + q(1, 1);
    assert_eq!(xi.pseudo_det().as_scalar(), Some(expected));
}

#[test]
fn vahlen_criteria_examples() {
    let s = s21();
    let t = Generator::Translation(vector(s, &[1, 0, 0])).matrix(s).unwrap();
    assert!(vahlen_check(&t).verdict);
    let bad = Mat2::new(CliffordElement::one(s), el("e12", s), CliffordElement::zero(s), CliffordElement::one(s)).unwrap();
    let r = vahlen_check(&bad);
    assert!(!r.column_products_vector && !r.verdict);
    let i = Mat2::from_scalars(s, [[0, 1], [1, 0]]);
    let r = vahlen_check(&i);
    assert!(r.verdict && r.pseudo_det == el("-1", s));
}

#[test]
fn generator_matrices() {
    let s = s21();
    let e1 = vector(s, &[1, 0, 0]);
    let t = Generator::Translation(e1.clone()).matrix(s).unwrap();
    assert_eq!((t.a.clone(), t.b.clone(), t.c.clone(), t.d.clone()), (el("1", s), el("e1", s), el("0", s), el("1", s)));
    let d = Generator::Dilation(q(2, 1)).matrix(s).unwrap();
    assert_eq!((d.a.clone(), d.d.clone()), (el("2", s), el("1/2", s)));
    let x = vector(s, &[1, -2, 3]);
    assert_eq!(mobius_apply(&d, &x).unwrap(), x.scale(&q(4, 1)));
    let o = Generator::Orthogonal(el("e1", s)).matrix(s).unwrap();
    assert_eq!((o.a.clone(), o.d.clone()), (el("e1", s), el("-e1", s)));
}

#[test]
fn mobius_actions() {
    let s = s21();
    let b = vector(s, &[1, 2, 0]);
    let x = vector(s, &[3, 0, 1]);
    let t = Generator::Translation(b.clone()).matrix(s).unwrap();
    assert_eq!(mobius_apply(&t, &x).unwrap(), x.add(&b));
    let i = Generator::Inversion.matrix(s).unwrap();
    // x⁻¹ = -x / Q(x)
    let expected = x.scale(&(q(-1, 1) / x.quadratic_form()));
    assert_eq!(mobius_apply(&i, &x).unwrap(), expected);
    assert_eq!(mobius_apply(&i, &vector(s, &[1, 0, 1])), Err(Error::DenominatorNotInvertible));
}

#[test]
fn jacobians_and_conformal_factors() {
    let s = s21();
    let x = vector(s, &[1, 2, 1]);
    let t = Generator::Translation(vector(s, &[1, 0, 0])).vahlen(s).unwrap();
    assert_eq!(t.jacobian(&x).unwrap(), monogen::linalg::RatMatrix::identity(3));
    assert_eq!(t.conformal_factor(&x).unwrap(), q(1, 1));
    let d = Generator::Dilation(q(3, 2)).vahlen(s).unwrap();
    assert_eq!(d.jacobian(&x).unwrap(), monogen::linalg::RatMatrix::identity(3).scale(&q(9, 4)));
    assert_eq!(d.conformal_factor(&x).unwrap(), q(9, 4));
    let i = Generator::Inversion.vahlen(s).unwrap();
    assert_eq!(i.conformal_factor(&x).unwrap(), x.quadratic_form().recip().unwrap());
}

#[test]
fn inversion_jacobian_matches_differences() {
    let s = s11();
    let i = Generator::Inversion.vahlen(s).unwrap();
    let x = vector(s, &[1, 0]);
    assert!(monogen::suite::finite_difference_deviation(&i, &x).unwrap() < 1e-8);
}

#[test]
fn null_cone_embedding() {
    let s = s21();
    let half = q(1, 2);
    let origin = NPoint::new(NullVector::new(Vector::zero(s), half.clone(), half.clone()).unwrap());
    assert_eq!(embed(&Vector::zero(s)), origin);
    let e1 = vector(s, &[1, 0, 0]);
    assert_eq!(embed(&e1), NPoint::new(NullVector::new(e1.clone(), q(1, 1), q(0, 1)).unwrap()));
    let null = vector(s, &[1, 0, 1]);
    assert_eq!(embed(&null), NPoint::new(NullVector::new(null.clone(), half.clone(), half).unwrap()));
}

#[test]
fn point_classes() {
    let s = s21();
    let e1 = vector(s, &[1, 0, 0]);
    assert_eq!(classify_npoint(&embed(&e1)).unwrap(), PointClass::Finite(e1));
    let null = vector(s, &[1, 0, 1]);
    let inverted = NPoint::new(NullVector::new(null.clone(), q(-1, 2), q(1, 2)).unwrap());
    assert_eq!(classify_npoint(&inverted).unwrap(), PointClass::InvertedNull(null.clone()));
    let far = NPoint::new(NullVector::new(null.clone(), q(0, 1), q(0, 1)).unwrap());
    assert_eq!(classify_npoint(&far).unwrap(), PointClass::Infinity(null));
}

#[test]
fn gamma_images() {
    let s = s21();
    let v = vector(s, &[1, 2, 0]);
    let g = gamma(&WPoint::from_vector(&v));
    assert_eq!(g, Mat2::new(v.to_element(), CliffordElement::scalar(s, v.quadratic_form()), CliffordElement::one(s), -v.to_element()).unwrap());
    let (zero, one) = (CliffordElement::zero(s), CliffordElement::one(s));
    assert_eq!(gamma(&WPoint::new(one.clone(), zero.clone()).unwrap()), Mat2::from_scalars(s, [[0, 1], [0, 0]]));
    assert_eq!(gamma(&WPoint::new(zero, one).unwrap()), Mat2::from_scalars(s, [[0, 0], [1, 0]]));
}

#[test]
fn conformal_space_classes() {
    let s = s21();
    let null = el("e1 + e3", s);
    let one = CliffordElement::one(s);
    assert_eq!(w_classify(&WPoint::new(null.clone(), one.clone()).unwrap()).unwrap().class, WClass::Finite);
    assert_eq!(w_classify(&WPoint::new(one, null).unwrap()).unwrap().class, WClass::InversionOfNull);
    // found by searching short products in Cl(1,1): I·T(e1/2)·I applied to e1 + e2
    let s = s11();
    let half = Vector::basis(s, 0).scale(&q(1, 2));
    let m = VahlenMatrix::word(s, &[Generator::Inversion, Generator::Translation(half), Generator::Inversion]).unwrap();
    let w = w_act(&m, &WPoint::from_vector(&vector(s, &[1, 1]))).unwrap();
    let c = w_classify(&w).unwrap();
    assert_eq!(c.class, WClass::Infinity);
    assert!(c.witness.is_null() && !c.witness.is_zero());
}

#[test]
fn conformal_space_equivalence() {
    let s = s21();
    let v = vector(s, &[1, 2, 0]);
    let e1 = el("e1", s);
    let base = WPoint::from_vector(&v);
    assert!(w_equivalent(&base, &WPoint::new(&v.to_element() * &e1, e1).unwrap()));
    assert!(!w_equivalent(&WPoint::from_vector(&vector(s, &[1, 0, 0])), &WPoint::from_vector(&vector(s, &[0, 1, 0]))));
    let two = CliffordElement::scalar(s, q(2, 1));
    assert!(w_equivalent(&base, &WPoint::new(&v.to_element() * &two, two).unwrap()));
}

#[test]
fn conformal_space_actions() {
    let s = s21();
    let v = vector(s, &[1, 2, 0]);
    let b = vector(s, &[0, 1, 1]);
    let t = Generator::Translation(b.clone()).vahlen(s).unwrap();
    assert_eq!(w_act(&t, &WPoint::from_vector(&v)).unwrap(), WPoint::from_vector(&v.add(&b)));
    let i = Generator::Inversion.vahlen(s).unwrap();
    let null = vector(s, &[1, 0, 1]);
    let w = w_act(&i, &WPoint::from_vector(&null)).unwrap();
    assert_eq!(w, WPoint::new(CliffordElement::one(s), null.to_element()).unwrap());
    let inv = Vector::from_element(&v.to_element().invert().unwrap()).unwrap();
    assert!(w_equivalent(&w_act(&i, &WPoint::from_vector(&v)).unwrap(), &WPoint::from_vector(&inv)));
}

#[test]
fn parser_structure_and_errors() {
    let s = s21();
    let f = parse_expr("x1*e1 - x2*e2", s).unwrap();
    let x1 = monogen::function::Expr::coord(s, 0);
    let x2 = monogen::function::Expr::coord(s, 1);
    let expected = x1.mul(&monogen::function::Expr::constant(el("e1", s))).sub(&x2.mul(&monogen::function::Expr::constant(el("e2", s))));
    assert_eq!(f, expected);
    assert_eq!(parse_expr("inv(X)", s).unwrap(), monogen::function::Expr::vector_x(s).inv());
    assert!(matches!(parse_expr("abs_pow(e1, 1/2)", s), Err(Error::Grade(_))));
    assert!(matches!(parse_expr("x1 + * x2", s), Err(Error::Syntax { .. })));
}

#[test]
fn evaluation_examples() {
    let s = s21();
    let f = parse_expr("x1*e1 - x2*e2", s).unwrap();
    let p = [q(1, 1), q(2, 1), q(0, 1)];
    assert_eq!(eval_exact(&f, &p, &Chamber::new()).unwrap(), el("e1 - 2*e2", s));
    let inv = parse_expr("inv(X)", s).unwrap();
    assert_eq!(eval_exact(&inv, &[q(1, 1), q(0, 1), q(0, 1)], &Chamber::new()).unwrap(), el("-e1", s));
    let j = jfactor(&Generator::Inversion.matrix(s11()).unwrap()).unwrap();
    let ch = j.chamber_at(&[1.0, 2.0]).unwrap();
    let v = eval(j.as_expr(), &[q(1, 1), q(2, 1)], &ch, Mode::Exact).unwrap();
    assert_eq!(v, Value::Exact(el("1/3*e1 + 2/3*e2", s11())));
}

#[test]
fn derivative_examples() {
    let s = s21();
    assert_eq!(partial(&parse_expr("x1*e1", s).unwrap(), 0), parse_expr("e1", s).unwrap());
    let x = monogen::function::Expr::vector_x(s);
    let d = partial(&x.mul(&x), 0).add(&parse_expr("2*x1", s).unwrap());
    assert!(is_zero(&d, &Chamber::new()).unwrap().zero);
}

#[test]
fn dirac_examples() {
    for (p, qq) in [(1, 1), (2, 1), (2, 2), (3, 0)] {
        let s = Signature::new(p, qq).unwrap();
        let d = dirac(&monogen::function::Expr::vector_x(s), DiracKind::D);
        assert_eq!(d.as_const().and_then(CliffordElement::as_scalar), Some(Rational::from_int(-((p + qq) as i64))));
    }
    let s = s21();
    let f = parse_expr("x1*e1 - x2*e2", s).unwrap();
    assert!(is_zero(&dirac(&f, DiracKind::D), &Chamber::new()).unwrap().zero);
    assert!(is_zero(&dirac(&f, DiracKind::Dstar), &Chamber::new()).unwrap().zero);
    assert!(is_zero(&f.sub(&f), &Chamber::new()).unwrap().zero);
}

#[test]
fn wave_examples() {
    let s = s21();
    let f = parse_expr("x1*x1", s).unwrap();
    let dd = dirac(&dirac(&f, DiracKind::D), DiracKind::D);
    assert!(is_zero(&dd.add(&parse_expr("2", s).unwrap()), &Chamber::new()).unwrap().zero);
    assert!(is_zero(&wave(&f).sub(&parse_expr("2", s).unwrap()), &Chamber::new()).unwrap().zero);
}

#[test]
fn inversion_weight_examples() {
    let s = s11();
    let m = Generator::Inversion.matrix(s).unwrap();
    let w = jfactor(&m).unwrap();
    let ch = w.chamber_at(&[1.0, 2.0]).unwrap();
    let displayed = parse_expr("X*inv(x2*x2 - x1*x1)", s).unwrap();
    assert!(is_zero(&w.as_expr().sub(&displayed), &ch).unwrap().zero);
    let one = monogen::function::Expr::one(s);
    assert_eq!(transform_left(&m, &one).unwrap(), w.as_expr().clone());
    let dstar = dirac(w.as_expr(), DiracKind::Dstar);
    assert_eq!(eval_exact(&dstar, &[q(1, 1), q(2, 1)], &ch).unwrap(), el("-10/9 + 8/9*e12", s));
    assert!(!is_zero(&dstar, &ch).unwrap().zero);
    let r = verify_main(&m, &one, DiracKind::D, &ch).unwrap();
    assert!(r.pass && r.weight_annihilated);
}

#[test]
fn translation_weight_and_cocycle() {
    let s = s21();
    let t = Generator::Translation(vector(s, &[1, 0, 0])).matrix(s).unwrap();
    assert_eq!(jfactor(&t).unwrap().as_expr(), &monogen::function::Expr::one(s));
    let x = vector(s, &[1, 2, 0]);
    assert!(cocycle_check(&t, &t, &x).unwrap().holds);
    let d = Generator::Dilation(q(2, 1)).matrix(s11()).unwrap();
    let i = Generator::Inversion.matrix(s11()).unwrap();
    let out = cocycle_check(&d, &i, &Vector::basis(s11(), 0)).unwrap();
    assert!(out.holds && out.exact);
}

#[test]
fn hyperbolic_rotation_matrix() {
    // a = 1 + e23/3 gives cosh = 5/4, sinh = 3/4
    let s = s21();
    let a = monogen::invariance::hyperbolic_rotor(s, 1, 2, &q(1, 3));
    let m = Generator::Orthogonal(a).vahlen(s).unwrap();
    let e2 = Vector::basis(s, 1);
    let image = m.apply(&e2).unwrap();
    assert_eq!(image.coords()[1].abs(), q(5, 4));
    assert_eq!(image.coords()[2].abs(), q(3, 4));
}
