//! The conformal weight `J_A`, the transforms `f ↦ J_A · f∘A` and
//! `g ↦ g∘A · J̃_A`, and checks of their compatibility with the Dirac operator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blade::{blade_product, reversal_sign, Blade};
use crate::element::{gram_matrix, CliffordElement, Vector};
use crate::error::{Error, Result};
use crate::function::canon::{chamber_point, is_zero_with, Canonicalizer, Stage, ZeroDecision};
use crate::function::diff::{dirac, dirac_from_basis, dstar_from_frame, DiracKind};
use crate::function::eval::{eval_exact, Chamber, FloatElement};
use crate::function::expr::Expr;
use crate::function::parse::parse_expr;
use crate::function::poly::Mono;
use crate::linalg::RatMatrix;
use crate::matrix::{Generator, Mat2, VahlenMatrix};
use crate::rational::Rational;
use crate::signature::Signature;

/// `J_A` and its reversal as expressions in `x`.
#[derive(Clone, Debug)]
pub struct WeightFactor {
    matrix: VahlenMatrix,
    rho: Expr,
    as_expr: Expr,
    rev_expr: Expr,
}

/// Builds `J_A(x) = (cx+d)⁻¹ |ρ(x)|^{1-n/2}` with `ρ = (x c̃ + d̃)(cx + d)`.
pub fn jfactor(m: &Mat2) -> Result<WeightFactor> {
    let matrix = VahlenMatrix::new(m.clone())?;
    let sig = m.sig();
    let exp = Rational::new(2 - sig.dim() as i64, 2);
    let x = Expr::vector_x(sig);
    let c = Expr::constant(m.c.clone());
    let d = Expr::constant(m.d.clone());
    let c_rev = Expr::constant(m.c.reversal());
    let d_rev = Expr::constant(m.d.reversal());
    let inversion = m.a.is_zero() && m.d.is_zero() && m.b.as_scalar() == Some(Rational::one()) && m.c.as_scalar() == Some(Rational::one());
    if inversion {
        // sgn(x²) x |x²|^{-n/2}
        let xx = x.mul(&x);
        let j = xx.sgn()?.mul(&x).mul(&xx.abs_pow(Rational::new(-(sig.dim() as i64), 2))?);
        return Ok(WeightFactor { matrix, rho: xx, as_expr: j.clone(), rev_expr: j });
    }
    let right = c.mul(&x).add(&d);
    let left = x.mul(&c_rev).add(&d_rev);
    let rho = left.mul(&right).part(Blade::SCALAR);
    let scale = rho.abs_pow(exp)?;
    Ok(WeightFactor { matrix, as_expr: right.inv().mul(&scale), rev_expr: left.inv().mul(&scale), rho })
}

impl WeightFactor {
    pub fn matrix(&self) -> &VahlenMatrix {
        &self.matrix
    }

    pub fn sig(&self) -> Signature {
        self.matrix.sig()
    }

    /// The scalar base `ρ`.
    pub fn rho(&self) -> &Expr {
        &self.rho
    }

    /// `J_A`.
    pub fn as_expr(&self) -> &Expr {
        &self.as_expr
    }

    /// `J̃_A = (x c̃ + d̃)⁻¹ |ρ|^{1-n/2}`.
    pub fn rev_expr(&self) -> &Expr {
        &self.rev_expr
    }

    /// `Ω_A = Δ(A) / ρ`.
    pub fn omega_expr(&self) -> Expr {
        let m = self.matrix.matrix();
        let x = Expr::vector_x(self.sig());
        let rho = x.mul(&Expr::constant(m.c.reversal())).add(&Expr::constant(m.d.reversal()));
        let rho = rho.mul(&Expr::constant(m.c.clone()).mul(&x).add(&Expr::constant(m.d.clone()))).part(Blade::SCALAR);
        rho.inv().scale(&self.matrix.pseudo_det())
    }

    /// The Möbius image `(a x + b)(c x + d)⁻¹` as an expression.
    pub fn image_expr(&self) -> Expr {
        mobius_expr(self.matrix.matrix())
    }

    /// The chamber of `ρ` containing `point`.
    pub fn chamber_at(&self, point: &[f64]) -> Result<Chamber> {
        Chamber::containing(&self.as_expr, point)
    }

    /// A chamber of `ρ` containing a pseudo-random point, drawn with `seed`.
    pub fn some_chamber(&self, seed: u64) -> Result<Chamber> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let p = crate::function::canon::random_point(&mut rng, self.sig().dim());
            let pf: Vec<f64> = p.iter().map(Rational::to_f64).collect();
            let Ok(ch) = self.chamber_at(&pf) else { continue };
            if chamber_point(&self.as_expr, &ch, &mut rng, 1).is_some() || ch.is_empty() {
                return Ok(ch);
            }
        }
        Err(Error::ChamberMismatch("no chamber point found".into()))
    }

    /// `J_A(x)`, exact when the power resolves and in floating point otherwise.
    pub fn value_at(&self, x: &Vector) -> Result<JValue> {
        let den = self.matrix.denominator_inverse(x)?;
        let rho = self.matrix.rho(x)?;
        let exp = Rational::new(2 - self.sig().dim() as i64, 2);
        Ok(match rho.abs_pow(&exp) {
            Some(s) => JValue::Exact(den.scale(&s)),
            None => JValue::Float(FloatElement::from_exact(&den).scale(rho.to_f64().abs().powf(exp.to_f64()))),
        })
    }
}

/// A value of `J_A` at a point.
#[derive(Clone, Debug, PartialEq)]
pub enum JValue {
    Exact(CliffordElement),
    Float(FloatElement),
}

impl JValue {
    fn to_float(&self) -> FloatElement {
        match self {
            JValue::Exact(e) => FloatElement::from_exact(e),
            JValue::Float(f) => f.clone(),
        }
    }

    fn mul(&self, other: &JValue) -> JValue {
        match (self, other) {
            (JValue::Exact(a), JValue::Exact(b)) => JValue::Exact(a * b),
            _ => JValue::Float(self.to_float().mul(&other.to_float())),
        }
    }
}

/// `(a X + b)(c X + d)⁻¹`.
pub fn mobius_expr(m: &Mat2) -> Expr {
    let x = Expr::vector_x(m.sig());
    let num = Expr::constant(m.a.clone()).mul(&x).add(&Expr::constant(m.b.clone()));
    let den = Expr::constant(m.c.clone()).mul(&x).add(&Expr::constant(m.d.clone()));
    num.mul(&den.inv())
}

/// `J_A(x) f(Ax)`.
pub fn transform_left(m: &Mat2, f: &Expr) -> Result<Expr> {
    let w = jfactor(m)?;
    Ok(w.as_expr.mul(&f.substitute(&w.image_expr())))
}

/// `g(Ax) J̃_A(x)`.
pub fn transform_right(m: &Mat2, g: &Expr) -> Result<Expr> {
    let w = jfactor(m)?;
    Ok(g.substitute(&w.image_expr()).mul(&w.rev_expr))
}

/// Outcome of one check of the transformation law.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub signature: String,
    pub word: String,
    pub function: String,
    pub operator: DiracKind,
    pub chamber: Chamber,
    /// Distinct nodes in the residual tree.
    pub residual_nodes: usize,
    pub stage: Stage,
    pub pass: bool,
    /// Whether the operator also annihilates the weight factor.
    pub weight_annihilated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fallback_reason: Option<String>,
    #[serde(skip)]
    pub residual: Expr,
}

/// The residual of the transformation law for operator `op`:
/// `P(J f∘A) - Ω J (P f)∘A` for left operators and
/// `(g∘A J̃) P - Ω (g P)∘A J̃` for right ones.
pub fn main_residual(w: &WeightFactor, f: &Expr, op: DiracKind) -> Expr {
    let image = w.image_expr();
    let omega = w.omega_expr();
    if op.is_right() {
        let transformed = f.substitute(&image).mul(&w.rev_expr);
        let expected = omega.mul(&dirac(f, op).substitute(&image)).mul(&w.rev_expr);
        dirac(&transformed, op).sub(&expected)
    } else {
        let transformed = w.as_expr.mul(&f.substitute(&image));
        let expected = omega.mul(&w.as_expr).mul(&dirac(f, op).substitute(&image));
        dirac(&transformed, op).sub(&expected)
    }
}

/// Checks the transformation law for `f` under `m` on `chamber`.
pub fn verify_main(m: &Mat2, f: &Expr, op: DiracKind, chamber: &Chamber) -> Result<VerificationReport> {
    let w = jfactor(m)?;
    let mut canon = Canonicalizer::new(m.sig(), chamber);
    verify_with(&mut canon, &w, f, op, "", 0)
}

/// [`verify_main`] with a caller-owned canonicalizer, so that many functions
/// checked against one matrix share work.
pub fn verify_with(
    canon: &mut Canonicalizer,
    w: &WeightFactor,
    f: &Expr,
    op: DiracKind,
    word: &str,
    seed: u64,
) -> Result<VerificationReport> {
    let residual = main_residual(w, f, op);
    let decision = is_zero_with(canon, &residual, seed)?;
    let weight = if op.is_right() { w.rev_expr.clone() } else { w.as_expr.clone() };
    let weight_annihilated = is_zero_with(canon, &dirac(&weight, op), seed)?.zero;
    Ok(report(w, f, op, canon.chamber(), word, residual, decision, weight_annihilated))
}

#[allow(clippy::too_many_arguments)]
fn report(
    w: &WeightFactor,
    f: &Expr,
    op: DiracKind,
    chamber: &Chamber,
    word: &str,
    residual: Expr,
    decision: ZeroDecision,
    weight_annihilated: bool,
) -> VerificationReport {
    VerificationReport {
        signature: w.sig().to_string(),
        word: if word.is_empty() { w.matrix.matrix().to_string() } else { word.to_string() },
        function: f.to_string(),
        operator: op,
        chamber: chamber.clone(),
        residual_nodes: residual.node_count(),
        stage: decision.stage,
        pass: decision.zero,
        weight_annihilated,
        max_residual: decision.max_residual,
        fallback_reason: decision.fallback_reason,
        residual,
    }
}

/// Outcome of [`cocycle_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CocycleOutcome {
    pub holds: bool,
    pub exact: bool,
    /// Largest coefficient of the difference, relative to the larger side.
    pub deviation: f64,
}

/// Relative tolerance for float comparisons of `J` values.
pub const COCYCLE_TOLERANCE: f64 = 1e-9;

/// `J_{A₂A₁}(x) = J_{A₁}(x) J_{A₂}(A₁x)`.
pub fn cocycle_check(m1: &Mat2, m2: &Mat2, x: &Vector) -> Result<CocycleOutcome> {
    let w1 = jfactor(m1)?;
    let w2 = jfactor(m2)?;
    let w21 = jfactor(&(m2 * m1))?;
    let y = w1.matrix.apply(x)?;
    let lhs = w21.value_at(x)?;
    let rhs = w1.value_at(x)?.mul(&w2.value_at(&y)?);
    Ok(match (&lhs, &rhs) {
        (JValue::Exact(a), JValue::Exact(b)) => {
            let diff = a - b;
            CocycleOutcome { holds: diff.is_zero(), exact: true, deviation: diff.max_abs() }
        }
        _ => {
            let (a, b) = (lhs.to_float(), rhs.to_float());
            let scale = a.max_abs().max(b.max_abs()).max(f64::MIN_POSITIVE);
            let deviation = a.sub(&b).max_abs() / scale;
            CocycleOutcome { holds: deviation < COCYCLE_TOLERANCE, exact: false, deviation }
        }
    })
}

/// `Σ_{λ,μ} [B⁻¹]_{λμ} e_λ (cx+d)⁻¹ ∂(Ax)_κ/∂x_μ = Ω (cx+d)⁻¹ Σ_ν [B⁻¹]_{νκ} e_ν`
/// for every `κ`, exactly.
pub fn gradient_identity(m: &VahlenMatrix, x: &Vector) -> Result<bool> {
    let sig = m.sig();
    let n = sig.dim();
    let b_inv = gram_matrix(&sig).inverse().expect("Gram matrix is invertible");
    let den = m.denominator_inverse(x)?;
    let jac = m.jacobian(x)?;
    let omega = m.conformal_factor(x)?;
    for kappa in 0..n {
        let mut lhs = CliffordElement::zero(sig);
        let mut rhs = CliffordElement::zero(sig);
        for lambda in 0..n {
            let el = CliffordElement::generator(sig, lambda);
            for mu in 0..n {
                let coef = &b_inv[(lambda, mu)] * &jac[(kappa, mu)];
                if !coef.is_zero() {
                    lhs = &lhs + &(&el * &den).scale(&coef);
                }
            }
            if !b_inv[(lambda, kappa)].is_zero() {
                rhs = &rhs + &(&den * &el).scale(&(&omega * &b_inv[(lambda, kappa)]));
            }
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A monogenic test function and its reversal, which is right monogenic.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    #[serde(skip)]
    pub left: Expr,
    #[serde(skip)]
    pub right: Expr,
}

/// Fixed monogenic test functions: the constant `1`, `x1 e1 - x2 e2`, one
/// element of the linear kernel of `D` and two of its degree-two kernel.
/// Kernel elements come from an exact null-space computation.
pub fn monogenic_catalog(sig: Signature) -> Result<Vec<CatalogEntry>> {
    let mut texts = vec![("1".to_string(), "1".to_string())];
    if sig.dim() >= 2 {
        texts.push(("x1*e1 - x2*e2".to_string(), "x1*e1 - x2*e2".to_string()));
    }
    for (degree, count) in [(1u32, 1usize), (2, 2)] {
        let (monos, kernel) = homogeneous_kernel(sig, degree);
        for v in kernel.iter().take(count) {
            texts.push((poly_text(sig, &monos, v, false), poly_text(sig, &monos, v, true)));
        }
    }
    texts
        .into_iter()
        .map(|(l, r)| {
            Ok(CatalogEntry { left: parse_expr(&l, sig)?, right: parse_expr(&r, sig)?, name: l })
        })
        .collect()
}

fn monomials(n: usize, degree: u32) -> Vec<Mono> {
    let mut out = vec![Mono::ONE];
    for _ in 0..degree {
        let mut next: Vec<Mono> = out.iter().flat_map(|m| (0..n).map(move |i| m.mul(Mono::var(i)))).collect();
        next.sort();
        next.dedup();
        out = next;
    }
    out
}

/// Basis of `{f homogeneous of the given degree : Df = 0}` in coordinates
/// indexed by `(monomial, blade)`.
fn homogeneous_kernel(sig: Signature, degree: u32) -> (Vec<Mono>, Vec<Vec<Rational>>) {
    let n = sig.dim();
    let blades = sig.blade_count();
    let monos = monomials(n, degree);
    let lower = monomials(n, degree - 1);
    let mut mat = RatMatrix::zeros(lower.len() * blades, monos.len() * blades);
    for (mi, m) in monos.iter().enumerate() {
        for j in 0..n {
            let Some((k, rest)) = m.derive(j) else { continue };
            let row_m = lower.binary_search(&rest).expect("lower monomial");
            for b in 0..blades {
                let (sign, out) = blade_product(Blade::generator(j), Blade(b as u32), &sig);
                let coef = Rational::from_int(sig.q_of(j) * i64::from(sign) * i64::from(k));
                mat[(row_m * blades + out.0 as usize, mi * blades + b)] += &coef;
            }
        }
    }
    (monos, mat.kernel())
}

fn poly_text(sig: Signature, monos: &[Mono], v: &[Rational], reversed: bool) -> String {
    let blades = sig.blade_count();
    let mut out = String::new();
    for (idx, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (m, b) = (monos[idx / blades], Blade((idx % blades) as u32));
        let c = if reversed && reversal_sign(b) < 0 { -c } else { c.clone() };
        let mut factors: Vec<String> = Vec::new();
        if !c.abs().is_one() {
            factors.push(c.abs().to_string());
        }
        for i in 0..sig.dim() {
            for _ in 0..m.exponent(i) {
                factors.push(format!("x{}", i + 1));
            }
        }
        if b != Blade::SCALAR {
            factors.push(b.to_string());
        }
        if factors.is_empty() {
            factors.push("1".into());
        }
        let sep = match (out.is_empty(), c.is_negative()) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        out.push_str(sep);
        out.push_str(&factors.join("*"));
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// The hyperbolic rotation `a = 1 + t e_i e_j` with `cosh = (1+t²)/(1-t²)`,
/// `sinh = 2t/(1-t²)` in the `e_i e_j` plane.
pub fn hyperbolic_rotor(sig: Signature, i: usize, j: usize, t: &Rational) -> CliffordElement {
    let plane = &CliffordElement::generator(sig, i) * &CliffordElement::generator(sig, j);
    &CliffordElement::one(sig) + &plane.scale(t)
}

/// One appendix check with its verdict.
#[derive(Clone, Debug, Serialize)]
pub struct ScenarioCheck {
    pub name: String,
    pub expected: bool,
    pub observed: bool,
    pub stage: Stage,
}

impl ScenarioCheck {
    pub fn ok(&self) -> bool {
        self.expected == self.observed
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Scenario {
    pub name: String,
    pub signature: String,
    pub checks: Vec<ScenarioCheck>,
}

impl Scenario {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(ScenarioCheck::ok)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AppendixReport {
    pub scenarios: Vec<Scenario>,
}

impl AppendixReport {
    pub fn ok(&self) -> bool {
        self.scenarios.iter().all(Scenario::ok)
    }
}

fn check(canon: &mut Canonicalizer, name: &str, f: &Expr, expected_zero: bool) -> Result<ScenarioCheck> {
    let d = is_zero_with(canon, f, 0)?;
    Ok(ScenarioCheck { name: name.into(), expected: expected_zero, observed: d.zero, stage: d.stage })
}

/// Scenario (i): a hyperbolic rotation in the `e2 e3` plane of `R^{2,1}`
/// preserves monogenicity for `D` but not for the all-plus operator.
pub fn hyperbolic_scenario(t: &Rational) -> Result<Scenario> {
    let sig = Signature::new(2, 1)?;
    let a = hyperbolic_rotor(sig, 1, 2, t);
    let m = Generator::Orthogonal(a.clone()).matrix(sig)?;
    let w = jfactor(&m)?;
    let mut canon = Canonicalizer::new(sig, &Chamber::new());
    let f = parse_expr("x1*e1 - x2*e2", sig)?;
    let first = parse_expr("x1*e1", sig)?;
    let second = parse_expr("-x2*e2", sig)?;
    let j = w.as_expr().clone();
    let tf1 = transform_left(&m, &first)?;
    let tf2 = transform_left(&m, &second)?;
    // the rotor is not normalized: J = (1 - t e23)(1 - t²)^{-3/2}, and the
    // all-plus operator turns the second term into (1 + t e23)³ (1 - t²)^{-5/2}
    let norm = &Rational::one() - &(t * t);
    let cube = Expr::constant(&(&a * &a) * &a).mul(&Expr::scalar(sig, norm).abs_pow(Rational::new(-5, 2))?);
    let mut checks = vec![
        check(&mut canon, "D residual vanishes", &main_residual(&w, &f, DiracKind::D), true)?,
        check(&mut canon, "D* residual vanishes", &main_residual(&w, &f, DiracKind::Dstar), false)?,
        check(&mut canon, "D* first term equals -J", &dirac(&tf1, DiracKind::Dstar).add(&j), true)?,
        check(&mut canon, "D* second term equals the triple-angle rotor", &dirac(&tf2, DiracKind::Dstar).sub(&cube), true)?,
        check(&mut canon, "D first term equals -J", &dirac(&tf1, DiracKind::D).add(&j), true)?,
        check(&mut canon, "D second term equals J", &dirac(&tf2, DiracKind::D).sub(&j), true)?,
    ];
    checks.push(check(&mut canon, "f is D*-monogenic", &dirac(&f, DiracKind::Dstar), true)?);
    Ok(Scenario { name: "hyperbolic rotation".into(), signature: sig.to_string(), checks })
}

/// Scenario (ii): the inversion applied to `f = 1` in `R^{1,1}`.
pub fn inversion_scenario() -> Result<Scenario> {
    let sig = Signature::new(1, 1)?;
    let m = Generator::Inversion.matrix(sig)?;
    let w = jfactor(&m)?;
    let chamber = w.chamber_at(&[1.0, 2.0])?;
    let mut canon = Canonicalizer::new(sig, &chamber);
    let j = transform_left(&m, &Expr::one(sig))?;
    let displayed = parse_expr("x1*e1 + x2*e2", sig)?.mul(&parse_expr("x2*x2 - x1*x1", sig)?.inv());
    let dstar_shown = parse_expr("2*(-x1*x1 - x2*x2 + 2*x1*x2*e12)", sig)?
        .mul(&parse_expr("(x2*x2 - x1*x1)*(x2*x2 - x1*x1)", sig)?.inv());
    let dj = dirac(&j, DiracKind::D);
    let dstar_j = dirac(&j, DiracKind::Dstar);
    let point = [Rational::one(), Rational::from_int(2)];
    let at_point = eval_exact(&dstar_j, &point, &chamber)?;
    let expected_at_point = crate::function::parse::parse_element("-10/9 + 8/9*e12", sig)?;
    let checks = vec![
        check(&mut canon, "J equals x/(x2² - x1²)", &j.sub(&displayed), true)?,
        check(&mut canon, "D J vanishes", &dj, true)?,
        check(&mut canon, "D* J vanishes", &dstar_j, false)?,
        check(&mut canon, "D* J equals the displayed quotient", &dstar_j.sub(&dstar_shown), true)?,
        ScenarioCheck {
            name: "D* J at (1,2) is (-10 + 8 e12)/9".into(),
            expected: true,
            observed: at_point == expected_at_point && eval_exact(&dj, &point, &chamber)?.is_zero(),
            stage: Stage::Canonical,
        },
    ];
    Ok(Scenario { name: "inversion of the constant function".into(), signature: sig.to_string(), checks })
}

/// Scenario (iii): two orthonormal frames of `R^{2,1}` related by a
/// hyperbolic rotation give different all-plus operators but the same `D`.
pub fn frame_scenario(t: &Rational) -> Result<Scenario> {
    let sig = Signature::new(2, 1)?;
    let norm = &Rational::one() - &(t * t);
    let ch = &(&Rational::one() + &(t * t)) / &norm;
    let sh = &(t * &Rational::from_int(2)) / &norm;
    let z = Rational::zero();
    let frame = RatMatrix::from_rows(vec![
        vec![Rational::one(), z.clone(), z.clone()],
        vec![z.clone(), ch.clone(), sh.clone()],
        vec![z, sh, ch],
    ]);
    let standard = RatMatrix::identity(3);
    let f = parse_expr("x1*e1 - x2*e2", sig)?;
    let mut canon = Canonicalizer::new(sig, &Chamber::new());
    let checks = vec![
        check(
            &mut canon,
            "all-plus operators of the two frames agree on the witness",
            &dstar_from_frame(&frame, &f)?.sub(&dstar_from_frame(&standard, &f)?),
            false,
        )?,
        check(
            &mut canon,
            "Dirac operators of the two frames agree on the witness",
            &dirac_from_basis(&frame, &f)?.sub(&dirac_from_basis(&standard, &f)?),
            true,
        )?,
    ];
    Ok(Scenario { name: "frame dependence of the all-plus operator".into(), signature: sig.to_string(), checks })
}

/// Runs the three appendix scenarios with the default parameter `t = 1/3`.
pub fn appendix_suite() -> Result<AppendixReport> {
    let t = Rational::new(1, 3);
    Ok(AppendixReport { scenarios: vec![hyperbolic_scenario(&t)?, inversion_scenario()?, frame_scenario(&t)?] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn translation_weight_is_one() {
        let s = Signature::new(2, 1).unwrap();
        let m = Generator::Translation(Vector::basis(s, 0)).matrix(s).unwrap();
        let w = jfactor(&m).unwrap();
        assert_eq!(w.as_expr(), &Expr::one(s));
        let f = parse_expr("x1*x2*e3", s).unwrap();
        let expected = parse_expr("(x1 + 1)*x2*e3", s).unwrap();
        let diff = transform_left(&m, &f).unwrap().sub(&expected);
        assert!(crate::function::canon::is_zero(&diff, &Chamber::new()).unwrap().zero);
    }

    #[test]
    fn inversion_weight_in_split_plane() {
        let s = Signature::new(1, 1).unwrap();
        let w = jfactor(&Generator::Inversion.matrix(s).unwrap()).unwrap();
        let ch = w.chamber_at(&[1.0, 2.0]).unwrap();
        let v = eval_exact(w.as_expr(), &[q(1, 1), q(2, 1)], &ch).unwrap();
        assert_eq!(v.to_string(), "1/3*e1 + 2/3*e2");
    }

    #[test]
    fn orthogonal_weight_matches_closed_form() {
        // J = â⁻¹ / |ã a|^{n/2-1}
        let s = Signature::new(2, 2).unwrap();
        let a = crate::function::parse::parse_element("e12", s).unwrap();
        let a = &a + &CliffordElement::scalar(s, q(2, 1));
        let m = Generator::Orthogonal(a.clone()).matrix(s).unwrap();
        let w = jfactor(&m).unwrap();
        let norm = (&a.reversal() * &a).as_scalar().unwrap();
        let expected = a.grade_involution().invert().unwrap().scale(&norm.abs().recip().unwrap());
        assert_eq!(w.as_expr().as_const(), Some(&expected));
    }

    #[test]
    fn main_law_for_inversion_of_constant() {
        for (p, qq) in [(1, 1), (2, 0), (2, 2)] {
            let s = Signature::new(p, qq).unwrap();
            let m = Generator::Inversion.matrix(s).unwrap();
            let w = jfactor(&m).unwrap();
            let ch = w.some_chamber(1).unwrap();
            let r = verify_main(&m, &Expr::one(s), DiracKind::D, &ch).unwrap();
            assert!(r.pass && r.weight_annihilated, "{r:?}");
            assert_eq!(r.stage, Stage::Canonical);
        }
    }

    #[test]
    fn main_law_odd_dimension() {
        let s = Signature::new(2, 1).unwrap();
        let word = [Generator::Translation(Vector::basis(s, 0)), Generator::Inversion];
        let m = VahlenMatrix::word(s, &word).unwrap().into_matrix();
        let f = parse_expr("x1*e1 - x2*e2", s).unwrap();
        let w = jfactor(&m).unwrap();
        let ch = w.some_chamber(3).unwrap();
        let r = verify_main(&m, &f, DiracKind::D, &ch).unwrap();
        assert!(r.pass, "{r:?}");
        let rr = verify_main(&m, &f, DiracKind::RightD, &ch).unwrap();
        assert!(rr.pass, "{rr:?}");
    }

    #[test]
    fn right_law_needs_the_transformed_argument() {
        // with (gD)(x) in place of (gD)(Ax) the right-hand law fails for a
        // non-monogenic g
        let s = Signature::new(1, 1).unwrap();
        let m = Generator::Inversion.matrix(s).unwrap();
        let w = jfactor(&m).unwrap();
        let ch = w.some_chamber(5).unwrap();
        let g = parse_expr("x1*x1*e2 + x2", s).unwrap();
        let image = w.image_expr();
        let lhs = dirac(&g.substitute(&image).mul(w.rev_expr()), DiracKind::RightD);
        let printed = w.omega_expr().mul(&dirac(&g, DiracKind::RightD)).mul(w.rev_expr());
        let corrected = w.omega_expr().mul(&dirac(&g, DiracKind::RightD).substitute(&image)).mul(w.rev_expr());
        let mut canon = Canonicalizer::new(s, &ch);
        assert!(!is_zero_with(&mut canon, &lhs.sub(&printed), 0).unwrap().zero);
        assert!(is_zero_with(&mut canon, &lhs.sub(&corrected), 0).unwrap().zero);
    }

    #[test]
    fn all_plus_operator_breaks_the_law() {
        let s = Signature::new(2, 1).unwrap();
        let m = Generator::Inversion.matrix(s).unwrap();
        let w = jfactor(&m).unwrap();
        let ch = w.some_chamber(2).unwrap();
        let f = parse_expr("x1*e1 - x2*e2", s).unwrap();
        let r = verify_main(&m, &f, DiracKind::Dstar, &ch).unwrap();
        assert!(!r.pass && !r.weight_annihilated, "{r:?}");
    }

    #[test]
    fn cocycle_dilation_then_inversion() {
        let s = Signature::new(1, 1).unwrap();
        let m1 = Generator::Dilation(q(2, 1)).matrix(s).unwrap();
        let m2 = Generator::Inversion.matrix(s).unwrap();
        let out = cocycle_check(&m1, &m2, &Vector::basis(s, 0)).unwrap();
        assert!(out.holds && out.exact);
    }

    #[test]
    fn catalog_is_monogenic() {
        for (p, qq) in [(1, 1), (2, 1), (3, 0), (2, 2)] {
            let s = Signature::new(p, qq).unwrap();
            let cat = monogenic_catalog(s).unwrap();
            assert_eq!(cat.len(), 5);
            for e in &cat {
                let ch = Chamber::new();
                assert!(crate::function::canon::is_zero(&dirac(&e.left, DiracKind::D), &ch).unwrap().zero, "{}", e.name);
                assert!(crate::function::canon::is_zero(&dirac(&e.right, DiracKind::RightD), &ch).unwrap().zero, "{}", e.name);
            }
        }
    }

    #[test]
    fn appendix() {
        let r = appendix_suite().unwrap();
        for sc in &r.scenarios {
            for c in &sc.checks {
                assert!(c.ok(), "{}: {}", sc.name, c.name);
            }
        }
    }

    #[test]
    fn gradient_identity_holds() {
        let s = Signature::new(2, 1).unwrap();
        let m = VahlenMatrix::word(s, &[Generator::Inversion, Generator::Translation(Vector::basis(s, 1))]).unwrap();
        let x = Vector::new(s, vec![q(1, 2), q(-1, 3), q(2, 1)]).unwrap();
        assert!(gradient_identity(&m, &x).unwrap());
    }
}
