//! Exact normal forms on a chamber, and the two-stage zero decision.
//!
//! A normal form is a sum of classes `Π A_i^{e_i} · P(x)` where `P` is a
//! `Cl(V)`-valued polynomial and the `A_i` are atoms: positive values such as
//! `|R(x)|` for a polynomial `R` of known sign on the chamber, plain
//! polynomials raised to integer powers, or positive rational constants.
//! Classes are keyed by the fractional parts of their exponents; terms whose
//! exponents differ by integers are merged over a common denominator. Since
//! every atom is nonzero on the chamber, a single class vanishes exactly when
//! its polynomial does.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::element::Involution;
use crate::error::{Error, Result};
use crate::function::eval::{eval_exact, eval_float, eval_float_scaled, Chamber};
use crate::function::expr::{Expr, Kind};
use crate::function::poly::{CliffPoly, Poly};
use crate::rational::Rational;
use crate::signature::Signature;

/// Upper bound on the polynomial terms held by one normal form.
pub const DEFAULT_TERM_BUDGET: usize = 60_000;
/// Points sampled by the fallback stage.
pub const SAMPLE_POINTS: usize = 64;
/// Relative tolerance of the fallback stage in float mode.
pub const FLOAT_TOLERANCE: f64 = 1e-9;
/// Sampled points keep this distance from chamber boundaries.
pub const BOUNDARY_MARGIN: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Atom {
    /// `|P|` with `P` of the given sign on the chamber.
    Signed(Poly, i8),
    /// `P` itself; integer exponents only.
    Plain(Poly),
    /// A positive rational constant.
    Const(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Class {
    /// Sorted by atom index, no zero exponents.
    exps: Vec<(usize, Rational)>,
    poly: CliffPoly,
}

/// A normal form: classes with pairwise distinct fractional exponent patterns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canon {
    classes: Vec<Class>,
}

impl Canon {
    pub fn is_zero(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn term_count(&self) -> usize {
        self.classes.iter().map(|c| c.poly.term_count()).sum()
    }
}

/// Why a tree left the normalizable class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stop {
    NotNormalizable(String),
    Budget,
    Chamber(Error),
}

/// Rewrites expressions into normal forms for one chamber.
///
/// Atoms and per-node results are cached, so reusing one canonicalizer for
/// many expressions that share subtrees avoids repeated work.
pub struct Canonicalizer {
    sig: Signature,
    chamber: Chamber,
    atoms: Vec<Atom>,
    memo: FxHashMap<u64, Arc<Canon>>,
    budget: usize,
}

impl Canonicalizer {
    pub fn new(sig: Signature, chamber: &Chamber) -> Self {
        let mut c = Self { sig, chamber: chamber.clone(), atoms: Vec::new(), memo: FxHashMap::default(), budget: DEFAULT_TERM_BUDGET };
        // register declared bases first so later denominators reuse them
        let bases: Vec<(Expr, i8)> = chamber.bases().map(|(e, s)| (e.clone(), s)).collect();
        for (base, sign) in bases {
            if base.sig() != sig {
                continue;
            }
            if let Ok(form) = c.canon(&base) {
                if let [class] = form.classes.as_slice() {
                    if class.exps.is_empty() {
                        if let Some(p) = class.poly.as_scalar() {
                            let (k, prim) = p.primitive_part();
                            if prim.degree() > 0 {
                                c.atom_index(Atom::Signed(prim, sign * k.signum() as i8));
                            }
                        }
                    }
                }
            }
        }
        c
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn chamber(&self) -> &Chamber {
        &self.chamber
    }

    /// Forgets cached normal forms, keeping the atom table.
    pub fn clear_cache(&mut self) {
        self.memo.clear();
    }

    pub fn canon(&mut self, f: &Expr) -> Result<Arc<Canon>, Stop> {
        if let Some(c) = self.memo.get(&f.id()) {
            return Ok(c.clone());
        }
        // iterative post-order keeps deep trees off the call stack
        let mut stack = vec![(f.clone(), false)];
        while let Some((e, ready)) = stack.pop() {
            if self.memo.contains_key(&e.id()) {
                continue;
            }
            if !ready {
                stack.push((e.clone(), true));
                for c in e.children() {
                    if !self.memo.contains_key(&c.id()) {
                        stack.push((c.clone(), false));
                    }
                }
                continue;
            }
            let form = self.node(&e)?;
            if form.term_count() > self.budget {
                return Err(Stop::Budget);
            }
            self.memo.insert(e.id(), Arc::new(form));
        }
        Ok(self.memo[&f.id()].clone())
    }

    fn child(&self, e: &Expr) -> Arc<Canon> {
        self.memo[&e.id()].clone()
    }

    fn node(&mut self, e: &Expr) -> Result<Canon, Stop> {
        let sig = self.sig;
        Ok(match e.kind() {
            Kind::Const(c) => self.single(Vec::new(), CliffPoly::constant(c)),
            Kind::Coord(i) => self.single(Vec::new(), CliffPoly::scalar(sig, Poly::var(*i))),
            Kind::VectorX => self.single(Vec::new(), CliffPoly::identity_vector(sig)),
            Kind::Add(a, b) => {
                let (a, b) = (self.child(a), self.child(b));
                self.combine(a.classes.iter().chain(&b.classes).cloned().collect())
            }
            Kind::Mul(a, b) => {
                let (a, b) = (self.child(a), self.child(b));
                let mut out = Vec::with_capacity(a.classes.len() * b.classes.len());
                for ca in &a.classes {
                    for cb in &b.classes {
                        let poly = ca.poly.mul(&cb.poly);
                        if !poly.is_zero() {
                            out.push(Class { exps: add_exps(&ca.exps, &cb.exps), poly });
                        }
                    }
                }
                self.combine(out)
            }
            Kind::Inv(a) => {
                let a = self.child(a);
                let [class] = a.classes.as_slice() else {
                    return Err(Stop::NotNormalizable(format!("inverse of a form with {} classes", a.classes.len())));
                };
                let (bar, norm) = self.conjugate_norm(&class.poly)?;
                let (coef, mut exps) = self.invert_scalar(&norm)?;
                for (i, x) in &class.exps {
                    exps.push((*i, -x));
                }
                let exps = normalize_exps(exps);
                self.combine(vec![Class { exps, poly: bar.scale(&coef) }])
            }
            Kind::AbsPow(base, s) => {
                let sign = self.declared(base)?;
                let form = self.child(base);
                self.abs_pow(&form, sign, s)?
            }
            Kind::Sgn(base) => {
                let sign = self.declared(base)?;
                self.single(Vec::new(), CliffPoly::scalar(sig, Poly::constant(Rational::from_int(i64::from(sign)))))
            }
            Kind::Part(a, blade) => {
                let a = self.child(a);
                let out = a
                    .classes
                    .iter()
                    .map(|c| Class { exps: c.exps.clone(), poly: CliffPoly::scalar(sig, c.poly.part(*blade)) })
                    .filter(|c| !c.poly.is_zero())
                    .collect();
                self.combine(out)
            }
        })
    }

    fn declared(&self, base: &Expr) -> Result<i8, Stop> {
        if let Some(c) = base.as_const() {
            return Ok(c.scalar_part().signum() as i8);
        }
        self.chamber.sign_of(base).ok_or_else(|| Stop::Chamber(Error::ChamberIncomplete(base.to_string())))
    }

    fn single(&self, exps: Vec<(usize, Rational)>, poly: CliffPoly) -> Canon {
        if poly.is_zero() {
            Canon { classes: Vec::new() }
        } else {
            Canon { classes: vec![Class { exps, poly }] }
        }
    }

    fn atom_index(&mut self, atom: Atom) -> usize {
        if let Some(i) = self.atoms.iter().position(|a| *a == atom) {
            return i;
        }
        self.atoms.push(atom);
        self.atoms.len() - 1
    }

    /// `P · P̄` for the first involution that makes it a scalar.
    fn conjugate_norm(&self, p: &CliffPoly) -> Result<(CliffPoly, Poly), Stop> {
        if let Some(s) = p.as_scalar() {
            return Ok((CliffPoly::scalar(self.sig, Poly::one()), s));
        }
        for kind in [Involution::Conjugation, Involution::Reversal, Involution::Grade] {
            let bar = p.involution(kind);
            if let Some(norm) = p.mul(&bar).as_scalar() {
                if !norm.is_zero() {
                    return Ok((bar, norm));
                }
            }
        }
        Err(Stop::NotNormalizable("inverse of a multivector without a scalar norm".into()))
    }

    /// Writes `p = k · Π A_i^{m_i} · R` using known polynomial atoms, with `R`
    /// primitive. Returns the sign-adjusted `k`, the exponents and `R`.
    fn factor(&self, p: &Poly) -> (Rational, Vec<(usize, Rational)>, Poly) {
        let (mut k, mut rest) = p.primitive_part();
        let mut exps = Vec::new();
        if rest.degree() == 0 {
            return (k, exps, rest);
        }
        for (i, atom) in self.atoms.iter().enumerate() {
            let (poly, sign) = match atom {
                Atom::Signed(q, s) => (q, *s),
                Atom::Plain(q) => (q, 1),
                Atom::Const(_) => continue,
            };
            if poly.degree() > rest.degree() {
                continue;
            }
            let mut m = 0i64;
            while let Some(quot) = rest.div_exact(poly) {
                rest = quot;
                m += 1;
                if sign < 0 {
                    k = -k;
                }
            }
            if m > 0 {
                exps.push((i, Rational::from_int(m)));
                let (k2, prim) = rest.primitive_part();
                k = k * k2;
                rest = prim;
                if rest.degree() == 0 {
                    break;
                }
            }
        }
        (k, exps, rest)
    }

    /// `1/p` as a coefficient and atom exponents.
    fn invert_scalar(&mut self, p: &Poly) -> Result<(Rational, Vec<(usize, Rational)>), Stop> {
        let (k, exps, rest) = self.factor(p);
        let mut out: Vec<(usize, Rational)> = exps.into_iter().map(|(i, m)| (i, -m)).collect();
        let mut coef = k;
        if rest.degree() > 0 {
            let i = match self.atoms.iter().position(|a| matches!(a, Atom::Signed(q, _) if *q == rest)) {
                Some(i) => {
                    if let Atom::Signed(_, s) = &self.atoms[i] {
                        coef = coef * Rational::from_int(i64::from(*s));
                    }
                    i
                }
                None => self.atom_index(Atom::Plain(rest)),
            };
            out.push((i, Rational::from_int(-1)));
        } else {
            coef = coef * rest.as_constant().expect("constant remainder");
        }
        let inv = coef.recip().ok_or_else(|| Stop::NotNormalizable("inverse of zero".into()))?;
        Ok((inv, out))
    }

    fn abs_pow(&mut self, form: &Canon, sign: i8, s: &Rational) -> Result<Canon, Stop> {
        let sig = self.sig;
        let [class] = form.classes.as_slice() else {
            return Err(Stop::NotNormalizable("power of a form with several classes".into()));
        };
        let poly = class
            .poly
            .as_scalar()
            .ok_or_else(|| Stop::NotNormalizable("power of a non-scalar polynomial".into()))?;
        let mut exps = Vec::new();
        for (i, e) in &class.exps {
            if matches!(self.atoms[*i], Atom::Plain(_)) {
                return Err(Stop::NotNormalizable("power of a form with a plain denominator".into()));
            }
            exps.push((*i, e * s));
        }
        let (k, found, rest) = self.factor(&poly);
        let rest_sign = i32::from(sign) * k.signum();
        for (i, m) in &found {
            if matches!(self.atoms[*i], Atom::Plain(_)) {
                return Err(Stop::NotNormalizable("power of a plain factor".into()));
            }
            exps.push((*i, m * s));
        }
        let mut coef = k.abs();
        if rest.degree() > 0 {
            let i = self.atom_index(Atom::Signed(rest, rest_sign as i8));
            exps.push((i, s.clone()));
        } else {
            coef = coef * rest.as_constant().expect("constant remainder").abs();
        }
        let scalar = match coef.abs_pow(s) {
            Some(v) => v,
            None => {
                let (whole, frac) = s.split_fract();
                let i = self.atom_index(Atom::Const(coef.clone()));
                exps.push((i, frac));
                coef.powi(whole as i32)
            }
        };
        let exps = normalize_exps(exps);
        Ok(self.combine(vec![Class { exps, poly: CliffPoly::scalar(sig, Poly::constant(scalar)) }]))
    }

    /// `A_i^m` as a polynomial, for an integer `m ≥ 0`.
    fn atom_power(&self, i: usize, m: u32) -> Poly {
        match &self.atoms[i] {
            Atom::Signed(p, s) => {
                let pw = p.pow(m);
                if *s < 0 && m % 2 == 1 {
                    pw.neg()
                } else {
                    pw
                }
            }
            Atom::Plain(p) => p.pow(m),
            Atom::Const(k) => Poly::constant(k.powi(m as i32)),
        }
    }

    /// Groups classes by fractional pattern and merges each group.
    fn combine(&self, classes: Vec<Class>) -> Canon {
        let mut groups: BTreeMap<Vec<(usize, Rational)>, Vec<Class>> = BTreeMap::new();
        for c in classes {
            let c = self.pull_constants(c);
            if c.poly.is_zero() {
                continue;
            }
            let pattern: Vec<(usize, Rational)> =
                c.exps.iter().map(|(i, e)| (*i, e.split_fract().1)).filter(|(_, f)| !f.is_zero()).collect();
            groups.entry(pattern).or_default().push(c);
        }
        let mut out = Vec::new();
        for (_, group) in groups {
            let merged = if group.len() == 1 { group.into_iter().next().expect("one") } else { self.merge(group) };
            if !merged.poly.is_zero() {
                out.push(self.cancel(merged));
            }
        }
        Canon { classes: out }
    }

    /// Moves integer powers of constant atoms into the polynomial.
    fn pull_constants(&self, mut c: Class) -> Class {
        let mut factor = Rational::one();
        for (i, e) in c.exps.iter_mut() {
            if let Atom::Const(k) = &self.atoms[*i] {
                let (whole, frac) = e.split_fract();
                if whole != 0 {
                    factor = factor * k.powi(whole as i32);
                    *e = frac;
                }
            }
        }
        if !factor.is_one() {
            c.poly = c.poly.scale(&factor);
        }
        c.exps.retain(|(_, e)| !e.is_zero());
        c
    }

    fn merge(&self, group: Vec<Class>) -> Class {
        let exp_of = |c: &Class, i: usize| c.exps.iter().find(|(j, _)| *j == i).map_or_else(Rational::zero, |(_, e)| e.clone());
        let mut low: BTreeMap<usize, Rational> = BTreeMap::new();
        for c in &group {
            for (i, _) in &c.exps {
                low.entry(*i).or_insert_with(|| exp_of(c, *i));
            }
        }
        for c in &group {
            for (i, m) in low.iter_mut() {
                let e = exp_of(c, *i);
                if e < *m {
                    *m = e;
                }
            }
        }
        let mut poly = CliffPoly::zero(self.sig);
        for c in group {
            let mut p = c.poly.clone();
            for (i, m) in &low {
                let e = exp_of(&c, *i);
                let diff = (&e - m).to_i64().expect("exponents in one class differ by integers");
                if diff > 0 {
                    p = p.scale_poly(&self.atom_power(*i, diff as u32));
                }
            }
            poly = poly.add(&p);
        }
        let exps = low.into_iter().filter(|(_, e)| !e.is_zero()).collect();
        Class { exps, poly }
    }

    /// Divides out atoms that appear with negative exponent when the
    /// polynomial is a multiple of them.
    fn cancel(&self, mut c: Class) -> Class {
        for slot in 0..c.exps.len() {
            let (i, ref e) = c.exps[slot];
            if !e.is_negative() {
                continue;
            }
            let (poly, sign) = match &self.atoms[i] {
                Atom::Signed(p, s) => (p, *s),
                Atom::Plain(p) => (p, 1),
                Atom::Const(_) => continue,
            };
            let mut e = e.clone();
            while e.is_negative() {
                match divide_parts(&c.poly, poly) {
                    Some(q) => {
                        c.poly = if sign < 0 { q.neg() } else { q };
                        e = e + Rational::one();
                    }
                    None => break,
                }
            }
            c.exps[slot].1 = e;
        }
        c.exps.retain(|(_, e)| !e.is_zero());
        c
    }
}

fn divide_parts(p: &CliffPoly, d: &Poly) -> Option<CliffPoly> {
    let mut out = CliffPoly::zero(p.sig());
    for (b, part) in p.parts() {
        out = out.add(&CliffPoly::blade(p.sig(), b, part.div_exact(d)?));
    }
    Some(out)
}

fn normalize_exps(mut exps: Vec<(usize, Rational)>) -> Vec<(usize, Rational)> {
    exps.sort_by_key(|(i, _)| *i);
    let mut out: Vec<(usize, Rational)> = Vec::with_capacity(exps.len());
    for (i, e) in exps {
        match out.last_mut() {
            Some((j, acc)) if *j == i => *acc += &e,
            _ => out.push((i, e)),
        }
    }
    out.retain(|(_, e)| !e.is_zero());
    out
}

fn add_exps(a: &[(usize, Rational)], b: &[(usize, Rational)]) -> Vec<(usize, Rational)> {
    normalize_exps(a.iter().chain(b).cloned().collect())
}

/// Which stage produced a [`ZeroDecision`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Canonical,
    Sampled,
}

/// Outcome of [`is_zero`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroDecision {
    pub zero: bool,
    pub stage: Stage,
    /// Why the canonical stage handed over, when it did.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fallback_reason: Option<String>,
    /// Largest sampled coefficient magnitude relative to its scale.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    /// Sampled points that needed float evaluation.
    pub float_points: usize,
}

/// Decides whether `f` vanishes identically on `chamber`.
pub fn is_zero(f: &Expr, chamber: &Chamber) -> Result<ZeroDecision> {
    let mut canon = Canonicalizer::new(f.sig(), chamber);
    is_zero_with(&mut canon, f, 0)
}

/// [`is_zero`] reusing a canonicalizer; `seed` drives the fallback sampler.
pub fn is_zero_with(canon: &mut Canonicalizer, f: &Expr, seed: u64) -> Result<ZeroDecision> {
    canon.chamber().covers(f)?;
    let reason = match canon.canon(f) {
        Ok(form) => {
            if form.is_zero() {
                return Ok(ZeroDecision { zero: true, stage: Stage::Canonical, fallback_reason: None, max_residual: None, float_points: 0 });
            }
            if form.class_count() == 1 {
                return Ok(ZeroDecision { zero: false, stage: Stage::Canonical, fallback_reason: None, max_residual: None, float_points: 0 });
            }
            format!("{} classes with distinct exponent patterns", form.class_count())
        }
        Err(Stop::Chamber(e)) => return Err(e),
        Err(Stop::Budget) => "term budget exceeded".to_string(),
        Err(Stop::NotNormalizable(why)) => why,
    };
    let mut d = sample_zero(f, canon.chamber(), seed)?;
    d.fallback_reason = Some(reason);
    Ok(d)
}

/// Draws a rational point in `[-3, 3]^n` with denominators up to 16.
pub fn random_point(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| {
            let den = rng.gen_range(1..=16i64);
            let num = rng.gen_range(-3 * den..=3 * den);
            Rational::new(num, den)
        })
        .collect()
}

/// A point inside `chamber` away from its boundaries and from the poles of `f`.
pub fn chamber_point(f: &Expr, chamber: &Chamber, rng: &mut impl Rng, tries: usize) -> Option<Vec<Rational>> {
    let n = f.sig().dim();
    'outer: for _ in 0..tries {
        let p = random_point(rng, n);
        let pf: Vec<f64> = p.iter().map(Rational::to_f64).collect();
        for (base, sign) in chamber.bases() {
            match eval_float(base, &pf, chamber) {
                Ok(v) if v.scalar() * f64::from(sign) > BOUNDARY_MARGIN => {}
                _ => continue 'outer,
            }
        }
        if eval_float(f, &pf, chamber).is_ok() {
            return Some(p);
        }
    }
    None
}

/// The sampling stage on its own.
pub fn sample_zero(f: &Expr, chamber: &Chamber, seed: u64) -> Result<ZeroDecision> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005e_ed0f_2e20);
    let mut worst = 0.0f64;
    let mut float_points = 0;
    let mut zero = true;
    for _ in 0..SAMPLE_POINTS {
        let p = chamber_point(f, chamber, &mut rng, 400)
            .ok_or_else(|| Error::ChamberMismatch("no sample point found inside the chamber".into()))?;
        match eval_exact(f, &p, chamber) {
            Ok(v) => {
                if !v.is_zero() {
                    zero = false;
                    worst = worst.max(v.max_abs());
                }
            }
            Err(Error::InexactPower(_)) => {
                float_points += 1;
                let pf: Vec<f64> = p.iter().map(Rational::to_f64).collect();
                let (v, scale) = eval_float_scaled(f, &pf, chamber)?;
                let rel = v.max_abs() / scale.max(1.0);
                worst = worst.max(rel);
                if rel >= FLOAT_TOLERANCE {
                    zero = false;
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(ZeroDecision { zero, stage: Stage::Sampled, fallback_reason: None, max_residual: Some(worst), float_points })
}
