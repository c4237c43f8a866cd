//! Sparse multivariate polynomials with rational and Clifford coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;

use crate::blade::{blade_product, Blade};
use crate::element::{CliffordElement, Involution};
use crate::rational::Rational;
use crate::signature::{Signature, MAX_DIM};

const BITS: u32 = 10;
const MASK: u128 = (1 << BITS) - 1;

/// A monomial `x_1^{k_1} ⋯ x_n^{k_n}`, ten bits per exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono(u128);

impl Mono {
    pub const ONE: Mono = Mono(0);

    pub fn var(i: usize) -> Mono {
        debug_assert!(i < MAX_DIM);
        Mono(1 << (BITS * i as u32))
    }

    pub fn exponent(self, i: usize) -> u32 {
        ((self.0 >> (BITS * i as u32)) & MASK) as u32
    }

    pub fn degree(self) -> u32 {
        (0..MAX_DIM).map(|i| self.exponent(i)).sum()
    }

    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Mono) -> Mono {
        debug_assert!((0..MAX_DIM).all(|i| self.exponent(i) + other.exponent(i) <= MASK as u32));
        Mono(self.0 + other.0)
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(self, other: Mono) -> Option<Mono> {
        (0..MAX_DIM).all(|i| self.exponent(i) >= other.exponent(i)).then(|| Mono(self.0 - other.0))
    }

    /// `∂/∂x_i` as `(exponent, x^{k - e_i})`, or `None` when `x_i` is absent.
    pub fn derive(self, i: usize) -> Option<(u32, Mono)> {
        let k = self.exponent(i);
        (k > 0).then(|| (k, Mono(self.0 - (1 << (BITS * i as u32)))))
    }

    pub fn eval(self, point: &[Rational]) -> Rational {
        let mut acc = Rational::one();
        for (i, x) in point.iter().enumerate() {
            let k = self.exponent(i);
            if k > 0 {
                acc = acc * x.powi(k as i32);
            }
        }
        acc
    }

    pub fn eval_f64(self, point: &[f64]) -> f64 {
        let mut acc = 1.0;
        for (i, x) in point.iter().enumerate() {
            let k = self.exponent(i);
            if k > 0 {
                acc *= x.powi(k as i32);
            }
        }
        acc
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in 0..MAX_DIM {
            let k = self.exponent(i);
            if k == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// A polynomial with rational coefficients; terms sorted by monomial, no zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, Rational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(Mono::ONE, c)] }
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn var(i: usize) -> Self {
        Self { terms: vec![(Mono::var(i), Rational::one())] }
    }

    fn from_map(map: FxHashMap<Mono, Rational>) -> Self {
        let mut terms: Vec<(Mono, Rational)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|t| t.0);
        Self { terms }
    }

    pub fn terms(&self) -> &[(Mono, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if *m == Mono::ONE => Some(c.clone()),
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                std::cmp::Ordering::Less => {
                    out.push((*ma, ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((*mb, cb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = ca + cb;
                    if !s.is_zero() {
                        out.push((*ma, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly { terms: out }
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut acc: FxHashMap<Mono, Rational> = FxHashMap::default();
        acc.reserve(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(*mb)).or_default() += &(ca * cb);
            }
        }
        Poly::from_map(acc)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    pub fn derive(&self, i: usize) -> Poly {
        let mut acc: FxHashMap<Mono, Rational> = FxHashMap::default();
        for (m, c) in &self.terms {
            if let Some((k, rest)) = m.derive(i) {
                *acc.entry(rest).or_default() += &(c * &Rational::from_int(k as i64));
            }
        }
        Poly::from_map(acc)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.terms.iter().map(|(m, c)| c * &m.eval(point)).sum()
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms.iter().map(|(m, c)| c.to_f64() * m.eval_f64(point)).sum()
    }

    /// `c · x^m · self`.
    pub fn mul_term(&self, m: Mono, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect() }
    }

    /// `self / d` when the division is exact.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lead_m, lead_c) = d.terms.last()?;
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.terms.last() {
            let qm = m.checked_div(*lead_m)?;
            let qc = c / lead_c;
            rem = rem.sub(&d.mul_term(qm, &qc));
            quot.push((qm, qc));
        }
        quot.reverse();
        Some(Poly { terms: quot })
    }

    /// Splits `self = k · P` with `P` having coprime integer coefficients and
    /// a positive coefficient on its largest monomial.
    pub fn primitive_part(&self) -> (Rational, Poly) {
        if self.is_zero() {
            return (Rational::zero(), Poly::zero());
        }
        let lcm = self.terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(&c.denom()));
        let ints: Vec<BigInt> = self.terms.iter().map(|(_, c)| c.numer() * (&lcm / c.denom())).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if ints.last().expect("nonempty").is_negative() {
            g = -g;
        }
        let k = Rational::from_bigint(g.clone()) / Rational::from_bigint(lcm);
        let terms = self
            .terms
            .iter()
            .zip(ints)
            .map(|((m, _), x)| (*m, Rational::from_bigint(x / &g)))
            .collect();
        (k, Poly { terms })
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *m == Mono::ONE {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial with coefficients in `Cl(p,q)`, stored blade by blade.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliffPoly {
    sig: Signature,
    parts: BTreeMap<Blade, Poly>,
}

impl CliffPoly {
    pub fn zero(sig: Signature) -> Self {
        Self { sig, parts: BTreeMap::new() }
    }

    pub fn scalar(sig: Signature, p: Poly) -> Self {
        Self::blade(sig, Blade::SCALAR, p)
    }

    pub fn blade(sig: Signature, b: Blade, p: Poly) -> Self {
        let mut parts = BTreeMap::new();
        if !p.is_zero() {
            parts.insert(b, p);
        }
        Self { sig, parts }
    }

    pub fn constant(c: &CliffordElement) -> Self {
        Self {
            sig: c.sig(),
            parts: c.terms().map(|(b, r)| (b, Poly::constant(r.clone()))).collect(),
        }
    }

    /// The vector field `x = Σ x_j e_j`.
    pub fn identity_vector(sig: Signature) -> Self {
        Self { sig, parts: (0..sig.dim()).map(|j| (Blade::generator(j), Poly::var(j))).collect() }
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn parts(&self) -> impl Iterator<Item = (Blade, &Poly)> {
        self.parts.iter().map(|(b, p)| (*b, p))
    }

    pub fn part(&self, b: Blade) -> Poly {
        self.parts.get(&b).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.parts.values().map(Poly::len).sum()
    }

    pub fn as_scalar(&self) -> Option<Poly> {
        match self.parts.len() {
            0 => Some(Poly::zero()),
            1 => self.parts.get(&Blade::SCALAR).cloned(),
            _ => None,
        }
    }

    pub fn as_constant(&self) -> Option<CliffordElement> {
        let mut out = Vec::new();
        for (b, p) in &self.parts {
            out.push((*b, p.as_constant()?));
        }
        Some(CliffordElement::from_terms(self.sig, out))
    }

    pub fn add(&self, other: &CliffPoly) -> CliffPoly {
        let mut parts = self.parts.clone();
        for (b, p) in &other.parts {
            let sum = match parts.get(b) {
                Some(q) => q.add(p),
                None => p.clone(),
            };
            if sum.is_zero() {
                parts.remove(b);
            } else {
                parts.insert(*b, sum);
            }
        }
        CliffPoly { sig: self.sig, parts }
    }

    pub fn neg(&self) -> CliffPoly {
        CliffPoly { sig: self.sig, parts: self.parts.iter().map(|(b, p)| (*b, p.neg())).collect() }
    }

    pub fn scale_poly(&self, s: &Poly) -> CliffPoly {
        if s.is_zero() {
            return CliffPoly::zero(self.sig);
        }
        if let Some(c) = s.as_constant() {
            return self.scale(&c);
        }
        CliffPoly { sig: self.sig, parts: self.parts.iter().map(|(b, p)| (*b, p.mul(s))).collect() }
    }

    pub fn scale(&self, s: &Rational) -> CliffPoly {
        if s.is_zero() {
            return CliffPoly::zero(self.sig);
        }
        CliffPoly { sig: self.sig, parts: self.parts.iter().map(|(b, p)| (*b, p.scale(s))).collect() }
    }

    pub fn mul(&self, other: &CliffPoly) -> CliffPoly {
        if self.is_zero() || other.is_zero() {
            return CliffPoly::zero(self.sig);
        }
        if let Some(s) = self.as_scalar() {
            return other.scale_poly(&s);
        }
        if let Some(s) = other.as_scalar() {
            return self.scale_poly(&s);
        }
        let mut acc: FxHashMap<(Blade, Mono), Rational> = FxHashMap::default();
        for (ba, pa) in &self.parts {
            for (bb, pb) in &other.parts {
                let (sign, b) = blade_product(*ba, *bb, &self.sig);
                for (ma, ca) in pa.terms() {
                    for (mb, cb) in pb.terms() {
                        let prod = ca * cb;
                        let slot = acc.entry((b, ma.mul(*mb))).or_default();
                        if sign < 0 {
                            *slot -= &prod;
                        } else {
                            *slot += &prod;
                        }
                    }
                }
            }
        }
        let mut grouped: BTreeMap<Blade, FxHashMap<Mono, Rational>> = BTreeMap::new();
        for ((b, m), c) in acc {
            if !c.is_zero() {
                grouped.entry(b).or_default().insert(m, c);
            }
        }
        CliffPoly {
            sig: self.sig,
            parts: grouped
                .into_iter()
                .map(|(b, m)| (b, Poly::from_map(m)))
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        }
    }

    pub fn involution(&self, kind: Involution) -> CliffPoly {
        CliffPoly {
            sig: self.sig,
            parts: self
                .parts
                .iter()
                .map(|(b, p)| (*b, if kind.sign(*b) < 0 { p.neg() } else { p.clone() }))
                .collect(),
        }
    }

    pub fn derive(&self, i: usize) -> CliffPoly {
        CliffPoly {
            sig: self.sig,
            parts: self
                .parts
                .iter()
                .map(|(b, p)| (*b, p.derive(i)))
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        }
    }

    pub fn eval(&self, point: &[Rational]) -> CliffordElement {
        CliffordElement::from_terms(self.sig, self.parts.iter().map(|(b, p)| (*b, p.eval(point))))
    }
}

impl fmt::Display for CliffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, p)) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({p})*{b}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn exact_division() {
        let a = Poly::var(0).add(&Poly::var(1).scale(&q(2, 1)));
        let b = Poly::var(2).sub(&Poly::one());
        let prod = a.mul(&b).mul(&a);
        assert_eq!(prod.div_exact(&a), Some(a.mul(&b)));
        assert_eq!(prod.div_exact(&b.mul(&a)), Some(a.clone()));
        assert_eq!(a.div_exact(&b), None);
        assert_eq!(Poly::var(0).add(&Poly::one()).div_exact(&Poly::var(0)), None);
    }

    #[test]
    fn arithmetic() {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq, s.pow(2));
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.sub(&x.mul(&x)).sub(&y.mul(&y)), x.mul(&y).scale(&q(2, 1)));
        assert_eq!(sq.derive(0), s.scale(&q(2, 1)));
        assert_eq!(sq.eval(&[q(1, 2), q(1, 3)]), q(25, 36));
    }

    #[test]
    fn primitive_parts() {
        let p = Poly::var(0).scale(&q(-4, 3)).add(&Poly::constant(q(2, 1)));
        let (k, prim) = p.primitive_part();
        assert_eq!(prim.scale(&k), p);
        assert_eq!(prim.terms().last().unwrap().1, q(2, 1));
        assert_eq!(k, q(-2, 3));
    }

    #[test]
    fn clifford_square_of_x() {
        let sig = Signature::new(2, 1).unwrap();
        let x = CliffPoly::identity_vector(sig);
        let sq = x.mul(&x);
        let expect = Poly::var(0).pow(2).add(&Poly::var(1).pow(2)).sub(&Poly::var(2).pow(2)).neg();
        assert_eq!(sq.as_scalar(), Some(expect));
    }
}
