//! Hash-consed symbolic expressions for `Cl(V)`-valued functions of `x ∈ V`.

use std::collections::HashMap;
use std::fmt;
use std::hash::{BuildHasher, Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock, Weak};

use rustc_hash::FxBuildHasher;

use crate::blade::Blade;
use crate::element::CliffordElement;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::signature::Signature;

/// Node kinds. Children are shared [`Expr`] handles.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Kind {
    Const(CliffordElement),
    /// The scalar coordinate `x_{i+1}`.
    Coord(usize),
    /// The vector field `x = Σ x_j e_j`.
    VectorX,
    Add(Expr, Expr),
    /// Ordered product; `Cl(V)` is not commutative.
    Mul(Expr, Expr),
    /// Clifford inverse.
    Inv(Expr),
    /// `|ρ|^s` for a scalar-valued `ρ`.
    AbsPow(Expr, Rational),
    /// Sign of a scalar-valued `ρ`.
    Sgn(Expr),
    /// The coefficient of one blade, as a scalar.
    Part(Expr, Blade),
}

pub struct Node {
    id: u64,
    sig: Signature,
    kind: Kind,
    /// Bitmask of grades the value may have.
    grades: u32,
}

/// A shared, immutable expression node. Structurally equal expressions are
/// the same node, so equality and hashing are by identity.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state);
    }
}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Expr {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.id.cmp(&other.0.id)
    }
}

const SHARDS: usize = 16;
type Table = HashMap<(Signature, Kind), Weak<Node>, FxBuildHasher>;

struct Interner {
    shards: Vec<Mutex<(Table, usize)>>,
    next_id: AtomicU64,
}

fn interner() -> &'static Interner {
    static POOL: OnceLock<Interner> = OnceLock::new();
    POOL.get_or_init(|| Interner {
        shards: (0..SHARDS).map(|_| Mutex::new((Table::default(), 1024))).collect(),
        next_id: AtomicU64::new(1),
    })
}

fn intern(sig: Signature, kind: Kind) -> Expr {
    let pool = interner();
    let key = (sig, kind);
    let shard = (FxBuildHasher.hash_one(&key) as usize) % SHARDS;
    let mut guard = pool.shards[shard].lock().expect("interner poisoned");
    let (table, limit) = &mut *guard;
    if let Some(node) = table.get(&key).and_then(Weak::upgrade) {
        return Expr(node);
    }
    if table.len() >= *limit {
        table.retain(|_, w| w.strong_count() > 0);
        *limit = (table.len() * 2).max(1024);
    }
    let grades = grade_mask(&sig, &key.1);
    let node = Arc::new(Node { id: pool.next_id.fetch_add(1, Ordering::Relaxed), sig, kind: key.1.clone(), grades });
    table.insert(key, Arc::downgrade(&node));
    Expr(node)
}

fn all_grades(sig: &Signature) -> u32 {
    (1u32 << (sig.dim() + 1)) - 1
}

fn grade_mask(sig: &Signature, kind: &Kind) -> u32 {
    let n = sig.dim() as u32;
    match kind {
        Kind::Const(c) => c.grades(),
        Kind::Coord(_) | Kind::AbsPow(..) | Kind::Sgn(_) | Kind::Part(..) => 1,
        Kind::VectorX => 2,
        Kind::Add(a, b) => a.grades() | b.grades(),
        Kind::Mul(a, b) => {
            if a == b && a.grades() & !2 == 0 {
                return 1;
            }
            let (ga, gb) = (a.grades(), b.grades());
            let mut out = 0;
            for r in 0..=n {
                if ga & (1 << r) == 0 {
                    continue;
                }
                for s in 0..=n {
                    if gb & (1 << s) == 0 {
                        continue;
                    }
                    let hi = (r + s).min(2 * n - r - s);
                    let mut k = r.abs_diff(s);
                    while k <= hi {
                        out |= 1 << k;
                        k += 2;
                    }
                }
            }
            out
        }
        Kind::Inv(a) => {
            let g = a.grades();
            if g & !1 == 0 {
                1
            } else if g & !2 == 0 {
                2
            } else {
                all_grades(sig)
            }
        }
    }
}

impl Expr {
    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn sig(&self) -> Signature {
        self.0.sig
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    /// Bitmask of possible grades (bit `k` for grade `k`).
    pub fn grades(&self) -> u32 {
        self.0.grades
    }

    pub fn is_scalar_valued(&self) -> bool {
        self.grades() & !1 == 0
    }

    pub fn constant(c: CliffordElement) -> Expr {
        intern(c.sig(), Kind::Const(c))
    }

    pub fn scalar(sig: Signature, r: Rational) -> Expr {
        Expr::constant(CliffordElement::scalar(sig, r))
    }

    pub fn zero(sig: Signature) -> Expr {
        Expr::constant(CliffordElement::zero(sig))
    }

    pub fn one(sig: Signature) -> Expr {
        Expr::constant(CliffordElement::one(sig))
    }

    pub fn coord(sig: Signature, i: usize) -> Expr {
        assert!(i < sig.dim(), "coordinate x{} outside {sig}", i + 1);
        intern(sig, Kind::Coord(i))
    }

    pub fn vector_x(sig: Signature) -> Expr {
        intern(sig, Kind::VectorX)
    }

    pub fn as_const(&self) -> Option<&CliffordElement> {
        match self.kind() {
            Kind::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero_const(&self) -> bool {
        self.as_const().is_some_and(CliffordElement::is_zero)
    }

    fn is_one_const(&self) -> bool {
        self.as_const().is_some_and(|c| c.as_scalar().is_some_and(|s| s.is_one()))
    }

    pub fn add(&self, other: &Expr) -> Expr {
        assert_eq!(self.sig(), other.sig(), "signature mismatch");
        if self.is_zero_const() {
            return other.clone();
        }
        if other.is_zero_const() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.as_const(), other.as_const()) {
            return Expr::constant(a + b);
        }
        intern(self.sig(), Kind::Add(self.clone(), other.clone()))
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        assert_eq!(self.sig(), other.sig(), "signature mismatch");
        if self.is_zero_const() || other.is_zero_const() {
            return Expr::zero(self.sig());
        }
        if self.is_one_const() {
            return other.clone();
        }
        if other.is_one_const() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.as_const(), other.as_const()) {
            return Expr::constant(a * b);
        }
        intern(self.sig(), Kind::Mul(self.clone(), other.clone()))
    }

    pub fn neg(&self) -> Expr {
        Expr::scalar(self.sig(), Rational::from_int(-1)).mul(self)
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rational) -> Expr {
        Expr::scalar(self.sig(), r.clone()).mul(self)
    }

    pub fn inv(&self) -> Expr {
        if let Some(c) = self.as_const() {
            if let Ok(i) = c.invert() {
                return Expr::constant(i);
            }
        }
        intern(self.sig(), Kind::Inv(self.clone()))
    }

    /// `|base|^exp`; the base must be scalar valued.
    pub fn abs_pow(&self, exp: Rational) -> Result<Expr> {
        if !self.is_scalar_valued() {
            return Err(Error::Grade(format!("abs_pow base {self} is not scalar valued")));
        }
        if exp.is_zero() {
            return Ok(Expr::one(self.sig()));
        }
        if let Some(c) = self.as_const() {
            if let Some(v) = c.scalar_part().abs_pow(&exp) {
                return Ok(Expr::scalar(self.sig(), v));
            }
        }
        Ok(intern(self.sig(), Kind::AbsPow(self.clone(), exp)))
    }

    /// `sgn(base)`; the base must be scalar valued.
    pub fn sgn(&self) -> Result<Expr> {
        if !self.is_scalar_valued() {
            return Err(Error::Grade(format!("sgn base {self} is not scalar valued")));
        }
        if let Some(c) = self.as_const() {
            let s = c.scalar_part().signum();
            if s != 0 {
                return Ok(Expr::scalar(self.sig(), Rational::from_int(s as i64)));
            }
        }
        Ok(intern(self.sig(), Kind::Sgn(self.clone())))
    }

    /// The coefficient of `e_B` as a scalar-valued expression.
    pub fn part(&self, blade: Blade) -> Expr {
        assert!(blade.is_valid_for(&self.sig()));
        if let Some(c) = self.as_const() {
            return Expr::scalar(self.sig(), c.coeff(blade));
        }
        if blade == Blade::SCALAR && self.is_scalar_valued() {
            return self.clone();
        }
        if self.grades() & (1 << blade.grade()) == 0 {
            return Expr::zero(self.sig());
        }
        match self.kind() {
            Kind::Coord(_) => Expr::zero(self.sig()),
            Kind::VectorX if blade.grade() == 1 => Expr::coord(self.sig(), blade.0.trailing_zeros() as usize),
            Kind::Add(a, b) => a.part(blade).add(&b.part(blade)),
            Kind::Mul(a, b) if a.is_scalar_valued() => a.mul(&b.part(blade)),
            Kind::Mul(a, b) if b.is_scalar_valued() => a.part(blade).mul(b),
            _ => intern(self.sig(), Kind::Part(self.clone(), blade)),
        }
    }

    /// Number of distinct nodes reachable from this one.
    pub fn node_count(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.id()) {
                continue;
            }
            stack.extend(e.children().into_iter().cloned());
        }
        seen.len()
    }

    pub fn children(&self) -> Vec<&Expr> {
        match self.kind() {
            Kind::Const(_) | Kind::Coord(_) | Kind::VectorX => vec![],
            Kind::Add(a, b) | Kind::Mul(a, b) => vec![a, b],
            Kind::Inv(a) | Kind::AbsPow(a, _) | Kind::Sgn(a) | Kind::Part(a, _) => vec![a],
        }
    }

    /// Distinct bases of `abs_pow` and `sgn` nodes, in order of first appearance.
    pub fn chamber_bases(&self) -> Vec<Expr> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.id()) {
                continue;
            }
            if let Kind::AbsPow(b, _) | Kind::Sgn(b) = e.kind() {
                if b.as_const().is_none() && !out.contains(b) {
                    out.push(b.clone());
                }
            }
            for c in e.children().into_iter().rev() {
                stack.push(c.clone());
            }
        }
        out
    }

    /// Replaces `x` by `y` (and each `x_i` by the `e_i` part of `y`).
    pub fn substitute(&self, y: &Expr) -> Expr {
        assert_eq!(self.sig(), y.sig());
        let coords: Vec<Expr> = (0..self.sig().dim()).map(|i| y.part(Blade::generator(i))).collect();
        let mut memo = HashMap::new();
        self.substitute_with(y, &coords, &mut memo)
    }

    fn substitute_with(&self, y: &Expr, coords: &[Expr], memo: &mut HashMap<u64, Expr>) -> Expr {
        if let Some(e) = memo.get(&self.id()) {
            return e.clone();
        }
        let out = match self.kind() {
            Kind::Const(_) => self.clone(),
            Kind::Coord(i) => coords[*i].clone(),
            Kind::VectorX => y.clone(),
            Kind::Add(a, b) => a.substitute_with(y, coords, memo).add(&b.substitute_with(y, coords, memo)),
            Kind::Mul(a, b) => a.substitute_with(y, coords, memo).mul(&b.substitute_with(y, coords, memo)),
            Kind::Inv(a) => a.substitute_with(y, coords, memo).inv(),
            Kind::AbsPow(a, s) => a.substitute_with(y, coords, memo).abs_pow(s.clone()).expect("scalar base"),
            Kind::Sgn(a) => a.substitute_with(y, coords, memo).sgn().expect("scalar base"),
            Kind::Part(a, b) => a.substitute_with(y, coords, memo).part(*b),
        };
        memo.insert(self.id(), out.clone());
        out
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesized rendering that parses back to the same node.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            Kind::Const(c) => write!(f, "({c})"),
            Kind::Coord(i) => write!(f, "x{}", i + 1),
            Kind::VectorX => write!(f, "X"),
            Kind::Add(a, b) => write!(f, "({a} + {b})"),
            Kind::Mul(a, b) => write!(f, "({a} * {b})"),
            Kind::Inv(a) => write!(f, "inv({a})"),
            Kind::AbsPow(a, s) => write!(f, "abs_pow({a}, {s})"),
            Kind::Sgn(a) => write!(f, "sgn({a})"),
            Kind::Part(a, b) => write!(f, "part({a}, {b})"),
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{} {}", self.id(), self)
    }
}

impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn hash_consing_and_folding() {
        let s = Signature::new(2, 1).unwrap();
        let x1 = Expr::coord(s, 0);
        let e1 = Expr::constant(CliffordElement::generator(s, 0));
        let a = x1.mul(&e1);
        let b = Expr::coord(s, 0).mul(&Expr::constant(CliffordElement::generator(s, 0)));
        assert_eq!(a, b);
        assert_eq!(Expr::zero(s).add(&a), a);
        assert_eq!(Expr::one(s).mul(&a), a);
        assert_eq!(e1.mul(&e1), Expr::scalar(s, q(-1, 1)));
    }

    #[test]
    fn grades() {
        let s = Signature::new(2, 1).unwrap();
        let x = Expr::vector_x(s);
        assert!(x.mul(&x).is_scalar_valued());
        assert!(x.inv().grades() == 2);
        assert!(x.abs_pow(q(1, 2)).is_err());
        assert!(x.mul(&x).abs_pow(q(1, 2)).is_ok());
        let e1 = Expr::constant(CliffordElement::generator(s, 0));
        assert!(matches!(e1.abs_pow(q(1, 2)), Err(Error::Grade(_))));
    }

    #[test]
    fn substitution() {
        let s = Signature::new(1, 1).unwrap();
        let x = Expr::vector_x(s);
        let f = Expr::coord(s, 1).mul(&x);
        let y = x.add(&Expr::constant(CliffordElement::generator(s, 1)));
        let g = f.substitute(&y);
        assert_eq!(g.to_string(), "((x2 + (1)) * (X + (e2)))");
        assert_eq!(x.mul(&Expr::coord(s, 0)).part(Blade(2)), Expr::coord(s, 1).mul(&Expr::coord(s, 0)));
    }
}
