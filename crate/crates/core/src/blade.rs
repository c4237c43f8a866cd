//! Basis blades `e_A` encoded as bitmasks.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::signature::Signature;

/// A basis blade `e_A`; bit `j-1` is set iff `j ∈ A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Blade(pub u32);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    /// The generator `e_{j+1}` for a zero-based index `j`.
    pub fn generator(j: usize) -> Blade {
        Blade(1 << j)
    }

    /// Builds a blade from one-based indices, which must be strictly ascending.
    pub fn from_indices(indices: &[usize], sig: &Signature) -> Result<Blade> {
        let mut mask = 0u32;
        let mut last = 0;
        for &i in indices {
            if i == 0 || i > sig.dim() || i <= last {
                return Err(Error::InvalidParameter(format!(
                    "blade indices {indices:?} must be ascending within 1..={}",
                    sig.dim()
                )));
            }
            mask |= 1 << (i - 1);
            last = i;
        }
        Ok(Blade(mask))
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_valid_for(self, sig: &Signature) -> bool {
        (self.0 as u64) < (1u64 << sig.dim())
    }

    /// One-based indices in ascending order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let m = self.0;
        (0..32).filter(move |j| m & (1 << j) != 0).map(|j| j + 1)
    }

    /// Order used when printing elements: lexicographic on index lists, so
    /// `1 < e1 < e12 < e123 < e13 < e2`.
    pub fn display_cmp(self, other: Blade) -> Ordering {
        self.indices().cmp(other.indices())
    }
}

/// Sign of reordering `e_a e_b` into ascending index order, without the
/// contraction of repeated generators.
#[inline]
fn reorder_parity(a: u32, b: u32) -> u32 {
    let mut parity = 0;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        // a-bits strictly above j must be hopped over
        parity ^= (a >> (j + 1)).count_ones() & 1;
        rest &= rest - 1;
    }
    parity
}

/// Product of two blades: `e_a e_b = sign * e_{a xor b}`.
///
/// Repeated generators contract with `e_j^2 = -Q(e_j)`.
#[inline]
pub fn blade_product(a: Blade, b: Blade, sig: &Signature) -> (i8, Blade) {
    let mut parity = reorder_parity(a.0, b.0);
    let common = a.0 & b.0;
    // generators with Q = +1 square to -1
    let minus_squares = common & !sig.square_plus_mask();
    parity ^= minus_squares.count_ones() & 1;
    (if parity == 0 { 1 } else { -1 }, Blade(a.0 ^ b.0))
}

/// Grade involution sign `(-1)^k`.
pub fn grade_sign(b: Blade) -> i8 {
    if b.grade().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Reversal sign `(-1)^{k(k-1)/2}`.
pub fn reversal_sign(b: Blade) -> i8 {
    let k = b.grade();
    if (k * k.saturating_sub(1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Clifford conjugation sign `(-1)^{k(k+1)/2}`.
pub fn conjugation_sign(b: Blade) -> i8 {
    let k = b.grade();
    if (k * (k + 1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let idx: Vec<usize> = self.indices().collect();
        if idx.iter().all(|&i| i < 10) {
            write!(f, "e")?;
            for i in idx {
                write!(f, "{i}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
            write!(f, "e{}", parts.join("_"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reduces a word of generator indices by adjacent swaps and contractions.
    fn word_oracle(word: &[usize], sig: &Signature) -> (i8, Vec<usize>) {
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
                    let j = w[i];
                    // e_j e_j = -Q(e_j)
                    if j <= sig.p() {
                        sign = -sign;
                    }
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
    fn generator_squares() {
        let s = Signature::new(2, 1).unwrap();
        assert_eq!(blade_product(Blade(1), Blade(1), &s), (-1, Blade::SCALAR));
        assert_eq!(blade_product(Blade(4), Blade(4), &s), (1, Blade::SCALAR));
        // e12 e23 = -e13
        assert_eq!(blade_product(Blade(0b011), Blade(0b110), &s), (-1, Blade(0b101)));
    }

    #[test]
    fn matches_word_reduction_everywhere() {
        for (p, q) in [(1, 1), (2, 1), (2, 2), (3, 0), (0, 3), (1, 3)] {
            let s = Signature::new(p, q).unwrap();
            for a in 0..(1u32 << s.dim()) {
                for b in 0..(1u32 << s.dim()) {
                    let word: Vec<usize> = Blade(a).indices().chain(Blade(b).indices()).collect();
                    let (sign, rest) = word_oracle(&word, &s);
                    let (got, blade) = blade_product(Blade(a), Blade(b), &s);
                    assert_eq!(got, sign, "({p},{q}) {a:b}*{b:b}");
                    assert_eq!(blade.indices().collect::<Vec<_>>(), rest);
                }
            }
        }
    }

    #[test]
    fn display_order_and_format() {
        let s = Signature::new(3, 0).unwrap();
        let mut v = [Blade(0b010), Blade(0b101), Blade(0), Blade(0b001)];
        v.sort_by(|a, b| a.display_cmp(*b));
        let shown: Vec<String> = v.iter().map(|b| b.to_string()).collect();
        assert_eq!(shown, ["1", "e1", "e13", "e2"]);
        assert_eq!(Blade::from_indices(&[1, 3], &s).unwrap(), Blade(0b101));
        assert!(Blade::from_indices(&[3, 1], &s).is_err());
        assert_eq!(Blade(1 << 10 | 1).to_string(), "e1_11");
    }
}
