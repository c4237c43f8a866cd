use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported `p + q`; the algebra has `2^n` blades.
pub const MAX_DIM: usize = 12;

/// The signature `(p, q)` of a non-degenerate quadratic form on `R^{p+q}`.
///
/// Generators `e_1 .. e_p` have `Q(e_j) = +1`, generators `e_{p+1} .. e_{p+q}`
/// have `Q(e_j) = -1`. Clifford multiplication uses `v^2 = -Q(v)`, so
/// `e_j^2 = -1` for `j <= p` and `e_j^2 = +1` for `j > p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Signature {
    p: u8,
    q: u8,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p + q == 0 || p + q > MAX_DIM {
            return Err(Error::InvalidSignature { p, q, max: MAX_DIM });
        }
        Ok(Self { p: p as u8, q: q as u8 })
    }

    pub fn p(&self) -> usize {
        self.p as usize
    }

    pub fn q(&self) -> usize {
        self.q as usize
    }

    pub fn dim(&self) -> usize {
        self.p() + self.q()
    }

    /// Number of basis blades, `2^n`.
    pub fn blade_count(&self) -> usize {
        1 << self.dim()
    }

    /// `Q(e_j)` for a zero-based generator index.
    pub fn q_of(&self, j: usize) -> i64 {
        debug_assert!(j < self.dim());
        if j < self.p() {
            1
        } else {
            -1
        }
    }

    /// Mask with one bit per negative generator (those squaring to +1).
    pub(crate) fn square_plus_mask(&self) -> u32 {
        ((1u32 << self.dim()) - 1) & !((1u32 << self.p()) - 1)
    }

    /// `(p+1, q+1)`: the signature of `V + R^{1,1}`.
    pub fn extended(&self) -> Result<Self> {
        Self::new(self.p() + 1, self.q() + 1)
    }

    pub(crate) fn check_same(&self, other: &Signature) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(self.to_string(), other.to_string()))
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.p, self.q)
    }
}

impl FromStr for Signature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("signature {s:?}; expected p,q"));
        let (p, q) = s.split_once(',').ok_or_else(bad)?;
        let p = p.trim().parse().map_err(|_| bad())?;
        let q = q.trim().parse().map_err(|_| bad())?;
        Self::new(p, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert!(Signature::new(0, 0).is_err());
        assert!(Signature::new(7, 6).is_err());
        let s: Signature = "2,1".parse().unwrap();
        assert_eq!((s.p(), s.q(), s.dim()), (2, 1, 3));
        assert_eq!(s.q_of(0), 1);
        assert_eq!(s.q_of(2), -1);
        assert_eq!(s.square_plus_mask(), 0b100);
    }
}
