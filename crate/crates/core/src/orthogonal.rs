//! Orthogonal maps of `R^{p,q}` and their factorization into reflections.

use crate::element::{bilinear_form_coords, gram_matrix, quadratic_form_coords, Vector};
use crate::error::{Error, Result};
use crate::linalg::{primitive, RatMatrix};
use crate::rational::Rational;
use crate::signature::Signature;

/// A linear map `T` with `Tᵀ G T = G`, acting on coordinate columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalMap {
    sig: Signature,
    matrix: RatMatrix,
}

impl OrthogonalMap {
    pub fn new(sig: Signature, matrix: RatMatrix) -> Result<Self> {
        let n = sig.dim();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::Dimension(format!("{}x{} matrix for {sig}", matrix.rows(), matrix.cols())));
        }
        let g = gram_matrix(&sig);
        if &(&matrix.transpose() * &g) * &matrix != g {
            return Err(Error::NotOrthogonal);
        }
        Ok(Self { sig, matrix })
    }

    pub fn identity(sig: Signature) -> Self {
        Self { sig, matrix: RatMatrix::identity(sig.dim()) }
    }

    /// Matrix of the reflection `σ_v` along a non-null vector.
    pub fn reflection(v: &Vector) -> Result<Self> {
        let sig = v.sig();
        let qv = v.quadratic_form();
        let inv = qv.recip().ok_or(Error::NotInvertible)?;
        let two = Rational::from_int(2);
        // σ_v(e_j) = e_j - 2 B(e_j, v)/Q(v) v
        let matrix = RatMatrix::from_fn(sig.dim(), sig.dim(), |i, j| {
            let bjv = Rational::from_int(sig.q_of(j)) * &v.coords()[j];
            let mut val = -(&two * &bjv * &inv * &v.coords()[i]);
            if i == j {
                val += &Rational::one();
            }
            val
        });
        Ok(Self { sig, matrix })
    }

    /// `σ_{v_1} ∘ … ∘ σ_{v_k}`.
    pub fn compose_reflections(sig: Signature, vs: &[Vector]) -> Result<Self> {
        let mut m = RatMatrix::identity(sig.dim());
        for v in vs {
            m = &m * &Self::reflection(v)?.matrix;
        }
        Ok(Self { sig, matrix: m })
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        Vector::new(self.sig, self.matrix.mul_vec(v.coords())).expect("dimension")
    }

    pub fn compose(&self, other: &OrthogonalMap) -> OrthogonalMap {
        OrthogonalMap { sig: self.sig, matrix: &self.matrix * &other.matrix }
    }
}

/// Decomposes `T` into at most `n` reflections along non-null vectors:
/// `T = σ_{v_1} ∘ … ∘ σ_{v_k}`.
///
/// Works on a shrinking invariant subspace `W` on whose complement the
/// residual map is already the identity. A non-null fixed vector `x` lets `W`
/// drop to `W ∩ x^⊥` for free; otherwise one reflection along `Sx - x`
/// (with `Q(Sx - x) ≠ 0`) creates such a fixed vector. If no such `x` exists
/// the residual has determinant one on an even-dimensional `W`; one extra
/// reflection flips that and the odd-parity remainder needs at most
/// `dim W - 1` further reflections.
pub fn cartan_dieudonne(t: &OrthogonalMap) -> Result<Vec<Vector>> {
    let sig = t.sig;
    OrthogonalMap::new(sig, t.matrix.clone())?;
    let n = sig.dim();
    let mut residual = t.matrix.clone();
    let mut subspace: Vec<Vec<Rational>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    let mut reflections = Vec::new();
    let mut guard = 0;
    while !subspace.is_empty() {
        guard += 1;
        if guard > 4 * n + 4 {
            return Err(Error::NotOrthogonal);
        }
        if let Some(x) = fixed_non_null(&sig, &residual, &subspace) {
            subspace = orthogonal_within(&sig, &subspace, &x);
            continue;
        }
        let moved = candidates(&subspace).find(|x| {
            let sx = residual.mul_vec(x);
            let d: Vec<Rational> = sx.iter().zip(x).map(|(a, b)| a - b).collect();
            !quadratic_form_coords(&sig, x).is_zero() && !quadratic_form_coords(&sig, &d).is_zero()
        });
        match moved {
            Some(x) => {
                let sx = residual.mul_vec(&x);
                let v: Vec<Rational> = sx.iter().zip(&x).map(|(a, b)| a - b).collect();
                let v = Vector::new(sig, primitive(&v))?;
                residual = &OrthogonalMap::reflection(&v)?.matrix * &residual;
                reflections.push(v);
                subspace = orthogonal_within(&sig, &subspace, &x);
            }
            None => {
                let w = candidates(&subspace)
                    .find(|x| !quadratic_form_coords(&sig, x).is_zero())
                    .ok_or(Error::NotOrthogonal)?;
                let w = Vector::new(sig, primitive(&w))?;
                residual = &OrthogonalMap::reflection(&w)?.matrix * &residual;
                reflections.push(w);
            }
        }
    }
    // residual = r_k ∘ … ∘ r_1 ∘ T = Id, so T = r_1 ∘ … ∘ r_k
    debug_assert_eq!(residual, RatMatrix::identity(n));
    Ok(reflections)
}

/// Deterministic probe vectors in `span(basis)`: basis vectors, pairwise
/// sums and differences, then small integer combinations.
fn candidates(basis: &[Vec<Rational>]) -> impl Iterator<Item = Vec<Rational>> + '_ {
    let m = basis.len();
    let n = basis.first().map_or(0, Vec::len);
    let combo = move |coef: Vec<i64>| -> Vec<Rational> {
        (0..n)
            .map(|i| basis.iter().zip(&coef).map(|(b, c)| &b[i] * &Rational::from_int(*c)).sum())
            .collect()
    };
    let singles = (0..m).map(move |i| {
        let mut c = vec![0; m];
        c[i] = 1;
        c
    });
    let pairs = (0..m).flat_map(move |i| {
        (i + 1..m).flat_map(move |j| {
            [1i64, -1, 2].into_iter().map(move |k| {
                let mut c = vec![0; m];
                c[i] = 1;
                c[j] = k;
                c
            })
        })
    });
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let random = (0..256).map(move |_| {
        (0..m)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state % 7) as i64 - 3
            })
            .collect::<Vec<i64>>()
    });
    singles.chain(pairs).chain(random).map(combo).filter(|v| v.iter().any(|x| !x.is_zero()))
}

fn fixed_non_null(sig: &Signature, s: &RatMatrix, basis: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = sig.dim();
    let m = basis.len();
    // (S - I) W c = 0
    let sw = RatMatrix::from_fn(n, m, |i, j| {
        let col = &basis[j];
        let image: Rational = (0..n).map(|k| &s[(i, k)] * &col[k]).sum();
        image - &col[i]
    });
    let kernel: Vec<Vec<Rational>> = sw
        .kernel()
        .into_iter()
        .map(|c| (0..n).map(|i| basis.iter().zip(&c).map(|(b, cj)| &b[i] * cj).sum()).collect())
        .collect();
    if kernel.is_empty() {
        return None;
    }
    let found = candidates(&kernel).find(|x| !quadratic_form_coords(sig, x).is_zero());
    found
}

fn orthogonal_within(sig: &Signature, basis: &[Vec<Rational>], x: &[Rational]) -> Vec<Vec<Rational>> {
    let n = sig.dim();
    let row = RatMatrix::from_fn(1, basis.len(), |_, j| bilinear_form_coords(sig, x, &basis[j]));
    row.kernel()
        .into_iter()
        .map(|c| (0..n).map(|i| basis.iter().zip(&c).map(|(b, cj)| &b[i] * cj).sum()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn check(t: &OrthogonalMap) -> Vec<Vector> {
        let vs = cartan_dieudonne(t).unwrap();
        assert!(vs.len() <= t.sig().dim(), "{} reflections", vs.len());
        assert_eq!(&OrthogonalMap::compose_reflections(t.sig(), &vs).unwrap(), t);
        vs
    }

    #[test]
    fn identity_is_empty() {
        let s = Signature::new(2, 2).unwrap();
        assert!(check(&OrthogonalMap::identity(s)).is_empty());
    }

    #[test]
    fn minus_identity_euclidean_plane() {
        let s = Signature::new(2, 0).unwrap();
        let t = OrthogonalMap::new(s, RatMatrix::identity(2).scale(&q(-1, 1))).unwrap();
        let vs = check(&t);
        assert_eq!(vs.len(), 2);
        assert_eq!(vs[0].coords(), &[q(1, 1), q(0, 1)]);
        assert_eq!(vs[1].coords(), &[q(0, 1), q(1, 1)]);
    }

    #[test]
    fn hyperbolic_rotation() {
        let s = Signature::new(1, 1).unwrap();
        let m = RatMatrix::from_rows(vec![vec![q(5, 4), q(3, 4)], vec![q(3, 4), q(5, 4)]]);
        let t = OrthogonalMap::new(s, m).unwrap();
        assert_eq!(check(&t).len(), 2);
    }

    #[test]
    fn null_difference_case() {
        // u null and orthogonal to w: σ_w ∘ σ_{w+u} is unipotent
        let s = Signature::new(2, 1).unwrap();
        let u = Vector::new(s, vec![q(1, 1), q(0, 1), q(1, 1)]).unwrap();
        let w = Vector::new(s, vec![q(0, 1), q(1, 1), q(0, 1)]).unwrap();
        let t = OrthogonalMap::compose_reflections(s, &[w.clone(), w.add(&u)]).unwrap();
        assert_ne!(t, OrthogonalMap::identity(s));
        check(&t);
    }

    #[test]
    fn rejects_non_orthogonal() {
        let s = Signature::new(1, 1).unwrap();
        let m = RatMatrix::from_rows(vec![vec![q(2, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]]);
        assert_eq!(OrthogonalMap::new(s, m), Err(Error::NotOrthogonal));
    }
}
