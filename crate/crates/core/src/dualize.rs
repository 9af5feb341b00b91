//! Dual bases of a countable linear system by biorthogonal Gram–Schmidt.
//!
//! Step `k` of the construction:
//!
//! 1. `ũ_k = u_k - sum_{i<k} ⟨u_k, w̃_i⟩ ũ_i`;
//! 2. if `⟨ũ_k, w_k⟩ = 0`, replace `w_k` by `w_k + w_j` for the smallest `j`
//!    with `⟨ũ_k, w_j⟩ ≠ 0`;
//! 3. scale `w_k` so that `⟨ũ_k, w_k⟩ = 1`;
//! 4. `w̃_k = w_k - sum_{i<k} ⟨ũ_i, w_k⟩ w̃_i`.
//!
//! Rows are kept as coefficient vectors in the original bases `{u_i}` and
//! `{w_j}`, so every pairing is evaluated through the [`PairingSpec`].

use num::{One, Zero};

use crate::base::{FinVec, Rational};
use crate::error::{Error, Result};
use crate::pairing::PairingSpec;

/// The first `len` pairs of a dual basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DualBasisPrefix {
    /// `ũ_k` in the coordinates `u_1..u_k`.
    pub u_rows: Vec<FinVec>,
    /// `w̃_k` in the coordinates `w_1..w_m`.
    pub w_rows: Vec<FinVec>,
}

impl DualBasisPrefix {
    pub fn len(&self) -> usize {
        self.u_rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u_rows.is_empty()
    }

    /// The matrix `⟨ũ_i, w̃_j⟩`; the identity for a correct result.
    pub fn biorthogonality(&self, spec: &PairingSpec) -> crate::linalg::Matrix {
        spec.gram(&self.u_rows, &self.w_rows)
    }
}

pub fn gram_schmidt(spec: &PairingSpec, n: usize, search_bound: usize) -> Result<DualBasisPrefix> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    if search_bound < n {
        return Err(Error::Precondition(format!(
            "search bound {search_bound} is smaller than n = {n}"
        )));
    }
    let mut u_rows: Vec<FinVec> = Vec::with_capacity(n);
    let mut w_rows: Vec<FinVec> = Vec::with_capacity(n);
    for k in 1..=n {
        let u_k = FinVec::basis(k);
        let mut u_t = u_k.clone();
        for (ui, wi) in u_rows.iter().zip(&w_rows) {
            let c = spec.pair(&u_k, wi);
            u_t.add_scaled(ui, &-c);
        }

        // w_j for j > k are untouched originals; those below k pair to zero
        let mut w = FinVec::basis(k);
        let mut diag = spec.pair(&u_t, &w);
        if diag.is_zero() {
            let (j, c) = (k + 1..=search_bound)
                .map(|j| (j, spec.pair(&u_t, &FinVec::basis(j))))
                .find(|(_, c)| !c.is_zero())
                .ok_or(Error::NondegeneracySearchExhausted {
                    step: k,
                    bound: search_bound,
                })?;
            w.add_term(j, Rational::one());
            diag = c;
        }
        let w = w.scale(&diag.recip());

        let mut w_t = w.clone();
        for (ui, wi) in u_rows.iter().zip(&w_rows) {
            let c = spec.pair(ui, &w);
            w_t.add_scaled(wi, &-c);
        }
        u_rows.push(u_t);
        w_rows.push(w_t);
    }
    Ok(DualBasisPrefix { u_rows, w_rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::rat;
    use crate::mackey::{DiagonalSeq, MackeyOp};

    fn v(pairs: &[(usize, i64)]) -> FinVec {
        FinVec::from_pairs(pairs)
    }

    #[test]
    fn standard_dual_is_fixed() {
        let r = gram_schmidt(&PairingSpec::StandardDual, 3, 3).unwrap();
        for k in 1..=3 {
            assert_eq!(r.u_rows[k - 1], FinVec::basis(k));
            assert_eq!(r.w_rows[k - 1], FinVec::basis(k));
        }
    }

    #[test]
    fn swapped_corner() {
        let spec = PairingSpec::Mackey(MackeyOp::from_diags([
            (0, DiagonalSeq::new(vec![rat(0), rat(0)], rat(1))),
            (1, DiagonalSeq::new(vec![rat(1)], rat(0))),
            (-1, DiagonalSeq::new(vec![rat(1)], rat(0))),
        ]));
        let r = gram_schmidt(&spec, 2, 4).unwrap();
        assert_eq!(r.u_rows, vec![v(&[(1, 1)]), v(&[(1, -1), (2, 1)])]);
        assert_eq!(r.w_rows, vec![v(&[(1, 1), (2, 1)]), v(&[(1, 1)])]);
        assert!(r.biorthogonality(&spec).is_identity());
    }

    #[test]
    fn upper_triangular_corner() {
        let spec = PairingSpec::Mackey(MackeyOp::from_diags([
            (0, DiagonalSeq::constant(rat(1))),
            (1, DiagonalSeq::new(vec![rat(1)], rat(0))),
        ]));
        let r = gram_schmidt(&spec, 2, 2).unwrap();
        assert_eq!(r.u_rows, vec![v(&[(1, 1)]), v(&[(2, 1)])]);
        assert_eq!(r.w_rows, vec![v(&[(1, 1)]), v(&[(1, -1), (2, 1)])]);
    }

    #[test]
    fn exhausted_search() {
        let spec = PairingSpec::oracle(|i, j| if i == 1 && j == 5 { rat(1) } else { rat(0) }, 10);
        assert_eq!(
            gram_schmidt(&spec, 1, 3),
            Err(Error::NondegeneracySearchExhausted { step: 1, bound: 3 })
        );
        let r = gram_schmidt(&spec, 1, 5).unwrap();
        assert_eq!(r.w_rows[0], v(&[(1, 1), (5, 1)]));
        assert!(gram_schmidt(&spec, 2, 1).is_err());
        assert!(gram_schmidt(&spec, 0, 1).is_err());
    }
}
