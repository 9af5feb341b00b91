//! Linear systems `(U, W)` with a bilinear pairing, given by its matrix
//! `P_ij = ⟨u_i, w_j⟩` in fixed bases, and their finite-dimensional
//! subsystems.
//!
//! Nondegeneracy of a pairing given by an entry oracle cannot be decided
//! globally; every operation here certifies what it needs inside a window
//! and fails with [`Error::DegenerateWithinWindow`] otherwise.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num::{One, Zero};

use crate::base::{FinVec, Rational, Window};
use crate::error::{Error, Result};
use crate::finitary::{FinitaryOp, PureTensor};
use crate::linalg::{EchelonBasis, Matrix};
use crate::mackey::MackeyOp;

type EntryFn = Arc<dyn Fn(usize, usize) -> Rational + Send + Sync>;

#[derive(Clone)]
pub enum PairingSpec {
    /// `⟨e_i, e^j⟩ = δ_ij`.
    StandardDual,
    /// Pairing matrix given by a row- and column-finite operator.
    Mackey(MackeyOp),
    /// Arbitrary entries; `search_bound` caps searches for pairing partners.
    Oracle { entry: EntryFn, search_bound: usize },
}

impl PairingSpec {
    pub fn oracle(
        entry: impl Fn(usize, usize) -> Rational + Send + Sync + 'static,
        search_bound: usize,
    ) -> Self {
        PairingSpec::Oracle {
            entry: Arc::new(entry),
            search_bound,
        }
    }

    /// `⟨u_i, w_j⟩`.
    pub fn entry(&self, i: usize, j: usize) -> Rational {
        match self {
            PairingSpec::StandardDual => {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            PairingSpec::Mackey(p) => p.entry(i, j),
            PairingSpec::Oracle { entry, .. } => entry(i, j),
        }
    }

    /// `sum_ij u(i) P_ij w(j)`.
    pub fn pair(&self, u: &FinVec, w: &FinVec) -> Rational {
        match self {
            PairingSpec::StandardDual => u.dot(w),
            PairingSpec::Mackey(p) => u.dot(&p.apply(w)),
            PairingSpec::Oracle { entry, .. } => {
                let mut acc = Rational::zero();
                for (&i, a) in u.iter() {
                    for (&j, b) in w.iter() {
                        let p = entry(i, j);
                        if !p.is_zero() {
                            acc += a * p * b;
                        }
                    }
                }
                acc
            }
        }
    }

    pub fn gram(&self, us: &[FinVec], ws: &[FinVec]) -> Matrix {
        Matrix::from_fn(us.len(), ws.len(), |a, b| self.pair(&us[a], &ws[b]))
    }
}

impl fmt::Debug for PairingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairingSpec::StandardDual => f.write_str("StandardDual"),
            PairingSpec::Mackey(p) => f.debug_tuple("Mackey").field(p).finish(),
            PairingSpec::Oracle { search_bound, .. } => f
                .debug_struct("Oracle")
                .field("search_bound", search_bound)
                .finish_non_exhaustive(),
        }
    }
}

pub fn pair(spec: &PairingSpec, u: &FinVec, w: &FinVec) -> Rational {
    spec.pair(u, w)
}

/// A finite-dimensional subsystem: `gram[a][b] = ⟨u_a, w_b⟩` is square and
/// invertible.
#[derive(Clone, Debug, PartialEq)]
pub struct Subsystem {
    u_basis: Vec<FinVec>,
    w_basis: Vec<FinVec>,
    gram: Matrix,
}

impl Subsystem {
    pub fn new(spec: &PairingSpec, u_basis: Vec<FinVec>, w_basis: Vec<FinVec>) -> Result<Self> {
        if u_basis.len() != w_basis.len() {
            return Err(Error::Precondition(format!(
                "subsystem bases have sizes {} and {}",
                u_basis.len(),
                w_basis.len()
            )));
        }
        let gram = spec.gram(&u_basis, &w_basis);
        let rank = gram.rank();
        if rank < u_basis.len() {
            let window = u_basis
                .iter()
                .chain(&w_basis)
                .map(FinVec::max_index)
                .max()
                .unwrap_or(0);
            return Err(Error::DegenerateWithinWindow {
                needed: u_basis.len(),
                rank,
                window,
            });
        }
        Ok(Subsystem {
            u_basis,
            w_basis,
            gram,
        })
    }

    pub fn dim(&self) -> usize {
        self.u_basis.len()
    }

    pub fn u_basis(&self) -> &[FinVec] {
        &self.u_basis
    }

    pub fn w_basis(&self) -> &[FinVec] {
        &self.w_basis
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// Coefficients `C` with `op = sum_ab C_ab u_a ⊗ w_b`, if `op` lies in
    /// `span(u_basis) ⊗ span(w_basis)`.
    pub fn express(&self, op: &FinitaryOp) -> Option<Matrix> {
        let k = self.dim();
        let cols: BTreeSet<usize> = op.entries().map(|(&(_, j), _)| j).collect();
        // op = sum_a u_a ⊗ x_a, with x_a collected column by column
        let mut xs = vec![FinVec::zero(); k];
        for j in cols {
            let coeffs = express_in(&self.u_basis, &op.column(j))?;
            for (a, c) in coeffs.into_iter().enumerate() {
                xs[a].add_term(j, c);
            }
        }
        let mut c = Matrix::zeros(k, k);
        for (a, x) in xs.iter().enumerate() {
            let coeffs = express_in(&self.w_basis, x)?;
            for (b, v) in coeffs.into_iter().enumerate() {
                c.set(a, b, v);
            }
        }
        Some(c)
    }

    /// `sum_ab coeffs[a][b] u_a ⊗ w_b`.
    pub fn expand(&self, coeffs: &Matrix) -> FinitaryOp {
        let mut out = FinitaryOp::zero();
        for a in 0..coeffs.rows() {
            for b in 0..coeffs.cols() {
                let c = coeffs.get(a, b);
                if !c.is_zero() {
                    let t = PureTensor::new(self.u_basis[a].scale(c), self.w_basis[b].clone());
                    out = out.add(&t.expand());
                }
            }
        }
        out
    }
}

/// Coordinates of `v` in the span of `basis`, if it lies there.
pub(crate) fn express_in(basis: &[FinVec], v: &FinVec) -> Option<Vec<Rational>> {
    let n = basis
        .iter()
        .map(FinVec::max_index)
        .chain(std::iter::once(v.max_index()))
        .max()
        .unwrap_or(0);
    let k = basis.len();
    let aug = Matrix::from_fn(n, k + 1, |i, j| {
        if j < k {
            basis[j].coeff(&(i + 1))
        } else {
            v.coeff(&(i + 1))
        }
    });
    let (r, pivots) = aug.rref();
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![Rational::zero(); k];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r.get(row, k).clone();
    }
    Some(x)
}

fn check_window(vs: &[FinVec], window: Window) -> Result<()> {
    match vs.iter().find(|v| !v.within(window.n())) {
        Some(v) => Err(Error::Precondition(format!(
            "support index {} lies outside window {}",
            v.max_index(),
            window.n()
        ))),
        None => Ok(()),
    }
}

/// A `W_f` pairing nondegenerately with `span(u_f)`, chosen as the
/// lexicographically first set of coordinate vectors `e^j` (`j` in the
/// window) whose pairing matrix with `u_f` has full rank.
pub fn complement_subsystem(
    spec: &PairingSpec,
    u_f: &[FinVec],
    window: Window,
) -> Result<Subsystem> {
    check_window(u_f, window)?;
    let mut independent = EchelonBasis::new();
    if !u_f.iter().all(|u| independent.insert(u)) {
        return Err(Error::Precondition("u_f is linearly dependent".into()));
    }
    let k = u_f.len();
    let mut chosen = Vec::new();
    let mut cols = EchelonBasis::new();
    for j in window.indices() {
        if cols.rank() == k {
            break;
        }
        let ej = FinVec::basis(j);
        let col = FinVec::from_terms(
            u_f.iter()
                .enumerate()
                .map(|(a, u)| (a + 1, spec.pair(u, &ej))),
        );
        if cols.insert(&col) {
            chosen.push(ej);
        }
    }
    if cols.rank() < k {
        return Err(Error::DegenerateWithinWindow {
            needed: k,
            rank: cols.rank(),
            window: window.n(),
        });
    }
    Subsystem::new(spec, u_f.to_vec(), chosen)
}

/// Which space the perpendicular lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `{u : ⟨u, g⟩ = 0}` for generators `g ∈ W`.
    U,
    /// `{w : ⟨g, w⟩ = 0}` for generators `g ∈ U`.
    W,
}

/// A basis of the perpendicular space of `gens`, intersected with the span of
/// the window's coordinate vectors.
pub fn perp_in_window(
    spec: &PairingSpec,
    side: Side,
    gens: &[FinVec],
    window: Window,
) -> Result<Vec<FinVec>> {
    check_window(gens, window)?;
    let mut rows = EchelonBasis::new();
    for g in gens {
        let row = FinVec::from_terms(window.indices().map(|i| {
            let e = FinVec::basis(i);
            let p = match side {
                Side::U => spec.pair(&e, g),
                Side::W => spec.pair(g, &e),
            };
            (i, p)
        }));
        rows.insert(&row);
    }
    let universe: Vec<usize> = window.indices().collect();
    Ok(rows.nullspace(&universe))
}

/// A finite-dimensional subsystem `(U_f, W_f)` with every input operator in
/// `U_f ⊗ W_f`.
///
/// Starts from the coordinate vectors of the row and column supports, then
/// adds `w_j` (ascending `j`) while that raises the rank of the pairing
/// matrix, and finally adds `u_i` the same way until the matrix is square
/// and invertible.
pub fn envelope(spec: &PairingSpec, elems: &[FinitaryOp], window: Window) -> Result<Subsystem> {
    if let Some(a) = elems.iter().find(|a| a.max_index() > window.n()) {
        return Err(Error::Precondition(format!(
            "operator index {} lies outside window {}",
            a.max_index(),
            window.n()
        )));
    }
    let mut us: BTreeSet<usize> = elems
        .iter()
        .flat_map(|a| a.entries().map(|(&(i, _), _)| i))
        .collect();
    let mut ws: BTreeSet<usize> = elems
        .iter()
        .flat_map(|a| a.entries().map(|(&(_, j), _)| j))
        .collect();
    let rank_of = |us: &BTreeSet<usize>, ws: &BTreeSet<usize>| {
        let u: Vec<FinVec> = us.iter().map(|&i| FinVec::basis(i)).collect();
        let w: Vec<FinVec> = ws.iter().map(|&j| FinVec::basis(j)).collect();
        spec.gram(&u, &w).rank()
    };
    let degenerate = |needed, rank| Error::DegenerateWithinWindow {
        needed,
        rank,
        window: window.n(),
    };

    let mut rank = rank_of(&us, &ws);
    for j in window.indices() {
        if rank == us.len() {
            break;
        }
        if ws.contains(&j) {
            continue;
        }
        ws.insert(j);
        let r = rank_of(&us, &ws);
        if r > rank {
            rank = r;
        } else {
            ws.remove(&j);
        }
    }
    if rank < us.len() {
        return Err(degenerate(us.len(), rank));
    }
    for i in window.indices() {
        if rank == ws.len() {
            break;
        }
        if us.contains(&i) {
            continue;
        }
        us.insert(i);
        let r = rank_of(&us, &ws);
        if r > rank {
            rank = r;
        } else {
            us.remove(&i);
        }
    }
    if rank < ws.len() {
        return Err(degenerate(ws.len(), rank));
    }
    Subsystem::new(
        spec,
        us.into_iter().map(FinVec::basis).collect(),
        ws.into_iter().map(FinVec::basis).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::rat;
    use crate::mackey::DiagonalSeq;

    fn e(i: usize) -> FinVec {
        FinVec::basis(i)
    }

    fn w(n: usize) -> Window {
        Window::new(n).unwrap()
    }

    /// `[[0,1],[1,0]]` in the top corner, identity elsewhere.
    pub(crate) fn swap_pairing() -> PairingSpec {
        PairingSpec::Mackey(MackeyOp::from_diags([
            (0, DiagonalSeq::new(vec![rat(0), rat(0)], rat(1))),
            (1, DiagonalSeq::new(vec![rat(1)], rat(0))),
            (-1, DiagonalSeq::new(vec![rat(1)], rat(0))),
        ]))
    }

    fn same_span(a: &[FinVec], b: &[FinVec]) -> bool {
        let mut sa = EchelonBasis::new();
        a.iter().for_each(|v| {
            sa.insert(v);
        });
        let mut sb = EchelonBasis::new();
        b.iter().for_each(|v| {
            sb.insert(v);
        });
        sa.rank() == sb.rank() && b.iter().all(|v| sa.contains(v))
    }

    #[test]
    fn pair_examples() {
        let std = PairingSpec::StandardDual;
        assert_eq!(pair(&std, &e(1), &e(1)), rat(1));
        assert_eq!(pair(&swap_pairing(), &e(1), &e(1)), rat(0));
        assert_eq!(pair(&swap_pairing(), &e(1), &e(2)), rat(1));
        assert_eq!(pair(&std, &(&e(1) + &e(2)), &e(2)), rat(1));
        let oracle = PairingSpec::oracle(|i, j| rat((i * 10 + j) as i64), 5);
        assert_eq!(pair(&oracle, &(&e(1) + &e(2)), &e(3)), rat(13 + 23));
    }

    #[test]
    fn complement_examples() {
        let std = PairingSpec::StandardDual;
        let s = complement_subsystem(&std, &[e(1), e(2)], w(5)).unwrap();
        assert_eq!(s.w_basis(), &[e(1), e(2)]);
        assert!(s.gram().is_identity());

        let u = &e(1) + &e(2);
        let s = complement_subsystem(&std, std::slice::from_ref(&u), w(5)).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(!pair(&std, &u, &s.w_basis()[0]).is_zero());

        let zero = PairingSpec::oracle(|_, _| rat(0), 10);
        assert!(matches!(
            complement_subsystem(&zero, &[e(1)], w(5)),
            Err(Error::DegenerateWithinWindow { .. })
        ));
        assert!(complement_subsystem(&std, &[e(6)], w(5)).is_err());
        assert!(complement_subsystem(&std, &[e(1), e(1)], w(5)).is_err());
    }

    #[test]
    fn perp_examples() {
        let std = PairingSpec::StandardDual;
        let p = perp_in_window(&std, Side::W, &[e(1)], w(3)).unwrap();
        assert!(same_span(&p, &[e(2), e(3)]));
        let p = perp_in_window(&std, Side::U, &[&e(1) + &e(2)], w(3)).unwrap();
        assert!(same_span(&p, &[&e(1) - &e(2), e(3)]));
        let p = perp_in_window(&std, Side::W, &[], w(2)).unwrap();
        assert!(same_span(&p, &[e(1), e(2)]));
    }

    #[test]
    fn envelope_examples() {
        let std = PairingSpec::StandardDual;
        let s = envelope(&std, &[FinitaryOp::unit(1, 2)], w(5)).unwrap();
        assert!(s.u_basis().contains(&e(1)));
        assert!(s.w_basis().contains(&e(2)));
        assert!(s.gram().is_invertible());

        let s = envelope(&std, &[], w(5)).unwrap();
        assert_eq!(s.dim(), 0);

        let s = envelope(
            &std,
            &[FinitaryOp::unit(1, 1), FinitaryOp::unit(2, 1)],
            w(5),
        )
        .unwrap();
        assert_eq!(s.u_basis(), &[e(1), e(2)]);
        assert_eq!(s.w_basis(), &[e(1), e(2)]);
    }

    #[test]
    fn envelope_reexpresses_inputs() {
        let spec = swap_pairing();
        let ops = vec![
            FinitaryOp::from_ints(&[((1, 3), 2), ((4, 1), -1)]),
            FinitaryOp::from_ints(&[((2, 2), 5)]),
        ];
        let s = envelope(&spec, &ops, w(8)).unwrap();
        for op in &ops {
            let c = s.express(op).expect("operator lies in the envelope");
            assert_eq!(&s.expand(&c), op);
        }
    }
}
