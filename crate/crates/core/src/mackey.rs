//! Row- and column-finite matrices (the Mackey algebra `Mat^M_N`) in a
//! decidable canonical form.
//!
//! An operator is a finite set of diagonals. The diagonal at offset
//! `d = column - row` starts at row `max(1, 1 - d)` and holds an eventually
//! constant sequence: an explicit prefix followed by a repeated tail value.
//! Position `p` on any diagonal is the entry whose smaller index is `p + 1`,
//! so the transpose just negates offsets.
//!
//! This class is closed under sums, products and transposes, contains every
//! finitary matrix, the identity and the shifts, and has decidable equality.
//! It is a proper subalgebra of `Mat^M_N`: operators whose diagonals never
//! settle, or with infinitely many diagonals, are not representable.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{One, Zero};

use crate::base::{fmt_rational, FinVec, Rational};
use crate::error::{Error, Result};
use crate::finitary::{self, FinitaryOp};
use crate::linalg::Matrix;

/// An eventually constant sequence, trimmed so the prefix never ends in the
/// tail value.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiagonalSeq {
    prefix: Vec<Rational>,
    tail: Rational,
}

impl DiagonalSeq {
    pub fn new(prefix: Vec<Rational>, tail: Rational) -> Self {
        let mut s = DiagonalSeq { prefix, tail };
        while s.prefix.last() == Some(&s.tail) {
            s.prefix.pop();
        }
        s
    }

    pub fn constant(tail: Rational) -> Self {
        DiagonalSeq::new(Vec::new(), tail)
    }

    pub fn prefix(&self) -> &[Rational] {
        &self.prefix
    }

    pub fn tail(&self) -> &Rational {
        &self.tail
    }

    pub fn value(&self, pos: usize) -> &Rational {
        self.prefix.get(pos).unwrap_or(&self.tail)
    }

    pub fn is_zero(&self) -> bool {
        self.prefix.is_empty() && self.tail.is_zero()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let len = self.prefix.len().max(other.prefix.len());
        let prefix = (0..len).map(|p| f(self.value(p), other.value(p))).collect();
        DiagonalSeq::new(prefix, f(&self.tail, &other.tail))
    }

    fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        DiagonalSeq::new(self.prefix.iter().map(&f).collect(), f(&self.tail))
    }
}

impl fmt::Debug for DiagonalSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix: Vec<String> = self.prefix.iter().map(fmt_rational).collect();
        write!(
            f,
            "[{}; tail {}]",
            prefix.join(" "),
            fmt_rational(&self.tail)
        )
    }
}

/// First row of the diagonal at offset `d`.
fn start_row(d: i64) -> i64 {
    1.max(1 - d)
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MackeyOp {
    diags: BTreeMap<i64, DiagonalSeq>,
}

impl MackeyOp {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::scalar(Rational::one())
    }

    pub fn scalar(c: Rational) -> Self {
        Self::from_diags([(0, DiagonalSeq::constant(c))])
    }

    /// Superdiagonal of ones: `e_1 ↦ 0`, `e_{i+1} ↦ e_i`.
    pub fn shift_up() -> Self {
        Self::from_diags([(1, DiagonalSeq::constant(Rational::one()))])
    }

    /// Subdiagonal of ones: `e_i ↦ e_{i+1}`.
    pub fn shift_down() -> Self {
        Self::from_diags([(-1, DiagonalSeq::constant(Rational::one()))])
    }

    pub fn unit(i: usize, j: usize) -> Self {
        Self::from_finitary(&FinitaryOp::unit(i, j))
    }

    /// Drops zero diagonals; prefixes are already trimmed by [`DiagonalSeq::new`].
    pub fn from_diags(diags: impl IntoIterator<Item = (i64, DiagonalSeq)>) -> Self {
        let mut out = BTreeMap::new();
        for (d, s) in diags {
            let s = DiagonalSeq::new(s.prefix, s.tail);
            if !s.is_zero() {
                out.insert(d, s);
            }
        }
        MackeyOp { diags: out }
    }

    pub fn diagonal(prefix: Vec<Rational>, tail: Rational) -> Self {
        Self::from_diags([(0, DiagonalSeq::new(prefix, tail))])
    }

    pub fn from_finitary(a: &FinitaryOp) -> Self {
        let mut cols: BTreeMap<i64, Vec<Rational>> = BTreeMap::new();
        for (&(i, j), c) in a.entries() {
            let d = j as i64 - i as i64;
            let pos = i.min(j) - 1;
            let prefix = cols.entry(d).or_default();
            if prefix.len() <= pos {
                prefix.resize(pos + 1, Rational::zero());
            }
            prefix[pos] = c.clone();
        }
        Self::from_diags(
            cols.into_iter()
                .map(|(d, p)| (d, DiagonalSeq::new(p, Rational::zero()))),
        )
    }

    pub fn diags(&self) -> impl Iterator<Item = (i64, &DiagonalSeq)> + '_ {
        self.diags.iter().map(|(&d, s)| (d, s))
    }

    pub fn diag(&self, d: i64) -> Option<&DiagonalSeq> {
        self.diags.get(&d)
    }

    pub fn is_zero(&self) -> bool {
        self.diags.is_empty()
    }

    /// The `(i, j)` entry; zero outside the index set.
    pub fn entry(&self, i: usize, j: usize) -> Rational {
        self.entry_signed(i as i64, j as i64)
    }

    fn entry_signed(&self, i: i64, j: i64) -> Rational {
        if i < 1 || j < 1 {
            return Rational::zero();
        }
        match self.diags.get(&(j - i)) {
            Some(s) => s.value((i.min(j) - 1) as usize).clone(),
            None => Rational::zero(),
        }
    }

    /// Largest row at which some diagonal still reads from its prefix.
    pub fn prefix_extent(&self) -> usize {
        self.diags
            .iter()
            .map(|(&d, s)| s.prefix.len() + d.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_diags(self.diags.iter().map(|(&d, s)| (d, s.map(|x| x * c))))
    }

    fn combine(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let zero = DiagonalSeq::constant(Rational::zero());
        let offsets: BTreeSet<i64> = self
            .diags
            .keys()
            .chain(other.diags.keys())
            .copied()
            .collect();
        Self::from_diags(offsets.into_iter().map(|d| {
            let a = self.diags.get(&d).unwrap_or(&zero);
            let b = other.diags.get(&d).unwrap_or(&zero);
            (d, a.zip_with(b, &f))
        }))
    }

    /// The matrix product.
    ///
    /// Offsets add. On each output diagonal the contribution of a pair of
    /// input diagonals becomes the product of their tails once both inputs
    /// read from their tails and the intermediate index is at least 1; rows
    /// before that are summed explicitly.
    pub fn mul(&self, other: &Self) -> Self {
        let mut pairs: BTreeMap<i64, Vec<(i64, &DiagonalSeq, &DiagonalSeq)>> = BTreeMap::new();
        for (&d1, a) in &self.diags {
            for (&d2, b) in &other.diags {
                pairs.entry(d1 + d2).or_default().push((d1, a, b));
            }
        }
        Self::from_diags(pairs.into_iter().map(|(d, terms)| {
            let i0 = start_row(d);
            let mut settled = i0;
            let mut tail = Rational::zero();
            for &(d1, a, b) in &terms {
                let d2 = d - d1;
                let la = a.prefix.len() as i64;
                let lb = b.prefix.len() as i64;
                settled = settled
                    .max(1 - d1)
                    .max(la + 1 - d1.min(0))
                    .max(lb + 1 - d1 - d2.min(0));
                tail += &a.tail * &b.tail;
            }
            let prefix = (i0..settled)
                .map(|i| {
                    terms.iter().fold(Rational::zero(), |acc, &(d1, _, _)| {
                        let k = i + d1;
                        if k < 1 {
                            return acc;
                        }
                        let x = self.entry_signed(i, k);
                        if x.is_zero() {
                            return acc;
                        }
                        acc + x * other.entry_signed(k, i + d)
                    })
                })
                .collect();
            (d, DiagonalSeq::new(prefix, tail))
        }))
    }

    pub fn bracket(&self, other: &Self) -> Self {
        bracket_m(self, other)
    }

    pub fn transpose(&self) -> Self {
        MackeyOp {
            diags: self.diags.iter().map(|(&d, s)| (-d, s.clone())).collect(),
        }
    }

    /// `a · v`; finite because every column has finitely many entries.
    pub fn apply(&self, v: &FinVec) -> FinVec {
        let mut out = FinVec::zero();
        for (&j, x) in v.iter() {
            for &d in self.diags.keys() {
                let i = j as i64 - d;
                if i >= 1 {
                    let a = self.entry_signed(i, j as i64);
                    if !a.is_zero() {
                        out.add_term(i as usize, a * x);
                    }
                }
            }
        }
        out
    }

    /// The action on `V_*`: `w ↦ -aᵗ w`.
    pub fn act_vstar(&self, w: &FinVec) -> FinVec {
        -&self.transpose().apply(w)
    }

    /// Converts to a finitary operator when every tail is zero.
    pub fn to_finitary(&self) -> Option<FinitaryOp> {
        if self.diags.values().any(|s| !s.tail.is_zero()) {
            return None;
        }
        Some(FinitaryOp::from_entries(self.diags.iter().flat_map(
            |(&d, s)| {
                let i0 = start_row(d);
                s.prefix.iter().enumerate().map(move |(p, c)| {
                    let i = i0 + p as i64;
                    ((i as usize, (i + d) as usize), c.clone())
                })
            },
        )))
    }

    /// Dense block of rows and columns `1..=n`.
    pub fn window_matrix(&self, n: usize) -> Matrix {
        Matrix::from_fn(n, n, |i, j| self.entry(i + 1, j + 1))
    }

    pub fn as_scalar(&self) -> Option<Rational> {
        match self.diags.len() {
            0 => Some(Rational::zero()),
            1 => {
                let s = self.diags.get(&0)?;
                s.prefix.is_empty().then(|| s.tail.clone())
            }
            _ => None,
        }
    }

    /// Sum of the main diagonal; defined only when its tail vanishes.
    pub fn trace(&self) -> Result<Rational> {
        match self.diags.get(&0) {
            None => Ok(Rational::zero()),
            Some(s) if !s.tail.is_zero() => Err(Error::TraceUndefined {
                tail: s.tail.clone(),
            }),
            Some(s) => Ok(s.prefix.iter().sum()),
        }
    }
}

impl fmt::Debug for MackeyOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.diags.iter()).finish()
    }
}

/// `(i, j)` entry of `a`.
pub fn mk_entry_view(a: &MackeyOp, i: usize, j: usize) -> Rational {
    a.entry(i, j)
}

pub fn mul(a: &MackeyOp, b: &MackeyOp) -> MackeyOp {
    a.mul(b)
}

pub fn bracket_m(a: &MackeyOp, b: &MackeyOp) -> MackeyOp {
    a.mul(b).sub(&b.mul(a))
}

pub fn transpose(a: &MackeyOp) -> MackeyOp {
    a.transpose()
}

/// Membership in the ideal of finite-rank operators (finitary matrices).
pub fn is_finitary(a: &MackeyOp) -> Option<FinitaryOp> {
    a.to_finitary()
}

#[derive(Clone, Debug, PartialEq)]
pub enum CenterReport {
    Scalar(Rational),
    /// `(aψ - ψa) · v ≠ 0` with `ψ` finitary, so `a` is not central.
    Witness {
        psi: FinitaryOp,
        v: FinVec,
    },
}

impl CenterReport {
    /// Re-checks a witness against `a`; scalars are checked canonically.
    pub fn verify(&self, a: &MackeyOp) -> bool {
        match self {
            CenterReport::Scalar(l) => *a == MackeyOp::scalar(l.clone()),
            CenterReport::Witness { psi, v } => {
                let psi = MackeyOp::from_finitary(psi);
                !bracket_m(a, &psi).apply(v).is_zero()
            }
        }
    }
}

/// Decides whether `a` is central; otherwise produces a finitary `ψ` that
/// does not commute with it.
///
/// Finds `u` with `a·u = u'` independent of `u`, a functional `ℓ` with
/// `ℓ(u) = 0` and `ℓ(u') = 1`, and sets `ψ = u ⊗ ℓ`, so that
/// `(aψ - ψa)·u = -u`. Basis vectors `e_1, e_2, ...` are tried first; if they
/// are all eigenvectors, `u = e_i + e_j` for two distinct eigenvalues.
pub fn center_witness(a: &MackeyOp) -> CenterReport {
    if let Some(l) = a.as_scalar() {
        return CenterReport::Scalar(l);
    }
    let limit = a.prefix_extent() + 2;
    let mut eigen: Vec<(usize, Rational)> = Vec::new();
    for i in 1..=limit {
        let image = a.apply(&FinVec::basis(i));
        let other = image
            .iter()
            .find(|(&k, _)| k != i)
            .map(|(&k, c)| (k, c.clone()));
        match other {
            Some((k, c)) => {
                let psi = FinitaryOp::from_entries([((i, k), c.recip())]);
                return CenterReport::Witness {
                    psi,
                    v: FinVec::basis(i),
                };
            }
            None => eigen.push((i, image.coeff(&i))),
        }
    }
    let (i, li) = eigen[0].clone();
    let (j, lj) = eigen.iter().find(|(_, l)| *l != li).cloned().expect(
        "a non-scalar operator has a non-eigen column or two eigenvalues within its prefix extent",
    );
    let u = &FinVec::basis(i) + &FinVec::basis(j);
    let gap = (&li - &lj).recip();
    let ell = FinVec::from_terms([(i, gap.clone()), (j, -gap)]);
    CenterReport::Witness {
        psi: finitary::PureTensor::new(u.clone(), ell).expand(),
        v: u,
    }
}

/// A traceless finitary `ψ` with `ψ·r = a·r` for every `r` in `rs`.
///
/// `a` is truncated to the columns in the joint support of `rs`; any trace
/// is then cancelled on the diagonal at `m = 1 + max support index`, which no
/// `r` touches.
pub fn dense_approx(a: &MackeyOp, rs: &[FinVec]) -> Result<FinitaryOp> {
    if rs.is_empty() {
        return Err(Error::Precondition(
            "dense_approx needs at least one vector".into(),
        ));
    }
    let support: BTreeSet<usize> = rs.iter().flat_map(|r| r.keys().copied()).collect();
    let mut psi = FinitaryOp::zero();
    for &j in &support {
        let col = a.apply(&FinVec::basis(j));
        psi = psi.add(&FinitaryOp::from_entries(
            col.iter().map(|(&i, c)| ((i, j), c.clone())),
        ));
    }
    let tr = psi.trace();
    if !tr.is_zero() {
        let m = support.iter().next_back().map_or(1, |&s| s + 1);
        psi = psi.sub(&FinitaryOp::from_entries([((m, m), tr)]));
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{frac, rat};

    fn rats(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn entry_view_examples() {
        let id = MackeyOp::identity();
        assert_eq!(id.entry(5, 5), rat(1));
        assert_eq!(id.entry(5, 6), rat(0));
        let a = MackeyOp::from_diags([(1, DiagonalSeq::new(rats(&[2, 3]), rat(0)))]);
        assert_eq!(a.entry(2, 3), rat(3));
        assert_eq!(a.entry(1, 2), rat(2));
        assert_eq!(a.entry(3, 4), rat(0));
    }

    #[test]
    fn canonical_trimming() {
        let s = DiagonalSeq::new(rats(&[1, 2, 2, 2]), rat(2));
        assert_eq!(s.prefix(), &rats(&[1])[..]);
        let z = MackeyOp::from_diags([(3, DiagonalSeq::new(rats(&[0, 0]), rat(0)))]);
        assert!(z.is_zero());
    }

    #[test]
    fn shift_products() {
        let up = MackeyOp::shift_up();
        let down = MackeyOp::shift_down();
        assert_eq!(up.mul(&down), MackeyOp::identity());
        assert_eq!(
            down.mul(&up),
            MackeyOp::identity().sub(&MackeyOp::unit(1, 1))
        );
        assert_eq!(bracket_m(&up, &down), MackeyOp::unit(1, 1));
        let a = MackeyOp::from_diags([(2, DiagonalSeq::new(rats(&[1, -1]), rat(3)))]);
        assert_eq!(MackeyOp::identity().mul(&a), a);
    }

    #[test]
    fn finitary_bracket_embeds() {
        assert_eq!(
            bracket_m(&MackeyOp::unit(1, 2), &MackeyOp::unit(2, 3)),
            MackeyOp::unit(1, 3)
        );
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(MackeyOp::shift_up().transpose(), MackeyOp::shift_down());
        assert_eq!(MackeyOp::identity().transpose(), MackeyOp::identity());
        assert_eq!(MackeyOp::unit(2, 5).transpose(), MackeyOp::unit(5, 2));
    }

    #[test]
    fn finitary_membership() {
        assert_eq!(
            MackeyOp::unit(1, 2).to_finitary(),
            Some(FinitaryOp::unit(1, 2))
        );
        assert_eq!(MackeyOp::identity().to_finitary(), None);
        assert_eq!(MackeyOp::zero().to_finitary(), Some(FinitaryOp::zero()));
        let f = FinitaryOp::from_ints(&[((3, 1), 2), ((1, 4), -1), ((2, 2), 7)]);
        assert_eq!(MackeyOp::from_finitary(&f).to_finitary(), Some(f));
    }

    #[test]
    fn apply_matches_entries() {
        let a = MackeyOp::from_diags([
            (-2, DiagonalSeq::new(rats(&[1]), rat(2))),
            (1, DiagonalSeq::new(rats(&[0, 5]), rat(-1))),
        ]);
        let v = FinVec::from_pairs(&[(1, 1), (3, 2)]);
        let got = a.apply(&v);
        for i in 1..10 {
            let expect = a.entry(i, 1) + a.entry(i, 3) * rat(2);
            assert_eq!(got.coeff(&i), expect);
        }
    }

    #[test]
    fn center_examples() {
        assert_eq!(
            center_witness(&MackeyOp::scalar(rat(3))),
            CenterReport::Scalar(rat(3))
        );
        assert_eq!(
            center_witness(&MackeyOp::zero()),
            CenterReport::Scalar(rat(0))
        );
        let up = MackeyOp::shift_up();
        let r = center_witness(&up);
        assert!(matches!(r, CenterReport::Witness { .. }));
        assert!(r.verify(&up));
        let d = MackeyOp::diagonal(rats(&[1, 2]), rat(1));
        let r = center_witness(&d);
        match &r {
            CenterReport::Witness { v, .. } => {
                assert_eq!(*v, FinVec::from_pairs(&[(1, 1), (2, 1)]))
            }
            _ => panic!("expected a witness"),
        }
        assert!(r.verify(&d));
    }

    #[test]
    fn dense_approx_examples() {
        let psi = dense_approx(&MackeyOp::identity(), &[FinVec::basis(1)]).unwrap();
        assert_eq!(psi, FinitaryOp::from_ints(&[((1, 1), 1), ((2, 2), -1)]));

        let psi = dense_approx(&MackeyOp::zero(), &[FinVec::basis(1), FinVec::basis(2)]).unwrap();
        assert!(psi.is_zero());

        let up = MackeyOp::shift_up();
        let psi = dense_approx(&up, &[FinVec::basis(3)]).unwrap();
        assert_eq!(psi, FinitaryOp::unit(2, 3));
        assert!(dense_approx(&up, &[]).is_err());

        let a = MackeyOp::scalar(frac(1, 2));
        let rs = [FinVec::from_pairs(&[(1, 1), (4, 3)])];
        let psi = dense_approx(&a, &rs).unwrap();
        assert!(psi.trace().is_zero());
        assert_eq!(finitary::act_v(&psi, &rs[0]), a.apply(&rs[0]));
    }
}
