//! The finitary Lie algebras `gl(inf) = Mat_N` and `sl(inf)`, their natural
//! modules `V`, `V_*`, `V^*`, and the mixed tensor modules `V^{⊗p} ⊗ V_*^{⊗q}`.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::base::{fmt_rational, DualOracle, FinVec, Rational, SparseVec, Window};
use crate::error::{Error, Result};
use crate::linalg::EchelonBasis;
use crate::pairing::{PairingSpec, Subsystem};

/// A matrix with finitely many nonzero entries, keyed by `(row, column)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FinitaryOp(SparseVec<(usize, usize)>);

impl FinitaryOp {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The matrix unit `E_ij = e_i ⊗ e^j`.
    pub fn unit(i: usize, j: usize) -> Self {
        Self::from_entries([((i, j), Rational::one())])
    }

    pub fn from_entries(entries: impl IntoIterator<Item = ((usize, usize), Rational)>) -> Self {
        FinitaryOp(SparseVec::from_terms(entries.into_iter().map(
            |((i, j), c)| {
                assert!(i >= 1 && j >= 1, "matrix indices are 1-based");
                ((i, j), c)
            },
        )))
    }

    pub fn from_ints(entries: &[((usize, usize), i64)]) -> Self {
        Self::from_entries(entries.iter().map(|&(k, c)| (k, crate::base::rat(c))))
    }

    /// The identity on the index block `1..=n`.
    pub fn window_identity(n: usize) -> Self {
        Self::from_entries((1..=n).map(|i| ((i, i), Rational::one())))
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        self.0.coeff(&(i, j))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Rational)> + '_ {
        self.0.iter()
    }

    pub fn as_sparse(&self) -> &SparseVec<(usize, usize)> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    /// Largest row or column index carrying a nonzero entry.
    pub fn max_index(&self) -> usize {
        self.0.keys().map(|&(i, j)| i.max(j)).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        FinitaryOp(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        FinitaryOp(&self.0 - &other.0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        FinitaryOp(self.0.scale(c))
    }

    pub fn transpose(&self) -> Self {
        FinitaryOp(self.0.map_keys(|&(i, j)| (j, i)))
    }

    fn by_row(&self) -> BTreeMap<usize, Vec<(usize, &Rational)>> {
        let mut rows: BTreeMap<usize, Vec<(usize, &Rational)>> = BTreeMap::new();
        for (&(i, j), c) in self.0.iter() {
            rows.entry(i).or_default().push((j, c));
        }
        rows
    }

    pub(crate) fn by_col(&self) -> BTreeMap<usize, Vec<(usize, &Rational)>> {
        let mut cols: BTreeMap<usize, Vec<(usize, &Rational)>> = BTreeMap::new();
        for (&(i, j), c) in self.0.iter() {
            cols.entry(j).or_default().push((i, c));
        }
        cols
    }

    /// Associative product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = SparseVec::zero();
        if self.nnz() <= other.nnz() {
            let rows = other.by_row();
            for (&(i, k), a) in self.0.iter() {
                for &(j, b) in rows.get(&k).into_iter().flatten() {
                    out.add_term((i, j), a * b);
                }
            }
        } else {
            let cols = self.by_col();
            for (&(k, j), b) in other.0.iter() {
                for &(i, a) in cols.get(&k).into_iter().flatten() {
                    out.add_term((i, j), a * b);
                }
            }
        }
        FinitaryOp(out)
    }

    pub fn bracket(&self, other: &Self) -> Self {
        bracket(self, other)
    }

    pub fn trace(&self) -> Rational {
        trace(self)
    }

    /// The column `a · e_j`.
    pub fn column(&self, j: usize) -> FinVec {
        FinVec::from_terms(
            self.0
                .iter()
                .filter(|((_, c), _)| *c == j)
                .map(|(&(i, _), v)| (i, v.clone())),
        )
    }

    pub fn row(&self, i: usize) -> FinVec {
        FinVec::from_terms(
            self.0
                .iter()
                .filter(|((r, _), _)| *r == i)
                .map(|(&(_, j), v)| (j, v.clone())),
        )
    }
}

impl fmt::Debug for FinitaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("FinitaryOp{")?;
        for (n, ((i, j), c)) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({i},{j}):{}", fmt_rational(c))?;
        }
        f.write_str("}")
    }
}

/// `u ⊗ w`, acting as `x ↦ ⟨x, w⟩ u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PureTensor {
    pub u: FinVec,
    pub w: FinVec,
}

impl PureTensor {
    pub fn new(u: FinVec, w: FinVec) -> Self {
        PureTensor { u, w }
    }

    pub fn expand(&self) -> FinitaryOp {
        FinitaryOp::from_entries(
            self.u
                .iter()
                .flat_map(|(&i, a)| self.w.iter().map(move |(&j, b)| ((i, j), a * b))),
        )
    }
}

/// `[a, b] = ab - ba`.
pub fn bracket(a: &FinitaryOp, b: &FinitaryOp) -> FinitaryOp {
    a.mul(b).sub(&b.mul(a))
}

pub fn trace(a: &FinitaryOp) -> Rational {
    a.entries()
        .filter(|((i, j), _)| i == j)
        .fold(Rational::zero(), |acc, (_, c)| acc + c)
}

/// Membership in `sl(inf) = ker tr`.
pub fn in_sl(a: &FinitaryOp) -> bool {
    trace(a).is_zero()
}

/// Dimension of the span of all `[E_ij, E_kl]` with indices in the window.
pub fn commutator_span_dim(n: Window) -> usize {
    let n = n.n();
    let units: Vec<FinitaryOp> = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| FinitaryOp::unit(i, j)))
        .collect();
    let mut span = EchelonBasis::new();
    for a in &units {
        for b in &units {
            let c = bracket(a, b);
            if !c.is_zero() {
                span.insert(c.as_sparse());
            }
        }
    }
    span.rank()
}

/// Whether the commutators of `gl_n` span exactly the traceless matrices:
/// every bracket is traceless and the span has dimension `n² - 1`.
pub fn commutator_span_check(n: Window) -> bool {
    let k = n.n();
    let traceless = (1..=k).all(|i| {
        (1..=k).all(|j| {
            (1..=k).all(|l| {
                (1..=k).all(|m| in_sl(&bracket(&FinitaryOp::unit(i, j), &FinitaryOp::unit(l, m))))
            })
        })
    });
    traceless && commutator_span_dim(n) == k * k - 1
}

/// The action on `V`: the matrix-vector product.
pub fn act_v(a: &FinitaryOp, v: &FinVec) -> FinVec {
    let mut out = FinVec::zero();
    for (&(i, j), c) in a.entries() {
        if let Some(x) = v.get(&j) {
            out.add_term(i, c * x);
        }
    }
    out
}

/// The action on `V_*`: `w ↦ -aᵗ w`.
pub fn act_vstar(a: &FinitaryOp, w: &FinVec) -> FinVec {
    let mut out = FinVec::zero();
    for (&(i, j), c) in a.entries() {
        if let Some(x) = w.get(&i) {
            out.add_term(j, -(c * x));
        }
    }
    out
}

/// The image `a*(f) = f ∘ a` of a functional under the dual map.
///
/// For finitary `a` this always lies in `V_*`: `(f ∘ a)(e_j) = sum_i f(e_i) a_ij`
/// is nonzero only for columns `j` that carry an entry.
pub fn dual_map_image(a: &FinitaryOp, f: &DualOracle) -> FinVec {
    let mut out = FinVec::zero();
    for (&(i, j), c) in a.entries() {
        out.add_term(j, f.entry(i) * c);
    }
    out
}

/// The module action on `V^*`, `a · f = -(f ∘ a)`. Restricted to `V_*` it
/// agrees with [`act_vstar`].
pub fn act_dual(a: &FinitaryOp, f: &DualOracle) -> FinVec {
    -&dual_map_image(a, f)
}

/// For `u ∈ V`, `w ∈ V_*` and an arbitrary functional `u*`, the image of
/// `u*` under the dual map of `u ⊗ w`, which is `⟨u, u*⟩ w`.
///
/// When `⟨u, w⟩ = 0` the operator `u ⊗ w` lies in `sl(inf)`, so every
/// nonzero submodule of `V^*` meets `V_*`. The module action itself is the
/// negative of this value (see [`act_dual`]).
pub fn socle_image(u: &FinVec, w: &FinVec, ustar: &DualOracle) -> FinVec {
    dual_map_image(&PureTensor::new(u.clone(), w.clone()).expand(), ustar)
}

/// Basis index of a mixed tensor: `p` slots in `V` then `q` slots in `V_*`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TensorKey {
    pub v: Vec<usize>,
    pub vstar: Vec<usize>,
}

/// An element of `V^{⊗p} ⊗ V_*^{⊗q}`, stored by its coefficients on the
/// basis tensors `e_{i1} ⊗ .. ⊗ e_{ip} ⊗ e^{j1} ⊗ .. ⊗ e^{jq}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorElement {
    p: usize,
    q: usize,
    coeffs: SparseVec<TensorKey>,
}

/// Default cap on `p + q` for generated tensor modules.
pub const DEFAULT_MAX_DEGREE: usize = 4;

impl TensorElement {
    pub fn zero(p: usize, q: usize) -> Self {
        TensorElement {
            p,
            q,
            coeffs: SparseVec::zero(),
        }
    }

    /// Expands `sum c · (v_1 ⊗ .. ⊗ v_p) ⊗ (w_1 ⊗ .. ⊗ w_q)` multilinearly.
    pub fn from_terms(
        p: usize,
        q: usize,
        terms: &[(Rational, Vec<FinVec>, Vec<FinVec>)],
    ) -> Result<Self> {
        let mut out = Self::zero(p, q);
        for (c, vs, ws) in terms {
            if vs.len() != p || ws.len() != q {
                return Err(Error::Precondition(format!(
                    "tensor term has {} + {} factors, expected {p} + {q}",
                    vs.len(),
                    ws.len()
                )));
            }
            let mut partial: Vec<(Vec<usize>, Rational)> = vec![(Vec::new(), c.clone())];
            for factor in vs.iter().chain(ws) {
                partial = partial
                    .into_iter()
                    .flat_map(|(idx, coeff)| {
                        factor.iter().map(move |(&i, x)| {
                            let mut idx = idx.clone();
                            idx.push(i);
                            (idx, &coeff * x)
                        })
                    })
                    .collect();
            }
            for (mut idx, coeff) in partial {
                let vstar = idx.split_off(p);
                out.coeffs.add_term(TensorKey { v: idx, vstar }, coeff);
            }
        }
        Ok(out)
    }

    pub fn basis(v: Vec<usize>, vstar: Vec<usize>) -> Self {
        TensorElement {
            p: v.len(),
            q: vstar.len(),
            coeffs: SparseVec::single(TensorKey { v, vstar }, Rational::one()),
        }
    }

    pub fn from_v(v: &FinVec) -> Self {
        Self::from_terms(1, 0, &[(Rational::one(), vec![v.clone()], vec![])])
            .expect("degree matches")
    }

    pub fn from_vstar(w: &FinVec) -> Self {
        Self::from_terms(0, 1, &[(Rational::one(), vec![], vec![w.clone()])])
            .expect("degree matches")
    }

    pub fn degree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn coeffs(&self) -> &SparseVec<TensorKey> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Largest basis index in any slot of any term.
    pub fn max_index(&self) -> usize {
        self.coeffs
            .keys()
            .flat_map(|k| k.v.iter().chain(&k.vstar))
            .copied()
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "tensor degrees differ");
        TensorElement {
            p: self.p,
            q: self.q,
            coeffs: &self.coeffs + &other.coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "tensor degrees differ");
        TensorElement {
            p: self.p,
            q: self.q,
            coeffs: &self.coeffs - &other.coeffs,
        }
    }
}

/// The derivation action on tensors: `a` acts on one slot at a time by
/// [`act_v`] or [`act_vstar`] and the results are summed.
pub fn act_tensor(a: &FinitaryOp, t: &TensorElement) -> TensorElement {
    let cols = a.by_col();
    let rows = a.by_row();
    let mut out = SparseVec::zero();
    for (key, c) in t.coeffs.iter() {
        for slot in 0..key.v.len() {
            for &(r, x) in cols.get(&key.v[slot]).into_iter().flatten() {
                let mut k = key.clone();
                k.v[slot] = r;
                out.add_term(k, c * x);
            }
        }
        for slot in 0..key.vstar.len() {
            for &(s, x) in rows.get(&key.vstar[slot]).into_iter().flatten() {
                let mut k = key.clone();
                k.vstar[slot] = s;
                out.add_term(k, -(c * x));
            }
        }
    }
    TensorElement {
        p: t.p,
        q: t.q,
        coeffs: out,
    }
}

/// Dimension of `span{m, a·m, a²·m, ...}`.
///
/// Iterates until `a^k·m` falls into the span of the earlier powers; returns
/// [`Error::CutoffReached`] if that has not happened after `cutoff` steps.
pub fn integrability_dim(a: &FinitaryOp, m: &TensorElement, cutoff: usize) -> Result<usize> {
    if cutoff == 0 {
        return Err(Error::Precondition("cutoff must be at least 1".into()));
    }
    let mut span = EchelonBasis::new();
    if !span.insert(m.coeffs()) {
        return Ok(0);
    }
    let mut x = m.clone();
    for _ in 0..cutoff {
        x = act_tensor(a, &x);
        if !span.insert(x.coeffs()) {
            return Ok(span.rank());
        }
    }
    Err(Error::CutoffReached {
        dim: span.rank(),
        cutoff,
    })
}

/// Evidence that `Ann(m)` has finite co-rank.
#[derive(Clone, Debug)]
pub struct AnnihilatorReport {
    /// Largest index in the support of `m`.
    pub support_bound: usize,
    /// `(span{e_1..e_N}, span{e^1..e^N})`.
    pub subsystem: Subsystem,
    /// Number of generators `E_ij`, `N < i, j <= probe`, that were applied.
    pub probed: usize,
}

/// Checks that every `E_ij` with `N < i, j <= probe` kills `m`, where `N` is
/// the largest index occurring in `m`. These generators span the algebra
/// attached to the perpendicular complements of the returned subsystem.
pub fn large_annihilator_check(m: &TensorElement, probe: Window) -> Result<AnnihilatorReport> {
    let bound = m.max_index();
    let mut probed = 0;
    for i in bound + 1..=probe.n() {
        for j in bound + 1..=probe.n() {
            probed += 1;
            if !act_tensor(&FinitaryOp::unit(i, j), m).is_zero() {
                return Err(Error::AnnihilationFailure { i, j });
            }
        }
    }
    let subsystem = Subsystem::new(
        &PairingSpec::StandardDual,
        (1..=bound).map(FinVec::basis).collect(),
        (1..=bound).map(FinVec::basis).collect(),
    )?;
    Ok(AnnihilatorReport {
        support_bound: bound,
        subsystem,
        probed,
    })
}
