//! Automorphisms of the Mackey algebra: the involution `τ(A) = -Aᵗ`,
//! conjugation by invertible row- and column-finite matrices, their
//! semidirect composition, twisted modules, and the classification of a
//! twist `V^h` as `V` or `V_*` by solving for an intertwiner.
//!
//! A presentation `(g, ε)` denotes `h(φ) = g · τ^ε(φ) · g⁻¹`.

use std::fmt;

use num::{One, Zero};

use crate::base::{FinVec, Rational, Window};
use crate::error::{Error, Result};
use crate::finitary::FinitaryOp;
use crate::linalg::{EchelonBasis, Matrix};
use crate::mackey::MackeyOp;

/// `g` together with a certified inverse.
///
/// Any such `g` is row- and column-finite, so its dual map preserves `V_*`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvertiblePair {
    g: MackeyOp,
    g_inv: MackeyOp,
}

impl InvertiblePair {
    pub fn new(g: MackeyOp, g_inv: MackeyOp) -> Result<Self> {
        let id = MackeyOp::identity();
        if g.mul(&g_inv) != id || g_inv.mul(&g) != id {
            return Err(Error::NotInverse);
        }
        Ok(InvertiblePair { g, g_inv })
    }

    pub fn identity() -> Self {
        InvertiblePair {
            g: MackeyOp::identity(),
            g_inv: MackeyOp::identity(),
        }
    }

    /// The permutation matrix sending `e_i` to `e_{perm[i-1]}` for
    /// `i <= perm.len()` and fixing every later basis vector.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let m = perm.len();
        let mut seen = vec![false; m];
        for &p in perm {
            if p == 0 || p > m || std::mem::replace(&mut seen[p - 1], true) {
                return Err(Error::Precondition(format!(
                    "{perm:?} is not a permutation of 1..={m}"
                )));
            }
        }
        let moved = FinitaryOp::from_entries(
            perm.iter()
                .enumerate()
                .map(|(i, &p)| ((p, i + 1), Rational::one())),
        );
        let g = MackeyOp::identity()
            .sub(&MackeyOp::from_finitary(&FinitaryOp::window_identity(m)))
            .add(&MackeyOp::from_finitary(&moved));
        let g_inv = g.transpose();
        InvertiblePair::new(g, g_inv)
    }

    pub fn g(&self) -> &MackeyOp {
        &self.g
    }

    pub fn g_inv(&self) -> &MackeyOp {
        &self.g_inv
    }

    pub fn inverse(&self) -> Self {
        InvertiblePair {
            g: self.g_inv.clone(),
            g_inv: self.g.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        InvertiblePair {
            g: self.g.mul(&other.g),
            g_inv: other.g_inv.mul(&self.g_inv),
        }
    }

    /// `σ(g) = (gᵗ)⁻¹ = (g⁻¹)ᵗ`, so that `τ ∘ ρ(g) = ρ(σ(g)) ∘ τ`.
    pub fn transpose_inverse(&self) -> Self {
        InvertiblePair {
            g: self.g_inv.transpose(),
            g_inv: self.g.transpose(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AutPresentation {
    pub g: InvertiblePair,
    pub eps: bool,
}

impl AutPresentation {
    pub fn identity() -> Self {
        AutPresentation {
            g: InvertiblePair::identity(),
            eps: false,
        }
    }

    pub fn tau_only() -> Self {
        AutPresentation {
            g: InvertiblePair::identity(),
            eps: true,
        }
    }

    pub fn conjugation(g: InvertiblePair) -> Self {
        AutPresentation { g, eps: false }
    }

    pub fn apply(&self, a: &MackeyOp) -> MackeyOp {
        apply_aut(self, a)
    }
}

/// The involution `A ↦ -Aᵗ`.
pub fn tau(a: &MackeyOp) -> MackeyOp {
    a.transpose().neg()
}

/// `g · τ^ε(a) · g⁻¹`.
pub fn apply_aut(h: &AutPresentation, a: &MackeyOp) -> MackeyOp {
    let inner = if h.eps { tau(a) } else { a.clone() };
    h.g.g.mul(&inner).mul(&h.g.g_inv)
}

/// The presentation of `h1 ∘ h2`: `(g1 · σ^{ε1}(g2), ε1 xor ε2)`.
pub fn compose_aut(h1: &AutPresentation, h2: &AutPresentation) -> AutPresentation {
    let g2 = if h1.eps {
        h2.g.transpose_inverse()
    } else {
        h2.g.clone()
    };
    AutPresentation {
        g: h1.g.mul(&g2),
        eps: h1.eps ^ h2.eps,
    }
}

/// The action of `a` on the twisted module `V^h`.
pub fn twist_act_v(h: &AutPresentation, a: &MackeyOp, v: &FinVec) -> FinVec {
    apply_aut(h, a).apply(v)
}

/// The action of `a` on `(V^inner)^outer`: `a` acts through `outer(a)` on
/// `V^inner`, hence through `inner(outer(a))` on `V`.
pub fn retwist_act_v(
    outer: &AutPresentation,
    inner: &AutPresentation,
    a: &MackeyOp,
    v: &FinVec,
) -> FinVec {
    twist_act_v(inner, &apply_aut(outer, a), v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistKind {
    /// `V^h ≅ V`.
    TypeV,
    /// `V^h ≅ V_*`.
    TypeVstar,
}

impl fmt::Display for TwistKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwistKind::TypeV => f.write_str("V"),
            TwistKind::TypeVstar => f.write_str("V*"),
        }
    }
}

/// The outcome of [`classify_twist`].
///
/// `rows[r-1]` is row `r` of the intertwiner `f`, for `r <= window`, over
/// columns `1..=width`. For [`TwistKind::TypeV`], `f · h(E_ij) = E_ij · f`
/// for all `i, j <= window`; for [`TwistKind::TypeVstar`] the same holds with
/// `h ∘ τ` in place of `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistClass {
    pub kind: TwistKind,
    pub rows: Vec<FinVec>,
    pub window: Window,
    pub width: usize,
}

impl TwistClass {
    /// The square block of `f` on the window.
    pub fn window_matrix(&self) -> Matrix {
        let n = self.window.n();
        Matrix::from_fn(n, n, |r, k| self.rows[r].coeff(&(k + 1)))
    }

    /// Re-checks the intertwiner equations on the final window.
    pub fn verify(&self, h: &dyn Fn(&MackeyOp) -> MackeyOp) -> bool {
        let n = self.window.n();
        let images = match generator_images(h, n, &all_generators(n)) {
            Ok(images) => images,
            Err(_) => return false,
        };
        match self.kind {
            TwistKind::TypeV => intertwines(&self.rows, &images),
            TwistKind::TypeVstar => {
                let twisted = |a: &MackeyOp| h(&tau(a));
                match generator_images(&twisted, n, &all_generators(n)) {
                    Ok(images) => intertwines(&self.rows, &images),
                    Err(_) => false,
                }
            }
        }
    }
}

/// Rounds grow the window by this many indices.
pub const WINDOW_STEP: usize = 5;

type Images = Vec<((usize, usize), FinitaryOp)>;

fn all_generators(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).collect()
}

/// `E_i1` and `E_ii`: enough to pin an intertwiner down to a scalar.
fn sparse_generators(n: usize) -> Vec<(usize, usize)> {
    let mut gens: Vec<(usize, usize)> = (1..=n).map(|i| (i, 1)).collect();
    gens.extend((2..=n).map(|i| (i, i)));
    gens
}

fn generator_images(
    h: &dyn Fn(&MackeyOp) -> MackeyOp,
    _n: usize,
    gens: &[(usize, usize)],
) -> Result<Images> {
    gens.iter()
        .map(|&(i, j)| {
            h(&MackeyOp::unit(i, j))
                .to_finitary()
                .map(|img| ((i, j), img))
                .ok_or(Error::NotFinitaryImage { i, j })
        })
        .collect()
}

/// The row vector `x · H`.
fn row_times(x: &FinVec, h: &FinitaryOp) -> FinVec {
    let mut out = FinVec::zero();
    for (&(k, s), c) in h.entries() {
        if let Some(a) = x.get(&k) {
            out.add_term(s, a * c);
        }
    }
    out
}

fn intertwines(rows: &[FinVec], images: &Images) -> bool {
    images.iter().all(|((i, j), img)| {
        rows.iter().enumerate().all(|(r0, f_r)| {
            let lhs = row_times(f_r, img);
            if r0 + 1 == *i {
                lhs == rows[j - 1]
            } else {
                lhs.is_zero()
            }
        })
    })
}

enum WindowSolve {
    /// Only `f = 0` solves the window system, so no intertwiner exists.
    Trivial,
    /// The solution is not yet pinned down to an invertible line.
    Undetermined,
    Unique(Vec<FinVec>, usize),
}

/// Solves `f · h(E_ij) = E_ij · f` for the rows `1..=n` of `f`.
///
/// Only entries that involve columns `1..=N` of `f` are used, where `N`
/// bounds the supports of the images `h(E_ij)`; each such equation holds
/// for the true intertwiner, so its restriction is always a solution.
fn solve_window(h: &dyn Fn(&MackeyOp) -> MackeyOp, n: usize) -> Result<WindowSolve> {
    let mut result = solve_with(h, n, &sparse_generators(n))?;
    if matches!(result, WindowSolve::Undetermined) {
        result = solve_with(h, n, &all_generators(n))?;
    }
    if let WindowSolve::Unique(rows, width) = &result {
        if !intertwines(rows, &generator_images(h, n, &all_generators(n))?) {
            return Ok(WindowSolve::Trivial);
        }
        let mut span = EchelonBasis::new();
        if !rows.iter().all(|r| span.insert(r)) {
            return Ok(WindowSolve::Undetermined);
        }
        let _ = width;
    }
    Ok(result)
}

fn solve_with(
    h: &dyn Fn(&MackeyOp) -> MackeyOp,
    n: usize,
    gens: &[(usize, usize)],
) -> Result<WindowSolve> {
    let images = generator_images(h, n, gens)?;
    let width = images
        .iter()
        .map(|(_, img)| img.max_index())
        .chain(std::iter::once(n))
        .max()
        .unwrap_or(n);
    let mut system: EchelonBasis<(usize, usize)> = EchelonBasis::new();
    for ((i, j), img) in &images {
        let cols = img.by_col();
        for r in 1..=n {
            let mut eqs: std::collections::BTreeMap<usize, crate::base::SparseVec<(usize, usize)>> =
                std::collections::BTreeMap::new();
            for (&s, entries) in &cols {
                let eq = eqs.entry(s).or_default();
                for &(k, c) in entries {
                    eq.add_term((r, k), c.clone());
                }
            }
            if r == *i {
                for s in 1..=width {
                    eqs.entry(s)
                        .or_default()
                        .add_term((*j, s), -Rational::one());
                }
            }
            for eq in eqs.values().filter(|e| !e.is_zero()) {
                system.insert(eq);
            }
        }
    }
    let universe: Vec<(usize, usize)> = (1..=n)
        .flat_map(|r| (1..=width).map(move |k| (r, k)))
        .collect();
    let kernel = system.nullspace(&universe);
    Ok(match kernel.len() {
        0 => WindowSolve::Trivial,
        1 => {
            let mut rows = vec![FinVec::zero(); n];
            for (&(r, k), c) in kernel[0].iter() {
                rows[r - 1].add_term(k, c.clone());
            }
            WindowSolve::Unique(normalize(rows, n), width)
        }
        _ => WindowSolve::Undetermined,
    })
}

/// Scales so that the first nonzero entry of the window block, scanning
/// column by column, is 1.
fn normalize(rows: Vec<FinVec>, n: usize) -> Vec<FinVec> {
    let pivot = (1..=n)
        .flat_map(|k| rows.iter().filter_map(move |row| row.get(&k).cloned()))
        .next()
        .or_else(|| {
            rows.iter()
                .find_map(|row| row.leading().map(|(_, c)| c.clone()))
        });
    match pivot {
        Some(p) if !p.is_zero() => {
            let s = p.recip();
            rows.iter().map(|r| r.scale(&s)).collect()
        }
        _ => rows,
    }
}

/// Whether `small` is proportional to the first `small.len()` rows of `large`.
fn agrees(small: &[FinVec], large: &[FinVec]) -> bool {
    let Some((k, a)) = small.iter().find_map(|r| r.leading()) else {
        return false;
    };
    let row = small
        .iter()
        .position(|r| !r.is_zero())
        .expect("nonzero row exists");
    let b = large[row].coeff(k);
    if b.is_zero() {
        return false;
    }
    let ratio = b / a;
    small.iter().zip(large).all(|(s, l)| s.scale(&ratio) == *l)
}

fn classify_as(
    h: &dyn Fn(&MackeyOp) -> MackeyOp,
    start: usize,
    max: usize,
) -> Result<Option<TwistClass>> {
    let mut prev: Option<Vec<FinVec>> = None;
    let mut n = start;
    while n <= max {
        match solve_window(h, n)? {
            WindowSolve::Trivial => return Ok(None),
            WindowSolve::Undetermined => prev = None,
            WindowSolve::Unique(rows, width) => {
                if prev.as_deref().is_some_and(|p| agrees(p, &rows)) {
                    return Ok(Some(TwistClass {
                        kind: TwistKind::TypeV,
                        rows,
                        window: Window::new(n)?,
                        width,
                    }));
                }
                prev = Some(rows);
            }
        }
        n += WINDOW_STEP;
    }
    Ok(None)
}

/// Decides whether `V^h ≅ V` or `V^h ≅ V_*` by solving for an intertwiner.
///
/// `h` is only evaluated on matrix units. For `V`, the system
/// `f · h(E_ij) = E_ij · f` is solved on growing windows; it is accepted
/// once two consecutive windows give a unique (up to scale) solution of full
/// rank that agree on their overlap. Otherwise the same is tried with `h ∘ τ`,
/// which yields `V_*`.
pub fn classify_twist(
    h: &dyn Fn(&MackeyOp) -> MackeyOp,
    start_window: Window,
    max_window: Window,
) -> Result<TwistClass> {
    let start = start_window.n().max(2);
    let max = max_window.n();
    if let Some(c) = classify_as(h, start, max)? {
        return Ok(c);
    }
    let twisted = |a: &MackeyOp| h(&tau(a));
    if let Some(mut c) = classify_as(&twisted, start, max)? {
        c.kind = TwistKind::TypeVstar;
        return Ok(c);
    }
    Err(Error::Inconclusive { max_window: max })
}

pub fn classify_presentation(
    h: &AutPresentation,
    start_window: Window,
    max_window: Window,
) -> Result<TwistClass> {
    classify_twist(&|a| apply_aut(h, a), start_window, max_window)
}
