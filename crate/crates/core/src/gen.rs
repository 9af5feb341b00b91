//! Seeded random inputs for the property suites.
//!
//! Every generator draws from a caller-supplied RNG, so a `(seed, window)`
//! pair reproduces the same sequence of cases.

use num::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aut::{AutPresentation, InvertiblePair};
use crate::base::{frac, rat, FinVec, Rational};
use crate::finitary::{FinitaryOp, TensorElement, TensorKey};
use crate::linalg::Matrix;
use crate::mackey::{DiagonalSeq, MackeyOp};
use crate::pairing::PairingSpec;

pub type CaseRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CaseRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| <= 5` and `1 <= q <= 3`.
pub fn rational(rng: &mut impl Rng) -> Rational {
    frac(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

pub fn nonzero_rational(rng: &mut impl Rng) -> Rational {
    loop {
        let r = rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// A unit-ish scalar with a small exact inverse.
fn invertible_scalar(rng: &mut impl Rng) -> Rational {
    let choices = [rat(1), rat(-1), rat(2), rat(-2), frac(1, 2), frac(-1, 3)];
    choices.choose(rng).expect("nonempty").clone()
}

/// At most `terms` entries, all indices in `1..=window`.
pub fn finvec(rng: &mut impl Rng, window: usize, terms: usize) -> FinVec {
    let k = rng.gen_range(0..=terms);
    FinVec::from_terms((0..k).map(|_| (rng.gen_range(1..=window), rational(rng))))
}

pub fn nonzero_finvec(rng: &mut impl Rng, window: usize, terms: usize) -> FinVec {
    loop {
        let v = finvec(rng, window, terms.max(1));
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn finitary(rng: &mut impl Rng, window: usize, terms: usize) -> FinitaryOp {
    let k = rng.gen_range(0..=terms);
    FinitaryOp::from_entries((0..k).map(|_| {
        (
            (rng.gen_range(1..=window), rng.gen_range(1..=window)),
            rational(rng),
        )
    }))
}

/// At most `max_diags` diagonals with offsets in `-4..=4` and prefixes of
/// length at most `max_prefix`; about half of the tails are zero.
pub fn mackey(rng: &mut impl Rng, max_diags: usize, max_prefix: usize) -> MackeyOp {
    let mut offsets: Vec<i64> = (-4..=4).collect();
    offsets.shuffle(rng);
    let k = rng.gen_range(0..=max_diags);
    MackeyOp::from_diags(offsets.into_iter().take(k).map(|d| {
        let len = rng.gen_range(0..=max_prefix);
        let prefix = (0..len).map(|_| rational(rng)).collect();
        let tail = if rng.gen_bool(0.5) {
            Rational::zero()
        } else {
            rational(rng)
        };
        (d, DiagonalSeq::new(prefix, tail))
    }))
}

/// A Mackey operator that is not a scalar multiple of the identity.
pub fn non_scalar_mackey(rng: &mut impl Rng, max_diags: usize, max_prefix: usize) -> MackeyOp {
    loop {
        let a = mackey(rng, max_diags, max_prefix);
        if a.as_scalar().is_none() {
            return a;
        }
    }
}

/// A sum of at most `terms` basis tensors of degree `(p, q)`.
pub fn tensor(
    rng: &mut impl Rng,
    p: usize,
    q: usize,
    window: usize,
    terms: usize,
) -> TensorElement {
    let k = rng.gen_range(1..=terms.max(1));
    (0..k).fold(TensorElement::zero(p, q), |acc, _| {
        let key = TensorKey {
            v: (0..p).map(|_| rng.gen_range(1..=window)).collect(),
            vstar: (0..q).map(|_| rng.gen_range(1..=window)).collect(),
        };
        let c = nonzero_rational(rng);
        let t = TensorElement::from_terms(
            p,
            q,
            &[(
                c,
                key.v.iter().map(|&i| FinVec::basis(i)).collect(),
                key.vstar.iter().map(|&j| FinVec::basis(j)).collect(),
            )],
        )
        .expect("degree matches");
        acc.add(&t)
    })
}

/// A random permutation of `1..=m`, extended by the identity.
pub fn permutation_pair(rng: &mut impl Rng, m: usize) -> InvertiblePair {
    let mut perm: Vec<usize> = (1..=m).collect();
    perm.shuffle(rng);
    InvertiblePair::permutation(&perm).expect("shuffled range is a permutation")
}

/// `I + N` with `N` strictly upper triangular, supported on `1..=m` and
/// within `band` of the diagonal. The inverse is the finite Neumann series.
pub fn unitriangular_pair(rng: &mut impl Rng, m: usize, band: usize) -> InvertiblePair {
    let n = FinitaryOp::from_entries(
        (1..=m)
            .flat_map(|i| (i + 1..=(i + band).min(m)).map(move |j| (i, j)))
            .map(|ij| (ij, rat(rng.gen_range(-2..=2)))),
    );
    let minus_n = n.scale(&-Rational::one());
    let mut inv = FinitaryOp::zero();
    let mut power = minus_n.clone();
    while !power.is_zero() {
        inv = inv.add(&power);
        power = power.mul(&minus_n);
    }
    let id = MackeyOp::identity();
    InvertiblePair::new(
        id.add(&MackeyOp::from_finitary(&n)),
        id.add(&MackeyOp::from_finitary(&inv)),
    )
    .expect("Neumann series inverts I + N")
}

/// A diagonal operator with nonzero prefix of length `m` and nonzero tail.
pub fn diagonal_pair(rng: &mut impl Rng, m: usize) -> InvertiblePair {
    let prefix: Vec<Rational> = (0..m).map(|_| invertible_scalar(rng)).collect();
    let tail = invertible_scalar(rng);
    let inv_prefix = prefix.iter().map(|c| c.recip()).collect();
    InvertiblePair::new(
        MackeyOp::diagonal(prefix, tail.clone()),
        MackeyOp::diagonal(inv_prefix, tail.recip()),
    )
    .expect("entrywise reciprocal inverts a diagonal")
}

/// A banded invertible pair: a permutation, a unit-triangular band matrix,
/// or a product `P · D · (I + N)` of all three kinds.
pub fn invertible_pair(rng: &mut impl Rng) -> InvertiblePair {
    let m = rng.gen_range(2..=5);
    match rng.gen_range(0..3) {
        0 => permutation_pair(rng, m),
        1 => unitriangular_pair(rng, m, 2),
        _ => {
            let p = permutation_pair(rng, m);
            let d = diagonal_pair(rng, m);
            let u = unitriangular_pair(rng, m, 2);
            p.mul(&d).mul(&u)
        }
    }
}

pub fn presentation(rng: &mut impl Rng, eps: bool) -> AutPresentation {
    AutPresentation {
        g: invertible_pair(rng),
        eps,
    }
}

/// An exactly invertible `n × n` integer matrix with entries in `-2..=2`.
pub fn invertible_matrix(rng: &mut impl Rng, n: usize) -> Matrix {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| rat(rng.gen_range(-2..=2)));
        if m.is_invertible() {
            return m;
        }
    }
}

/// The pairing whose matrix is `block` on `1..=n` and the identity beyond.
pub fn padded_pairing(block: &Matrix) -> PairingSpec {
    let n = block.rows();
    let entries = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| ((i + 1, j + 1), block.get(i, j).clone()));
    let identity_tail =
        MackeyOp::identity().sub(&MackeyOp::from_finitary(&FinitaryOp::window_identity(n)));
    PairingSpec::Mackey(
        identity_tail.add(&MackeyOp::from_finitary(&FinitaryOp::from_entries(entries))),
    )
}

pub fn window_pairing(rng: &mut impl Rng, n: usize) -> PairingSpec {
    padded_pairing(&invertible_matrix(rng, n))
}
