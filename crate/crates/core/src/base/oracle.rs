use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num::Zero;

use super::{FinVec, Rational};

/// An arbitrary element of `V^*`, given by its values `f(e_i)` on the basis.
///
/// Such a functional may have infinite support, so it is held as a total
/// function rather than a coefficient map. Elements of `V_*` embed through
/// [`DualOracle::from_vec`].
#[derive(Clone)]
pub struct DualOracle {
    entry: Arc<dyn Fn(usize) -> Rational + Send + Sync>,
    support_hint: Option<BTreeSet<usize>>,
}

impl DualOracle {
    pub fn new(entry: impl Fn(usize) -> Rational + Send + Sync + 'static) -> Self {
        DualOracle {
            entry: Arc::new(entry),
            support_hint: None,
        }
    }

    pub fn with_support_hint(mut self, hint: BTreeSet<usize>) -> Self {
        self.support_hint = Some(hint);
        self
    }

    pub fn from_vec(w: FinVec) -> Self {
        let hint = w.keys().copied().collect();
        DualOracle::new(move |i| w.coeff(&i)).with_support_hint(hint)
    }

    pub fn entry(&self, i: usize) -> Rational {
        (self.entry)(i)
    }

    pub fn support_hint(&self) -> Option<&BTreeSet<usize>> {
        self.support_hint.as_ref()
    }

    /// `f(v) = sum_{i in supp v} f(e_i) v_i`.
    pub fn apply(&self, v: &FinVec) -> Rational {
        apply_oracle(self, v)
    }
}

pub fn apply_oracle(f: &DualOracle, v: &FinVec) -> Rational {
    v.iter()
        .map(|(&i, c)| f.entry(i) * c)
        .fold(Rational::zero(), |acc, x| acc + x)
}

impl fmt::Debug for DualOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: Vec<String> = (1..=6)
            .map(|i| super::fmt_rational(&self.entry(i)))
            .collect();
        f.debug_struct("DualOracle")
            .field("head", &head)
            .field("support_hint", &self.support_hint)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::rat;

    #[test]
    fn oracle_examples() {
        let ones = DualOracle::new(|_| rat(1));
        assert_eq!(ones.apply(&FinVec::basis(5)), rat(1));
        assert_eq!(ones.apply(&FinVec::from_pairs(&[(1, 1), (2, -1)])), rat(0));
        let idx = DualOracle::new(|i| rat(i as i64));
        assert_eq!(idx.apply(&FinVec::from_pairs(&[(2, 3)])), rat(6));
    }
}
