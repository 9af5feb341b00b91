use crate::error::{Error, Result};

/// The index block `1..=n` on which truncation-level checks run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Window(usize);

impl Window {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidWindow { got: n, min: 1 });
        }
        Ok(Window(n))
    }

    pub fn n(self) -> usize {
        self.0
    }

    pub fn indices(self) -> std::ops::RangeInclusive<usize> {
        1..=self.0
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=self.0).contains(&i)
    }

    pub fn grow(self, by: usize) -> Self {
        Window(self.0 + by)
    }
}
