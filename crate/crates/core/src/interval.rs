use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonempty interval of `Z_n`: `{start, start+1, ..., start+len-1} mod n`.
/// Wrap-around is allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    n: usize,
    start: usize,
    len: usize,
}

impl Interval {
    pub fn new(n: usize, start: usize, len: usize) -> Result<Self> {
        if n == 0 || start >= n || len == 0 || len > n {
            return Err(Error::InvalidArgument(format!(
                "interval start {start} len {len} invalid in Z_{n}"
            )));
        }
        Ok(Self { n, start, len })
    }

    pub fn full(n: usize) -> Self {
        Self {
            n,
            start: 0,
            len: n,
        }
    }

    /// `[0, len)`
    pub fn initial(n: usize, len: usize) -> Result<Self> {
        Self::new(n, 0, len)
    }

    /// The half-open range `[lo, hi)` of integers, `lo < hi <= n`.
    pub fn linear(n: usize, lo: usize, hi: usize) -> Result<Self> {
        if hi <= lo {
            return Err(Error::InvalidArgument(format!("empty range [{lo}, {hi})")));
        }
        Self::new(n, lo, hi - lo)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn wraps(&self) -> bool {
        self.start + self.len > self.n
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        let off = if x >= self.start {
            x - self.start
        } else {
            x + self.n - self.start
        };
        off < self.len
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).map(move |i| {
            let x = self.start + i;
            if x >= self.n {
                x - self.n
            } else {
                x
            }
        })
    }

    /// Indicator vector over `Z_n`.
    pub fn indicator(&self) -> Vec<bool> {
        let mut v = vec![false; self.n];
        for x in self.iter() {
            v[x] = true;
        }
        v
    }

    /// Cyclic shift by `k`.
    pub fn shifted(&self, k: usize) -> Self {
        Self {
            start: (self.start + k) % self.n,
            ..*self
        }
    }

    /// The complementary interval, `None` when `self` is all of `Z_n`.
    pub fn complement(&self) -> Option<Self> {
        if self.len == self.n {
            return None;
        }
        Some(Self {
            n: self.n,
            start: (self.start + self.len) % self.n,
            len: self.n - self.len,
        })
    }
}
