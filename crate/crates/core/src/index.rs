//! Index sets of the orthonormal systems and their storage order.
//!
//! `Naturals(N)` is `0..=N` in the natural order. `Integers(N)` is
//! `-N..=N` stored as `0, 1, -1, 2, -2, ...`, so position `2k - 1` holds `k`
//! and position `2k` holds `-k`.

/// A finite window of `N` or `Z` with its storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexSet {
    /// Indices `0..=n_max`.
    Naturals(usize),
    /// Indices `-n_max..=n_max` in the interleaved order.
    Integers(usize),
}

impl IndexSet {
    pub fn n_max(&self) -> usize {
        match *self {
            IndexSet::Naturals(n) | IndexSet::Integers(n) => n,
        }
    }

    /// Number of stored indices.
    pub fn size(&self) -> usize {
        match *self {
            IndexSet::Naturals(n) => n + 1,
            IndexSet::Integers(n) => 2 * n + 1,
        }
    }

    pub fn is_integers(&self) -> bool {
        matches!(self, IndexSet::Integers(_))
    }

    /// The index stored at `pos`.
    pub fn index_at(&self, pos: usize) -> i64 {
        match self {
            IndexSet::Naturals(_) => pos as i64,
            IndexSet::Integers(_) => {
                let k = pos.div_ceil(2) as i64;
                if pos % 2 == 1 {
                    k
                } else {
                    -k
                }
            }
        }
    }

    /// Storage position of `index`, if it lies in the window.
    pub fn position(&self, index: i64) -> Option<usize> {
        let n = self.n_max() as i64;
        match self {
            IndexSet::Naturals(_) => (0..=n).contains(&index).then_some(index as usize),
            IndexSet::Integers(_) => {
                if index.abs() > n {
                    None
                } else if index > 0 {
                    Some(2 * index as usize - 1)
                } else {
                    Some(2 * (-index) as usize)
                }
            }
        }
    }

    /// Indices in storage order.
    pub fn indices(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.size()).map(move |p| self.index_at(p))
    }

    /// The same kind of window with a different extent.
    pub fn with_n_max(&self, n_max: usize) -> Self {
        match self {
            IndexSet::Naturals(_) => IndexSet::Naturals(n_max),
            IndexSet::Integers(_) => IndexSet::Integers(n_max),
        }
    }

    /// Whether `index` lies in the inner half `|index| <= n_max / 2`.
    pub fn in_inner_half(&self, index: i64) -> bool {
        index.unsigned_abs() as usize <= self.n_max() / 2
    }
}
