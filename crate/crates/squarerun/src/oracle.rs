//! Equality-only access to strings.
//!
//! [`EqString`] is the single gate through which every algorithm in this
//! crate reaches the input symbols: an equality test `eq(i, j)` on 1-based
//! positions. Each call is counted, and positive answers are memoized in a
//! union-find over the positions, so re-asking a pair (or anything implied
//! by transitivity) costs nothing. The split into `negative`,
//! `positive_merging` and `positive_repeat` buckets makes the measured
//! counts meaningful: `negative + positive_merging` is the number of
//! comparisons that actually reached the underlying oracle, and
//! `positive_merging <= n - 1` over the lifetime of one string.

use crate::Error;

/// 1-based position into an [`EqString`].
pub type Pos = usize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ComparisonStats {
    pub total: u64,
    pub negative: u64,
    pub positive_merging: u64,
    pub positive_repeat: u64,
}

impl ComparisonStats {
    /// Comparisons that reached the underlying oracle: negative answers plus
    /// component-merging positive answers. Repeated positives are free.
    pub fn oracle_calls(&self) -> u64 {
        self.negative + self.positive_merging
    }
}

/// Backing store answering raw symbol equality. Implemented by concrete
/// token sequences and by the adversaries.
pub trait SymbolOracle: Send {
    fn len(&self) -> usize;
    fn symbols_equal(&mut self, i: Pos, j: Pos) -> bool;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

enum Backing {
    Tokens(Vec<u64>),
    External(Box<dyn SymbolOracle>),
}

pub struct EqString {
    n: usize,
    backing: Backing,
    memo: UnionFind,
    memo_enabled: bool,
    stats: ComparisonStats,
}

impl EqString {
    /// Wraps a concrete token sequence. Counters start at zero.
    pub fn from_symbols(tokens: &[u64]) -> Result<Self, Error> {
        if tokens.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Self::new(tokens.len(), Backing::Tokens(tokens.to_vec())))
    }

    /// Wraps an external oracle (typically an adversary).
    pub fn from_oracle(oracle: Box<dyn SymbolOracle>) -> Result<Self, Error> {
        let n = oracle.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(Self::new(n, Backing::External(oracle)))
    }

    fn new(n: usize, backing: Backing) -> Self {
        EqString {
            n,
            backing,
            memo: UnionFind::new(n),
            memo_enabled: true,
            stats: ComparisonStats::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false // constructors reject empty inputs
    }

    /// Tests whether the symbols at positions `i` and `j` are equal.
    ///
    /// `i == j` short-circuits, and pairs already known equal through the
    /// memo are answered without consulting the backing oracle; both are
    /// counted as `positive_repeat`. Panics if a position is out of range.
    pub fn eq(&mut self, i: Pos, j: Pos) -> bool {
        assert!(
            (1..=self.n).contains(&i) && (1..=self.n).contains(&j),
            "position out of range: eq({i}, {j}) on length {}",
            self.n
        );
        self.stats.total += 1;
        if i == j {
            self.stats.positive_repeat += 1;
            return true;
        }
        if self.memo_enabled && self.memo.same(i - 1, j - 1) {
            self.stats.positive_repeat += 1;
            return true;
        }
        let equal = match &mut self.backing {
            Backing::Tokens(t) => t[i - 1] == t[j - 1],
            Backing::External(o) => o.symbols_equal(i, j),
        };
        if equal {
            self.stats.positive_merging += 1;
            if self.memo_enabled {
                self.memo.union(i - 1, j - 1);
            }
        } else {
            self.stats.negative += 1;
        }
        equal
    }

    pub fn stats(&self) -> ComparisonStats {
        self.stats
    }

    /// Number of distinct tokens, for reporting. `None` for external oracles.
    /// This inspects the backing directly and performs no counted comparisons.
    pub fn distinct_symbols(&self) -> Option<usize> {
        match &self.backing {
            Backing::Tokens(t) => {
                let mut seen: Vec<u64> = t.clone();
                seen.sort_unstable();
                seen.dedup();
                Some(seen.len())
            }
            Backing::External(_) => None,
        }
    }

    /// Turns the union-find memo off. Counters then attribute every positive
    /// answer to `positive_merging`; boolean answers are unchanged for
    /// concrete token strings. Test instrumentation only.
    pub fn disable_memo(&mut self) {
        self.memo_enabled = false;
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]]; // path halving
            x = self.parent[x];
        }
        x
    }

    fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}
