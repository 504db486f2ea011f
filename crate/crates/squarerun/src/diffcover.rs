//! Difference-cover sampling: `D(t)` covers `{1..n}` with O(n/sqrt(t))
//! members and a constant-time offset `h(i, j)` landing both arguments in
//! the cover.

use crate::oracle::Pos;
use crate::Error;

pub struct Cover {
    n: usize,
    t: usize,
    r: usize,
    members: Vec<Pos>,
}

/// Builds the cover `D(t) = { i : i mod r = 0 or i mod r^2 in {0..r-1} }`
/// with `r = floor(sqrt(t))`. Requires `4 <= t <= n` so that `r >= 2`.
pub fn build_cover(n: usize, t: usize) -> Result<Cover, Error> {
    if t < 4 {
        return Err(Error::param("t", "cover parameter must be at least 4"));
    }
    if t > n {
        return Err(Error::param("t", format!("cover parameter {t} exceeds n = {n}")));
    }
    let r = isqrt(t);
    // merge the two arithmetic families in sorted order
    let mut members = Vec::new();
    let mut next_mult = r; // multiples of r
    let mut block = 0usize; // i mod r^2 in {0..r-1}: r^2*k, r^2*k + 1 .. r^2*k + r - 1
    let mut in_block = 1usize; // position 0 of block 0 would be 0, skip to 1
    loop {
        let block_pos = block * r * r + in_block;
        let cand = next_mult.min(block_pos);
        if cand > n {
            break;
        }
        if members.last() != Some(&cand) {
            members.push(cand);
        }
        if cand == next_mult {
            next_mult += r;
        }
        if cand == block_pos {
            in_block += 1;
            if in_block > r - 1 {
                block += 1;
                in_block = 0;
            }
        }
    }
    Ok(Cover { n, t, r, members })
}

impl Cover {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn members(&self) -> &[Pos] {
        &self.members
    }

    pub fn contains(&self, i: Pos) -> bool {
        i >= 1 && i <= self.n && (i % self.r == 0 || i % (self.r * self.r) < self.r)
    }

    /// Members within `[lo, hi]`.
    pub fn members_in(&self, lo: Pos, hi: Pos) -> &[Pos] {
        let a = self.members.partition_point(|&m| m < lo);
        let b = self.members.partition_point(|&m| m <= hi);
        &self.members[a..b]
    }

    /// Offset `h` with `0 <= h < t` and `i + h, j + h` both in the cover.
    /// Requires `i, j <= n - t + 1`.
    pub fn h(&self, i: Pos, j: Pos) -> usize {
        assert!(
            i >= 1 && j >= 1 && i <= self.n - self.t + 1 && j <= self.n - self.t + 1,
            "h arguments out of range"
        );
        let r = self.r;
        let a = (r - i % r) % r;
        let b = (r - ((j + a) / r) % r) % r;
        let h = a + b * r;
        debug_assert!(h < self.t);
        debug_assert!(self.contains(i + h) && self.contains(j + h));
        h
    }
}

fn isqrt(t: usize) -> usize {
    let mut x = (t as f64).sqrt() as usize;
    while (x + 1) * (x + 1) <= t {
        x += 1;
    }
    while x * x > t {
        x -= 1;
    }
    x
}
