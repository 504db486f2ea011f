//! Comparison-based building blocks: LCE, prefix tables, the crossing tests
//! for squares and boundary runs, their divide-and-conquer drivers, and the
//! quadratic reference oracles used for validation.
//!
//! The crossing tests are built on Z-arrays computed over *virtual texts*:
//! concatenations of (possibly reversed) fragments of the input with unique
//! separator symbols. Separator comparisons are resolved by index arithmetic
//! and never reach the oracle, so only genuine symbol comparisons are
//! counted.

use crate::oracle::{EqString, Pos};

/// Maximal repetition `(s, e, p)`: `p` is the smallest period of `T[s..e]`,
/// `2p <= e - s + 1`, and the fragment extends neither left nor right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Run {
    pub s: Pos,
    pub e: Pos,
    pub p: usize,
}

/// A square `T[s..s+2*half)` with `T[s..s+half) = T[s+half..s+2*half)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Square {
    pub s: Pos,
    pub half: usize,
}

/// Nonempty inclusive range of positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: Pos,
    pub end: Pos,
}

impl Span {
    pub fn new(start: Pos, end: Pos) -> Self {
        assert!(start >= 1 && start <= end, "bad span [{start}, {end}]");
        Span { start, end }
    }

    pub fn try_new(start: Pos, end: Pos) -> Option<Self> {
        (start >= 1 && start <= end).then_some(Span { start, end })
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: Pos) -> bool {
        self.start <= p && p <= self.end
    }
}

/// Longest common extension of the suffixes at `i` and `j`.
pub fn lce(s: &mut EqString, i: Pos, j: Pos) -> usize {
    let n = s.len();
    assert!(i >= 1 && i <= n && j >= 1 && j <= n, "lce out of range");
    lce_capped(s, i, j, n)
}

/// LCE with both scans confined to positions `<= cap_end`. At most one
/// negative comparison; positives are amortized by the oracle memo.
pub(crate) fn lce_capped(s: &mut EqString, i: Pos, j: Pos, cap_end: Pos) -> usize {
    if i == j {
        return cap_end + 1 - i;
    }
    let mut k = 0;
    while i + k <= cap_end && j + k <= cap_end && s.eq(i + k, j + k) {
        k += 1;
    }
    k
}

#[derive(Clone, Copy)]
enum VSym {
    Chr(Pos),
    Sep(u32),
}

/// A concatenation of oriented input fragments and unique separators,
/// addressable for equality tests.
pub(crate) struct VirtualText {
    syms: Vec<VSym>,
    next_sep: u32,
}

impl VirtualText {
    pub fn new() -> Self {
        VirtualText {
            syms: Vec::new(),
            next_sep: 0,
        }
    }

    pub fn push_fwd(&mut self, span: Span) {
        self.syms.extend((span.start..=span.end).map(VSym::Chr));
    }

    pub fn push_rev(&mut self, span: Span) {
        self.syms.extend((span.start..=span.end).rev().map(VSym::Chr));
    }

    pub fn push_sep(&mut self) {
        self.syms.push(VSym::Sep(self.next_sep));
        self.next_sep += 1;
    }

    pub fn len(&self) -> usize {
        self.syms.len()
    }

    fn eq_at(&self, s: &mut EqString, a: usize, b: usize) -> bool {
        match (self.syms[a], self.syms[b]) {
            (VSym::Chr(p), VSym::Chr(q)) => s.eq(p, q),
            (VSym::Sep(x), VSym::Sep(y)) => x == y,
            _ => false,
        }
    }
}

/// Z-array: `z[0] = len`, `z[i]` = length of the longest common prefix of
/// `v[i..]` and `v`. O(len) comparisons.
pub(crate) fn z_array(s: &mut EqString, v: &VirtualText) -> Vec<usize> {
    z_array_prefix(s, v, v.len())
}

/// Z-values for indices `[0, upto)` only; extensions may run past `upto`,
/// so the computed entries equal the full Z-array's. Skipping the tail
/// skips its comparisons.
pub(crate) fn z_array_prefix(s: &mut EqString, v: &VirtualText, upto: usize) -> Vec<usize> {
    let n = v.len();
    let stop = upto.min(n);
    let mut z = vec![0usize; stop];
    if n == 0 || stop == 0 {
        return z;
    }
    z[0] = n;
    let (mut l, mut r) = (0usize, 0usize);
    for i in 1..stop {
        let mut k = if i < r { z[i - l].min(r - i) } else { 0 };
        while i + k < n && v.eq_at(s, k, i + k) {
            k += 1;
        }
        z[i] = k;
        if i + k > r {
            l = i;
            r = i + k;
        }
    }
    z
}

/// Position `i` of the range maps to the length of the longest prefix of the
/// range that starts there (`table[0] = len`).
pub fn prefix_table(s: &mut EqString, range: Span) -> Vec<usize> {
    let mut v = VirtualText::new();
    v.push_fwd(range);
    z_array(s, &v)
}

#[derive(Clone, Copy)]
struct Seg {
    span: Span,
    rev: bool,
}

impl Seg {
    fn len(&self) -> usize {
        self.span.len()
    }
}

/// For `p = 1..=|X|`: `pref[p]` = LCP of `X[|X|-p+1..] . Y` with `Y`, and
/// `suf[p]` = longest common suffix of `X[1..|X|-p]` and `X`.
fn pass_tables(s: &mut EqString, xseg: Seg, yseg: Seg) -> (Vec<usize>, Vec<usize>) {
    let (xl, yl) = (xseg.len(), yseg.len());
    let push = |v: &mut VirtualText, seg: Seg| {
        if seg.rev {
            v.push_rev(seg.span)
        } else {
            v.push_fwd(seg.span)
        }
    };
    let push_flipped = |v: &mut VirtualText, seg: Seg| {
        if seg.rev {
            v.push_fwd(seg.span)
        } else {
            v.push_rev(seg.span)
        }
    };

    // prefix table of Y # X Y; only the X-part entries are read, the
    // trailing Y exists to extend matches
    let mut v1 = VirtualText::new();
    push(&mut v1, yseg);
    v1.push_sep();
    push(&mut v1, xseg);
    push(&mut v1, yseg);
    let z1 = z_array_prefix(s, &v1, yl + 1 + xl);

    // Z-array of reverse(X)
    let mut v2 = VirtualText::new();
    push_flipped(&mut v2, xseg);
    let z2 = z_array(s, &v2);

    let mut pref = vec![0usize; xl + 1];
    let mut suf = vec![0usize; xl + 1];
    for p in 1..=xl {
        pref[p] = z1[yl + 1 + (xl - p)];
        suf[p] = if p < xl { z2[p] } else { 0 };
    }
    (pref, suf)
}

/// Some square of `xy` that is fully contained in neither `x` nor `y`, if one
/// exists. The two ranges must be adjacent. O(|x|+|y|) comparisons.
pub fn crossing_square(s: &mut EqString, x: Span, y: Span) -> Option<Square> {
    assert_eq!(x.end + 1, y.start, "ranges must be adjacent");
    crossing_pass(s, x, y, false).or_else(|| crossing_pass(s, x, y, true))
}

fn crossing_pass(s: &mut EqString, x: Span, y: Span, mirrored: bool) -> Option<Square> {
    let total = x.len() + y.len();
    let (xseg, yseg) = if mirrored {
        (Seg { span: y, rev: true }, Seg { span: x, rev: true })
    } else {
        (Seg { span: x, rev: false }, Seg { span: y, rev: false })
    };
    let xl = xseg.len() as i64;
    let (pref, suf) = pass_tables(s, xseg, yseg);
    for p in 1..=xseg.len() {
        if pref[p] + suf[p] < p {
            continue;
        }
        let pi = p as i64;
        let a = xl - pi + 1 - suf[p] as i64;
        let b = xl + pref[p] as i64;
        // a 2p-window inside [a, b] spanning the X|Y boundary
        let s_lo = a.max(xl - 2 * pi + 2);
        let s_hi = (b - 2 * pi + 1).min(xl);
        if s_lo <= s_hi {
            let local = if mirrored {
                total as i64 - s_lo - 2 * pi + 2
            } else {
                s_lo
            };
            return Some(Square {
                s: x.start - 1 + local as usize,
                half: p,
            });
        }
    }
    None
}

/// All runs of `xy` (as a standalone string) that include the last character
/// of `x` or the first character of `y`. O(|x|+|y|) comparisons.
pub fn boundary_runs(s: &mut EqString, x: Span, y: Span) -> Vec<Run> {
    assert_eq!(x.end + 1, y.start, "ranges must be adjacent");
    let mut cands = Vec::new();
    boundary_pass(s, x, y, false, &mut cands);
    boundary_pass(s, x, y, true, &mut cands);
    // the same interval may be detected at several multiples of its smallest
    // period; keep the smallest
    cands.sort_unstable();
    cands.dedup_by(|b, a| a.s == b.s && a.e == b.e);
    cands
}

fn boundary_pass(s: &mut EqString, x: Span, y: Span, mirrored: bool, out: &mut Vec<Run>) {
    let total = x.len() + y.len();
    let xlen_orig = x.len();
    let (xseg, yseg) = if mirrored {
        (Seg { span: y, rev: true }, Seg { span: x, rev: true })
    } else {
        (Seg { span: x, rev: false }, Seg { span: y, rev: false })
    };
    let xl = xseg.len();
    let (pref, suf) = pass_tables(s, xseg, yseg);
    for p in 1..=xl {
        if pref[p] + suf[p] < p {
            continue;
        }
        let s_local = xl - p + 1 - suf[p];
        let e_local = xl + pref[p];
        let ell = p + pref[p] + suf[p];
        let (s_orig, e_orig) = if mirrored {
            (total + 1 - e_local, total + 1 - s_local)
        } else {
            (s_local, e_local)
        };
        // assign each run to exactly one of the two symmetric passes
        let first_half = s_orig + ell / 2 <= xlen_orig + 1;
        if first_half != mirrored {
            out.push(Run {
                s: x.start - 1 + s_orig,
                e: x.start - 1 + e_orig,
                p,
            });
        }
    }
}

/// Divide-and-conquer square test over `crossing_square`.
pub fn main_lorentz_square(s: &mut EqString, range: Span) -> Option<Square> {
    if range.len() < 2 {
        return None;
    }
    let mid = range.start + range.len() / 2 - 1;
    let left = Span::new(range.start, mid);
    let right = Span::new(mid + 1, range.end);
    main_lorentz_square(s, left)
        .or_else(|| main_lorentz_square(s, right))
        .or_else(|| crossing_square(s, left, right))
}

/// Exactly the runs of the range (as a standalone string), sorted by
/// `(s, e)`. O(m log m) comparisons.
pub fn divide_conquer_runs(s: &mut EqString, range: Span) -> Vec<Run> {
    let mut runs = dc_runs_inner(s, range);
    runs.sort_unstable();
    runs
}

fn dc_runs_inner(s: &mut EqString, range: Span) -> Vec<Run> {
    if range.len() < 2 {
        return Vec::new();
    }
    let mid = range.start + range.len() / 2 - 1;
    let left = Span::new(range.start, mid);
    let right = Span::new(mid + 1, range.end);
    let mut runs: Vec<Run> = dc_runs_inner(s, left)
        .into_iter()
        .filter(|r| r.e != left.end)
        .collect();
    runs.extend(
        dc_runs_inner(s, right)
            .into_iter()
            .filter(|r| r.s != right.start),
    );
    runs.extend(boundary_runs(s, left, right));
    runs
}

/// Every square of the range, by definition scan, in `(s, half)` order.
pub fn brute_squares(s: &mut EqString, range: Span) -> Vec<Square> {
    let mut out = Vec::new();
    for start in range.start..=range.end {
        let mut half = 1;
        while start + 2 * half - 1 <= range.end {
            if (0..half).all(|k| s.eq(start + k, start + half + k)) {
                out.push(Square { s: start, half });
            }
            half += 1;
        }
    }
    out
}

/// First square of the range in `(s, half)` order, or `None`.
pub fn brute_has_square(s: &mut EqString, range: Span) -> Option<Square> {
    for start in range.start..=range.end {
        let mut half = 1;
        while start + 2 * half - 1 <= range.end {
            if (0..half).all(|k| s.eq(start + k, start + half + k)) {
                return Some(Square { s: start, half });
            }
            half += 1;
        }
    }
    None
}

/// Every run of the range, by per-period definition scan, sorted by `(s, e)`.
pub fn brute_runs(s: &mut EqString, range: Span) -> Vec<Run> {
    let m = range.len();
    let mut cands = Vec::new();
    for p in 1..=m / 2 {
        let mut block_start: Option<Pos> = None;
        for i in range.start..=range.end - p {
            if s.eq(i, i + p) {
                block_start.get_or_insert(i);
            } else if let Some(st) = block_start.take() {
                if i - st >= p {
                    cands.push(Run { s: st, e: i - 1 + p, p });
                }
            }
        }
        if let Some(st) = block_start {
            if range.end + 1 - p - st >= p {
                cands.push(Run { s: st, e: range.end, p });
            }
        }
    }
    cands.sort_unstable();
    cands.dedup_by(|b, a| a.s == b.s && a.e == b.e);
    cands
}

/// Smallest period of the range (equal to its length if aperiodic).
pub fn smallest_period(s: &mut EqString, range: Span) -> usize {
    let m = range.len();
    for p in 1..m {
        if (range.start..=range.end - p).all(|i| s.eq(i, i + p)) {
            return p;
        }
    }
    m
}

/// Checks the full `Run` contract of `r` with respect to `range` as a
/// standalone string. Test helper.
pub fn run_is_valid(s: &mut EqString, range: Span, r: Run) -> bool {
    if r.s < range.start || r.e > range.end || r.s > r.e {
        return false;
    }
    let len = r.e - r.s + 1;
    if r.p < 1 || 2 * r.p > len {
        return false;
    }
    if smallest_period(s, Span::new(r.s, r.e)) != r.p {
        return false;
    }
    let left_max = r.s == range.start || !s.eq(r.s - 1, r.s - 1 + r.p);
    let right_max = r.e == range.end || !s.eq(r.e + 1, r.e + 1 - r.p);
    left_max && right_max
}

/// Checks that `sq` really is a square of the string. Test helper.
pub fn square_is_valid(s: &mut EqString, sq: Square) -> bool {
    sq.s >= 1
        && sq.half >= 1
        && sq.s + 2 * sq.half - 1 <= s.len()
        && (0..sq.half).all(|k| s.eq(sq.s + k, sq.s + sq.half + k))
}
