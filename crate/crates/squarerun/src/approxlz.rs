//! Approximate LZ factorisations.
//!
//! A phrase is a head of length < delta followed by a (possibly empty) tail
//! that occurs at least once before within the factorized window, and the
//! phrase must reach at least one position short of the end of the exact LZ
//! phrase starting at the same place. Factorisations are computed from
//! src/len labels of a sparse suffix tree built over difference-cover
//! samples; exact LZ and f-factorisation definition scans serve as
//! independent references, and the validator re-checks every phrase against
//! them by direct comparison.

use crate::diffcover::build_cover;
use crate::oracle::{EqString, Pos};
use crate::primitives::{lce_capped, Span};
use crate::sst::{build_sparse_limited, SstBuild};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Phrase {
    pub s: Pos,
    pub e: Pos,
    pub head_len: usize,
    /// Start of an earlier occurrence of the tail; `None` for head-only phrases.
    pub tail_src: Option<Pos>,
}

impl Phrase {
    pub fn len(&self) -> usize {
        self.e - self.s + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn tail_len(&self) -> usize {
        self.len() - self.head_len
    }

    pub fn tail_start(&self) -> Pos {
        self.s + self.head_len
    }

    /// One line per phrase: "s e head_len tail_src", 0 for an empty tail.
    pub fn serialize(&self) -> String {
        format!(
            "{} {} {} {}",
            self.s,
            self.e,
            self.head_len,
            self.tail_src.unwrap_or(0)
        )
    }
}

/// End of the unique exact LZ phrase starting at `at`, with the window
/// `[x, y]` treated as a standalone string.
pub(crate) fn exact_lz_phrase_end(s: &mut EqString, x: Pos, y: Pos, at: Pos) -> Pos {
    let mut best = 0;
    for a in x..at {
        let l = lce_capped(s, a, at, y);
        best = best.max(l);
    }
    (at + best).min(y)
}

/// The exact LZ factorisation of the window, by definition scan.
pub fn exact_lz(s: &mut EqString, range: Span) -> Vec<Span> {
    let mut out = Vec::new();
    let mut cur = range.start;
    while cur <= range.end {
        let e = exact_lz_phrase_end(s, range.start, range.end, cur);
        out.push(Span::new(cur, e));
        cur = e + 1;
    }
    out
}

/// The f-factorisation of the window: each factor is a fresh single symbol
/// or the longest fragment occurring at least twice up to its own end.
pub fn f_factorization(s: &mut EqString, range: Span) -> Vec<Span> {
    let mut out = Vec::new();
    let mut cur = range.start;
    while cur <= range.end {
        let mut best = 0;
        for a in range.start..cur {
            best = best.max(lce_capped(s, a, cur, range.end));
        }
        let len = if best == 0 {
            1
        } else {
            best.min(range.end - cur + 1)
        };
        out.push(Span::new(cur, cur + len - 1));
        cur += len;
    }
    out
}

/// Outcome of a budgeted factorisation attempt.
pub enum BudgetedFactorization {
    Factorized(Vec<Phrase>),
    /// The alphabet is larger than the estimate (degree cap or comparison
    /// budget exceeded).
    SigmaExceeded,
}

/// Computes a delta-approximate LZ factorisation of the window.
/// Requires `2 <= delta <= window length`.
pub fn factorize(s: &mut EqString, range: Span, delta: usize) -> Result<Vec<Phrase>, Error> {
    match factorize_inner(s, range, delta, None, None)? {
        BudgetedFactorization::Factorized(phrases) => Ok(phrases),
        BudgetedFactorization::SigmaExceeded => unreachable!("no limits given"),
    }
}

/// As `factorize`, but aborts with `SigmaExceeded` once the suffix-tree
/// degree exceeds `sigma_est` or the negative comparisons of this call
/// exceed `ceil(budget_c * m * sigma_est * log2(m+1) / sqrt(delta))`.
/// A completed factorisation is valid regardless of the constant.
pub fn factorize_budgeted(
    s: &mut EqString,
    range: Span,
    delta: usize,
    sigma_est: usize,
    budget_c: f64,
) -> Result<BudgetedFactorization, Error> {
    if sigma_est < 1 {
        return Err(Error::param("sigma_est", "estimate must be at least 1"));
    }
    let m = range.len() as f64;
    let budget = (budget_c * m * sigma_est as f64 * (m + 1.0).log2() / (delta as f64).sqrt())
        .ceil() as u64;
    factorize_inner(s, range, delta, Some(sigma_est), Some(budget))
}

fn factorize_inner(
    s: &mut EqString,
    range: Span,
    delta: usize,
    sigma_cap: Option<usize>,
    budget: Option<u64>,
) -> Result<BudgetedFactorization, Error> {
    let m = range.len();
    if delta < 2 || delta > m {
        return Err(Error::param(
            "delta",
            format!("delta {delta} outside [2, {m}]"),
        ));
    }
    if delta < 4 {
        // the cover construction needs t >= 4; fall back to phrases derived
        // from the exact LZ scan, which satisfy the same contract
        return factorize_from_scan(s, range, delta, budget);
    }

    let cover = build_cover(s.len(), delta)?;
    let samples = cover.members_in(range.start, range.end).to_vec();
    debug_assert!(!samples.is_empty());
    let tree = match build_sparse_limited(s, &samples, range.end, sigma_cap, budget)? {
        SstBuild::Built(t) => t,
        SstBuild::CapExceeded | SstBuild::BudgetExceeded => {
            return Ok(BudgetedFactorization::SigmaExceeded)
        }
    };

    // src/len labels, addressable by sample index
    let labels = tree.src_len_labels();
    let mut len_of = vec![0usize; samples.len()];
    let mut src_of = vec![0 as Pos; samples.len()];
    for sl in labels {
        let idx = samples.binary_search(&sl.sample).expect("labelled sample");
        len_of[idx] = sl.len;
        src_of[idx] = sl.src;
    }

    // greedy phrase construction: pick the candidate tail start in
    // [cur, cur + delta) whose tail reaches furthest
    let mut phrases = Vec::new();
    let mut cur = range.start;
    while cur <= range.end {
        let lim = (cur + delta - 1).min(range.end);
        let lo = samples.partition_point(|&p| p < cur);
        let hi = samples.partition_point(|&p| p <= lim);
        let mut best: Option<(Pos, usize, Pos)> = None; // (tail start, len, src)
        for idx in lo..hi {
            let (ik, l) = (samples[idx], len_of[idx]);
            if ik + l > cur + delta - 1 {
                let better = match best {
                    None => true,
                    Some((bik, bl, _)) => ik + l > bik + bl,
                };
                if better {
                    best = Some((ik, l, src_of[idx]));
                }
            }
        }
        match best {
            Some((ik, l, src)) => {
                let e = ik + l - 1;
                debug_assert!(e <= range.end);
                phrases.push(Phrase {
                    s: cur,
                    e,
                    head_len: ik - cur,
                    tail_src: Some(src),
                });
                cur = e + 1;
            }
            None => {
                let e = (cur + delta - 2).min(range.end);
                phrases.push(Phrase {
                    s: cur,
                    e,
                    head_len: e - cur + 1,
                    tail_src: None,
                });
                cur = e + 1;
            }
        }
    }
    Ok(BudgetedFactorization::Factorized(phrases))
}

/// Fallback for delta < 4: each exact LZ phrase, shortened by its final
/// character, becomes an all-tail phrase; fresh symbols become head-only
/// phrases of length <= delta - 1.
fn factorize_from_scan(
    s: &mut EqString,
    range: Span,
    delta: usize,
    budget: Option<u64>,
) -> Result<BudgetedFactorization, Error> {
    let neg0 = s.stats().negative;
    let mut phrases = Vec::new();
    let mut cur = range.start;
    while cur <= range.end {
        if let Some(b) = budget {
            if s.stats().negative - neg0 > b {
                return Ok(BudgetedFactorization::SigmaExceeded);
            }
        }
        let mut best = 0usize;
        let mut best_at = cur;
        for a in range.start..cur {
            let l = lce_capped(s, a, cur, range.end);
            if l > best {
                best = l;
                best_at = a;
            }
        }
        if best == 0 {
            let e = (cur + delta - 2).min(range.end);
            phrases.push(Phrase {
                s: cur,
                e,
                head_len: e - cur + 1,
                tail_src: None,
            });
            cur = e + 1;
        } else {
            let e = cur + best - 1;
            phrases.push(Phrase {
                s: cur,
                e,
                head_len: 0,
                tail_src: Some(best_at),
            });
            cur = e + 1;
        }
    }
    Ok(BudgetedFactorization::Factorized(phrases))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    Cover,
    HeadLength,
    TailOccurrence,
    LzLength,
}

impl std::fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ViolationKind::Cover => write!(f, "cover"),
            ViolationKind::HeadLength => write!(f, "head-length"),
            ViolationKind::TailOccurrence => write!(f, "tail-occurrence"),
            ViolationKind::LzLength => write!(f, "LZ-length"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub kind: ViolationKind,
    pub phrase_index: usize,
    pub detail: String,
}

/// Checks a phrase list against the full delta-approximate contract for the
/// window `[x, y]`: contiguous cover, head lengths, tail occurrences by
/// direct scan, and the exact-LZ length condition. `x > y` denotes an empty
/// window, which only the empty phrase list covers.
pub fn validate_delta_lz(
    s: &mut EqString,
    phrases: &[Phrase],
    x: Pos,
    y: usize,
    delta: usize,
) -> Result<(), Violation> {
    let fail = |kind, idx, detail: String| {
        Err(Violation {
            kind,
            phrase_index: idx,
            detail,
        })
    };
    if x > y {
        return if phrases.is_empty() {
            Ok(())
        } else {
            fail(ViolationKind::Cover, 0, "phrases on empty window".into())
        };
    }
    let mut expect = x;
    for (idx, ph) in phrases.iter().enumerate() {
        if ph.s != expect || ph.e < ph.s || ph.e > y {
            return fail(
                ViolationKind::Cover,
                idx,
                format!("phrase [{}, {}] does not continue at {expect}", ph.s, ph.e),
            );
        }
        expect = ph.e + 1;
        if ph.head_len > ph.len() || ph.head_len >= delta {
            return fail(
                ViolationKind::HeadLength,
                idx,
                format!("head length {} with delta {delta}", ph.head_len),
            );
        }
        let tail = ph.tail_len();
        match (tail, ph.tail_src) {
            (0, None) => {}
            (0, Some(_)) => {
                return fail(
                    ViolationKind::TailOccurrence,
                    idx,
                    "source on empty tail".into(),
                )
            }
            (_, None) => {
                return fail(
                    ViolationKind::TailOccurrence,
                    idx,
                    "tail without source".into(),
                )
            }
            (_, Some(src)) => {
                let tstart = ph.tail_start();
                if src < x || src >= tstart || src + tail - 1 > ph.e {
                    return fail(
                        ViolationKind::TailOccurrence,
                        idx,
                        format!("source {src} out of place"),
                    );
                }
                for d in 0..tail {
                    if !s.eq(src + d, tstart + d) {
                        return fail(
                            ViolationKind::TailOccurrence,
                            idx,
                            format!("tail mismatch at offset {d}"),
                        );
                    }
                }
            }
        }
        let lz_end = exact_lz_phrase_end(s, x, y, ph.s);
        if lz_end - 1 > ph.e {
            return fail(
                ViolationKind::LzLength,
                idx,
                format!("phrase ends at {} but the LZ phrase ends at {lz_end}", ph.e),
            );
        }
    }
    if expect != y + 1 {
        return fail(
            ViolationKind::Cover,
            phrases.len().saturating_sub(1),
            format!("window not covered up to {y}"),
        );
    }
    Ok(())
}
