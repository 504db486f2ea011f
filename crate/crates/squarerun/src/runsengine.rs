//! Computing all runs.
//!
//! The pipeline mirrors the phased square detector: per active block pair,
//! factorize and extract every long run touching a tail boundary
//! (`long_runs_from_factorization`), discard runs touching the pair's edges
//! (they are found intact at a neighboring pair), and record long tails.
//! When the alphabet outgrows a phase's estimate, or blocks become short,
//! every pair of the current phase is finished with the divide-and-conquer
//! runs computation. The collected multiset is radix-sorted and
//! deduplicated, and runs hidden strictly inside recorded tails are copied
//! left-to-right from their earlier occurrences.

use crate::approxlz::{factorize_budgeted, BudgetedFactorization, Phrase};
use crate::detector::{DetectorConfig, Fallback, PhaseSchedule, PhaseStat};
use crate::oracle::{EqString, Pos};
use crate::primitives::{boundary_runs, divide_conquer_runs, Run, Span};

/// A recorded tail: `T[s..e]` equals `T[s-dist..e-dist]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TailRecord {
    pub s: Pos,
    pub e: Pos,
    pub dist: usize,
}

#[derive(Clone, Debug)]
pub struct RunsReport {
    pub n: usize,
    pub sigma_distinct: Option<usize>,
    pub phases_run: usize,
    pub negative: u64,
    pub merging: u64,
    pub fallback: Fallback,
    pub runs: usize,
    pub tails_recorded: usize,
    pub copied_runs: usize,
    pub phase_stats: Vec<PhaseStat>,
    pub max_position_deactivations: u8,
}

impl RunsReport {
    pub fn paper_count(&self) -> u64 {
        self.negative + self.merging
    }
}

/// Boundary-run extraction around every tail of length >= delta. Returns the
/// multiset of discovered runs (valid runs of the window, possibly
/// duplicated) and the qualifying tails. Every run of the window of length
/// >= 8*delta appears unless it is properly contained in some tail.
pub fn long_runs_from_factorization(
    s: &mut EqString,
    phrases: &[Phrase],
    delta: usize,
    window: Span,
) -> (Vec<Run>, Vec<TailRecord>) {
    let mut runs = Vec::new();
    let mut tails = Vec::new();
    for ph in phrases {
        let k = ph.tail_len();
        if k < delta {
            continue;
        }
        let a2 = ph.tail_start();
        let a3 = ph.e;
        let src = ph.tail_src.expect("nonempty tail has a source");
        tails.push(TailRecord {
            s: a2,
            e: a3,
            dist: a2 - src,
        });
        let lo = a2.saturating_sub(8 * k).max(window.start);
        let hi = (a3 + 4 * k).min(window.end);
        for split in [a2, a3] {
            let (x, y) = match (Span::try_new(lo, split - 1), Span::try_new(split, hi)) {
                (Some(x), Some(y)) => (x, y),
                _ => continue,
            };
            for r in boundary_runs(s, x, y) {
                // keep only runs whose maximality is visible inside the
                // trimmed fragment
                if (lo > window.start && r.contains(lo)) || (hi < window.end && r.contains(hi)) {
                    continue;
                }
                runs.push(r);
            }
        }
    }
    (runs, tails)
}

impl Run {
    fn contains(&self, p: Pos) -> bool {
        self.s <= p && p <= self.e
    }
}

/// All runs of the string, sorted by `(s, e)`.
pub fn compute_runs(s: &mut EqString) -> Vec<Run> {
    compute_runs_with(s, &DetectorConfig::default()).0
}

pub fn compute_runs_with(s: &mut EqString, cfg: &DetectorConfig) -> (Vec<Run>, RunsReport) {
    let n = s.len();
    let start_stats = s.stats();
    let mut report = RunsReport {
        n,
        sigma_distinct: s.distinct_symbols(),
        phases_run: 0,
        negative: 0,
        merging: 0,
        fallback: Fallback::None,
        runs: 0,
        tails_recorded: 0,
        copied_runs: 0,
        phase_stats: Vec::new(),
        max_position_deactivations: 0,
    };
    if n < 2 {
        return (Vec::new(), report);
    }

    let whole = Span::new(1, n);
    let mut collected: Vec<Run> = Vec::new();
    let mut tails: Vec<TailRecord> = Vec::new();
    let mut sched = PhaseSchedule::new(n);

    // discard runs touching the pair's edges unless those are the string's
    // own ends; the same run is found intact from a neighboring pair
    let pair_filter = |span: Span, runs: Vec<Run>, out: &mut Vec<Run>| {
        for r in runs {
            if (span.start > 1 && r.contains(span.start)) || (span.end < n && r.contains(span.end))
            {
                continue;
            }
            out.push(r);
        }
    };

    'phases: for t in sched.first..sched.phases() {
        let sigma_t = sched.sigma(t);
        let mut stat = PhaseStat {
            sigma: sigma_t,
            pairs: sched.pair_count(t),
            ..Default::default()
        };
        let calls_before = s.stats().oracle_calls();

        if sigma_t <= 256 {
            report.fallback = Fallback::Terminal { phase_sigma: sigma_t };
            for j in 1..=sched.pair_count(t) {
                stat.processed += 1;
                let span = sched.pair_span(t, j);
                let runs = divide_conquer_runs(s, span);
                pair_filter(span, runs, &mut collected);
            }
            report.phases_run += 1;
            stat.oracle_calls = s.stats().oracle_calls() - calls_before;
            report.phase_stats.push(stat);
            break 'phases;
        }

        debug_assert_eq!(sigma_t % 8, 0);
        let delta = (sigma_t / 8) as usize;
        let sigma_est = sched.sigma_estimate(t);
        for j in 1..=sched.pair_count(t) {
            if sched.is_deactivated(t, j) || sched.implicitly_deactivated(t, j) {
                stat.skipped_deactivated += 1;
                continue;
            }
            stat.processed += 1;
            let span = sched.pair_span(t, j);
            let outcome = factorize_budgeted(s, span, delta, sigma_est, cfg.budget_c)
                .expect("valid phase parameters");
            match outcome {
                BudgetedFactorization::SigmaExceeded => {
                    report.fallback = Fallback::SigmaExceeded { phase_sigma: sigma_t };
                    for jj in 1..=sched.pair_count(t) {
                        let span = sched.pair_span(t, jj);
                        let runs = divide_conquer_runs(s, span);
                        pair_filter(span, runs, &mut collected);
                    }
                    report.phases_run += 1;
                    stat.oracle_calls = s.stats().oracle_calls() - calls_before;
                    report.phase_stats.push(stat);
                    break 'phases;
                }
                BudgetedFactorization::Factorized(phrases) => {
                    let (runs, tail_records) =
                        long_runs_from_factorization(s, &phrases, delta, span);
                    pair_filter(span, runs, &mut collected);
                    for tr in &tail_records {
                        if tr.e > tr.s + 1 {
                            sched.deactivate_contained(t + 3, tr.s + 1, tr.e - 1);
                        }
                    }
                    tails.extend(tail_records);
                }
            }
        }
        report.phases_run += 1;
        stat.oracle_calls = s.stats().oracle_calls() - calls_before;
        report.phase_stats.push(stat);
    }

    report.tails_recorded = tails.len();
    report.max_position_deactivations = sched.max_position_hits();

    // radix sort the triples by (s, e) and drop duplicates; the smallest
    // period is part of the identity, so duplicates must agree on it
    let sorted = radix_sort_runs(collected, n);
    let mut lists: Vec<Vec<Run>> = vec![Vec::new(); n + 1];
    for r in sorted {
        match lists[r.s].last() {
            Some(last) if last.e == r.e => {
                assert_eq!(last.p, r.p, "duplicate run with conflicting period");
            }
            _ => lists[r.s].push(r),
        }
    }

    // copy runs hidden inside tails from their earlier occurrences,
    // left-to-right; (tail_end, dist) per position, maximizing tail_end
    let mut annot: Vec<(Pos, usize)> = vec![(0, 0); n + 2];
    for tr in &tails {
        for i in tr.s + 1..tr.e {
            if tr.e > annot[i].0 {
                annot[i] = (tr.e, tr.dist);
            }
        }
    }
    for i in 1..=n {
        let (estar, dist) = annot[i];
        if estar == 0 {
            continue;
        }
        debug_assert!(dist >= 1 && dist < i);
        let src_list = std::mem::take(&mut lists[i - dist]);
        let mut merged: Vec<Run> = Vec::with_capacity(lists[i].len() + src_list.len());
        {
            let own = &lists[i];
            let mut a = 0;
            let mut b = 0;
            loop {
                let candidate = src_list.get(b).map(|r| Run {
                    s: i,
                    e: r.e + dist,
                    p: r.p,
                });
                match (own.get(a), candidate) {
                    (Some(&x), Some(y)) => {
                        if y.e >= estar {
                            merged.extend_from_slice(&own[a..]);
                            break;
                        }
                        if x.e < y.e {
                            merged.push(x);
                            a += 1;
                        } else if x.e == y.e {
                            assert_eq!(x.p, y.p, "copied run with conflicting period");
                            merged.push(x);
                            a += 1;
                            b += 1;
                        } else {
                            report.copied_runs += 1;
                            merged.push(y);
                            b += 1;
                        }
                    }
                    (Some(&x), None) => {
                        merged.push(x);
                        a += 1;
                    }
                    (None, Some(y)) => {
                        if y.e >= estar {
                            break;
                        }
                        report.copied_runs += 1;
                        merged.push(y);
                        b += 1;
                    }
                    (None, None) => break,
                }
            }
        }
        lists[i - dist] = src_list;
        lists[i] = merged;
    }

    let out: Vec<Run> = lists.into_iter().flatten().collect();
    report.runs = out.len();
    let st = s.stats();
    report.negative = st.negative - start_stats.negative;
    report.merging = st.positive_merging - start_stats.positive_merging;

    #[cfg(debug_assertions)]
    if n <= 192 {
        let brute = crate::primitives::brute_runs(s, whole);
        debug_assert_eq!(out, brute, "runs pipeline disagrees with the reference scan");
    }
    let _ = whole;
    (out, report)
}

/// Two stable counting-sort passes: by end, then by start.
fn radix_sort_runs(runs: Vec<Run>, n: usize) -> Vec<Run> {
    if runs.is_empty() {
        return runs;
    }
    let pass = |runs: Vec<Run>, key: fn(&Run) -> usize| {
        let mut counts = vec![0usize; n + 2];
        for r in &runs {
            counts[key(r)] += 1;
        }
        let mut acc = 0;
        for c in counts.iter_mut() {
            let here = *c;
            *c = acc;
            acc += here;
        }
        let mut out = vec![Run { s: 0, e: 0, p: 0 }; runs.len()];
        for r in runs {
            out[counts[key(&r)]] = r;
            counts[key(&r)] += 1;
        }
        out
    };
    let by_end = pass(runs, |r| r.e);
    pass(by_end, |r| r.s)
}
