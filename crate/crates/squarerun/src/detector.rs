//! Square detection.
//!
//! `detect_long` scans a factorisation's long tails with the crossing test,
//! catching every square of length >= 8*delta whose occurrence is not
//! strictly inside a tail. `detect_simple` is the known-sigma block
//! algorithm. `detect` needs no alphabet knowledge: it runs phases of
//! shrinking block length, factorizing each active block pair under a
//! degree/budget estimate, deactivating pairs proven unable to contain a
//! leftmost square occurrence, and sweeping with the classical
//! divide-and-conquer test once the alphabet proves large or the blocks
//! become short.

use crate::approxlz::{factorize, factorize_budgeted, BudgetedFactorization, Phrase};
use crate::oracle::{EqString, Pos};
use crate::primitives::{crossing_square, main_lorentz_square, Span, Square};
use crate::Error;

pub const DEFAULT_BUDGET_C: f64 = 8.0;
pub const BUDGET_C_ENV: &str = "SQUARERUN_BUDGET_C";

/// Phases stop and the remaining pairs are swept classically at this
/// alphabet scale.
const TERMINAL_SIGMA: u64 = 256;

#[derive(Clone, Copy, Debug)]
pub struct DetectorConfig {
    /// Constant inside the budgeted-factorisation comparison budget.
    pub budget_c: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            budget_c: DEFAULT_BUDGET_C,
        }
    }
}

impl DetectorConfig {
    /// Default configuration with the budget constant optionally overridden
    /// by the `SQUARERUN_BUDGET_C` environment variable.
    pub fn from_env() -> Self {
        let mut cfg = DetectorConfig::default();
        if let Ok(v) = std::env::var(BUDGET_C_ENV) {
            if let Ok(c) = v.parse::<f64>() {
                if c > 0.0 {
                    cfg.budget_c = c;
                }
            }
        }
        cfg
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fallback {
    None,
    /// The alphabet exceeded a phase's estimate; the phase was swept
    /// classically, every pair included.
    SigmaExceeded { phase_sigma: u64 },
    /// Phases reached the terminal alphabet scale; remaining active pairs
    /// were swept classically.
    Terminal { phase_sigma: u64 },
}

#[derive(Clone, Debug, Default)]
pub struct PhaseStat {
    pub sigma: u64,
    pub pairs: usize,
    pub processed: usize,
    pub skipped_deactivated: usize,
    pub oracle_calls: u64,
}

#[derive(Clone, Debug)]
pub struct DetectionReport {
    pub n: usize,
    pub sigma_distinct: Option<usize>,
    pub phases_run: usize,
    pub negative: u64,
    pub merging: u64,
    pub fallback: Fallback,
    pub witness: Option<Square>,
    pub phase_stats: Vec<PhaseStat>,
    /// Most often any single position was covered by a tail-deactivation
    /// event; the schedule guarantees at most 4.
    pub max_position_deactivations: u8,
    pub deactivation_events: usize,
}

impl DetectionReport {
    /// negative + merging: the count the measurement suites track.
    pub fn paper_count(&self) -> u64 {
        self.negative + self.merging
    }

    /// CSV row: n, sigma_distinct, phases_run, comparisons_negative,
    /// comparisons_merging, fallback_used, witness_s, witness_half.
    pub fn csv_row(&self) -> String {
        let fallback = match self.fallback {
            Fallback::None => "none".to_string(),
            Fallback::SigmaExceeded { phase_sigma } => format!("sigma-exceeded@{phase_sigma}"),
            Fallback::Terminal { phase_sigma } => format!("terminal@{phase_sigma}"),
        };
        let (ws, wh) = self.witness.map_or((0, 0), |sq| (sq.s, sq.half));
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.sigma_distinct.map_or(0, |s| s),
            self.phases_run,
            self.negative,
            self.merging,
            fallback,
            ws,
            wh
        )
    }
}

/// The phase schedule: sigma_t = 2^(2^(L - t)) for t = 0..=L, block length
/// sigma_t^2, and the per-phase pair deactivation state. Shared by the
/// square detector and the runs pipeline.
pub(crate) struct PhaseSchedule {
    n: usize,
    sigmas: Vec<u64>,
    /// First phase whose sigma is at most n; earlier phases target square
    /// lengths beyond the string and are skipped.
    pub first: usize,
    deactivated: Vec<Vec<bool>>,
    position_hits: Vec<u8>,
    pub deactivation_events: usize,
}

impl PhaseSchedule {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "phase schedule needs n >= 2");
        assert!(n <= (1 << 31), "detector supports lengths up to 2^31");
        // smallest l with 2^(2^l) >= n
        let mut l = 0u32;
        while (1u128 << (1u32 << l)) < n as u128 {
            l += 1;
        }
        let sigmas: Vec<u64> = (0..=l).map(|t| 1u64 << (1u32 << (l - t))).collect();
        let first = sigmas.iter().position(|&s| s <= n as u64).expect("sigma 2");
        let deactivated = sigmas
            .iter()
            .map(|&s| {
                let b = Self::block_len_for(s, n);
                vec![false; Self::pair_count_for(b, n) + 1]
            })
            .collect();
        PhaseSchedule {
            n,
            sigmas,
            first,
            deactivated,
            position_hits: vec![0; n + 2],
            deactivation_events: 0,
        }
    }

    pub fn phases(&self) -> usize {
        self.sigmas.len()
    }

    pub fn sigma(&self, t: usize) -> u64 {
        self.sigmas[t]
    }

    fn block_len_for(sigma: u64, n: usize) -> usize {
        ((sigma as u128 * sigma as u128).min(n as u128)) as usize
    }

    fn pair_count_for(block: usize, n: usize) -> usize {
        (n.div_ceil(block)).saturating_sub(1).max(1)
    }

    pub fn block_len(&self, t: usize) -> usize {
        Self::block_len_for(self.sigmas[t], self.n)
    }

    pub fn pair_count(&self, t: usize) -> usize {
        Self::pair_count_for(self.block_len(t), self.n)
    }

    /// Pair `j` spans blocks `j` and `j+1`; the final pair absorbs the
    /// partial block.
    pub fn pair_span(&self, t: usize, j: usize) -> Span {
        let b = self.block_len(t);
        let start = b * (j - 1) + 1;
        let end = if j == self.pair_count(t) {
            self.n
        } else {
            (b * (j + 1)).min(self.n)
        };
        Span::new(start, end)
    }

    pub fn is_deactivated(&self, t: usize, j: usize) -> bool {
        self.deactivated[t][j]
    }

    /// Explicit mark, counting the event.
    fn mark(&mut self, t: usize, j: usize) -> bool {
        if !self.deactivated[t][j] {
            self.deactivated[t][j] = true;
            return true;
        }
        false
    }

    /// A pair is implicitly deactivated when a previous-phase pair containing
    /// it is deactivated; the mark is propagated lazily.
    pub fn implicitly_deactivated(&mut self, t: usize, j: usize) -> bool {
        if t == 0 || t - 1 < self.first {
            return false;
        }
        let span = self.pair_span(t, j);
        let prev = t - 1;
        let pb = self.block_len(prev);
        let block_idx = (span.start - 1) / pb + 1;
        for cand in [block_idx.saturating_sub(1), block_idx] {
            if cand >= 1 && cand <= self.pair_count(prev) {
                let pspan = self.pair_span(prev, cand);
                if pspan.start <= span.start && span.end <= pspan.end && self.deactivated[prev][cand]
                {
                    self.deactivated[t][j] = true;
                    return true;
                }
            }
        }
        false
    }

    /// Deactivates every pair of phase `target` entirely contained in
    /// `[lo, hi]`, crediting one deactivation to each position of the
    /// region's interior (which later phases never inspect again).
    pub fn deactivate_contained(&mut self, target: usize, lo: Pos, hi: Pos) {
        if target >= self.sigmas.len() || lo > hi {
            return;
        }
        let b = self.block_len(target);
        let mut any = false;
        let mut j = (lo - 1) / b + 1; // first pair whose span could start at lo
        while j <= self.pair_count(target) {
            let span = self.pair_span(target, j);
            if span.start > hi {
                break;
            }
            if span.start >= lo && span.end <= hi && self.mark(target, j) {
                any = true;
            }
            j += 1;
        }
        if any {
            self.deactivation_events += 1;
            let margin = 2 * b;
            let (ilo, ihi) = (lo + margin, hi.saturating_sub(margin));
            for p in ilo..=ihi.min(self.n) {
                self.position_hits[p] = self.position_hits[p].saturating_add(1);
            }
        }
    }

    pub fn max_position_hits(&self) -> u8 {
        self.position_hits.iter().copied().max().unwrap_or(0)
    }

    /// sigma_est = max(1, sigma_t^(1/4) / log2(sigma_t))
    pub fn sigma_estimate(&self, t: usize) -> usize {
        let sigma = self.sigmas[t];
        let fourth_root = (sigma as f64).powf(0.25);
        let est = (fourth_root / (sigma as f64).log2()).floor() as usize;
        est.max(1)
    }
}

/// Runs the crossing test around every tail of length >= delta. Finds some
/// square if the window contains one of length >= 8*delta whose occurrence
/// is not strictly inside a tail.
pub fn detect_long(
    s: &mut EqString,
    phrases: &[Phrase],
    delta: usize,
    window: Span,
) -> Option<Square> {
    for ph in phrases {
        let k = ph.tail_len();
        if k < delta {
            continue;
        }
        let a2 = ph.tail_start();
        let a3 = ph.e;
        let lo = a2.saturating_sub(8 * k).max(window.start);
        let hi = (a3 + 4 * k - 1).min(window.end);
        // (x1, y1) splits at the tail start, (x2, y2) at the tail end
        for split in [a2, a3] {
            let (x, y) = match (Span::try_new(lo, split - 1), Span::try_new(split, hi)) {
                (Some(x), Some(y)) => (x, y),
                _ => continue,
            };
            if let Some(sq) = crossing_square(s, x, y) {
                return Some(sq);
            }
        }
    }
    None
}

/// Known-sigma detection: classical test on adjacent blocks of length
/// 8*delta for the short squares, one factorisation plus `detect_long` for
/// the long ones, with delta = (sigma * log2 n)^2.
pub fn detect_simple(s: &mut EqString, sigma: usize) -> Result<Option<Square>, Error> {
    if sigma < 1 {
        return Err(Error::param("sigma", "alphabet size must be positive"));
    }
    let n = s.len();
    if n < 2 {
        return Ok(None);
    }
    let lg = (n as f64).log2().ceil().max(1.0);
    let delta_raw = (sigma as f64 * lg).powi(2);
    let delta = (delta_raw as usize).clamp(2, n);
    let whole = Span::new(1, n);
    if 8 * delta >= n {
        // a single block pair covers everything
        return Ok(main_lorentz_square(s, whole));
    }
    let block = 8 * delta;
    let pairs = (n.div_ceil(block)).saturating_sub(1).max(1);
    for j in 1..=pairs {
        let start = block * (j - 1) + 1;
        let end = if j == pairs { n } else { (block * (j + 1)).min(n) };
        if let Some(sq) = main_lorentz_square(s, Span::new(start, end)) {
            return Ok(Some(sq));
        }
    }
    let phrases = factorize(s, whole, delta)?;
    Ok(detect_long(s, &phrases, delta, whole))
}

/// Square detection without alphabet knowledge. Returns the witness (if any)
/// and a report of phases, comparisons and deactivation statistics.
pub fn detect(s: &mut EqString) -> (Option<Square>, DetectionReport) {
    detect_with(s, &DetectorConfig::default())
}

pub fn detect_with(s: &mut EqString, cfg: &DetectorConfig) -> (Option<Square>, DetectionReport) {
    let n = s.len();
    let start_stats = s.stats();
    let mut report = DetectionReport {
        n,
        sigma_distinct: s.distinct_symbols(),
        phases_run: 0,
        negative: 0,
        merging: 0,
        fallback: Fallback::None,
        witness: None,
        phase_stats: Vec::new(),
        max_position_deactivations: 0,
        deactivation_events: 0,
    };
    let finish = |s: &EqString, report: &mut DetectionReport, witness: Option<Square>| {
        let st = s.stats();
        report.negative = st.negative - start_stats.negative;
        report.merging = st.positive_merging - start_stats.positive_merging;
        report.witness = witness;
        witness
    };

    if n < 2 {
        let w = finish(s, &mut report, None);
        return (w, report);
    }

    let mut sched = PhaseSchedule::new(n);
    for t in sched.first..sched.phases() {
        let sigma_t = sched.sigma(t);
        let mut stat = PhaseStat {
            sigma: sigma_t,
            pairs: sched.pair_count(t),
            ..Default::default()
        };
        let calls_before = s.stats().oracle_calls();

        if sigma_t <= TERMINAL_SIGMA {
            // finish the remaining active pairs with the classical test
            report.fallback = Fallback::Terminal { phase_sigma: sigma_t };
            let mut witness = None;
            for j in 1..=sched.pair_count(t) {
                if sched.is_deactivated(t, j) || sched.implicitly_deactivated(t, j) {
                    stat.skipped_deactivated += 1;
                    continue;
                }
                stat.processed += 1;
                if let Some(sq) = main_lorentz_square(s, sched.pair_span(t, j)) {
                    witness = Some(sq);
                    break;
                }
            }
            report.phases_run += 1;
            stat.oracle_calls = s.stats().oracle_calls() - calls_before;
            report.phase_stats.push(stat);
            report.max_position_deactivations = sched.max_position_hits();
            report.deactivation_events = sched.deactivation_events;
            let w = finish(s, &mut report, witness);
            return (w, report);
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
            debug_assert!(delta <= span.len());
            let outcome = factorize_budgeted(s, span, delta, sigma_est, cfg.budget_c)
                .expect("valid phase parameters");
            match outcome {
                BudgetedFactorization::SigmaExceeded => {
                    // sweep every pair of this phase, deactivated or not
                    report.fallback = Fallback::SigmaExceeded { phase_sigma: sigma_t };
                    let mut witness = None;
                    for jj in 1..=sched.pair_count(t) {
                        if let Some(sq) = main_lorentz_square(s, sched.pair_span(t, jj)) {
                            witness = Some(sq);
                            break;
                        }
                    }
                    report.phases_run += 1;
                    stat.oracle_calls = s.stats().oracle_calls() - calls_before;
                    report.phase_stats.push(stat);
                    report.max_position_deactivations = sched.max_position_hits();
                    report.deactivation_events = sched.deactivation_events;
                    let w = finish(s, &mut report, witness);
                    return (w, report);
                }
                BudgetedFactorization::Factorized(phrases) => {
                    for ph in &phrases {
                        if ph.tail_len() >= delta {
                            sched.deactivate_contained(t + 2, ph.tail_start(), ph.e);
                        }
                    }
                    if let Some(sq) = detect_long(s, &phrases, delta, span) {
                        report.phases_run += 1;
                        stat.oracle_calls = s.stats().oracle_calls() - calls_before;
                        report.phase_stats.push(stat);
                        report.max_position_deactivations = sched.max_position_hits();
                        report.deactivation_events = sched.deactivation_events;
                        let w = finish(s, &mut report, Some(sq));
                        return (w, report);
                    }
                }
            }
        }
        report.phases_run += 1;
        stat.oracle_calls = s.stats().oracle_calls() - calls_before;
        report.phase_stats.push(stat);
    }
    unreachable!("the terminal phase always returns");
}
