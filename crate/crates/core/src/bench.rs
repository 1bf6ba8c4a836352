//! Timing loops and oracle verification behind the `bench` and `verify`
//! commands.
//!
//! A timed loop applies one event and answers one query per iteration,
//! against a structure built before the clock starts. Stream generation
//! and I/O are never inside the timed region.

use std::fmt;
use std::hint::black_box;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::baselines::{HeapOrder, IndexedHeap, MaxHeap, MinHeap, OrderStatisticTree};
use crate::error::{Error, Result};
use crate::event::{Frequency, LogEvent};
use crate::oracle::{self, Oracle};
use crate::profile::{Probe, Profiler, SkipPermutationSwap};
use crate::streamgen::{self, Preset, StreamConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Impl {
    SProfile,
    Heap,
    Ost,
}

impl Impl {
    pub const ALL: [Impl; 3] = [Impl::SProfile, Impl::Heap, Impl::Ost];

    pub fn name(self) -> &'static str {
        match self {
            Impl::SProfile => "sprofile",
            Impl::Heap => "heap",
            Impl::Ost => "ost",
        }
    }

    /// Heaps only expose their root, so they cannot answer median.
    pub fn supports(self, query: Query) -> bool {
        !(self == Impl::Heap && query == Query::Median)
    }
}

impl fmt::Display for Impl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Impl {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sprofile" => Ok(Impl::SProfile),
            "heap" => Ok(Impl::Heap),
            "ost" => Ok(Impl::Ost),
            other => Err(Error::invalid(format!(
                "unknown impl {other:?} (expected sprofile, heap or ost)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Query {
    Mode,
    Min,
    Median,
}

impl Query {
    pub fn name(self) -> &'static str {
        match self {
            Query::Mode => "mode",
            Query::Min => "min",
            Query::Median => "median",
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Query {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mode" => Ok(Query::Mode),
            "min" => Ok(Query::Min),
            "median" => Ok(Query::Median),
            other => Err(Error::invalid(format!(
                "unknown query {other:?} (expected mode, min or median)"
            ))),
        }
    }
}

/// One benchmark cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub implementation: Impl,
    pub query: Query,
    pub preset: Preset,
    pub n: u64,
    pub m: u32,
    pub seed: u64,
    pub elapsed_seconds: f64,
    pub updates_per_second: f64,
}

impl BenchRecord {
    pub const CSV_HEADER: [&'static str; 8] = [
        "impl",
        "query",
        "preset",
        "n",
        "m",
        "seed",
        "elapsed_seconds",
        "updates_per_second",
    ];

    pub fn csv_fields(&self) -> [String; 8] {
        [
            self.implementation.to_string(),
            self.query.to_string(),
            self.preset.to_string(),
            self.n.to_string(),
            self.m.to_string(),
            self.seed.to_string(),
            format!("{:.9}", self.elapsed_seconds),
            format!("{:.1}", self.updates_per_second),
        ]
    }

    /// Seconds per update.
    pub fn per_update(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.elapsed_seconds / self.n as f64
        }
    }
}

fn timed<F: FnMut() -> Result<i64>>(mut body: F) -> Result<Duration> {
    let start = Instant::now();
    let sink = body()?;
    let elapsed = start.elapsed();
    black_box(sink);
    Ok(elapsed)
}

/// A structure driven by the timed loop: one update plus one query per
/// event, with optional cache hints for events further down the stream.
trait Replay {
    /// How many events ahead each hint stage runs. Tuned per structure;
    /// empty means no hints.
    const HINTS: &'static [usize] = &[];

    fn step(&mut self, event: LogEvent) -> Result<Frequency>;

    #[inline(always)]
    fn hint(&self, _event: LogEvent, _stage: u8) {}
}

struct ProfileLoop<Q> {
    profile: Profiler,
    query: Q,
}

impl<Q: Fn(&Profiler) -> Frequency> Replay for ProfileLoop<Q> {
    const HINTS: &'static [usize] = &[32, 16];

    #[inline(always)]
    fn step(&mut self, event: LogEvent) -> Result<Frequency> {
        self.profile.apply(event)?;
        Ok((self.query)(&self.profile))
    }

    #[inline(always)]
    fn hint(&self, event: LogEvent, stage: u8) {
        self.profile.prefetch(event, stage);
    }
}

impl<O: HeapOrder> Replay for IndexedHeap<O> {
    const HINTS: &'static [usize] = &[8];

    #[inline(always)]
    fn step(&mut self, event: LogEvent) -> Result<Frequency> {
        self.apply(event)?;
        Ok(self.peek().1)
    }

    #[inline(always)]
    fn hint(&self, event: LogEvent, stage: u8) {
        self.prefetch(event, stage);
    }
}

struct TreeLoop {
    tree: OrderStatisticTree,
    k: usize,
}

impl Replay for TreeLoop {
    #[inline(always)]
    fn step(&mut self, event: LogEvent) -> Result<Frequency> {
        self.tree.apply(event)?;
        Ok(self.tree.kth(self.k)?.0)
    }
}

fn replay<R: Replay>(mut target: R, events: &[LogEvent]) -> Result<Duration> {
    timed(|| {
        let mut acc: Frequency = 0;
        for (i, &e) in events.iter().enumerate() {
            for (stage, &d) in R::HINTS.iter().enumerate() {
                if let Some(&ahead) = events.get(i + d) {
                    target.hint(ahead, stage as u8);
                }
            }
            acc = acc.wrapping_add(target.step(e)?);
        }
        Ok(acc)
    })
}

/// Runs one update+query loop over `events` and returns its wall time.
/// Building the structure happens before the clock starts.
pub fn time_updates(imp: Impl, query: Query, m: usize, events: &[LogEvent]) -> Result<Duration> {
    if !imp.supports(query) {
        return Err(Error::invalid(format!("{imp} cannot answer {query}")));
    }
    match (imp, query) {
        (Impl::SProfile, Query::Mode) => replay(
            ProfileLoop {
                profile: Profiler::new(m)?,
                query: |p: &Profiler| p.mode_summary().0,
            },
            events,
        ),
        (Impl::SProfile, Query::Min) => replay(
            ProfileLoop {
                profile: Profiler::new(m)?,
                query: |p: &Profiler| p.min_summary().0,
            },
            events,
        ),
        (Impl::SProfile, Query::Median) => replay(
            ProfileLoop {
                profile: Profiler::new(m)?,
                query: Profiler::median_frequency,
            },
            events,
        ),
        (Impl::Heap, Query::Mode) => replay(MaxHeap::new(m)?, events),
        (Impl::Heap, Query::Min) => replay(MinHeap::new(m)?, events),
        (Impl::Heap, Query::Median) => unreachable!("rejected above"),
        (Impl::Ost, _) => replay(
            TreeLoop {
                tree: OrderStatisticTree::new(m)?,
                k: match query {
                    Query::Mode => m,
                    Query::Min => 1,
                    Query::Median => m.div_ceil(2),
                },
            },
            events,
        ),
    }
}

/// The same loop shape with no structure behind it; isolates the cost of
/// walking the pre-generated events.
pub fn time_noop(events: &[LogEvent]) -> Duration {
    timed(|| {
        let mut acc = 0i64;
        for &e in events {
            let e = black_box(e);
            acc = acc.wrapping_add(i64::from(e.object.get()) * e.action.delta());
        }
        Ok(acc)
    })
    .expect("infallible")
}

/// Parameters of one benchmark cell.
#[derive(Debug, Clone, Copy)]
pub struct Cell {
    pub implementation: Impl,
    pub query: Query,
    pub preset: Preset,
    pub n: u64,
    pub m: u32,
    pub seed: u64,
    pub repeats: u32,
}

/// Best-of-`repeats` timing over an already generated stream.
pub fn measure(cell: &Cell, events: &[LogEvent]) -> Result<BenchRecord> {
    if cell.repeats == 0 {
        return Err(Error::invalid("repeats must be >= 1"));
    }
    let mut best = Duration::MAX;
    for _ in 0..cell.repeats {
        best = best.min(time_updates(cell.implementation, cell.query, cell.m as usize, events)?);
    }
    let elapsed_seconds = best.as_secs_f64();
    Ok(BenchRecord {
        implementation: cell.implementation,
        query: cell.query,
        preset: cell.preset,
        n: cell.n,
        m: cell.m,
        seed: cell.seed,
        elapsed_seconds,
        updates_per_second: if elapsed_seconds > 0.0 {
            cell.n as f64 / elapsed_seconds
        } else {
            f64::INFINITY
        },
    })
}

/// Generates the cell's stream and measures it.
pub fn run_cell(cell: &Cell) -> Result<BenchRecord> {
    if !cell.implementation.supports(cell.query) {
        return Err(Error::invalid(format!(
            "{} cannot answer {}",
            cell.implementation, cell.query
        )));
    }
    let cfg = StreamConfig::preset(cell.preset, cell.n, cell.m, cell.seed)?;
    let events = streamgen::generate(&cfg)?;
    measure(cell, &events)
}

/// Faults that verification can inject into the profiler.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    SkipPermutationSwap,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// When `n * m` is at most this, every event gets a full check;
    /// otherwise full checks run at evenly spaced checkpoints.
    pub full_check_budget: u64,
    pub checkpoints: u64,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            full_check_budget: 20_000_000,
            checkpoints: 1_000,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    /// 1-based index of the event after which the check failed.
    pub event: u64,
    pub detail: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "after event {}: {}", self.event, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub events: u64,
    pub full_checks: u64,
    pub mismatch: Option<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Replays `events` into a profiler and the oracle side by side.
///
/// The touched object's frequency is compared after every event; the
/// full query set plus the structural audit runs per the options.
/// Stops at the first mismatch.
pub fn verify_events(m: usize, events: &[LogEvent], opts: &VerifyOptions) -> Result<VerifyReport> {
    match opts.fault {
        None => verify_with(m, events, opts, &mut ()),
        Some(Fault::SkipPermutationSwap) => verify_with(m, events, opts, &mut SkipPermutationSwap),
    }
}

fn verify_with<P: Probe>(
    m: usize,
    events: &[LogEvent],
    opts: &VerifyOptions,
    probe: &mut P,
) -> Result<VerifyReport> {
    let mut profile = Profiler::new(m)?;
    let mut truth = Oracle::new(m)?;
    let n = events.len() as u64;
    let every = if n.saturating_mul(m as u64) <= opts.full_check_budget { 1 } else { (n / opts.checkpoints.max(1)).max(1) };
    let mut report = VerifyReport {
        events: n,
        full_checks: 0,
        mismatch: None,
    };

    for (i, &e) in events.iter().enumerate() {
        let step = i as u64 + 1;
        profile.apply_probed(e, probe)?;
        truth.apply(e)?;

        let got = profile.frequency(e.object)?;
        let want = truth.frequency(e.object)?;
        let detail = if got != want {
            Some(format!("frequency({}) = {got}, oracle {want}", e.object))
        } else if step.is_multiple_of(every) || step == n {
            report.full_checks += 1;
            full_check(&profile, &truth).err()
        } else {
            None
        };
        if let Some(detail) = detail {
            report.mismatch = Some(Mismatch { event: step, detail });
            break;
        }
    }
    Ok(report)
}

fn full_check(p: &Profiler, o: &Oracle) -> std::result::Result<(), String> {
    p.audit().map_err(|e| e.to_string())?;
    oracle::compare(p, o, true)
}

/// Generates the preset stream and verifies it.
pub fn verify_preset(cfg: &StreamConfig, opts: &VerifyOptions) -> Result<VerifyReport> {
    let events = streamgen::generate(cfg)?;
    verify_events(cfg.m as usize, &events, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn events(preset: Preset, n: u64, m: u32) -> Vec<LogEvent> {
        streamgen::generate(&StreamConfig::preset(preset, n, m, 5).unwrap()).unwrap()
    }

    #[test]
    fn names_parse() {
        for i in Impl::ALL {
            assert_eq!(i.name().parse::<Impl>().unwrap(), i);
        }
        for q in [Query::Mode, Query::Min, Query::Median] {
            assert_eq!(q.name().parse::<Query>().unwrap(), q);
        }
        assert!("splay".parse::<Impl>().is_err());
        assert!("mean".parse::<Query>().is_err());
    }

    #[test]
    fn heap_median_is_rejected() {
        let ev = events(Preset::Stream1, 10, 5);
        assert!(time_updates(Impl::Heap, Query::Median, 5, &ev).is_err());
        for q in [Query::Mode, Query::Min, Query::Median] {
            for i in Impl::ALL.into_iter().filter(|i| i.supports(q)) {
                time_updates(i, q, 5, &ev).unwrap();
            }
        }
    }

    #[test]
    fn record_rates() {
        let cell = Cell {
            implementation: Impl::SProfile,
            query: Query::Mode,
            preset: Preset::Stream2,
            n: 2_000,
            m: 50,
            seed: 1,
            repeats: 2,
        };
        let r = run_cell(&cell).unwrap();
        assert!(r.elapsed_seconds > 0.0);
        let rel = (r.updates_per_second * r.elapsed_seconds - 2_000.0).abs() / 2_000.0;
        assert!(rel < 1e-9);
        assert_eq!(r.csv_fields()[..6], ["sprofile", "mode", "stream2", "2000", "50", "1"]);
    }

    #[test]
    fn verify_passes_and_catches_fault() {
        let ev = events(Preset::Stream1, 3_000, 20);
        let ok = verify_events(20, &ev, &VerifyOptions::default()).unwrap();
        assert!(ok.passed(), "{:?}", ok.mismatch);
        assert_eq!(ok.full_checks, 3_000);

        let opts = VerifyOptions {
            fault: Some(Fault::SkipPermutationSwap),
            ..VerifyOptions::default()
        };
        let bad = verify_events(20, &ev, &opts).unwrap();
        assert!(!bad.passed());

        let empty = verify_events(20, &[], &VerifyOptions::default()).unwrap();
        assert!(empty.passed());
        assert_eq!(empty.full_checks, 0);
    }

    #[test]
    fn verify_checkpoints_large_runs() {
        let ev = events(Preset::Stream3, 10_000, 100);
        let opts = VerifyOptions {
            full_check_budget: 0,
            checkpoints: 10,
            fault: None,
        };
        let r = verify_events(100, &ev, &opts).unwrap();
        assert!(r.passed());
        assert_eq!(r.full_checks, 10);
    }
}
