//! Brute-force reference for every profile query.
//!
//! Keeps the plain frequency array and answers each query by a full scan
//! or sort. Deliberately naive: it is the ground truth the block-set
//! profile is tested against.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::event::{Action, Frequency, LogEvent, ObjectId};
use crate::profile::{ModeResult, Profiler};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Oracle {
    freq: Vec<Frequency>,
    adds: u64,
    removes: u64,
}

impl Oracle {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("oracle needs m >= 1"));
        }
        Ok(Oracle {
            freq: vec![0; m],
            adds: 0,
            removes: 0,
        })
    }

    pub fn m(&self) -> usize {
        self.freq.len()
    }

    pub fn frequencies(&self) -> &[Frequency] {
        &self.freq
    }

    pub fn adds(&self) -> u64 {
        self.adds
    }

    pub fn removes(&self) -> u64 {
        self.removes
    }

    pub fn apply(&mut self, event: LogEvent) -> Result<()> {
        let idx = event.object.checked_index(self.m())?;
        match event.action {
            Action::Add => {
                self.freq[idx] += 1;
                self.adds += 1;
            }
            Action::Remove => {
                self.freq[idx] -= 1;
                self.removes += 1;
            }
        }
        Ok(())
    }

    pub fn frequency(&self, x: ObjectId) -> Result<Frequency> {
        Ok(self.freq[x.checked_index(self.m())?])
    }

    /// Sorted copy of the frequency array, shared by the order queries.
    pub fn snapshot(&self) -> Snapshot<'_> {
        let mut sorted = self.freq.clone();
        sorted.sort_unstable();
        Snapshot {
            oracle: self,
            sorted,
        }
    }

    pub fn mode(&self) -> ModeResult {
        self.snapshot().mode()
    }

    pub fn min_objects(&self) -> ModeResult {
        self.snapshot().min_objects()
    }

    pub fn kth_largest(&self, k: usize) -> Result<Frequency> {
        self.snapshot().kth_largest(k)
    }

    pub fn median(&self) -> Frequency {
        self.snapshot().median()
    }

    pub fn histogram(&self) -> Vec<(Frequency, usize)> {
        self.snapshot().histogram()
    }

    /// Frequencies of the `k` largest entries, highest first.
    pub fn top_k(&self, k: usize) -> Result<Vec<Frequency>> {
        self.snapshot().top_k(k)
    }
}

/// One sort of the oracle's frequency array.
#[derive(Debug, Clone)]
pub struct Snapshot<'a> {
    oracle: &'a Oracle,
    sorted: Vec<Frequency>,
}

impl Snapshot<'_> {
    pub fn sorted(&self) -> &[Frequency] {
        &self.sorted
    }

    /// All objects whose frequency equals `value`, ascending by id.
    pub fn objects_with(&self, value: Frequency) -> Vec<ObjectId> {
        self.oracle
            .freq
            .iter()
            .enumerate()
            .filter(|&(_, &f)| f == value)
            .map(|(i, _)| ObjectId::from_index(i))
            .collect()
    }

    pub fn mode(&self) -> ModeResult {
        let frequency = *self.sorted.last().expect("m >= 1");
        ModeResult {
            frequency,
            objects: self.objects_with(frequency),
        }
    }

    pub fn min_objects(&self) -> ModeResult {
        let frequency = self.sorted[0];
        ModeResult {
            frequency,
            objects: self.objects_with(frequency),
        }
    }

    pub fn kth_largest(&self, k: usize) -> Result<Frequency> {
        let m = self.sorted.len();
        if k == 0 || k > m {
            return Err(Error::RankOutOfRange { k, m });
        }
        Ok(self.sorted[m - k])
    }

    /// Lower median over all `m` entries.
    pub fn median(&self) -> Frequency {
        self.sorted[self.sorted.len().div_ceil(2) - 1]
    }

    pub fn top_k(&self, k: usize) -> Result<Vec<Frequency>> {
        let m = self.sorted.len();
        if k == 0 || k > m {
            return Err(Error::RankOutOfRange { k, m });
        }
        Ok(self.sorted.iter().rev().take(k).copied().collect())
    }

    pub fn histogram(&self) -> Vec<(Frequency, usize)> {
        let mut counts = BTreeMap::new();
        for &f in &self.sorted {
            *counts.entry(f).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }

    pub fn distinct_values(&self) -> usize {
        self.histogram().len()
    }
}

/// Compares every profile query against the oracle and describes the
/// first disagreement. Ties are compared as full sets for mode and min;
/// for single-position queries the returned object must belong to the
/// oracle's tie class. `all_ranks` checks `kth_largest` for every `k`
/// instead of only the extremes and the median.
pub fn compare(p: &Profiler, o: &Oracle, all_ranks: bool) -> std::result::Result<(), String> {
    let m = o.m();
    if p.m() != m {
        return Err(format!("universe sizes differ: {} vs {m}", p.m()));
    }
    let s = o.snapshot();

    for (i, &want) in o.freq.iter().enumerate() {
        let x = ObjectId::from_index(i);
        let got = p.frequency(x).map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!("frequency({x}) = {got}, oracle {want}"));
        }
    }

    for (name, got, want) in [
        ("mode", p.mode(), s.mode()),
        ("min", p.min_objects(), s.min_objects()),
    ] {
        let mut got = got;
        got.objects.sort_unstable();
        if got != want {
            return Err(format!("{name} = {got:?}, oracle {want:?}"));
        }
    }

    let member = |what: &str, f: Frequency, x: ObjectId| -> std::result::Result<(), String> {
        match o.frequency(x) {
            Ok(fx) if fx == f => Ok(()),
            _ => Err(format!("{what} returned object {x} which does not hold frequency {f}")),
        }
    };

    let (median, mx) = p.median();
    if median != s.median() {
        return Err(format!("median = {median}, oracle {}", s.median()));
    }
    member("median", median, mx)?;

    let ranks: Vec<usize> = if all_ranks {
        (1..=m).collect()
    } else {
        vec![1, m.div_ceil(2), m]
    };
    for k in ranks {
        let (f, x) = p.kth_largest(k).map_err(|e| e.to_string())?;
        let want = s.kth_largest(k).map_err(|e| e.to_string())?;
        if f != want {
            return Err(format!("kth_largest({k}) = {f}, oracle {want}"));
        }
        member("kth_largest", f, x)?;
    }

    let top = p.top_k_objects(m).map_err(|e| e.to_string())?;
    let want_top = s.top_k(m).map_err(|e| e.to_string())?;
    let got_top: Vec<Frequency> = top.iter().map(|&(_, f)| f).collect();
    if got_top != want_top {
        return Err(format!("top_k({m}) frequencies {got_top:?}, oracle {want_top:?}"));
    }
    let mut seen: Vec<ObjectId> = top.iter().map(|&(x, _)| x).collect();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != m {
        return Err("top_k(m) repeats an object".to_string());
    }
    for &(x, f) in &top {
        member("top_k", f, x)?;
    }

    let hist = p.histogram();
    let want_hist = s.histogram();
    if hist != want_hist {
        return Err(format!("histogram {hist:?}, oracle {want_hist:?}"));
    }
    if p.live_blocks() != want_hist.len() {
        return Err(format!(
            "{} live blocks for {} distinct values",
            p.live_blocks(),
            want_hist.len()
        ));
    }
    let net = o.adds as i64 - o.removes as i64;
    if p.net_count() != net {
        return Err(format!("net count {}, oracle {net}", p.net_count()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oracle_with(freq: &[Frequency]) -> Oracle {
        let mut o = Oracle::new(freq.len()).unwrap();
        for (i, &f) in freq.iter().enumerate() {
            let e = if f >= 0 {
                LogEvent::add(i as u32 + 1)
            } else {
                LogEvent::remove(i as u32 + 1)
            }
            .unwrap();
            for _ in 0..f.abs() {
                o.apply(e).unwrap();
            }
        }
        o
    }

    #[test]
    fn apply_moves_counts() {
        let mut o = Oracle::new(3).unwrap();
        o.apply(LogEvent::add(2).unwrap()).unwrap();
        assert_eq!(o.frequencies(), &[0, 1, 0]);
        o.apply(LogEvent::remove(2).unwrap()).unwrap();
        assert_eq!(o.frequencies(), &[0, 0, 0]);

        let mut fresh = Oracle::new(3).unwrap();
        fresh.apply(LogEvent::remove(1).unwrap()).unwrap();
        assert_eq!(fresh.frequencies(), &[-1, 0, 0]);
        assert!(fresh.apply(LogEvent::add(4).unwrap()).is_err());
        assert_eq!(fresh.adds() as i64 - fresh.removes() as i64, fresh.frequencies().iter().sum::<i64>());
    }

    #[test]
    fn queries_on_known_arrays() {
        let zeros = oracle_with(&[0, 0, 0]);
        assert_eq!(zeros.mode().frequency, 0);
        assert_eq!(zeros.mode().objects.len(), 3);

        let o = oracle_with(&[-1, 0, 2]);
        assert_eq!(o.kth_largest(2).unwrap(), 0);
        assert_eq!(o.median(), 0);
        assert_eq!(o.min_objects().objects, vec![ObjectId::new(1).unwrap()]);
        assert_eq!(o.histogram(), vec![(-1, 1), (0, 1), (2, 1)]);
        assert_eq!(o.top_k(2).unwrap(), vec![2, 0]);
        assert!(o.kth_largest(4).is_err());
    }

    #[test]
    fn lower_median_for_even_m() {
        let o = oracle_with(&[5, 1, 3, 7]);
        assert_eq!(o.median(), 3);
    }

    #[test]
    fn histogram_counts_sum_to_m() {
        let o = oracle_with(&[3, -2, 3, 0, 0, 1, -2, 9]);
        assert_eq!(o.histogram().iter().map(|&(_, c)| c).sum::<usize>(), 8);
    }
}
