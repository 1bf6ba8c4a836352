//! Block-set profile of a dynamic frequency array.
//!
//! The profiler keeps the frequency array `F` (one slot per object) in an
//! implicitly sorted form `T`. Equal values of `T` form maximal runs called
//! blocks, each stored once as `(l, r, f)`. Three arrays of `m` integers tie
//! everything together:
//!
//! ```text
//!   object -> position          position -> (object, block)
//!   ftot[x] = i           <->   slots[i].object = x
//!                               slots[i].block  = b,  pool[b] = (l, r, f), l <= i <= r
//! ```
//!
//! A ±1 change to one object's frequency moves that object to the edge of
//! its block (one swap in the permutation pair) and then shifts a single
//! block boundary, so every update is a fixed number of reads and writes.
//!
//! Positions are 0-based internally; every public position and block bound
//! is 1-based.

use thiserror::Error;

use crate::error::{Error, Result};
use crate::event::{Action, Frequency, LogEvent, ObjectId};
use crate::hugemem;

/// Largest universe size representable with 32-bit slot indices.
pub const MAX_OBJECTS: usize = u32::MAX as usize - 1;

/// A maximal run of equal values in the sorted frequency array, with
/// 1-based inclusive bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub l: usize,
    pub r: usize,
    pub f: Frequency,
}

impl Block {
    /// Number of objects sharing this frequency.
    pub fn len(&self) -> usize {
        self.r - self.l + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Objects tied at the maximum (or minimum) frequency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeResult {
    pub frequency: Frequency,
    pub objects: Vec<ObjectId>,
}

/// Storage accounting for the invariant audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceReport {
    pub m: usize,
    /// Integer slots in the object->position, position->object and
    /// position->block arrays. Always `3 * m`.
    pub pointer_slots: usize,
    pub live_blocks: usize,
    /// Block records ever materialized by the pool (live plus free list).
    pub pool_slots: usize,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("profile invariant violated: {0}")]
pub struct AuditFailure(pub String);

/// Observation hooks on the update path.
///
/// Every method defaults to a no-op, so `()` compiles down to the plain
/// update. Used to count work per update and to inject faults into
/// verification runs.
pub trait Probe {
    #[inline(always)]
    fn block_created(&mut self) {}
    #[inline(always)]
    fn block_deleted(&mut self) {}
    #[inline(always)]
    fn block_field_written(&mut self) {}
    #[inline(always)]
    fn permutation_written(&mut self, _slots: u32) {}
    #[inline(always)]
    fn pointer_written(&mut self) {}
    /// Fault injection: when true the permutation swap is skipped, which
    /// corrupts the profile. Only verification harnesses turn this on.
    #[inline(always)]
    fn skip_permutation_swap(&self) -> bool {
        false
    }
}

impl Probe for () {}

/// Work done by one or more updates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WorkCounters {
    pub blocks_created: u32,
    pub blocks_deleted: u32,
    pub block_field_writes: u32,
    pub permutation_writes: u32,
    pub pointer_writes: u32,
}

impl Probe for WorkCounters {
    fn block_created(&mut self) {
        self.blocks_created += 1;
    }
    fn block_deleted(&mut self) {
        self.blocks_deleted += 1;
    }
    fn block_field_written(&mut self) {
        self.block_field_writes += 1;
    }
    fn permutation_written(&mut self, slots: u32) {
        self.permutation_writes += slots;
    }
    fn pointer_written(&mut self) {
        self.pointer_writes += 1;
    }
}

/// Probe that disables the permutation swap.
#[derive(Debug, Clone, Copy, Default)]
pub struct SkipPermutationSwap;

impl Probe for SkipPermutationSwap {
    fn skip_permutation_swap(&self) -> bool {
        true
    }
}

#[inline(always)]
pub(crate) fn prefetch_read<T>(target: &T) {
    #[cfg(target_arch = "x86_64")]
    // SAFETY: prefetching is a hint and never faults.
    unsafe {
        use std::arch::x86_64::{_mm_prefetch, _MM_HINT_T0};
        _mm_prefetch::<_MM_HINT_T0>(target as *const T as *const i8);
    }
    #[cfg(not(target_arch = "x86_64"))]
    let _ = target;
}

#[derive(Debug, Clone, Copy)]
struct BlockRec {
    l: u32,
    r: u32,
    f: Frequency,
}

/// Sorted-position slot: the object stored there and its block.
#[derive(Debug, Clone, Copy)]
#[repr(C)]
struct Slot {
    object: ObjectId,
    block: u32,
}

/// Fixed-capacity block arena with a free list.
#[derive(Debug, Clone)]
struct BlockPool {
    recs: Vec<BlockRec>,
    free: Vec<u32>,
}

impl BlockPool {
    fn with_capacity(m: usize) -> Self {
        // At most m blocks are ever live, so neither vector reallocates.
        BlockPool {
            recs: hugemem::vec_with_capacity(m),
            free: hugemem::vec_with_capacity(m),
        }
    }

    #[inline]
    fn alloc(&mut self, rec: BlockRec) -> u32 {
        match self.free.pop() {
            Some(id) => {
                self.recs[id as usize] = rec;
                id
            }
            None => {
                debug_assert!(self.recs.len() < self.recs.capacity());
                self.recs.push(rec);
                (self.recs.len() - 1) as u32
            }
        }
    }

    #[inline]
    fn release(&mut self, id: u32) {
        self.free.push(id);
    }

    #[inline(always)]
    fn get(&self, id: u32) -> &BlockRec {
        debug_assert!((id as usize) < self.recs.len());
        // SAFETY: block ids come from `alloc`, which only hands out indices
        // below `recs.len()`, and `recs` never shrinks.
        unsafe { self.recs.get_unchecked(id as usize) }
    }

    #[inline(always)]
    fn get_mut(&mut self, id: u32) -> &mut BlockRec {
        debug_assert!((id as usize) < self.recs.len());
        // SAFETY: as in `get`.
        unsafe { self.recs.get_unchecked_mut(id as usize) }
    }

    fn live(&self) -> usize {
        self.recs.len() - self.free.len()
    }
}

/// Constant-time profile of the frequency array of `m` objects.
#[derive(Debug, Clone)]
pub struct Profiler {
    ftot: Vec<u32>,
    slots: Vec<Slot>,
    pool: BlockPool,
    net: i64,
}

impl Profiler {
    /// All `m` objects start at frequency zero in a single block.
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("profiler needs m >= 1"));
        }
        if m > MAX_OBJECTS {
            return Err(Error::invalid(format!(
                "m = {m} exceeds the supported maximum {MAX_OBJECTS}"
            )));
        }
        let mut pool = BlockPool::with_capacity(m);
        let all = pool.alloc(BlockRec {
            l: 0,
            r: (m - 1) as u32,
            f: 0,
        });
        Ok(Profiler {
            ftot: hugemem::collect(0..m as u32),
            slots: hugemem::collect((0..m).map(|i| Slot {
                object: ObjectId::from_index(i),
                block: all,
            })),
            pool,
            net: 0,
        })
    }

    /// Universe size.
    #[inline]
    pub fn m(&self) -> usize {
        self.slots.len()
    }

    /// Adds minus removes applied so far.
    pub fn net_count(&self) -> i64 {
        self.net
    }

    pub fn live_blocks(&self) -> usize {
        self.pool.live()
    }

    pub fn increment(&mut self, x: ObjectId) -> Result<()> {
        let idx = x.checked_index(self.m())?;
        self.step_up(idx, &mut ());
        self.net += 1;
        Ok(())
    }

    pub fn decrement(&mut self, x: ObjectId) -> Result<()> {
        let idx = x.checked_index(self.m())?;
        self.step_down(idx, &mut ());
        self.net -= 1;
        Ok(())
    }

    #[inline]
    pub fn apply(&mut self, event: LogEvent) -> Result<()> {
        self.apply_probed(event, &mut ())
    }

    /// [`apply`](Self::apply) with observation hooks on the update path.
    #[inline]
    pub fn apply_probed<P: Probe>(&mut self, event: LogEvent, probe: &mut P) -> Result<()> {
        let idx = event.object.checked_index(self.m())?;
        match event.action {
            Action::Add => {
                self.step_up(idx, probe);
                self.net += 1;
            }
            Action::Remove => {
                self.step_down(idx, probe);
                self.net -= 1;
            }
        }
        Ok(())
    }

    /// Applies events in order, stopping at the first invalid one.
    pub fn apply_all<'a, I>(&mut self, events: I) -> Result<()>
    where
        I: IntoIterator<Item = &'a LogEvent>,
    {
        events.into_iter().try_for_each(|e| self.apply(*e))
    }

    /// Cache hints for an update that is `stage` steps from being
    /// applied, 0 being the furthest. Stage 0 touches the object's
    /// position entry, stage 1 its sorted slot, stage 2 the position entry
    /// of the object it will swap with. Hints read the current state, so a
    /// stale hint only costs a wasted prefetch.
    #[inline(always)]
    pub fn prefetch(&self, event: LogEvent, stage: u8) {
        let idx = event.object.index();
        if idx >= self.ftot.len() {
            return;
        }
        match stage {
            0 => prefetch_read(&self.ftot[idx]),
            1 => prefetch_read(self.slot(self.ftot[idx] as usize)),
            _ => {
                let rec = self.pool.get(self.slot(self.ftot[idx] as usize).block);
                let edge = match event.action {
                    Action::Add => rec.r,
                    Action::Remove => rec.l,
                };
                let y = self.slot(edge as usize).object.index();
                prefetch_read(&self.ftot[y]);
            }
        }
    }

    /// Moves object `x` to the top of its block and raises it into the
    /// next frequency.
    #[inline(always)]
    fn step_up<P: Probe>(&mut self, x: usize, probe: &mut P) {
        let m = self.slots.len();
        let rank = self.ftot[x] as usize;
        let b = self.slot(rank).block;
        let BlockRec { l, r, f } = *self.pool.get(b);
        let r = r as usize;

        if !probe.skip_permutation_swap() {
            self.swap_positions(x, rank, r, probe);
        }

        let raised = f + 1;
        let right = if r + 1 < m {
            let nb = self.slot(r + 1).block;
            (self.pool.get(nb).f == raised).then_some(nb)
        } else {
            None
        };

        if l as usize == r {
            match right {
                Some(nb) => {
                    self.pool.release(b);
                    probe.block_deleted();
                    self.join(nb, r, true, probe);
                }
                // Singleton block: relabel in place.
                None => {
                    self.pool.get_mut(b).f = raised;
                    probe.block_field_written();
                }
            }
        } else {
            self.pool.get_mut(b).r = (r - 1) as u32;
            probe.block_field_written();
            match right {
                Some(nb) => self.join(nb, r, true, probe),
                None => self.fresh(r, raised, probe),
            }
        }
    }

    /// Mirror of [`step_up`](Self::step_up) at the bottom of the block.
    #[inline(always)]
    fn step_down<P: Probe>(&mut self, x: usize, probe: &mut P) {
        let rank = self.ftot[x] as usize;
        let b = self.slot(rank).block;
        let BlockRec { l, r, f } = *self.pool.get(b);
        let l = l as usize;

        if !probe.skip_permutation_swap() {
            self.swap_positions(x, rank, l, probe);
        }

        let lowered = f - 1;
        let left = if l > 0 {
            let nb = self.slot(l - 1).block;
            (self.pool.get(nb).f == lowered).then_some(nb)
        } else {
            None
        };

        if l == r as usize {
            match left {
                Some(nb) => {
                    self.pool.release(b);
                    probe.block_deleted();
                    self.join(nb, l, false, probe);
                }
                None => {
                    self.pool.get_mut(b).f = lowered;
                    probe.block_field_written();
                }
            }
        } else {
            self.pool.get_mut(b).l = (l + 1) as u32;
            probe.block_field_written();
            match left {
                Some(nb) => self.join(nb, l, false, probe),
                None => self.fresh(l, lowered, probe),
            }
        }
    }

    /// Exchanges the objects at sorted positions `rank` (holding object
    /// `x`) and `edge`.
    #[inline(always)]
    fn swap_positions<P: Probe>(&mut self, x: usize, rank: usize, edge: usize, probe: &mut P) {
        let y = self.slot(edge).object;
        self.slot_mut(edge).object = ObjectId::from_index(x);
        self.slot_mut(rank).object = y;
        self.ftot[x] = edge as u32;
        let yi = y.index();
        debug_assert!(yi < self.ftot.len());
        // SAFETY: every slot holds an object id in [1, m], written either at
        // construction or by this swap from an index already validated.
        unsafe { *self.ftot.get_unchecked_mut(yi) = rank as u32 };
        probe.permutation_written(4);
    }

    /// Extends neighbor block `nb` by one position to cover `pos`.
    #[inline(always)]
    fn join<P: Probe>(&mut self, nb: u32, pos: usize, from_left: bool, probe: &mut P) {
        let rec = self.pool.get_mut(nb);
        if from_left {
            rec.l = pos as u32;
        } else {
            rec.r = pos as u32;
        }
        probe.block_field_written();
        self.slot_mut(pos).block = nb;
        probe.pointer_written();
    }

    #[inline(always)]
    fn fresh<P: Probe>(&mut self, pos: usize, f: Frequency, probe: &mut P) {
        let nb = self.pool.alloc(BlockRec {
            l: pos as u32,
            r: pos as u32,
            f,
        });
        probe.block_created();
        self.slot_mut(pos).block = nb;
        probe.pointer_written();
    }

    // Positions handed to these come from `ftot` or from block bounds,
    // both of which always lie in [0, m).
    #[inline(always)]
    fn slot(&self, pos: usize) -> &Slot {
        debug_assert!(pos < self.slots.len());
        // SAFETY: see above.
        unsafe { self.slots.get_unchecked(pos) }
    }

    #[inline(always)]
    fn slot_mut(&mut self, pos: usize) -> &mut Slot {
        debug_assert!(pos < self.slots.len());
        // SAFETY: see above.
        unsafe { self.slots.get_unchecked_mut(pos) }
    }

    #[inline]
    fn rec_at(&self, pos: usize) -> &BlockRec {
        self.pool.get(self.slots[pos].block)
    }

    fn tie_class(&self, pos: usize) -> ModeResult {
        let rec = self.rec_at(pos);
        ModeResult {
            frequency: rec.f,
            objects: self.slots[rec.l as usize..=rec.r as usize]
                .iter()
                .map(|s| s.object)
                .collect(),
        }
    }

    /// Highest frequency and every object attaining it.
    pub fn mode(&self) -> ModeResult {
        self.tie_class(self.m() - 1)
    }

    /// Lowest frequency (possibly negative) and every object attaining it.
    pub fn min_objects(&self) -> ModeResult {
        self.tie_class(0)
    }

    /// Highest frequency and the size of its tie class, without
    /// materializing the object list.
    #[inline]
    pub fn mode_summary(&self) -> (Frequency, usize) {
        let rec = self.rec_at(self.m() - 1);
        (rec.f, (rec.r - rec.l + 1) as usize)
    }

    /// Lowest frequency and the size of its tie class.
    #[inline]
    pub fn min_summary(&self) -> (Frequency, usize) {
        let rec = self.rec_at(0);
        (rec.f, (rec.r - rec.l + 1) as usize)
    }

    pub fn frequency(&self, x: ObjectId) -> Result<Frequency> {
        let idx = x.checked_index(self.m())?;
        Ok(self.rec_at(self.ftot[idx] as usize).f)
    }

    /// Frequency at 1-based sorted position `pos` and the object held there.
    pub fn at_position(&self, pos: usize) -> Result<(Frequency, ObjectId)> {
        let m = self.m();
        if pos == 0 || pos > m {
            return Err(Error::RankOutOfRange { k: pos, m });
        }
        let slot = self.slots[pos - 1];
        Ok((self.pool.get(slot.block).f, slot.object))
    }

    /// 1-based sorted position currently held by `x`.
    pub fn position_of(&self, x: ObjectId) -> Result<usize> {
        let idx = x.checked_index(self.m())?;
        Ok(self.ftot[idx] as usize + 1)
    }

    /// Block covering 1-based sorted position `pos`.
    pub fn block_at(&self, pos: usize) -> Result<Block> {
        let m = self.m();
        if pos == 0 || pos > m {
            return Err(Error::RankOutOfRange { k: pos, m });
        }
        Ok(self.view(self.rec_at(pos - 1)))
    }

    fn view(&self, rec: &BlockRec) -> Block {
        Block {
            l: rec.l as usize + 1,
            r: rec.r as usize + 1,
            f: rec.f,
        }
    }

    /// The k-th largest frequency (with multiplicity) and one object
    /// holding it.
    pub fn kth_largest(&self, k: usize) -> Result<(Frequency, ObjectId)> {
        let m = self.m();
        if k == 0 || k > m {
            return Err(Error::RankOutOfRange { k, m });
        }
        self.at_position(m - k + 1)
    }

    /// Lower median: sorted position `(m + 1) / 2`.
    pub fn median(&self) -> (Frequency, ObjectId) {
        let slot = self.slots[self.m().div_ceil(2) - 1];
        (self.pool.get(slot.block).f, slot.object)
    }

    /// Lower-median frequency alone.
    #[inline]
    pub fn median_frequency(&self) -> Frequency {
        self.rec_at(self.m().div_ceil(2) - 1).f
    }

    /// The `k` objects at the top of the sorted order, highest first.
    pub fn top_k_objects(&self, k: usize) -> Result<Vec<(ObjectId, Frequency)>> {
        let m = self.m();
        if k == 0 || k > m {
            return Err(Error::RankOutOfRange { k, m });
        }
        Ok(self.slots[m - k..]
            .iter()
            .rev()
            .map(|s| (s.object, self.pool.get(s.block).f))
            .collect())
    }

    /// Blocks in increasing frequency order.
    pub fn blocks(&self) -> Blocks<'_> {
        Blocks {
            profiler: self,
            next: 0,
        }
    }

    /// `(frequency, number of objects)` pairs in strictly increasing
    /// frequency order. Costs one step per block.
    pub fn histogram(&self) -> Vec<(Frequency, usize)> {
        self.blocks().map(|b| (b.f, b.len())).collect()
    }

    pub fn space(&self) -> SpaceReport {
        SpaceReport {
            m: self.m(),
            pointer_slots: self.ftot.len() + 2 * self.slots.len(),
            live_blocks: self.pool.live(),
            pool_slots: self.pool.recs.len(),
        }
    }

    /// Full O(m) consistency check of the profile.
    pub fn audit(&self) -> Result<(), AuditFailure> {
        let m = self.m();
        let fail = |msg: String| Err(AuditFailure(msg));

        if self.ftot.len() != m {
            return fail(format!("ftot has {} slots, expected {m}", self.ftot.len()));
        }
        for (x, &pos) in self.ftot.iter().enumerate() {
            let pos = pos as usize;
            if pos >= m {
                return fail(format!("object {} maps to position {pos} >= m", x + 1));
            }
            if self.slots[pos].object.index() != x {
                return fail(format!(
                    "ftot/ttof not inverse: object {} -> position {} -> object {}",
                    x + 1,
                    pos + 1,
                    self.slots[pos].object
                ));
            }
        }

        let mut pos = 0usize;
        let mut walked = 0usize;
        let mut prev: Option<Frequency> = None;
        let mut total: i128 = 0;
        while pos < m {
            let id = self.slots[pos].block;
            if id as usize >= self.pool.recs.len() || self.pool.free.contains(&id) {
                return fail(format!("position {} points at a dead block", pos + 1));
            }
            let rec = *self.pool.get(id);
            let (l, r) = (rec.l as usize, rec.r as usize);
            if l != pos || r < l || r >= m {
                return fail(format!(
                    "block ({}, {}, {}) does not start at walk position {}",
                    l + 1,
                    r + 1,
                    rec.f,
                    pos + 1
                ));
            }
            if let Some(p) = prev {
                if rec.f <= p {
                    return fail(format!(
                        "block frequencies not strictly increasing: {p} then {}",
                        rec.f
                    ));
                }
            }
            for i in l..=r {
                if self.slots[i].block != id {
                    return fail(format!("position {} not linked to its block", i + 1));
                }
            }
            total += i128::from(rec.f) * (r - l + 1) as i128;
            prev = Some(rec.f);
            walked += 1;
            pos = r + 1;
        }
        if walked != self.pool.live() {
            return fail(format!(
                "{walked} blocks reachable but {} live in the pool",
                self.pool.live()
            ));
        }
        if total != i128::from(self.net) {
            return fail(format!(
                "frequencies sum to {total}, net count is {}",
                self.net
            ));
        }
        Ok(())
    }
}

/// Iterator over the blocks of a [`Profiler`], lowest frequency first.
#[derive(Debug, Clone)]
pub struct Blocks<'a> {
    profiler: &'a Profiler,
    next: usize,
}

impl Iterator for Blocks<'_> {
    type Item = Block;

    fn next(&mut self) -> Option<Block> {
        if self.next >= self.profiler.m() {
            return None;
        }
        let rec = self.profiler.rec_at(self.next);
        self.next = rec.r as usize + 1;
        Some(self.profiler.view(rec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(x: u32) -> ObjectId {
        ObjectId::new(x).unwrap()
    }

    fn blocks(p: &Profiler) -> Vec<(usize, usize, Frequency)> {
        p.blocks().map(|b| (b.l, b.r, b.f)).collect()
    }

    fn ids(xs: &[u32]) -> Vec<ObjectId> {
        xs.iter().map(|&x| id(x)).collect()
    }

    fn sorted(mut v: Vec<ObjectId>) -> Vec<ObjectId> {
        v.sort();
        v
    }

    #[test]
    fn fresh_profile_is_one_zero_block() {
        let p = Profiler::new(3).unwrap();
        assert_eq!(blocks(&p), vec![(1, 3, 0)]);
        for x in 1..=3 {
            assert_eq!(p.position_of(id(x)).unwrap(), x as usize);
        }
        assert_eq!(p.mode(), ModeResult { frequency: 0, objects: ids(&[1, 2, 3]) });
        assert_eq!(p.net_count(), 0);
        p.audit().unwrap();

        let one = Profiler::new(1).unwrap();
        assert_eq!(blocks(&one), vec![(1, 1, 0)]);
    }

    #[test]
    fn rejects_bad_sizes_and_ids() {
        assert!(matches!(Profiler::new(0), Err(Error::InvalidArgument(_))));
        let mut p = Profiler::new(3).unwrap();
        assert!(matches!(
            p.increment(id(4)),
            Err(Error::ObjectOutOfRange { id: 4, m: 3 })
        ));
        assert!(p.decrement(id(4)).is_err());
        assert!(p.frequency(id(9)).is_err());
        assert!(p.kth_largest(0).is_err());
        assert!(p.kth_largest(4).is_err());
        assert!(p.top_k_objects(0).is_err());
        assert!(p.top_k_objects(4).is_err());
        // Rejected calls leave no trace.
        assert_eq!(p.net_count(), 0);
        p.audit().unwrap();
    }

    #[test]
    fn single_increment() {
        let mut p = Profiler::new(3).unwrap();
        p.increment(id(2)).unwrap();
        assert_eq!(blocks(&p), vec![(1, 2, 0), (3, 3, 1)]);
        let ttof: Vec<u32> = (1..=3).map(|i| p.at_position(i).unwrap().1.get()).collect();
        assert_eq!(ttof, vec![1, 3, 2]);
        assert_eq!(p.frequency(id(2)).unwrap(), 1);
        assert_eq!(p.histogram(), vec![(0, 2), (1, 1)]);
        p.audit().unwrap();
    }

    #[test]
    fn repeated_increment_relabels_singleton() {
        let mut p = Profiler::new(3).unwrap();
        p.increment(id(2)).unwrap();
        p.increment(id(2)).unwrap();
        assert_eq!(blocks(&p), vec![(1, 2, 0), (3, 3, 2)]);
        assert_eq!(p.frequency(id(2)).unwrap(), 2);

        p.increment(id(1)).unwrap();
        assert_eq!(blocks(&p), vec![(1, 1, 0), (2, 2, 1), (3, 3, 2)]);
        assert_eq!(p.mode(), ModeResult { frequency: 2, objects: ids(&[2]) });
        assert_eq!(p.min_objects(), ModeResult { frequency: 0, objects: ids(&[3]) });
        p.audit().unwrap();
    }

    #[test]
    fn decrement_goes_negative() {
        let mut p = Profiler::new(3).unwrap();
        p.decrement(id(1)).unwrap();
        assert_eq!(blocks(&p), vec![(1, 1, -1), (2, 3, 0)]);
        assert_eq!(p.frequency(id(1)).unwrap(), -1);
        assert_eq!(p.min_objects(), ModeResult { frequency: -1, objects: ids(&[1]) });
        assert_eq!(p.net_count(), -1);
        p.audit().unwrap();
    }

    #[test]
    fn increment_then_decrement_restores_shape() {
        let mut p = Profiler::new(3).unwrap();
        p.increment(id(2)).unwrap();
        p.decrement(id(2)).unwrap();
        assert_eq!(blocks(&p), vec![(1, 3, 0)]);
        assert_eq!(p.live_blocks(), 1);
        p.audit().unwrap();
    }

    #[test]
    fn decrement_to_new_value_creates_block() {
        // Frequencies [2, 2, 4]: removing one of the 2s needs a block at 1.
        let mut p = Profiler::new(3).unwrap();
        for (x, times) in [(1, 2), (2, 2), (3, 4)] {
            for _ in 0..times {
                p.increment(id(x)).unwrap();
            }
        }
        assert_eq!(blocks(&p), vec![(1, 2, 2), (3, 3, 4)]);
        let mut work = WorkCounters::default();
        p.apply_probed(LogEvent::remove(2).unwrap(), &mut work).unwrap();
        assert_eq!(work.blocks_created, 1);
        assert_eq!(blocks(&p), vec![(1, 1, 1), (2, 2, 2), (3, 3, 4)]);
        assert_eq!(p.frequency(id(2)).unwrap(), 1);
        p.audit().unwrap();

        // Removing the 4 twice: first relabels its singleton to 3, then
        // merges into the 2-block.
        p.decrement(id(3)).unwrap();
        assert_eq!(blocks(&p), vec![(1, 1, 1), (2, 2, 2), (3, 3, 3)]);
        p.decrement(id(3)).unwrap();
        assert_eq!(blocks(&p), vec![(1, 1, 1), (2, 3, 2)]);
        assert_eq!(sorted(p.mode().objects), ids(&[1, 3]));
        p.audit().unwrap();
    }

    #[test]
    fn median_and_kth() {
        let mut p = Profiler::new(3).unwrap();
        p.decrement(id(1)).unwrap();
        p.increment(id(3)).unwrap();
        p.increment(id(3)).unwrap();
        assert_eq!(p.median(), (0, id(2)));
        assert_eq!(p.kth_largest(1).unwrap(), (2, id(3)));
        assert_eq!(p.kth_largest(2).unwrap().0, 0);
        assert_eq!(p.kth_largest(3).unwrap(), (-1, id(1)));
        assert_eq!(
            p.top_k_objects(3).unwrap(),
            vec![(id(3), 2), (id(2), 0), (id(1), -1)]
        );
        assert_eq!(p.histogram(), vec![(-1, 1), (0, 1), (2, 1)]);
    }

    #[test]
    fn work_per_update_is_bounded() {
        let mut p = Profiler::new(4).unwrap();
        let script = [(1, true), (1, true), (2, true), (2, true), (1, false), (3, false), (3, true)];
        for (x, add) in script {
            let e = if add { LogEvent::add(x) } else { LogEvent::remove(x) }.unwrap();
            let mut w = WorkCounters::default();
            p.apply_probed(e, &mut w).unwrap();
            assert!(w.blocks_created <= 1 && w.blocks_deleted <= 1, "{w:?}");
            assert!(w.block_field_writes <= 2 && w.permutation_writes <= 4, "{w:?}");
            assert!(w.pointer_writes <= 2, "{w:?}");
            p.audit().unwrap();
        }
    }

    #[test]
    fn skipping_the_swap_breaks_the_profile() {
        let mut p = Profiler::new(3).unwrap();
        p.apply_probed(LogEvent::add(1).unwrap(), &mut SkipPermutationSwap)
            .unwrap();
        // Object 1 still sits at position 1, which now claims frequency 0.
        assert_eq!(p.frequency(id(1)).unwrap(), 0);
        assert_eq!(p.mode().objects, ids(&[3]));
    }

    #[test]
    fn space_is_three_m_slots() {
        let mut p = Profiler::new(5).unwrap();
        for x in [1, 2, 2, 3, 3, 3] {
            p.increment(id(x)).unwrap();
        }
        let s = p.space();
        assert_eq!(s.pointer_slots, 15);
        assert_eq!(s.live_blocks, 4);
        assert!(s.pool_slots <= 5);
    }
}
