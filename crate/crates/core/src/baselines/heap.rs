use std::marker::PhantomData;

use crate::error::{Error, Result};
use crate::event::{Action, Frequency, LogEvent, ObjectId};
use crate::hugemem;
use crate::profile::prefetch_read;

/// Which end of the frequency order sits at the root.
pub trait HeapOrder {
    /// True when frequency `a` belongs strictly above `b`.
    fn above(a: Frequency, b: Frequency) -> bool;
    /// The action that moves an element toward the root.
    const RISING: Action;
}

#[derive(Debug, Clone, Copy)]
pub struct MaxFirst;

#[derive(Debug, Clone, Copy)]
pub struct MinFirst;

impl HeapOrder for MaxFirst {
    #[inline(always)]
    fn above(a: Frequency, b: Frequency) -> bool {
        a > b
    }
    const RISING: Action = Action::Add;
}

impl HeapOrder for MinFirst {
    #[inline(always)]
    fn above(a: Frequency, b: Frequency) -> bool {
        a < b
    }
    const RISING: Action = Action::Remove;
}

pub type MaxHeap = IndexedHeap<MaxFirst>;
pub type MinHeap = IndexedHeap<MinFirst>;

/// Binary heap over all `m` objects keyed by frequency, with a position
/// map so one object's key can change in place and be sifted.
#[derive(Debug, Clone)]
pub struct IndexedHeap<O> {
    /// Heap slots holding 0-based object indices.
    heap: Vec<u32>,
    /// Object index -> heap slot.
    pos: Vec<u32>,
    freq: Vec<Frequency>,
    _order: PhantomData<O>,
}

impl<O: HeapOrder> IndexedHeap<O> {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 || m > crate::profile::MAX_OBJECTS {
            return Err(Error::invalid(format!("heap size {m} out of range")));
        }
        Ok(IndexedHeap {
            heap: hugemem::collect(0..m as u32),
            pos: hugemem::collect(0..m as u32),
            freq: hugemem::collect(std::iter::repeat_n(0, m)),
            _order: PhantomData,
        })
    }

    pub fn m(&self) -> usize {
        self.heap.len()
    }

    #[inline]
    pub fn apply(&mut self, event: LogEvent) -> Result<()> {
        let x = event.object.checked_index(self.m())?;
        self.freq[x] += event.action.delta();
        let slot = self.pos[x] as usize;
        if event.action == O::RISING {
            self.sift_up(slot);
        } else {
            self.sift_down(slot);
        }
        Ok(())
    }

    /// Cache hints for an update `stage` steps ahead, 0 being the
    /// furthest: stage 0 touches the object's key and heap position, stage 1
    /// its slot with the parent and child slots, stage 2 the keys of that
    /// parent and those children.
    #[inline(always)]
    pub fn prefetch(&self, event: LogEvent, stage: u8) {
        let x = event.object.index();
        if x >= self.pos.len() {
            return;
        }
        if stage == 0 {
            prefetch_read(&self.pos[x]);
            prefetch_read(&self.freq[x]);
            return;
        }
        let slot = self.pos[x] as usize;
        let parent = slot.saturating_sub(1) / 2;
        let child = (2 * slot + 1).min(self.heap.len() - 1);
        if stage == 1 {
            prefetch_read(&self.heap[slot]);
            prefetch_read(&self.heap[parent]);
            prefetch_read(&self.heap[child]);
        } else {
            prefetch_read(&self.freq[self.heap[parent] as usize]);
            prefetch_read(&self.freq[self.heap[child] as usize]);
            if child + 1 < self.heap.len() {
                prefetch_read(&self.freq[self.heap[child + 1] as usize]);
            }
        }
    }

    /// Root object and its frequency.
    #[inline]
    pub fn peek(&self) -> (ObjectId, Frequency) {
        let x = self.heap[0] as usize;
        (ObjectId::from_index(x), self.freq[x])
    }

    pub fn frequency(&self, x: ObjectId) -> Result<Frequency> {
        Ok(self.freq[x.checked_index(self.m())?])
    }

    #[inline]
    fn sift_up(&mut self, mut slot: usize) {
        let x = self.heap[slot];
        let key = self.freq[x as usize];
        while slot > 0 {
            let parent = (slot - 1) / 2;
            let px = self.heap[parent];
            if !O::above(key, self.freq[px as usize]) {
                break;
            }
            self.heap[slot] = px;
            self.pos[px as usize] = slot as u32;
            slot = parent;
        }
        self.heap[slot] = x;
        self.pos[x as usize] = slot as u32;
    }

    #[inline]
    fn sift_down(&mut self, mut slot: usize) {
        let n = self.heap.len();
        let x = self.heap[slot];
        let key = self.freq[x as usize];
        loop {
            let left = 2 * slot + 1;
            if left >= n {
                break;
            }
            let right = left + 1;
            let mut child = left;
            let mut ckey = self.freq[self.heap[left] as usize];
            if right < n {
                let rkey = self.freq[self.heap[right] as usize];
                if O::above(rkey, ckey) {
                    child = right;
                    ckey = rkey;
                }
            }
            if !O::above(ckey, key) {
                break;
            }
            let cx = self.heap[child];
            self.heap[slot] = cx;
            self.pos[cx as usize] = slot as u32;
            slot = child;
        }
        self.heap[slot] = x;
        self.pos[x as usize] = slot as u32;
    }

    /// O(m) check of the heap property and the position map.
    pub fn audit(&self) -> std::result::Result<(), String> {
        for (slot, &x) in self.heap.iter().enumerate() {
            if self.pos[x as usize] as usize != slot {
                return Err(format!("pos/heap mismatch at slot {slot}"));
            }
            if slot > 0 {
                let parent = self.heap[(slot - 1) / 2] as usize;
                if O::above(self.freq[x as usize], self.freq[parent]) {
                    return Err(format!("heap order violated at slot {slot}"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn max_heap_tracks_root() {
        let mut h = MaxHeap::new(3).unwrap();
        h.apply(LogEvent::add(2).unwrap()).unwrap();
        assert_eq!(h.peek(), (ObjectId::new(2).unwrap(), 1));
        h.apply(LogEvent::remove(2).unwrap()).unwrap();
        assert_eq!(h.peek().1, 0);
        h.audit().unwrap();
        assert!(h.apply(LogEvent::add(4).unwrap()).is_err());
    }

    #[test]
    fn min_heap_tracks_negative_root() {
        let mut h = MinHeap::new(4).unwrap();
        h.apply(LogEvent::remove(3).unwrap()).unwrap();
        h.apply(LogEvent::remove(3).unwrap()).unwrap();
        h.apply(LogEvent::remove(1).unwrap()).unwrap();
        assert_eq!(h.peek(), (ObjectId::new(3).unwrap(), -2));
        h.apply(LogEvent::add(3).unwrap()).unwrap();
        h.apply(LogEvent::add(3).unwrap()).unwrap();
        assert_eq!(h.peek(), (ObjectId::new(1).unwrap(), -1));
        h.audit().unwrap();
    }
}
