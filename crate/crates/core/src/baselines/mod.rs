//! Logarithmic-update comparison structures for the benchmarks: an indexed
//! binary heap for mode/min tracking and an order-statistic tree for
//! k-th/median tracking.

mod heap;
mod ost;

pub use heap::{HeapOrder, IndexedHeap, MaxFirst, MaxHeap, MinFirst, MinHeap};
pub use ost::OrderStatisticTree;
