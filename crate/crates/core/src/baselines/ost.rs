use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::event::{Frequency, LogEvent, ObjectId};
use crate::hugemem;
use crate::streamgen::SplitMix64;

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Node {
    left: u32,
    right: u32,
    size: u32,
    prio: u32,
    freq: Frequency,
}

/// Treap keyed by `(frequency, object)` with subtree sizes, holding all
/// `m` objects. Node `i` belongs to object `i + 1` for the tree's whole
/// life; an update unlinks the node, rekeys it and links it back in.
#[derive(Debug, Clone)]
pub struct OrderStatisticTree {
    nodes: Vec<Node>,
    root: u32,
}

impl OrderStatisticTree {
    pub fn new(m: usize) -> Result<Self> {
        Self::with_seed(m, 0x5eed_f7ea)
    }

    /// Builds the all-zero tree in O(m); `seed` drives node priorities.
    pub fn with_seed(m: usize, seed: u64) -> Result<Self> {
        if m == 0 || m >= NIL as usize {
            return Err(Error::invalid(format!("tree size {m} out of range")));
        }
        let mut rng = SplitMix64::new(seed);
        let mut nodes: Vec<Node> = hugemem::collect((0..m).map(|_| Node {
            left: NIL,
            right: NIL,
            size: 1,
            prio: (rng.next_u64() >> 32) as u32,
            freq: 0,
        }));

        // Keys (0, 1) < (0, 2) < ... are already sorted: build the
        // Cartesian tree on priorities with a right-spine stack.
        let mut spine: Vec<u32> = Vec::new();
        for i in 0..m as u32 {
            let mut last = NIL;
            while let Some(&top) = spine.last() {
                if nodes[top as usize].prio >= nodes[i as usize].prio {
                    break;
                }
                last = top;
                spine.pop();
            }
            nodes[i as usize].left = last;
            if let Some(&top) = spine.last() {
                nodes[top as usize].right = i;
            }
            spine.push(i);
        }
        let root = spine[0];

        let mut tree = OrderStatisticTree { nodes, root };
        tree.fix_sizes();
        Ok(tree)
    }

    fn fix_sizes(&mut self) {
        // Iterative post-order.
        let mut stack = vec![(self.root, false)];
        while let Some((t, done)) = stack.pop() {
            if t == NIL {
                continue;
            }
            if done {
                self.pull(t);
            } else {
                let n = self.nodes[t as usize];
                stack.push((t, true));
                stack.push((n.left, false));
                stack.push((n.right, false));
            }
        }
    }

    pub fn m(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    fn size(&self, t: u32) -> u32 {
        if t == NIL {
            0
        } else {
            self.nodes[t as usize].size
        }
    }

    #[inline]
    fn pull(&mut self, t: u32) {
        let n = self.nodes[t as usize];
        self.nodes[t as usize].size = 1 + self.size(n.left) + self.size(n.right);
    }

    #[inline]
    fn cmp(&self, a: u32, b: u32) -> Ordering {
        (self.nodes[a as usize].freq, a).cmp(&(self.nodes[b as usize].freq, b))
    }

    /// Splits `t` into keys below and above node `x` (absent from `t`).
    fn split(&mut self, t: u32, x: u32) -> (u32, u32) {
        if t == NIL {
            return (NIL, NIL);
        }
        if self.cmp(t, x) == Ordering::Less {
            let (a, b) = self.split(self.nodes[t as usize].right, x);
            self.nodes[t as usize].right = a;
            self.pull(t);
            (t, b)
        } else {
            let (a, b) = self.split(self.nodes[t as usize].left, x);
            self.nodes[t as usize].left = b;
            self.pull(t);
            (a, t)
        }
    }

    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        if self.nodes[a as usize].prio > self.nodes[b as usize].prio {
            let r = self.merge(self.nodes[a as usize].right, b);
            self.nodes[a as usize].right = r;
            self.pull(a);
            a
        } else {
            let l = self.merge(a, self.nodes[b as usize].left);
            self.nodes[b as usize].left = l;
            self.pull(b);
            b
        }
    }

    fn insert(&mut self, t: u32, x: u32) -> u32 {
        if t == NIL {
            let n = &mut self.nodes[x as usize];
            n.left = NIL;
            n.right = NIL;
            n.size = 1;
            return x;
        }
        if self.nodes[x as usize].prio > self.nodes[t as usize].prio {
            let (a, b) = self.split(t, x);
            let n = &mut self.nodes[x as usize];
            n.left = a;
            n.right = b;
            self.pull(x);
            return x;
        }
        if self.cmp(x, t) == Ordering::Less {
            let l = self.insert(self.nodes[t as usize].left, x);
            self.nodes[t as usize].left = l;
        } else {
            let r = self.insert(self.nodes[t as usize].right, x);
            self.nodes[t as usize].right = r;
        }
        self.nodes[t as usize].size += 1;
        t
    }

    fn erase(&mut self, t: u32, x: u32) -> u32 {
        debug_assert!(t != NIL, "node missing from tree");
        match self.cmp(x, t) {
            Ordering::Equal => {
                let n = self.nodes[t as usize];
                self.merge(n.left, n.right)
            }
            Ordering::Less => {
                let l = self.erase(self.nodes[t as usize].left, x);
                self.nodes[t as usize].left = l;
                self.nodes[t as usize].size -= 1;
                t
            }
            Ordering::Greater => {
                let r = self.erase(self.nodes[t as usize].right, x);
                self.nodes[t as usize].right = r;
                self.nodes[t as usize].size -= 1;
                t
            }
        }
    }

    /// Erases the object's old pair and inserts the updated one.
    pub fn apply(&mut self, event: LogEvent) -> Result<()> {
        let x = event.object.checked_index(self.m())? as u32;
        self.root = self.erase(self.root, x);
        self.nodes[x as usize].freq += event.action.delta();
        self.root = self.insert(self.root, x);
        Ok(())
    }

    pub fn frequency(&self, x: ObjectId) -> Result<Frequency> {
        Ok(self.nodes[x.checked_index(self.m())?].freq)
    }

    /// The k-th smallest `(frequency, object)` pair, 1-based.
    pub fn kth(&self, k: usize) -> Result<(Frequency, ObjectId)> {
        let m = self.m();
        if k == 0 || k > m {
            return Err(Error::RankOutOfRange { k, m });
        }
        let mut k = k as u32;
        let mut t = self.root;
        loop {
            let n = self.nodes[t as usize];
            let below = self.size(n.left);
            match k.cmp(&(below + 1)) {
                Ordering::Less => t = n.left,
                Ordering::Equal => return Ok((n.freq, ObjectId::from_index(t as usize))),
                Ordering::Greater => {
                    k -= below + 1;
                    t = n.right;
                }
            }
        }
    }

    /// Lower median, `k = (m + 1) / 2`.
    #[inline]
    pub fn median(&self) -> (Frequency, ObjectId) {
        self.kth(self.m().div_ceil(2)).expect("m >= 1")
    }

    /// O(m) check: in-order keys strictly increase, sizes add up, heap
    /// order on priorities, and every object is present exactly once.
    pub fn audit(&self) -> std::result::Result<(), String> {
        let mut seen = vec![false; self.m()];
        let mut prev: Option<u32> = None;
        let mut stack = Vec::new();
        let mut t = self.root;
        let mut count = 0usize;
        while t != NIL || !stack.is_empty() {
            while t != NIL {
                stack.push(t);
                t = self.nodes[t as usize].left;
            }
            let cur = stack.pop().unwrap();
            let n = self.nodes[cur as usize];
            if self.size(n.left) + self.size(n.right) + 1 != n.size {
                return Err(format!("size mismatch at object {}", cur + 1));
            }
            for child in [n.left, n.right] {
                if child != NIL && self.nodes[child as usize].prio > n.prio {
                    return Err(format!("priority order violated below object {}", cur + 1));
                }
            }
            if let Some(p) = prev {
                if self.cmp(p, cur) != Ordering::Less {
                    return Err("in-order keys not increasing".to_string());
                }
            }
            if std::mem::replace(&mut seen[cur as usize], true) {
                return Err(format!("object {} reached twice", cur + 1));
            }
            prev = Some(cur);
            count += 1;
            t = n.right;
        }
        if count != self.m() {
            return Err(format!("{count} entries, expected {}", self.m()));
        }
        Ok(())
    }
}
