//! Test-only helpers shared by the sprofile test suites: an independent
//! bucket-queue peeling reference, graph builders, and hand-built event
//! sequences that stress block merges and splits.

use sprofile::streamgen::SplitMix64;
use sprofile::{Action, LogEvent, ObjectId};

/// Core numbers by textbook bucket-queue peeling (Batagelj–Zaversnik).
/// `edges` are 1-based; the result is indexed by `vertex - 1`.
pub fn bucket_core_numbers(v: usize, edges: &[(u32, u32)]) -> Vec<u32> {
    let mut adj = vec![Vec::new(); v];
    for &(a, b) in edges {
        adj[a as usize - 1].push(b as usize - 1);
        adj[b as usize - 1].push(a as usize - 1);
    }
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);

    // Counting sort of vertices by degree.
    let mut bin = vec![0usize; max_deg + 1];
    for &d in &deg {
        bin[d] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let count = *b;
        *b = start;
        start += count;
    }
    let mut pos = vec![0usize; v];
    let mut vert = vec![0usize; v];
    for u in 0..v {
        pos[u] = bin[deg[u]];
        vert[pos[u]] = u;
        bin[deg[u]] += 1;
    }
    for d in (1..=max_deg).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;

    for i in 0..v {
        let u = vert[i];
        for &w in &adj[u] {
            if deg[w] > deg[u] {
                let dw = deg[w];
                let pw = pos[w];
                let first = bin[dw];
                let head = vert[first];
                if head != w {
                    vert[pw] = head;
                    pos[head] = pw;
                    vert[first] = w;
                    pos[w] = first;
                }
                bin[dw] += 1;
                deg[w] -= 1;
            }
        }
    }
    deg.into_iter().map(|d| d as u32).collect()
}

pub fn complete_graph(n: u32) -> Vec<(u32, u32)> {
    (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect()
}

pub fn path_graph(n: u32) -> Vec<(u32, u32)> {
    (1..n).map(|a| (a, a + 1)).collect()
}

pub fn star_graph(n: u32) -> Vec<(u32, u32)> {
    (2..=n).map(|b| (1, b)).collect()
}

/// Erdős–Rényi G(n, p) edge list.
pub fn random_graph(n: u32, p: f64, seed: u64) -> Vec<(u32, u32)> {
    let mut rng = SplitMix64::new(seed);
    let mut edges = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            if rng.next_f64() < p {
                edges.push((a, b));
            }
        }
    }
    edges
}

fn ev(id: u32, action: Action) -> LogEvent {
    LogEvent::new(ObjectId::new(id).expect("ids are >= 1"), action)
}

/// Hand-built sequences of length `n` over `[1, m]` that hit the edge
/// cases of block maintenance.
pub fn adversarial_sequences(n: usize, m: u32, seed: u64) -> Vec<(&'static str, Vec<LogEvent>)> {
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::new();

    // One object climbs alone, then falls far below zero.
    let climb: Vec<LogEvent> = (0..n)
        .map(|i| ev(1, if i < n / 3 { Action::Add } else { Action::Remove }))
        .collect();
    out.push(("climb-then-sink", climb));

    // Round robin keeps every object in lockstep: blocks repeatedly split
    // and re-merge into a single block.
    let lockstep: Vec<LogEvent> = (0..n)
        .map(|i| {
            let id = (i as u32 % m) + 1;
            let round = i / m as usize;
            ev(id, if round % 4 < 2 { Action::Add } else { Action::Remove })
        })
        .collect();
    out.push(("lockstep", lockstep));

    // Staircase: object k gets k adds, so every frequency is distinct,
    // then the stair is torn down in random order.
    let mut stair = Vec::new();
    'build: for k in 1..=m {
        for _ in 0..k {
            if stair.len() >= n / 2 {
                break 'build;
            }
            stair.push(ev(k, Action::Add));
        }
    }
    while stair.len() < n {
        let id = rng.next_in_1_to(u64::from(m)) as u32;
        stair.push(ev(id, Action::Remove));
    }
    out.push(("staircase-teardown", stair));

    // Add/remove flip-flop on the same object, then on the top and bottom.
    let flip: Vec<LogEvent> = (0..n)
        .map(|i| {
            let id = if (i / 64) % 2 == 0 { 1 } else { m };
            ev(id, if i % 2 == 0 { Action::Add } else { Action::Remove })
        })
        .collect();
    out.push(("flip-flop", flip));

    // Mostly removals from a random subset: deep negative frequencies.
    let sink: Vec<LogEvent> = (0..n)
        .map(|_| {
            let id = rng.next_in_1_to(u64::from(m.div_ceil(3))) as u32;
            ev(id, if rng.next_f64() < 0.2 { Action::Add } else { Action::Remove })
        })
        .collect();
    out.push(("negative-sink", sink));

    out
}
