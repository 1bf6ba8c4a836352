//! Degeneracy ordering and core numbers with the profiler as the
//! minimum-degree structure.
//!
//! Each vertex is an object whose frequency is its current degree. A
//! removed vertex is walked down to frequency `-1`, so the dead vertices
//! always form the lowest block and the alive minimum sits right after it.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::event::ObjectId;
use crate::profile::Profiler;

/// Simple undirected graph on vertices `1..=v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    edges: usize,
}

impl Graph {
    /// Rejects out-of-range endpoints, self-loops and repeated edges.
    pub fn new(v: usize, edges: &[(u32, u32)]) -> Result<Self> {
        if v == 0 || v > crate::profile::MAX_OBJECTS {
            return Err(Error::invalid(format!("vertex count {v} out of range")));
        }
        let mut adj = vec![Vec::new(); v];
        let mut seen = HashSet::with_capacity(edges.len());
        for &(a, b) in edges {
            Self::check_edge(v, a, b, &mut seen).map_err(Error::InvalidArgument)?;
            adj[a as usize - 1].push(b - 1);
            adj[b as usize - 1].push(a - 1);
        }
        Ok(Graph {
            adj,
            edges: edges.len(),
        })
    }

    fn check_edge(
        v: usize,
        a: u32,
        b: u32,
        seen: &mut HashSet<(u32, u32)>,
    ) -> std::result::Result<(), String> {
        for x in [a, b] {
            if x == 0 || x as usize > v {
                return Err(format!("endpoint {x} outside [1, {v}]"));
            }
        }
        if a == b {
            return Err(format!("self-loop on vertex {a}"));
        }
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(format!("duplicate edge {a}-{b}"));
        }
        Ok(())
    }

    /// Parses an edge list: one `a b` pair per line, optionally preceded by
    /// a `p <v> <e>` header. Blank lines and `#` comments are skipped.
    /// Without a header the vertex count is the largest endpoint.
    pub fn parse<R: BufRead>(input: R, origin: &Path) -> Result<Self> {
        let malformed = |line: usize, reason: String| Error::MalformedLine {
            path: origin.to_path_buf(),
            line,
            reason,
        };
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        let mut edge_lines = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let lineno = i + 1;
            let line = line.map_err(|e| Error::io(origin, e))?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields[0] == "p" {
                if header.is_some() || !edges.is_empty() {
                    return Err(malformed(lineno, "header must come first".into()));
                }
                let [_, v, e] = fields[..] else {
                    return Err(malformed(lineno, "expected `p <v> <e>`".into()));
                };
                let v = v
                    .parse()
                    .map_err(|_| malformed(lineno, format!("bad vertex count {v:?}")))?;
                let e = e
                    .parse()
                    .map_err(|_| malformed(lineno, format!("bad edge count {e:?}")))?;
                header = Some((v, e));
                continue;
            }
            let [a, b] = fields[..] else {
                return Err(malformed(lineno, format!("expected two endpoints, got {trimmed:?}")));
            };
            let a: u32 = a
                .parse()
                .map_err(|_| malformed(lineno, format!("bad endpoint {a:?}")))?;
            let b: u32 = b
                .parse()
                .map_err(|_| malformed(lineno, format!("bad endpoint {b:?}")))?;
            edges.push((a, b));
            edge_lines.push(lineno);
        }

        let v = match header {
            Some((v, e)) => {
                if e != edges.len() {
                    return Err(malformed(
                        edge_lines.last().copied().unwrap_or(1),
                        format!("header declares {e} edges, found {}", edges.len()),
                    ));
                }
                v
            }
            None => edges.iter().map(|&(a, b)| a.max(b) as usize).max().unwrap_or(0),
        };
        if v == 0 {
            return Err(Error::invalid(format!("{}: graph has no vertices", origin.display())));
        }

        let mut seen = HashSet::with_capacity(edges.len());
        for (&(a, b), &lineno) in edges.iter().zip(&edge_lines) {
            Self::check_edge(v, a, b, &mut seen).map_err(|r| malformed(lineno, r))?;
        }
        Graph::new(v, &edges)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::parse(BufReader::new(file), path)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Neighbors of 1-based vertex `u`, as 1-based ids.
    pub fn neighbors(&self, u: u32) -> impl Iterator<Item = u32> + '_ {
        self.adj[u as usize - 1].iter().map(|&w| w + 1)
    }

    pub fn degree(&self, u: u32) -> usize {
        self.adj[u as usize - 1].len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelResult {
    /// Vertices in removal order.
    pub order: Vec<u32>,
    /// Core number of vertex `u` at index `u - 1`.
    pub core: Vec<u32>,
    pub degeneracy: u32,
    /// Alive degree of `order[i]` when it was selected.
    pub selection_degrees: Vec<u32>,
    /// Unit decrements issued to the profiler while peeling.
    pub decrements: u64,
}

/// Repeatedly removes a minimum-degree alive vertex. O(V + E).
pub fn degeneracy_order(g: &Graph) -> PeelResult {
    let v = g.vertex_count();
    let mut p = Profiler::new(v).expect("graph has 1..=MAX_OBJECTS vertices");
    let vid = |i: usize| ObjectId::from_index(i);

    for (i, nbrs) in g.adj.iter().enumerate() {
        for _ in 0..nbrs.len() {
            p.increment(vid(i)).expect("vertex in range");
        }
    }

    let mut alive = vec![true; v];
    let mut order = Vec::with_capacity(v);
    let mut selection_degrees = Vec::with_capacity(v);
    let mut core = vec![0u32; v];
    let mut running = 0u32;
    let mut decrements = 0u64;

    for _ in 0..v {
        let bottom = p.block_at(1).expect("m >= 1");
        let pos = if bottom.f == -1 { bottom.r + 1 } else { 1 };
        let (deg, u) = p.at_position(pos).expect("an alive vertex remains");
        debug_assert!(deg >= 0);
        let deg = deg as u32;
        let ui = u.index();

        running = running.max(deg);
        core[ui] = running;
        alive[ui] = false;
        order.push(u.get());
        selection_degrees.push(deg);

        for &w in &g.adj[ui] {
            if alive[w as usize] {
                p.decrement(vid(w as usize)).expect("vertex in range");
                decrements += 1;
            }
        }
        for _ in 0..=deg {
            p.decrement(u).expect("vertex in range");
            decrements += 1;
        }
    }

    PeelResult {
        order,
        core,
        degeneracy: running,
        selection_degrees,
        decrements,
    }
}
