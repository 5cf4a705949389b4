//! Exact motif census by exhaustive enumeration of connected vertex sets.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{arrcode, ArrcodeTable, CanonError};
use crate::frames::{FrameError, FrameKind};
use crate::graph::{Graph, VertexId};

#[derive(Clone, Debug, Serialize)]
pub struct ExactCensus {
    pub size: usize,
    pub directed: bool,
    /// Instance count per class id; disconnected classes stay zero.
    pub counts: Vec<u64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ExactCensus {
    pub fn count(&self, class_id: usize) -> u64 {
        self.counts[class_id]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Counts every connected induced subgraph on `size` vertices, once each.
///
/// Enumeration runs on the undirected view: each connected set is grown
/// from its smallest vertex `root`, extending only with vertices larger
/// than `root` that are exclusive neighbors of the newest vertex (adjacent
/// to it but to nothing already in the set). The directed induced subgraph
/// is classified at the leaves. Roots are processed in parallel.
pub fn exact_census(g: &Graph, size: usize) -> Result<ExactCensus, CanonError> {
    let start = Instant::now();
    let table = arrcode(size, g.is_directed())?;
    let counts = (0..g.n_vertices())
        .into_par_iter()
        .fold(
            || vec![0u64; table.classes().len()],
            |mut counts, root| {
                let ext: Vec<VertexId> =
                    g.neighbors(root).iter().copied().filter(|&u| u > root).collect();
                let mut sub = Vec::with_capacity(size);
                sub.push(root);
                extend(g, table, size, root, &mut sub, ext, &mut counts);
                counts
            },
        )
        .reduce(
            || vec![0u64; table.classes().len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(ExactCensus {
        size,
        directed: g.is_directed(),
        counts,
        elapsed: start.elapsed(),
    })
}

fn extend(
    g: &Graph,
    table: &ArrcodeTable,
    size: usize,
    root: VertexId,
    sub: &mut Vec<VertexId>,
    mut ext: Vec<VertexId>,
    counts: &mut [u64],
) {
    if sub.len() == size {
        counts[table.classify_unchecked(g.induced_code_unchecked(sub))] += 1;
        return;
    }
    while let Some(w) = ext.pop() {
        let mut next = ext.clone();
        for &u in g.neighbors(w) {
            if u > root
                && !sub.contains(&u)
                && !next.contains(&u)
                && !sub.iter().any(|&s| g.has_edge(s, u))
            {
                next.push(u);
            }
        }
        sub.push(w);
        extend(g, table, size, root, sub, next, counts);
        sub.pop();
    }
}

/// Result of explicitly walking every frame instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FrameCount {
    pub total: u64,
    /// Chains whose endpoints coincide; zero for other kinds.
    pub degenerate: u64,
}

/// Largest instance count [`exact_frame_check`] will enumerate.
pub const FRAME_CHECK_LIMIT: u64 = 10_000;

/// Enumerates frame instances one by one, independently of the closed-form
/// totals. Chains are walked as vertex sequences `a-i-j-b` from every start
/// vertex and halved for reversal.
pub fn exact_frame_check(g: &Graph, kind: FrameKind) -> Result<FrameCount, FrameError> {
    let mut count = FrameCount { total: 0, degenerate: 0 };
    let limit = FRAME_CHECK_LIMIT;
    let too_many = FrameError::TooMany { kind, limit };
    match kind {
        FrameKind::Fork | FrameKind::Trident => {
            let leaves = kind.size() - 1;
            for c in 0..g.n_vertices() {
                let nbrs = g.neighbors(c);
                let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
                // count leaf subsets of the right size by explicit recursion
                while let Some((start, depth)) = stack.pop() {
                    if depth == leaves {
                        count.total += 1;
                        if count.total > limit {
                            return Err(too_many);
                        }
                        continue;
                    }
                    for i in start..nbrs.len() {
                        stack.push((i + 1, depth + 1));
                    }
                }
            }
        }
        FrameKind::Chain => {
            let mut walks = 0u64;
            let mut closed = 0u64;
            for a in 0..g.n_vertices() {
                for &i in g.neighbors(a) {
                    for &j in g.neighbors(i) {
                        if j == a {
                            continue;
                        }
                        for &b in g.neighbors(j) {
                            if b == i {
                                continue;
                            }
                            walks += 1;
                            if b == a {
                                closed += 1;
                            }
                            if walks > 2 * limit {
                                return Err(too_many);
                            }
                        }
                    }
                }
            }
            count.total = walks / 2;
            count.degenerate = closed / 2;
        }
    }
    Ok(count)
}
