//! Frames are the spanning trees used as sampling units: the fork (2-edge
//! path) for 3-vertex motifs, and the trident (3-edge star) and chain
//! (3-edge path) for 4-vertex motifs.
//!
//! Every sampler draws each frame instance of the undirected view with
//! probability exactly `1 / total`, where `total` is the closed-form count
//! in [`FrameTotals`]. Chains are parametrized by a middle edge plus one
//! endpoint on each side; when the two endpoints coincide the outcome is a
//! degenerate chain (a triangle) and detects no 4-vertex motif.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::canon::{arrcode, CanonError, Family};
use crate::graph::{Graph, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FrameError {
    #[error("graph has no {0} instances")]
    NoFrames(FrameKind),
    #[error("more than {limit} {kind} instances; explicit enumeration refused")]
    TooMany { kind: FrameKind, limit: u64 },
    #[error(transparent)]
    Canon(#[from] CanonError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameKind {
    Fork,
    Trident,
    Chain,
}

impl FrameKind {
    pub const ALL: [FrameKind; 3] = [FrameKind::Fork, FrameKind::Trident, FrameKind::Chain];

    /// Vertices in a non-degenerate instance.
    pub fn size(self) -> usize {
        match self {
            FrameKind::Fork => 3,
            FrameKind::Trident | FrameKind::Chain => 4,
        }
    }

    /// Frames spanning motifs of the given size.
    pub fn for_size(size: usize) -> &'static [FrameKind] {
        match size {
            3 => &[FrameKind::Fork],
            4 => &[FrameKind::Chain, FrameKind::Trident],
            _ => &[],
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            FrameKind::Fork => "fork",
            FrameKind::Trident => "trident",
            FrameKind::Chain => "chain",
        }
    }
}

impl std::fmt::Display for FrameKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn choose2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

fn choose3(k: u64) -> u64 {
    if k < 3 {
        0
    } else {
        k * (k - 1) / 2 * (k - 2) / 3
    }
}

/// Exact frame instance counts. `chain` includes degenerate chains.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FrameTotals {
    pub fork: u64,
    pub trident: u64,
    pub chain: u64,
}

impl FrameTotals {
    pub fn get(&self, kind: FrameKind) -> u64 {
        match kind {
            FrameKind::Fork => self.fork,
            FrameKind::Trident => self.trident,
            FrameKind::Chain => self.chain,
        }
    }
}

pub fn frame_totals(g: &Graph) -> FrameTotals {
    let mut t = FrameTotals::default();
    for v in 0..g.n_vertices() {
        let k = g.degree(v) as u64;
        t.fork += choose2(k);
        t.trident += choose3(k);
    }
    for (u, v) in g.edges() {
        t.chain += (g.degree(u) as u64 - 1) * (g.degree(v) as u64 - 1);
    }
    t
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FrameSample {
    pub kind: FrameKind,
    verts: [VertexId; 4],
    len: u8,
    pub degenerate: bool,
}

impl FrameSample {
    /// Fork: `[center, leaf, leaf]`. Trident: `[center, leaf, leaf, leaf]`.
    /// Chain: `[a, i, j, b]` with middle edge `(i, j)`, `i < j`; a
    /// degenerate chain keeps `[a, i, j]` since `b == a`.
    pub fn vertices(&self) -> &[VertexId] {
        &self.verts[..self.len as usize]
    }
}

enum Selector {
    Vertices(WeightedIndex<u64>),
    Edges(WeightedIndex<u64>, Vec<(VertexId, VertexId)>),
}

/// Equiprobable sampler for one frame kind on one graph. Building is
/// O(V + E); each draw is a binary search over cumulative weights plus
/// O(1) neighbor picks.
pub struct FrameSampler<'g> {
    graph: &'g Graph,
    kind: FrameKind,
    total: u64,
    selector: Selector,
}

impl<'g> FrameSampler<'g> {
    pub fn new(graph: &'g Graph, kind: FrameKind) -> Result<Self, FrameError> {
        let no_frames = || FrameError::NoFrames(kind);
        let (selector, total) = match kind {
            FrameKind::Fork | FrameKind::Trident => {
                let weight: fn(u64) -> u64 = if kind == FrameKind::Fork { choose2 } else { choose3 };
                let weights: Vec<u64> = (0..graph.n_vertices())
                    .map(|v| weight(graph.degree(v) as u64))
                    .collect();
                let total = weights.iter().sum();
                let w = WeightedIndex::new(weights).map_err(|_| no_frames())?;
                (Selector::Vertices(w), total)
            }
            FrameKind::Chain => {
                let mut edges = Vec::new();
                let mut weights = Vec::new();
                for (u, v) in graph.edges() {
                    let w = (graph.degree(u) as u64 - 1) * (graph.degree(v) as u64 - 1);
                    if w > 0 {
                        edges.push((u, v));
                        weights.push(w);
                    }
                }
                let total = weights.iter().sum();
                let w = WeightedIndex::new(weights).map_err(|_| no_frames())?;
                (Selector::Edges(w, edges), total)
            }
        };
        Ok(Self {
            graph,
            kind,
            total,
            selector,
        })
    }

    pub fn kind(&self) -> FrameKind {
        self.kind
    }

    /// Number of frame instances in the graph.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> FrameSample {
        let g = self.graph;
        let mut verts = [0; 4];
        match &self.selector {
            Selector::Vertices(w) => {
                let center = w.sample(rng);
                let nbrs = g.neighbors(center);
                let leaves = self.kind.size() - 1;
                verts[0] = center;
                let mut picked = [0usize; 3];
                distinct_indices(rng, nbrs.len(), &mut picked[..leaves]);
                for (slot, &i) in picked[..leaves].iter().enumerate() {
                    verts[slot + 1] = nbrs[i];
                }
                FrameSample {
                    kind: self.kind,
                    verts,
                    len: self.kind.size() as u8,
                    degenerate: false,
                }
            }
            Selector::Edges(w, edges) => {
                let (i, j) = edges[w.sample(rng)];
                let a = other_neighbor(rng, g.neighbors(i), j);
                let b = other_neighbor(rng, g.neighbors(j), i);
                verts = [a, i, j, b];
                let degenerate = a == b;
                FrameSample {
                    kind: FrameKind::Chain,
                    verts,
                    len: if degenerate { 3 } else { 4 },
                    degenerate,
                }
            }
        }
    }
}

/// Fills `out` with distinct indices below `n`, uniformly over ordered
/// selections: the `r`-th draw is uniform over the `n - r` unused indices.
fn distinct_indices<R: Rng + ?Sized>(rng: &mut R, n: usize, out: &mut [usize]) {
    for r in 0..out.len() {
        let mut x = rng.gen_range(0..n - r);
        // shift past earlier picks in ascending order
        let mut taken: [usize; 3] = [usize::MAX; 3];
        taken[..r].copy_from_slice(&out[..r]);
        taken[..r].sort_unstable();
        for &t in &taken[..r] {
            if x >= t {
                x += 1;
            }
        }
        out[r] = x;
    }
}

/// Uniform pick from a sorted neighbor list, excluding `skip` (which must
/// be present).
fn other_neighbor<R: Rng + ?Sized>(rng: &mut R, nbrs: &[VertexId], skip: VertexId) -> VertexId {
    let pos = nbrs.binary_search(&skip).expect("middle edge endpoint is a neighbor");
    let r = rng.gen_range(0..nbrs.len() - 1);
    nbrs[if r >= pos { r + 1 } else { r }]
}

/// Samples one fork. Prefer a [`FrameSampler`] when drawing repeatedly.
pub fn sample_fork<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<FrameSample, FrameError> {
    Ok(FrameSampler::new(g, FrameKind::Fork)?.sample(rng))
}

pub fn sample_trident<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<FrameSample, FrameError> {
    Ok(FrameSampler::new(g, FrameKind::Trident)?.sample(rng))
}

pub fn sample_chain<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<FrameSample, FrameError> {
    Ok(FrameSampler::new(g, FrameKind::Chain)?.sample(rng))
}

/// How many instances of each frame one motif instance contains, per class.
#[derive(Clone, Debug, Serialize)]
pub struct KoefTable {
    pub family: Family,
    /// Indexed by class id, then by [`FrameKind::index`].
    koef: Vec<[u32; 3]>,
}

impl KoefTable {
    pub fn get(&self, class_id: usize, kind: FrameKind) -> u32 {
        self.koef[class_id][kind.index()]
    }

    pub fn len(&self) -> usize {
        self.koef.len()
    }

    pub fn is_empty(&self) -> bool {
        self.koef.is_empty()
    }
}

/// Counts frame instances inside a small undirected graph given as a
/// code in the undirected pair order. Chains with coinciding endpoints are
/// not counted.
pub fn count_frames_in_code(size: usize, code: u16, kind: FrameKind) -> u32 {
    if kind.size() != size {
        return 0;
    }
    let fam = Family { size, directed: false };
    let adj = |i: usize, j: usize| i != j && code >> fam.bit_of(i, j) & 1 == 1;
    let mut count = 0;
    match kind {
        FrameKind::Fork | FrameKind::Trident => {
            // a star frame is determined by its center and leaf set
            for c in 0..size {
                let leaves: Vec<usize> = (0..size).filter(|&v| v != c).collect();
                if leaves.iter().all(|&l| adj(c, l)) {
                    count += 1;
                }
            }
        }
        FrameKind::Chain => {
            for p in crate::canon::permutations(size) {
                if adj(p[0], p[1]) && adj(p[1], p[2]) && adj(p[2], p[3]) {
                    count += 1;
                }
            }
            // each path is traversed in both directions
            count /= 2;
        }
    }
    count
}

/// Coefficients for every class of a family, by enumeration on each class's
/// canonical representative. Directed classes use their underlying
/// undirected graph, matching the orientation-blind sampler.
pub fn koef_table(size: usize, directed: bool) -> Result<KoefTable, FrameError> {
    let table = arrcode(size, directed)?;
    let family = table.family();
    let koef = table
        .classes()
        .iter()
        .map(|c| {
            let mut row = [0u32; 3];
            if c.connected {
                let u = family.underlying_code(c.canonical_code);
                for kind in FrameKind::ALL {
                    row[kind.index()] = count_frames_in_code(size, u, kind);
                }
            }
            row
        })
        .collect();
    Ok(KoefTable { family, koef })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    fn k4() -> Graph {
        Graph::from_edges(4, false, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    fn class_by_name(name: &str) -> usize {
        crate::canon::arrcode(4, false)
            .unwrap()
            .connected_classes()
            .find(|c| c.name == Some(name))
            .unwrap()
            .class_id
    }

    #[test]
    fn distinct_indices_cover_all_ordered_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut seen = HashMap::new();
        for _ in 0..24_000 {
            let mut out = [0; 3];
            distinct_indices(&mut rng, 4, &mut out);
            assert!(out[0] != out[1] && out[1] != out[2] && out[0] != out[2]);
            *seen.entry(out).or_insert(0u32) += 1;
        }
        assert_eq!(seen.len(), 24);
        assert!(seen.values().all(|&c| (800..1200).contains(&c)));
    }

    #[test]
    fn totals_small_graphs() {
        assert_eq!(
            frame_totals(&k4()),
            FrameTotals { fork: 12, trident: 4, chain: 24 }
        );
        let p3 = Graph::from_edges(3, false, &[(0, 1), (1, 2)]);
        assert_eq!(frame_totals(&p3), FrameTotals { fork: 1, trident: 0, chain: 0 });
        let k3 = Graph::from_edges(3, false, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(frame_totals(&k3), FrameTotals { fork: 3, trident: 0, chain: 3 });
    }

    #[test]
    fn star_fork_center_is_hub() {
        let star = Graph::from_edges(4, false, &[(0, 1), (0, 2), (0, 3)]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = FrameSampler::new(&star, FrameKind::Fork).unwrap();
        for _ in 0..200 {
            assert_eq!(s.sample(&mut rng).vertices()[0], 0);
        }
        let t = sample_trident(&star, &mut rng).unwrap();
        let mut leaves = t.vertices()[1..].to_vec();
        leaves.sort();
        assert_eq!((t.vertices()[0], leaves), (0, vec![1, 2, 3]));
    }

    #[test]
    fn unique_fork_and_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p3 = Graph::from_edges(3, false, &[(0, 1), (1, 2)]);
        for _ in 0..50 {
            let f = sample_fork(&p3, &mut rng).unwrap();
            let mut v = f.vertices().to_vec();
            v[1..].sort();
            assert_eq!(v, vec![1, 0, 2]);
        }
        let p4 = Graph::from_edges(4, false, &[(0, 1), (1, 2), (2, 3)]);
        let s = FrameSampler::new(&p4, FrameKind::Chain).unwrap();
        for _ in 0..50 {
            let c = s.sample(&mut rng);
            assert!(!c.degenerate);
            assert_eq!(c.vertices(), &[0, 1, 2, 3]);
        }
    }

    #[test]
    fn triangle_chains_all_degenerate() {
        let k3 = Graph::from_edges(3, false, &[(0, 1), (1, 2), (0, 2)]);
        let s = FrameSampler::new(&k3, FrameKind::Chain).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let c = s.sample(&mut rng);
            assert!(c.degenerate);
            assert_eq!(c.vertices().len(), 3);
        }
    }

    #[test]
    fn missing_frames_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let cycle = Graph::from_edges(5, false, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(
            sample_trident(&cycle, &mut rng).unwrap_err(),
            FrameError::NoFrames(FrameKind::Trident)
        );
        let edge = Graph::from_edges(2, false, &[(0, 1)]);
        assert_eq!(
            sample_fork(&edge, &mut rng).unwrap_err(),
            FrameError::NoFrames(FrameKind::Fork)
        );
        assert_eq!(
            sample_chain(&edge, &mut rng).unwrap_err(),
            FrameError::NoFrames(FrameKind::Chain)
        );
    }

    #[test]
    fn k4_chain_outcomes() {
        let g = k4();
        let s = FrameSampler::new(&g, FrameKind::Chain).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut seen: HashMap<Vec<usize>, bool> = HashMap::new();
        for _ in 0..5000 {
            let c = s.sample(&mut rng);
            seen.insert(c.vertices().to_vec(), c.degenerate);
        }
        assert_eq!(seen.len(), 24);
        assert_eq!(seen.values().filter(|&&d| d).count(), 12);
    }

    #[test]
    fn koef_values() {
        let k3 = koef_table(3, false).unwrap();
        let t3 = crate::canon::arrcode(3, false).unwrap();
        let tri = t3.connected_classes().find(|c| c.name == Some("triangle")).unwrap();
        let path = t3.connected_classes().find(|c| c.name == Some("path")).unwrap();
        assert_eq!(k3.get(tri.class_id, FrameKind::Fork), 3);
        assert_eq!(k3.get(path.class_id, FrameKind::Fork), 1);

        let k = koef_table(4, false).unwrap();
        let star = class_by_name("star");
        assert_eq!(k.get(star, FrameKind::Chain), 0);
        assert_eq!(k.get(star, FrameKind::Trident), 1);
        let clique = class_by_name("clique");
        assert_eq!(k.get(clique, FrameKind::Trident), 4);
        // 4!/2 spanning paths
        assert_eq!(k.get(clique, FrameKind::Chain), 12);
        let expect = [
            ("path", 1, 0),
            ("cycle", 4, 0),
            ("paw", 2, 1),
            ("diamond", 6, 2),
        ];
        for (name, chain, trident) in expect {
            let c = class_by_name(name);
            assert_eq!(k.get(c, FrameKind::Chain), chain, "{name}");
            assert_eq!(k.get(c, FrameKind::Trident), trident, "{name}");
        }
    }

    #[test]
    fn four_vertex_coverage_split() {
        for directed in [false, true] {
            let t = crate::canon::arrcode(4, directed).unwrap();
            let k = koef_table(4, directed).unwrap();
            for c in t.connected_classes() {
                assert!(k.get(c.class_id, FrameKind::Chain) + k.get(c.class_id, FrameKind::Trident) >= 1);
            }
        }
        let t = crate::canon::arrcode(4, false).unwrap();
        let k = koef_table(4, false).unwrap();
        let by = |kind| t.connected_classes().filter(|c| k.get(c.class_id, kind) > 0).count();
        assert_eq!(by(FrameKind::Chain), 5);
        assert_eq!(by(FrameKind::Trident), 4);
    }

    #[test]
    fn disconnected_classes_have_zero_koef() {
        let t = crate::canon::arrcode(4, true).unwrap();
        let k = koef_table(4, true).unwrap();
        for c in t.classes().iter().filter(|c| !c.connected) {
            for kind in FrameKind::ALL {
                assert_eq!(k.get(c.class_id, kind), 0);
            }
        }
    }
}
