#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use motif_census::{arrcode, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Uniform random simple graph with `n` vertices and `m` edges (arcs when
/// directed).
pub fn gnm(n: usize, m: usize, directed: bool, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max = if directed { n * (n - 1) } else { n * (n - 1) / 2 };
    assert!(m <= max);
    let mut set = BTreeSet::new();
    while set.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let p = if directed || u < v { (u, v) } else { (v, u) };
        set.insert(p);
    }
    let edges: Vec<_> = set.into_iter().collect();
    Graph::from_edges(n, directed, &edges)
}

/// Census by testing every vertex subset for connectivity. Independent of
/// the enumeration tree used by `exact_census`.
pub fn brute_force_census(g: &Graph, size: usize) -> Vec<u64> {
    let table = arrcode(size, g.is_directed()).unwrap();
    let mut counts = vec![0u64; table.classes().len()];
    let n = g.n_vertices();
    let mut subset = Vec::with_capacity(size);
    fn rec(g: &Graph, size: usize, start: usize, subset: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if subset.len() == size {
            f(subset);
            return;
        }
        for v in start..g.n_vertices() {
            subset.push(v);
            rec(g, size, v + 1, subset, f);
            subset.pop();
        }
    }
    let _ = n;
    rec(g, size, 0, &mut subset, &mut |s: &[usize]| {
        if connected(g, s) {
            let code = g.induced_subgraph_code(s).unwrap();
            counts[table.classify(code as usize).unwrap()] += 1;
        }
    });
    counts
}

fn connected(g: &Graph, s: &[usize]) -> bool {
    let mut seen = vec![false; s.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..s.len() {
            if !seen[j] && g.has_edge(s[i], s[j]) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|x| x)
}

/// Pearson chi-square p-value of observed counts against a uniform
/// distribution over `categories` outcomes.
pub fn uniform_chi_square_p(observed: &HashMap<Vec<usize>, u64>, categories: usize) -> f64 {
    assert!(categories > 1);
    assert!(observed.len() <= categories, "sampler produced unknown outcomes");
    let total: u64 = observed.values().sum();
    let expected = total as f64 / categories as f64;
    let missing = (categories - observed.len()) as f64;
    let stat: f64 = observed
        .values()
        .map(|&o| (o as f64 - expected).powi(2) / expected)
        .sum::<f64>()
        + missing * expected;
    let dist = ChiSquared::new((categories - 1) as f64).unwrap();
    1.0 - dist.cdf(stat)
}

/// Frame outcomes keyed the same way `FrameSample::vertices` reports them,
/// with leaf sets sorted.
pub fn sample_key(vertices: &[usize], star: bool) -> Vec<usize> {
    let mut v = vertices.to_vec();
    if star {
        v[1..].sort_unstable();
    }
    v
}

/// Every fork, trident, or chain outcome of `g`, enumerated directly.
pub fn enumerate_outcomes(g: &Graph, kind: motif_census::FrameKind) -> Vec<Vec<usize>> {
    use motif_census::FrameKind;
    let mut out = Vec::new();
    match kind {
        FrameKind::Fork | FrameKind::Trident => {
            let leaves = kind.size() - 1;
            for c in 0..g.n_vertices() {
                let nb = g.neighbors(c);
                for i in 0..nb.len() {
                    for j in i + 1..nb.len() {
                        if leaves == 2 {
                            out.push(vec![c, nb[i], nb[j]]);
                            continue;
                        }
                        for k in j + 1..nb.len() {
                            out.push(vec![c, nb[i], nb[j], nb[k]]);
                        }
                    }
                }
            }
        }
        FrameKind::Chain => {
            for i in 0..g.n_vertices() {
                for &j in g.neighbors(i).iter().filter(|&&j| j > i) {
                    for &a in g.neighbors(i).iter().filter(|&&a| a != j) {
                        for &b in g.neighbors(j).iter().filter(|&&b| b != i) {
                            if a == b {
                                out.push(vec![a, i, j]);
                            } else {
                                out.push(vec![a, i, j, b]);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
