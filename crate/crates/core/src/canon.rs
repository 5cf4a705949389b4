//! Isomorphism classes of 3- and 4-vertex graphs.
//!
//! An arrcode table maps every raw adjacency bitmask of a family (size,
//! directedness) to a class id. The canonical code of a class is the
//! smallest bitmask over all vertex permutations, and class ids follow
//! ascending canonical code, so the empty graph is always class 0 and the
//! complete graph is the last class.

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CanonError {
    #[error("motif size must be 3 or 4, got {0}")]
    UnsupportedSize(usize),
    #[error("code {code} out of range for a table of {len} entries")]
    CodeOutOfRange { code: usize, len: usize },
}

const UNDIRECTED_3: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
const UNDIRECTED_4: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
const DIRECTED_3: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];
const DIRECTED_4: [(usize, usize); 12] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 0),
    (1, 2),
    (1, 3),
    (2, 0),
    (2, 1),
    (2, 3),
    (3, 0),
    (3, 1),
    (3, 2),
];

/// The pair behind each code bit, bit 0 first.
///
/// # Panics
/// If `size` is not 3 or 4.
pub fn pair_order(size: usize, directed: bool) -> &'static [(usize, usize)] {
    match (size, directed) {
        (3, false) => &UNDIRECTED_3,
        (4, false) => &UNDIRECTED_4,
        (3, true) => &DIRECTED_3,
        (4, true) => &DIRECTED_4,
        _ => panic!("no pair order for size {size}"),
    }
}

/// A (size, directedness) combination; each has its own table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Family {
    pub size: usize,
    pub directed: bool,
}

impl Family {
    pub fn new(size: usize, directed: bool) -> Result<Self, CanonError> {
        match size {
            3 | 4 => Ok(Self { size, directed }),
            _ => Err(CanonError::UnsupportedSize(size)),
        }
    }

    pub fn all() -> [Family; 4] {
        [
            Family { size: 3, directed: false },
            Family { size: 3, directed: true },
            Family { size: 4, directed: false },
            Family { size: 4, directed: true },
        ]
    }

    pub fn code_bits(&self) -> usize {
        self.pairs().len()
    }

    pub fn pairs(&self) -> &'static [(usize, usize)] {
        pair_order(self.size, self.directed)
    }

    /// Bit index of pair `(i, j)`; for undirected families the pair is
    /// normalized first.
    pub fn bit_of(&self, i: usize, j: usize) -> usize {
        let (i, j) = if self.directed || i < j { (i, j) } else { (j, i) };
        self.pairs()
            .iter()
            .position(|&p| p == (i, j))
            .expect("pair belongs to family")
    }

    /// Code of the undirected graph underlying `code` (an arc in either
    /// direction becomes an edge).
    pub fn underlying_code(&self, code: u16) -> u16 {
        if !self.directed {
            return code;
        }
        let undirected = Family { size: self.size, directed: false };
        let mut out = 0u16;
        for (bit, &(i, j)) in self.pairs().iter().enumerate() {
            if code >> bit & 1 == 1 {
                out |= 1 << undirected.bit_of(i, j);
            }
        }
        out
    }

    /// Weak connectivity of the graph encoded by `code`.
    pub fn is_connected(&self, code: u16) -> bool {
        let mut parent: Vec<usize> = (0..self.size).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (bit, &(i, j)) in self.pairs().iter().enumerate() {
            if code >> bit & 1 == 1 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
        let root = find(&mut parent, 0);
        (1..self.size).all(|v| find(&mut parent, v) == root)
    }

    /// Code after relabelling vertex `v` as `perm[v]`.
    pub fn permute(&self, code: u16, perm: &[usize]) -> u16 {
        let mut out = 0u16;
        for (bit, &(i, j)) in self.pairs().iter().enumerate() {
            if code >> bit & 1 == 1 {
                out |= 1 << self.bit_of(perm[i], perm[j]);
            }
        }
        out
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..n {
            if !prefix.contains(&v) {
                prefix.push(v);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), n, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MotifClass {
    pub size: usize,
    pub directed: bool,
    pub class_id: usize,
    pub canonical_code: u16,
    pub connected: bool,
    /// Number of raw codes in this class.
    pub orbit_size: usize,
    pub edges: u32,
    /// Common name for connected undirected shapes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<&'static str>,
}

#[derive(Clone, Debug)]
pub struct ArrcodeTable {
    family: Family,
    entries: Vec<u16>,
    classes: Vec<MotifClass>,
}

impl ArrcodeTable {
    pub fn family(&self) -> Family {
        self.family
    }

    /// Class id for every raw code, indexed by code.
    pub fn entries(&self) -> &[u16] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn classes(&self) -> &[MotifClass] {
        &self.classes
    }

    pub fn class(&self, class_id: usize) -> &MotifClass {
        &self.classes[class_id]
    }

    pub fn connected_classes(&self) -> impl Iterator<Item = &MotifClass> {
        self.classes.iter().filter(|c| c.connected)
    }

    pub fn classify(&self, code: usize) -> Result<usize, CanonError> {
        self.entries
            .get(code)
            .map(|&c| c as usize)
            .ok_or(CanonError::CodeOutOfRange {
                code,
                len: self.entries.len(),
            })
    }

    #[inline]
    pub(crate) fn classify_unchecked(&self, code: u16) -> usize {
        self.entries[code as usize] as usize
    }

    /// The class `code` belongs to.
    pub fn class_of_code(&self, code: u16) -> Option<&MotifClass> {
        self.entries.get(code as usize).map(|&c| &self.classes[c as usize])
    }

    /// `(total classes, connected classes)`.
    pub fn class_counts(&self) -> (usize, usize) {
        (
            self.classes.len(),
            self.classes.iter().filter(|c| c.connected).count(),
        )
    }
}

fn undirected_name(size: usize, edges: u32, degrees: &[u32]) -> Option<&'static str> {
    let max = degrees.iter().copied().max().unwrap_or(0);
    match (size, edges, max) {
        (3, 2, _) => Some("path"),
        (3, 3, _) => Some("triangle"),
        (4, 3, 3) => Some("star"),
        (4, 3, 2) => Some("path"),
        (4, 4, 2) => Some("cycle"),
        (4, 4, 3) => Some("paw"),
        (4, 5, _) => Some("diamond"),
        (4, 6, _) => Some("clique"),
        _ => None,
    }
}

/// Builds the table for a family by minimizing every code over all vertex
/// permutations.
pub fn build_arrcode(size: usize, directed: bool) -> Result<ArrcodeTable, CanonError> {
    let family = Family::new(size, directed)?;
    let perms = permutations(size);
    let n_codes = 1usize << family.code_bits();

    let minimal: Vec<u16> = (0..n_codes as u32)
        .map(|code| {
            perms
                .iter()
                .map(|p| family.permute(code as u16, p))
                .min()
                .expect("at least one permutation")
        })
        .collect();

    let mut canon: Vec<u16> = minimal.clone();
    canon.sort_unstable();
    canon.dedup();

    let mut classes: Vec<MotifClass> = canon
        .iter()
        .enumerate()
        .map(|(class_id, &code)| {
            let edges = family.underlying_code(code).count_ones();
            let mut degrees = vec![0u32; size];
            let undirected = Family { size, directed: false };
            let u = family.underlying_code(code);
            for (bit, &(i, j)) in undirected.pairs().iter().enumerate() {
                if u >> bit & 1 == 1 {
                    degrees[i] += 1;
                    degrees[j] += 1;
                }
            }
            let connected = family.is_connected(code);
            MotifClass {
                size,
                directed,
                class_id,
                canonical_code: code,
                connected,
                orbit_size: 0,
                edges,
                name: if directed || !connected {
                    None
                } else {
                    undirected_name(size, edges, &degrees)
                },
            }
        })
        .collect();

    let entries: Vec<u16> = minimal
        .iter()
        .map(|m| canon.binary_search(m).expect("canonical code present") as u16)
        .collect();
    for &c in &entries {
        classes[c as usize].orbit_size += 1;
    }
    Ok(ArrcodeTable {
        family,
        entries,
        classes,
    })
}

static TABLES: [OnceLock<ArrcodeTable>; 4] = [
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
];

/// Memoized table for a family.
pub fn arrcode(size: usize, directed: bool) -> Result<&'static ArrcodeTable, CanonError> {
    Family::new(size, directed)?;
    let slot = (size - 3) * 2 + directed as usize;
    Ok(TABLES[slot].get_or_init(|| build_arrcode(size, directed).expect("valid family")))
}

/// `(total classes, connected classes)` for a family.
pub fn class_counts(size: usize, directed: bool) -> Result<(usize, usize), CanonError> {
    Ok(arrcode(size, directed)?.class_counts())
}
