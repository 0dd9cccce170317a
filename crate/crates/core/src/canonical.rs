//! Exact canonical labeling by individualization and refinement.
//!
//! Recognition verdicts are memoized by canonical digest, so the form must
//! separate every non-isomorphic pair; a heuristic invariant would silently
//! corrupt cached verdicts. The search below refines colorings to equitable
//! partitions, individualizes inside the first non-singleton cell, and keeps
//! the lexicographically smallest adjacency encoding over all branches.

use sha2::{Digest, Sha256};

/// Canonical form of a graph: a digest that is equal exactly for isomorphic
/// graphs, plus the relabeling certificate that realizes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    digest: [u8; 32],
    /// `relabeling[i]` is the canonical label of vertex index `i`.
    relabeling: Vec<u32>,
}

impl CanonicalForm {
    pub fn digest(&self) -> &[u8; 32] {
        &self.digest
    }

    pub fn digest_hex(&self) -> String {
        self.digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Canonical label assigned to vertex index `i`.
    pub fn label_of(&self, i: usize) -> u32 {
        self.relabeling[i]
    }

    pub fn labels(&self) -> &[u32] {
        &self.relabeling
    }
}

struct AdjacencyBits {
    words: usize,
    rows: Vec<u64>,
}

impl AdjacencyBits {
    fn new(adj: &[Vec<u32>]) -> Self {
        let n = adj.len();
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; n * words];
        for (i, list) in adj.iter().enumerate() {
            for &j in list {
                rows[i * words + (j as usize) / 64] |= 1 << ((j as usize) % 64);
            }
        }
        AdjacencyBits { words, rows }
    }

    fn adjacent(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }
}

/// Iterated neighborhood refinement: recolor every vertex by the rank of
/// `(old color, sorted neighbor colors)` until the partition is stable.
/// Ranks depend only on the color structure, never on vertex labels.
fn refine(colors: &mut Vec<u32>, adj: &[Vec<u32>]) {
    let n = adj.len();
    loop {
        let mut sigs: Vec<(u32, Vec<u32>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut around: Vec<u32> = adj[v].iter().map(|&u| colors[u as usize]).collect();
            around.sort_unstable();
            sigs.push((colors[v], around));
        }
        let mut distinct: Vec<&(u32, Vec<u32>)> = sigs.iter().collect();
        distinct.sort();
        distinct.dedup();
        let next: Vec<u32> = sigs
            .iter()
            .map(|s| distinct.binary_search(&s).unwrap() as u32)
            .collect();
        if next == *colors {
            return;
        }
        *colors = next;
    }
}

fn is_discrete(colors: &[u32]) -> bool {
    let n = colors.len();
    // refinement ranks are 0..k, so the partition is discrete iff k == n
    let mut seen = vec![false; n];
    for &c in colors {
        if seen[c as usize] {
            return false;
        }
        seen[c as usize] = true;
    }
    true
}

/// Adjacency encoding under the labeling `colors` (which must be discrete):
/// vertex count followed by the packed upper-triangular adjacency bits.
fn encode(colors: &[u32], bits: &AdjacencyBits) -> Vec<u8> {
    let n = colors.len();
    let mut inverse = vec![0usize; n];
    for (v, &c) in colors.iter().enumerate() {
        inverse[c as usize] = v;
    }
    let mut out = Vec::with_capacity(8 + n * n / 16 + 1);
    out.extend_from_slice(&(n as u64).to_le_bytes());
    let mut acc: u8 = 0;
    let mut fill: u8 = 0;
    for a in 0..n {
        for b in (a + 1)..n {
            acc <<= 1;
            if bits.adjacent(inverse[a], inverse[b]) {
                acc |= 1;
            }
            fill += 1;
            if fill == 8 {
                out.push(acc);
                acc = 0;
                fill = 0;
            }
        }
    }
    if fill > 0 {
        out.push(acc << (8 - fill));
    }
    out
}

fn search(
    colors: Vec<u32>,
    adj: &[Vec<u32>],
    bits: &AdjacencyBits,
    best: &mut Option<(Vec<u8>, Vec<u32>)>,
) {
    let mut colors = colors;
    refine(&mut colors, adj);
    if is_discrete(&colors) {
        let enc = encode(&colors, bits);
        match best {
            Some((cur, _)) if *cur <= enc => {}
            _ => *best = Some((enc, colors)),
        }
        return;
    }
    // first (smallest color) non-singleton cell; invariant under relabeling
    let n = colors.len();
    let mut counts = vec![0u32; n];
    for &c in &colors {
        counts[c as usize] += 1;
    }
    let target = counts.iter().position(|&c| c >= 2).unwrap() as u32;
    for v in 0..n {
        if colors[v] != target {
            continue;
        }
        // split v off, ordered before the rest of its cell
        let child: Vec<u32> = colors
            .iter()
            .enumerate()
            .map(|(u, &c)| 2 * c + u32::from(u != v))
            .collect();
        search(child, adj, bits, best);
    }
}

pub(crate) fn canonicalize(adj: &[Vec<u32>]) -> CanonicalForm {
    let n = adj.len();
    let bits = AdjacencyBits::new(adj);
    let (encoding, relabeling) = if n == 0 {
        (0u64.to_le_bytes().to_vec(), Vec::new())
    } else {
        let mut best = None;
        search(vec![0; n], adj, &bits, &mut best);
        best.expect("canonical search always reaches a discrete partition")
    };
    let mut hasher = Sha256::new();
    hasher.update(&encoding);
    CanonicalForm {
        digest: hasher.finalize().into(),
        relabeling,
    }
}
