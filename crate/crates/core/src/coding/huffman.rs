use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::{canonical_code, mean_length, PrefixCode};
use crate::source::{entropy, Pmf};

/// Default weight mixed in so zero-probability vertices still get codewords.
pub const DEFAULT_SMOOTHING: f64 = 1.0 / (1u64 << 20) as f64;

#[derive(Debug, PartialEq)]
struct Item {
    weight: f64,
    id: usize,
}

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight.total_cmp(&other.weight).then(self.id.cmp(&other.id))
    }
}

/// Huffman codeword lengths for `probs` smoothed toward uniform by `eta`.
/// Ties merge the lower id first; leaves have ids `0..m` and merged nodes
/// take increasing ids from `m`.
pub fn huffman_lengths(probs: &[f64], eta: f64) -> Vec<usize> {
    let m = probs.len();
    if m == 1 {
        return vec![0];
    }
    let mut parent = vec![usize::MAX; 2 * m - 1];
    let mut heap: BinaryHeap<Reverse<Item>> = probs
        .iter()
        .enumerate()
        .map(|(id, &p)| Reverse(Item { weight: (1.0 - eta) * p + eta / m as f64, id }))
        .collect();
    let mut next = m;
    while heap.len() > 1 {
        let Reverse(a) = heap.pop().expect("two items");
        let Reverse(b) = heap.pop().expect("two items");
        parent[a.id] = next;
        parent[b.id] = next;
        heap.push(Reverse(Item { weight: a.weight + b.weight, id: next }));
        next += 1;
    }
    (0..m)
        .map(|leaf| {
            let mut depth = 0;
            let mut node = leaf;
            while parent[node] != usize::MAX {
                node = parent[node];
                depth += 1;
            }
            depth
        })
        .collect()
}

/// A proper Huffman code for `p`, with canonical codeword assignment.
pub fn huffman(p: &Pmf, eta: f64) -> PrefixCode {
    let lengths = huffman_lengths(p.probs(), eta);
    let code = canonical_code(p.level(), &lengths).expect("huffman lengths satisfy Kraft");
    debug_assert!(
        mean_length(&code, p).expect("sizes match")
            <= entropy(p.probs()) + 1.0 + eta * (p.len() as f64).log2() + 1e-9
    );
    code
}
