//! Fixed-width bitsets over canonical element indices.
//!
//! Relations and test families are stored positionally against the canonical
//! order of their universe; the transversal and image computations are all
//! word operations on these.

use std::cmp::Ordering;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = BitSet::new(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn full(len: usize) -> Self {
        let mut s = BitSet::new(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect(&self, other: &BitSet) -> BitSet {
        debug_assert_eq!(self.len, other.len);
        BitSet {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn intersect_count(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        BitSet {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    /// Complement within the ambient 0..len universe.
    pub fn negate(&self) -> BitSet {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let tail = self.len % 64;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1 << tail) - 1;
            }
        }
        BitSet {
            len: self.len,
            words,
        }
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &BitSet) -> bool {
        self.intersect_count(other) == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

/// Canonical order: lexicographic on the sorted index sequences.
impl Ord for BitSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Enumerate the maximal cliques of an undirected graph given as adjacency
/// bitsets (vertex `i` must not be listed in `adj[i]`). Bron-Kerbosch with
/// pivoting; output is canonically sorted.
pub fn maximal_cliques(adj: &[BitSet]) -> Vec<BitSet> {
    let n = adj.len();
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let r = BitSet::new(n);
    let p = BitSet::full(n);
    let x = BitSet::new(n);
    bron_kerbosch(adj, r, p, x, &mut out);
    out.sort();
    out
}

fn bron_kerbosch(adj: &[BitSet], r: BitSet, mut p: BitSet, mut x: BitSet, out: &mut Vec<BitSet>) {
    if p.is_empty() && x.is_empty() {
        out.push(r);
        return;
    }
    // pivot: vertex of p ∪ x with the most neighbours in p
    let pivot = p
        .iter()
        .chain(x.iter())
        .max_by_key(|&u| adj[u].intersect_count(&p))
        .unwrap();
    let candidates = p.difference(&adj[pivot]).indices();
    for v in candidates {
        let mut r2 = r.clone();
        r2.insert(v);
        bron_kerbosch(
            adj,
            r2,
            p.intersect(&adj[v]),
            x.intersect(&adj[v]),
            out,
        );
        p.remove(v);
        x.insert(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negate_respects_length() {
        let s = BitSet::from_indices(5, [0, 3]);
        assert_eq!(s.negate().indices(), vec![1, 2, 4]);
    }

    #[test]
    fn cliques_of_path_graph() {
        // 0 - 1 - 2
        let adj = vec![
            BitSet::from_indices(3, [1]),
            BitSet::from_indices(3, [0, 2]),
            BitSet::from_indices(3, [1]),
        ];
        let cliques = maximal_cliques(&adj);
        let got: Vec<Vec<usize>> = cliques.iter().map(|c| c.indices()).collect();
        assert_eq!(got, vec![vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn cliques_of_empty_graph_are_singletons() {
        let adj = vec![BitSet::new(3), BitSet::new(3), BitSet::new(3)];
        let got: Vec<Vec<usize>> = maximal_cliques(&adj).iter().map(|c| c.indices()).collect();
        assert_eq!(got, vec![vec![0], vec![1], vec![2]]);
    }
}
