//! Order metrics of finite posets: width, depth and order dimension.

use std::fmt;

use crate::bitset::BitSet;
use crate::lattice::ConceptLattice;

/// A finite poset stored as strict up-sets: `above[i]` holds every `j` with `i < j`.
#[derive(Debug, Clone)]
pub struct Poset {
    above: Vec<BitSet>,
}

impl Poset {
    /// Builds a poset from a strict order predicate. The predicate must be a
    /// strict partial order; it is not checked.
    pub fn from_fn<F: Fn(usize, usize) -> bool>(n: usize, less: F) -> Self {
        let above = (0..n)
            .map(|i| BitSet::from_indices(n, (0..n).filter(|&j| i != j && less(i, j))))
            .collect();
        Poset { above }
    }

    /// The concept order: `a < b` iff `extent(a) ⊊ extent(b)`.
    pub fn from_lattice(lattice: &ConceptLattice) -> Self {
        Poset::from_fn(lattice.len(), |a, b| lattice.leq(a, b))
    }

    pub fn len(&self) -> usize {
        self.above.len()
    }

    pub fn is_empty(&self) -> bool {
        self.above.is_empty()
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.above[a].contains(b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        a == b || self.less(a, b) || self.less(b, a)
    }

    /// Elements sorted so that every element comes after all elements below it.
    fn topological(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.above[i].len()));
        order
    }

    /// Size of a largest antichain, via Dilworth: `n` minus a maximum matching
    /// in the bipartite graph of the strict order.
    pub fn width(&self) -> usize {
        let n = self.len();
        let mut matched_right: Vec<Option<usize>> = vec![None; n];
        let mut matching = 0;
        for left in 0..n {
            let mut seen = vec![false; n];
            if self.augment(left, &mut seen, &mut matched_right) {
                matching += 1;
            }
        }
        n - matching
    }

    fn augment(&self, left: usize, seen: &mut [bool], matched: &mut [Option<usize>]) -> bool {
        for right in self.above[left].iter() {
            if seen[right] {
                continue;
            }
            seen[right] = true;
            if matched[right].is_none_or(|other| self.augment(other, seen, matched)) {
                matched[right] = Some(left);
                return true;
            }
        }
        false
    }

    /// Number of elements on a longest chain.
    pub fn depth(&self) -> usize {
        let mut longest = vec![1usize; self.len()];
        // process from the top down so every element above is final
        for &i in self.topological().iter().rev() {
            for j in self.above[i].iter() {
                longest[i] = longest[i].max(longest[j] + 1);
            }
        }
        longest.into_iter().max().unwrap_or(0)
    }

    pub fn is_chain(&self) -> bool {
        (0..self.len()).all(|a| (a + 1..self.len()).all(|b| self.comparable(a, b)))
    }

    /// Whether the incomparability graph is a comparability graph, i.e. the
    /// order dimension is at most 2.
    ///
    /// Uses Golumbic's implication classes: the graph is transitively
    /// orientable iff no arc shares its class with its reverse.
    pub fn has_dimension_at_most_two(&self) -> bool {
        let n = self.len();
        let edge = |a: usize, b: usize| a != b && !self.comparable(a, b);
        // arc ids for ordered incomparable pairs
        let mut arc_id = vec![usize::MAX; n * n];
        let mut arcs = 0;
        for a in 0..n {
            for b in 0..n {
                if edge(a, b) {
                    arc_id[a * n + b] = arcs;
                    arcs += 1;
                }
            }
        }
        let mut uf = UnionFind::new(arcs);
        for a in 0..n {
            let nbrs: Vec<usize> = (0..n).filter(|&b| edge(a, b)).collect();
            for (i, &b) in nbrs.iter().enumerate() {
                for &c in &nbrs[i + 1..] {
                    if !edge(b, c) {
                        // a-b, a-c edges with b, c non-adjacent force
                        // (a,b) ~ (a,c) and (b,a) ~ (c,a)
                        uf.union(arc_id[a * n + b], arc_id[a * n + c]);
                        uf.union(arc_id[b * n + a], arc_id[c * n + a]);
                    }
                }
            }
        }
        (0..n).all(|a| {
            (0..n)
                .filter(|&b| edge(a, b))
                .all(|b| uf.find(arc_id[a * n + b]) != uf.find(arc_id[b * n + a]))
        })
    }

    /// Critical pairs `(a, b)`: incomparable, everything below `a` is below
    /// `b` and everything above `b` is above `a`. A family of linear
    /// extensions is a realizer iff each critical pair is reversed
    /// (`b` before `a`) in one of them.
    pub fn critical_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let below: Vec<BitSet> = (0..n)
            .map(|i| BitSet::from_indices(n, (0..n).filter(|&j| self.less(j, i))))
            .collect();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b
                    && !self.comparable(a, b)
                    && below[a].is_subset(&below[b])
                    && self.above[b].is_subset(&self.above[a])
                {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Order dimension by increasing `k`: chain test, then the orientability
    /// test for 2, then a backtracking search assigning critical pairs to `k`
    /// linear extensions. `budget` bounds the number of search steps.
    pub fn dimension(&self, budget: u64) -> Dimension {
        if self.is_chain() {
            return Dimension::Exact(1);
        }
        if self.has_dimension_at_most_two() {
            return Dimension::Exact(2);
        }
        let width = self.width();
        let pairs = self.critical_pairs();
        let mut steps = 0u64;
        let mut k = 3;
        loop {
            // dimension never exceeds width
            if k >= width {
                return Dimension::Exact(k);
            }
            match self.realizer_search(&pairs, k, budget, &mut steps) {
                Some(true) => return Dimension::Exact(k),
                Some(false) => k += 1,
                None => return Dimension::AtLeast(k),
            }
        }
    }

    /// `Some(found)`, or `None` when the budget ran out.
    fn realizer_search(
        &self,
        pairs: &[(usize, usize)],
        k: usize,
        budget: u64,
        steps: &mut u64,
    ) -> Option<bool> {
        // reach[i]: strict up-set of i in the i-th extension's partial order
        let base: Vec<BitSet> = self.above.clone();
        let mut colours = vec![base; k];
        self.assign(pairs, 0, &mut colours, 0, budget, steps)
    }

    fn assign(
        &self,
        pairs: &[(usize, usize)],
        next: usize,
        colours: &mut Vec<Vec<BitSet>>,
        used: usize,
        budget: u64,
        steps: &mut u64,
    ) -> Option<bool> {
        if next == pairs.len() {
            return Some(true);
        }
        let (a, b) = pairs[next];
        let limit = (used + 1).min(colours.len());
        for c in 0..limit {
            *steps += 1;
            if *steps > budget {
                return None;
            }
            let reach = &colours[c];
            if reach[b].contains(a) {
                // already reversed here
                match self.assign(pairs, next + 1, colours, used.max(c + 1), budget, steps) {
                    Some(false) => continue,
                    other => return other,
                }
            }
            // putting b before a would close a cycle if a already precedes b
            if reach[a].contains(b) {
                continue;
            }
            let saved = colours[c].clone();
            add_relation(&mut colours[c], b, a);
            let r = self.assign(pairs, next + 1, colours, used.max(c + 1), budget, steps);
            colours[c] = saved;
            match r {
                Some(false) => {}
                other => return other,
            }
        }
        Some(false)
    }
}

/// Adds `x < y` to a transitively closed strict relation and re-closes it.
fn add_relation(reach: &mut [BitSet], x: usize, y: usize) {
    let mut up = reach[y].clone();
    up.insert(y);
    for (i, r) in reach.iter_mut().enumerate() {
        if i == x || r.contains(x) {
            r.union_with(&up);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Exact(usize),
    /// The search budget ran out; all smaller values were excluded.
    AtLeast(usize),
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Exact(k) => write!(f, "{k}"),
            Dimension::AtLeast(k) => write!(f, "unknown(>={k})"),
        }
    }
}

pub const DEFAULT_DIMENSION_BUDGET: u64 = 200_000;

/// Width and depth of a concept lattice.
pub fn width_depth(lattice: &ConceptLattice) -> (usize, usize) {
    let p = Poset::from_lattice(lattice);
    (p.width(), p.depth())
}

pub fn order_dimension(lattice: &ConceptLattice, budget: u64) -> Dimension {
    Poset::from_lattice(lattice).dimension(budget)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
