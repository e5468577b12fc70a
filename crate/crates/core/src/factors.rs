//! Greedy ordinal factorization: covering the incidence relation with
//! Ferrers relations read off descending chains of concepts.

use std::collections::BTreeMap;
use std::fmt;

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::lattice::ConceptLattice;

/// Attribute chain of a factor: tie classes in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FactorSequence(pub Vec<Vec<String>>);

impl FactorSequence {
    pub fn classes(&self) -> &[Vec<String>] {
        &self.0
    }

    pub fn attributes(&self) -> impl Iterator<Item = &str> {
        self.0.iter().flatten().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for FactorSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.join(", ")).collect();
        f.write_str(&parts.join(" > "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Support {
    pub covered: usize,
    pub total: usize,
}

impl Support {
    pub fn ratio(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.covered as f64 / self.total as f64
        }
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{} ({:.2}%)",
            self.covered,
            self.total,
            100.0 * self.ratio()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinalFactor {
    /// Concept ids from the top downwards.
    pub chain: Vec<usize>,
    pub sequence: FactorSequence,
    /// Covered attributes per object; the Ferrers relation of the chain.
    pub covered: Vec<BitSet>,
    /// Pairs this factor covered that no earlier factor had.
    pub new_pairs: usize,
}

impl OrdinalFactor {
    pub fn covered_count(&self) -> usize {
        self.covered.iter().map(BitSet::len).sum()
    }

    /// Covered incidence as `(object, attribute)` index pairs.
    pub fn covered_pairs(&self) -> Vec<(usize, usize)> {
        self.covered
            .iter()
            .enumerate()
            .flat_map(|(g, row)| row.iter().map(move |m| (g, m)))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Factorization {
    pub factors: Vec<OrdinalFactor>,
    pub incidence: usize,
}

impl Factorization {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Text report: `F1: a, b > c` followed by `support: n/m (p%)` per factor.
    pub fn report(&self, context: &FormalContext, limit: Option<usize>) -> String {
        let mut out = String::new();
        for (i, f) in self
            .factors
            .iter()
            .take(limit.unwrap_or(usize::MAX))
            .enumerate()
        {
            let support = Support {
                covered: f.covered_count(),
                total: context.incidence_count(),
            };
            out.push_str(&format!("F{}: {}\nsupport: {}\n", i + 1, f.sequence, support));
        }
        out
    }
}

struct Greedy<'a> {
    lattice: &'a ConceptLattice,
    uncovered: Vec<BitSet>,
}

impl Greedy<'_> {
    /// Uncovered pairs inside `extent × intent` of concept `c`.
    fn gain(&self, c: usize) -> usize {
        let concept = &self.lattice.concepts()[c];
        concept
            .extent
            .iter()
            .map(|g| self.uncovered[g].intersection_len(&concept.intent))
            .sum()
    }

    /// Largest gain reachable anywhere at or below `c`.
    fn potential(&self, c: usize) -> usize {
        std::iter::once(c)
            .chain(self.lattice.descendants(c))
            .map(|d| self.gain(d))
            .max()
            .unwrap_or(0)
    }

    fn cover(&mut self, c: usize) -> usize {
        let concept = &self.lattice.concepts()[c];
        let mut n = 0;
        for g in concept.extent.iter() {
            n += self.uncovered[g].intersection_len(&concept.intent);
            self.uncovered[g].difference_with(&concept.intent);
        }
        n
    }

    fn pick(&self, candidates: &[usize], score: impl Fn(usize) -> usize) -> Option<usize> {
        let concepts = self.lattice.concepts();
        candidates
            .iter()
            .map(|&d| (d, score(d)))
            .filter(|&(_, s)| s > 0)
            .max_by(|&(a, sa), &(b, sb)| {
                sa.cmp(&sb)
                    .then(concepts[a].extent.len().cmp(&concepts[b].extent.len()))
                    // lexicographically smaller intent wins
                    .then(concepts[b].intent.cmp(&concepts[a].intent))
            })
            .map(|(d, _)| d)
    }

    fn factor(&mut self) -> OrdinalFactor {
        let lattice = self.lattice;
        let top = lattice.top();
        let mut chain = vec![top];
        let mut new_pairs = self.cover(top);
        let mut current = top;
        loop {
            let lower = lattice.lower_neighbours(current);
            // plain greedy step; if no neighbour gains directly, head towards
            // the neighbour whose down-set still holds the most
            let next = self
                .pick(lower, |d| self.gain(d))
                .or_else(|| self.pick(lower, |d| self.potential(d)));
            match next {
                Some(d) => {
                    new_pairs += self.cover(d);
                    chain.push(d);
                    current = d;
                }
                None => break,
            }
        }

        let context = lattice.context();
        let concepts = lattice.concepts();
        let mut sequence = Vec::new();
        let mut seen = BitSet::new(context.attribute_count());
        for &c in &chain {
            let fresh = concepts[c].intent.difference(&seen);
            if !fresh.is_empty() {
                sequence.push(context.attribute_labels(&fresh));
            }
            seen.union_with(&concepts[c].intent);
        }
        let mut covered = vec![BitSet::new(context.attribute_count()); context.object_count()];
        for &c in &chain {
            for g in concepts[c].extent.iter() {
                covered[g].union_with(&concepts[c].intent);
            }
        }
        OrdinalFactor {
            chain,
            sequence: FactorSequence(sequence),
            covered,
            new_pairs,
        }
    }
}

/// Complete greedy ordinal factorization of the lattice's context.
///
/// Each factor starts at the top concept and repeatedly descends to the lower
/// neighbour covering the most still-uncovered pairs (ties: larger extent,
/// then lexicographically smaller intent) until no descent adds pairs.
pub fn greedy_factorize(lattice: &ConceptLattice) -> Factorization {
    let context = lattice.context();
    let mut greedy = Greedy {
        lattice,
        uncovered: context.rows().to_vec(),
    };
    let mut factors = Vec::new();
    while greedy.uncovered.iter().any(|r| !r.is_empty()) {
        let f = greedy.factor();
        debug_assert!(f.new_pairs > 0);
        factors.push(f);
    }
    Factorization {
        factors,
        incidence: context.incidence_count(),
    }
}

/// Support of an attribute sequence in a context: each object contributes the
/// longest prefix of whole tie classes contained in its row.
pub fn factor_support(sequence: &FactorSequence, context: &FormalContext) -> Result<Support> {
    let classes: Vec<BitSet> = sequence
        .classes()
        .iter()
        .map(|c| context.attribute_set(c))
        .collect::<Result<_>>()?;
    let mut covered = 0;
    for row in context.rows() {
        for class in &classes {
            if !class.is_subset(row) {
                break;
            }
            covered += class.len();
        }
    }
    Ok(Support {
        covered,
        total: context.incidence_count(),
    })
}

/// Support of a factor from one context evaluated in another.
pub fn cross_support(sequence: &FactorSequence, other: &FormalContext) -> Result<Support> {
    if let Some(missing) = sequence
        .attributes()
        .find(|a| other.attribute_index(a).is_none())
    {
        return Err(Error::UnknownLabel(missing.to_string()));
    }
    factor_support(sequence, other)
}

/// True iff the per-object attribute sets are totally ordered by inclusion.
pub fn is_ferrers<G: Ord, M: Ord>(pairs: impl IntoIterator<Item = (G, M)>) -> bool {
    let mut rows: BTreeMap<G, Vec<M>> = BTreeMap::new();
    for (g, m) in pairs {
        rows.entry(g).or_default().push(m);
    }
    let mut rows: Vec<Vec<M>> = rows
        .into_values()
        .map(|mut r| {
            r.sort();
            r.dedup();
            r
        })
        .collect();
    rows.sort_by_key(Vec::len);
    rows.windows(2)
        .all(|w| w[0].iter().all(|m| w[1].binary_search(m).is_ok()))
}
