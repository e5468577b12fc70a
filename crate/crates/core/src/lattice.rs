//! Concept enumeration (Next Closure), the cover relation and lattice operations.

use std::collections::HashMap;

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{Error, Result};

/// Lectically next closed set after `current`, for any closure operator on
/// `0..n`. Returns `None` once `current` is the lectically largest closed set.
pub fn next_closure<F>(n: usize, current: &BitSet, mut closure: F) -> Option<BitSet>
where
    F: FnMut(&BitSet) -> BitSet,
{
    let mut a = current.clone();
    for i in (0..n).rev() {
        if a.contains(i) {
            a.remove(i);
            continue;
        }
        let mut b = a.clone();
        b.insert(i);
        let c = closure(&b);
        // accept iff c adds nothing below i
        match c.first_difference(&a) {
            Some(j) if j < i => {}
            _ => return Some(c),
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalConcept {
    pub id: usize,
    pub extent: BitSet,
    pub intent: BitSet,
}

/// All concepts of a context in lectic order of their intents.
pub fn enumerate_concepts(context: &FormalContext) -> Vec<FormalConcept> {
    let n = context.attribute_count();
    let mut out = Vec::new();
    let mut intent = context.attribute_closure(&BitSet::new(n));
    loop {
        out.push(FormalConcept {
            id: out.len(),
            extent: context.extent_of(&intent),
            intent: intent.clone(),
        });
        match next_closure(n, &intent, |b| context.attribute_closure(b)) {
            Some(next) => intent = next,
            None => break,
        }
    }
    out
}

/// All extents of a context, in the same order as [`enumerate_concepts`].
pub fn extents(context: &FormalContext) -> Vec<BitSet> {
    enumerate_concepts(context)
        .into_iter()
        .map(|c| c.extent)
        .collect()
}

/// A concept lattice with its Hasse diagram.
///
/// Concept ids are positions in lectic order. `covers` holds `(upper, lower)`
/// pairs sorted by `(upper, lower)`.
#[derive(Debug, Clone)]
pub struct ConceptLattice {
    context: FormalContext,
    concepts: Vec<FormalConcept>,
    by_intent: HashMap<BitSet, usize>,
    covers: Vec<(usize, usize)>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    top: usize,
    bottom: usize,
    gamma: Vec<usize>,
    mu: Vec<usize>,
}

impl ConceptLattice {
    pub fn new(context: &FormalContext) -> Self {
        let concepts = enumerate_concepts(context);
        ConceptLattice::from_concepts(context, concepts)
            .expect("Next Closure yields a complete duplicate-free concept list")
    }

    /// Builds the cover relation for a complete concept list.
    ///
    /// Lower neighbours of `(A, B)` are found by counting, for each `m ∉ B`,
    /// how often `(B ∪ {m})′′` is hit: it is a lower neighbour iff hit once
    /// per attribute it adds.
    pub fn from_concepts(
        context: &FormalContext,
        mut concepts: Vec<FormalConcept>,
    ) -> Result<Self> {
        let mut by_intent = HashMap::with_capacity(concepts.len());
        for (i, c) in concepts.iter_mut().enumerate() {
            c.id = i;
            if context.extent_of(&c.intent) != c.extent || context.intent_of(&c.extent) != c.intent
            {
                return Err(Error::InvalidContext(format!(
                    "concept {i} is not closed in the context"
                )));
            }
            if by_intent.insert(c.intent.clone(), i).is_some() {
                return Err(Error::DuplicateConcept(
                    context.attribute_labels(&c.intent).join(", "),
                ));
            }
        }
        if concepts.is_empty() {
            return Err(Error::Empty("concept list"));
        }

        let n_attrs = context.attribute_count();
        let mut lower = vec![Vec::new(); concepts.len()];
        let mut upper = vec![Vec::new(); concepts.len()];
        let mut covers = Vec::new();
        for c in &concepts {
            let mut hits: HashMap<usize, usize> = HashMap::new();
            for m in 0..n_attrs {
                if c.intent.contains(m) {
                    continue;
                }
                let mut b = c.intent.clone();
                b.insert(m);
                let closed = context.attribute_closure(&b);
                let id = *by_intent.get(&closed).ok_or_else(|| {
                    Error::InvalidContext("concept list is incomplete".to_string())
                })?;
                *hits.entry(id).or_default() += 1;
            }
            let mut neighbours: Vec<usize> = hits
                .into_iter()
                .filter(|&(id, count)| {
                    concepts[id].intent.difference(&c.intent).len() == count
                })
                .map(|(id, _)| id)
                .collect();
            neighbours.sort_unstable();
            for &d in &neighbours {
                covers.push((c.id, d));
                upper[d].push(c.id);
            }
            lower[c.id] = neighbours;
        }
        covers.sort_unstable();
        for u in &mut upper {
            u.sort_unstable();
        }

        let top = *by_intent
            .get(&context.attribute_closure(&BitSet::new(n_attrs)))
            .ok_or_else(|| Error::InvalidContext("missing top concept".into()))?;
        let bottom = *by_intent
            .get(&BitSet::full(n_attrs))
            .ok_or_else(|| Error::InvalidContext("missing bottom concept".into()))?;
        let gamma = (0..context.object_count())
            .map(|g| by_intent[context.row(g)])
            .collect();
        let mu = (0..n_attrs)
            .map(|m| {
                let mut b = BitSet::new(n_attrs);
                b.insert(m);
                by_intent[&context.attribute_closure(&b)]
            })
            .collect();

        Ok(ConceptLattice {
            context: context.clone(),
            concepts,
            by_intent,
            covers,
            upper,
            lower,
            top,
            bottom,
            gamma,
            mu,
        })
    }

    pub fn context(&self) -> &FormalContext {
        &self.context
    }

    pub fn concepts(&self) -> &[FormalConcept] {
        &self.concepts
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concept(&self, id: usize) -> Result<&FormalConcept> {
        self.concepts.get(id).ok_or(Error::UnknownConcept(id))
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_neighbours(&self, id: usize) -> &[usize] {
        &self.upper[id]
    }

    pub fn lower_neighbours(&self, id: usize) -> &[usize] {
        &self.lower[id]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    /// Object concept of object `g`.
    pub fn gamma(&self, g: usize) -> usize {
        self.gamma[g]
    }

    /// Attribute concept of attribute `m`.
    pub fn mu(&self, m: usize) -> usize {
        self.mu[m]
    }

    pub fn find_by_intent(&self, intent: &BitSet) -> Option<usize> {
        self.by_intent.get(intent).copied()
    }

    /// `a ≤ b` in the concept order (extent inclusion).
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.concepts[a].extent.is_subset(&self.concepts[b].extent)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn meet(&self, a: usize, b: usize) -> Result<usize> {
        let (ca, cb) = (self.concept(a)?, self.concept(b)?);
        let intent = self.context.attribute_closure(&ca.intent.union(&cb.intent));
        Ok(self.by_intent[&intent])
    }

    pub fn join(&self, a: usize, b: usize) -> Result<usize> {
        let (ca, cb) = (self.concept(a)?, self.concept(b)?);
        Ok(self.by_intent[&ca.intent.intersection(&cb.intent)])
    }

    /// Attributes whose attribute concept is `id` (reduced labelling).
    pub fn own_attributes(&self, id: usize) -> Vec<usize> {
        (0..self.mu.len()).filter(|&m| self.mu[m] == id).collect()
    }

    /// Objects whose object concept is `id` (reduced labelling).
    pub fn own_objects(&self, id: usize) -> Vec<usize> {
        (0..self.gamma.len()).filter(|&g| self.gamma[g] == id).collect()
    }

    /// Concepts strictly below `id` (all descendants).
    pub fn descendants(&self, id: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&c| c != id && self.leq(c, id))
            .collect()
    }

    /// Concepts strictly above `id`.
    pub fn ancestors(&self, id: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&c| c != id && self.leq(id, c))
            .collect()
    }
}
