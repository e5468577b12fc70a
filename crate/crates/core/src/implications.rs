//! Attribute implications, their closure, and the canonical (stem) base.

use std::fmt;

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::lattice::{enumerate_concepts, next_closure};

/// Upper bound on the universe size accepted by [`ImplicationSet::enumerate_closed`].
pub const CLOSED_SET_LIMIT: usize = 25;

/// `premise → conclusion`, stored with `conclusion ∩ premise = ∅`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Implication {
    pub premise: BitSet,
    pub conclusion: BitSet,
}

impl Implication {
    pub fn new(premise: BitSet, conclusion: BitSet) -> Self {
        let conclusion = conclusion.difference(&premise);
        Implication {
            premise,
            conclusion,
        }
    }

    /// Every object having the premise also has the conclusion.
    pub fn holds_in(&self, context: &FormalContext) -> bool {
        context
            .extent_of(&self.premise)
            .is_subset(&context.extent_of(&self.conclusion))
    }
}

/// Checks an implication given by attribute labels against a context.
pub fn holds<S: AsRef<str>>(
    premise: &[S],
    conclusion: &[S],
    context: &FormalContext,
) -> Result<bool> {
    let imp = Implication::new(
        context.attribute_set(premise)?,
        context.attribute_set(conclusion)?,
    );
    Ok(imp.holds_in(context))
}

/// An ordered list of implications over a labelled attribute universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicationSet {
    attributes: Vec<String>,
    implications: Vec<Implication>,
}

impl ImplicationSet {
    pub fn new(attributes: Vec<String>) -> Self {
        ImplicationSet {
            attributes,
            implications: Vec::new(),
        }
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn implications(&self) -> &[Implication] {
        &self.implications
    }

    pub fn len(&self) -> usize {
        self.implications.len()
    }

    pub fn is_empty(&self) -> bool {
        self.implications.is_empty()
    }

    pub fn push(&mut self, imp: Implication) {
        self.implications.push(imp);
    }

    fn label_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<BitSet> {
        let mut set = BitSet::new(self.attributes.len());
        for l in labels {
            let i = self
                .attributes
                .iter()
                .position(|a| a == l.as_ref())
                .ok_or_else(|| Error::UnknownLabel(l.as_ref().to_string()))?;
            set.insert(i);
        }
        Ok(set)
    }

    /// Adds an implication given by labels.
    pub fn push_labels<S: AsRef<str>>(&mut self, premise: &[S], conclusion: &[S]) -> Result<()> {
        let imp = Implication::new(self.label_set(premise)?, self.label_set(conclusion)?);
        self.implications.push(imp);
        Ok(())
    }

    pub fn labels(&self, set: &BitSet) -> Vec<String> {
        set.iter().map(|i| self.attributes[i].clone()).collect()
    }

    /// Smallest superset of `set` respecting every implication (LinClosure).
    pub fn close(&self, set: &BitSet) -> BitSet {
        let n = self.attributes.len();
        let mut remaining: Vec<usize> = self.implications.iter().map(|i| i.premise.len()).collect();
        let mut watchers: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (k, imp) in self.implications.iter().enumerate() {
            for m in imp.premise.iter() {
                watchers[m].push(k);
            }
        }
        let mut closed = set.clone();
        let mut queue: Vec<usize> = set.iter().collect();
        let fire = |k: usize, closed: &mut BitSet, queue: &mut Vec<usize>| {
            for m in self.implications[k].conclusion.iter() {
                if closed.insert(m) {
                    queue.push(m);
                }
            }
        };
        for (k, &r) in remaining.iter().enumerate() {
            if r == 0 {
                fire(k, &mut closed, &mut queue);
            }
        }
        while let Some(m) = queue.pop() {
            for &k in &watchers[m] {
                remaining[k] -= 1;
                if remaining[k] == 0 {
                    fire(k, &mut closed, &mut queue);
                }
            }
        }
        closed
    }

    /// Label-level closure.
    pub fn closure<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<String>> {
        Ok(self.labels(&self.close(&self.label_set(labels)?)))
    }

    /// Whether `imp` follows from this set.
    pub fn entails(&self, imp: &Implication) -> bool {
        imp.conclusion.is_subset(&self.close(&imp.premise))
    }

    /// All closed sets, in lectic order.
    pub fn enumerate_closed(&self) -> Result<Vec<BitSet>> {
        let n = self.attributes.len();
        if n > CLOSED_SET_LIMIT {
            return Err(Error::UniverseTooLarge {
                size: n,
                limit: CLOSED_SET_LIMIT,
            });
        }
        let mut out = Vec::new();
        let mut current = self.close(&BitSet::new(n));
        loop {
            out.push(current.clone());
            match next_closure(n, &current, |b| self.close(b)) {
                Some(next) => current = next,
                None => break,
            }
        }
        Ok(out)
    }

    /// Implications as sorted `(premise labels, conclusion labels)` pairs,
    /// independent of list order.
    pub fn normalized(&self) -> Vec<(Vec<String>, Vec<String>)> {
        let mut v: Vec<(BitSet, BitSet)> = self
            .implications
            .iter()
            .map(|i| (i.premise.clone(), i.conclusion.clone()))
            .collect();
        v.sort_by(|a, b| a.0.lectic_cmp(&b.0).then(a.1.cmp(&b.1)));
        v.into_iter()
            .map(|(p, c)| (self.labels(&p), self.labels(&c)))
            .collect()
    }

    /// Parses the one-implication-per-line text form produced by `Display`.
    pub fn parse(attributes: Vec<String>, text: &str) -> Result<ImplicationSet> {
        let mut set = ImplicationSet::new(attributes);
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (p, c) = line
                .split_once("->")
                .ok_or_else(|| Error::UnknownLabel(format!("implication `{line}`")))?;
            let split = |s: &str| -> Vec<String> {
                s.split(',')
                    .map(str::trim)
                    .filter(|x| !x.is_empty())
                    .map(String::from)
                    .collect()
            };
            set.push_labels(&split(p), &split(c))?;
        }
        Ok(set)
    }

    fn pseudo_closure(&self, set: &BitSet) -> BitSet {
        // L•: only premises strictly contained in the current set fire
        let mut x = set.clone();
        loop {
            let mut grew = false;
            for imp in &self.implications {
                if imp.premise.is_subset(&x) && imp.premise != x && !imp.conclusion.is_subset(&x) {
                    x.union_with(&imp.conclusion);
                    grew = true;
                }
            }
            if !grew {
                return x;
            }
        }
    }
}

impl fmt::Display for ImplicationSet {
    /// `a, b -> c, d`, one per line, attributes in universe order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for imp in &self.implications {
            let p = self.labels(&imp.premise).join(", ");
            let c = self.labels(&imp.conclusion).join(", ");
            if p.is_empty() {
                writeln!(f, "-> {c}")?;
            } else {
                writeln!(f, "{p} -> {c}")?;
            }
        }
        Ok(())
    }
}

/// The canonical (Duquenne–Guigues) base: pseudo-intent premises in lectic order.
pub fn canonical_base(context: &FormalContext) -> ImplicationSet {
    let n = context.attribute_count();
    let full = BitSet::full(n);
    let mut base = ImplicationSet::new(context.attributes().to_vec());
    let mut current = BitSet::new(n);
    loop {
        let closed = context.attribute_closure(&current);
        if closed != current {
            base.push(Implication::new(current.clone(), closed));
        }
        if current == full {
            break;
        }
        let next = next_closure(n, &current, |b| base.pseudo_closure(b));
        match next {
            Some(next) => current = next,
            None => break,
        }
    }
    base
}

/// Intents common to both contexts, in lectic order. Attribute lists must match.
pub fn shared_intents(a: &FormalContext, b: &FormalContext) -> Result<Vec<BitSet>> {
    if a.attributes() != b.attributes() {
        return Err(Error::UniverseMismatch);
    }
    let theirs: std::collections::HashSet<BitSet> =
        enumerate_concepts(b).into_iter().map(|c| c.intent).collect();
    Ok(enumerate_concepts(a)
        .into_iter()
        .map(|c| c.intent)
        .filter(|i| theirs.contains(i))
        .collect())
}
