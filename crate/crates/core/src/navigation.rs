//! Moving between articles along the concept lattice.
//!
//! Candidate rankings within a move are choices of this crate, not part of
//! any standard: contrast prefers concepts sharing the fewest attributes with
//! the source, complement prefers articles with more polar counterparts.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::lattice::ConceptLattice;
use crate::scaling::{ScaleKind, ScaledAttribute};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleMeta {
    pub id: String,
    pub title: String,
    pub source: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rationale {
    Specialize,
    Generalize,
    Contrast,
    Complement,
    Compromise,
    Commonality,
}

impl fmt::Display for Rationale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rationale::Specialize => "specialize",
            Rationale::Generalize => "generalize",
            Rationale::Contrast => "contrast",
            Rationale::Complement => "complement",
            Rationale::Compromise => "compromise",
            Rationale::Commonality => "commonality",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Specialize,
    Generalize,
    Contrast,
    Complement,
}

impl FromStr for Move {
    type Err = Error;

    fn from_str(s: &str) -> Result<Move> {
        match s {
            "specialize" => Ok(Move::Specialize),
            "generalize" => Ok(Move::Generalize),
            "contrast" => Ok(Move::Contrast),
            "complement" => Ok(Move::Complement),
            other => Err(Error::UnknownLabel(format!("move `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveEntry {
    pub article: String,
    pub concept: usize,
    pub rationale: Rationale,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MoveResult {
    pub results: Vec<MoveEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub notice: Option<String>,
}

impl MoveResult {
    pub fn articles(&self) -> Vec<&str> {
        self.results.iter().map(|e| e.article.as_str()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.results.is_empty()
    }
}

/// A concept lattice whose objects are articles, with article metadata.
#[derive(Debug, Clone)]
pub struct AnnotatedLattice {
    lattice: ConceptLattice,
    articles: Vec<ArticleMeta>,
    annotations: Vec<Vec<usize>>,
    scaled: Vec<Option<ScaledAttribute>>,
}

impl AnnotatedLattice {
    /// Uses article ids as titles.
    pub fn new(lattice: ConceptLattice) -> Self {
        let articles = lattice
            .context()
            .objects()
            .iter()
            .map(|id| ArticleMeta {
                id: id.clone(),
                title: id.clone(),
                source: None,
            })
            .collect();
        AnnotatedLattice::with_metadata(lattice, articles)
            .expect("metadata derived from the context matches it")
    }

    pub fn with_metadata(lattice: ConceptLattice, articles: Vec<ArticleMeta>) -> Result<Self> {
        let objects = lattice.context().objects();
        if articles.len() != objects.len() || articles.iter().zip(objects).any(|(a, o)| &a.id != o)
        {
            return Err(Error::ObjectMismatch);
        }
        let mut annotations = vec![Vec::new(); lattice.len()];
        for g in 0..objects.len() {
            annotations[lattice.gamma(g)].push(g);
        }
        let scaled = lattice
            .context()
            .attributes()
            .iter()
            .map(|l| ScaledAttribute::parse(l).ok())
            .collect();
        Ok(AnnotatedLattice {
            lattice,
            articles,
            annotations,
            scaled,
        })
    }

    pub fn lattice(&self) -> &ConceptLattice {
        &self.lattice
    }

    pub fn articles(&self) -> &[ArticleMeta] {
        &self.articles
    }

    pub fn article(&self, id: &str) -> Result<(usize, &ArticleMeta)> {
        self.articles
            .iter()
            .enumerate()
            .find(|(_, a)| a.id == id)
            .ok_or_else(|| Error::UnknownArticle(id.to_string()))
    }

    /// Article indices whose object concept is `concept`.
    pub fn annotated_at(&self, concept: usize) -> &[usize] {
        &self.annotations[concept]
    }

    pub fn locate_article(&self, id: &str) -> Result<usize> {
        let (g, _) = self.article(id)?;
        Ok(self.lattice.gamma(g))
    }

    fn entries(&self, concepts: impl IntoIterator<Item = usize>, rationale: Rationale) -> MoveResult {
        let mut seen = BTreeSet::new();
        let mut results = Vec::new();
        for c in concepts {
            for &g in &self.annotations[c] {
                if seen.insert(g) {
                    results.push(MoveEntry {
                        article: self.articles[g].id.clone(),
                        concept: c,
                        rationale,
                    });
                }
            }
        }
        MoveResult {
            results,
            notice: None,
        }
    }

    fn check(&self, id: usize) -> Result<()> {
        self.lattice.concept(id).map(|_| ())
    }

    pub fn navigate(&self, from: usize, kind: Move) -> Result<MoveResult> {
        self.check(from)?;
        let l = &self.lattice;
        Ok(match kind {
            Move::Specialize => self.entries(
                l.upper_neighbours(from).iter().copied(),
                Rationale::Specialize,
            ),
            Move::Generalize => self.entries(
                l.lower_neighbours(from).iter().copied(),
                Rationale::Generalize,
            ),
            Move::Contrast => {
                let source = &l.concepts()[from].intent;
                let mut others: Vec<usize> =
                    (0..l.len()).filter(|&c| !l.comparable(from, c)).collect();
                others.sort_by_key(|&c| {
                    let concept = &l.concepts()[c];
                    (
                        concept.intent.intersection_len(source),
                        std::cmp::Reverse(concept.extent.len()),
                        c,
                    )
                });
                self.entries(others, Rationale::Contrast)
            }
            Move::Complement => self.complement(from),
        })
    }

    fn complement(&self, from: usize) -> MoveResult {
        let l = &self.lattice;
        if !self
            .scaled
            .iter()
            .flatten()
            .any(|a| a.kind != ScaleKind::Presence)
        {
            return MoveResult {
                results: Vec::new(),
                notice: Some("complement needs level >= 2 (polarity attributes)".into()),
            };
        }
        let n = self.scaled.len();
        let source = &l.concepts()[from].intent;
        let index_of = |a: ScaledAttribute| self.scaled.iter().position(|s| *s == Some(a));

        // polar images of the source intent that the source itself lacks
        let mut polar = BitSet::new(n);
        for m in source.iter() {
            if let Some(p) = self.scaled[m].and_then(|a| a.polar()).and_then(index_of) {
                if !source.contains(p) {
                    polar.insert(p);
                }
            }
        }
        let conventions = |set: &BitSet| -> BTreeSet<_> {
            set.iter()
                .filter_map(|m| self.scaled[m])
                .filter(|a| a.kind == ScaleKind::Presence)
                .map(|a| a.convention)
                .collect()
        };
        let source_conventions = conventions(source);

        let mut ranked: Vec<(usize, usize, usize)> = Vec::new();
        for g in 0..self.articles.len() {
            let c = l.gamma(g);
            let intent = &l.concepts()[c].intent;
            let matches = intent.intersection_len(&polar);
            if matches == 0 || conventions(intent).is_disjoint(&source_conventions) {
                continue;
            }
            ranked.push((matches, c, g));
        }
        ranked.sort_by_key(|&(matches, c, g)| (std::cmp::Reverse(matches), c, g));
        MoveResult {
            results: ranked
                .into_iter()
                .map(|(_, c, g)| MoveEntry {
                    article: self.articles[g].id.clone(),
                    concept: c,
                    rationale: Rationale::Complement,
                })
                .collect(),
            notice: None,
        }
    }

    /// Articles at the meet of `a` and `b`, or at the nearest annotated
    /// concepts below it.
    pub fn compromise(&self, a: usize, b: usize) -> Result<MoveResult> {
        let meet = self.lattice.meet(a, b)?;
        let targets = if self.annotations[meet].is_empty() {
            self.nearest_annotated(self.lattice.descendants(meet), |x, y| {
                self.lattice.leq(x, y)
            })
        } else {
            vec![meet]
        };
        Ok(self.entries(targets, Rationale::Compromise))
    }

    /// Articles at the join of `a` and `b`, or at the nearest annotated
    /// concepts above it.
    pub fn commonality(&self, a: usize, b: usize) -> Result<MoveResult> {
        let join = self.lattice.join(a, b)?;
        let targets = if self.annotations[join].is_empty() {
            self.nearest_annotated(self.lattice.ancestors(join), |x, y| {
                self.lattice.leq(y, x)
            })
        } else {
            vec![join]
        };
        Ok(self.entries(targets, Rationale::Commonality))
    }

    /// Annotated candidates with no other annotated candidate between them and
    /// the origin; `closer(x, y)` holds when `x` lies on the far side of `y`.
    fn nearest_annotated(
        &self,
        candidates: Vec<usize>,
        closer: impl Fn(usize, usize) -> bool,
    ) -> Vec<usize> {
        let annotated: Vec<usize> = candidates
            .into_iter()
            .filter(|&c| !self.annotations[c].is_empty())
            .collect();
        annotated
            .iter()
            .copied()
            .filter(|&c| !annotated.iter().any(|&d| d != c && closer(c, d)))
            .collect()
    }
}
