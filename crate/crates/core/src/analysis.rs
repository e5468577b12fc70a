//! One scaled view of a corpus with everything derived from it.

use crate::context::FormalContext;
use crate::corpus::{AnnotationCorpus, Convention};
use crate::error::Result;
use crate::factors::{greedy_factorize, Factorization};
use crate::implications::{canonical_base, ImplicationSet};
use crate::lattice::ConceptLattice;
use crate::map::{build_map, map_factors, MapDocument, MapMeta, MapMetrics};
use crate::navigation::AnnotatedLattice;
use crate::order::{order_dimension, width_depth, Dimension, DEFAULT_DIMENSION_BUDGET};
use crate::scaling::{apply_scale, Level};

#[derive(Debug, Clone)]
pub struct Analysis {
    pub journal: String,
    pub level: Level,
    pub conventions: Vec<Convention>,
    pub annotated: AnnotatedLattice,
    pub factorization: Factorization,
    pub metrics: MapMetrics,
}

impl Analysis {
    pub fn new(corpus: &AnnotationCorpus, conventions: &[Convention], level: Level) -> Result<Self> {
        let context = apply_scale(corpus, conventions, level)?;
        let lattice = ConceptLattice::new(&context);
        let (width, depth) = width_depth(&lattice);
        let metrics = MapMetrics {
            objects: context.object_count(),
            attributes: context.attribute_count(),
            incidence: context.incidence_count(),
            density: context.density().unwrap_or(0.0),
            concepts: lattice.len(),
            width,
            depth,
            dimension: order_dimension(&lattice, DEFAULT_DIMENSION_BUDGET),
        };
        let factorization = greedy_factorize(&lattice);
        Ok(Analysis {
            journal: corpus.journal_id().to_string(),
            level,
            conventions: conventions.to_vec(),
            annotated: AnnotatedLattice::new(lattice),
            factorization,
            metrics,
        })
    }

    pub fn lattice(&self) -> &ConceptLattice {
        self.annotated.lattice()
    }

    pub fn context(&self) -> &FormalContext {
        self.lattice().context()
    }

    pub fn dimension(&self) -> Dimension {
        self.metrics.dimension
    }

    pub fn base(&self) -> ImplicationSet {
        canonical_base(self.context())
    }

    pub fn map(&self, max_factors: Option<usize>) -> MapDocument {
        let meta = MapMeta {
            journal: self.journal.clone(),
            level: self.level.index(),
            conventions: self.conventions.iter().map(|c| c.name().to_string()).collect(),
            metrics: self.metrics.clone(),
        };
        build_map(
            self.lattice(),
            meta,
            map_factors(&self.factorization, max_factors),
        )
    }
}
