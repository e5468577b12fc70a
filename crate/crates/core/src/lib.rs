//! Conceptual controversy maps over convention-annotated articles.
//!
//! Articles annotated with convention markers are scaled into formal
//! contexts; the crate derives concept lattices, implication bases, order
//! metrics and ordinal factorizations, and lays the lattice out as a map
//! that can be navigated article by article.

pub mod analysis;
pub mod bitset;
pub mod context;
pub mod corpus;
pub mod error;
pub mod factors;
pub mod fixture;
pub mod implications;
pub mod lattice;
pub mod map;
pub mod navigation;
pub mod order;
pub mod scaling;

pub use analysis::Analysis;
pub use bitset::BitSet;
pub use context::{FormalContext, Side};
pub use corpus::{parse_annotations, AnnotationCorpus, Convention, Marker, MarkerSet};
pub use error::{Error, Result};
pub use factors::{cross_support, factor_support, greedy_factorize, FactorSequence, Support};
pub use implications::{canonical_base, Implication, ImplicationSet};
pub use lattice::{ConceptLattice, FormalConcept};
pub use map::MapDocument;
pub use navigation::{AnnotatedLattice, Move, MoveResult};
pub use order::Dimension;
pub use scaling::{apply_scale, Level, ScaleKind, ScaledAttribute};
