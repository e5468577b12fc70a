//! The convention scale: turns per-convention marker sets into binary
//! attributes at three nested resolution levels.

use std::fmt;
use std::str::FromStr;

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::corpus::{AnnotationCorpus, Convention, Marker, MarkerSet};
use crate::error::{Error, Result};
use crate::lattice;

/// The seven attribute kinds derived from one convention, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScaleKind {
    /// `C`: the convention is referenced at all.
    Presence,
    /// `C +`
    Positive,
    /// `C + R`
    Justification,
    /// `C + T`
    Topic,
    /// `C -`
    Negative,
    /// `C - I`
    Internal,
    /// `C - E`
    External,
}

impl ScaleKind {
    pub const ALL: [ScaleKind; 7] = [
        ScaleKind::Presence,
        ScaleKind::Positive,
        ScaleKind::Justification,
        ScaleKind::Topic,
        ScaleKind::Negative,
        ScaleKind::Internal,
        ScaleKind::External,
    ];

    /// Markers that make this attribute fire (any one suffices).
    pub fn trigger(self) -> MarkerSet {
        use Marker::*;
        match self {
            ScaleKind::Presence => MarkerSet::from([R, T, I, E]),
            ScaleKind::Positive => MarkerSet::from([R, T]),
            ScaleKind::Justification => MarkerSet::from([R]),
            ScaleKind::Topic => MarkerSet::from([T]),
            ScaleKind::Negative => MarkerSet::from([I, E]),
            ScaleKind::Internal => MarkerSet::from([I]),
            ScaleKind::External => MarkerSet::from([E]),
        }
    }

    pub fn fires(self, markers: MarkerSet) -> bool {
        markers.intersects(self.trigger())
    }

    pub fn suffix(self) -> &'static str {
        match self {
            ScaleKind::Presence => "",
            ScaleKind::Positive => " +",
            ScaleKind::Justification => " + R",
            ScaleKind::Topic => " + T",
            ScaleKind::Negative => " -",
            ScaleKind::Internal => " - I",
            ScaleKind::External => " - E",
        }
    }

    /// The kind of opposite polarity used by complement navigation; `None` for `C`.
    pub fn polar(self) -> Option<ScaleKind> {
        match self {
            ScaleKind::Presence => None,
            ScaleKind::Positive | ScaleKind::Justification | ScaleKind::Topic => {
                Some(ScaleKind::Negative)
            }
            ScaleKind::Negative | ScaleKind::Internal | ScaleKind::External => {
                Some(ScaleKind::Positive)
            }
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// A scaled attribute: one convention viewed through one scale kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScaledAttribute {
    pub convention: Convention,
    pub kind: ScaleKind,
}

impl ScaledAttribute {
    pub fn new(convention: Convention, kind: ScaleKind) -> Self {
        ScaledAttribute { convention, kind }
    }

    pub fn label(self) -> String {
        format!("{}{}", self.convention.label(), self.kind.suffix())
    }

    pub fn parse(label: &str) -> Result<Self> {
        let label = label.trim();
        for c in Convention::ALL {
            for k in ScaleKind::ALL {
                if ScaledAttribute::new(c, k).label() == label {
                    return Ok(ScaledAttribute::new(c, k));
                }
            }
        }
        Err(Error::UnknownLabel(label.to_string()))
    }

    pub fn polar(self) -> Option<ScaledAttribute> {
        self.kind
            .polar()
            .map(|k| ScaledAttribute::new(self.convention, k))
    }
}

impl fmt::Display for ScaledAttribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    L1 = 1,
    L2 = 2,
    L3 = 3,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::L1, Level::L2, Level::L3];

    pub fn from_index(i: u8) -> Result<Level> {
        match i {
            1 => Ok(Level::L1),
            2 => Ok(Level::L2),
            3 => Ok(Level::L3),
            _ => Err(Error::UnknownLabel(format!("level {i}"))),
        }
    }

    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn kinds(self) -> &'static [ScaleKind] {
        use ScaleKind::*;
        match self {
            Level::L1 => &[Presence],
            Level::L2 => &[Presence, Positive, Negative],
            Level::L3 => &ScaleKind::ALL,
        }
    }

    pub fn includes(self, kind: ScaleKind) -> bool {
        self.kinds().contains(&kind)
    }

    pub fn previous(self) -> Option<Level> {
        match self {
            Level::L1 => None,
            Level::L2 => Some(Level::L1),
            Level::L3 => Some(Level::L2),
        }
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Level> {
        let t = s.trim().trim_start_matches(['L', 'l']);
        t.parse::<u8>()
            .map_err(|_| Error::UnknownLabel(format!("level {s}")))
            .and_then(Level::from_index)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}", self.index())
    }
}

/// Attributes of a level for the given conventions, in canonical order:
/// conventions as given, kinds in scale order within each convention.
pub fn scaled_attributes(conventions: &[Convention], level: Level) -> Vec<ScaledAttribute> {
    conventions
        .iter()
        .flat_map(|&c| level.kinds().iter().map(move |&k| ScaledAttribute::new(c, k)))
        .collect()
}

/// Scales an annotation corpus into a formal context.
pub fn apply_scale(
    corpus: &AnnotationCorpus,
    conventions: &[Convention],
    level: Level,
) -> Result<FormalContext> {
    if conventions.is_empty() {
        return Err(Error::Empty("convention list"));
    }
    for (i, c) in conventions.iter().enumerate() {
        if conventions[..i].contains(c) {
            return Err(Error::InvalidContext(format!("convention {c} listed twice")));
        }
    }
    let attrs = scaled_attributes(conventions, level);
    let rows = (0..corpus.len())
        .map(|g| {
            BitSet::from_indices(
                attrs.len(),
                attrs.iter().enumerate().filter_map(|(i, a)| {
                    a.kind.fires(corpus.markers(g, a.convention)).then_some(i)
                }),
            )
        })
        .collect();
    Ok(FormalContext::new(
        corpus.articles().to_vec(),
        attrs.iter().map(|a| a.label()).collect(),
        rows,
    )?
    .with_name(format!("{} {}", corpus.journal_id(), level)))
}

/// True iff every extent of `coarse` is also an extent of `fine`.
///
/// Extents of `coarse` are generated by intersecting attribute columns
/// (plus the full object set); each is checked for closedness in `fine`.
pub fn is_coarser_view(coarse: &FormalContext, fine: &FormalContext) -> Result<bool> {
    if coarse.objects() != fine.objects() {
        return Err(Error::ObjectMismatch);
    }
    Ok(lattice::extents(coarse)
        .iter()
        .all(|e| &fine.object_closure(e) == e))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marginals {
    pub counts: Vec<(String, usize)>,
    pub total: usize,
}

impl Marginals {
    pub fn get(&self, label: &str) -> Option<usize> {
        self.counts.iter().find(|(l, _)| l == label).map(|(_, c)| *c)
    }
}

/// Per-attribute incidence counts and `|I|`.
pub fn marginals(context: &FormalContext) -> Marginals {
    let counts = context
        .attributes()
        .iter()
        .enumerate()
        .map(|(m, l)| (l.clone(), context.column(m).len()))
        .collect();
    Marginals {
        counts,
        total: context.incidence_count(),
    }
}
