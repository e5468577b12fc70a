//! Convention annotations of news articles, before any scaling.
//!
//! The on-disk format is a long CSV with one marker per row:
//!
//! ```text
//! article_id,journal_id,convention,reference
//! A03,J1,green,R
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 4] = ["article_id", "journal_id", "convention", "reference"];

/// One of the four conventions (orders of worth) that articles are annotated with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Convention {
    Market,
    Green,
    State,
    Industry,
}

impl Convention {
    pub const ALL: [Convention; 4] = [
        Convention::Market,
        Convention::Green,
        Convention::State,
        Convention::Industry,
    ];

    /// Lower-case name used in the annotation CSV.
    pub fn name(self) -> &'static str {
        match self {
            Convention::Market => "market",
            Convention::Green => "green",
            Convention::State => "state",
            Convention::Industry => "industry",
        }
    }

    /// Capitalised name used as the stem of derived attribute labels.
    pub fn label(self) -> &'static str {
        match self {
            Convention::Market => "Market",
            Convention::Green => "Green",
            Convention::State => "State",
            Convention::Industry => "Industry",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Convention {
    type Err = Error;

    /// Accepts the CSV name, the label, or the one-letter abbreviation (`m`, `g`, `s`, `i`).
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "market" | "m" => Ok(Convention::Market),
            "green" | "g" => Ok(Convention::Green),
            "state" | "s" => Ok(Convention::State),
            "industry" | "i" => Ok(Convention::Industry),
            _ => Err(Error::UnknownConvention(s.to_string())),
        }
    }
}

/// How an article refers to a convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Marker {
    /// positive, as a justification
    R,
    /// positive, as a mere topic
    T,
    /// criticised internally
    I,
    /// criticised externally
    E,
}

impl Marker {
    pub const ALL: [Marker; 4] = [Marker::R, Marker::T, Marker::I, Marker::E];

    pub fn letter(self) -> char {
        match self {
            Marker::R => 'R',
            Marker::T => 'T',
            Marker::I => 'I',
            Marker::E => 'E',
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl FromStr for Marker {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "R" => Ok(Marker::R),
            "T" => Ok(Marker::T),
            "I" => Ok(Marker::I),
            "E" => Ok(Marker::E),
            other => Err(other.to_string()),
        }
    }
}

/// Subset of `{R, T, I, E}` packed into the low four bits.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MarkerSet(u8);

impl MarkerSet {
    pub const EMPTY: MarkerSet = MarkerSet(0);

    pub fn from_bits(bits: u8) -> Self {
        MarkerSet(bits & 0b1111)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn with(self, m: Marker) -> Self {
        MarkerSet(self.0 | m.bit())
    }

    pub fn contains(self, m: Marker) -> bool {
        self.0 & m.bit() != 0
    }

    pub fn intersects(self, other: MarkerSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: MarkerSet) -> Self {
        MarkerSet(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = Marker> {
        Marker::ALL.into_iter().filter(move |m| self.contains(*m))
    }

    /// All fifteen non-empty marker sets, in ascending bit order (R lowest).
    pub fn non_empty() -> impl Iterator<Item = MarkerSet> {
        (1u8..16).map(MarkerSet)
    }
}

impl<const N: usize> From<[Marker; N]> for MarkerSet {
    fn from(markers: [Marker; N]) -> Self {
        markers.into_iter().fold(MarkerSet::EMPTY, MarkerSet::with)
    }
}

impl fmt::Debug for MarkerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for m in self.iter() {
            write!(f, "{}", m.letter())?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArticleAnnotation {
    pub article_id: String,
    pub journal_id: String,
    pub convention: Convention,
    pub markers: MarkerSet,
}

/// The annotations of one (or a merged set of) journals.
///
/// Articles keep their first-appearance order; each `(article, convention)`
/// pair carries one non-empty marker set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AnnotationCorpus {
    journal_id: String,
    articles: Vec<String>,
    journals: Vec<String>,
    markers: BTreeMap<(usize, Convention), MarkerSet>,
}

impl AnnotationCorpus {
    pub fn new(journal_id: impl Into<String>) -> Self {
        AnnotationCorpus {
            journal_id: journal_id.into(),
            ..Default::default()
        }
    }

    pub fn journal_id(&self) -> &str {
        &self.journal_id
    }

    pub fn articles(&self) -> &[String] {
        &self.articles
    }

    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }

    pub fn article_index(&self, article_id: &str) -> Option<usize> {
        self.articles.iter().position(|a| a == article_id)
    }

    /// Journal of the article at `index`.
    pub fn journal_of(&self, index: usize) -> &str {
        &self.journals[index]
    }

    /// Registers an article without annotations (no-op if already present).
    pub fn add_article(&mut self, article_id: &str, journal_id: &str) -> usize {
        match self.article_index(article_id) {
            Some(i) => i,
            None => {
                self.articles.push(article_id.to_string());
                self.journals.push(journal_id.to_string());
                self.articles.len() - 1
            }
        }
    }

    /// Adds markers to an article's convention, merging with what is already there.
    /// Empty marker sets are ignored.
    pub fn annotate(
        &mut self,
        article_id: &str,
        journal_id: &str,
        convention: Convention,
        markers: MarkerSet,
    ) {
        let index = self.add_article(article_id, journal_id);
        if markers.is_empty() {
            return;
        }
        let entry = self.markers.entry((index, convention)).or_default();
        *entry = entry.union(markers);
    }

    /// Marker set of an article for a convention (empty when not referenced).
    pub fn markers(&self, article: usize, convention: Convention) -> MarkerSet {
        self.markers
            .get(&(article, convention))
            .copied()
            .unwrap_or_default()
    }

    /// Annotations in article order, conventions in canonical order.
    pub fn annotations(&self) -> Vec<ArticleAnnotation> {
        self.markers
            .iter()
            .map(|(&(a, convention), &markers)| ArticleAnnotation {
                article_id: self.articles[a].clone(),
                journal_id: self.journals[a].clone(),
                convention,
                markers,
            })
            .collect()
    }

    /// Keeps only articles of the given journal.
    pub fn filter_journal(&self, journal_id: &str) -> AnnotationCorpus {
        let mut out = AnnotationCorpus::new(journal_id);
        for (i, article) in self.articles.iter().enumerate() {
            if self.journals[i] != journal_id {
                continue;
            }
            out.add_article(article, journal_id);
            for c in Convention::ALL {
                out.annotate(article, journal_id, c, self.markers(i, c));
            }
        }
        out
    }

    /// Distinct journal ids in first-appearance order.
    pub fn journals(&self) -> Vec<&str> {
        let mut seen: Vec<&str> = Vec::new();
        for j in &self.journals {
            if !seen.contains(&j.as_str()) {
                seen.push(j);
            }
        }
        seen
    }

    /// Appends the articles of `other`; shared article ids merge their markers.
    pub fn merge(&self, other: &AnnotationCorpus) -> AnnotationCorpus {
        let mut out = self.clone();
        for (i, article) in other.articles.iter().enumerate() {
            out.add_article(article, &other.journals[i]);
            for c in Convention::ALL {
                out.annotate(article, &other.journals[i], c, other.markers(i, c));
            }
        }
        out.journal_id = out.journals().join("+");
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = CSV_HEADER.join(",");
        out.push('\n');
        for ann in self.annotations() {
            for m in ann.markers.iter() {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    ann.article_id,
                    ann.journal_id,
                    ann.convention.name(),
                    m.letter()
                ));
            }
        }
        out
    }
}

fn annotation_error(line: usize, message: impl Into<String>) -> Error {
    Error::Annotation {
        line,
        message: message.into(),
    }
}

/// Parses the long-format annotation CSV. Duplicate rows merge.
pub fn parse_annotations(text: &str) -> Result<AnnotationCorpus> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    let mut records = reader.records();

    let header = match records.next() {
        None => return Err(annotation_error(1, "empty file, expected header")),
        Some(rec) => rec.map_err(|e| annotation_error(1, e.to_string()))?,
    };
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(annotation_error(
            1,
            format!("header must be `{}`", CSV_HEADER.join(",")),
        ));
    }

    let mut corpus: Option<AnnotationCorpus> = None;
    for rec in records {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            annotation_error(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != 4 {
            return Err(annotation_error(
                line,
                format!("expected 4 fields, found {}", rec.len()),
            ));
        }
        let (article, journal) = (rec[0].trim(), rec[1].trim());
        if article.is_empty() {
            return Err(annotation_error(line, "empty article id"));
        }
        let convention: Convention = rec[2]
            .parse()
            .map_err(|_| annotation_error(line, format!("unknown convention `{}`", &rec[2])))?;
        let marker: Marker = rec[3]
            .parse()
            .map_err(|r| annotation_error(line, format!("unknown reference letter `{r}`")))?;
        corpus
            .get_or_insert_with(|| AnnotationCorpus::new(journal))
            .annotate(article, journal, convention, MarkerSet::from([marker]));
    }

    let mut corpus =
        corpus.ok_or_else(|| annotation_error(2, "no annotation rows after header"))?;
    corpus.journal_id = corpus.journals().join("+");
    Ok(corpus)
}
