//! Formal contexts `(G, M, I)` and the derivation operators.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Which side of a context a label set lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Objects,
    Attributes,
}

/// Objects × attributes with a binary incidence relation.
///
/// Incidence is stored twice, as per-object attribute rows and per-attribute
/// object columns, so that both derivation directions are word-parallel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalContext {
    name: String,
    objects: Vec<String>,
    attributes: Vec<String>,
    rows: Vec<BitSet>,
    columns: Vec<BitSet>,
}

fn check_unique(labels: &[String], what: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::InvalidContext(format!("duplicate {what} label `{l}`")));
        }
    }
    Ok(())
}

impl FormalContext {
    /// Builds a context from labels and per-object rows of attribute indices.
    pub fn new(
        objects: Vec<String>,
        attributes: Vec<String>,
        rows: Vec<BitSet>,
    ) -> Result<Self> {
        check_unique(&objects, "object")?;
        check_unique(&attributes, "attribute")?;
        if rows.len() != objects.len() {
            return Err(Error::InvalidContext(format!(
                "{} rows for {} objects",
                rows.len(),
                objects.len()
            )));
        }
        if let Some(r) = rows.iter().find(|r| r.capacity() != attributes.len()) {
            return Err(Error::InvalidContext(format!(
                "row capacity {} does not match {} attributes",
                r.capacity(),
                attributes.len()
            )));
        }
        let mut columns = vec![BitSet::new(objects.len()); attributes.len()];
        for (g, row) in rows.iter().enumerate() {
            for m in row.iter() {
                columns[m].insert(g);
            }
        }
        Ok(FormalContext {
            name: String::new(),
            objects,
            attributes,
            rows,
            columns,
        })
    }

    /// Convenience constructor from a boolean matrix.
    pub fn from_bools(
        objects: Vec<String>,
        attributes: Vec<String>,
        cross: &[Vec<bool>],
    ) -> Result<Self> {
        let n = attributes.len();
        let rows = cross
            .iter()
            .map(|r| {
                if r.len() != n {
                    return Err(Error::InvalidContext(format!(
                        "row of length {} for {n} attributes",
                        r.len()
                    )));
                }
                Ok(BitSet::from_indices(
                    n,
                    r.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        FormalContext::new(objects, attributes, rows)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn attribute_count(&self) -> usize {
        self.attributes.len()
    }

    pub fn row(&self, g: usize) -> &BitSet {
        &self.rows[g]
    }

    pub fn rows(&self) -> &[BitSet] {
        &self.rows
    }

    pub fn column(&self, m: usize) -> &BitSet {
        &self.columns[m]
    }

    pub fn incident(&self, g: usize, m: usize) -> bool {
        self.rows[g].contains(m)
    }

    /// `|I|`
    pub fn incidence_count(&self) -> usize {
        self.rows.iter().map(BitSet::len).sum()
    }

    pub fn object_index(&self, label: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == label)
    }

    pub fn attribute_index(&self, label: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a == label)
    }

    /// Resolves attribute labels to a bit set.
    pub fn attribute_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<BitSet> {
        let mut set = BitSet::new(self.attributes.len());
        for l in labels {
            let i = self
                .attribute_index(l.as_ref())
                .ok_or_else(|| Error::UnknownLabel(l.as_ref().to_string()))?;
            set.insert(i);
        }
        Ok(set)
    }

    pub fn object_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<BitSet> {
        let mut set = BitSet::new(self.objects.len());
        for l in labels {
            let i = self
                .object_index(l.as_ref())
                .ok_or_else(|| Error::UnknownLabel(l.as_ref().to_string()))?;
            set.insert(i);
        }
        Ok(set)
    }

    pub fn attribute_labels(&self, set: &BitSet) -> Vec<String> {
        set.iter().map(|i| self.attributes[i].clone()).collect()
    }

    pub fn object_labels(&self, set: &BitSet) -> Vec<String> {
        set.iter().map(|i| self.objects[i].clone()).collect()
    }

    /// `A′`: attributes shared by every object in `objects`.
    pub fn intent_of(&self, objects: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.attributes.len());
        for g in objects.iter() {
            out.intersect_with(&self.rows[g]);
        }
        out
    }

    /// `B′`: objects having every attribute in `attributes`.
    pub fn extent_of(&self, attributes: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.objects.len());
        for m in attributes.iter() {
            out.intersect_with(&self.columns[m]);
        }
        out
    }

    /// `B′′`
    pub fn attribute_closure(&self, attributes: &BitSet) -> BitSet {
        self.intent_of(&self.extent_of(attributes))
    }

    /// `A′′`
    pub fn object_closure(&self, objects: &BitSet) -> BitSet {
        self.extent_of(&self.intent_of(objects))
    }

    /// Label-level derivation: maps a label set on `side` to the incident labels
    /// on the other side.
    pub fn derive<S: AsRef<str>>(&self, side: Side, labels: &[S]) -> Result<Vec<String>> {
        Ok(match side {
            Side::Objects => {
                let set = self.object_set(labels)?;
                self.attribute_labels(&self.intent_of(&set))
            }
            Side::Attributes => {
                let set = self.attribute_set(labels)?;
                self.object_labels(&self.extent_of(&set))
            }
        })
    }

    /// `|I| / (|G|·|M|)`
    pub fn density(&self) -> Result<f64> {
        if self.objects.is_empty() {
            return Err(Error::Empty("object set"));
        }
        if self.attributes.is_empty() {
            return Err(Error::Empty("attribute set"));
        }
        Ok(self.incidence_count() as f64 / (self.objects.len() * self.attributes.len()) as f64)
    }

    /// Same objects, attributes restricted to `keep` in original order.
    pub fn restrict_attributes<S: AsRef<str>>(&self, keep: &[S]) -> Result<FormalContext> {
        let keep = self.attribute_set(keep)?;
        let kept: Vec<usize> = keep.iter().collect();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                BitSet::from_indices(
                    kept.len(),
                    kept.iter().enumerate().filter(|(_, &m)| r.contains(m)).map(|(i, _)| i),
                )
            })
            .collect();
        Ok(FormalContext::new(
            self.objects.clone(),
            kept.iter().map(|&m| self.attributes[m].clone()).collect(),
            rows,
        )?
        .with_name(self.name.clone()))
    }

    /// Objects of `self` followed by those of `other`; attribute lists must agree.
    pub fn union_objects(&self, other: &FormalContext) -> Result<FormalContext> {
        if self.attributes != other.attributes {
            return Err(Error::UniverseMismatch);
        }
        let mut objects = self.objects.clone();
        objects.extend(other.objects.iter().cloned());
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        FormalContext::new(objects, self.attributes.clone(), rows)
    }

    /// Burmeister CXT serialisation.
    pub fn to_cxt(&self) -> String {
        let mut out = String::new();
        writeln!(out, "B").unwrap();
        writeln!(out, "{}", self.name).unwrap();
        writeln!(out, "{}", self.objects.len()).unwrap();
        writeln!(out, "{}", self.attributes.len()).unwrap();
        writeln!(out).unwrap();
        for o in &self.objects {
            writeln!(out, "{o}").unwrap();
        }
        for a in &self.attributes {
            writeln!(out, "{a}").unwrap();
        }
        for row in &self.rows {
            let line: String = (0..self.attributes.len())
                .map(|m| if row.contains(m) { 'X' } else { '.' })
                .collect();
            writeln!(out, "{line}").unwrap();
        }
        out
    }

    /// Parses a Burmeister CXT document.
    pub fn from_cxt(text: &str) -> Result<FormalContext> {
        let err = |line: usize, message: String| Error::Cxt { line, message };
        let lines: Vec<&str> = text.split('\n').collect();
        let get = |i: usize| -> Result<&str> {
            lines
                .get(i)
                .map(|l| l.strip_suffix('\r').unwrap_or(l))
                .ok_or_else(|| err(i + 1, "unexpected end of document".into()))
        };
        if get(0)? != "B" {
            return Err(err(1, "expected `B`".into()));
        }
        let name = get(1)?.to_string();
        let parse_count = |i: usize| -> Result<usize> {
            let l = get(i)?;
            l.trim()
                .parse()
                .map_err(|_| err(i + 1, format!("expected a count, found `{l}`")))
        };
        let n_objects = parse_count(2)?;
        let n_attributes = parse_count(3)?;
        if !get(4)?.is_empty() {
            return Err(err(5, "expected an empty line".into()));
        }
        let mut at = 5;
        let mut objects = Vec::with_capacity(n_objects);
        for _ in 0..n_objects {
            objects.push(get(at)?.to_string());
            at += 1;
        }
        let mut attributes = Vec::with_capacity(n_attributes);
        for _ in 0..n_attributes {
            attributes.push(get(at)?.to_string());
            at += 1;
        }
        let mut rows = Vec::with_capacity(n_objects);
        for (g, object) in objects.iter().enumerate() {
            let line = get(at).map_err(|_| {
                err(
                    at + 1,
                    format!("declared {n_objects} objects but found {g} incidence rows"),
                )
            })?;
            let chars: Vec<char> = line.chars().collect();
            if chars.len() != n_attributes {
                return Err(err(
                    at + 1,
                    format!(
                        "row for object `{}` has length {}, expected {n_attributes}",
                        object,
                        chars.len()
                    ),
                ));
            }
            let mut row = BitSet::new(n_attributes);
            for (m, c) in chars.into_iter().enumerate() {
                match c {
                    'X' | 'x' => {
                        row.insert(m);
                    }
                    '.' => {}
                    other => {
                        return Err(err(
                            at + 1,
                            format!("unexpected character `{other}` in incidence row"),
                        ))
                    }
                }
            }
            rows.push(row);
            at += 1;
        }
        if lines[at..].iter().any(|l| !l.trim().is_empty()) {
            return Err(err(at + 1, "trailing content after incidence rows".into()));
        }
        Ok(FormalContext::new(objects, attributes, rows)?.with_name(name))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn labels(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    pub fn ctx(cross: &[&str]) -> FormalContext {
        let n = cross.first().map_or(0, |r| r.len());
        let bools: Vec<Vec<bool>> = cross
            .iter()
            .map(|r| r.chars().map(|c| c == 'X').collect())
            .collect();
        FormalContext::from_bools(labels("g", cross.len()), labels("m", n), &bools).unwrap()
    }

    #[test]
    fn derive_empty_gives_other_side() {
        let k = ctx(&["X.", ".X"]);
        let none: [&str; 0] = [];
        assert_eq!(k.derive(Side::Objects, &none).unwrap(), ["m0", "m1"]);
        assert_eq!(k.derive(Side::Attributes, &none).unwrap(), ["g0", "g1"]);
        assert_eq!(k.derive(Side::Objects, &["g0"]).unwrap(), ["m0"]);
        assert!(k.derive(Side::Objects, &["nope"]).is_err());
    }

    #[test]
    fn density_cases() {
        assert_eq!(ctx(&["XX", "XX"]).density().unwrap(), 1.0);
        assert_eq!(ctx(&["X.", ".X"]).density().unwrap(), 0.5);
        let empty = FormalContext::new(vec![], labels("m", 2), vec![]).unwrap();
        assert!(matches!(empty.density(), Err(Error::Empty(_))));
        let no_attrs = FormalContext::new(labels("g", 1), vec![], vec![BitSet::new(0)]).unwrap();
        assert!(no_attrs.density().is_err());
    }

    #[test]
    fn cxt_diagonal_document() {
        let k = ctx(&["X.", ".X"]);
        let doc = k.to_cxt();
        assert_eq!(doc, "B\n\n2\n2\n\ng0\ng1\nm0\nm1\nX.\n.X\n");
        assert_eq!(doc.lines().count(), 11);
        assert_eq!(FormalContext::from_cxt(&doc).unwrap(), k);
    }

    #[test]
    fn cxt_errors() {
        let short = "B\n\n2\n2\n\ng0\ng1\nm0\nm1\nX\n.X\n";
        let e = FormalContext::from_cxt(short).unwrap_err();
        assert!(e.to_string().contains("line 10") && e.to_string().contains("g0"), "{e}");

        let bad_char = "B\n\n1\n2\n\ng0\nm0\nm1\nXo\n";
        assert!(FormalContext::from_cxt(bad_char)
            .unwrap_err()
            .to_string()
            .contains("unexpected character"));

        let missing_row = "B\n\n2\n2\n\ng0\ng1\nm0\nm1\nX.\n";
        assert!(FormalContext::from_cxt(missing_row).is_err());

        let bad_count = "B\n\nzwei\n2\n\n";
        assert!(FormalContext::from_cxt(bad_count).is_err());
    }

    #[test]
    fn restrict_keeps_order() {
        let k = ctx(&["XX.", ".XX"]);
        let r = k.restrict_attributes(&["m2", "m0"]).unwrap();
        assert_eq!(r.attributes(), ["m0", "m2"]);
        assert_eq!(r.incidence_count(), 2);
        assert_eq!(k.restrict_attributes(k.attributes()).unwrap(), k);
        assert!(k.restrict_attributes(&["zz"]).is_err());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let r = FormalContext::new(
            vec!["a".into(), "a".into()],
            vec![],
            vec![BitSet::new(0), BitSet::new(0)],
        );
        assert!(r.is_err());
    }
}
