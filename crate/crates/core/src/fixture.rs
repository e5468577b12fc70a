//! Reconstruction of annotation corpora from published per-attribute counts.
//!
//! The raw article × convention tables behind the two studied journals are
//! not available, only their marginals and a few structural facts (level-1
//! bases, implications that hold or fail). [`reconstruct_fixture`] searches
//! for a corpus that honours all of them, deterministically.
//!
//! The search runs in two phases:
//!
//! 1. Level-1 rows (which conventions an article references) are chosen as a
//!    multiset of row types meeting the presence counts and level-1
//!    constraints. Among all solutions the most even spread (smallest sum of
//!    squared multiplicities) is preferred, ties by discovery order.
//! 2. Marker sets are assigned per convention, articles ascending, trying the
//!    fifteen non-empty marker sets in ascending bit order (R, T, I, E).

use crate::context::FormalContext;
use crate::corpus::{AnnotationCorpus, Convention, MarkerSet};
use crate::error::{Error, Result};
use crate::implications::canonical_base;
use crate::scaling::{apply_scale, Level, ScaleKind, ScaledAttribute};

const PHASE1_BUDGET: u64 = 5_000_000;
const PHASE2_BUDGET: u64 = 20_000_000;

/// Target counts for one convention, indexed by [`ScaleKind::index`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConventionCounts {
    pub convention: Convention,
    pub counts: [usize; 7],
}

impl ConventionCounts {
    /// Counts in scale order: `C, C+, C+R, C+T, C-, C-I, C-E`.
    pub fn new(convention: Convention, counts: [usize; 7]) -> Self {
        ConventionCounts { convention, counts }
    }

    pub fn get(&self, kind: ScaleKind) -> usize {
        self.counts[kind.index()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixtureConstraint {
    Holds {
        premise: Vec<ScaledAttribute>,
        conclusion: Vec<ScaledAttribute>,
    },
    Fails {
        premise: Vec<ScaledAttribute>,
        conclusion: Vec<ScaledAttribute>,
    },
    /// The canonical base of the level-1 context must equal this list
    /// (compared in normalized form).
    Level1Base(Vec<(Vec<Convention>, Vec<Convention>)>),
}

fn parse_attrs(labels: &[&str]) -> Result<Vec<ScaledAttribute>> {
    labels.iter().map(|l| ScaledAttribute::parse(l)).collect()
}

impl FixtureConstraint {
    pub fn holds(premise: &[&str], conclusion: &[&str]) -> Result<Self> {
        Ok(FixtureConstraint::Holds {
            premise: parse_attrs(premise)?,
            conclusion: parse_attrs(conclusion)?,
        })
    }

    pub fn fails(premise: &[&str], conclusion: &[&str]) -> Result<Self> {
        Ok(FixtureConstraint::Fails {
            premise: parse_attrs(premise)?,
            conclusion: parse_attrs(conclusion)?,
        })
    }

    fn attrs(&self) -> Vec<ScaledAttribute> {
        match self {
            FixtureConstraint::Holds {
                premise,
                conclusion,
            }
            | FixtureConstraint::Fails {
                premise,
                conclusion,
            } => premise.iter().chain(conclusion).copied().collect(),
            FixtureConstraint::Level1Base(base) => base
                .iter()
                .flat_map(|(p, c)| p.iter().chain(c))
                .map(|&c| ScaledAttribute::new(c, ScaleKind::Presence))
                .collect(),
        }
    }

    fn is_level1(&self) -> bool {
        self.attrs().iter().all(|a| a.kind == ScaleKind::Presence)
    }

    fn implication(&self) -> Option<(&[ScaledAttribute], &[ScaledAttribute], bool)> {
        match self {
            FixtureConstraint::Holds {
                premise,
                conclusion,
            } => Some((premise, conclusion, true)),
            FixtureConstraint::Fails {
                premise,
                conclusion,
            } => Some((premise, conclusion, false)),
            FixtureConstraint::Level1Base(_) => None,
        }
    }
}

impl std::fmt::Display for FixtureConstraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[ScaledAttribute]| {
            v.iter().map(|a| a.label()).collect::<Vec<_>>().join(", ")
        };
        match self {
            FixtureConstraint::Holds {
                premise,
                conclusion,
            } => write!(f, "holds: {{{}}} -> {{{}}}", join(premise), join(conclusion)),
            FixtureConstraint::Fails {
                premise,
                conclusion,
            } => write!(f, "fails: {{{}}} -> {{{}}}", join(premise), join(conclusion)),
            FixtureConstraint::Level1Base(base) => {
                write!(f, "level-1 base of {} implications", base.len())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginalSpec {
    pub journal_id: String,
    /// Article ids are `<prefix><two-digit number>`, numbered from 1.
    pub article_prefix: String,
    pub article_count: usize,
    pub conventions: Vec<ConventionCounts>,
    pub constraints: Vec<FixtureConstraint>,
}

impl MarginalSpec {
    pub fn article_id(&self, i: usize) -> String {
        format!("{}{:02}", self.article_prefix, i + 1)
    }

    fn conventions(&self) -> Vec<Convention> {
        self.conventions.iter().map(|c| c.convention).collect()
    }

    /// Checks bounds and scale monotonicity of the counts.
    pub fn validate(&self) -> Result<()> {
        use ScaleKind::*;
        if self.article_count == 0 {
            return Err(Error::Infeasible("article count must be positive".into()));
        }
        let convs = self.conventions();
        for cc in &self.conventions {
            let c = cc.convention.label();
            for kind in ScaleKind::ALL {
                let n = cc.get(kind);
                if n > self.article_count {
                    return Err(Error::Infeasible(format!(
                        "count({}) = {n} exceeds article count {}",
                        ScaledAttribute::new(cc.convention, kind),
                        self.article_count
                    )));
                }
            }
            let le = |a: ScaleKind, b: ScaleKind| -> Result<()> {
                if cc.get(a) > cc.get(b) {
                    return Err(Error::Infeasible(format!(
                        "count({}) = {} exceeds count({}) = {}",
                        ScaledAttribute::new(cc.convention, a),
                        cc.get(a),
                        ScaledAttribute::new(cc.convention, b),
                        cc.get(b)
                    )));
                }
                Ok(())
            };
            le(Justification, Positive)?;
            le(Topic, Positive)?;
            le(Positive, Presence)?;
            le(Internal, Negative)?;
            le(External, Negative)?;
            le(Negative, Presence)?;
            let sum_le = |total: ScaleKind, a: ScaleKind, b: ScaleKind| -> Result<()> {
                if cc.get(total) > cc.get(a) + cc.get(b) {
                    return Err(Error::Infeasible(format!(
                        "count({c}{}) = {} exceeds count({c}{}) + count({c}{})",
                        total.suffix(),
                        cc.get(total),
                        a.suffix(),
                        b.suffix()
                    )));
                }
                Ok(())
            };
            sum_le(Positive, Justification, Topic)?;
            sum_le(Negative, Internal, External)?;
            sum_le(Presence, Positive, Negative)?;
        }
        for (i, cc) in self.conventions.iter().enumerate() {
            if self.conventions[..i]
                .iter()
                .any(|o| o.convention == cc.convention)
            {
                return Err(Error::Infeasible(format!(
                    "convention {} listed twice",
                    cc.convention
                )));
            }
        }
        for constraint in &self.constraints {
            if let Some(a) = constraint
                .attrs()
                .into_iter()
                .find(|a| !convs.contains(&a.convention))
            {
                return Err(Error::Infeasible(format!(
                    "constraint `{constraint}` uses {a}, whose convention has no counts"
                )));
            }
        }
        Ok(())
    }
}

/// Searches for a corpus matching the counts and constraints of `spec`.
///
/// When the full constraint list cannot be met, the error names the first
/// constraint (in list order) whose addition makes the search fail.
pub fn reconstruct_fixture(spec: &MarginalSpec) -> Result<AnnotationCorpus> {
    spec.validate()?;
    if let Some((i, c)) = spec
        .constraints
        .iter()
        .enumerate()
        .find(|(_, c)| polarity_count_conflict(spec, c))
    {
        return Err(Error::Infeasible(format!(
            "constraint #{} `{c}` contradicts the counts",
            i + 1
        )));
    }
    if let Some(corpus) = solve(spec, &spec.constraints)? {
        return Ok(corpus);
    }
    if solve(spec, &[])?.is_none() {
        return Err(Error::Infeasible(
            "the counts cannot be realised by any corpus".into(),
        ));
    }
    for i in 1..=spec.constraints.len() {
        if solve(spec, &spec.constraints[..i])?.is_none() {
            return Err(Error::Infeasible(format!(
                "constraint #{} `{}` cannot be met together with the counts{}",
                i,
                spec.constraints[i - 1],
                if i > 1 { " and earlier constraints" } else { "" }
            )));
        }
    }
    unreachable!("full constraint list failed but every prefix succeeded")
}

/// `C - -> C +` needs every article of `C` to be positive, so count(C) must
/// equal count(C+); dually for `C + -> C -`.
fn polarity_count_conflict(spec: &MarginalSpec, constraint: &FixtureConstraint) -> bool {
    use ScaleKind::*;
    let FixtureConstraint::Holds {
        premise,
        conclusion,
    } = constraint
    else {
        return false;
    };
    let ([p], [q]) = (premise.as_slice(), conclusion.as_slice()) else {
        return false;
    };
    if p.convention != q.convention || !matches!((p.kind, q.kind), (Negative, Positive) | (Positive, Negative)) {
        return false;
    }
    spec.conventions
        .iter()
        .find(|cc| cc.convention == p.convention)
        .is_some_and(|cc| cc.get(Presence) > cc.get(q.kind))
}

fn solve(spec: &MarginalSpec, constraints: &[FixtureConstraint]) -> Result<Option<AnnotationCorpus>> {
    let convs = spec.conventions();
    let candidates = level1_candidates(spec, &convs, constraints)?;
    for rows in candidates {
        let mut search = MarkerSearch::new(spec, &convs, &rows, constraints);
        if search.run() {
            return Ok(Some(search.into_corpus()));
        }
    }
    Ok(None)
}

/// A row type is a bit mask over positions in `convs`.
fn row_has(mask: usize, pos: usize) -> bool {
    mask & (1 << pos) != 0
}

fn level1_context(spec: &MarginalSpec, convs: &[Convention], rows: &[usize]) -> Result<FormalContext> {
    let mut corpus = AnnotationCorpus::new(&spec.journal_id);
    for (i, &mask) in rows.iter().enumerate() {
        let id = spec.article_id(i);
        corpus.add_article(&id, &spec.journal_id);
        for (pos, &c) in convs.iter().enumerate() {
            if row_has(mask, pos) {
                corpus.annotate(&id, &spec.journal_id, c, MarkerSet::from_bits(1));
            }
        }
    }
    apply_scale(&corpus, convs, Level::L1)
}

fn implication_on_row(
    premise: &[ScaledAttribute],
    conclusion: &[ScaledAttribute],
    fires: impl Fn(ScaledAttribute) -> bool,
) -> bool {
    !premise.iter().all(|&a| fires(a)) || conclusion.iter().all(|&a| fires(a))
}

/// Level-1 row assignments (one mask per article), best first.
fn level1_candidates(
    spec: &MarginalSpec,
    convs: &[Convention],
    constraints: &[FixtureConstraint],
) -> Result<Vec<Vec<usize>>> {
    let n = convs.len();
    let level1: Vec<&FixtureConstraint> = constraints.iter().filter(|c| c.is_level1()).collect();
    let presence = |mask: usize| {
        move |a: ScaledAttribute| {
            convs
                .iter()
                .position(|&c| c == a.convention)
                .is_some_and(|p| row_has(mask, p))
        }
    };

    // row-local filters: holds-constraints and closedness under a required base
    let mut types: Vec<usize> = (0..1usize << n)
        .filter(|&mask| {
            level1.iter().all(|c| match c.implication() {
                Some((p, q, true)) => implication_on_row(p, q, presence(mask)),
                _ => true,
            })
        })
        .collect();
    for c in &level1 {
        if let FixtureConstraint::Level1Base(base) = c {
            types.retain(|&mask| {
                base.iter().all(|(p, q)| {
                    let has = |c: &Convention| {
                        convs.iter().position(|x| x == c).is_some_and(|pos| row_has(mask, pos))
                    };
                    !p.iter().all(has) || q.iter().all(has)
                })
            });
        }
    }

    let targets: Vec<usize> = spec
        .conventions
        .iter()
        .map(|c| c.get(ScaleKind::Presence))
        .collect();
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut counts = vec![0usize; types.len()];
    let mut steps = 0u64;
    enumerate_multiplicities(
        &types,
        0,
        spec.article_count,
        &mut targets.clone(),
        &mut counts,
        &mut found,
        &mut steps,
    );

    let mut accepted: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for (order, mult) in found.into_iter().enumerate() {
        let rows: Vec<usize> = types
            .iter()
            .zip(&mult)
            .flat_map(|(&t, &m)| std::iter::repeat_n(t, m))
            .collect();
        if !level1_constraints_met(spec, convs, &rows, &level1)? {
            continue;
        }
        let spread = mult.iter().map(|m| m * m).sum();
        accepted.push((spread, order, rows));
    }
    accepted.sort();
    Ok(accepted.into_iter().map(|(_, _, rows)| rows).collect())
}

fn enumerate_multiplicities(
    types: &[usize],
    next: usize,
    remaining: usize,
    need: &mut [usize],
    counts: &mut [usize],
    found: &mut Vec<Vec<usize>>,
    steps: &mut u64,
) {
    *steps += 1;
    if *steps > PHASE1_BUDGET {
        return;
    }
    if next == types.len() {
        if remaining == 0 && need.iter().all(|&x| x == 0) {
            found.push(counts.to_vec());
        }
        return;
    }
    // every remaining need must be reachable by the remaining types
    for (pos, &nd) in need.iter().enumerate() {
        if nd > remaining {
            return;
        }
        if nd > 0 && !types[next..].iter().any(|&t| row_has(t, pos)) {
            return;
        }
    }
    let t = types[next];
    let cap = (0..need.len())
        .filter(|&p| row_has(t, p))
        .map(|p| need[p])
        .min()
        .unwrap_or(remaining)
        .min(remaining);
    for m in 0..=cap {
        for (p, nd) in need.iter_mut().enumerate() {
            if row_has(t, p) {
                *nd -= m;
            }
        }
        counts[next] = m;
        enumerate_multiplicities(types, next + 1, remaining - m, need, counts, found, steps);
        for (p, nd) in need.iter_mut().enumerate() {
            if row_has(t, p) {
                *nd += m;
            }
        }
    }
    counts[next] = 0;
}

fn level1_constraints_met(
    spec: &MarginalSpec,
    convs: &[Convention],
    rows: &[usize],
    level1: &[&FixtureConstraint],
) -> Result<bool> {
    if level1.is_empty() {
        return Ok(true);
    }
    let context = level1_context(spec, convs, rows)?;
    for c in level1 {
        let ok = match c {
            FixtureConstraint::Level1Base(base) => {
                let got = canonical_base(&context).normalized();
                let mut want = crate::implications::ImplicationSet::new(context.attributes().to_vec());
                for (p, q) in base {
                    let labels = |v: &[Convention]| -> Vec<String> {
                        v.iter().map(|c| c.label().to_string()).collect()
                    };
                    want.push_labels(&labels(p), &labels(q))?;
                }
                got == want.normalized()
            }
            FixtureConstraint::Holds { .. } => true,
            FixtureConstraint::Fails {
                premise,
                conclusion,
            } => {
                let labels = |v: &[ScaledAttribute]| -> Vec<String> {
                    v.iter().map(|a| a.label()).collect()
                };
                !crate::implications::holds(&labels(premise), &labels(conclusion), &context)?
            }
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Phase 2: marker sets per (article, convention).
struct MarkerSearch<'a> {
    spec: &'a MarginalSpec,
    convs: &'a [Convention],
    /// articles referencing each convention position, ascending
    holders: Vec<Vec<usize>>,
    /// allowed marker sets per convention position, in trial order
    allowed: Vec<Vec<MarkerSet>>,
    /// implication constraints that are not purely level 1, with the position
    /// of the last convention they involve
    checks: Vec<(&'a [ScaledAttribute], &'a [ScaledAttribute], bool, usize)>,
    markers: Vec<[MarkerSet; 4]>,
    steps: u64,
}

impl<'a> MarkerSearch<'a> {
    fn new(
        spec: &'a MarginalSpec,
        convs: &'a [Convention],
        rows: &[usize],
        constraints: &'a [FixtureConstraint],
    ) -> Self {
        let holders = (0..convs.len())
            .map(|pos| (0..rows.len()).filter(|&g| row_has(rows[g], pos)).collect())
            .collect();
        let pos_of = |c: Convention| convs.iter().position(|&x| x == c).unwrap();
        let checks: Vec<_> = constraints
            .iter()
            .filter(|c| !c.is_level1())
            .filter_map(|c| {
                let (p, q, holds) = c.implication()?;
                let last = p.iter().chain(q).map(|a| pos_of(a.convention)).max()?;
                Some((p, q, holds, last))
            })
            .collect();
        // single-convention holds-constraints prune the marker alphabet
        let allowed = (0..convs.len())
            .map(|pos| {
                MarkerSet::non_empty()
                    .filter(|&ms| {
                        checks.iter().all(|&(p, q, holds, _)| {
                            let local = p.iter().chain(q).all(|a| a.convention == convs[pos]);
                            !(holds && local)
                                || implication_on_row(p, q, |a| a.kind.fires(ms))
                        })
                    })
                    .collect()
            })
            .collect();
        MarkerSearch {
            spec,
            convs,
            holders,
            allowed,
            checks,
            markers: vec![[MarkerSet::EMPTY; 4]; rows.len()],
            steps: 0,
        }
    }

    fn fires(&self, g: usize, a: ScaledAttribute) -> bool {
        a.kind.fires(self.markers[g][a.convention.index()])
    }

    fn run(&mut self) -> bool {
        let needs: Vec<[usize; 7]> = self.spec.conventions.iter().map(|c| c.counts).collect();
        self.assign(0, 0, &mut needs.clone())
    }

    fn feasible(&self, pos: usize, k: usize, need: &[usize; 7]) -> bool {
        use ScaleKind::*;
        let n = |kind: ScaleKind| need[kind.index()];
        if ScaleKind::ALL[1..].iter().any(|&kind| n(kind) > k) {
            return false;
        }
        if n(Positive) < n(Justification).max(n(Topic))
            || n(Positive) > n(Justification) + n(Topic)
            || n(Negative) < n(Internal).max(n(External))
            || n(Negative) > n(Internal) + n(External)
            || n(Positive) + n(Negative) < k
        {
            return false;
        }
        for kind in &ScaleKind::ALL[1..] {
            let firing = self.allowed[pos].iter().filter(|ms| kind.fires(**ms)).count();
            if firing == self.allowed[pos].len() && n(*kind) != k {
                return false;
            }
            if firing == 0 && n(*kind) != 0 {
                return false;
            }
        }
        true
    }

    fn assign(&mut self, pos: usize, i: usize, needs: &mut Vec<[usize; 7]>) -> bool {
        if pos == self.convs.len() {
            return true;
        }
        let holders = &self.holders[pos];
        if i == holders.len() {
            if needs[pos][1..].iter().any(|&x| x != 0) {
                return false;
            }
            // fails-constraints completed by this convention need a witness row
            for &(p, q, holds, last) in &self.checks {
                if !holds && last == pos {
                    let witnessed = (0..self.markers.len())
                        .any(|g| !implication_on_row(p, q, |a| self.fires(g, a)));
                    if !witnessed {
                        return false;
                    }
                }
            }
            return self.assign(pos + 1, 0, needs);
        }
        if !self.feasible(pos, holders.len() - i, &needs[pos]) {
            return false;
        }
        let g = holders[i];
        let conv = self.convs[pos].index();
        for t in 0..self.allowed[pos].len() {
            self.steps += 1;
            if self.steps > PHASE2_BUDGET {
                return false;
            }
            let ms = self.allowed[pos][t];
            let delta: Vec<usize> = ScaleKind::ALL
                .iter()
                .map(|k| k.fires(ms) as usize)
                .collect();
            if delta.iter().zip(needs[pos].iter()).any(|(d, n)| d > n) {
                continue;
            }
            self.markers[g][conv] = ms;
            let row_ok = self.checks.iter().all(|&(p, q, holds, last)| {
                !holds || last != pos || implication_on_row(p, q, |a| self.fires(g, a))
            });
            if row_ok {
                for (n, d) in needs[pos].iter_mut().zip(&delta) {
                    *n -= d;
                }
                if self.assign(pos, i + 1, needs) {
                    return true;
                }
                for (n, d) in needs[pos].iter_mut().zip(&delta) {
                    *n += d;
                }
            }
            self.markers[g][conv] = MarkerSet::EMPTY;
        }
        false
    }

    fn into_corpus(self) -> AnnotationCorpus {
        let spec = self.spec;
        let mut corpus = AnnotationCorpus::new(&spec.journal_id);
        for (g, row) in self.markers.iter().enumerate() {
            let id = spec.article_id(g);
            corpus.add_article(&id, &spec.journal_id);
            for c in Convention::ALL {
                corpus.annotate(&id, &spec.journal_id, c, row[c.index()]);
            }
        }
        corpus
    }
}

fn counts(c: Convention, v: [usize; 7]) -> ConventionCounts {
    ConventionCounts::new(c, v)
}

/// Counts and structural facts for the general-readership journal (12 articles).
pub fn journal1_spec() -> MarginalSpec {
    use Convention::*;
    let h = |p: &str, q: &str| FixtureConstraint::holds(&[p], &[q]).unwrap();
    MarginalSpec {
        journal_id: "J1".into(),
        article_prefix: "A".into(),
        article_count: 12,
        conventions: vec![
            counts(Market, [9, 9, 9, 1, 2, 2, 1]),
            counts(Green, [7, 7, 7, 4, 2, 2, 1]),
            counts(State, [8, 8, 8, 3, 2, 1, 1]),
            counts(Industry, [12, 11, 11, 2, 3, 3, 3]),
        ],
        constraints: vec![
            FixtureConstraint::Level1Base(vec![
                (vec![], vec![Industry]),
                (vec![State, Industry], vec![Market]),
                (vec![Market, Green, Industry], vec![State]),
            ]),
            h("Market -", "Market +"),
            h("State -", "State +"),
            h("Green -", "Green +"),
            FixtureConstraint::fails(&["Industry -"], &["Industry +"]).unwrap(),
        ],
    }
}

/// Counts and structural facts for the target-group journal (14 articles).
///
/// `State - -> State +` is deliberately absent: with 12 State articles but
/// only 10 positive ones, two articles must reference State critically only.
pub fn journal2_spec() -> MarginalSpec {
    use Convention::*;
    let h = |p: &str, q: &str| FixtureConstraint::holds(&[p], &[q]).unwrap();
    MarginalSpec {
        journal_id: "J2".into(),
        article_prefix: "B".into(),
        article_count: 14,
        conventions: vec![
            counts(Market, [13, 13, 13, 8, 9, 8, 8]),
            counts(Green, [12, 12, 7, 7, 9, 8, 8]),
            counts(State, [12, 10, 9, 1, 9, 8, 8]),
            counts(Industry, [13, 13, 12, 9, 7, 7, 7]),
        ],
        constraints: vec![
            FixtureConstraint::Level1Base(vec![
                (vec![Green], vec![Market, State]),
                (vec![State], vec![Market, Green]),
            ]),
            h("Market -", "Market +"),
            h("Green -", "Green +"),
            h("Industry -", "Industry +"),
        ],
    }
}
