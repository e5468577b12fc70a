//! Acceptance report: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cartograph_core::implications::holds;
use cartograph_core::scaling::{is_coarser_view, marginals};
use cartograph_core::{
    apply_scale, canonical_base, cross_support, greedy_factorize, Analysis, AnnotationCorpus,
    ConceptLattice, Convention, FormalContext, ImplicationSet, Level, MapDocument, MarkerSet,
};
use rand::Rng;

use common::{fixture, suites};

type Check = Result<(), String>;
type Criterion = (&'static str, Box<dyn FnOnce() -> Check>);

const KINDS: [&str; 7] = ["", " +", " + R", " + T", " -", " - I", " - E"];

/// Occurrence counts per convention in scale order.
const J1_COUNTS: [(&str, [usize; 7]); 4] = [
    ("Market", [9, 9, 9, 1, 2, 2, 1]),
    ("Green", [7, 7, 7, 4, 2, 2, 1]),
    ("State", [8, 8, 8, 3, 2, 1, 1]),
    ("Industry", [12, 11, 11, 2, 3, 3, 3]),
];
const J2_COUNTS: [(&str, [usize; 7]); 4] = [
    ("Market", [13, 13, 13, 8, 9, 8, 8]),
    ("Green", [12, 12, 7, 7, 9, 8, 8]),
    ("State", [12, 10, 9, 1, 9, 8, 8]),
    ("Industry", [13, 13, 12, 9, 7, 7, 7]),
];

const J1_BASE: &str = "-> Industry\nState, Industry -> Market\nMarket, Green, Industry -> State\n";
const J2_BASE: &str = "Green -> Market, State\nState -> Market, Green\n";

fn scale(corpus: &AnnotationCorpus, level: Level) -> Result<FormalContext, String> {
    apply_scale(corpus, &Convention::ALL, level).map_err(|e| e.to_string())
}

fn within(limit: Duration, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    f()?;
    let took = start.elapsed();
    if took > limit {
        return Err(format!("took {took:.2?}, limit {limit:?}"));
    }
    Ok(())
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Check {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

fn marginal_counts() -> Check {
    for (name, table, total) in [("j1", &J1_COUNTS, 139), ("j2", &J2_COUNTS, 260)] {
        let m = marginals(&scale(&fixture(name), Level::L3)?);
        for (conv, counts) in table {
            for (suffix, &want) in KINDS.iter().zip(counts) {
                let label = format!("{conv}{suffix}");
                expect(&format!("{name} {label}"), m.get(&label), Some(want))?;
            }
        }
        expect(&format!("{name} |I|"), m.total, total)?;
    }
    Ok(())
}

fn densities() -> Check {
    let j1 = fixture("j1");
    let j2 = fixture("j2");
    let union = j1.merge(&j2);
    let rows = [
        ("J1", &j1, [0.75, 0.55, 0.41]),
        ("J2", &j2, [0.89, 0.78, 0.66]),
        ("J1+J2", &union, [0.82, 0.67, 0.54]),
    ];
    for (name, corpus, want) in rows {
        for (level, want) in Level::ALL.into_iter().zip(want) {
            let d = scale(corpus, level)?.density().map_err(|e| e.to_string())?;
            let shown = (d * 100.0).floor() / 100.0;
            if (shown - want).abs() > 1e-9 {
                return Err(format!("{name} {level}: density {d:.4} shows as {shown}, want {want}"));
            }
        }
    }
    Ok(())
}

fn level_one_counts_and_bases() -> Check {
    for (name, text, count) in [("j1", J1_BASE, 5), ("j2", J2_BASE, 6)] {
        let k = scale(&fixture(name), Level::L1)?;
        expect(&format!("{name} concepts"), ConceptLattice::new(&k).len(), count)?;
        let table = ImplicationSet::parse(k.attributes().to_vec(), text).map_err(|e| e.to_string())?;
        expect(
            &format!("{name} canonical base"),
            canonical_base(&k).normalized(),
            table.normalized(),
        )?;
        let closed = table.enumerate_closed().map_err(|e| e.to_string())?;
        expect(&format!("{name} closed sets of the base"), closed.len(), count)?;
    }
    Ok(())
}

fn implication_bias() -> Check {
    let j1 = scale(&fixture("j1"), Level::L2)?;
    let j2 = scale(&fixture("j2"), Level::L2)?;
    let mut failures = Vec::new();
    let cases = [
        ("Market", true, true),
        ("State", true, true),
        ("Green", true, true),
        ("Industry", false, true),
    ];
    for (conv, in_j1, in_j2) in cases {
        let (neg, pos) = (format!("{conv} -"), format!("{conv} +"));
        for (name, k, want) in [("J1", &j1, in_j1), ("J2", &j2, in_j2)] {
            let got = holds(&[&neg], &[&pos], k).map_err(|e| e.to_string())?;
            if got != want {
                failures.push(format!(
                    "{{{neg}}} -> {{{pos}}} in {name}: {}, want {}",
                    if got { "holds" } else { "fails" },
                    if want { "holds" } else { "fails" }
                ));
            }
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures.join("; "))
    }
}

fn factor_shape() -> Check {
    let k = scale(&fixture("j1"), Level::L1)?;
    let f = greedy_factorize(&ConceptLattice::new(&k));
    let first = f.factors.first().ok_or("no factors")?;
    let order: Vec<&str> = first.sequence.attributes().collect();
    expect("F1 order", order, vec!["Industry", "Market", "State", "Green"])?;
    expect("F1 support", (first.covered_count(), f.incidence), (34, 36))?;
    let other = scale(&fixture("j2"), Level::L1)?;
    let s = cross_support(&first.sequence, &other).map_err(|e| e.to_string())?;
    expect("F1 in J2", (s.covered, s.total), (47, 50))
}

fn random_corpus(rng: &mut rand::rngs::StdRng) -> AnnotationCorpus {
    let mut c = AnnotationCorpus::new("R");
    for i in 0..rng.gen_range(1..=15) {
        let id = format!("r{i:02}");
        c.add_article(&id, "R");
        for conv in Convention::ALL {
            c.annotate(&id, "R", conv, MarkerSet::from_bits(rng.gen_range(0..16)));
        }
    }
    c
}

fn coarser_view_chain() -> Check {
    let mut rng = common::rng(7);
    let mut corpora = vec![fixture("j1"), fixture("j2")];
    corpora.extend((0..50).map(|_| random_corpus(&mut rng)));
    for (i, corpus) in corpora.iter().enumerate() {
        let k: Vec<FormalContext> = Level::ALL
            .iter()
            .map(|&l| scale(corpus, l))
            .collect::<Result<_, _>>()?;
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            if !is_coarser_view(&k[a], &k[b]).map_err(|e| e.to_string())? {
                return Err(format!("corpus #{i}: L{} is not a coarser view of L{}", a + 1, b + 1));
            }
        }
    }
    Ok(())
}

fn oracle_suites() -> Check {
    suites::concepts_vs_powerset()?;
    suites::canonical_base_vs_brute_force()?;
    suites::width_depth_vs_brute_force()?;
    suites::dimension_vs_brute_force()?;
    suites::factorization_properties()
}

fn round_trips() -> Check {
    for name in ["j1", "j2"] {
        for level in Level::ALL {
            let k = scale(&fixture(name), level)?;
            let text = k.to_cxt();
            let back = FormalContext::from_cxt(&text).map_err(|e| e.to_string())?;
            if back.to_cxt() != text || back.rows() != k.rows() {
                return Err(format!("{name} {level}: cxt round trip differs"));
            }
            let run = || -> Result<String, String> {
                let a = Analysis::new(&fixture(name), &Convention::ALL, level).map_err(|e| e.to_string())?;
                a.map(None).to_json().map_err(|e| e.to_string())
            };
            let first = run()?;
            if run()? != first {
                return Err(format!("{name} {level}: map export differs between runs"));
            }
            let doc = MapDocument::from_json(&first).map_err(|e| e.to_string())?;
            if doc.to_json().map_err(|e| e.to_string())? != first {
                return Err(format!("{name} {level}: map re-export differs"));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let second = Duration::from_secs(1);
    let criteria: Vec<Criterion> = vec![
        ("marginals", Box::new(move || within(second, marginal_counts))),
        ("densities", Box::new(move || within(second, densities))),
        ("level-1 concept counts and bases", Box::new(move || within(second, level_one_counts_and_bases))),
        ("implication bias", Box::new(move || within(second, implication_bias))),
        ("factor shape", Box::new(move || within(second, factor_shape))),
        ("coarser-view chain", Box::new(coarser_view_chain)),
        ("oracle suites", Box::new(|| within(Duration::from_secs(60), oracle_suites))),
        ("cxt and map round trips", Box::new(round_trips)),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(()) => println!("PASS {name}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
