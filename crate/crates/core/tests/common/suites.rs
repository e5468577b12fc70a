//! Oracle suites shared by the oracle tests and the acceptance run.
//! Each returns `Err` describing the first disagreement.

use std::collections::{BTreeSet, HashSet};

use cartograph_core::factors::is_ferrers;
use cartograph_core::lattice::enumerate_concepts;
use cartograph_core::order::{Dimension, Poset};
use cartograph_core::{canonical_base, greedy_factorize, BitSet, ConceptLattice, FormalContext};

use super::*;

type Outcome = Result<(), String>;

fn check_concepts(ctx: &FormalContext) -> Outcome {
    let concepts = enumerate_concepts(ctx);
    let ours: Vec<u32> = concepts.iter().map(|c| mask(&c.intent)).collect();
    let unique: BTreeSet<u32> = ours.iter().copied().collect();
    if unique.len() != ours.len() {
        return Err(format!("duplicate intents in {:?}", row_masks(ctx)));
    }
    if unique != brute_intents(ctx) {
        return Err(format!("intent family differs for rows {:?}", row_masks(ctx)));
    }
    for w in concepts.windows(2) {
        if w[0].intent.lectic_cmp(&w[1].intent) != std::cmp::Ordering::Less {
            return Err(format!("not in lectic order for rows {:?}", row_masks(ctx)));
        }
    }
    for c in &concepts {
        if ctx.extent_of(&c.intent) != c.extent {
            return Err("extent is not the derivation of the intent".into());
        }
    }
    // covers: transitive reduction of the strict order
    let lattice = ConceptLattice::new(ctx);
    let above = strict_order(&lattice);
    let n = lattice.len();
    let expected: BTreeSet<(usize, usize)> = (0..n)
        .flat_map(|lo| (0..n).map(move |up| (up, lo)))
        .filter(|&(up, lo)| {
            above[lo] >> up & 1 == 1
                && !(0..n).any(|mid| above[lo] >> mid & 1 == 1 && above[mid] >> up & 1 == 1)
        })
        .collect();
    let got: BTreeSet<(usize, usize)> = lattice.covers().iter().copied().collect();
    if got != expected {
        return Err(format!("cover relation differs for rows {:?}", row_masks(ctx)));
    }
    Ok(())
}

/// Next Closure against the powerset oracle: all 512 contexts of size 3×3
/// and 50 random 8×8 contexts.
pub fn concepts_vs_powerset() -> Outcome {
    for bits in 0u32..512 {
        let rows: Vec<u32> = (0..3).map(|g| bits >> (3 * g) & 0b111).collect();
        check_concepts(&from_masks(&rows, 3))?;
    }
    let mut r = rng(8);
    for i in 0..50 {
        let density = [0.3, 0.5, 0.7][i % 3];
        check_concepts(&random_context(&mut r, 8, 8, density))?;
    }
    Ok(())
}

fn base_masks(ctx: &FormalContext) -> Vec<(u32, u32)> {
    canonical_base(ctx)
        .implications()
        .iter()
        .map(|i| (mask(&i.premise), mask(&i.conclusion)))
        .collect()
}

fn check_base(ctx: &FormalContext, minimality: bool) -> Outcome {
    let n = ctx.attribute_count();
    let rows = row_masks(ctx);
    let base = base_masks(ctx);
    // sound
    for &(p, c) in &base {
        if closure(&rows, n, p) & c != c {
            return Err(format!("unsound implication in base of {rows:?}"));
        }
    }
    // complete: closure under the base equals the context closure everywhere
    for b in 0..1u32 << n {
        if imp_closure(&base, b) != closure(&rows, n, b) {
            return Err(format!("incomplete base for {rows:?} at {b:#b}"));
        }
    }
    // premises are exactly the pseudo-intents
    let premises: BTreeSet<u32> = base.iter().map(|&(p, _)| p).collect();
    let pseudo: BTreeSet<u32> = brute_pseudo_intents(ctx).into_iter().collect();
    if premises != pseudo || premises.len() != base.len() {
        return Err(format!("premises are not the pseudo-intents for {rows:?}"));
    }
    if minimality && !base.is_empty() && complete_set_of_size(ctx, base.len() - 1) {
        return Err(format!("a complete set smaller than the base exists for {rows:?}"));
    }
    Ok(())
}

/// Whether some set of `size` implications `A -> A''` is complete; adding
/// implications keeps completeness, so checking one size suffices.
fn complete_set_of_size(ctx: &FormalContext, size: usize) -> bool {
    let n = ctx.attribute_count();
    let rows = row_masks(ctx);
    let candidates: Vec<(u32, u32)> = (0..1u32 << n)
        .map(|a| (a, closure(&rows, n, a)))
        .filter(|&(a, c)| a != c)
        .collect();
    let complete = |imps: &[(u32, u32)]| {
        (0..1u32 << n).all(|b| imp_closure(imps, b) == closure(&rows, n, b))
    };
    type Complete<'a> = dyn Fn(&[(u32, u32)]) -> bool + 'a;
    fn choose(
        cands: &[(u32, u32)],
        size: usize,
        from: usize,
        picked: &mut Vec<(u32, u32)>,
        ok: &Complete<'_>,
    ) -> bool {
        if picked.len() == size {
            return ok(picked);
        }
        for i in from..cands.len() {
            picked.push(cands[i]);
            if choose(cands, size, i + 1, picked, ok) {
                return true;
            }
            picked.pop();
        }
        false
    }
    choose(&candidates, size, 0, &mut Vec::new(), &complete)
}

/// Canonical base soundness, completeness and minimality: exhaustive over
/// every closure system on at most 4 attributes, plus 100 random contexts up
/// to 6×6 checked against all valid single-conclusion implications.
pub fn canonical_base_vs_brute_force() -> Outcome {
    for n in 1..=4usize {
        // every closure system is the intent family of the context whose rows are its sets
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        for rowset in 0u32..1 << (1u32 << n) {
            let rows: Vec<u32> = (0..1u32 << n).filter(|&r| rowset >> r & 1 == 1).collect();
            let ctx = from_masks(&rows, n);
            let family: Vec<u32> = brute_intents(&ctx).into_iter().collect();
            if seen.insert(family) {
                check_base(&ctx, true)?;
            }
        }
    }
    let mut r = rng(6);
    for i in 0..100 {
        let (g, m) = (1 + i % 6, 1 + (i / 6) % 6);
        let ctx = random_context(&mut r, g, m, 0.5);
        check_base(&ctx, false)?;
        let base = canonical_base(&ctx);
        let rows = row_masks(&ctx);
        for a in 0..1u32 << m {
            for attr in 0..m {
                let valid = closure(&rows, m, a) >> attr & 1 == 1;
                let premise = BitSet::from_indices(m, (0..m).filter(|&x| a >> x & 1 == 1));
                if base.close(&premise).contains(attr) != valid {
                    return Err(format!("base disagrees on {a:#b} -> m{attr} for {rows:?}"));
                }
            }
        }
    }
    Ok(())
}

fn small_lattices(seed: u64, count: usize, max_concepts: usize) -> Vec<ConceptLattice> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    let mut attempt = 0usize;
    while out.len() < count {
        attempt += 1;
        let g = 2 + attempt % 5;
        let m = 2 + (attempt / 5) % 5;
        let ctx = random_context(&mut r, g, m, 0.5);
        let l = ConceptLattice::new(&ctx);
        if l.len() <= max_concepts {
            out.push(l);
        }
    }
    out
}

/// Width and depth against exhaustive antichain/chain search on lattices of
/// at most 20 concepts; Dilworth and Mirsky duals by subset DP on at most 12.
pub fn width_depth_vs_brute_force() -> Outcome {
    for l in small_lattices(20, 100, 20) {
        let p = Poset::from_lattice(&l);
        let above = strict_order(&l);
        let (w, d) = (p.width(), p.depth());
        if w != brute_width(&above) || d != brute_depth(&above) {
            return Err(format!(
                "width/depth {w}/{d} vs brute {}/{} on {} concepts",
                brute_width(&above),
                brute_depth(&above),
                l.len()
            ));
        }
        if l.len() <= 12 {
            let chains = brute_min_partition(l.len(), |s| is_chain(&above, s));
            let antichains = brute_min_partition(l.len(), |s| is_antichain(&above, s));
            if chains != w || antichains != d {
                return Err(format!(
                    "partition duals {chains}/{antichains} vs width/depth {w}/{d}"
                ));
            }
        }
    }
    Ok(())
}

fn contranominal(n: usize) -> FormalContext {
    let rows: Vec<u32> = (0..n).map(|g| ((1u32 << n) - 1) & !(1 << g)).collect();
    from_masks(&rows, n)
}

fn ordinal(n: usize) -> FormalContext {
    // rows {}, {m0}, {m0,m1}, ...: a chain of n+1 concepts
    let rows: Vec<u32> = (0..=n).map(|g| (1u32 << g) - 1).collect();
    from_masks(&rows, n)
}

/// Order dimension: n on Boolean lattices for n ≤ 3, 1 on chains, and the
/// 2-test and the realizer search against exhaustive linear-extension
/// search on 50 random small lattices.
pub fn dimension_vs_brute_force() -> Outcome {
    for n in 1..=3 {
        let d = Poset::from_lattice(&ConceptLattice::new(&contranominal(n))).dimension(1_000_000);
        if d != Dimension::Exact(n.max(1)) {
            return Err(format!("B{n} has dimension {d}"));
        }
    }
    for n in 0..=5 {
        let l = ConceptLattice::new(&ordinal(n));
        if Poset::from_lattice(&l).dimension(1000) != Dimension::Exact(1) {
            return Err(format!("chain of {} is not 1-dimensional", l.len()));
        }
    }
    for l in small_lattices(50, 50, 8) {
        let p = Poset::from_lattice(&l);
        let above = strict_order(&l);
        let brute = brute_dimension(&above, 3);
        if p.has_dimension_at_most_two() != matches!(brute, Some(1) | Some(2)) {
            return Err(format!("2-test disagrees with brute force {brute:?} on {} concepts", l.len()));
        }
        if let Some(k) = brute {
            if p.dimension(1_000_000) != Dimension::Exact(k) {
                return Err(format!("dimension {} vs brute {k}", p.dimension(1_000_000)));
            }
        }
        let incomparable = (0..l.len()).any(|a| (0..l.len()).any(|b| !l.comparable(a, b)));
        if incomparable && p.dimension(1_000_000) == Dimension::Exact(1) {
            return Err("incomparable concepts but dimension 1".into());
        }
    }
    Ok(())
}

/// Factorization completeness, Ferrers validity and chain shape on 100
/// random contexts up to 10×10; factor count at least the size of a largest
/// set of pairwise clashing incidences on the small ones.
pub fn factorization_properties() -> Outcome {
    let mut r = rng(10);
    for i in 0..100 {
        let (g, m) = (1 + i % 10, 1 + (i * 7) % 10);
        let ctx = random_context(&mut r, g, m, [0.2, 0.5, 0.8][i % 3]);
        let l = ConceptLattice::new(&ctx);
        let f = greedy_factorize(&l);
        let mut union = vec![BitSet::new(m); g];
        for factor in &f.factors {
            if !is_ferrers(factor.covered_pairs()) {
                return Err(format!("non-Ferrers factor on {:?}", row_masks(&ctx)));
            }
            if factor.new_pairs == 0 {
                return Err("factor adds nothing".into());
            }
            if factor.chain.first() != Some(&l.top()) {
                return Err("factor chain does not start at the top".into());
            }
            for w in factor.chain.windows(2) {
                if !l.lower_neighbours(w[0]).contains(&w[1]) {
                    return Err("factor chain leaves the cover relation".into());
                }
            }
            for (obj, row) in factor.covered.iter().enumerate() {
                if !row.is_subset(ctx.row(obj)) {
                    return Err("factor covers a non-incidence".into());
                }
                union[obj].union_with(row);
            }
            // objects reaching each tie class never increase along the sequence
            let reach: Vec<usize> = factor
                .sequence
                .classes()
                .iter()
                .map(|class| {
                    let set = ctx.attribute_set(class).unwrap();
                    factor.covered.iter().filter(|row| set.is_subset(row)).count()
                })
                .collect();
            if reach.windows(2).any(|w| w[1] > w[0]) {
                return Err("tie-class support increases along a factor".into());
            }
        }
        if union != ctx.rows() {
            return Err(format!("incomplete factorization of {:?}", row_masks(&ctx)));
        }
        if ctx.incidence_count() <= 16 {
            let bound = ferrers_clash_clique(&ctx);
            if f.len() < bound {
                return Err(format!("{} factors below clash bound {bound}", f.len()));
            }
        }
    }
    Ok(())
}
