//! Brute-force oracles over plain bitmasks, independent of the library's algorithms.
#![allow(dead_code)]

pub mod suites;

use std::collections::BTreeSet;

use cartograph_core::{parse_annotations, AnnotationCorpus, BitSet, ConceptLattice, FormalContext};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn from_masks(rows: &[u32], n_attrs: usize) -> FormalContext {
    let rows: Vec<BitSet> = rows
        .iter()
        .map(|&r| BitSet::from_indices(n_attrs, (0..n_attrs).filter(|&m| r >> m & 1 == 1)))
        .collect();
    FormalContext::new(labels("g", rows.len()), labels("m", n_attrs), rows).unwrap()
}

pub fn random_context(rng: &mut StdRng, n_objects: usize, n_attrs: usize, density: f64) -> FormalContext {
    let rows: Vec<u32> = (0..n_objects)
        .map(|_| {
            (0..n_attrs)
                .filter(|_| rng.gen_bool(density))
                .fold(0u32, |acc, m| acc | 1 << m)
        })
        .collect();
    from_masks(&rows, n_attrs)
}

/// Loads a committed fixture, `"j1"` or `"j2"`.
pub fn fixture(name: &str) -> AnnotationCorpus {
    let path = format!("{}/../../fixtures/{name}.csv", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    parse_annotations(&text).unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn mask(set: &BitSet) -> u32 {
    set.iter().fold(0, |acc, i| acc | 1 << i)
}

pub fn row_masks(ctx: &FormalContext) -> Vec<u32> {
    ctx.rows().iter().map(mask).collect()
}

/// Attribute closure B'' computed by scanning rows.
pub fn closure(rows: &[u32], n_attrs: usize, b: u32) -> u32 {
    rows.iter()
        .filter(|&&r| r & b == b)
        .fold((1u32 << n_attrs) - 1, |acc, &r| acc & r)
}

/// All intents, by closing every attribute subset.
pub fn brute_intents(ctx: &FormalContext) -> BTreeSet<u32> {
    let n = ctx.attribute_count();
    let rows = row_masks(ctx);
    (0..1u32 << n).map(|b| closure(&rows, n, b)).collect()
}

/// Pseudo-intents straight from the recursive definition, smallest first.
pub fn brute_pseudo_intents(ctx: &FormalContext) -> Vec<u32> {
    let n = ctx.attribute_count();
    let rows = row_masks(ctx);
    let mut subsets: Vec<u32> = (0..1u32 << n).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    let mut pseudo: Vec<u32> = Vec::new();
    for p in subsets {
        if closure(&rows, n, p) == p {
            continue;
        }
        let ok = pseudo
            .iter()
            .filter(|&&q| q & p == q && q != p)
            .all(|&q| closure(&rows, n, q) & p == closure(&rows, n, q));
        if ok {
            pseudo.push(p);
        }
    }
    pseudo
}

/// Closure of `b` under implications given as (premise, conclusion) masks.
pub fn imp_closure(imps: &[(u32, u32)], b: u32) -> u32 {
    let mut x = b;
    loop {
        let next = imps
            .iter()
            .filter(|&&(p, _)| p & x == p)
            .fold(x, |acc, &(_, c)| acc | c);
        if next == x {
            return x;
        }
        x = next;
    }
}

/// Smallest number of implications `A -> A''` whose closure operator equals
/// the context's; exhaustive over subsets of non-closed premises.
pub fn brute_minimum_base_size(ctx: &FormalContext) -> usize {
    let n = ctx.attribute_count();
    let rows = row_masks(ctx);
    let candidates: Vec<(u32, u32)> = (0..1u32 << n)
        .map(|a| (a, closure(&rows, n, a)))
        .filter(|&(a, c)| a != c)
        .collect();
    let complete = |imps: &[(u32, u32)]| (0..1u32 << n).all(|b| imp_closure(imps, b) == closure(&rows, n, b));
    let k = candidates.len();
    let mut best = k;
    for sel in 0u64..1 << k {
        let size = sel.count_ones() as usize;
        if size >= best {
            continue;
        }
        let imps: Vec<(u32, u32)> = (0..k).filter(|&i| sel >> i & 1 == 1).map(|i| candidates[i]).collect();
        if complete(&imps) {
            best = size;
        }
    }
    best
}

/// Strict order of a lattice as `less[a]` bitmask of elements above `a`.
pub fn strict_order(lattice: &ConceptLattice) -> Vec<u64> {
    let n = lattice.len();
    let cs = lattice.concepts();
    (0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| a != b && cs[a].extent.is_subset(&cs[b].extent))
                .fold(0u64, |acc, b| acc | 1 << b)
        })
        .collect()
}

fn comparable(above: &[u64], a: usize, b: usize) -> bool {
    a == b || above[a] >> b & 1 == 1 || above[b] >> a & 1 == 1
}

/// Largest antichain by exhaustive search.
pub fn brute_width(above: &[u64]) -> usize {
    fn go(above: &[u64], next: usize, chosen: &mut Vec<usize>, best: &mut usize) {
        *best = (*best).max(chosen.len());
        for c in next..above.len() {
            if chosen.iter().all(|&d| !comparable(above, c, d)) {
                chosen.push(c);
                go(above, c + 1, chosen, best);
                chosen.pop();
            }
        }
    }
    let mut best = 0;
    go(above, 0, &mut Vec::new(), &mut best);
    best
}

/// Longest chain (element count) by exhaustive search.
pub fn brute_depth(above: &[u64]) -> usize {
    fn go(above: &[u64], from: usize) -> usize {
        1 + (0..above.len())
            .filter(|&b| above[from] >> b & 1 == 1)
            .map(|b| go(above, b))
            .max()
            .unwrap_or(0)
    }
    (0..above.len()).map(|a| go(above, a)).max().unwrap_or(0)
}

/// Minimum number of parts when partitioning into sets satisfying `ok`
/// (subset DP, exponential).
pub fn brute_min_partition(n: usize, ok: impl Fn(u32) -> bool) -> usize {
    let full = (1u32 << n) - 1;
    let mut dp = vec![usize::MAX; 1 << n];
    dp[0] = 0;
    for m in 1..=full {
        let low = m & m.wrapping_neg();
        let mut sub = m;
        while sub > 0 {
            if sub & low != 0 && ok(sub) && dp[(m ^ sub) as usize] != usize::MAX {
                dp[m as usize] = dp[m as usize].min(dp[(m ^ sub) as usize] + 1);
            }
            sub = (sub - 1) & m;
        }
    }
    dp[full as usize]
}

pub fn is_chain(above: &[u64], set: u32) -> bool {
    let items: Vec<usize> = (0..above.len()).filter(|&i| set >> i & 1 == 1).collect();
    items.iter().all(|&a| items.iter().all(|&b| comparable(above, a, b)))
}

pub fn is_antichain(above: &[u64], set: u32) -> bool {
    let items: Vec<usize> = (0..above.len()).filter(|&i| set >> i & 1 == 1).collect();
    items.iter().all(|&a| items.iter().all(|&b| a == b || !comparable(above, a, b)))
}

/// All linear extensions, as position arrays.
pub fn linear_extensions(above: &[u64]) -> Vec<Vec<usize>> {
    let n = above.len();
    let below: Vec<u64> = (0..n)
        .map(|b| (0..n).filter(|&a| above[a] >> b & 1 == 1).fold(0, |acc, a| acc | 1 << a))
        .collect();
    let mut out = Vec::new();
    fn go(below: &[u64], placed: u64, order: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = below.len();
        if order.len() == n {
            let mut pos = vec![0; n];
            for (i, &e) in order.iter().enumerate() {
                pos[e] = i;
            }
            out.push(pos);
            return;
        }
        for e in 0..n {
            if placed >> e & 1 == 0 && below[e] & !placed == 0 {
                order.push(e);
                go(below, placed | 1 << e, order, out);
                order.pop();
            }
        }
    }
    go(&below, 0, &mut Vec::new(), &mut out);
    out
}

/// Smallest k ≤ `max_k` such that k linear extensions realize the order, by
/// exhaustive search over extension tuples; `None` if larger.
pub fn brute_dimension(above: &[u64], max_k: usize) -> Option<usize> {
    let n = above.len();
    let exts = linear_extensions(above);
    let incomparable: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && !comparable(above, a, b))
        .collect();
    if incomparable.is_empty() {
        return Some(1);
    }
    // reversal signature of each extension over ordered incomparable pairs
    let sig: Vec<Vec<bool>> = exts
        .iter()
        .map(|pos| incomparable.iter().map(|&(a, b)| pos[b] < pos[a]).collect())
        .collect();
    let realizes = |tuple: &[usize]| (0..incomparable.len()).all(|p| tuple.iter().any(|&t| sig[t][p]));
    fn search(n_ext: usize, k: usize, from: usize, tuple: &mut Vec<usize>, ok: &dyn Fn(&[usize]) -> bool) -> bool {
        if tuple.len() == k {
            return ok(tuple);
        }
        for t in from..n_ext {
            tuple.push(t);
            if search(n_ext, k, t, tuple, ok) {
                return true;
            }
            tuple.pop();
        }
        false
    }
    (2..=max_k).find(|&k| search(exts.len(), k, 0, &mut Vec::new(), &realizes))
}

/// Largest set of incidence pairs no two of which fit one Ferrers relation:
/// `(g,m)`, `(h,n)` clash when `(g,n)` and `(h,m)` are both non-incident.
pub fn ferrers_clash_clique(ctx: &FormalContext) -> usize {
    let pairs: Vec<(usize, usize)> = (0..ctx.object_count())
        .flat_map(|g| ctx.row(g).iter().map(move |m| (g, m)))
        .collect();
    let clash = |a: (usize, usize), b: (usize, usize)| !ctx.incident(a.0, b.1) && !ctx.incident(b.0, a.1);
    fn go(
        pairs: &[(usize, usize)],
        clash: &dyn Fn((usize, usize), (usize, usize)) -> bool,
        next: usize,
        chosen: &mut Vec<(usize, usize)>,
        best: &mut usize,
    ) {
        *best = (*best).max(chosen.len());
        for i in next..pairs.len() {
            if chosen.iter().all(|&c| clash(c, pairs[i])) {
                chosen.push(pairs[i]);
                go(pairs, clash, i + 1, chosen, best);
                chosen.pop();
            }
        }
    }
    let mut best = 0;
    go(&pairs, &clash, 0, &mut Vec::new(), &mut best);
    best
}
