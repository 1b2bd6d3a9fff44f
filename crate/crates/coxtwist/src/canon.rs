//! Canonical certificates for labeled diagrams.
//!
//! Twist orbits are deduplicated up to generator renaming, which needs a
//! canonical form: two diagrams get equal certificates iff they are
//! label-preserving graph-isomorphic (where the "graph" is the complete
//! order matrix — `∞` and `2` entries carry as much information as any
//! other label).
//!
//! The certificate is computed by iterated color refinement over the
//! complete labeled graph plus individualization backtracking: whenever
//! refinement stalls with a non-discrete coloring, each member of the first
//! ambiguous class is tried as a forced singleton and the lexicographically
//! smallest encoding wins. Colors are assigned by sorting signature vectors,
//! never by hashing, so certificates are deterministic across runs and
//! platforms.
//!
//! [`find_isomorphism`] additionally returns an explicit vertex bijection,
//! and the `*_colored` variants accept a seed coloring, which lets callers
//! ask for isomorphisms respecting distinguished subsets (used by the
//! block-matching logic in [`crate::twist`]).

use crate::diagram::{CoxeterDiagram, Order, Subset};

/// Renaming-invariant certificate of a labeled diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    /// Canonical byte encoding of the order matrix.
    pub certificate: Vec<u8>,
}

fn encode_order(o: Order) -> u32 {
    match o {
        Order::Inf => 0,
        Order::Finite(m) => m,
    }
}

/// Encode the matrix under a vertex ordering (`perm[k]` = original index
/// placed at canonical position `k`). When a seed coloring is present its
/// normalized class values are embedded per position, so certificates can
/// only match when some isomorphism aligns the color classes.
fn encode(d: &CoxeterDiagram, perm: &[usize], seed: Option<&[u8]>) -> Vec<u8> {
    let n = perm.len();
    let mut out = Vec::with_capacity(1 + n + 2 * n * n);
    out.push(n as u8);
    if let Some(s) = seed {
        for &v in perm {
            out.push(s[v]);
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            out.extend_from_slice(&encode_order(d.order(perm[i], perm[j])).to_be_bytes());
        }
    }
    out
}

/// One pass of color refinement; colors are compact ids `0..k` assigned in
/// sorted signature order. Returns true if the coloring changed.
fn refine_step(d: &CoxeterDiagram, colors: &mut [u32]) -> bool {
    let n = colors.len();
    let mut signatures: Vec<(u32, Vec<(u32, u32)>, usize)> = (0..n)
        .map(|v| {
            let mut profile: Vec<(u32, u32)> = (0..n)
                .filter(|&w| w != v)
                .map(|w| (encode_order(d.order(v, w)), colors[w]))
                .collect();
            profile.sort_unstable();
            (colors[v], profile, v)
        })
        .collect();
    signatures.sort();
    let mut next = vec![0u32; n];
    let mut current = 0u32;
    for k in 0..n {
        if k > 0 && (signatures[k].0, &signatures[k].1) != (signatures[k - 1].0, &signatures[k - 1].1)
        {
            current += 1;
        }
        next[signatures[k].2] = current;
    }
    let changed = next != colors;
    colors.copy_from_slice(&next);
    changed
}

fn refine(d: &CoxeterDiagram, colors: &mut [u32]) {
    while refine_step(d, colors) {}
}

/// Depth-first individualization; returns the minimal encoding and the
/// permutation achieving it.
fn search(
    d: &CoxeterDiagram,
    colors: &[u32],
    seed: Option<&[u8]>,
    best: &mut Option<(Vec<u8>, Vec<usize>)>,
) {
    let n = colors.len();
    // First ambiguous color class, by color id.
    let mut ambiguous: Option<u32> = None;
    for c in 0..n as u32 {
        let size = colors.iter().filter(|&&x| x == c).count();
        if size > 1 {
            ambiguous = Some(c);
            break;
        }
        if size == 0 {
            break;
        }
    }
    match ambiguous {
        None => {
            // Discrete: order vertices by color.
            let mut perm: Vec<usize> = (0..n).collect();
            perm.sort_by_key(|&v| colors[v]);
            let cert = encode(d, &perm, seed);
            if best.as_ref().is_none_or(|(b, _)| cert < *b) {
                *best = Some((cert, perm));
            }
        }
        Some(c) => {
            for v in 0..n {
                if colors[v] != c {
                    continue;
                }
                let mut forked = colors.to_vec();
                forked[v] = n as u32 + 1; // fresh color beyond the compact range
                refine(d, &mut forked);
                search(d, &forked, seed, best);
            }
        }
    }
}

fn normalize_seed(s: &[u32]) -> Vec<u8> {
    // Compact seed values to ranks so that equal values mean equal classes
    // regardless of magnitude.
    let mut distinct: Vec<u32> = s.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    debug_assert!(distinct.len() < 256);
    s.iter()
        .map(|v| distinct.binary_search(v).unwrap() as u8)
        .collect()
}

fn canonical_labeling(d: &CoxeterDiagram, seed: Option<&[u32]>) -> (Vec<u8>, Vec<usize>) {
    let n = d.rank();
    if n == 0 {
        return (vec![0], Vec::new());
    }
    let norm = seed.map(normalize_seed);
    let mut colors: Vec<u32> = match &norm {
        Some(s) => s.iter().map(|&v| v as u32).collect(),
        None => vec![0u32; n],
    };
    refine(d, &mut colors);
    let mut best = None;
    search(d, &colors, norm.as_deref(), &mut best);
    best.expect("search always reaches a discrete coloring")
}

/// Canonical certificate of the diagram.
pub fn canonical_form(d: &CoxeterDiagram) -> CanonicalForm {
    CanonicalForm {
        certificate: canonical_labeling(d, None).0,
    }
}

/// Canonical certificate respecting an initial vertex coloring: two colored
/// diagrams get equal certificates iff some label-preserving isomorphism
/// maps each color class onto the class of the same seed value.
pub fn canonical_form_colored(d: &CoxeterDiagram, seed: &[u32]) -> CanonicalForm {
    CanonicalForm {
        certificate: canonical_labeling(d, Some(seed)).0,
    }
}

fn check_isomorphism(d1: &CoxeterDiagram, d2: &CoxeterDiagram, map: &[usize]) -> bool {
    let n = d1.rank();
    for i in 0..n {
        for j in 0..n {
            if d1.order(i, j) != d2.order(map[i], map[j]) {
                return false;
            }
        }
    }
    true
}

/// Explicit label-preserving isomorphism `d1 → d2` (as an index map), if one
/// exists: position-matching of the two canonical labelings.
pub fn find_isomorphism(d1: &CoxeterDiagram, d2: &CoxeterDiagram) -> Option<Vec<usize>> {
    find_isomorphism_colored(d1, None, d2, None)
}

/// Isomorphism respecting seed colorings (equal seed values must map onto
/// each other).
pub fn find_isomorphism_colored(
    d1: &CoxeterDiagram,
    seed1: Option<&[u32]>,
    d2: &CoxeterDiagram,
    seed2: Option<&[u32]>,
) -> Option<Vec<usize>> {
    if d1.rank() != d2.rank() {
        return None;
    }
    match (seed1, seed2) {
        (Some(s1), Some(s2)) => {
            if canonical_form_colored(d1, s1) != canonical_form_colored(d2, s2) {
                return None;
            }
        }
        (None, None) => {
            if canonical_form(d1) != canonical_form(d2) {
                return None;
            }
        }
        _ => return None,
    }
    let (_, p1) = canonical_labeling(d1, seed1);
    let (_, p2) = canonical_labeling(d2, seed2);
    let mut map = vec![0usize; d1.rank()];
    for k in 0..p1.len() {
        map[p1[k]] = p2[k];
    }
    // Equal certificates guarantee this, but the check is cheap insurance.
    check_isomorphism(d1, d2, &map).then_some(map)
}

/// Brute-force isomorphism test over all vertex bijections; testing fallback
/// for small ranks.
pub fn brute_force_isomorphic(d1: &CoxeterDiagram, d2: &CoxeterDiagram) -> bool {
    let n = d1.rank();
    if n != d2.rank() {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    permute_all(&mut perm, 0, &mut |p| check_isomorphism(d1, d2, p))
}

fn permute_all(perm: &mut Vec<usize>, k: usize, found: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if k == perm.len() {
        return found(perm);
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        if permute_all(perm, k + 1, found) {
            perm.swap(k, i);
            return true;
        }
        perm.swap(k, i);
    }
    false
}

/// Convenience: seed coloring marking a subset (members 1, rest 0).
pub fn subset_seed(rank: usize, marked: Subset) -> Vec<u32> {
    (0..rank)
        .map(|i| if marked.contains(i) { 1 } else { 0 })
        .collect()
}
