//! Untangling chains: moving a subset through longest elements of
//! spherical supersets.
//!
//! One step relates `U` to `U′` through a spherical `T`: both σ-parts lie
//! in `T`, the longest element of `W_T` carries one σ-part onto the other,
//! and the (shared) ν-part commutes with all of `T`. Chaining steps walks
//! `U` through the diagram while conjugating it by an explicit product of
//! longest elements; the composed map is a bijection of `U` onto the final
//! subset preserving all pairwise orders. Closed chains based at `U`
//! induce a group of permutations of `U` — the diagram-level shadow of the
//! conjugation action studied through these chains.
//!
//! The search space is the set of subsets sharing `U`'s ν-part, which the
//! step relation fixes; edges are generated by all spherical subsets `T`
//! containing the current σ-part and commuting with the ν-part. Breadth-
//! first order with sorted edge enumeration makes shortest witnesses
//! deterministic (ties broken lexicographically).

use std::collections::{BTreeSet, VecDeque};

use crate::diagram::{perp, sigma_nu_split, CoxeterDiagram, Subset};
use crate::sphericity::{is_spherical, longest_automorphism, spherical_subsets};

/// A chain of untangle steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UntanglePath {
    /// The subsets `U₁ … U_q` visited, in order.
    pub nodes: Vec<Subset>,
    /// The spherical links `T₁ … T_{q−1}`.
    pub links: Vec<Subset>,
    /// Composition of the per-link maps as `(source, image)` pairs from
    /// `U₁` onto `U_q` (a permutation of `U₁` when the chain is closed).
    pub induced: Vec<(usize, usize)>,
}

impl UntanglePath {
    /// The trivial chain at `u`.
    pub fn trivial(u: Subset) -> UntanglePath {
        UntanglePath {
            nodes: vec![u],
            links: Vec::new(),
            induced: u.iter().map(|i| (i, i)).collect(),
        }
    }

    /// Number of links.
    pub fn len(&self) -> usize {
        self.links.len()
    }

    /// True iff the chain has no links.
    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }
}

/// True iff one untangle step through `T` relates `u` and `u2`: `T` is
/// spherical, contains both σ-parts and maps one onto the other by its
/// longest element, and the ν-parts agree and commute with all of `T`.
pub fn untangle_step(d: &CoxeterDiagram, u: Subset, u2: Subset, t: Subset) -> bool {
    let su = sigma_nu_split(d, u);
    let s2 = sigma_nu_split(d, u2);
    if !is_spherical(d, t) {
        return false;
    }
    if !su.sigma.union(s2.sigma).is_subset_of(t) {
        return false;
    }
    if su.nu != s2.nu || !su.nu.is_subset_of(perp(d, t)) {
        return false;
    }
    match longest_automorphism(d, t) {
        Ok(omega) => omega.image(su.sigma) == s2.sigma,
        Err(_) => false,
    }
}

/// The per-link map on members of `u`: σ-members move through `ω_T`,
/// ν-members stay (they commute with every element of `W_T`).
fn link_map(d: &CoxeterDiagram, u: Subset, t: Subset) -> Vec<(usize, usize)> {
    let split = sigma_nu_split(d, u);
    let omega = longest_automorphism(d, t).expect("link over a spherical set");
    u.iter()
        .map(|i| {
            if split.sigma.contains(i) {
                (i, omega.apply(i))
            } else {
                (i, i)
            }
        })
        .collect()
}

fn compose(first: &[(usize, usize)], then: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let apply = |m: &[(usize, usize)], i: usize| -> usize {
        m.iter().find(|&&(s, _)| s == i).map(|&(_, t)| t).unwrap_or(i)
    };
    let mut out: Vec<(usize, usize)> = first
        .iter()
        .map(|&(s, mid)| (s, apply(then, mid)))
        .collect();
    out.sort_unstable();
    out
}

/// Candidate links from a node: every nonempty spherical `T` containing
/// the node's σ-part and commuting with its ν-part, paired with the target
/// the step produces. Each edge is validated by [`untangle_step`].
fn edges_from(
    d: &CoxeterDiagram,
    sphericals: &[Subset],
    v: Subset,
) -> Vec<(Subset, Subset)> {
    let split = sigma_nu_split(d, v);
    let mut out = Vec::new();
    for &t in sphericals {
        if t.is_empty() || !split.sigma.is_subset_of(t) {
            continue;
        }
        if !split.nu.is_subset_of(perp(d, t)) {
            continue;
        }
        let omega = match longest_automorphism(d, t) {
            Ok(o) => o,
            Err(_) => continue,
        };
        let target = omega.image(split.sigma).union(split.nu);
        if untangle_step(d, v, target, t) {
            out.push((t, target));
        }
    }
    out
}

fn all_sphericals(d: &CoxeterDiagram) -> Vec<Subset> {
    let mut out: Vec<Subset> = spherical_subsets(d, None)
        .into_iter()
        .map(|(t, _)| t)
        .collect();
    out.sort_unstable_by_key(|s| (s.len(), *s));
    out
}

/// Shortest chain from `u` to `u2` within `maxlen` links, or `None`.
///
/// Breadth-first over subsets sharing `u`'s ν-part; the first arrival at
/// `u2` wins, with ties broken by the sorted `(link, target)` enumeration.
/// The returned path carries the composed bijection of `u` onto `u2`.
pub fn untangle_reachable(
    d: &CoxeterDiagram,
    u: Subset,
    u2: Subset,
    maxlen: usize,
) -> Option<UntanglePath> {
    if u == u2 {
        return Some(UntanglePath::trivial(u));
    }
    let sphericals = all_sphericals(d);
    let mut visited: BTreeSet<Subset> = BTreeSet::new();
    visited.insert(u);
    let mut queue: VecDeque<UntanglePath> = VecDeque::new();
    queue.push_back(UntanglePath::trivial(u));
    while let Some(path) = queue.pop_front() {
        if path.len() == maxlen {
            continue;
        }
        let here = *path.nodes.last().unwrap();
        for (t, target) in edges_from(d, &sphericals, here) {
            if !visited.insert(target) {
                continue;
            }
            let mut next = path.clone();
            next.nodes.push(target);
            next.links.push(t);
            next.induced = compose(&path.induced, &link_map(d, here, t));
            debug_assert!(preserves_orders(d, &next.induced));
            if target == u2 {
                return Some(next);
            }
            queue.push_back(next);
        }
    }
    None
}

fn preserves_orders(d: &CoxeterDiagram, mapping: &[(usize, usize)]) -> bool {
    for &(a, fa) in mapping {
        for &(b, fb) in mapping {
            if a < b && d.order(fa, fb) != d.order(a, b) {
                return false;
            }
        }
    }
    true
}

/// The permutations of `u` induced by closed chains.
#[derive(Debug, Clone)]
pub struct LoopAutomorphisms {
    /// The full group generated by the found loops, as sorted
    /// `(source, image)` permutations of `u`; the identity is first.
    pub group: Vec<Vec<(usize, usize)>>,
    /// One witness chain per distinct loop permutation found directly by
    /// the search (group elements arising only by composition carry no
    /// chain here — concatenating witness chains realizes them).
    pub witnesses: Vec<(Vec<(usize, usize)>, UntanglePath)>,
}

/// Enumerate closed chains at `u` of length at most `maxlen` and return
/// the permutation group of `u` they generate.
///
/// States are `(subset, accumulated permutation)` pairs, so the walk
/// terminates even though chains may revisit subsets with new effects.
/// The default `maxlen` is the order of the automorphism group of `u`'s
/// induced diagram times the number of spherical-product subsets of the
/// diagram — enough slack for every composable effect to close a loop.
pub fn loop_automorphisms(
    d: &CoxeterDiagram,
    u: Subset,
    maxlen: Option<usize>,
) -> LoopAutomorphisms {
    let maxlen = maxlen.unwrap_or_else(|| default_loop_bound(d, u));
    let sphericals = all_sphericals(d);
    let identity: Vec<(usize, usize)> = u.iter().map(|i| (i, i)).collect();
    let mut found: Vec<(Vec<(usize, usize)>, UntanglePath)> = Vec::new();
    let mut seen_loops: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
    let mut visited: BTreeSet<(Subset, Vec<(usize, usize)>)> = BTreeSet::new();
    visited.insert((u, identity.clone()));
    let mut queue: VecDeque<UntanglePath> = VecDeque::new();
    queue.push_back(UntanglePath::trivial(u));
    while let Some(path) = queue.pop_front() {
        if path.len() == maxlen {
            continue;
        }
        let here = *path.nodes.last().unwrap();
        for (t, target) in edges_from(d, &sphericals, here) {
            let mut next = path.clone();
            next.nodes.push(target);
            next.links.push(t);
            next.induced = compose(&path.induced, &link_map(d, here, t));
            if !visited.insert((target, next.induced.clone())) {
                continue;
            }
            if target == u && seen_loops.insert(next.induced.clone()) {
                found.push((next.induced.clone(), next.clone()));
            }
            queue.push_back(next);
        }
    }
    // Close the found permutations into a group.
    let mut group: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
    group.insert(identity);
    for (p, _) in &found {
        group.insert(p.clone());
    }
    loop {
        let mut added = Vec::new();
        for a in &group {
            for b in &group {
                let c = compose(a, b);
                if !group.contains(&c) {
                    added.push(c);
                }
            }
        }
        if added.is_empty() {
            break;
        }
        group.extend(added);
    }
    let mut group: Vec<Vec<(usize, usize)>> = group.into_iter().collect();
    group.sort_by_key(|p| (p.iter().filter(|(s, t)| s != t).count(), p.clone()));
    LoopAutomorphisms {
        group,
        witnesses: found,
    }
}

/// Default chain-length bound: order of the automorphism group of `u`'s
/// induced diagram times the number of spherical-product subsets.
fn default_loop_bound(d: &CoxeterDiagram, u: Subset) -> usize {
    let auts = if u.len() <= 8 {
        diagram_automorphism_count(d, u)
    } else {
        16
    };
    let products = if d.rank() <= crate::separation::SUBSET_ENUM_MAX_RANK {
        (1u32..(1 << d.rank()))
            .filter(|&m| crate::diagram::is_spherical_product(d, Subset(m)))
            .count()
            .max(1)
    } else {
        16
    };
    auts * products
}

/// Order of the automorphism group of the diagram induced on `t`, by
/// brute force over permutations.
fn diagram_automorphism_count(d: &CoxeterDiagram, t: Subset) -> usize {
    let members: Vec<usize> = t.iter().collect();
    let k = members.len();
    if k == 0 {
        return 1;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut count = 0;
    // Heap's algorithm over the member indices.
    let mut c = vec![0usize; k];
    let mut check = |perm: &[usize]| {
        let ok = (0..k).all(|i| {
            (i + 1..k).all(|j| {
                d.order(members[perm[i]], members[perm[j]]) == d.order(members[i], members[j])
            })
        });
        if ok {
            count += 1;
        }
    };
    check(&idx);
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                idx.swap(0, i);
            } else {
                idx.swap(c[i], i);
            }
            check(&idx);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    count
}
