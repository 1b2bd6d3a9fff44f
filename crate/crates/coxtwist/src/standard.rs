//! The standard separation `Ã_S` and the type(I)/type(II) classification.
//!
//! Gluing the maximal twist-rigid subsets along all minimal separations at
//! once yields a canonical coarsest structure: two atoms are *related* when
//! some minimal separation keeps them in a common block, and the blocks of
//! the standard separation are the unions of the resulting equivalence
//! classes. A block is *type(I)* when it appears verbatim in every minimal
//! separation and *type(II)* otherwise; type(I) blocks are pinned down by
//! the diagram while type(II) blocks absorb all the twisting ambiguity.
//!
//! The relation is defined here through minimal-separation blocks and then
//! transitively closed; an equivalent phrasing through `𝒰̄` (the separators
//! common to all minimal separations: two atoms are related when no member
//! of `𝒰̄` separates them) is computed as a cross-check. Both the closure
//! and the cross-check are expected to be no-ops; when they are not, the
//! offending pairs are surfaced in diagnostic fields rather than silently
//! resolved.

use crate::diagram::{components, is_connected, CoxeterDiagram, Subset};
use crate::error::{Error, Result};
use crate::separation::{
    is_separation, maximal_twist_rigid_subsets, minimal_separations, separates_subsets,
    separating_spherical_products, separator_set_for, SeparationFamily,
};

/// The standard separation of a diagram, with its classification and the
/// diagnostics produced while building it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardSeparation {
    /// The blocks of `Ã_S`, as a separation family.
    pub family: SeparationFamily,
    /// Blocks appearing in every minimal separation, sorted.
    pub type1: Vec<Subset>,
    /// The remaining blocks, sorted.
    pub type2: Vec<Subset>,
    /// Separators common to all minimal separations (`𝒰̄`), sorted.
    pub ubar: Vec<Subset>,
    /// The minimal separations the construction ran over.
    pub minimal: Vec<SeparationFamily>,
    /// Atom pairs related only after transitive closure. Expected empty;
    /// nonempty means the block-based relation was not transitive as given.
    pub closure_added_pairs: Vec<(Subset, Subset)>,
    /// Atom pairs on which the `𝒰̄`-based phrasing of the relation
    /// disagrees with the block-based one. Expected empty.
    pub phrasing_disagreements: Vec<(Subset, Subset)>,
}

/// The separators common to all minimal separations of `S`.
///
/// For each minimal separation `F` the set `𝒰_F` collects the separating
/// spherical products that are separators of `F`; the result is their
/// intersection. A twist-rigid diagram has `{S}` as its only minimal
/// separation and no separator at all, so `𝒰̄ = ∅`. For disconnected `S`
/// the per-component results are combined.
pub fn ubar(d: &CoxeterDiagram) -> Result<Vec<Subset>> {
    if !is_connected(d, d.full()) {
        let mut out = Vec::new();
        for c in components(d, d.full()) {
            let (sub, back) = d.restrict(c);
            for u in ubar(&sub)? {
                out.push(u.iter().map(|i| back[i]).collect());
            }
        }
        out.sort_unstable_by_key(|s: &Subset| (s.len(), *s));
        return Ok(out);
    }
    let ssp = separating_spherical_products(d)?;
    let minimal = minimal_separations(d)?;
    Ok(ubar_inner(d, &ssp, &minimal))
}

fn ubar_inner(
    d: &CoxeterDiagram,
    ssp: &[Subset],
    minimal: &[SeparationFamily],
) -> Vec<Subset> {
    let mut common: Option<Vec<Subset>> = None;
    for f in minimal {
        let uf = separator_set_for(d, ssp, f);
        common = Some(match common {
            None => uf,
            Some(prev) => prev.into_iter().filter(|u| uf.contains(u)).collect(),
        });
    }
    let mut out = common.unwrap_or_default();
    out.sort_unstable_by_key(|s| (s.len(), *s));
    out
}

/// Build the standard separation of `S`.
///
/// Atoms are related when some minimal separation holds both in one block;
/// the relation is transitively closed (additions are recorded, not
/// hidden), classes are merged into blocks, and blocks are classified
/// type(I)/type(II). Asserted before returning: the family passes
/// [`is_separation`], the classification computed through the relation
/// matches a direct block-intersection of the minimal separations, every
/// block is a union of blocks of some single minimal separation, and no
/// member of `𝒰̄` separates any block.
pub fn standard_separation(d: &CoxeterDiagram) -> Result<StandardSeparation> {
    if d.rank() == 0 {
        return Ok(StandardSeparation {
            family: SeparationFamily::new(Vec::new()),
            type1: Vec::new(),
            type2: Vec::new(),
            ubar: Vec::new(),
            minimal: vec![SeparationFamily::new(Vec::new())],
            closure_added_pairs: Vec::new(),
            phrasing_disagreements: Vec::new(),
        });
    }
    if !is_connected(d, d.full()) {
        let mut blocks = Vec::new();
        let mut type1 = Vec::new();
        let mut type2 = Vec::new();
        let mut ub = Vec::new();
        let mut closure_added = Vec::new();
        let mut disagreements = Vec::new();
        for c in components(d, d.full()) {
            let (sub, back) = d.restrict(c);
            let local = standard_separation(&sub)?;
            let up = |s: Subset| -> Subset { s.iter().map(|i| back[i]).collect() };
            blocks.extend(local.family.blocks().iter().map(|&b| up(b)));
            type1.extend(local.type1.iter().map(|&b| up(b)));
            type2.extend(local.type2.iter().map(|&b| up(b)));
            ub.extend(local.ubar.iter().map(|&u| up(u)));
            closure_added.extend(local.closure_added_pairs.iter().map(|&(a, b)| (up(a), up(b))));
            disagreements
                .extend(local.phrasing_disagreements.iter().map(|&(a, b)| (up(a), up(b))));
        }
        let family = SeparationFamily::new(blocks);
        if !is_separation(d, &family)? {
            return Err(Error::Invariant(
                "componentwise standard separation fails the separation conditions".into(),
            ));
        }
        type1.sort_unstable_by_key(|s| (s.len(), *s));
        type2.sort_unstable_by_key(|s| (s.len(), *s));
        ub.sort_unstable_by_key(|s| (s.len(), *s));
        return Ok(StandardSeparation {
            family,
            type1,
            type2,
            ubar: ub,
            minimal: minimal_separations(d)?,
            closure_added_pairs: closure_added,
            phrasing_disagreements: disagreements,
        });
    }

    let ssp = separating_spherical_products(d)?;
    let a0 = maximal_twist_rigid_subsets(d)?;
    let minimal = minimal_separations(d)?;
    let ub = ubar_inner(d, &ssp, &minimal);
    let n = a0.len();

    // Directly related: some minimal separation keeps both atoms together.
    let direct = |i: usize, j: usize| -> bool {
        minimal.iter().any(|f| {
            f.blocks()
                .iter()
                .any(|b| a0[i].is_subset_of(*b) && a0[j].is_subset_of(*b))
        })
    };
    let mut related = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j || direct(i, j) {
                related[i * n + j] = true;
            }
        }
    }
    // Transitive closure, recording additions.
    let mut closed = related.clone();
    loop {
        let mut changed = false;
        for k in 0..n {
            for i in 0..n {
                if !closed[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    if closed[k * n + j] && !closed[i * n + j] {
                        closed[i * n + j] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut closure_added = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if closed[i * n + j] && !related[i * n + j] {
                closure_added.push((a0[i], a0[j]));
            }
        }
    }

    // Classes → blocks.
    let mut class = vec![usize::MAX; n];
    let mut next = 0;
    for i in 0..n {
        if class[i] == usize::MAX {
            for j in 0..n {
                if closed[i * n + j] {
                    class[j] = next;
                }
            }
            next += 1;
        }
    }
    let mut blocks = vec![Subset::EMPTY; next];
    for i in 0..n {
        blocks[class[i]] = blocks[class[i]].union(a0[i]);
    }
    let family = SeparationFamily::new(blocks);

    // Cross-check: the 𝒰̄ phrasing of the relation.
    let mut disagreements = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let no_ubar_separates = !ub
                .iter()
                .any(|&u| separates_subsets(d, u, a0[i], a0[j]));
            if no_ubar_separates != closed[i * n + j] {
                disagreements.push((a0[i], a0[j]));
            }
        }
    }

    // Classification, computed twice.
    let mut type1 = Vec::new();
    let mut type2 = Vec::new();
    for &b in family.blocks() {
        if minimal.iter().all(|f| f.contains_block(b)) {
            type1.push(b);
        } else {
            type2.push(b);
        }
    }
    let common: Vec<Subset> = match minimal.split_first() {
        None => Vec::new(),
        Some((first, rest)) => first
            .blocks()
            .iter()
            .copied()
            .filter(|b| rest.iter().all(|f| f.contains_block(*b)))
            .collect(),
    };
    let type1_alt: Vec<Subset> = family
        .blocks()
        .iter()
        .copied()
        .filter(|b| common.contains(b))
        .collect();
    if type1 != type1_alt {
        return Err(Error::Invariant(
            "type(I) classification disagrees between the relation-based and \
             block-intersection computations"
                .into(),
        ));
    }

    // Remaining assertions.
    if !is_separation(d, &family)? {
        return Err(Error::Invariant(
            "standard separation fails the separation conditions".into(),
        ));
    }
    for &b in family.blocks() {
        let covered = minimal.iter().any(|f| {
            f.blocks()
                .iter()
                .filter(|a| a.is_subset_of(b))
                .fold(Subset::EMPTY, |acc, &a| acc.union(a))
                == b
        });
        if !covered {
            return Err(Error::Invariant(format!(
                "block {} is not a union of blocks of any single minimal separation",
                d.label_of(b)
            )));
        }
        if ub.iter().any(|&u| {
            components(d, d.full().minus(u))
                .iter()
                .filter(|c| !c.inter(b.minus(u)).is_empty())
                .count()
                >= 2
        }) {
            return Err(Error::Invariant(format!(
                "a common separator cuts the block {}",
                d.label_of(b)
            )));
        }
    }

    Ok(StandardSeparation {
        family,
        type1,
        type2,
        ubar: ub,
        minimal,
        closure_added_pairs: closure_added,
        phrasing_disagreements: disagreements,
    })
}
