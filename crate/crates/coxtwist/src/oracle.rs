//! Brute-force ground truth for small finite Coxeter groups.
//!
//! The ω table in [`crate::sphericity`] is classical data; this module
//! re-derives it from scratch so the two can be cross-checked. For each
//! supported irreducible family a concrete faithful model is built:
//!
//! * `A_n` (n ≤ 6): permutations of `n+1` points, generators = adjacent
//!   transpositions;
//! * `B_n` (n ≤ 4): signed permutations, generators = one sign flip plus
//!   adjacent transpositions;
//! * `D_n` (n ∈ {4,5}): even-sign signed permutations, generators = the
//!   signed pair swap, the plain pair swap, and adjacent transpositions;
//! * `I2(m)` (m ≤ 12): the dihedral group acting on `Z_m`, generators =
//!   two reflections.
//!
//! `E6/E7/E8/F4/H3/H4` have no small exact model here on purpose (E6 alone
//! has order 51840); [`build_model`] reports them as unsupported and
//! [`verify_omega`] lists them as skipped.
//!
//! The longest element of a direct product is the tuple of componentwise
//! longest elements (lengths add over commuting factors), so all searches
//! run per irreducible component and never enumerate the product group.

use std::collections::HashMap;

use crate::diagram::{CoxeterDiagram, Order, Subset};
use crate::error::{Error, Result};
use crate::sphericity::{self, Family, IrreducibleType, TypedComponent};

/// Element of one irreducible component's model.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompElt {
    /// Permutation of points `0..k`, stored as the image vector.
    Perm(Vec<u8>),
    /// Signed permutation: entry `i` holds `±(j+1)` meaning `e_i ↦ ±e_j`.
    Signed(Vec<i8>),
    /// Dihedral element `x ↦ rot + (−1)^flip · x` on `Z_m`.
    Dihedral { m: u32, rot: u32, flip: bool },
}

impl CompElt {
    fn identity_like(&self) -> CompElt {
        match self {
            CompElt::Perm(p) => CompElt::Perm((0..p.len() as u8).collect()),
            CompElt::Signed(s) => CompElt::Signed((1..=s.len() as i8).collect()),
            CompElt::Dihedral { m, .. } => CompElt::Dihedral {
                m: *m,
                rot: 0,
                flip: false,
            },
        }
    }

    fn is_identity(&self) -> bool {
        *self == self.identity_like()
    }

    /// Group product `self ∘ other` (apply `other` first).
    fn compose(&self, other: &CompElt) -> CompElt {
        match (self, other) {
            (CompElt::Perm(p), CompElt::Perm(q)) => {
                CompElt::Perm(q.iter().map(|&x| p[x as usize]).collect())
            }
            (CompElt::Signed(p), CompElt::Signed(q)) => CompElt::Signed(
                q.iter()
                    .map(|&sv| {
                        let (sign, j) = (sv.signum(), (sv.abs() - 1) as usize);
                        sign * p[j]
                    })
                    .collect(),
            ),
            (
                CompElt::Dihedral { m, rot: k1, flip: b1 },
                CompElt::Dihedral { rot: k2, flip: b2, .. },
            ) => {
                let m = *m;
                let signed = if *b1 {
                    (*k1 as i64) - (*k2 as i64)
                } else {
                    (*k1 as i64) + (*k2 as i64)
                };
                CompElt::Dihedral {
                    m,
                    rot: signed.rem_euclid(m as i64) as u32,
                    flip: b1 ^ b2,
                }
            }
            _ => panic!("composed elements of different model kinds"),
        }
    }

    fn inverse(&self) -> CompElt {
        match self {
            CompElt::Perm(p) => {
                let mut inv = vec![0u8; p.len()];
                for (i, &x) in p.iter().enumerate() {
                    inv[x as usize] = i as u8;
                }
                CompElt::Perm(inv)
            }
            CompElt::Signed(s) => {
                let mut inv = vec![0i8; s.len()];
                for (i, &sv) in s.iter().enumerate() {
                    let (sign, j) = (sv.signum(), (sv.abs() - 1) as usize);
                    inv[j] = sign * (i as i8 + 1);
                }
                CompElt::Signed(inv)
            }
            CompElt::Dihedral { m, rot, flip } => {
                if *flip {
                    self.clone()
                } else {
                    CompElt::Dihedral {
                        m: *m,
                        rot: (*m - *rot) % *m,
                        flip: false,
                    }
                }
            }
        }
    }
}

/// One irreducible factor of a model: which generators it covers (diagram
/// indices, layout order) and their images.
#[derive(Debug, Clone)]
pub struct ModelComponent {
    /// Recognized type of the factor.
    pub itype: IrreducibleType,
    /// Generator indices of the diagram, in layout order.
    pub gens: Vec<usize>,
    gen_elts: Vec<CompElt>,
}

/// Faithful model of `W_T` for spherical `T`, as a product of per-component
/// models. Elements are tuples with one [`CompElt`] per component.
#[derive(Debug, Clone)]
pub struct FiniteModel {
    /// The factors, ordered by smallest covered generator index.
    pub components: Vec<ModelComponent>,
}

/// A group element of a [`FiniteModel`].
pub type Element = Vec<CompElt>;

fn supported(t: &IrreducibleType) -> bool {
    match t.family {
        Family::A => t.rank <= 6,
        Family::B => t.rank <= 4,
        Family::D => t.rank <= 5,
        Family::I2 => t.m.is_some_and(|m| m <= 12),
        _ => false,
    }
}

fn component_generators(comp: &TypedComponent) -> Option<Vec<CompElt>> {
    let n = comp.ordered.len();
    match comp.itype.family {
        Family::A => {
            // Adjacent transpositions of n+1 points.
            let pts = n as u8 + 1;
            Some(
                (0..n)
                    .map(|k| {
                        let mut p: Vec<u8> = (0..pts).collect();
                        p.swap(k, k + 1);
                        CompElt::Perm(p)
                    })
                    .collect(),
            )
        }
        Family::B => {
            // Layout order puts the 4-bond first: flip, then transpositions.
            let mut gens = Vec::with_capacity(n);
            let mut flip: Vec<i8> = (1..=n as i8).collect();
            flip[0] = -1;
            gens.push(CompElt::Signed(flip));
            for k in 1..n {
                let mut p: Vec<i8> = (1..=n as i8).collect();
                p.swap(k - 1, k);
                gens.push(CompElt::Signed(p));
            }
            Some(gens)
        }
        Family::D => {
            // Fork leaves first: the signed pair swap and the plain swap,
            // then the tail of adjacent transpositions.
            let mut gens = Vec::with_capacity(n);
            let mut u: Vec<i8> = (1..=n as i8).collect();
            u[0] = -2;
            u[1] = -1;
            gens.push(CompElt::Signed(u));
            for k in 1..n {
                let mut p: Vec<i8> = (1..=n as i8).collect();
                p.swap(k - 1, k);
                gens.push(CompElt::Signed(p));
            }
            Some(gens)
        }
        Family::I2 => {
            let m = comp.itype.m?;
            Some(vec![
                CompElt::Dihedral { m, rot: 0, flip: true },
                CompElt::Dihedral { m, rot: 1, flip: true },
            ])
        }
        _ => None,
    }
}

fn element_order(e: &CompElt) -> u32 {
    let mut acc = e.clone();
    let mut k = 1;
    while !acc.is_identity() {
        acc = acc.compose(e);
        k += 1;
        assert!(k <= 100_000, "element order runaway");
    }
    k
}

/// Build a faithful model of `W_T`.
///
/// Returns `Ok(None)` when some irreducible factor falls outside the
/// supported families; a non-spherical `T` is a domain error. The defining
/// relations — involutions and `(st)^{o(st)} = 1` — are checked on
/// construction.
pub fn build_model(d: &CoxeterDiagram, t: Subset) -> Result<Option<FiniteModel>> {
    let comps = sphericity::recognize(d, t).ok_or_else(|| {
        Error::Domain(format!(
            "build_model requires a spherical subset; {} is not",
            d.label_of(t)
        ))
    })?;
    let mut components = Vec::new();
    for comp in &comps {
        if !supported(&comp.itype) {
            return Ok(None);
        }
        let gen_elts = component_generators(comp).expect("supported family has generators");
        let mc = ModelComponent {
            itype: comp.itype,
            gens: comp.ordered.clone(),
            gen_elts,
        };
        // Defining relations within the component.
        for (a, ga) in mc.gen_elts.iter().enumerate() {
            if element_order(ga) != 2 {
                return Err(Error::Invariant(format!(
                    "model generator for '{}' is not an involution",
                    d.name(mc.gens[a])
                )));
            }
            for (b, gb) in mc.gen_elts.iter().enumerate().skip(a + 1) {
                let expect = match d.order(mc.gens[a], mc.gens[b]) {
                    Order::Finite(m) => m,
                    Order::Inf => {
                        return Err(Error::Invariant(
                            "infinite bond inside a spherical component".into(),
                        ))
                    }
                };
                let got = element_order(&ga.compose(gb));
                if got != expect {
                    return Err(Error::Invariant(format!(
                        "model pair ('{}','{}') has order {got}, diagram says {expect}",
                        d.name(mc.gens[a]),
                        d.name(mc.gens[b])
                    )));
                }
            }
        }
        components.push(mc);
    }
    Ok(Some(FiniteModel { components }))
}

/// Breadth-first exploration data of one component's Cayley graph.
struct Exploration {
    size: usize,
    longest: CompElt,
    longest_len: usize,
}

fn explore(mc: &ModelComponent) -> Result<Exploration> {
    let id = mc.gen_elts[0].identity_like();
    let mut dist: HashMap<CompElt, usize> = HashMap::new();
    dist.insert(id.clone(), 0);
    let mut frontier = vec![id];
    let mut depth = 0;
    let mut last_layer = frontier.clone();
    while !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        for e in &frontier {
            for g in &mc.gen_elts {
                let w = e.compose(g);
                if !dist.contains_key(&w) {
                    dist.insert(w.clone(), depth);
                    next.push(w);
                }
            }
        }
        if !next.is_empty() {
            last_layer = next.clone();
        }
        frontier = next;
    }
    let longest_len = depth - 1;
    if last_layer.len() != 1 {
        return Err(Error::Invariant(format!(
            "longest element of {} is not unique ({} candidates)",
            mc.itype,
            last_layer.len()
        )));
    }
    // Longest length must equal the number of positive roots.
    let n = mc.gens.len();
    let expected = match mc.itype.family {
        Family::A => n * (n + 1) / 2,
        Family::B => n * n,
        Family::D => n * (n - 1),
        Family::I2 => mc.itype.m.unwrap() as usize,
        _ => unreachable!("unsupported family was filtered in build_model"),
    };
    if longest_len != expected {
        return Err(Error::Invariant(format!(
            "longest element of {} has length {longest_len}, expected {expected}",
            mc.itype
        )));
    }
    Ok(Exploration {
        size: dist.len(),
        longest: last_layer.into_iter().next().unwrap(),
        longest_len,
    })
}

/// The unique longest element, one [`CompElt`] per component.
///
/// Each component's Cayley graph is searched breadth-first from the
/// identity; uniqueness of the deepest element and the positive-root length
/// formula are asserted.
pub fn longest_element(m: &FiniteModel) -> Result<Element> {
    m.components
        .iter()
        .map(|mc| explore(mc).map(|ex| ex.longest))
        .collect()
}

/// Total group order (product over components).
pub fn model_order(m: &FiniteModel) -> Result<u128> {
    let mut total: u128 = 1;
    for mc in &m.components {
        total *= explore(mc)?.size as u128;
    }
    Ok(total)
}

/// Word length of the longest element.
pub fn longest_length(m: &FiniteModel) -> Result<usize> {
    let mut total = 0;
    for mc in &m.components {
        total += explore(mc)?.longest_len;
    }
    Ok(total)
}

/// Conjugate every generator by `w`: returns `(generator index, image)`
/// pairs where the image is the generator index that `w·s·w⁻¹` equals, or
/// `None` when the conjugate is not a generator. Sorted by source index.
pub fn conjugate_generators(m: &FiniteModel, w: &Element) -> Vec<(usize, Option<usize>)> {
    let mut out = Vec::new();
    for (ci, mc) in m.components.iter().enumerate() {
        let wc = &w[ci];
        let winv = wc.inverse();
        for (k, s) in mc.gen_elts.iter().enumerate() {
            let conj = wc.compose(s).compose(&winv);
            let image = mc
                .gen_elts
                .iter()
                .position(|g| *g == conj)
                .map(|pos| mc.gens[pos]);
            out.push((mc.gens[k], image));
        }
    }
    out.sort_unstable();
    out
}

/// One ω cross-check on a spherical subset.
#[derive(Debug, Clone)]
pub struct OmegaCheck {
    /// The subset checked.
    pub subset: Subset,
    /// True iff the oracle conjugation matches the table automorphism.
    pub passed: bool,
    /// Human-readable detail on mismatch.
    pub detail: Option<String>,
}

/// Outcome of [`verify_omega`].
#[derive(Debug, Clone, Default)]
pub struct OmegaReport {
    /// All executed checks.
    pub checks: Vec<OmegaCheck>,
    /// Subsets skipped because a factor has no model, with its type name.
    pub skipped: Vec<(Subset, String)>,
}

impl OmegaReport {
    /// True iff every executed check passed.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Number of failed checks.
    pub fn mismatches(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

/// Cross-check the ω table against brute force on every nonempty spherical
/// subset of the diagram whose factors all have models.
///
/// Per-component explorations are cached by member set, so diagrams whose
/// spherical subsets share factors (the common case) stay cheap.
pub fn verify_omega(d: &CoxeterDiagram) -> Result<OmegaReport> {
    let mut report = OmegaReport::default();
    // component members -> (layout gens, conjugation map by the longest elt)
    let mut cache: HashMap<Subset, Vec<(usize, Option<usize>)>> = HashMap::new();
    'subsets: for (t, _) in sphericity::spherical_subsets(d, None) {
        if t.is_empty() {
            continue;
        }
        let comps = sphericity::recognize(d, t).expect("enumerated subsets are spherical");
        for comp in &comps {
            if !supported(&comp.itype) {
                report.skipped.push((t, comp.itype.to_string()));
                continue 'subsets;
            }
        }
        let mut conj: Vec<(usize, Option<usize>)> = Vec::new();
        for comp in &comps {
            let members = comp.members();
            let entry = match cache.get(&members) {
                Some(e) => e.clone(),
                None => {
                    let model = build_model(d, members)?.expect("supported family");
                    let w0 = longest_element(&model)?;
                    let e = conjugate_generators(&model, &w0);
                    cache.insert(members, e.clone());
                    e
                }
            };
            conj.extend(entry);
        }
        conj.sort_unstable();
        let omega = sphericity::longest_automorphism(d, t)?;
        let table: Vec<(usize, Option<usize>)> =
            omega.mapping.iter().map(|&(s, i)| (s, Some(i))).collect();
        let passed = conj == table;
        let detail = (!passed).then(|| {
            format!(
                "oracle {:?} vs table {:?} on {}",
                conj,
                table,
                d.label_of(t)
            )
        });
        report.checks.push(OmegaCheck {
            subset: t,
            passed,
            detail,
        });
    }
    Ok(report)
}
