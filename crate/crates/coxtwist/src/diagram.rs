//! Core representation of a Coxeter system as a finite labeled graph.
//!
//! A [`CoxeterDiagram`] stores generator names and the symmetric order
//! matrix. Two different edge conventions coexist in the literature and both
//! are needed here:
//!
//! * **nerve convention** — `s` and `t` are adjacent iff `o(st) < ∞`. All
//!   connectivity and separation in this crate uses it ([`components`]).
//! * **commutation (Dynkin) convention** — `s` and `t` are adjacent iff
//!   `o(st) ≠ 2`, including `∞`. Irreducible factorization of a standard
//!   subgroup splits along commuting parts, so the σ/ν decomposition
//!   ([`sigma_nu_split`]) and finite-type recognition use it
//!   ([`irreducible_components`]).
//!
//! Subsets of generators are bitmasks ([`Subset`]); the rank is capped at
//! [`MAX_RANK`] so that exhaustive subset loops stay cheap.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphericity;

/// Hard cap on the number of generators; keeps `u32` bitmasks and the
/// exhaustive subset enumerations honest.
pub const MAX_RANK: usize = 25;

/// Order of a product of two generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    /// Finite order; off-diagonal entries are ≥ 2, the diagonal is 1.
    Finite(u32),
    /// Infinite order (no edge in the nerve convention).
    Inf,
}

impl Order {
    /// True iff the order is finite.
    pub fn is_finite(self) -> bool {
        matches!(self, Order::Finite(_))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "{m}"),
            Order::Inf => write!(f, "inf"),
        }
    }
}

/// A subset of generator indices of one diagram, as a bitmask.
///
/// `Subset` does not remember which diagram it belongs to; callers keep
/// subsets and diagrams paired. The derived `Ord` (numeric on the mask) is
/// used as the crate-wide deterministic order on subsets of equal size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(pub u32);

impl Subset {
    /// The empty subset.
    pub const EMPTY: Subset = Subset(0);

    /// Subset containing exactly generator `i`.
    pub fn singleton(i: usize) -> Subset {
        Subset(1 << i)
    }

    /// Subset `{0, …, rank−1}`.
    pub fn full(rank: usize) -> Subset {
        debug_assert!(rank <= MAX_RANK);
        if rank == 0 {
            Subset(0)
        } else {
            Subset(u32::MAX >> (32 - rank))
        }
    }

    /// Build from an iterator of indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> Subset {
        let mut s = Subset(0);
        for i in iter {
            s.insert(i);
        }
        s
    }

    /// True iff generator `i` is a member.
    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    /// Add generator `i`.
    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    /// Remove generator `i`.
    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1 << i);
    }

    /// Set union.
    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    /// Set intersection.
    pub fn inter(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    /// Set difference `self ∖ other`.
    pub fn minus(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    /// True iff `self ⊆ other`.
    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Number of members.
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// True iff empty.
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Iterate member indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    /// Smallest member, if any.
    pub fn min_member(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Subset {
        Subset::from_indices(iter)
    }
}

/// Result of the σ/ν decomposition of a subset (see [`sigma_nu_split`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SigmaNuSplit {
    /// Union of the finite-type irreducible components.
    pub sigma: Subset,
    /// Union of the infinite-type irreducible components.
    pub nu: Subset,
}

/// A Coxeter system encoded by generator names and the order matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterDiagram {
    names: Vec<String>,
    orders: Vec<Vec<Order>>,
}

impl CoxeterDiagram {
    /// Build a diagram from names and a list of finite bonds
    /// `(name, name, order)`; unlisted off-diagonal pairs get `∞`.
    pub fn new(names: Vec<String>, bonds: &[(String, String, u32)]) -> Result<CoxeterDiagram> {
        if names.len() > MAX_RANK {
            return Err(Error::Capacity {
                what: "diagram rank",
                limit: MAX_RANK,
                actual: names.len(),
            });
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::Parse("empty generator name".into()));
            }
            if names[..i].contains(n) {
                return Err(Error::Parse(format!("duplicate generator name '{n}'")));
            }
        }
        let rank = names.len();
        let mut orders = vec![vec![Order::Inf; rank]; rank];
        for (i, row) in orders.iter_mut().enumerate() {
            row[i] = Order::Finite(1);
        }
        let mut d = CoxeterDiagram { names, orders };
        for (a, b, m) in bonds {
            let (i, j) = (d.require(a)?, d.require(b)?);
            if i == j {
                return Err(Error::Parse(format!("self-edge on generator '{a}'")));
            }
            if *m < 2 {
                return Err(Error::Parse(format!(
                    "order {m} on pair ('{a}','{b}') is below 2"
                )));
            }
            if d.orders[i][j] != Order::Inf {
                return Err(Error::Parse(format!(
                    "pair ('{a}','{b}') listed more than once"
                )));
            }
            d.orders[i][j] = Order::Finite(*m);
            d.orders[j][i] = Order::Finite(*m);
        }
        Ok(d)
    }

    /// Build directly from a validated order matrix (used by twists).
    pub(crate) fn from_matrix(names: Vec<String>, orders: Vec<Vec<Order>>) -> CoxeterDiagram {
        debug_assert_eq!(names.len(), orders.len());
        CoxeterDiagram { names, orders }
    }

    /// Number of generators.
    pub fn rank(&self) -> usize {
        self.names.len()
    }

    /// All generators as a subset.
    pub fn full(&self) -> Subset {
        Subset::full(self.rank())
    }

    /// Name of generator `i`.
    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// All generator names in index order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Index of a generator by name.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::Parse(format!("unknown generator name '{name}'")))
    }

    /// Order of the product of generators `i` and `j`.
    pub fn order(&self, i: usize, j: usize) -> Order {
        self.orders[i][j]
    }

    /// Build a subset from generator names.
    pub fn subset(&self, names: &[&str]) -> Result<Subset> {
        let mut s = Subset::EMPTY;
        for n in names {
            s.insert(self.require(n)?);
        }
        Ok(s)
    }

    /// Member names of a subset, in index order.
    pub fn names_of(&self, t: Subset) -> Vec<&str> {
        t.iter().map(|i| self.name(i)).collect()
    }

    /// Human-readable `{a, b, c}` form of a subset.
    pub fn label_of(&self, t: Subset) -> String {
        format!("{{{}}}", self.names_of(t).join(","))
    }

    /// Induced sub-diagram on `t`, plus the map new index → old index.
    pub fn restrict(&self, t: Subset) -> (CoxeterDiagram, Vec<usize>) {
        let old: Vec<usize> = t.iter().collect();
        let names = old.iter().map(|&i| self.names[i].clone()).collect();
        let orders = old
            .iter()
            .map(|&i| old.iter().map(|&j| self.orders[i][j]).collect())
            .collect();
        (CoxeterDiagram { names, orders }, old)
    }
}

/// Connected components of `t` in the **nerve** convention (edges iff
/// `o(st) < ∞`), ordered by smallest member index.
pub fn components(d: &CoxeterDiagram, t: Subset) -> Vec<Subset> {
    components_by(t, |i, j| d.order(i, j).is_finite())
}

/// Connected components of `t` in the **commutation** convention (edges iff
/// `o(st) ≠ 2`, including `∞`): the irreducible factors of `(W_t, t)`.
pub fn irreducible_components(d: &CoxeterDiagram, t: Subset) -> Vec<Subset> {
    components_by(t, |i, j| d.order(i, j) != Order::Finite(2))
}

fn components_by(t: Subset, adjacent: impl Fn(usize, usize) -> bool) -> Vec<Subset> {
    let mut out = Vec::new();
    let mut seen = Subset::EMPTY;
    for start in t.iter() {
        if seen.contains(start) {
            continue;
        }
        let mut comp = Subset::singleton(start);
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in t.iter() {
                if !comp.contains(j) && adjacent(i, j) {
                    comp.insert(j);
                    stack.push(j);
                }
            }
        }
        seen = seen.union(comp);
        out.push(comp);
    }
    out
}

/// True iff `t` is connected in the nerve convention (∅ counts as connected).
pub fn is_connected(d: &CoxeterDiagram, t: Subset) -> bool {
    components(d, t).len() <= 1
}

/// `t⊥`: generators commuting with every member of `t`. Members of `t`
/// exclude themselves automatically because `o(ss) = 1 ≠ 2`.
pub fn perp(d: &CoxeterDiagram, t: Subset) -> Subset {
    let mut out = Subset::EMPTY;
    for s in 0..d.rank() {
        if t.iter().all(|u| d.order(s, u) == Order::Finite(2)) {
            out.insert(s);
        }
    }
    out
}

/// σ/ν decomposition of `u`: σ is the union of the finite-type irreducible
/// components of `u`, ν the union of the infinite-type ones.
pub fn sigma_nu_split(d: &CoxeterDiagram, u: Subset) -> SigmaNuSplit {
    let mut sigma = Subset::EMPTY;
    let mut nu = Subset::EMPTY;
    for comp in irreducible_components(d, u) {
        if sphericity::is_spherical(d, comp) {
            sigma = sigma.union(comp);
        } else {
            nu = nu.union(comp);
        }
    }
    SigmaNuSplit { sigma, nu }
}

/// True iff `u` is a spherical-product subset: nonempty and contained in
/// `σ ∪ σ⊥` for some nonempty spherical `σ`.
///
/// When `u_σ ≠ ∅` the witness `σ = u_σ` always works (distinct irreducible
/// components commute, so `u_ν ⊆ u_σ⊥`). When `u_σ = ∅` any witness must be
/// disjoint from `u`, so a single external generator commuting with all of
/// `u` decides the question.
pub fn is_spherical_product(d: &CoxeterDiagram, u: Subset) -> bool {
    if u.is_empty() {
        return false;
    }
    let split = sigma_nu_split(d, u);
    if !split.sigma.is_empty() {
        return true;
    }
    !perp(d, u).minus(u).is_empty()
}

// ---------------------------------------------------------------------------
// JSON file format
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramDoc {
    generators: Vec<String>,
    #[serde(default)]
    orders: Vec<(String, String, u32)>,
    #[serde(default)]
    infinite: Vec<(String, String)>,
    #[serde(default)]
    note: Option<String>,
}

#[derive(Serialize)]
struct DiagramDocOut<'a> {
    generators: &'a [String],
    orders: Vec<(&'a str, &'a str, u32)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

/// Parse a diagram from its JSON document form.
///
/// The format is `{"generators": [names…], "orders": [[name, name, m]…]}`
/// with `m ≥ 2`; omitted pairs mean `∞`. An optional `"infinite"` list is
/// accepted and must not conflict with `"orders"`; an optional `"note"`
/// string carries free-form commentary.
pub fn parse_diagram(text: &str) -> Result<CoxeterDiagram> {
    let doc: DiagramDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let d = CoxeterDiagram::new(doc.generators, &doc.orders)?;
    for (a, b) in &doc.infinite {
        let (i, j) = (d.require(a)?, d.require(b)?);
        if i == j {
            return Err(Error::Parse(format!("self-edge on generator '{a}'")));
        }
        if d.orders[i][j] != Order::Inf {
            return Err(Error::Parse(format!(
                "pair ('{a}','{b}') is listed both with a finite order and as infinite"
            )));
        }
    }
    Ok(d)
}

/// Parse a diagram document and also return its `"note"` field.
pub fn parse_diagram_with_note(text: &str) -> Result<(CoxeterDiagram, Option<String>)> {
    let doc: DiagramDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let note = doc.note.clone();
    let d = parse_diagram(text)?;
    Ok((d, note))
}

/// Serialize a diagram back to the JSON document form (finite bonds sorted
/// by index pair; `∞` pairs omitted).
pub fn serialize_diagram(d: &CoxeterDiagram, note: Option<&str>) -> String {
    let mut orders = Vec::new();
    for i in 0..d.rank() {
        for j in (i + 1)..d.rank() {
            if let Order::Finite(m) = d.order(i, j) {
                orders.push((d.name(i), d.name(j), m));
            }
        }
    }
    let doc = DiagramDocOut {
        generators: d.names(),
        orders,
        note,
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("diagram serialization cannot fail");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagram(names: &[&str], bonds: &[(&str, &str, u32)]) -> CoxeterDiagram {
        CoxeterDiagram::new(
            names.iter().map(|s| s.to_string()).collect(),
            &bonds
                .iter()
                .map(|(a, b, m)| (a.to_string(), b.to_string(), *m))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    /// The six-bond commutation diagram on {a, b1, b2, b3, c}: every `b_i`
    /// bonds to both `a` and `c` with order 2, `o(ac) = ∞`.
    fn theta_diagram() -> CoxeterDiagram {
        diagram(
            &["a", "b1", "b2", "b3", "c"],
            &[
                ("a", "b1", 2),
                ("a", "b2", 2),
                ("a", "b3", 2),
                ("b1", "c", 2),
                ("b2", "c", 2),
                ("b3", "c", 2),
            ],
        )
    }

    #[test]
    fn parse_rejects_malformed_documents() {
        assert!(matches!(
            parse_diagram(r#"{"generators": ["a", "a"]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_diagram(r#"{"generators": ["a"], "orders": [["a", "a", 3]]}"#),
            Err(Error::Parse(msg)) if msg.contains("self-edge")
        ));
        assert!(matches!(
            parse_diagram(r#"{"generators": ["a", "b"], "orders": [["a", "b", 1]]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_diagram(r#"{"generators": ["a", "b"], "orders": [["a", "x", 3]]}"#),
            Err(Error::Parse(msg)) if msg.contains('x')
        ));
        assert!(matches!(
            parse_diagram(
                r#"{"generators": ["a", "b"], "orders": [["a", "b", 3]],
                    "infinite": [["b", "a"]]}"#
            ),
            Err(Error::Parse(_))
        ));
        assert!(parse_diagram("").is_err());
    }

    #[test]
    fn parse_minimal_and_roundtrip() {
        let d = parse_diagram(r#"{"generators": ["s"]}"#).unwrap();
        assert_eq!(d.rank(), 1);

        let d = theta_diagram();
        let text = serialize_diagram(&d, Some("roundtrip"));
        let (d2, note) = parse_diagram_with_note(&text).unwrap();
        assert_eq!(d, d2);
        assert_eq!(note.as_deref(), Some("roundtrip"));
    }

    #[test]
    fn components_use_finite_edges_only() {
        let d = theta_diagram();
        let t = d.full().minus(d.subset(&["a"]).unwrap());
        assert_eq!(components(&d, t), vec![t]);

        // Tripod legs with the hub removed fall apart into singletons.
        let tripod = diagram(
            &["x", "y", "z", "a1"],
            &[("x", "a1", 3), ("y", "a1", 3), ("z", "a1", 3)],
        );
        let legs = tripod.subset(&["x", "y", "z"]).unwrap();
        assert_eq!(components(&tripod, legs).len(), 3);
        assert!(components(&tripod, Subset::EMPTY).is_empty());
    }

    #[test]
    fn merging_components_always_crosses_an_infinite_bond() {
        let d = theta_diagram();
        let t = d.subset(&["a", "c"]).unwrap();
        let comps = components(&d, t);
        assert_eq!(comps.len(), 2);
        for (k, c1) in comps.iter().enumerate() {
            for c2 in &comps[k + 1..] {
                let crossing_infinite = c1
                    .iter()
                    .any(|i| c2.iter().any(|j| !d.order(i, j).is_finite()));
                assert!(crossing_infinite);
            }
        }
    }

    #[test]
    fn perp_scans_commuting_generators() {
        let d = theta_diagram();
        assert_eq!(perp(&d, Subset::EMPTY), d.full());
        assert_eq!(
            perp(&d, d.subset(&["a"]).unwrap()),
            d.subset(&["b1", "b2", "b3"]).unwrap()
        );
        // The b's are pairwise unbonded (infinite), so only a and c commute
        // with b1.
        assert_eq!(
            perp(&d, d.subset(&["b1"]).unwrap()),
            d.subset(&["a", "c"]).unwrap()
        );
        // Members of t never qualify: o(ss) = 1.
        assert!(!perp(&d, d.subset(&["a"]).unwrap()).contains(0));
    }

    #[test]
    fn sigma_nu_split_follows_irreducible_factors() {
        let d = theta_diagram();
        let u = d.subset(&["a", "b1"]).unwrap();
        let split = sigma_nu_split(&d, u);
        assert_eq!(split.sigma, u);
        assert!(split.nu.is_empty());

        // {a, c} has o(ac) = ∞: a single infinite-type irreducible factor.
        let u = d.subset(&["a", "c"]).unwrap();
        let split = sigma_nu_split(&d, u);
        assert!(split.sigma.is_empty());
        assert_eq!(split.nu, u);

        assert_eq!(
            sigma_nu_split(&d, Subset::EMPTY),
            SigmaNuSplit {
                sigma: Subset::EMPTY,
                nu: Subset::EMPTY
            }
        );
    }

    #[test]
    fn sigma_and_nu_commute_elementwise() {
        let d = diagram(
            &["a1", "a2", "a3", "a4"],
            &[
                ("a1", "a2", 3),
                ("a1", "a3", 2),
                ("a1", "a4", 2),
                ("a2", "a3", 2),
                ("a2", "a4", 2),
            ],
        );
        let split = sigma_nu_split(&d, d.full());
        assert_eq!(split.sigma, d.subset(&["a1", "a2"]).unwrap());
        assert_eq!(split.nu, d.subset(&["a3", "a4"]).unwrap());
        for s in split.sigma.iter() {
            for n in split.nu.iter() {
                assert_eq!(d.order(s, n), Order::Finite(2));
            }
        }
    }

    #[test]
    fn spherical_product_recognition() {
        let d = theta_diagram();
        assert!(!is_spherical_product(&d, Subset::EMPTY));
        // {a, c}: σ = ∅ but every b_i commutes with both members.
        assert!(is_spherical_product(&d, d.subset(&["a", "c"]).unwrap()));
        // Whenever true, the constructed witness works literally.
        for mask in 1..(1u32 << d.rank()) {
            let u = Subset(mask);
            if !is_spherical_product(&d, u) {
                continue;
            }
            let split = sigma_nu_split(&d, u);
            let sigma = if split.sigma.is_empty() {
                Subset::singleton(perp(&d, u).minus(u).min_member().unwrap())
            } else {
                split.sigma
            };
            assert!(!sigma.is_empty());
            assert!(u.is_subset_of(sigma.union(perp(&d, sigma))));
        }

        let far = diagram(&["s", "t"], &[]);
        assert!(!is_spherical_product(&far, far.full()));
    }

    #[test]
    fn restrict_preserves_orders() {
        let d = theta_diagram();
        let t = d.subset(&["a", "b2", "c"]).unwrap();
        let (sub, back) = d.restrict(t);
        assert_eq!(sub.rank(), 3);
        assert_eq!(sub.names(), &["a", "b2", "c"]);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(sub.order(i, j), d.order(back[i], back[j]));
            }
        }
    }
}
