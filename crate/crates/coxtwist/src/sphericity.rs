//! Finiteness of standard subgroups and the longest-element automorphism.
//!
//! A subset `T` is *spherical* when the standard subgroup `W_T` is finite,
//! which the classification of finite Coxeter groups reduces to shape
//! matching: every irreducible factor of `(W_T, T)` must be one of
//! `A_n`, `B_n`, `D_n`, `E6/E7/E8`, `F4`, `H3/H4`, `I2(m)`.
//!
//! Irreducibility splits along *commuting* parts, so recognition works on
//! the components of [`irreducible_components`] (order ≠ 2 edges), not on
//! the nerve components used everywhere else in this crate. This is the
//! subtlest convention switch in the crate: a figure-level triangle with
//! labels (3, 3, 2) is a single nerve component but its commutation skeleton
//! is the path `a1–b1–a2`, i.e. type `A3`.
//!
//! For spherical `T` the longest element `w_T` conjugates `T` to itself and
//! induces the involutive diagram automorphism `ω_T` returned by
//! [`longest_automorphism`]. The table entries for the `A/B/D/I2` families
//! are cross-checked against brute-force models in [`crate::oracle`]; the
//! `E6/E7/E8/F4/H3/H4` entries are classical table data trusted as such
//! (no small permutation model is built for them).

use std::fmt;

use crate::diagram::{irreducible_components, CoxeterDiagram, Order, Subset};
use crate::error::{Error, Result};

/// Families of irreducible finite Coxeter groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    D,
    E6,
    E7,
    E8,
    F4,
    H3,
    H4,
    I2,
}

/// The type of one irreducible finite factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IrreducibleType {
    /// Classification family.
    pub family: Family,
    /// Number of generators.
    pub rank: usize,
    /// Dihedral label, present only for `I2(m)` (`m ≥ 3`).
    pub m: Option<u32>,
}

impl fmt::Display for IrreducibleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::A => write!(f, "A{}", self.rank),
            Family::B => write!(f, "B{}", self.rank),
            Family::D => write!(f, "D{}", self.rank),
            Family::E6 => write!(f, "E6"),
            Family::E7 => write!(f, "E7"),
            Family::E8 => write!(f, "E8"),
            Family::F4 => write!(f, "F4"),
            Family::H3 => write!(f, "H3"),
            Family::H4 => write!(f, "H4"),
            Family::I2 => write!(f, "I2({})", self.m.unwrap_or(0)),
        }
    }
}

/// One recognized irreducible factor: its type plus the generators in a
/// canonical layout order (see [`recognize`] for the per-family layouts).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedComponent {
    /// Recognized type.
    pub itype: IrreducibleType,
    /// Generators in layout order. `A_n`/`B_n`/`F4`/`H3`/`H4`: path order
    /// (the labeled end first for B/F/H); `D_n`: the two fork leaves, the
    /// fork vertex, then the tail; `E6/E7/E8`: the spine in path order
    /// followed by the short-arm leaf; `I2`: ascending index.
    pub ordered: Vec<usize>,
}

impl TypedComponent {
    /// The component members as a subset.
    pub fn members(&self) -> Subset {
        self.ordered.iter().copied().collect()
    }
}

fn itype(family: Family, rank: usize, m: Option<u32>) -> IrreducibleType {
    IrreducibleType { family, rank, m }
}

/// Classify one commutation-connected component; `None` if not finite type.
fn classify(d: &CoxeterDiagram, comp: Subset) -> Option<TypedComponent> {
    let verts: Vec<usize> = comp.iter().collect();
    let n = verts.len();
    if n == 1 {
        return Some(TypedComponent {
            itype: itype(Family::A, 1, None),
            ordered: verts,
        });
    }
    // Any infinite bond inside the component rules out finite type.
    let mut edges = Vec::new();
    for (a, &i) in verts.iter().enumerate() {
        for &j in &verts[a + 1..] {
            match d.order(i, j) {
                Order::Inf => return None,
                Order::Finite(2) => {}
                Order::Finite(m) => edges.push((i, j, m)),
            }
        }
    }
    if n == 2 {
        let (_, _, m) = edges[0];
        return Some(TypedComponent {
            itype: itype(Family::I2, 2, Some(m)),
            ordered: verts,
        });
    }
    // Rank ≥ 3: the skeleton must be a tree (connected is given).
    if edges.len() != n - 1 {
        return None;
    }
    let degree = |v: usize| edges.iter().filter(|(i, j, _)| *i == v || *j == v).count();
    let neighbors = |v: usize| -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = edges
            .iter()
            .filter_map(|&(i, j, m)| {
                if i == v {
                    Some((j, m))
                } else if j == v {
                    Some((i, m))
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    };
    let branch: Vec<usize> = verts.iter().copied().filter(|&v| degree(v) >= 3).collect();
    if branch.len() > 1 || verts.iter().any(|&v| degree(v) >= 4) {
        return None;
    }

    if branch.is_empty() {
        // Path. Walk it from the smaller-index endpoint.
        let ends: Vec<usize> = verts.iter().copied().filter(|&v| degree(v) == 1).collect();
        debug_assert_eq!(ends.len(), 2);
        let walk = |start: usize| -> (Vec<usize>, Vec<u32>) {
            let mut order = vec![start];
            let mut labels = Vec::new();
            let mut prev = None;
            let mut cur = start;
            for _ in 1..n {
                let (next, m) = neighbors(cur)
                    .into_iter()
                    .find(|&(w, _)| Some(w) != prev)
                    .expect("path vertex has a fresh neighbor");
                labels.push(m);
                order.push(next);
                prev = Some(cur);
                cur = next;
            }
            (order, labels)
        };
        let (order, labels) = walk(ends[0].min(ends[1]));
        let all3 = labels.iter().all(|&m| m == 3);
        if all3 {
            return Some(TypedComponent {
                itype: itype(Family::A, n, None),
                ordered: order,
            });
        }
        // A single non-3 label; orient the path so it comes first.
        let heavy: Vec<usize> = (0..labels.len()).filter(|&k| labels[k] != 3).collect();
        if heavy.len() != 1 {
            return None;
        }
        let k = heavy[0];
        let m = labels[k];
        let fam = match (m, n) {
            (4, _) if k == 0 || k == n - 2 => Some(Family::B),
            (4, 4) if k == 1 => Some(Family::F4),
            (5, 3) if k == 0 || k == 1 => Some(Family::H3),
            (5, 4) if k == 0 || k == n - 2 => Some(Family::H4),
            _ => None,
        }?;
        let oriented = if k == 0 {
            order
        } else if k == n - 2 {
            order.into_iter().rev().collect()
        } else {
            // F4 keeps its 4 in the middle; normalize to the walked direction.
            order
        };
        return Some(TypedComponent {
            itype: itype(fam, n, None),
            ordered: oriented,
        });
    }

    // Exactly one fork: D or E shapes, all labels 3.
    if edges.iter().any(|&(_, _, m)| m != 3) {
        return None;
    }
    let b = branch[0];
    let mut arms: Vec<Vec<usize>> = Vec::new();
    for (first, _) in neighbors(b) {
        let mut arm = vec![first];
        let mut prev = b;
        let mut cur = first;
        while let Some((next, _)) = neighbors(cur).into_iter().find(|&(w, _)| w != prev) {
            arm.push(next);
            prev = cur;
            cur = next;
        }
        arms.push(arm);
    }
    arms.sort_by_key(|a| (a.len(), a[0]));
    let lens: Vec<usize> = arms.iter().map(|a| a.len()).collect();
    match lens.as_slice() {
        [1, 1, _] => {
            // D_n: two unit arms are the fork leaves, the long arm the tail.
            let mut ordered = vec![arms[0][0], arms[1][0], b];
            ordered.extend(&arms[2]);
            Some(TypedComponent {
                itype: itype(Family::D, n, None),
                ordered,
            })
        }
        [1, 2, 2] => {
            // E6: spine = one long arm reversed, fork, other long arm.
            let mut ordered: Vec<usize> = arms[1].iter().rev().copied().collect();
            ordered.push(b);
            ordered.extend(&arms[2]);
            ordered.push(arms[0][0]);
            Some(TypedComponent {
                itype: itype(Family::E6, 6, None),
                ordered,
            })
        }
        [1, 2, 3] | [1, 2, 4] => {
            let fam = if n == 7 { Family::E7 } else { Family::E8 };
            let mut ordered: Vec<usize> = arms[1].iter().rev().copied().collect();
            ordered.push(b);
            ordered.extend(&arms[2]);
            ordered.push(arms[0][0]);
            Some(TypedComponent {
                itype: itype(fam, n, None),
                ordered,
            })
        }
        _ => None,
    }
}

/// Recognize `T` as a product of finite-type irreducible factors.
///
/// Returns one [`TypedComponent`] per commutation component (ordered by
/// smallest member), or `None` as soon as any component fails to match a
/// finite-type shape. `T = ∅` yields `Some(vec![])`: the trivial group.
pub fn recognize(d: &CoxeterDiagram, t: Subset) -> Option<Vec<TypedComponent>> {
    irreducible_components(d, t)
        .into_iter()
        .map(|comp| classify(d, comp))
        .collect()
}

/// True iff `W_T` is finite.
pub fn is_spherical(d: &CoxeterDiagram, t: Subset) -> bool {
    recognize(d, t).is_some()
}

/// The diagram automorphism of a spherical subset induced by conjugation
/// with its longest element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LongestAutomorphism {
    /// The spherical subset acted on.
    pub subset: Subset,
    /// Pairs `(generator, image)`, sorted by source index, covering every
    /// member of `subset`.
    pub mapping: Vec<(usize, usize)>,
}

impl LongestAutomorphism {
    /// Image of a single member.
    pub fn apply(&self, i: usize) -> usize {
        self.mapping
            .iter()
            .find(|(s, _)| *s == i)
            .map(|(_, t)| *t)
            .expect("generator belongs to the automorphism's subset")
    }

    /// Image of a subset of the domain.
    pub fn image(&self, s: Subset) -> Subset {
        s.iter().map(|i| self.apply(i)).collect()
    }

    /// True iff every generator is fixed.
    pub fn is_identity(&self) -> bool {
        self.mapping.iter().all(|(s, t)| s == t)
    }
}

/// Compute `ω_T` for spherical `T` from the classical table:
/// `A_n` → path reversal; `B_n`, `E7`, `E8`, `F4`, `H3`, `H4`, `I2(even)` →
/// identity; `D_n` → swap the fork leaves iff `n` is odd; `E6` → the
/// nontrivial involution; `I2(odd)` → swap; `A1` → identity.
///
/// The result is checked to be an involution and a label-preserving
/// automorphism before it is returned.
pub fn longest_automorphism(d: &CoxeterDiagram, t: Subset) -> Result<LongestAutomorphism> {
    let comps = recognize(d, t).ok_or_else(|| {
        Error::Domain(format!(
            "longest_automorphism requires a spherical subset; {} is not",
            d.label_of(t)
        ))
    })?;
    let mut mapping = Vec::new();
    for comp in &comps {
        let o = &comp.ordered;
        let n = o.len();
        match comp.itype.family {
            Family::A => {
                for k in 0..n {
                    mapping.push((o[k], o[n - 1 - k]));
                }
            }
            Family::I2 => {
                let m = comp.itype.m.expect("I2 carries its label");
                if m % 2 == 1 {
                    mapping.push((o[0], o[1]));
                    mapping.push((o[1], o[0]));
                } else {
                    mapping.push((o[0], o[0]));
                    mapping.push((o[1], o[1]));
                }
            }
            Family::D => {
                if n % 2 == 1 {
                    mapping.push((o[0], o[1]));
                    mapping.push((o[1], o[0]));
                    for &v in &o[2..] {
                        mapping.push((v, v));
                    }
                } else {
                    for &v in o {
                        mapping.push((v, v));
                    }
                }
            }
            Family::E6 => {
                // Spine reversal fixing the middle and the short-arm leaf.
                for k in 0..5 {
                    mapping.push((o[k], o[4 - k]));
                }
                mapping.push((o[5], o[5]));
            }
            Family::B | Family::E7 | Family::E8 | Family::F4 | Family::H3 | Family::H4 => {
                for &v in o {
                    mapping.push((v, v));
                }
            }
        }
    }
    mapping.sort_unstable();
    let auto = LongestAutomorphism { subset: t, mapping };
    // Involution + label preservation, asserted per call.
    for &(s, img) in &auto.mapping {
        if auto.apply(img) != s {
            return Err(Error::Invariant(format!(
                "ω on {} is not an involution",
                d.label_of(t)
            )));
        }
        for &(s2, img2) in &auto.mapping {
            if d.order(s, s2) != d.order(img, img2) {
                return Err(Error::Invariant(format!(
                    "ω on {} does not preserve orders",
                    d.label_of(t)
                )));
            }
        }
    }
    Ok(auto)
}

/// All spherical subsets (up to `bound` members if given), each flagged as
/// maximal or not; sorted by size then bitmask.
///
/// Sphericality is hereditary — every subset of a spherical set is
/// spherical — so a sorted-extension search visits exactly the spherical
/// sets plus one failed extension each, and maximality reduces to checking
/// single-generator extensions.
pub fn spherical_subsets(d: &CoxeterDiagram, bound: Option<usize>) -> Vec<(Subset, bool)> {
    let rank = d.rank();
    let cap = bound.unwrap_or(rank);
    let mut found = Vec::new();
    let mut stack = vec![(Subset::EMPTY, 0usize)];
    while let Some((t, next)) = stack.pop() {
        found.push(t);
        if t.len() >= cap {
            continue;
        }
        for i in next..rank {
            let mut ext = t;
            ext.insert(i);
            if is_spherical(d, ext) {
                stack.push((ext, i + 1));
            }
        }
    }
    found.sort_unstable_by_key(|t| (t.len(), *t));
    found
        .into_iter()
        .map(|t| {
            let maximal = (0..rank).all(|i| {
                if t.contains(i) {
                    return true;
                }
                let mut ext = t;
                ext.insert(i);
                !is_spherical(d, ext)
            });
            (t, maximal)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_diagram;

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

    /// Classical-diagram builder: unlisted pairs commute (label 2), as in
    /// the usual drawing of a finite-type diagram. (The crate's default
    /// leaves unlisted pairs unbonded, i.e. infinite.)
    fn classical(names: &[&str], bonds: &[(&str, &str, u32)]) -> CoxeterDiagram {
        let mut all: Vec<(String, String, u32)> = bonds
            .iter()
            .map(|(a, b, m)| (a.to_string(), b.to_string(), *m))
            .collect();
        for (i, a) in names.iter().enumerate() {
            for b in &names[i + 1..] {
                let listed = bonds
                    .iter()
                    .any(|(x, y, _)| (x == a && y == b) || (x == b && y == a));
                if !listed {
                    all.push((a.to_string(), b.to_string(), 2));
                }
            }
        }
        CoxeterDiagram::new(names.iter().map(|s| s.to_string()).collect(), &all).unwrap()
    }

    fn types_of(d: &CoxeterDiagram, t: Subset) -> Vec<String> {
        recognize(d, t)
            .map(|cs| cs.iter().map(|c| c.itype.to_string()).collect())
            .unwrap_or_default()
    }

    #[test]
    fn recognizes_paths() {
        let d = classical(&["s1", "s2", "s3"], &[("s1", "s2", 3), ("s2", "s3", 3)]);
        assert_eq!(types_of(&d, d.full()), vec!["A3"]);

        let b4 = classical(
            &["s1", "s2", "s3", "s4"],
            &[("s1", "s2", 4), ("s2", "s3", 3), ("s3", "s4", 3)],
        );
        assert_eq!(types_of(&b4, b4.full()), vec!["B4"]);
        let comps = recognize(&b4, b4.full()).unwrap();
        assert_eq!(comps[0].ordered, vec![0, 1, 2, 3]);

        let f4 = classical(
            &["s1", "s2", "s3", "s4"],
            &[("s1", "s2", 3), ("s2", "s3", 4), ("s3", "s4", 3)],
        );
        assert_eq!(types_of(&f4, f4.full()), vec!["F4"]);

        let h3 = classical(&["s1", "s2", "s3"], &[("s1", "s2", 5), ("s2", "s3", 3)]);
        assert_eq!(types_of(&h3, h3.full()), vec!["H3"]);
        let h4 = classical(
            &["s1", "s2", "s3", "s4"],
            &[("s1", "s2", 3), ("s2", "s3", 3), ("s3", "s4", 5)],
        );
        let comps = recognize(&h4, h4.full()).unwrap();
        assert_eq!(comps[0].itype.to_string(), "H4");
        assert_eq!(comps[0].ordered, vec![3, 2, 1, 0]);
    }

    #[test]
    fn recognizes_forks() {
        let d4 = classical(
            &["u", "v", "b", "t"],
            &[("u", "b", 3), ("v", "b", 3), ("t", "b", 3)],
        );
        assert_eq!(types_of(&d4, d4.full()), vec!["D4"]);

        let d5 = classical(
            &["u", "v", "b", "t1", "t2"],
            &[("u", "b", 3), ("v", "b", 3), ("b", "t1", 3), ("t1", "t2", 3)],
        );
        let comps = recognize(&d5, d5.full()).unwrap();
        assert_eq!(comps[0].itype.to_string(), "D5");
        assert_eq!(comps[0].ordered, vec![0, 1, 2, 3, 4]);

        let e6 = classical(
            &["p1", "p2", "p3", "p4", "p5", "q"],
            &[
                ("p1", "p2", 3),
                ("p2", "p3", 3),
                ("p3", "p4", 3),
                ("p4", "p5", 3),
                ("p3", "q", 3),
            ],
        );
        assert_eq!(types_of(&e6, e6.full()), vec!["E6"]);

        let e8 = classical(
            &["p1", "p2", "p3", "p4", "p5", "p6", "p7", "q"],
            &[
                ("p1", "p2", 3),
                ("p2", "p3", 3),
                ("p3", "p4", 3),
                ("p4", "p5", 3),
                ("p5", "p6", 3),
                ("p6", "p7", 3),
                ("p3", "q", 3),
            ],
        );
        assert_eq!(types_of(&e8, e8.full()), vec!["E8"]);
    }

    #[test]
    fn rejects_non_finite_shapes() {
        // Affine square (4-cycle of 3s).
        let square = classical(
            &["a", "b", "c", "d"],
            &[("a", "b", 3), ("b", "c", 3), ("c", "d", 3), ("d", "a", 3)],
        );
        assert!(recognize(&square, square.full()).is_none());
        // Infinite bond.
        let inf = diagram(&["a", "b"], &[]);
        assert!(recognize(&inf, inf.full()).is_none());
        // Two heavy labels on one path.
        let cc = classical(
            &["a", "b", "c"],
            &[("a", "b", 4), ("b", "c", 4)],
        );
        assert!(recognize(&cc, cc.full()).is_none());
        // Heavy label at a fork.
        let bad_fork = classical(
            &["u", "v", "b", "t"],
            &[("u", "b", 3), ("v", "b", 4), ("t", "b", 3)],
        );
        assert!(recognize(&bad_fork, bad_fork.full()).is_none());
        // 5 in the middle of a rank-4 path is not H4.
        let bad_h = classical(
            &["a", "b", "c", "d"],
            &[("a", "b", 3), ("b", "c", 5), ("c", "d", 3)],
        );
        assert!(recognize(&bad_h, bad_h.full()).is_none());
        // (2,2,2) arms would be affine E6.
        let affine_e6 = classical(
            &["a1", "a2", "b1", "b2", "c1", "c2", "z"],
            &[
                ("z", "a1", 3),
                ("a1", "a2", 3),
                ("z", "b1", 3),
                ("b1", "b2", 3),
                ("z", "c1", 3),
                ("c1", "c2", 3),
            ],
        );
        assert!(recognize(&affine_e6, affine_e6.full()).is_none());
    }

    #[test]
    fn label_two_edges_split_factors() {
        // Triangle (3,3,2): the 2-bond is a non-edge for recognition, so the
        // component skeleton is the path a1–b1–a2, i.e. A3.
        let d = diagram(
            &["a1", "b1", "a2"],
            &[("a1", "b1", 3), ("b1", "a2", 3), ("a1", "a2", 2)],
        );
        assert_eq!(types_of(&d, d.full()), vec!["A3"]);

        // Two commuting bonds: a product of two I2(3) factors.
        let d = diagram(
            &["a", "b", "c", "d"],
            &[
                ("a", "b", 3),
                ("c", "d", 3),
                ("a", "c", 2),
                ("a", "d", 2),
                ("b", "c", 2),
                ("b", "d", 2),
            ],
        );
        assert_eq!(types_of(&d, d.full()), vec!["I2(3)", "I2(3)"]);
    }

    #[test]
    fn sphericality_basics() {
        let d = diagram(&["a", "b"], &[("a", "b", 7)]);
        assert!(is_spherical(&d, Subset::EMPTY));
        assert!(is_spherical(&d, d.full()));
        let inf = diagram(&["a", "b"], &[]);
        assert!(!is_spherical(&inf, inf.full()));
    }

    #[test]
    fn omega_table_entries() {
        // A3 path reverses.
        let d = diagram(
            &["a1", "b1", "a2"],
            &[("a1", "b1", 3), ("b1", "a2", 3), ("a1", "a2", 2)],
        );
        let w = longest_automorphism(&d, d.full()).unwrap();
        assert_eq!(w.mapping, vec![(0, 2), (1, 1), (2, 0)]);

        // I2(3) swaps, I2(4) does not.
        let i3 = diagram(&["a1", "b1"], &[("a1", "b1", 3)]);
        assert!(!longest_automorphism(&i3, i3.full()).unwrap().is_identity());
        let i4 = diagram(&["a1", "b1"], &[("a1", "b1", 4)]);
        assert!(longest_automorphism(&i4, i4.full()).unwrap().is_identity());

        // B3 fixes everything.
        let b3 = classical(&["s1", "s2", "s3"], &[("s1", "s2", 4), ("s2", "s3", 3)]);
        assert!(longest_automorphism(&b3, b3.full()).unwrap().is_identity());

        // D4 identity, D5 swaps the fork leaves.
        let d5 = classical(
            &["u", "v", "b", "t1", "t2"],
            &[("u", "b", 3), ("v", "b", 3), ("b", "t1", 3), ("t1", "t2", 3)],
        );
        let w = longest_automorphism(&d5, d5.full()).unwrap();
        assert_eq!(w.apply(0), 1);
        assert_eq!(w.apply(2), 2);

        // E6 reverses its spine.
        let e6 = classical(
            &["p1", "p2", "p3", "p4", "p5", "q"],
            &[
                ("p1", "p2", 3),
                ("p2", "p3", 3),
                ("p3", "p4", 3),
                ("p4", "p5", 3),
                ("p3", "q", 3),
            ],
        );
        let w = longest_automorphism(&e6, e6.full()).unwrap();
        assert_eq!(w.apply(0), 4);
        assert_eq!(w.apply(1), 3);
        assert_eq!(w.apply(5), 5);
        assert!(!w.is_identity());

        // Non-spherical input is a domain error.
        let inf = diagram(&["a", "b"], &[]);
        assert!(longest_automorphism(&inf, inf.full()).is_err());
    }

    #[test]
    fn omega_is_involutive_automorphism_on_products() {
        let d = classical(
            &["a", "b", "c", "d", "e"],
            &[
                ("a", "b", 3),
                ("b", "c", 3),
                ("d", "e", 5),
                ("a", "d", 2),
                ("a", "e", 2),
                ("b", "d", 2),
                ("b", "e", 2),
                ("c", "d", 2),
                ("c", "e", 2),
            ],
        );
        let w = longest_automorphism(&d, d.full()).unwrap();
        for &(s, img) in &w.mapping {
            assert_eq!(w.apply(img), s);
            for &(s2, img2) in &w.mapping {
                assert_eq!(d.order(s, s2), d.order(img, img2));
            }
        }
        // ω maps spherical subsets to spherical subsets of the same size.
        for mask in 0..(1u32 << d.rank()) {
            let t = Subset(mask);
            if t.is_subset_of(d.full()) && is_spherical(&d, t) {
                let img = w.image(t);
                assert_eq!(img.len(), t.len());
                assert!(is_spherical(&d, img));
            }
        }
    }

    #[test]
    fn spherical_subset_enumeration() {
        let single = parse_diagram(r#"{"generators": ["s"]}"#).unwrap();
        let subs = spherical_subsets(&single, None);
        assert_eq!(
            subs,
            vec![(Subset::EMPTY, false), (Subset::singleton(0), true)]
        );

        // In the six-bond commutation diagram on {a,b1,b2,b3,c} the maximal
        // spherical subsets are exactly the six bonds.
        let theta = diagram(
            &["a", "b1", "b2", "b3", "c"],
            &[
                ("a", "b1", 2),
                ("a", "b2", 2),
                ("a", "b3", 2),
                ("b1", "c", 2),
                ("b2", "c", 2),
                ("b3", "c", 2),
            ],
        );
        let maximal: Vec<Subset> = spherical_subsets(&theta, None)
            .into_iter()
            .filter_map(|(t, max)| max.then_some(t))
            .collect();
        let expect: Vec<Subset> = [
            ["a", "b1"],
            ["a", "b2"],
            ["a", "b3"],
            ["b1", "c"],
            ["b2", "c"],
            ["b3", "c"],
        ]
        .iter()
        .map(|pair| theta.subset(&pair[..]).unwrap())
        .collect();
        assert_eq!(maximal.len(), 6);
        for e in expect {
            assert!(maximal.contains(&e));
        }

        // Bound cuts off sizes; every subset of a spherical set is spherical.
        let bounded = spherical_subsets(&theta, Some(1));
        assert!(bounded.iter().all(|(t, _)| t.len() <= 1));
        for (t, _) in spherical_subsets(&theta, None) {
            for i in t.iter() {
                let mut smaller = t;
                smaller.remove(i);
                assert!(is_spherical(&theta, smaller));
            }
        }
    }

    #[test]
    fn recognition_ignores_names_and_order() {
        let d1 = diagram(&["x", "y", "z"], &[("x", "y", 3), ("y", "z", 3)]);
        let d2 = diagram(&["z", "y", "x"], &[("y", "x", 3), ("z", "y", 3)]);
        assert_eq!(types_of(&d1, d1.full()), types_of(&d2, d2.full()));
    }
}
