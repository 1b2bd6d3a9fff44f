//! Elementary diagram twists, twist orbits, and compatibility decisions.
//!
//! An elementary twist is defined by a separating spherical product `U`, a
//! split of the components of `S ∖ U` into two sides `X` and `Y`, and the
//! permutation `π` of `U` induced by the longest element of the spherical
//! part `U_σ` (identity on `U_ν`). The twisted diagram keeps `X ∪ U`
//! intact, reattaches each `y ∈ Y` to `π⁻¹`-permuted targets in `U`, and
//! renames `Y` with primes; vertex *indices* are stable, which is the
//! provenance record (vertex `i` of the output is vertex `i` of the input,
//! primed when it lies in `Y`). A move whose `π` fixes everything produces
//! the identical diagram and is pruned from search.
//!
//! [`twist_orbit`] explores all diagrams reachable by elementary twists up
//! to a depth, deduplicating by canonical form (see [`canonical_form`]),
//! optionally tracking a family of blocks that every move must preserve.
//! On top of the orbit sit three bounded decision procedures —
//! [`twist_equivalent`], [`type2_compatible`] and [`type12_compatible`] —
//! whose verdicts are `YES` with a replayable witness or `UNKNOWN`, never
//! `NO`: failure to find a witness at a fixed depth proves nothing.
//!
//! General twists with a caller-supplied permutation are accepted through
//! [`TwistMove::with_permutation`]; whether such a permutation is realized
//! by a group element is not decided, and only elementary moves are
//! auto-generated in searches.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

pub use crate::canon::{canonical_form, CanonicalForm};
use crate::canon::{canonical_form_colored, find_isomorphism_colored};
use crate::diagram::{components, is_connected, CoxeterDiagram, Order, Subset};
use crate::error::{Error, Result};
use crate::separation::{
    is_separation, separating_spherical_products, SeparationFamily,
};
use crate::sphericity::longest_automorphism;
use crate::standard::{standard_separation, StandardSeparation};

/// Default bound on distinct diagrams an orbit search may collect.
pub const DEFAULT_ORBIT_CAPACITY: usize = 4096;

/// One twist move against a fixed diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistMove {
    /// The separating spherical product being twisted across.
    pub u: Subset,
    /// The spherical set whose longest element induces `pi`: `U_σ` when
    /// nonempty, otherwise a single external commuting generator. Empty
    /// for caller-supplied general moves.
    pub sigma: Subset,
    /// The side kept intact.
    pub x: Subset,
    /// The side conjugated and primed.
    pub y: Subset,
    /// Permutation of `u` as `(source, image)` pairs sorted by source.
    pub pi: Vec<(usize, usize)>,
}

impl TwistMove {
    /// Build an elementary move: `π = ω_{U_σ}` on `U_σ`, identity on
    /// `U_ν`; when `U_σ = ∅`, `σ` is an external commuting generator and
    /// `π` is the identity. `y` must be a nonempty, proper union of
    /// components of `S ∖ U`.
    pub fn elementary(d: &CoxeterDiagram, u: Subset, y: Subset) -> Result<TwistMove> {
        let (x, _) = validate_sides(d, u, y)?;
        let split = crate::diagram::sigma_nu_split(d, u);
        let (sigma, pi) = if split.sigma.is_empty() {
            let witness = d
                .full()
                .minus(u)
                .iter()
                .find(|&t| u.is_subset_of(crate::diagram::perp(d, Subset::singleton(t))));
            match witness {
                Some(t) => (
                    Subset::singleton(t),
                    u.iter().map(|i| (i, i)).collect::<Vec<_>>(),
                ),
                None => {
                    return Err(Error::Domain(format!(
                        "{} is not a spherical product",
                        d.label_of(u)
                    )))
                }
            }
        } else {
            let omega = longest_automorphism(d, split.sigma)?;
            let mut pi: Vec<(usize, usize)> = u
                .iter()
                .map(|i| {
                    if split.sigma.contains(i) {
                        (i, omega.apply(i))
                    } else {
                        (i, i)
                    }
                })
                .collect();
            pi.sort_unstable();
            (split.sigma, pi)
        };
        Ok(TwistMove { u, sigma, x, y, pi })
    }

    /// Build a general move from a caller-supplied permutation of `U`,
    /// given as `(source, image)` pairs. The permutation must preserve the
    /// induced diagram on `U`; whether it is realized by a group element
    /// is the caller's claim and is not decided here.
    pub fn with_permutation(
        d: &CoxeterDiagram,
        u: Subset,
        y: Subset,
        pi: &[(usize, usize)],
    ) -> Result<TwistMove> {
        let (x, _) = validate_sides(d, u, y)?;
        if !crate::diagram::is_spherical_product(d, u) {
            return Err(Error::Domain(format!(
                "{} is not a spherical product",
                d.label_of(u)
            )));
        }
        let mut pi: Vec<(usize, usize)> = pi.to_vec();
        pi.sort_unstable();
        let sources: Subset = pi.iter().map(|&(s, _)| s).collect();
        let images: Subset = pi.iter().map(|&(_, t)| t).collect();
        if sources != u || images != u || pi.len() != u.len() {
            return Err(Error::Domain(
                "the supplied permutation is not a bijection of U".into(),
            ));
        }
        let apply = |i: usize| pi.iter().find(|&&(s, _)| s == i).unwrap().1;
        for a in u.iter() {
            for b in u.iter() {
                if a < b && d.order(apply(a), apply(b)) != d.order(a, b) {
                    return Err(Error::Domain(format!(
                        "the supplied permutation does not preserve the diagram on {}: \
                         it moves the ({}, {}) bond",
                        d.label_of(u),
                        d.name(a),
                        d.name(b)
                    )));
                }
            }
        }
        Ok(TwistMove {
            u,
            sigma: Subset::EMPTY,
            x,
            y,
            pi,
        })
    }

    /// Image of `i` under `π` (members of `U` only).
    pub fn pi_apply(&self, i: usize) -> usize {
        self.pi
            .iter()
            .find(|&&(s, _)| s == i)
            .map(|&(_, t)| t)
            .unwrap_or(i)
    }

    /// Preimage of `i` under `π`.
    pub fn pi_invert(&self, i: usize) -> usize {
        self.pi
            .iter()
            .find(|&&(_, t)| t == i)
            .map(|&(s, _)| s)
            .unwrap_or(i)
    }

    /// True iff `π` fixes `U` pointwise; such a move reproduces the input
    /// diagram exactly (only names change).
    pub fn is_trivial(&self) -> bool {
        self.pi.iter().all(|&(s, t)| s == t)
    }

    /// Where a block goes under the twist: unchanged inside `X ∪ U`,
    /// mapped through `π` (with `Y` indices kept, as primed vertices)
    /// inside `Y ∪ U`, `None` when it straddles the sides.
    pub fn map_subset(&self, a: Subset) -> Option<Subset> {
        if a.is_subset_of(self.x.union(self.u)) {
            Some(a)
        } else if a.is_subset_of(self.y.union(self.u)) {
            let mut out = a.inter(self.y);
            for i in a.inter(self.u).iter() {
                out.insert(self.pi_apply(i));
            }
            Some(out)
        } else {
            None
        }
    }

    /// Name-based record of this move against its source diagram.
    pub fn record(&self, d: &CoxeterDiagram) -> MoveRecord {
        MoveRecord {
            u: d.names_of(self.u).iter().map(|s| s.to_string()).collect(),
            sigma: d
                .names_of(self.sigma)
                .iter()
                .map(|s| s.to_string())
                .collect(),
            y: d.names_of(self.y).iter().map(|s| s.to_string()).collect(),
            pi: self
                .pi
                .iter()
                .map(|&(s, t)| (d.name(s).to_string(), d.name(t).to_string()))
                .collect(),
        }
    }
}

/// Shared side validation: `S` connected, `U ⊆ S`, `X ⊔ Y = S ∖ U` both
/// nonempty with no finite-order bond across. Returns `(x, components)`.
fn validate_sides(d: &CoxeterDiagram, u: Subset, y: Subset) -> Result<(Subset, Vec<Subset>)> {
    if !is_connected(d, d.full()) {
        return Err(Error::Domain(
            "twists are defined over a connected diagram".into(),
        ));
    }
    if !u.is_subset_of(d.full()) || !y.is_subset_of(d.full()) {
        return Err(Error::Domain("U and Y must be subsets of S".into()));
    }
    if !u.inter(y).is_empty() {
        return Err(Error::Domain("U and Y must be disjoint".into()));
    }
    let x = d.full().minus(u).minus(y);
    if x.is_empty() || y.is_empty() {
        return Err(Error::Domain(
            "X and Y must split S∖U into two nonempty sides".into(),
        ));
    }
    for a in x.iter() {
        for b in y.iter() {
            if let Order::Finite(_) = d.order(a, b) {
                return Err(Error::Domain(format!(
                    "a finite-order bond joins X and Y ({}, {})",
                    d.name(a),
                    d.name(b)
                )));
            }
        }
    }
    Ok((x, components(d, d.full().minus(u))))
}

/// Apply a twist move, producing the new diagram. Vertex indices are
/// stable: index `i` of the output is index `i` of the input, renamed with
/// a prime when it lies in `Y`. Orders within `X ∪ U` and within `Y` are
/// unchanged; for `y ∈ Y` and `u ∈ U` the new order is `o(y, π⁻¹(u))`;
/// orders across `X` and `Y` stay infinite.
pub fn apply_twist(d: &CoxeterDiagram, m: &TwistMove) -> Result<CoxeterDiagram> {
    // Re-validate against this diagram; the move may have been built
    // elsewhere.
    validate_sides(d, m.u, m.y)?;
    let n = d.rank();
    let mut names = d.names().to_vec();
    for i in m.y.iter() {
        let mut candidate = format!("{}'", names[i]);
        while names
            .iter()
            .enumerate()
            .any(|(j, nm)| j != i && *nm == candidate)
        {
            candidate.push('\'');
        }
        names[i] = candidate;
    }
    let mut orders = vec![vec![Order::Finite(1); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            orders[i][j] = if m.y.contains(i) && m.u.contains(j) {
                d.order(i, m.pi_invert(j))
            } else if m.u.contains(i) && m.y.contains(j) {
                d.order(m.pi_invert(i), j)
            } else if (m.x.contains(i) && m.y.contains(j))
                || (m.y.contains(i) && m.x.contains(j))
            {
                Order::Inf
            } else {
                d.order(i, j)
            };
        }
    }
    Ok(CoxeterDiagram::from_matrix(names, orders))
}

/// True iff every block of `f` lies inside `X ∪ U` or inside `Y ∪ U`.
pub fn preserves_family(_d: &CoxeterDiagram, m: &TwistMove, f: &[Subset]) -> bool {
    f.iter().all(|&a| m.map_subset(a).is_some())
}

/// Map a preserved family through a twist: blocks inside `X ∪ U` are kept,
/// blocks inside `Y ∪ U` are mapped through `π` with their `Y` part primed
/// in place. When the input family is a separation of `d`, the image is
/// asserted to be a separation of the twisted diagram.
pub fn induced_family(d: &CoxeterDiagram, m: &TwistMove, f: &[Subset]) -> Result<Vec<Subset>> {
    if !preserves_family(d, m, f) {
        return Err(Error::Domain(
            "the family is not preserved by the twist (a block meets both sides)".into(),
        ));
    }
    let images: Vec<Subset> = f.iter().map(|&a| m.map_subset(a).unwrap()).collect();
    let was_separation = is_separation(d, &SeparationFamily::new(f.to_vec()))?;
    if was_separation {
        let twisted = apply_twist(d, m)?;
        if !is_separation(&twisted, &SeparationFamily::new(images.clone()))? {
            return Err(Error::Invariant(
                "the image of a separation under a twist is not a separation".into(),
            ));
        }
    }
    Ok(images)
}

/// A twist move recorded by generator names, replayable against the
/// diagram it was produced from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    /// Names of `U` in the source diagram.
    pub u: Vec<String>,
    /// Names of the spherical set that induced the permutation.
    pub sigma: Vec<String>,
    /// Names of the primed side `Y`.
    pub y: Vec<String>,
    /// The permutation as `(source, image)` name pairs.
    pub pi: Vec<(String, String)>,
}

/// Replay a sequence of recorded elementary moves from `d`, checking at
/// each step that the recorded permutation matches the recomputed one.
pub fn replay_moves(d: &CoxeterDiagram, path: &[MoveRecord]) -> Result<CoxeterDiagram> {
    let mut current = d.clone();
    for rec in path {
        let u = current.subset(&rec.u.iter().map(|s| s.as_str()).collect::<Vec<_>>())?;
        let y = current.subset(&rec.y.iter().map(|s| s.as_str()).collect::<Vec<_>>())?;
        let m = TwistMove::elementary(&current, u, y)?;
        if m.record(&current) != *rec {
            return Err(Error::Invariant(
                "a recorded move does not replay to the same permutation".into(),
            ));
        }
        current = apply_twist(&current, &m)?;
    }
    Ok(current)
}

/// All nontrivial elementary moves available on `d`: every separating
/// spherical product, every unordered bipartition of the components of
/// `S ∖ U` (the component of the lowest generator stays on the `X` side),
/// with `π` induced by the longest element. Moves with identity `π` are
/// omitted — they reproduce `d`.
pub fn elementary_moves(d: &CoxeterDiagram) -> Result<Vec<TwistMove>> {
    let mut out = Vec::new();
    if !is_connected(d, d.full()) {
        return Ok(out);
    }
    for u in separating_spherical_products(d)? {
        let comps = components(d, d.full().minus(u));
        let t = comps.len();
        // Unordered bipartitions: comps[0] always stays in X.
        for mask in 1u32..(1 << (t - 1)) {
            let y = (1..t)
                .filter(|&i| mask & (1 << (i - 1)) != 0)
                .fold(Subset::EMPTY, |acc, i| acc.union(comps[i]));
            let m = TwistMove::elementary(d, u, y)?;
            if !m.is_trivial() {
                out.push(m);
            }
        }
    }
    Ok(out)
}

/// One reachable diagram in a twist orbit.
#[derive(Debug, Clone)]
pub struct OrbitNode {
    /// The diagram at this node.
    pub diagram: CoxeterDiagram,
    /// Canonical certificate the node was deduplicated by (colored by the
    /// tracked blocks when tracking is on).
    pub certificate: CanonicalForm,
    /// Number of moves from the start diagram.
    pub depth: usize,
    /// The moves that produced this node, replayable from the start.
    pub path: Vec<MoveRecord>,
    /// Evolved images of the tracked blocks.
    pub tracked: Vec<Subset>,
}

/// Result of an orbit search.
#[derive(Debug, Clone)]
pub struct TwistOrbit {
    /// Reachable nodes in breadth-first order; the start diagram is first.
    pub nodes: Vec<OrbitNode>,
    /// False when the state guard truncated the search; the nodes are then
    /// a partial orbit.
    pub complete: bool,
}

fn tracked_certificate(d: &CoxeterDiagram, tracked: &[Subset]) -> CanonicalForm {
    if tracked.is_empty() {
        canonical_form(d)
    } else {
        let seed: Vec<u32> = (0..d.rank())
            .map(|v| {
                tracked
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| b.contains(v))
                    .fold(0u32, |acc, (k, _)| acc | (1 << k))
            })
            .collect();
        canonical_form_colored(d, &seed)
    }
}

/// Breadth-first search over elementary twists up to `depth`, deduplicated
/// by canonical form. Every block in `tracked` must be preserved by every
/// move taken, and the blocks evolve along each path (nodes are then
/// deduplicated by the canonical form *colored* by the tracked blocks).
/// The search stops and flags the orbit incomplete once `max_states`
/// distinct diagrams have been collected.
pub fn twist_orbit(
    d: &CoxeterDiagram,
    depth: usize,
    tracked: &[Subset],
    max_states: usize,
) -> Result<TwistOrbit> {
    if tracked.len() > 31 {
        return Err(Error::Capacity {
            what: "tracked blocks in orbit search",
            limit: 31,
            actual: tracked.len(),
        });
    }
    let root = OrbitNode {
        diagram: d.clone(),
        certificate: tracked_certificate(d, tracked),
        depth: 0,
        path: Vec::new(),
        tracked: tracked.to_vec(),
    };
    let mut visited: BTreeSet<Vec<u8>> = BTreeSet::new();
    visited.insert(root.certificate.certificate.clone());
    let mut nodes = vec![root.clone()];
    let mut queue: VecDeque<OrbitNode> = VecDeque::new();
    queue.push_back(root);
    while let Some(node) = queue.pop_front() {
        if node.depth == depth {
            continue;
        }
        for m in elementary_moves(&node.diagram)? {
            let mapped: Option<Vec<Subset>> =
                node.tracked.iter().map(|&b| m.map_subset(b)).collect();
            let mapped = match mapped {
                Some(v) => v,
                None => continue, // a tracked block straddles the sides
            };
            let next = apply_twist(&node.diagram, &m)?;
            let cert = tracked_certificate(&next, &mapped);
            if !visited.insert(cert.certificate.clone()) {
                continue;
            }
            if nodes.len() >= max_states {
                return Ok(TwistOrbit {
                    nodes,
                    complete: false,
                });
            }
            let mut path = node.path.clone();
            path.push(m.record(&node.diagram));
            let child = OrbitNode {
                diagram: next,
                certificate: cert,
                depth: node.depth + 1,
                path,
                tracked: mapped,
            };
            nodes.push(child.clone());
            queue.push_back(child);
        }
    }
    Ok(TwistOrbit {
        nodes,
        complete: true,
    })
}

/// Outcome of a bounded search: a witness path, or no conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// A witness sequence of moves was found.
    Yes(Vec<MoveRecord>),
    /// No witness within the bounds; proves nothing.
    Unknown,
}

impl Verdict {
    /// True for [`Verdict::Yes`].
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }
}

/// Decide whether `d2` is reachable from `d1` by elementary twists within
/// `depth` moves, up to generator renaming. `YES` comes with the witness
/// path; `UNKNOWN` is returned on rank mismatch, exhausted depth, or a
/// truncated search.
pub fn twist_equivalent(
    d1: &CoxeterDiagram,
    d2: &CoxeterDiagram,
    depth: usize,
    max_states: usize,
) -> Result<Verdict> {
    if d1.rank() != d2.rank() {
        return Ok(Verdict::Unknown);
    }
    let target = canonical_form(d2);
    let orbit = twist_orbit(d1, depth, &[], max_states)?;
    for node in &orbit.nodes {
        if node.certificate == target {
            return Ok(Verdict::Yes(node.path.clone()));
        }
    }
    Ok(Verdict::Unknown)
}

/// Vertex profile used when matching blocks across diagrams: whether the
/// vertex lies on the block's boundary (shared with other blocks of the
/// standard separation) and the multiset of its orders toward the rest of
/// the diagram (`∞` encoded as 0).
fn attachment_profiles(
    d: &CoxeterDiagram,
    block: Subset,
    others: Subset,
    back: &[usize],
    rank: usize,
) -> Vec<(bool, Vec<u32>)> {
    (0..rank)
        .map(|k| {
            let orig = back[k];
            let mut outs: Vec<u32> = d
                .full()
                .minus(block)
                .iter()
                .map(|w| match d.order(orig, w) {
                    Order::Finite(m) => m,
                    Order::Inf => 0,
                })
                .collect();
            outs.sort_unstable();
            (others.contains(orig), outs)
        })
        .collect()
}

/// Structural match between a block of one diagram and a block of another:
/// a label-preserving isomorphism of the induced diagrams respecting the
/// boundary coloring and the outside-attachment profile of every vertex.
fn block_matches(
    da: &CoxeterDiagram,
    a: Subset,
    others_a: Subset,
    db: &CoxeterDiagram,
    b: Subset,
    others_b: Subset,
) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (sub_a, back_a) = da.restrict(a);
    let (sub_b, back_b) = db.restrict(b);
    let pa = attachment_profiles(da, a, others_a, &back_a, sub_a.rank());
    let pb = attachment_profiles(db, b, others_b, &back_b, sub_b.rank());
    // Shared vocabulary so seed values mean the same on both sides.
    let mut vocab: Vec<&(bool, Vec<u32>)> = pa.iter().chain(pb.iter()).collect();
    vocab.sort();
    vocab.dedup();
    let index = |p: &(bool, Vec<u32>)| -> u32 {
        vocab.iter().position(|q| *q == p).unwrap() as u32
    };
    let seed_a: Vec<u32> = pa.iter().map(&index).collect();
    let seed_b: Vec<u32> = pb.iter().map(&index).collect();
    find_isomorphism_colored(&sub_a, Some(&seed_a), &sub_b, Some(&seed_b)).is_some()
}

fn union_of_others(blocks: &[Subset], skip: Subset) -> Subset {
    blocks
        .iter()
        .filter(|&&b| b != skip)
        .fold(Subset::EMPTY, |acc, &b| acc.union(b))
}

/// Decide whether the type(II) block `a` of `d1` can be matched onto the
/// type(II) block `b` of `d2` by twists preserving the rest of the
/// standard separation of `d1`.
///
/// The search walks the twist orbit of `d1` restricted to moves preserving
/// every block of `Ã_{d1}` (the block `a` can never straddle a separating
/// spherical product, so tracking it costs nothing) and answers `YES` when
/// some reachable diagram carries the evolved image of `a` onto `b` by a
/// boundary- and attachment-respecting isomorphism.
pub fn type2_compatible(
    d1: &CoxeterDiagram,
    a: Subset,
    d2: &CoxeterDiagram,
    b: Subset,
    depth: usize,
    max_states: usize,
) -> Result<Verdict> {
    let s1 = standard_separation(d1)?;
    let s2 = standard_separation(d2)?;
    type2_compatible_with(d1, &s1, a, d2, &s2, b, depth, max_states)
}

/// [`type2_compatible`] against precomputed standard separations.
#[allow(clippy::too_many_arguments)]
pub fn type2_compatible_with(
    d1: &CoxeterDiagram,
    s1: &StandardSeparation,
    a: Subset,
    d2: &CoxeterDiagram,
    s2: &StandardSeparation,
    b: Subset,
    depth: usize,
    max_states: usize,
) -> Result<Verdict> {
    if !s1.type2.contains(&a) {
        return Err(Error::Domain(format!(
            "{} is not a type(II) block of the first diagram",
            d1.label_of(a)
        )));
    }
    if !s2.type2.contains(&b) {
        return Err(Error::Domain(format!(
            "{} is not a type(II) block of the second diagram",
            d2.label_of(b)
        )));
    }
    if a.len() != b.len() {
        return Ok(Verdict::Unknown);
    }
    let tracked: Vec<Subset> = s1.family.blocks().to_vec();
    let idx_a = tracked
        .iter()
        .position(|&t| t == a)
        .expect("type(II) block belongs to the family");
    let others_b = union_of_others(s2.family.blocks(), b);
    let orbit = twist_orbit(d1, depth, &tracked, max_states)?;
    for node in &orbit.nodes {
        let ea = node.tracked[idx_a];
        let others_a = union_of_others(&node.tracked, ea);
        if block_matches(&node.diagram, ea, others_a, d2, b, others_b) {
            return Ok(Verdict::Yes(node.path.clone()));
        }
    }
    Ok(Verdict::Unknown)
}

/// A complete matching between the standard separations of two diagrams.
#[derive(Debug, Clone)]
pub struct CompatMatching {
    /// Matched type(I) blocks, `(block of d1, block of d2)`.
    pub type1: Vec<(Subset, Subset)>,
    /// Matched type(II) blocks with the twist witness for each pair.
    pub type2: Vec<(Subset, Subset, Vec<MoveRecord>)>,
}

/// Outcome of [`type12_compatible`].
#[derive(Debug, Clone)]
pub enum CompatVerdict {
    /// A complete bijection exists in both directions.
    Yes(CompatMatching),
    /// No such bijection found within the bounds; proves nothing.
    Unknown,
}

impl CompatVerdict {
    /// True for [`CompatVerdict::Yes`].
    pub fn is_yes(&self) -> bool {
        matches!(self, CompatVerdict::Yes(_))
    }
}

/// Maximum bipartite matching (augmenting paths) over an n×n admissibility
/// matrix; `Some(assignment)` maps each row to its column iff the matching
/// is perfect.
fn perfect_matching(admit: &[Vec<bool>]) -> Option<Vec<usize>> {
    let n = admit.len();
    let mut col_of_row = vec![usize::MAX; n];
    let mut row_of_col = vec![usize::MAX; n];
    fn augment(
        admit: &[Vec<bool>],
        r: usize,
        seen: &mut [bool],
        col_of_row: &mut [usize],
        row_of_col: &mut [usize],
    ) -> bool {
        for c in 0..admit.len() {
            if admit[r][c] && !seen[c] {
                seen[c] = true;
                if row_of_col[c] == usize::MAX
                    || augment(admit, row_of_col[c], seen, col_of_row, row_of_col)
                {
                    col_of_row[r] = c;
                    row_of_col[c] = r;
                    return true;
                }
            }
        }
        false
    }
    for r in 0..n {
        let mut seen = vec![false; n];
        if !augment(admit, r, &mut seen, &mut col_of_row, &mut row_of_col) {
            return None;
        }
    }
    Some(col_of_row)
}

/// Decide compatibility of the standard separations of two diagrams:
/// the type(I) blocks of the two sides must admit a complete bijection by
/// block isomorphism with consistent attachment, and the type(II) blocks a
/// complete bijection through [`type2_compatible`]. A symmetric diagram may
/// offer several partners for a block; any complete bijection suffices
/// (in particular every diagram is compatible with itself). A miss yields
/// `UNKNOWN`, never a refutation.
pub fn type12_compatible(
    d1: &CoxeterDiagram,
    d2: &CoxeterDiagram,
    depth: usize,
    max_states: usize,
) -> Result<CompatVerdict> {
    let s1 = standard_separation(d1)?;
    let s2 = standard_separation(d2)?;
    if s1.type1.len() != s2.type1.len() || s1.type2.len() != s2.type2.len() {
        return Ok(CompatVerdict::Unknown);
    }
    // type(I): direct structural matching.
    let n1 = s1.type1.len();
    let mut t1_matrix = vec![vec![false; n1]; n1];
    for (i, &p) in s1.type1.iter().enumerate() {
        let others_p = union_of_others(s1.family.blocks(), p);
        for (j, &q) in s2.type1.iter().enumerate() {
            let others_q = union_of_others(s2.family.blocks(), q);
            t1_matrix[i][j] = block_matches(d1, p, others_p, d2, q, others_q);
        }
    }
    let Some(t1_assignment) = perfect_matching(&t1_matrix) else {
        return Ok(CompatVerdict::Unknown);
    };
    let type1: Vec<(Subset, Subset)> = t1_assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| (s1.type1[i], s2.type1[j]))
        .collect();
    // type(II): bounded twist search per pair.
    let n2 = s1.type2.len();
    let mut witnesses: Vec<Vec<Option<Vec<MoveRecord>>>> = vec![vec![None; n2]; n2];
    for (i, &p) in s1.type2.iter().enumerate() {
        for (j, &q) in s2.type2.iter().enumerate() {
            if let Verdict::Yes(path) =
                type2_compatible_with(d1, &s1, p, d2, &s2, q, depth, max_states)?
            {
                witnesses[i][j] = Some(path);
            }
        }
    }
    let t2_matrix: Vec<Vec<bool>> = witnesses
        .iter()
        .map(|row| row.iter().map(|w| w.is_some()).collect())
        .collect();
    let Some(t2_assignment) = perfect_matching(&t2_matrix) else {
        return Ok(CompatVerdict::Unknown);
    };
    let type2: Vec<(Subset, Subset, Vec<MoveRecord>)> = t2_assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| {
            (
                s1.type2[i],
                s2.type2[j],
                witnesses[i][j].clone().unwrap(),
            )
        })
        .collect();
    Ok(CompatVerdict::Yes(CompatMatching { type1, type2 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::brute_force_isomorphic;

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

    fn subs(d: &CoxeterDiagram, names: &[&str]) -> Subset {
        d.subset(names).unwrap()
    }

    /// Path p–a–b–q1–q2, all bonds of order 3: one nontrivial twist shape.
    fn path5() -> CoxeterDiagram {
        diagram(
            &["p", "a", "b", "q1", "q2"],
            &[("p", "a", 3), ("a", "b", 3), ("b", "q1", 3), ("q1", "q2", 3)],
        )
    }

    #[test]
    fn elementary_move_builds_the_longest_permutation() {
        let d = path5();
        let m = TwistMove::elementary(&d, subs(&d, &["a", "b"]), subs(&d, &["q1", "q2"])).unwrap();
        assert_eq!(m.sigma, subs(&d, &["a", "b"]));
        assert_eq!(m.pi_apply(d.index_of("a").unwrap()), d.index_of("b").unwrap());
        assert!(!m.is_trivial());
        // Bad sides are named domain errors.
        assert!(matches!(
            TwistMove::elementary(&d, subs(&d, &["a", "b"]), subs(&d, &["b", "q1"])),
            Err(Error::Domain(_))
        ));
        // U = {a} with the whole right side as Y is legal but trivial:
        // ω of an A1 factor is the identity.
        let t = TwistMove::elementary(&d, subs(&d, &["a"]), subs(&d, &["b", "q1", "q2"])).unwrap();
        assert!(t.is_trivial());
        // {a, q1} is not a spherical product here.
        assert!(matches!(
            TwistMove::elementary(&d, subs(&d, &["a", "q1"]), subs(&d, &["q2"])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn twist_rewires_across_the_permutation() {
        let d = path5();
        let m = TwistMove::elementary(&d, subs(&d, &["a", "b"]), subs(&d, &["q1", "q2"])).unwrap();
        let t = apply_twist(&d, &m).unwrap();
        // q1' now bonds to a (the preimage of its old neighbor b), and the
        // names of the twisted side carry primes at stable indices.
        let q1p = d.index_of("q1").unwrap();
        assert_eq!(t.name(q1p), "q1'");
        assert_eq!(t.order(q1p, d.index_of("a").unwrap()), Order::Finite(3));
        assert_eq!(t.order(q1p, d.index_of("b").unwrap()), Order::Inf);
        assert!(!brute_force_isomorphic(&d, &t));
        // Twisting back with the same sides restores the diagram shape.
        let m2 = TwistMove::elementary(&t, m.u, m.y).unwrap();
        let back = apply_twist(&t, &m2).unwrap();
        assert_eq!(canonical_form(&back), canonical_form(&d));
    }

    #[test]
    fn trivial_moves_reproduce_the_diagram() {
        // A 4-cycle of order-3 bonds with a commuting chord: {a, c} separates,
        // and its factors are commuting A1's, so the longest permutation is
        // the identity.
        let d = diagram(
            &["a", "b", "c", "e"],
            &[
                ("a", "b", 3),
                ("b", "c", 3),
                ("c", "e", 3),
                ("e", "a", 3),
                ("a", "c", 2),
            ],
        );
        let m = TwistMove::elementary(&d, subs(&d, &["a", "c"]), subs(&d, &["e"])).unwrap();
        assert!(m.is_trivial());
        let t = apply_twist(&d, &m).unwrap();
        assert_eq!(canonical_form(&t), canonical_form(&d));
        assert!(elementary_moves(&d).unwrap().is_empty());
        assert_eq!(twist_orbit(&d, 5, &[], 100).unwrap().nodes.len(), 1);
    }

    #[test]
    fn orbit_of_the_asymmetric_path_has_two_shapes_at_depth_one() {
        let d = path5();
        let orbit = twist_orbit(&d, 1, &[], 100).unwrap();
        assert!(orbit.complete);
        assert_eq!(orbit.nodes.len(), 2);
        assert_eq!(twist_orbit(&d, 0, &[], 100).unwrap().nodes.len(), 1);
        // The witness replays to the reached diagram.
        let spider = &orbit.nodes[1];
        let replayed = replay_moves(&d, &spider.path).unwrap();
        assert_eq!(canonical_form(&replayed), spider.certificate.clone());
    }

    #[test]
    fn orbit_capacity_guard_flags_partial_results() {
        let d = path5();
        let orbit = twist_orbit(&d, 3, &[], 1).unwrap();
        assert!(!orbit.complete);
        assert_eq!(orbit.nodes.len(), 1);
    }

    #[test]
    fn family_preservation_and_induced_images() {
        let d = diagram(
            &["x", "y", "z", "a1"],
            &[("x", "a1", 3), ("y", "a1", 3), ("z", "a1", 3)],
        );
        let m = TwistMove::elementary(&d, subs(&d, &["x", "a1"]), subs(&d, &["z"])).unwrap();
        assert!(!preserves_family(&d, &m, &[d.full()]));
        assert!(preserves_family(&d, &m, &[]));
        let legs = vec![
            subs(&d, &["x", "a1"]),
            subs(&d, &["y", "a1"]),
            subs(&d, &["z", "a1"]),
        ];
        assert!(preserves_family(&d, &m, &legs));
        let images = induced_family(&d, &m, &legs).unwrap();
        // {z, a1} lives on the Y side; a1 maps to x under the longest
        // element of the A2 factor {x, a1}.
        assert_eq!(images[0], subs(&d, &["x", "a1"]));
        assert_eq!(images[1], subs(&d, &["y", "a1"]));
        assert_eq!(images[2], subs(&d, &["x", "z"]));
        assert!(matches!(
            induced_family(&d, &m, &[d.full()]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn twist_equivalence_and_rank_shortcut() {
        let d = path5();
        let orbit = twist_orbit(&d, 1, &[], 100).unwrap();
        let spider = orbit.nodes[1].diagram.clone();
        match twist_equivalent(&d, &spider, 2, 200).unwrap() {
            Verdict::Yes(path) => assert_eq!(path.len(), 1),
            Verdict::Unknown => panic!("expected a witness"),
        }
        // Symmetric at the same depth.
        assert!(twist_equivalent(&spider, &d, 2, 200).unwrap().is_yes());
        // Renamed diagram: YES at depth 0.
        let renamed = diagram(
            &["u1", "u2", "u3", "u4", "u5"],
            &[("u1", "u2", 3), ("u2", "u3", 3), ("u3", "u4", 3), ("u4", "u5", 3)],
        );
        assert!(twist_equivalent(&d, &renamed, 0, 10).unwrap().is_yes());
        let smaller = diagram(&["a", "b"], &[("a", "b", 3)]);
        assert_eq!(twist_equivalent(&d, &smaller, 3, 100).unwrap(), Verdict::Unknown);
    }

    #[test]
    fn type_counts_survive_every_move_on_the_path() {
        let d = path5();
        let s = standard_separation(&d).unwrap();
        for m in elementary_moves(&d).unwrap() {
            let t = apply_twist(&d, &m).unwrap();
            let st = standard_separation(&t).unwrap();
            assert_eq!(s.type1.len(), st.type1.len());
            assert_eq!(s.type2.len(), st.type2.len());
        }
    }

    #[test]
    fn general_moves_validate_the_permutation() {
        let d = path5();
        let u = subs(&d, &["a", "b"]);
        let y = subs(&d, &["q1", "q2"]);
        let a = d.index_of("a").unwrap();
        let b = d.index_of("b").unwrap();
        // The swap preserves the A2 bond; it is the elementary π.
        let m = TwistMove::with_permutation(&d, u, y, &[(a, b), (b, a)]).unwrap();
        assert_eq!(m.pi_apply(a), b);
        // Not a bijection of U.
        assert!(matches!(
            TwistMove::with_permutation(&d, u, y, &[(a, a), (b, a)]),
            Err(Error::Domain(_))
        ));
        // A permutation breaking a bond is rejected.
        let d2 = diagram(
            &["p", "a", "b", "c", "q"],
            &[("p", "a", 3), ("a", "b", 3), ("b", "c", 4), ("c", "q", 3)],
        );
        let u2 = subs(&d2, &["a", "b", "c"]);
        let a2 = d2.index_of("a").unwrap();
        let b2 = d2.index_of("b").unwrap();
        let c2 = d2.index_of("c").unwrap();
        assert!(matches!(
            TwistMove::with_permutation(
                &d2,
                u2,
                subs(&d2, &["q"]),
                &[(a2, c2), (b2, b2), (c2, a2)]
            ),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn self_compatibility_is_yes() {
        let d = path5();
        match type12_compatible(&d, &d, 1, 200).unwrap() {
            CompatVerdict::Yes(m) => {
                assert_eq!(m.type1.len() + m.type2.len(), 4);
            }
            CompatVerdict::Unknown => panic!("a diagram is compatible with itself"),
        }
        // Count mismatch short-circuits to UNKNOWN.
        let k3 = diagram(&["a", "b", "c"], &[("a", "b", 3), ("b", "c", 3), ("a", "c", 3)]);
        assert!(!type12_compatible(&d, &k3, 1, 200).unwrap().is_yes());
    }

    #[test]
    fn tracked_blocks_restrict_the_orbit() {
        let d = path5();
        // Tracking the whole diagram forbids every genuine twist.
        let orbit = twist_orbit(&d, 2, &[d.full()], 100).unwrap();
        assert_eq!(orbit.nodes.len(), 1);
    }
}
