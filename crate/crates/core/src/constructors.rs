//! Constructive labeling procedures: forests with prescribed edge weights,
//! complete bipartite coset labelings, greedy labelings along a degeneracy
//! ordering, split and multi-component compositions, and the DAG variant.
//!
//! Every successful constructor output passes the verifier in
//! [`crate::labeling`]; failure below a guarantee threshold is a result
//! value, not a panic.

use crate::abelian::{AbelianGroup, GroupElement, GroupError};
use crate::bits::Bitset;
use crate::graphs::{
    validate_four_set_partition, Digraph, FourSetPartition, Graph, PartitionViolation, Quadrant,
    TopoResult,
};
use crate::labeling::Labeling;
use std::collections::{BTreeMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("input graph contains a cycle")]
    NotAForest,
    #[error("planned weights collide on edges {0:?} and {1:?}")]
    DuplicateTargets((usize, usize), (usize, usize)),
    #[error("no planned weight for edge {0}-{1}")]
    MissingTarget(usize, usize),
    #[error("planned weight for {0}-{1}, which is not an edge")]
    UnknownEdge(usize, usize),
    #[error("component containing vertex {0} has no anchor")]
    MissingAnchor(usize),
    #[error("component containing vertex {0} has more than one anchor")]
    ExtraAnchor(usize),
    #[error("group order {got} does not match required {expected}")]
    OrderMismatch { expected: u64, got: u64 },
    #[error("no label choice left for vertex {0}")]
    Stuck(usize),
    #[error("digraph contains a cycle through {0:?}")]
    CycleDetected(Vec<usize>),
    #[error("invalid four-set partition: {0}")]
    InvalidPartition(String),
    #[error("second coordinates do not distinguish the edges of zone {zone}: edges {a:?} and {b:?} collide")]
    ZoneNotIrregular { zone: &'static str, a: (usize, usize), b: (usize, usize) },
    #[error("vertex {vertex} in {quadrant} reuses element {element} already used in {owner}")]
    CoordinateReuse { quadrant: &'static str, owner: &'static str, vertex: usize, element: String },
    #[error("{0} is not an odd prime")]
    NotAnOddPrime(u64),
    #[error("prime {p} is smaller than the component count {q}")]
    PrimeTooSmall { p: u64, q: usize },
    #[error("second-coordinate group order {order} must not be divisible by {p}")]
    DivisibleOrder { p: u64, order: u64 },
    #[error("second-coordinate group order {0} must be odd")]
    EvenOrder(u64),
    #[error("graph has {0} component(s); at least 2 required")]
    TooFewComponents(usize),
    #[error("second-coordinate list covers {got} vertices, graph has {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Prescribed edge weights plus one anchored vertex per component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightPlan {
    targets: BTreeMap<(usize, usize), GroupElement>,
    anchors: BTreeMap<usize, GroupElement>,
}

impl WeightPlan {
    pub fn new(
        targets: impl IntoIterator<Item = ((usize, usize), GroupElement)>,
        anchors: impl IntoIterator<Item = (usize, GroupElement)>,
    ) -> Self {
        let targets = targets
            .into_iter()
            .map(|((u, v), w)| ((u.min(v), u.max(v)), w))
            .collect();
        WeightPlan { targets, anchors: anchors.into_iter().collect() }
    }

    pub fn target(&self, u: usize, v: usize) -> Option<&GroupElement> {
        self.targets.get(&(u.min(v), u.max(v)))
    }

    pub fn targets(&self) -> &BTreeMap<(usize, usize), GroupElement> {
        &self.targets
    }

    pub fn anchors(&self) -> &BTreeMap<usize, GroupElement> {
        &self.anchors
    }
}

/// Realizes an arbitrary distinct-target weight plan on a forest: from each
/// anchor, every new vertex receives `target − known endpoint`, so each edge
/// weight lands exactly on its planned value.
pub fn label_forest(
    f: &Graph,
    group: &AbelianGroup,
    plan: &WeightPlan,
) -> Result<Labeling, ConstructError> {
    if !f.is_forest() {
        return Err(ConstructError::NotAForest);
    }
    // plan sanity: distinct targets, full edge coverage, membership
    let mut seen: BTreeMap<&GroupElement, (usize, usize)> = BTreeMap::new();
    for (&e, w) in plan.targets() {
        if !group.contains(w) {
            return Err(GroupError::GroupMismatch.into());
        }
        if !f.has_edge(e.0, e.1) {
            return Err(ConstructError::UnknownEdge(e.0, e.1));
        }
        if let Some(&first) = seen.get(w) {
            return Err(ConstructError::DuplicateTargets(first, e));
        }
        seen.insert(w, e);
    }
    for &(u, v) in f.edges() {
        if plan.target(u, v).is_none() {
            return Err(ConstructError::MissingTarget(u, v));
        }
    }
    let comps = f.components();
    let mut comp_of = vec![usize::MAX; f.n()];
    for (i, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = i;
        }
    }
    let mut anchor_of = vec![None; comps.len()];
    for (&v, label) in plan.anchors() {
        if v >= f.n() {
            return Err(GroupError::GroupMismatch.into());
        }
        if !group.contains(label) {
            return Err(GroupError::GroupMismatch.into());
        }
        let c = comp_of[v];
        if anchor_of[c].is_some() {
            return Err(ConstructError::ExtraAnchor(v));
        }
        anchor_of[c] = Some((v, label.clone()));
    }
    for (c, comp) in comps.iter().enumerate() {
        if anchor_of[c].is_none() {
            return Err(ConstructError::MissingAnchor(comp[0]));
        }
    }

    let mut values: Vec<Option<GroupElement>> = vec![None; f.n()];
    for anchor in anchor_of.into_iter().flatten() {
        let (root, label) = anchor;
        values[root] = Some(label);
        let mut queue = vec![root];
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            let wu = values[u].clone().expect("visited vertices are labeled");
            for &w in f.neighbors(u) {
                if values[w].is_some() {
                    continue;
                }
                let target = plan.target(u, w).expect("coverage checked above");
                values[w] = Some(group.sub(target, &wu)?);
                queue.push(w);
            }
        }
    }
    let values: Vec<GroupElement> = values
        .into_iter()
        .map(|v| v.expect("every component reached from its anchor"))
        .collect();
    Ok(Labeling::new(group.clone(), values).expect("membership checked"))
}

/// Coset labeling of `K_{m,n}` over a group of order `mn`: side `0..m` gets
/// a subgroup of order `m`, side `m..m+n` a full coset transversal, so the
/// weights at each right vertex sweep its own coset and all `mn` weights are
/// distinct.
pub fn label_complete_bipartite(
    m: usize,
    n: usize,
    group: &AbelianGroup,
) -> Result<Labeling, ConstructError> {
    let expected = (m as u64) * (n as u64);
    if group.order() != expected {
        return Err(ConstructError::OrderMismatch { expected, got: group.order() });
    }
    let subgroup = group.subgroup_of_order(m as u64)?;
    let reps = group.coset_representatives(&subgroup)?;
    debug_assert_eq!(reps.len(), n);
    let mut values = subgroup;
    values.extend(reps);
    Ok(Labeling::new(group.clone(), values).expect("elements of the group"))
}

// ---- greedy engine ----

#[derive(Clone, Copy)]
enum BackEdge {
    /// undirected: weight = candidate + label[u]
    Sum(usize),
    /// arc (u, current): weight = label[u] − candidate
    FromEarlier(usize),
    /// arc (current, u): weight = candidate − label[u]
    ToEarlier(usize),
}

/// First-fit labeling over a fixed vertex order with ascending candidate
/// order. With `backtrack` the procedure is exhaustive for the given anchor
/// and returns the lexicographically least solution; without it, the first
/// dead end is reported as the stuck vertex.
fn assign_labels(
    group: &AbelianGroup,
    n: usize,
    order: &[usize],
    back: &[Vec<BackEdge>],
    anchor: u64,
    injective: bool,
    backtrack: bool,
) -> Result<Vec<u64>, usize> {
    let size = group.order();
    let k = order.len();
    let mut labels = vec![0u64; n];
    let mut weights = Bitset::new(size);
    let mut used_labels = Bitset::new(size);
    let mut next_cand = vec![0u64; k + 1];
    let mut added: Vec<Vec<u64>> = vec![Vec::new(); k];
    let mut i = 0usize;
    loop {
        if i == k {
            return Ok(labels);
        }
        let mut placed = false;
        loop {
            // position 0 tries only the anchor
            let c = if i == 0 {
                if next_cand[0] > 0 {
                    break;
                }
                next_cand[0] = 1;
                anchor
            } else {
                if next_cand[i] >= size {
                    break;
                }
                let c = next_cand[i];
                next_cand[i] += 1;
                c
            };
            if injective && used_labels.test(c) {
                continue;
            }
            let mut tmp = Vec::with_capacity(back[i].len());
            let mut ok = true;
            for be in &back[i] {
                let w = match *be {
                    BackEdge::Sum(u) => group.index_add(c, labels[u]),
                    BackEdge::FromEarlier(u) => group.index_sub(labels[u], c),
                    BackEdge::ToEarlier(u) => group.index_sub(c, labels[u]),
                };
                if weights.test(w) {
                    ok = false;
                    break;
                }
                weights.set(w);
                tmp.push(w);
            }
            if !ok {
                for &w in &tmp {
                    weights.clear(w);
                }
                continue;
            }
            labels[order[i]] = c;
            if injective {
                used_labels.set(c);
            }
            added[i] = tmp;
            placed = true;
            break;
        }
        if placed {
            i += 1;
            if i < k {
                next_cand[i] = 0;
            }
            continue;
        }
        if !backtrack || i == 0 {
            return Err(order[i]);
        }
        i -= 1;
        for &w in &added[i] {
            weights.clear(w);
        }
        if injective {
            used_labels.clear(labels[order[i]]);
        }
    }
}

fn indices_to_labeling(group: &AbelianGroup, indices: &[u64]) -> Labeling {
    let values = indices.iter().map(|&i| group.element_at(i)).collect();
    Labeling::new(group.clone(), values).expect("indices decode to members")
}

fn anchor_index(group: &AbelianGroup, anchor: Option<&GroupElement>) -> Result<u64, ConstructError> {
    match anchor {
        None => Ok(0),
        Some(e) => Ok(group.index_of(e)?),
    }
}

/// Greedy labeling along the degeneracy witness order: each vertex receives
/// the first group element whose back-edge weights avoid all fixed edge
/// weights, falling back to chronological backtracking at dead ends.
/// Guaranteed to succeed when `|group| ≥ (col − 1)(m − 1) + 1`.
pub fn label_greedy_col(
    g: &Graph,
    group: &AbelianGroup,
    anchor: Option<&GroupElement>,
) -> Result<Labeling, ConstructError> {
    let order = g.coloring_number().order;
    let back = undirected_back_edges(g, &order);
    let a = anchor_index(group, anchor)?;
    assign_labels(group, g.n(), &order, &back, a, false, true)
        .map(|idx| indices_to_labeling(group, &idx))
        .map_err(ConstructError::Stuck)
}

/// Injective variant: candidates must also avoid all labels used so far.
/// Strict first-fit suffices here — at `t ≥ n + (col − 1)(m − 1)` at most
/// `t − 1` candidates are ever forbidden.
pub fn label_greedy_injective(
    g: &Graph,
    group: &AbelianGroup,
    anchor: Option<&GroupElement>,
) -> Result<Labeling, ConstructError> {
    let order = g.coloring_number().order;
    let back = undirected_back_edges(g, &order);
    let a = anchor_index(group, anchor)?;
    assign_labels(group, g.n(), &order, &back, a, true, false)
        .map(|idx| indices_to_labeling(group, &idx))
        .map_err(ConstructError::Stuck)
}

fn undirected_back_edges(g: &Graph, order: &[usize]) -> Vec<Vec<BackEdge>> {
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    order
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            g.neighbors(v)
                .iter()
                .filter(|&&u| pos[u] < i)
                .map(|&u| BackEdge::Sum(u))
                .collect()
        })
        .collect()
}

/// Greedy difference labeling of a DAG processed along a topological order
/// (or its reverse, whichever side realizes `min{Δ⁻, Δ⁺}`), with the same
/// backtracking fallback as [`label_greedy_col`]. Guaranteed when
/// `|group| ≥ (m − 1)·min{Δ⁻, Δ⁺} + 1`.
pub fn label_dag_greedy(
    d: &Digraph,
    group: &AbelianGroup,
    anchor: Option<&GroupElement>,
) -> Result<Labeling, ConstructError> {
    let order = match d.topological_order() {
        TopoResult::Order(o) => o,
        TopoResult::Cycle(c) => return Err(ConstructError::CycleDetected(c)),
    };
    let use_in_side = d.max_in_degree() <= d.max_out_degree();
    let order: Vec<usize> = if use_in_side {
        order
    } else {
        order.into_iter().rev().collect()
    };
    let mut pos = vec![usize::MAX; d.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let back: Vec<Vec<BackEdge>> = order
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut b = Vec::new();
            if use_in_side {
                // every in-neighbor precedes v in a topological order
                for &u in d.in_neighbors(v) {
                    debug_assert!(pos[u] < i);
                    b.push(BackEdge::FromEarlier(u));
                }
            } else {
                for &u in d.out_neighbors(v) {
                    debug_assert!(pos[u] < i);
                    b.push(BackEdge::ToEarlier(u));
                }
            }
            b
        })
        .collect();
    let a = anchor_index(group, anchor)?;
    assign_labels(group, d.n(), &order, &back, a, false, true)
        .map(|idx| indices_to_labeling(group, &idx))
        .map_err(ConstructError::Stuck)
}

// ---- compositions ----

fn check_second_coords(
    g: &Graph,
    gp: &AbelianGroup,
    second: &[GroupElement],
) -> Result<(), ConstructError> {
    if second.len() != g.n() {
        return Err(ConstructError::LengthMismatch { expected: g.n(), got: second.len() });
    }
    for e in second {
        if !gp.contains(e) {
            return Err(GroupError::GroupMismatch.into());
        }
    }
    Ok(())
}

/// Checks that the given edges get pairwise distinct `gp`-weights under
/// `second`; reports the first collision as the violated clause.
fn check_zone_irregular(
    zone: &'static str,
    edges: impl Iterator<Item = (usize, usize)>,
    gp: &AbelianGroup,
    second: &[GroupElement],
) -> Result<(), ConstructError> {
    let mut seen: BTreeMap<Vec<u64>, (usize, usize)> = BTreeMap::new();
    for (u, v) in edges {
        let w = gp.add(&second[u], &second[v])?;
        if let Some(&a) = seen.get(w.residues()) {
            return Err(ConstructError::ZoneNotIrregular { zone, a, b: (u, v) });
        }
        seen.insert(w.residues().to_vec(), (u, v));
    }
    Ok(())
}

fn product_group(first: u64, gp: &AbelianGroup) -> AbelianGroup {
    let mut factors = vec![first];
    factors.extend_from_slice(gp.factors());
    AbelianGroup::new(factors).expect("orders already validated")
}

fn product_element(
    prod: &AbelianGroup,
    first: u64,
    second: &GroupElement,
) -> GroupElement {
    let mut residues = vec![first];
    residues.extend_from_slice(second.residues());
    prod.element(residues).expect("residues within factors")
}

/// Split composition over `Z_3 × gp`: row-1 vertices get first coordinate 0
/// and row-2 vertices get 1, so edge weights in the three zones have first
/// coordinates 0, 2 and 1. The supplied second coordinates must already
/// distinguish the edges inside `V11∪V12`, `V21∪V22` and `V11∪V21`, with
/// `V12` avoiding elements used in `V11` and `V22` avoiding `V21`'s.
pub fn compose_four_set(
    g: &Graph,
    partition: &FourSetPartition,
    gp: &AbelianGroup,
    second: &[GroupElement],
) -> Result<Labeling, ConstructError> {
    let violations = validate_four_set_partition(g, partition);
    if !violations.is_empty() {
        let text: Vec<String> = violations.iter().map(PartitionViolation::to_string).collect();
        return Err(ConstructError::InvalidPartition(text.join("; ")));
    }
    if gp.order() % 2 == 0 {
        return Err(ConstructError::EvenOrder(gp.order()));
    }
    if gp.order() % 3 == 0 {
        return Err(ConstructError::DivisibleOrder { p: 3, order: gp.order() });
    }
    check_second_coords(g, gp, second)?;

    let in_zone = |v: usize, a: Quadrant, b: Quadrant| partition.class(v) == a || partition.class(v) == b;
    let zone_edges = |a: Quadrant, b: Quadrant| {
        g.edges()
            .iter()
            .copied()
            .filter(move |&(u, v)| in_zone(u, a, b) && in_zone(v, a, b))
    };
    check_zone_irregular("V11∪V12", zone_edges(Quadrant::V11, Quadrant::V12), gp, second)?;
    check_zone_irregular("V21∪V22", zone_edges(Quadrant::V21, Quadrant::V22), gp, second)?;
    check_zone_irregular("V11∪V21", zone_edges(Quadrant::V11, Quadrant::V21), gp, second)?;

    for (fresh, source, fq, sq) in [
        ("V12", "V11", Quadrant::V12, Quadrant::V11),
        ("V22", "V21", Quadrant::V22, Quadrant::V21),
    ] {
        let used: HashSet<&GroupElement> =
            partition.members(sq).iter().map(|&v| &second[v]).collect();
        for &v in &partition.members(fq) {
            if used.contains(&second[v]) {
                return Err(ConstructError::CoordinateReuse {
                    quadrant: fresh,
                    owner: source,
                    vertex: v,
                    element: second[v].to_string(),
                });
            }
        }
    }

    let prod = product_group(3, gp);
    let values = (0..g.n())
        .map(|v| {
            let first = match partition.class(v) {
                Quadrant::V11 | Quadrant::V12 => 0,
                Quadrant::V21 | Quadrant::V22 => 1,
            };
            product_element(&prod, first, &second[v])
        })
        .collect();
    Ok(Labeling::new(prod, values).expect("constructed in the product group"))
}

/// Multi-component composition over `Z_p × gp` for an odd prime `p ≥ q`:
/// component `i` gets first coordinate `i`, so its edge weights carry first
/// coordinate `2i`, pairwise distinct because 2 is invertible mod `p`. The
/// second coordinates must distinguish edges within each component.
pub fn compose_components(
    g: &Graph,
    p: u64,
    gp: &AbelianGroup,
    second: &[GroupElement],
) -> Result<Labeling, ConstructError> {
    let comps = g.components();
    let q = comps.len();
    if q < 2 {
        return Err(ConstructError::TooFewComponents(q));
    }
    if p % 2 == 0 || !crate::solvers::is_prime(p) {
        return Err(ConstructError::NotAnOddPrime(p));
    }
    if (p as usize) < q {
        return Err(ConstructError::PrimeTooSmall { p, q });
    }
    if gp.order() % p == 0 {
        return Err(ConstructError::DivisibleOrder { p, order: gp.order() });
    }
    check_second_coords(g, gp, second)?;

    let mut comp_of = vec![0usize; g.n()];
    for (i, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = i;
        }
    }
    for i in 0..q {
        let edges = g.edges().iter().copied().filter(|&(u, _)| comp_of[u] == i);
        check_zone_irregular("component", edges, gp, second)?;
    }

    let prod = product_group(p, gp);
    let values = (0..g.n())
        .map(|v| product_element(&prod, comp_of[v] as u64, &second[v]))
        .collect();
    Ok(Labeling::new(prod, values).expect("constructed in the product group"))
}

/// Derives per-component second coordinates by labeling each component
/// independently with [`label_greedy_col`] over `gp`.
pub fn component_second_coords(
    g: &Graph,
    gp: &AbelianGroup,
) -> Result<Vec<GroupElement>, ConstructError> {
    let mut second: Vec<Option<GroupElement>> = vec![None; g.n()];
    for comp in g.components() {
        let (sub, map) = g.induced(&comp);
        let sub_labeling = label_greedy_col(&sub, gp, None)
            .map_err(|e| match e {
                ConstructError::Stuck(v) => ConstructError::Stuck(map[v]),
                other => other,
            })?;
        for (new, &old) in map.iter().enumerate() {
            second[old] = Some(sub_labeling.value(new).clone());
        }
    }
    Ok(second.into_iter().map(|v| v.expect("all vertices covered")).collect())
}

/// Derives second coordinates for the split composition: label `V11∪V21`
/// first, then extend to `V12` avoiding `V11`'s elements, then to `V22`
/// avoiding `V21`'s.
pub fn four_set_second_coords(
    g: &Graph,
    partition: &FourSetPartition,
    gp: &AbelianGroup,
) -> Result<Vec<GroupElement>, ConstructError> {
    let violations = validate_four_set_partition(g, partition);
    if !violations.is_empty() {
        let text: Vec<String> = violations.iter().map(PartitionViolation::to_string).collect();
        return Err(ConstructError::InvalidPartition(text.join("; ")));
    }
    let mut second: Vec<Option<u64>> = vec![None; g.n()];

    // Stage 1: the column-1 zone, labeled injectively. Two equal fixed
    // labels on common neighbors of a later V12/V22 vertex would make its
    // edges indistinguishable no matter what the extension picks.
    let mut col1: Vec<usize> = partition.members(Quadrant::V11);
    col1.extend(partition.members(Quadrant::V21));
    col1.sort_unstable();
    if !col1.is_empty() {
        let (sub, map) = g.induced(&col1);
        let sub_labeling = label_greedy_injective(&sub, gp, None).map_err(|e| match e {
            ConstructError::Stuck(v) => ConstructError::Stuck(map[v]),
            other => other,
        })?;
        for (new, &old) in map.iter().enumerate() {
            second[old] = Some(gp.index_of(sub_labeling.value(new))?);
        }
    }

    // Stages 2 and 3: extend each row zone, excluding the column-1 elements
    // already used on that row's V_i1 set.
    for (fresh_q, source_q, zone_q) in [
        (Quadrant::V12, Quadrant::V11, (Quadrant::V11, Quadrant::V12)),
        (Quadrant::V22, Quadrant::V21, (Quadrant::V21, Quadrant::V22)),
    ] {
        let mut zone: Vec<usize> = partition.members(zone_q.0);
        zone.extend(partition.members(zone_q.1));
        zone.sort_unstable();
        let excluded: HashSet<u64> = partition
            .members(source_q)
            .iter()
            .map(|&v| second[v].expect("stage 1 labeled column 1"))
            .collect();
        extend_zone(g, gp, &zone, fresh_q, partition, &excluded, &mut second)?;
    }

    let values = second
        .into_iter()
        .map(|v| gp.element_at(v.expect("all quadrants processed")))
        .collect();
    Ok(values)
}

/// Backtracking extension of the fixed part of a zone to its fresh vertices,
/// with an excluded candidate set.
fn extend_zone(
    g: &Graph,
    gp: &AbelianGroup,
    zone: &[usize],
    fresh_q: Quadrant,
    partition: &FourSetPartition,
    excluded: &HashSet<u64>,
    second: &mut [Option<u64>],
) -> Result<(), ConstructError> {
    let in_zone: HashSet<usize> = zone.iter().copied().collect();
    let zone_edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| in_zone.contains(&u) && in_zone.contains(&v))
        .collect();
    let fresh: Vec<usize> = zone
        .iter()
        .copied()
        .filter(|&v| partition.class(v) == fresh_q)
        .collect();

    let size = gp.order();
    let mut weights = Bitset::new(size);
    // weights among already-fixed zone vertices
    for &(u, v) in &zone_edges {
        if let (Some(a), Some(b)) = (second[u], second[v]) {
            let w = gp.index_add(a, b);
            debug_assert!(!weights.test(w), "fixed part of a zone must be irregular");
            weights.set(w);
        }
    }
    // back-edges of each fresh vertex into (fixed ∪ earlier fresh)
    let mut fresh_pos = vec![usize::MAX; g.n()];
    for (i, &v) in fresh.iter().enumerate() {
        fresh_pos[v] = i;
    }
    let back: Vec<Vec<usize>> = fresh
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            g.neighbors(v)
                .iter()
                .copied()
                .filter(|&u| {
                    in_zone.contains(&u)
                        && (second[u].is_some() || (fresh_pos[u] != usize::MAX && fresh_pos[u] < i))
                })
                .collect()
        })
        .collect();

    let k = fresh.len();
    let mut chosen = vec![0u64; k];
    let mut next_cand = vec![0u64; k + 1];
    let mut added: Vec<Vec<u64>> = vec![Vec::new(); k];
    let mut i = 0usize;
    loop {
        if i == k {
            break;
        }
        let mut placed = false;
        while next_cand[i] < size {
            let c = next_cand[i];
            next_cand[i] += 1;
            if excluded.contains(&c) {
                continue;
            }
            let mut tmp = Vec::new();
            let mut ok = true;
            for &u in &back[i] {
                let lu = second[u].unwrap_or_else(|| chosen[fresh_pos[u]]);
                let w = gp.index_add(c, lu);
                if weights.test(w) {
                    ok = false;
                    break;
                }
                weights.set(w);
                tmp.push(w);
            }
            if !ok {
                for &w in &tmp {
                    weights.clear(w);
                }
                continue;
            }
            chosen[i] = c;
            added[i] = tmp;
            placed = true;
            break;
        }
        if placed {
            i += 1;
            if i < k {
                next_cand[i] = 0;
            }
            continue;
        }
        if i == 0 {
            return Err(ConstructError::Stuck(*fresh.first().unwrap_or(&0)));
        }
        i -= 1;
        for &w in &added[i] {
            weights.clear(w);
        }
    }
    for (i, &v) in fresh.iter().enumerate() {
        second[v] = Some(chosen[i]);
    }
    Ok(())
}
