//! Exact computation of es(G), es_g(G), har(G), maximum S₂-sets, the parity
//! obstruction, next primes, the bound-chain report, and the conjecture
//! sweep.
//!
//! All searches are deterministic: vertices in degeneracy order, candidates
//! in ascending element order, so the first solution found is the
//! lexicographically least one and certificates do not depend on worker
//! count. Budgets are explicit; exceeding one yields a typed result, never a
//! wrong answer.

use crate::abelian::{enumerate_groups, AbelianGroup, GroupElement};
use crate::bits::Bitset;
use crate::graphs::{Digraph, Graph};
use crate::labeling::Labeling;
use serde::Serialize;
use std::time::{Duration, Instant};

// ---- primes ----

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Least prime strictly greater than `k`.
pub fn next_prime(k: u64) -> u64 {
    let mut c = k + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

// ---- budgets ----

/// Explicit search budget. The node limit applies per search tree (one group
/// at one order level); the time limit spans the whole operation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget { node_limit: None, time_limit: None };

    pub fn nodes(limit: u64) -> Budget {
        Budget { node_limit: Some(limit), time_limit: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExceededReason {
    /// The sweep ceiling (`s_max`, `k_max` or `t_max`) was exhausted.
    SearchCeiling,
    NodeLimit,
    TimeLimit,
}

#[derive(Debug, Clone, Serialize)]
pub struct Exceeded {
    pub reason: ExceededReason,
    /// The level (s, k or t) at which the computation stopped, when any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stopped_at: Option<u64>,
}

/// Result of a budgeted exact computation: the answer, or a typed "unknown".
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome<T> {
    Computed(T),
    Exceeded(Exceeded),
}

impl<T> Outcome<T> {
    pub fn computed(self) -> Option<T> {
        match self {
            Outcome::Computed(t) => Some(t),
            Outcome::Exceeded(_) => None,
        }
    }

    pub fn as_computed(&self) -> Option<&T> {
        match self {
            Outcome::Computed(t) => Some(t),
            Outcome::Exceeded(_) => None,
        }
    }
}

struct Clock {
    node_limit: u64,
    deadline: Option<Instant>,
    nodes: u64,
    exceeded: Option<ExceededReason>,
}

impl Clock {
    fn new(node_limit: Option<u64>, deadline: Option<Instant>) -> Self {
        Clock {
            node_limit: node_limit.unwrap_or(u64::MAX),
            deadline,
            nodes: 0,
            exceeded: None,
        }
    }

    #[inline]
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            self.exceeded = Some(ExceededReason::NodeLimit);
            return false;
        }
        if self.nodes & 1023 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.exceeded = Some(ExceededReason::TimeLimit);
                    return false;
                }
            }
        }
        true
    }
}

// ---- shared search scaffolding ----

/// Degeneracy witness order plus, per position, the earlier neighbors.
struct SearchOrder {
    order: Vec<usize>,
    back: Vec<Vec<usize>>,
    /// positions of the first-in-order vertex of every component
    component_anchors: Vec<usize>,
}

fn search_order(g: &Graph) -> SearchOrder {
    let order = g.coloring_number().order;
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let back = order
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            g.neighbors(v)
                .iter()
                .copied()
                .filter(|&u| pos[u] < i)
                .collect()
        })
        .collect();
    let component_anchors = g
        .components()
        .iter()
        .map(|comp| comp.iter().map(|&v| pos[v]).min().expect("nonempty component"))
        .collect();
    SearchOrder { order, back, component_anchors }
}

enum GroupStatus {
    Found(Vec<u64>),
    Refuted,
    Exceeded(ExceededReason),
}

/// Exhaustive backtracking for a weight-distinct labeling of `g` in `group`,
/// with the pinned positions fixed to the zero element.
fn dfs_group(
    group: &AbelianGroup,
    n: usize,
    order: &[usize],
    back: &[Vec<usize>],
    pinned: &[bool],
    clock: &mut Clock,
) -> GroupStatus {
    let size = group.order();
    let k = order.len();
    let mut labels = vec![0u64; n];
    if k == 0 {
        return GroupStatus::Found(labels);
    }
    let mut weights = Bitset::new(size);
    let mut next_cand = vec![0u64; k];
    let mut added: Vec<Vec<u64>> = vec![Vec::new(); k];
    let mut i = 0usize;
    loop {
        if i == k {
            return GroupStatus::Found(labels);
        }
        let limit = if pinned[i] { 1 } else { size };
        let mut placed = false;
        while next_cand[i] < limit {
            let c = next_cand[i];
            next_cand[i] += 1;
            if !clock.tick() {
                return GroupStatus::Exceeded(clock.exceeded.expect("tick failed"));
            }
            let mut tmp = Vec::with_capacity(back[i].len());
            let mut ok = true;
            for &u in &back[i] {
                let w = group.index_add(c, labels[u]);
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
            return GroupStatus::Refuted;
        }
        i -= 1;
        for &w in &added[i] {
            weights.clear(w);
        }
    }
}

/// One group evaluation: search with every component anchor pinned to zero
/// first (fast, and complete for forests), then — translation only justifies
/// pinning a single vertex — fall back to pinning the first component alone
/// before accepting a refutation on disconnected graphs.
fn evaluate_group(
    g: &Graph,
    so: &SearchOrder,
    group: &AbelianGroup,
    node_limit: Option<u64>,
    deadline: Option<Instant>,
) -> (GroupStatus, u64) {
    let mut clock = Clock::new(node_limit, deadline);
    let mut pinned = vec![false; so.order.len()];
    for &p in &so.component_anchors {
        pinned[p] = true;
    }
    let first = dfs_group(group, g.n(), &so.order, &so.back, &pinned, &mut clock);
    match first {
        GroupStatus::Refuted if so.component_anchors.len() > 1 => {
            let mut pinned = vec![false; so.order.len()];
            pinned[*so.component_anchors.iter().min().expect("anchors")] = true;
            let second = dfs_group(group, g.n(), &so.order, &so.back, &pinned, &mut clock);
            (second, clock.nodes)
        }
        other => (other, clock.nodes),
    }
}

/// Decides by complete search whether one specific group admits an
/// edge-irregular labeling of the graph: a verifying labeling, or `None`
/// after exhaustion.
pub fn admits_labeling(
    g: &Graph,
    group: &AbelianGroup,
    budget: Budget,
) -> Outcome<Option<Labeling>> {
    let deadline = budget.time_limit.map(|d| Instant::now() + d);
    let so = search_order(g);
    match evaluate_group(g, &so, group, budget.node_limit, deadline) {
        (GroupStatus::Found(indices), _) => {
            let values = indices.iter().map(|&i| group.element_at(i)).collect();
            Outcome::Computed(Some(
                Labeling::new(group.clone(), values).expect("search labels are members"),
            ))
        }
        (GroupStatus::Refuted, _) => Outcome::Computed(None),
        (GroupStatus::Exceeded(reason), _) => {
            Outcome::Exceeded(Exceeded { reason, stopped_at: None })
        }
    }
}

// ---- exact es_g ----

#[derive(Debug, Clone, Serialize)]
pub struct EsgCertificate {
    pub group: AbelianGroup,
    pub labeling: Labeling,
    pub nodes: u64,
}

/// A completed exhaustive search showing that `group` (of order `s`) admits
/// no edge-irregular labeling of the graph.
#[derive(Debug, Clone, Serialize)]
pub struct Refutation {
    pub s: u64,
    pub group: AbelianGroup,
    pub nodes: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EsgResult {
    pub value: u64,
    /// One verifying certificate for every group of the winning order.
    pub certificates: Vec<EsgCertificate>,
    /// One refuted group per failed order below the winning one.
    pub refutations: Vec<Refutation>,
}

enum LevelOutcome {
    AllFound(Vec<(Vec<u64>, u64)>),
    Refuted { index: usize, nodes: u64 },
    Exceeded(ExceededReason),
}

fn evaluate_level(
    g: &Graph,
    so: &SearchOrder,
    groups: &[AbelianGroup],
    node_limit: Option<u64>,
    deadline: Option<Instant>,
    workers: usize,
) -> LevelOutcome {
    // Per-group searches are independent; merged by conjunction in
    // enumeration order so the outcome is identical at any worker count.
    let results: Vec<Option<(GroupStatus, u64)>> = if workers > 1 && groups.len() > 1 {
        let mut slots: Vec<Option<(GroupStatus, u64)>> = Vec::new();
        let w = workers.min(groups.len());
        let partial: Vec<Vec<(usize, (GroupStatus, u64))>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..w)
                .map(|wi| {
                    scope.spawn(move || {
                        let mut local = Vec::new();
                        let mut idx = wi;
                        while idx < groups.len() {
                            let r = evaluate_group(g, so, &groups[idx], node_limit, deadline);
                            local.push((idx, r));
                            idx += w;
                        }
                        local
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        slots.resize_with(groups.len(), || None);
        for chunk in partial {
            for (idx, r) in chunk {
                slots[idx] = Some(r);
            }
        }
        slots
    } else {
        let mut slots: Vec<Option<(GroupStatus, u64)>> = Vec::new();
        slots.resize_with(groups.len(), || None);
        for (idx, grp) in groups.iter().enumerate() {
            let r = evaluate_group(g, so, grp, node_limit, deadline);
            let stop = !matches!(r.0, GroupStatus::Found(_));
            slots[idx] = Some(r);
            if stop {
                break;
            }
        }
        slots
    };

    let mut found = Vec::new();
    for slot in results {
        match slot {
            Some((GroupStatus::Found(labels), nodes)) => found.push((labels, nodes)),
            Some((GroupStatus::Refuted, nodes)) => {
                return LevelOutcome::Refuted { index: found.len(), nodes }
            }
            Some((GroupStatus::Exceeded(reason), _)) => return LevelOutcome::Exceeded(reason),
            None => break,
        }
    }
    if found.len() == groups.len() {
        LevelOutcome::AllFound(found)
    } else {
        // sequential early stop after a non-Found slot; unreachable because
        // the scan above returns on that slot first
        unreachable!("incomplete level without a terminating status")
    }
}

/// Smallest `s ≥ m` such that *every* Abelian group of order `s` admits an
/// edge-irregular labeling. No monotonicity in `s` is assumed; every level is
/// decided by complete search.
pub fn exact_esg(g: &Graph, s_max: u64, budget: Budget, workers: usize) -> Outcome<EsgResult> {
    let deadline = budget.time_limit.map(|d| Instant::now() + d);
    let so = search_order(g);
    let floor = (g.m() as u64).max(1);
    let mut refutations = Vec::new();
    for s in floor..=s_max {
        let groups = enumerate_groups(s);
        match evaluate_level(g, &so, &groups, budget.node_limit, deadline, workers) {
            LevelOutcome::AllFound(per_group) => {
                let certificates = groups
                    .into_iter()
                    .zip(per_group)
                    .map(|(group, (indices, nodes))| {
                        let values = indices.iter().map(|&i| group.element_at(i)).collect();
                        let labeling =
                            Labeling::new(group.clone(), values).expect("search labels are members");
                        EsgCertificate { group, labeling, nodes }
                    })
                    .collect();
                return Outcome::Computed(EsgResult { value: s, certificates, refutations });
            }
            LevelOutcome::Refuted { index, nodes } => {
                refutations.push(Refutation { s, group: groups[index].clone(), nodes });
            }
            LevelOutcome::Exceeded(reason) => {
                return Outcome::Exceeded(Exceeded { reason, stopped_at: Some(s) });
            }
        }
    }
    Outcome::Exceeded(Exceeded { reason: ExceededReason::SearchCeiling, stopped_at: Some(s_max) })
}

// ---- exact es (integer labels) ----

#[derive(Debug, Clone, Serialize)]
pub struct EsResult {
    pub value: u64,
    /// Certificate labels, one integer in `1..=value` per vertex.
    pub labels: Vec<u64>,
    pub nodes: u64,
}

fn dfs_integer(
    n: usize,
    order: &[usize],
    back: &[Vec<usize>],
    k: u64,
    clock: &mut Clock,
) -> GroupStatus {
    let kk = order.len();
    let mut labels = vec![0u64; n];
    if kk == 0 {
        return GroupStatus::Found(labels);
    }
    let mut weights = Bitset::new(2 * k + 1);
    let mut next_cand = vec![1u64; kk];
    let mut added: Vec<Vec<u64>> = vec![Vec::new(); kk];
    let mut i = 0usize;
    loop {
        if i == kk {
            return GroupStatus::Found(labels);
        }
        let mut placed = false;
        while next_cand[i] <= k {
            let c = next_cand[i];
            next_cand[i] += 1;
            if !clock.tick() {
                return GroupStatus::Exceeded(clock.exceeded.expect("tick failed"));
            }
            let mut tmp = Vec::with_capacity(back[i].len());
            let mut ok = true;
            for &u in &back[i] {
                let w = c + labels[u];
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
            added[i] = tmp;
            placed = true;
            break;
        }
        if placed {
            i += 1;
            if i < kk {
                next_cand[i] = 1;
            }
            continue;
        }
        if i == 0 {
            return GroupStatus::Refuted;
        }
        i -= 1;
        for &w in &added[i] {
            weights.clear(w);
        }
    }
}

/// Smallest `k` admitting an edge-irregular integer labeling with labels in
/// `{1, …, k}`; minimality by ascending sweep from the sound floor
/// `max(⌈(m+1)/2⌉, Δ)`.
pub fn exact_es(g: &Graph, k_max: u64, budget: Budget) -> Outcome<EsResult> {
    let deadline = budget.time_limit.map(|d| Instant::now() + d);
    let so = search_order(g);
    let m = g.m() as u64;
    // two sound floors: 2k−1 available sums ≥ m, and the Δ distinct labels
    // forced around a maximum-degree vertex
    let floor = 1u64.max((m + 1).div_ceil(2)).max(g.max_degree() as u64);
    for k in floor..=k_max {
        let mut clock = Clock::new(budget.node_limit, deadline);
        match dfs_integer(g.n(), &so.order, &so.back, k, &mut clock) {
            GroupStatus::Found(labels) => {
                return Outcome::Computed(EsResult { value: k, labels, nodes: clock.nodes })
            }
            GroupStatus::Refuted => continue,
            GroupStatus::Exceeded(reason) => {
                return Outcome::Exceeded(Exceeded { reason, stopped_at: Some(k) })
            }
        }
    }
    Outcome::Exceeded(Exceeded { reason: ExceededReason::SearchCeiling, stopped_at: Some(k_max) })
}

// ---- exact har ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HarRegime {
    /// `t ≥ |V|`: the labeling must be injective.
    Injection,
    /// `t < |V|`: the labeling must be surjective onto `Z_t`.
    Surjection,
}

#[derive(Debug, Clone, Serialize)]
pub struct HarResult {
    pub value: u64,
    pub labels: Vec<u64>,
    pub regime: HarRegime,
    pub nodes: u64,
}

fn dfs_har(
    n: usize,
    order: &[usize],
    back: &[Vec<usize>],
    t: u64,
    injective: bool,
    clock: &mut Clock,
) -> GroupStatus {
    let k = order.len();
    let mut labels = vec![0u64; n];
    if k == 0 {
        return GroupStatus::Found(labels);
    }
    let mut weights = Bitset::new(t);
    let mut used = Bitset::new(t);
    let mut counts = vec![0u32; t as usize];
    let mut distinct = 0u64;
    let mut next_cand = vec![0u64; k];
    let mut added: Vec<Vec<u64>> = vec![Vec::new(); k];
    let mut i = 0usize;
    loop {
        if i == k {
            return GroupStatus::Found(labels);
        }
        // the first position is pinned to 0: translations preserve both
        // injectivity and surjectivity, and shift all weights equally
        let limit = if i == 0 { 1 } else { t };
        let mut placed = false;
        while next_cand[i] < limit {
            let c = next_cand[i];
            next_cand[i] += 1;
            if !clock.tick() {
                return GroupStatus::Exceeded(clock.exceeded.expect("tick failed"));
            }
            if injective && used.test(c) {
                continue;
            }
            if !injective {
                // surjectivity prune: the values still missing must fit in
                // the unassigned vertices
                let new_distinct = distinct + u64::from(counts[c as usize] == 0);
                let missing = t - new_distinct;
                let remaining = (k - i - 1) as u64;
                if missing > remaining {
                    continue;
                }
            }
            let mut tmp = Vec::with_capacity(back[i].len());
            let mut ok = true;
            for &u in &back[i] {
                let w = (c + labels[u]) % t;
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
                used.set(c);
            } else {
                if counts[c as usize] == 0 {
                    distinct += 1;
                }
                counts[c as usize] += 1;
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
        if i == 0 {
            return GroupStatus::Refuted;
        }
        i -= 1;
        for &w in &added[i] {
            weights.clear(w);
        }
        let c = labels[order[i]];
        if injective {
            used.clear(c);
        } else {
            counts[c as usize] -= 1;
            if counts[c as usize] == 0 {
                distinct -= 1;
            }
        }
    }
}

/// Smallest `t` such that a vertex map into `Z_t` — injective when `t ≥ |V|`,
/// surjective when `t < |V|` — has pairwise distinct edge sums mod `t`.
pub fn exact_har(g: &Graph, t_max: u64, budget: Budget) -> Outcome<HarResult> {
    let deadline = budget.time_limit.map(|d| Instant::now() + d);
    let so = search_order(g);
    let floor = (g.m() as u64).max(1);
    for t in floor..=t_max {
        let injective = t >= g.n() as u64;
        let mut clock = Clock::new(budget.node_limit, deadline);
        match dfs_har(g.n(), &so.order, &so.back, t, injective, &mut clock) {
            GroupStatus::Found(labels) => {
                let regime = if injective { HarRegime::Injection } else { HarRegime::Surjection };
                return Outcome::Computed(HarResult { value: t, labels, regime, nodes: clock.nodes });
            }
            GroupStatus::Refuted => continue,
            GroupStatus::Exceeded(reason) => {
                return Outcome::Exceeded(Exceeded { reason, stopped_at: Some(t) })
            }
        }
    }
    Outcome::Exceeded(Exceeded { reason: ExceededReason::SearchCeiling, stopped_at: Some(t_max) })
}

// ---- maximum S₂ (Sidon) sets ----

#[derive(Debug, Clone, Serialize)]
pub struct SidonRecord {
    pub group: AbelianGroup,
    pub elements: Vec<GroupElement>,
    pub size: usize,
}

fn sidon_extend(
    group: &AbelianGroup,
    set: &mut Vec<u64>,
    sums: &mut Bitset,
    start: u64,
    cap: usize,
    best: &mut Vec<u64>,
) {
    if set.len() > best.len() {
        best.clone_from(set);
    }
    if best.len() == cap {
        return;
    }
    let n = group.order();
    for c in start..n {
        if set.len() + (n - c) as usize <= best.len() {
            break;
        }
        let mut tmp = Vec::with_capacity(set.len());
        let mut ok = true;
        for &s in set.iter() {
            let w = group.index_add(c, s);
            if sums.test(w) {
                ok = false;
                break;
            }
            sums.set(w);
            tmp.push(w);
        }
        if ok {
            set.push(c);
            sidon_extend(group, set, sums, c + 1, cap, best);
            set.pop();
        }
        for &w in &tmp {
            sums.clear(w);
        }
        if best.len() == cap {
            return;
        }
    }
}

/// Maximum-cardinality S₂-set: all sums of two *different* members are
/// pairwise distinct. Sidon sets translate, so the search fixes 0 as the
/// first member and still finds the lexicographically least maximum set.
pub fn max_sidon(group: &AbelianGroup) -> SidonRecord {
    let n = group.order();
    // k(k−1)/2 pairwise sums must be distinct, so k(k−1)/2 ≤ n caps the size
    let mut cap = 1usize;
    while (cap as u64 + 1) * (cap as u64) / 2 <= n {
        cap += 1;
    }
    let mut set = vec![0u64];
    let mut best = vec![0u64];
    let mut sums = Bitset::new(n);
    sidon_extend(group, &mut set, &mut sums, 1, cap, &mut best);
    let elements: Vec<GroupElement> = best.iter().map(|&i| group.element_at(i)).collect();
    SidonRecord { group: group.clone(), size: elements.len(), elements }
}

// ---- parity obstruction ----

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionCertificate {
    pub group: AbelianGroup,
    pub m: usize,
    pub element_sum: GroupElement,
    pub explanation: String,
}

/// Fires iff every vertex degree is even, `m = |G|` and the 2-part of the
/// group is a single Z_2. Then the `m` weights would have to biject onto the
/// group, whose element sum has Z_2-coordinate 1; but the weight sum equals
/// `Σ deg(v)·w(v)`, which lies in the doubled subgroup `2G`, of
/// Z_2-coordinate 0.
pub fn parity_obstruction(g: &Graph, group: &AbelianGroup) -> Option<ObstructionCertificate> {
    let all_even = (0..g.n()).all(|v| g.degree(v) % 2 == 0);
    if !all_even || g.m() as u64 != group.order() || !group.sylow_two_is_z2() {
        return None;
    }
    let element_sum = group.element_sum();
    let explanation = format!(
        "an edge-irregular labeling would make the {} edge weights biject onto {}; \
         the sum of all its elements is {}, of odd 2-part, yet every degree is even, \
         so the weight sum 2·Σw(v) lies in the doubled subgroup of even 2-part — \
         no such labeling exists",
        g.m(),
        group,
        element_sum,
    );
    Some(ObstructionCertificate { group: group.clone(), m: g.m(), element_sum, explanation })
}

// ---- bounds report ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSource {
    Pigeonhole,
    Parity,
    CompleteGraph,
    GreedyCol,
    Planar,
    BipartiteEmbed,
    PrimeSandwichEs,
    PrimeSandwichHar,
    Dag,
}

#[derive(Debug, Clone, Serialize)]
pub struct Bound {
    pub value: u64,
    pub source: BoundSource,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct ExactValues {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub es: Option<EsResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub es_g: Option<EsgResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub har: Option<HarResult>,
}

/// Every lower and upper bound the theory provides for one graph, with
/// provenance per bound, plus exact values when the budget allowed them.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub col: usize,
    pub lower: Vec<Bound>,
    pub upper: Vec<Bound>,
    pub exact: ExactValues,
}

fn is_complete(g: &Graph) -> bool {
    g.n() >= 1 && g.m() == g.n() * (g.n() - 1) / 2
}

/// `(col − 1)(m − 1) + 1`, the greedy guarantee order.
pub fn col_upper_bound(col: usize, m: usize) -> u64 {
    (col as u64 - 1) * (m.saturating_sub(1) as u64) + 1
}

/// `(m − 1)·min{Δ⁻, Δ⁺} + 1` for DAG difference labelings.
pub fn dag_upper_bound(d: &Digraph) -> u64 {
    let m = d.m() as u64;
    m.saturating_sub(1) * (d.max_in_degree().min(d.max_out_degree()) as u64) + 1
}

pub fn bounds_report(
    g: &Graph,
    graph_id: &str,
    planar_declared: bool,
    budget: Budget,
    workers: usize,
) -> BoundsReport {
    let n = g.n();
    let m = g.m();
    let col = g.coloring_number().col;

    let mut lower = vec![Bound { value: m as u64, source: BoundSource::Pigeonhole }];
    let all_even = (0..n).all(|v| g.degree(v) % 2 == 0);
    if m >= 1 && m % 4 == 2 && all_even {
        // every Abelian group of order ≡ 2 (mod 4) has Z_2 as its 2-part, so
        // the parity obstruction rules out the pigeonhole floor itself
        lower.push(Bound { value: m as u64 + 1, source: BoundSource::Parity });
    }
    if is_complete(g) && n >= 3 {
        lower.push(Bound { value: (n * n - 3 * n) as u64, source: BoundSource::CompleteGraph });
    }

    let mut upper = Vec::new();
    if n >= 4 {
        upper.push(Bound { value: col_upper_bound(col, m), source: BoundSource::GreedyCol });
        if planar_declared {
            upper.push(Bound { value: (5 * m - 4) as u64, source: BoundSource::Planar });
        }
    }
    if g.bipartition().is_some() {
        let nn = n as u64;
        upper.push(Bound {
            value: (nn * nn - 1).div_ceil(4),
            source: BoundSource::BipartiteEmbed,
        });
    }

    let mut exact = ExactValues::default();
    let ceiling = col_upper_bound(col, m).max(m as u64).max(1);
    exact.es = exact_es(g, ceiling, budget).computed();
    if let Some(es) = &exact.es {
        upper.push(Bound { value: next_prime(2 * es.value), source: BoundSource::PrimeSandwichEs });
    }
    exact.es_g = exact_esg(g, ceiling, budget, workers).computed();
    let har_ceiling = n as u64 + (col as u64 - 1) * (m.saturating_sub(1) as u64);
    exact.har = exact_har(g, har_ceiling.max(1), budget).computed();
    if let Some(har) = &exact.har {
        upper.push(Bound { value: next_prime(2 * har.value), source: BoundSource::PrimeSandwichHar });
    }

    let report = BoundsReport { graph: graph_id.to_string(), n, m, col, lower, upper, exact };
    enforce_consistency(&report);
    report
}

/// Bound bracket for a DAG: pigeonhole floor and the difference-labeling
/// upper bound.
#[derive(Debug, Clone, Serialize)]
pub struct DagBoundsReport {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub max_in_degree: usize,
    pub max_out_degree: usize,
    pub lower: Vec<Bound>,
    pub upper: Vec<Bound>,
}

pub fn dag_bounds_report(d: &Digraph, graph_id: &str) -> DagBoundsReport {
    DagBoundsReport {
        graph: graph_id.to_string(),
        n: d.n(),
        m: d.m(),
        max_in_degree: d.max_in_degree(),
        max_out_degree: d.max_out_degree(),
        lower: vec![Bound { value: d.m() as u64, source: BoundSource::Pigeonhole }],
        upper: vec![Bound { value: dag_upper_bound(d), source: BoundSource::Dag }],
    }
}

fn enforce_consistency(r: &BoundsReport) {
    let max_lower = r.lower.iter().map(|b| b.value).max().unwrap_or(0);
    let min_upper = r.upper.iter().map(|b| b.value).min();
    if let Some(mu) = min_upper {
        assert!(
            max_lower <= mu,
            "bounds crossed for {}: lower {} > upper {}",
            r.graph,
            max_lower,
            mu
        );
    }
    if let Some(esg) = &r.exact.es_g {
        assert!(esg.value >= max_lower, "es_g below a proven lower bound");
        if let Some(mu) = min_upper {
            assert!(esg.value <= mu, "es_g above a proven upper bound");
        }
        if let Some(es) = &r.exact.es {
            assert!(es.value <= esg.value, "es must not exceed es_g");
            assert!(esg.value <= next_prime(2 * es.value), "es_g above p(2·es)");
            if let Some(har) = &r.exact.har {
                assert!(es.value <= har.value, "es must not exceed har");
                assert!(
                    next_prime(2 * es.value) <= next_prime(2 * har.value),
                    "prime sandwich out of order"
                );
            }
        }
    }
}

// ---- conjecture sweep ----

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub id: String,
    pub n: usize,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub es_g: Option<u64>,
    /// `es_g(G) − 2m`; the conjecture asks whether some constant bounds this.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CMarginCount {
    pub c: i64,
    pub violations: usize,
    pub holds_for_all_computed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub c_grid: Vec<CMarginCount>,
}

/// Computes `es_g − 2m` margins over a corpus. Emits data only; makes no
/// truth claim about the conjecture.
pub fn conjecture_sweep(
    corpus: &[(String, Graph)],
    c_grid: &[i64],
    budget: Budget,
    workers: usize,
) -> SweepReport {
    let rows: Vec<SweepRow> = corpus
        .iter()
        .map(|(id, g)| {
            let col = g.coloring_number().col;
            let ceiling = col_upper_bound(col, g.m()).max(g.m() as u64).max(1);
            let es_g = exact_esg(g, ceiling, budget, workers)
                .computed()
                .map(|r| r.value);
            let margin = es_g.map(|v| v as i64 - 2 * g.m() as i64);
            SweepRow { id: id.clone(), n: g.n(), m: g.m(), es_g, margin }
        })
        .collect();
    let computed: Vec<i64> = rows.iter().filter_map(|r| r.margin).collect();
    let c_grid = c_grid
        .iter()
        .map(|&c| {
            let violations = computed.iter().filter(|&&margin| margin > c).count();
            CMarginCount { c, violations, holds_for_all_computed: violations == 0 }
        })
        .collect();
    SweepReport { rows, c_grid }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::is_edge_irregular;

    fn grp(spec: &str) -> AbelianGroup {
        spec.parse().unwrap()
    }

    #[test]
    fn next_prime_examples() {
        assert_eq!(next_prime(10), 11);
        assert_eq!(next_prime(22), 23);
        assert_eq!(next_prime(13), 17);
        assert_eq!(next_prime(0), 2);
        assert_eq!(next_prime(1), 2);
    }

    #[test]
    fn primality_matches_sieve() {
        // independent sieve oracle
        let n = 2000usize;
        let mut composite = vec![false; n + 1];
        for p in 2..=n {
            if !composite[p] {
                let mut q = p * p;
                while q <= n {
                    composite[q] = true;
                    q += p;
                }
            }
        }
        for x in 0..=n {
            assert_eq!(is_prime(x as u64), x >= 2 && !composite[x], "{x}");
        }
    }

    #[test]
    fn es_single_edge() {
        let g = Graph::path(2).unwrap();
        let r = exact_es(&g, 10, Budget::UNLIMITED).computed().unwrap();
        assert_eq!(r.value, 1);
        assert_eq!(r.labels, [1, 1]);
    }

    /// Independent brute-force oracle for es: enumerate all k^n labelings.
    fn brute_force_es(g: &Graph, k_max: u64) -> Option<u64> {
        for k in 1..=k_max {
            let mut labels = vec![1u64; g.n()];
            loop {
                let sums: Vec<u64> = g.edges().iter().map(|&(u, v)| labels[u] + labels[v]).collect();
                let mut sorted = sums.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() == sums.len() {
                    return Some(k);
                }
                let mut i = 0;
                loop {
                    if i == g.n() {
                        break;
                    }
                    labels[i] += 1;
                    if labels[i] <= k {
                        break;
                    }
                    labels[i] = 1;
                    i += 1;
                }
                if i == g.n() {
                    break;
                }
            }
        }
        None
    }

    #[test]
    fn es_matches_brute_force() {
        let corpus = vec![
            Graph::path(3).unwrap(),
            Graph::path(4).unwrap(),
            Graph::star(5).unwrap(), // K_{1,4}
            Graph::complete(3).unwrap(),
            Graph::complete(4).unwrap(),
            Graph::cycle(4).unwrap(),
            Graph::cycle(5).unwrap(),
        ];
        for g in &corpus {
            let expected = brute_force_es(g, 12).unwrap();
            let got = exact_es(g, 12, Budget::UNLIMITED).computed().unwrap();
            assert_eq!(got.value, expected);
            // certificate check
            let sums: Vec<u64> = g.edges().iter().map(|&(u, v)| got.labels[u] + got.labels[v]).collect();
            let mut s = sums.clone();
            s.sort_unstable();
            s.dedup();
            assert_eq!(s.len(), sums.len());
            assert!(got.labels.iter().all(|&l| 1 <= l && l <= got.value));
        }
    }

    #[test]
    fn es_p3_and_star() {
        assert_eq!(
            exact_es(&Graph::path(3).unwrap(), 10, Budget::UNLIMITED).computed().unwrap().value,
            2
        );
        // K_{1,4}: leaf labels must be distinct, so es = 4
        assert_eq!(
            exact_es(&Graph::star(5).unwrap(), 10, Budget::UNLIMITED).computed().unwrap().value,
            4
        );
    }

    #[test]
    fn har_triangle_is_three() {
        let g = Graph::complete(3).unwrap();
        let r = exact_har(&g, 10, Budget::UNLIMITED).computed().unwrap();
        assert_eq!(r.value, 3);
        assert_eq!(r.regime, HarRegime::Injection);
    }

    /// Independent brute-force oracle for har over all t^n maps.
    fn brute_force_har(g: &Graph, t_max: u64) -> Option<(u64, HarRegime)> {
        for t in 1..=t_max {
            let mut labels = vec![0u64; g.n()];
            loop {
                let injective_needed = t >= g.n() as u64;
                let mut admissible = true;
                if injective_needed {
                    let mut seen = vec![false; t as usize];
                    for &l in &labels {
                        if seen[l as usize] {
                            admissible = false;
                            break;
                        }
                        seen[l as usize] = true;
                    }
                } else {
                    let mut seen = vec![false; t as usize];
                    for &l in &labels {
                        seen[l as usize] = true;
                    }
                    admissible = seen.iter().all(|&b| b);
                }
                if admissible {
                    let sums: Vec<u64> =
                        g.edges().iter().map(|&(u, v)| (labels[u] + labels[v]) % t).collect();
                    let mut s = sums.clone();
                    s.sort_unstable();
                    s.dedup();
                    if s.len() == sums.len() {
                        let regime = if injective_needed {
                            HarRegime::Injection
                        } else {
                            HarRegime::Surjection
                        };
                        return Some((t, regime));
                    }
                }
                let mut i = 0;
                loop {
                    if i == g.n() {
                        break;
                    }
                    labels[i] += 1;
                    if labels[i] < t {
                        break;
                    }
                    labels[i] = 0;
                    i += 1;
                }
                if i == g.n() {
                    break;
                }
            }
        }
        None
    }

    #[test]
    fn har_matches_brute_force() {
        let corpus = vec![
            Graph::path(3).unwrap(),
            Graph::path(4).unwrap(),
            Graph::complete(3).unwrap(),
            Graph::complete(4).unwrap(),
            Graph::star(4).unwrap(),
            Graph::cycle(4).unwrap(),
        ];
        for g in &corpus {
            let (expected, regime) = brute_force_har(g, 12).unwrap();
            let got = exact_har(g, 12, Budget::UNLIMITED).computed().unwrap();
            assert_eq!(got.value, expected, "har mismatch");
            assert_eq!(got.regime, regime);
        }
    }

    #[test]
    fn har_p3_uses_surjection_regime() {
        // P3: t = 2 < n = 3, surjection onto Z_2 with distinct sums exists.
        let g = Graph::path(3).unwrap();
        let r = exact_har(&g, 10, Budget::UNLIMITED).computed().unwrap();
        assert_eq!(r.value, 2);
        assert_eq!(r.regime, HarRegime::Surjection);
    }

    #[test]
    fn esg_k23_is_six() {
        let g = Graph::complete_bipartite(2, 3).unwrap();
        let r = exact_esg(&g, 20, Budget::UNLIMITED, 1).computed().unwrap();
        assert_eq!(r.value, 6);
        for cert in &r.certificates {
            assert!(is_edge_irregular(&g, &cert.labeling).unwrap().irregular);
        }
    }

    #[test]
    fn esg_certificates_verify_and_are_deterministic() {
        let g = Graph::cycle(6).unwrap();
        let a = exact_esg(&g, 20, Budget::UNLIMITED, 1).computed().unwrap();
        let b = exact_esg(&g, 20, Budget::UNLIMITED, 4).computed().unwrap();
        assert_eq!(a.value, 7);
        assert_eq!(a.value, b.value);
        assert_eq!(a.refutations.len(), b.refutations.len());
        for (x, y) in a.certificates.iter().zip(&b.certificates) {
            assert_eq!(x.labeling, y.labeling);
            assert_eq!(x.nodes, y.nodes);
        }
        // s = 6 was refuted (the parity obstruction instance, by exhaustion)
        assert_eq!(a.refutations[0].s, 6);
        assert_eq!(a.refutations[0].group.to_string(), "Z2xZ3");
    }

    #[test]
    fn esg_budget_exceeded_is_typed() {
        let g = Graph::complete(5).unwrap();
        match exact_esg(&g, 20, Budget::nodes(50), 1) {
            Outcome::Exceeded(e) => {
                assert_eq!(e.reason, ExceededReason::NodeLimit);
                assert_eq!(e.stopped_at, Some(10));
            }
            Outcome::Computed(_) => panic!("a 50-node budget cannot finish K_5"),
        }
    }

    #[test]
    fn esg_ceiling_exhaustion_is_typed() {
        let g = Graph::cycle(6).unwrap();
        match exact_esg(&g, 6, Budget::UNLIMITED, 1) {
            Outcome::Exceeded(e) => assert_eq!(e.reason, ExceededReason::SearchCeiling),
            Outcome::Computed(_) => panic!("es_g(C_6) = 7 > 6"),
        }
    }

    #[test]
    fn sidon_examples() {
        assert_eq!(max_sidon(&grp("Z2")).size, 2);
        let r = max_sidon(&grp("Z11"));
        assert_eq!(r.size, 5);
        let r19 = max_sidon(&grp("Z19"));
        assert_eq!(r19.size, 6);
        // verify the S₂ property of the returned sets by brute force
        for rec in [r, r19] {
            let g = &rec.group;
            let mut sums = std::collections::HashSet::new();
            for i in 0..rec.elements.len() {
                for j in i + 1..rec.elements.len() {
                    let s = g.add(&rec.elements[i], &rec.elements[j]).unwrap();
                    assert!(sums.insert(s), "pair sums collide in {}", g);
                }
            }
        }
    }

    /// Independent oracle: maximum S₂-set size by subset enumeration.
    fn brute_force_sidon(group: &AbelianGroup) -> usize {
        let n = group.order() as usize;
        let mut best = 0;
        for mask in 0u64..(1u64 << n) {
            let members: Vec<u64> = (0..n as u64).filter(|&i| mask >> i & 1 == 1).collect();
            if members.len() <= best {
                continue;
            }
            let mut sums = std::collections::HashSet::new();
            let mut ok = true;
            'outer: for i in 0..members.len() {
                for j in i + 1..members.len() {
                    if !sums.insert(group.index_add(members[i], members[j])) {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            if ok {
                best = members.len();
            }
        }
        best
    }

    #[test]
    fn sidon_matches_brute_force_on_small_groups() {
        for n in 1..=13u64 {
            for group in enumerate_groups(n) {
                assert_eq!(max_sidon(&group).size, brute_force_sidon(&group), "group {group}");
            }
        }
    }

    #[test]
    fn parity_obstruction_examples() {
        let c6 = Graph::cycle(6).unwrap();
        let ob = parity_obstruction(&c6, &grp("Z6"));
        assert!(ob.is_some());
        let ob = ob.unwrap();
        assert_eq!(ob.m, 6);
        assert_eq!(ob.element_sum.residues(), [3]);

        assert!(parity_obstruction(&Graph::cycle(5).unwrap(), &grp("Z5")).is_none());
        assert!(parity_obstruction(&Graph::cycle(8).unwrap(), &grp("Z8")).is_none());
        // odd degree somewhere: no obstruction even with matching order
        assert!(parity_obstruction(&Graph::path(7).unwrap(), &grp("Z6")).is_none());
        // order mismatch: no obstruction
        assert!(parity_obstruction(&c6, &grp("Z10")).is_none());
    }

    #[test]
    fn bounds_report_p4() {
        let g = Graph::path(4).unwrap();
        let r = bounds_report(&g, "path:4", false, Budget::UNLIMITED, 1);
        assert_eq!(r.col, 2);
        assert!(r
            .lower
            .iter()
            .any(|b| b.source == BoundSource::Pigeonhole && b.value == 3));
        assert!(r
            .upper
            .iter()
            .any(|b| b.source == BoundSource::GreedyCol && b.value == 3));
        assert_eq!(r.exact.es_g.as_ref().unwrap().value, 3);
    }

    #[test]
    fn bounds_report_c6_parity() {
        let g = Graph::cycle(6).unwrap();
        let r = bounds_report(&g, "cycle:6", false, Budget::UNLIMITED, 1);
        assert!(r
            .lower
            .iter()
            .any(|b| b.source == BoundSource::Parity && b.value == 7));
        assert_eq!(r.exact.es_g.as_ref().unwrap().value, 7);
    }

    #[test]
    fn dag_bound_value() {
        let d = Digraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        // m = 3, Δ⁻ = 2, Δ⁺ = 2 → (3−1)·2+1 = 5
        assert_eq!(dag_upper_bound(&d), 5);
        let r = dag_bounds_report(&d, "tri");
        assert_eq!(r.upper[0].value, 5);
        assert_eq!(r.lower[0].value, 3);
    }

    #[test]
    fn sweep_margins() {
        let corpus = vec![
            ("path:4".to_string(), Graph::path(4).unwrap()),
            ("cycle:6".to_string(), Graph::cycle(6).unwrap()),
        ];
        let r = conjecture_sweep(&corpus, &[0, 2], Budget::UNLIMITED, 1);
        assert_eq!(r.rows[0].margin, Some(3 - 6)); // forests: m − 2m = −m
        assert_eq!(r.rows[1].margin, Some(7 - 12));
        assert!(r.c_grid.iter().all(|c| c.holds_for_all_computed));
    }
}
