//! Simple undirected graphs, a directed variant, generators, and the
//! coloring-number (degeneracy) machinery.
//!
//! Vertices are dense integers `0..n`; external names are mapped at the I/O
//! boundary. Disconnected graphs are first-class.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("invalid size for {what}: {got}")]
    InvalidSize { what: &'static str, got: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {v} out of range (n = {n})")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("cannot parse graph: {0}")]
    Parse(String),
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list. Edges are normalized to `u < v` and
    /// sorted; self-loops and duplicates are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut es: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { v, n });
                }
            }
            es.push((a.min(b), a.max(b)));
        }
        es.sort_unstable();
        if let Some(w) = es.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &es {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph { n, edges: es, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order with `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    // ---- generators ----

    pub fn path(n: usize) -> Result<Self, GraphError> {
        if n < 1 {
            return Err(GraphError::InvalidSize { what: "path", got: n });
        }
        Graph::new(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::InvalidSize { what: "cycle", got: n });
        }
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Star on `n` vertices: center 0, leaves `1..n`.
    pub fn star(n: usize) -> Result<Self, GraphError> {
        if n < 1 {
            return Err(GraphError::InvalidSize { what: "star", got: n });
        }
        Graph::new(n, (1..n).map(|i| (0, i)))
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        if n < 1 {
            return Err(GraphError::InvalidSize { what: "complete", got: n });
        }
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    /// `K_{m,n}` with parts `0..m` and `m..m+n`.
    pub fn complete_bipartite(m: usize, n: usize) -> Result<Self, GraphError> {
        if m < 1 || n < 1 {
            return Err(GraphError::InvalidSize { what: "complete_bipartite", got: m.min(n) });
        }
        Graph::new(m + n, (0..m).flat_map(|u| (m..m + n).map(move |v| (u, v))))
    }

    /// A random forest on `n` vertices: each vertex after the first either
    /// starts a new tree or attaches to a uniformly random earlier vertex.
    pub fn random_forest(n: usize, seed: u64) -> Result<Self, GraphError> {
        if n < 1 {
            return Err(GraphError::InvalidSize { what: "random_forest", got: n });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for i in 1..n {
            if rng.random_bool(0.25) {
                continue; // new tree root
            }
            let j = rng.random_range(0..i);
            edges.push((j, i));
        }
        Graph::new(n, edges)
    }

    /// Erdős–Rényi `G(n, p)`, deterministic for a fixed seed.
    pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Self, GraphError> {
        if n < 1 {
            return Err(GraphError::InvalidSize { what: "random_graph", got: n });
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(GraphError::BadProbability(p));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, edges)
    }

    pub fn disjoint_union(parts: &[Graph]) -> Graph {
        let mut edges = Vec::new();
        let mut offset = 0;
        for g in parts {
            edges.extend(g.edges.iter().map(|&(u, v)| (u + offset, v + offset)));
            offset += g.n;
        }
        Graph::new(offset, edges).expect("union of valid graphs is valid")
    }

    // ---- structure ----

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_forest(&self) -> bool {
        self.m() + self.components().len() == self.n
    }

    /// Induced subgraph on `verts` (sorted, duplicate-free); returns the
    /// subgraph and the new→old vertex map.
    pub fn induced(&self, verts: &[usize]) -> (Graph, Vec<usize>) {
        debug_assert!(verts.windows(2).all(|w| w[0] < w[1]));
        let mut old_to_new = vec![usize::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            old_to_new[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| old_to_new[u] != usize::MAX && old_to_new[v] != usize::MAX)
            .map(|&(u, v)| (old_to_new[u], old_to_new[v]));
        let g = Graph::new(verts.len(), edges).expect("induced subgraph of a valid graph");
        (g, verts.to_vec())
    }

    /// A bipartition `(left, right)` if one exists.
    pub fn bipartition(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut side = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut queue = vec![s];
            let mut head = 0;
            while head < queue.len() {
                let u = queue[head];
                head += 1;
                for &w in &self.adj[u] {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[u];
                        queue.push(w);
                    } else if side[w] == side[u] {
                        return None;
                    }
                }
            }
        }
        let left = (0..self.n).filter(|&v| side[v] == 0).collect();
        let right = (0..self.n).filter(|&v| side[v] == 1).collect();
        Some((left, right))
    }

    /// Coloring number and a witness ordering: every vertex has at most
    /// `col − 1` neighbors preceding it in the sequence. Computed by repeated
    /// minimum-degree removal with lowest-index tie-breaking; the witness is
    /// the reverse removal order, and `col` = degeneracy + 1.
    pub fn coloring_number(&self) -> ColoringNumber {
        let mut deg: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        let mut removed = vec![false; self.n];
        let mut removal = Vec::with_capacity(self.n);
        let mut degeneracy = 0;
        for _ in 0..self.n {
            let v = (0..self.n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| (deg[v], v))
                .expect("vertices remain");
            degeneracy = degeneracy.max(deg[v]);
            removed[v] = true;
            removal.push(v);
            for &w in &self.adj[v] {
                if !removed[w] {
                    deg[w] -= 1;
                }
            }
        }
        removal.reverse();
        ColoringNumber { col: degeneracy + 1, order: removal }
    }

    // ---- I/O ----

    /// Edge-list text: first line `n m`, then `m` lines `u v`.
    pub fn to_edge_list_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn from_edge_list_text(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| GraphError::Parse("empty input".into()))?;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GraphError::Parse(format!("bad header {header:?}")))?;
        let m: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GraphError::Parse(format!("bad header {header:?}")))?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| GraphError::Parse(format!("bad edge line {line:?}")))?;
            let v: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| GraphError::Parse(format!("bad edge line {line:?}")))?;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(GraphError::Parse(format!(
                "header promises {m} edges, found {}",
                edges.len()
            )));
        }
        Graph::new(n, edges)
    }

    /// DOT export; optional per-vertex labels for visual inspection.
    pub fn to_dot(&self, labels: Option<&[String]>) -> String {
        let mut s = String::from("graph G {\n");
        for v in 0..self.n {
            match labels.and_then(|ls| ls.get(v)) {
                Some(l) => s.push_str(&format!("  {v} [label=\"{v}: {l}\"];\n")),
                None => s.push_str(&format!("  {v};\n")),
            }
        }
        for &(u, v) in &self.edges {
            s.push_str(&format!("  {u} -- {v};\n"));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson {
            schema: 1,
            n: self.n,
            edges: self.edges.clone(),
        })
        .expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let raw: GraphJson =
            serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        Graph::new(raw.n, raw.edges)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    schema: u32,
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// Witnessed coloring number; see [`Graph::coloring_number`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringNumber {
    pub col: usize,
    pub order: Vec<usize>,
}

/// A directed graph without self-loops or repeated arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut list: Vec<(usize, usize)> = Vec::new();
        for (u, v) in arcs {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { v: w, n });
                }
            }
            list.push((u, v));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(u, v) in &list {
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        Ok(Digraph { n, arcs: list, out_adj, in_adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.arcs.len()
    }

    /// Arcs `(tail, head)` in lexicographic order.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn max_in_degree(&self) -> usize {
        (0..self.n).map(|v| self.in_adj[v].len()).max().unwrap_or(0)
    }

    pub fn max_out_degree(&self) -> usize {
        (0..self.n).map(|v| self.out_adj[v].len()).max().unwrap_or(0)
    }

    /// DOT export; optional per-vertex labels.
    pub fn to_dot(&self, labels: Option<&[String]>) -> String {
        let mut s = String::from("digraph G {\n");
        for v in 0..self.n {
            match labels.and_then(|ls| ls.get(v)) {
                Some(l) => s.push_str(&format!("  {v} [label=\"{v}: {l}\"];\n")),
                None => s.push_str(&format!("  {v};\n")),
            }
        }
        for &(u, v) in &self.arcs {
            s.push_str(&format!("  {u} -> {v};\n"));
        }
        s.push_str("}\n");
        s
    }

    /// Kahn's algorithm with lowest-index tie-breaking. On a cycle, returns
    /// an explicit closed walk as the witness instead of failing.
    pub fn topological_order(&self) -> TopoResult {
        let mut indeg: Vec<usize> = (0..self.n).map(|v| self.in_adj[v].len()).collect();
        let mut placed = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        loop {
            let next = (0..self.n).find(|&v| !placed[v] && indeg[v] == 0);
            match next {
                Some(v) => {
                    placed[v] = true;
                    order.push(v);
                    for &w in &self.out_adj[v] {
                        indeg[w] -= 1;
                    }
                }
                None => break,
            }
        }
        if order.len() == self.n {
            return TopoResult::Order(order);
        }
        // Remaining vertices all have an unplaced in-neighbor; walk backwards
        // until a vertex repeats, then cut out the cycle.
        let start = (0..self.n).find(|&v| !placed[v]).expect("a vertex remains");
        let mut path = vec![start];
        let mut pos = vec![usize::MAX; self.n];
        pos[start] = 0;
        loop {
            let u = *path.last().unwrap();
            let prev = *self.in_adj[u]
                .iter()
                .find(|&&w| !placed[w])
                .expect("unplaced vertex keeps an unplaced in-neighbor");
            if pos[prev] != usize::MAX {
                let mut cycle: Vec<usize> = path[pos[prev]..].to_vec();
                cycle.reverse(); // follow arc direction
                return TopoResult::Cycle(cycle);
            }
            pos[prev] = path.len();
            path.push(prev);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TopoResult {
    Order(Vec<usize>),
    Cycle(Vec<usize>),
}

/// The four vertex classes of the split construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quadrant {
    V11,
    V12,
    V21,
    V22,
}

impl Quadrant {
    fn row(self) -> u8 {
        match self {
            Quadrant::V11 | Quadrant::V12 => 1,
            Quadrant::V21 | Quadrant::V22 => 2,
        }
    }

    fn column(self) -> u8 {
        match self {
            Quadrant::V11 | Quadrant::V21 => 1,
            Quadrant::V12 | Quadrant::V22 => 2,
        }
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Quadrant::V11 => "V11",
            Quadrant::V12 => "V12",
            Quadrant::V21 => "V21",
            Quadrant::V22 => "V22",
        };
        write!(f, "{s}")
    }
}

/// Assignment of every vertex to one of `V11, V12, V21, V22`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourSetPartition {
    classes: Vec<Quadrant>,
}

impl FourSetPartition {
    pub fn new(classes: Vec<Quadrant>) -> Self {
        FourSetPartition { classes }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class(&self, v: usize) -> Quadrant {
        self.classes[v]
    }

    pub fn members(&self, q: Quadrant) -> Vec<usize> {
        (0..self.classes.len()).filter(|&v| self.classes[v] == q).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionViolation {
    /// Size mismatch between partition and graph.
    WrongLength { expected: usize, got: usize },
    /// Edge `u-v` with endpoints in different rows, not both in column 1.
    ForbiddenEdge { u: usize, v: usize, qu: Quadrant, qv: Quadrant },
    /// One of the three cardinality caps `≤ ⌈n/2⌉` exceeded.
    CardinalityExceeded { sets: &'static str, size: usize, cap: usize },
}

impl fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionViolation::WrongLength { expected, got } => {
                write!(f, "partition covers {got} vertices, graph has {expected}")
            }
            PartitionViolation::ForbiddenEdge { u, v, qu, qv } => {
                write!(f, "edge {u}-{v} joins {qu} and {qv}")
            }
            PartitionViolation::CardinalityExceeded { sets, size, cap } => {
                write!(f, "|{sets}| = {size} exceeds ⌈n/2⌉ = {cap}")
            }
        }
    }
}

/// Checks the edge condition (`x ∈ V_ij`, `y ∈ V_kl` ⟹ `i = k` or `j = l = 1`)
/// and the three cardinality caps. Violations are data, not errors.
pub fn validate_four_set_partition(g: &Graph, p: &FourSetPartition) -> Vec<PartitionViolation> {
    let mut out = Vec::new();
    if p.len() != g.n() {
        out.push(PartitionViolation::WrongLength { expected: g.n(), got: p.len() });
        return out;
    }
    for &(u, v) in g.edges() {
        let (qu, qv) = (p.class(u), p.class(v));
        let same_row = qu.row() == qv.row();
        let both_col1 = qu.column() == 1 && qv.column() == 1;
        if !(same_row || both_col1) {
            out.push(PartitionViolation::ForbiddenEdge { u, v, qu, qv });
        }
    }
    let cap = g.n().div_ceil(2);
    let count = |q: Quadrant| p.members(q).len();
    for (sets, size) in [
        ("V11+V12", count(Quadrant::V11) + count(Quadrant::V12)),
        ("V11+V21", count(Quadrant::V11) + count(Quadrant::V21)),
        ("V21+V22", count(Quadrant::V21) + count(Quadrant::V22)),
    ] {
        if size > cap {
            out.push(PartitionViolation::CardinalityExceeded { sets, size, cap });
        }
    }
    out
}
