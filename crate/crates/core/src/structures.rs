//! Enumeration of k-cycles and k-cliques, the structure/edge incidence
//! matrix, and cover feasibility checks.

use std::fmt;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicUsize, Ordering};

use thiserror::Error;

use crate::graph::{Edge, EdgeSet, GraphError, Vertex, WeightedGraph};
use crate::parallel::Execution;

pub const DEFAULT_MAX_STRUCTURES: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StructureKind {
    Cycle,
    Clique,
}

impl StructureKind {
    /// Number of edges in one structure of size `k`.
    pub fn edge_count(self, k: usize) -> usize {
        match self {
            StructureKind::Cycle => k,
            StructureKind::Clique => k * (k - 1) / 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StructureKind::Cycle => "cycle",
            StructureKind::Clique => "clique",
        }
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("structure size k = {0} is below 3")]
    InvalidK(usize),
    #[error("enumeration cap of {cap} structures exceeded (reached {reached})")]
    CapExceeded { cap: usize, reached: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug)]
pub struct EnumConfig {
    pub max_structures: usize,
    pub execution: Execution,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { max_structures: DEFAULT_MAX_STRUCTURES, execution: Execution::default() }
    }
}

/// A k-cycle or k-clique of a host graph.
///
/// For a cycle the key is the vertex sequence rotated to start at its
/// smallest vertex and oriented so the second vertex is smaller than the
/// last. For a clique it is the sorted vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeStructure {
    kind: StructureKind,
    key: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl EdgeStructure {
    fn cycle(key: &[Vertex]) -> Self {
        let k = key.len();
        let mut edges: Vec<Edge> = (0..k).map(|i| Edge::new(key[i], key[(i + 1) % k])).collect();
        edges.sort_unstable();
        EdgeStructure { kind: StructureKind::Cycle, key: key.to_vec(), edges }
    }

    fn clique(key: &[Vertex]) -> Self {
        let mut edges = Vec::with_capacity(key.len() * (key.len() - 1) / 2);
        for (i, &a) in key.iter().enumerate() {
            for &b in &key[i + 1..] {
                edges.push(Edge::new(a, b));
            }
        }
        edges.sort_unstable();
        EdgeStructure { kind: StructureKind::Clique, key: key.to_vec(), edges }
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.key.len()
    }

    pub fn canonical_key(&self) -> &[Vertex] {
        &self.key
    }

    /// Sorted edge list.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().copied().collect()
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.edges.binary_search(e).is_ok()
    }
}

impl fmt::Display for EdgeStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.key.iter().map(|v| v.to_string()).collect();
        write!(f, "{}({})", self.kind, parts.join(","))
    }
}

/// Depth-first growth of simple paths from `root` through vertices larger
/// than `root`; `visit` sees each k-cycle once, in canonical order.
fn visit_cycles_from<F>(g: &WeightedGraph, k: usize, root: Vertex, visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[Vertex]) -> ControlFlow<()>,
{
    fn extend<F>(
        g: &WeightedGraph,
        k: usize,
        path: &mut Vec<Vertex>,
        on_path: &mut Vec<Vertex>,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[Vertex]) -> ControlFlow<()>,
    {
        let root = path[0];
        let last = *path.last().unwrap();
        if path.len() == k {
            if path[1] < path[k - 1] && g.has_edge(last, root) {
                return visit(path);
            }
            return ControlFlow::Continue(());
        }
        for &next in g.neighbors(last) {
            if next <= root || on_path.contains(&next) {
                continue;
            }
            path.push(next);
            on_path.push(next);
            let flow = extend(g, k, path, on_path, visit);
            path.pop();
            on_path.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }

    let mut path = Vec::with_capacity(k);
    let mut on_path = Vec::with_capacity(k);
    path.push(root);
    on_path.push(root);
    extend(g, k, &mut path, &mut on_path, visit)
}

/// Ordered clique growth: extend only by larger vertices adjacent to all
/// current members.
fn visit_cliques_from<F>(g: &WeightedGraph, k: usize, root: Vertex, visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[Vertex]) -> ControlFlow<()>,
{
    fn extend<F>(
        g: &WeightedGraph,
        k: usize,
        members: &mut Vec<Vertex>,
        candidates: &[Vertex],
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[Vertex]) -> ControlFlow<()>,
    {
        if members.len() == k {
            return visit(members);
        }
        if members.len() + candidates.len() < k {
            return ControlFlow::Continue(());
        }
        for (i, &v) in candidates.iter().enumerate() {
            let nbrs = g.neighbors(v);
            let next: Vec<Vertex> =
                candidates[i + 1..].iter().copied().filter(|c| nbrs.binary_search(c).is_ok()).collect();
            members.push(v);
            let flow = extend(g, k, members, &next, visit);
            members.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }

    let candidates: Vec<Vertex> = g.neighbors(root).iter().copied().filter(|&v| v > root).collect();
    let mut members = vec![root];
    extend(g, k, &mut members, &candidates, visit)
}

fn visit_from<F>(g: &WeightedGraph, kind: StructureKind, k: usize, root: Vertex, visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[Vertex]) -> ControlFlow<()>,
{
    match kind {
        StructureKind::Cycle => visit_cycles_from(g, k, root, visit),
        StructureKind::Clique => visit_cliques_from(g, k, root, visit),
    }
}

/// All structures of the given kind and size, sorted by canonical key.
pub fn enumerate(
    g: &WeightedGraph,
    kind: StructureKind,
    k: usize,
    config: &EnumConfig,
) -> Result<Vec<EdgeStructure>, EnumError> {
    if k < 3 {
        return Err(EnumError::InvalidK(k));
    }
    let cap = config.max_structures;
    let count = AtomicUsize::new(0);
    let roots: Vec<Vertex> = g.vertices().iter().copied().collect();
    let per_root = config.execution.map(&roots, |&root| {
        let mut found = Vec::new();
        let flow = visit_from(g, kind, k, root, &mut |key| {
            if count.fetch_add(1, Ordering::Relaxed) >= cap {
                return ControlFlow::Break(());
            }
            found.push(match kind {
                StructureKind::Cycle => EdgeStructure::cycle(key),
                StructureKind::Clique => EdgeStructure::clique(key),
            });
            ControlFlow::Continue(())
        });
        (found, flow.is_break())
    });
    if per_root.iter().any(|(_, hit_cap)| *hit_cap) {
        return Err(EnumError::CapExceeded { cap, reached: count.load(Ordering::Relaxed) });
    }
    let mut all: Vec<EdgeStructure> = per_root.into_iter().flat_map(|(found, _)| found).collect();
    all.sort_unstable_by(|a, b| a.key.cmp(&b.key));
    Ok(all)
}

pub fn enumerate_k_cycles(g: &WeightedGraph, k: usize, config: &EnumConfig) -> Result<Vec<EdgeStructure>, EnumError> {
    enumerate(g, StructureKind::Cycle, k, config)
}

pub fn enumerate_k_cliques(g: &WeightedGraph, k: usize, config: &EnumConfig) -> Result<Vec<EdgeStructure>, EnumError> {
    enumerate(g, StructureKind::Clique, k, config)
}

/// True iff `g` contains at least one structure of the given kind and size.
pub fn has_structure(g: &WeightedGraph, kind: StructureKind, k: usize) -> bool {
    g.vertices().iter().any(|&root| visit_from(g, kind, k, root, &mut |_| ControlFlow::Break(())).is_break())
}

/// Whether removing `s` from `g` leaves no structure of the given kind.
///
/// Searches `g - s` afresh instead of consulting any stored rows.
pub fn verify_cover(g: &WeightedGraph, k: usize, kind: StructureKind, s: &EdgeSet) -> Result<bool, GraphError> {
    let rest = g.remove_edges(s)?;
    Ok(k < 3 || !has_structure(&rest, kind, k))
}

/// Union of the edge sets of `structures`.
pub fn union_structure_edges(structures: &[EdgeStructure]) -> EdgeSet {
    structures.iter().flat_map(|s| s.edges.iter().copied()).collect()
}

/// Constraint matrix with one row per structure and one column per host
/// edge, in the host graph's edge order. Stored as column-index lists.
#[derive(Clone, Debug)]
pub struct IncidenceMatrix {
    structures: Vec<EdgeStructure>,
    columns: Vec<Edge>,
    rows: Vec<Vec<usize>>,
}

impl IncidenceMatrix {
    pub fn structures(&self) -> &[EdgeStructure] {
        &self.structures
    }

    pub fn columns(&self) -> &[Edge] {
        &self.columns
    }

    /// Column indices of row `i`, ascending.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> bool {
        self.rows[row].binary_search(&col).is_ok()
    }

    /// Number of rows containing each column.
    pub fn column_sums(&self) -> Vec<usize> {
        let mut sums = vec![0; self.columns.len()];
        for row in &self.rows {
            for &c in row {
                sums[c] += 1;
            }
        }
        sums
    }
}

pub fn build_incidence(g: &WeightedGraph, structures: Vec<EdgeStructure>) -> Result<IncidenceMatrix, GraphError> {
    let rows = structures
        .iter()
        .map(|s| {
            s.edges.iter().map(|e| g.edge_index(e).ok_or(GraphError::UnknownEdge(*e))).collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IncidenceMatrix { structures, columns: g.edges().to_vec(), rows })
}
