//! Weighted simple graphs, edge sets and the edge-list text format.
//!
//! Vertices are dense 0-based integers. Edges are stored with their smaller
//! endpoint first and are always iterated in lexicographic order, so every
//! derived structure (incidence columns, LP variables, reports) inherits a
//! fixed order.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

pub type Vertex = usize;
pub type Weight = u64;

/// An unordered vertex pair, normalized so that `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: Vertex,
    v: Vertex,
}

impl Edge {
    /// Builds the edge `{a, b}`. Panics on a self-loop.
    pub fn new(a: Vertex, b: Vertex) -> Self {
        assert_ne!(a, b, "self-loop {a}-{a}");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn u(&self) -> Vertex {
        self.u
    }

    pub fn v(&self) -> Vertex {
        self.v
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.u, self.v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

/// A sorted set of edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EdgeSet(BTreeSet<Edge>);

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet(BTreeSet::new())
    }

    pub fn insert(&mut self, e: Edge) -> bool {
        self.0.insert(e)
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.0.contains(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.0.iter()
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.union(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl FromIterator<Edge> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        EdgeSet(iter.into_iter().collect())
    }
}

impl Extend<Edge> for EdgeSet {
    fn extend<I: IntoIterator<Item = Edge>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl<'a> IntoIterator for &'a EdgeSet {
    type Item = &'a Edge;
    type IntoIter = std::collections::btree_set::Iter<'a, Edge>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl IntoIterator for EdgeSet {
    type Item = Edge;
    type IntoIter = std::collections::btree_set::IntoIter<Edge>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: non-positive weight {weight}")]
    NonPositiveWeight { line: usize, weight: i64 },
    #[error("line {line}: duplicate edge {edge}")]
    DuplicateEdge { line: usize, edge: Edge },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: Vertex },
    #[error("edge {0} is not in the graph")]
    UnknownEdge(Edge),
    #[error("missing vertex-count header line")]
    MissingHeader,
    #[error("edge {edge} has endpoint outside the vertex set")]
    UnknownVertex { edge: Edge },
    #[error("edge {0} has zero weight")]
    ZeroWeight(Edge),
}

/// A simple undirected graph with positive integer edge weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    vertices: BTreeSet<Vertex>,
    edges: Vec<Edge>,
    weights: Vec<Weight>,
    index: HashMap<Edge, usize>,
    adjacency: BTreeMap<Vertex, Vec<Vertex>>,
}

impl WeightedGraph {
    /// Graph on vertices `0..n` with the given weighted edges.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Edge, Weight)>) -> Result<Self, GraphError> {
        Self::with_vertices((0..n).collect(), edges)
    }

    pub fn with_vertices(
        vertices: BTreeSet<Vertex>,
        edges: impl IntoIterator<Item = (Edge, Weight)>,
    ) -> Result<Self, GraphError> {
        let mut map = BTreeMap::new();
        for (e, w) in edges {
            if w == 0 {
                return Err(GraphError::ZeroWeight(e));
            }
            if !vertices.contains(&e.u) || !vertices.contains(&e.v) {
                return Err(GraphError::UnknownVertex { edge: e });
            }
            if map.insert(e, w).is_some() {
                return Err(GraphError::DuplicateEdge { line: 0, edge: e });
            }
        }
        Ok(Self::from_sorted(vertices, map))
    }

    fn from_sorted(vertices: BTreeSet<Vertex>, map: BTreeMap<Edge, Weight>) -> Self {
        let mut adjacency: BTreeMap<Vertex, Vec<Vertex>> = vertices.iter().map(|&v| (v, Vec::new())).collect();
        let mut edges = Vec::with_capacity(map.len());
        let mut weights = Vec::with_capacity(map.len());
        let mut index = HashMap::with_capacity(map.len());
        for (i, (e, w)) in map.into_iter().enumerate() {
            adjacency.get_mut(&e.u).unwrap().push(e.v);
            adjacency.get_mut(&e.v).unwrap().push(e.u);
            index.insert(e, i);
            edges.push(e);
            weights.push(w);
        }
        for list in adjacency.values_mut() {
            list.sort_unstable();
        }
        WeightedGraph { vertices, edges, weights, index, adjacency }
    }

    /// Complete graph `K_n` with unit weights.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (Edge::new(a, b), 1)));
        Self::new(n, edges).expect("complete graph is simple")
    }

    /// Copy of this graph with every weight set to one.
    pub fn unit_weighted(&self) -> Self {
        let mut g = self.clone();
        g.weights.iter_mut().for_each(|w| *w = 1);
        g
    }

    pub fn vertices(&self) -> &BTreeSet<Vertex> {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Weights aligned with [`edges`](Self::edges).
    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_index(&self, e: &Edge) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        a != b && self.index.contains_key(&Edge::new(a, b))
    }

    pub fn weight(&self, e: &Edge) -> Option<Weight> {
        self.edge_index(e).map(|i| self.weights[i])
    }

    /// Sorted neighbor list; empty for unknown vertices.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        self.adjacency.get(&v).map_or(&[], Vec::as_slice)
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().copied().collect()
    }

    fn check_subset(&self, s: &EdgeSet) -> Result<(), GraphError> {
        match s.iter().find(|e| !self.index.contains_key(e)) {
            Some(e) => Err(GraphError::UnknownEdge(*e)),
            None => Ok(()),
        }
    }

    /// `G - S`: same vertices, edges outside `s`.
    pub fn remove_edges(&self, s: &EdgeSet) -> Result<WeightedGraph, GraphError> {
        self.check_subset(s)?;
        let map = self.edges.iter().zip(&self.weights).filter(|(e, _)| !s.contains(e)).map(|(e, w)| (*e, *w)).collect();
        Ok(Self::from_sorted(self.vertices.clone(), map))
    }

    /// Subgraph made of the edges in `s` and their endpoints only.
    pub fn edge_induced_subgraph(&self, s: &EdgeSet) -> Result<WeightedGraph, GraphError> {
        self.check_subset(s)?;
        let vertices = s.iter().flat_map(|e| [e.u, e.v]).collect();
        let map = s.iter().map(|e| (*e, self.weights[self.index[e]])).collect();
        Ok(Self::from_sorted(vertices, map))
    }

    /// `W(S)`, the summed weight of `s`.
    pub fn total_weight(&self, s: &EdgeSet) -> Result<Weight, GraphError> {
        s.iter().try_fold(0, |acc, e| match self.edge_index(e) {
            Some(i) => Ok(acc + self.weights[i]),
            None => Err(GraphError::UnknownEdge(*e)),
        })
    }

    /// Weight of the whole edge set.
    pub fn weight_sum(&self) -> Weight {
        self.weights.iter().sum()
    }

    /// BFS two-coloring; `None` when some component has an odd cycle.
    pub fn two_coloring(&self) -> Option<BTreeMap<Vertex, bool>> {
        let mut color: BTreeMap<Vertex, bool> = BTreeMap::new();
        for &start in &self.vertices {
            if color.contains_key(&start) {
                continue;
            }
            color.insert(start, false);
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let c = color[&v];
                for &u in self.neighbors(v) {
                    match color.get(&u) {
                        Some(&cu) if cu == c => return None,
                        Some(_) => {}
                        None => {
                            color.insert(u, !c);
                            queue.push_back(u);
                        }
                    }
                }
            }
        }
        Some(color)
    }

    /// Edge-list text: vertex count, then one sorted `u v w` line per edge.
    ///
    /// The header is one past the largest vertex id so that graphs with
    /// sparse vertex sets still parse back.
    pub fn to_edge_list(&self) -> String {
        let n = self.vertices.iter().next_back().map_or(0, |v| v + 1);
        let mut out = format!("{n}\n");
        for (e, w) in self.edges.iter().zip(&self.weights) {
            out.push_str(&format!("{} {} {}\n", e.u, e.v, w));
        }
        out
    }
}

fn meaningful_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<usize, GraphError> {
    let (line, text) = lines.next().ok_or(GraphError::MissingHeader)?;
    text.parse().map_err(|_| GraphError::Malformed { line, message: format!("expected vertex count, found {text:?}") })
}

fn parse_endpoints(line: usize, fields: &[&str], n: usize) -> Result<Edge, GraphError> {
    let parse = |s: &str| {
        s.parse::<usize>().map_err(|_| GraphError::Malformed { line, message: format!("bad vertex id {s:?}") })
    };
    let (u, v) = (parse(fields[0])?, parse(fields[1])?);
    if u == v {
        return Err(GraphError::SelfLoop { line, vertex: u });
    }
    if u >= n || v >= n {
        return Err(GraphError::Malformed { line, message: format!("vertex id out of range 0..{n}") });
    }
    if u > v {
        return Err(GraphError::Malformed { line, message: format!("endpoints must satisfy u < v, found {u} {v}") });
    }
    Ok(Edge::new(u, v))
}

/// Parses the edge-list format into a graph on vertices `0..n`.
pub fn parse_graph(text: &str) -> Result<WeightedGraph, GraphError> {
    let mut lines = meaningful_lines(text);
    let n = parse_header(&mut lines)?;
    let mut map = BTreeMap::new();
    for (line, l) in lines {
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(GraphError::Malformed { line, message: format!("expected \"u v w\", found {l:?}") });
        }
        let edge = parse_endpoints(line, &fields, n)?;
        let weight: i64 = fields[2]
            .parse()
            .map_err(|_| GraphError::Malformed { line, message: format!("bad weight {:?}", fields[2]) })?;
        if weight < 1 {
            return Err(GraphError::NonPositiveWeight { line, weight });
        }
        if map.insert(edge, weight as Weight).is_some() {
            return Err(GraphError::DuplicateEdge { line, edge });
        }
    }
    Ok(WeightedGraph::from_sorted((0..n).collect(), map))
}

/// Parses an edge set in the edge-list format without the weight column.
pub fn parse_edge_set(text: &str) -> Result<EdgeSet, GraphError> {
    let mut lines = meaningful_lines(text);
    let n = parse_header(&mut lines)?;
    let mut set = EdgeSet::new();
    for (line, l) in lines {
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(GraphError::Malformed { line, message: format!("expected \"u v\", found {l:?}") });
        }
        let edge = parse_endpoints(line, &fields, n)?;
        if !set.insert(edge) {
            return Err(GraphError::DuplicateEdge { line, edge });
        }
    }
    Ok(set)
}

/// Serializes an edge set as a weightless edge list over `n` vertices.
pub fn edge_set_to_text(n: usize, s: &EdgeSet) -> String {
    let mut out = format!("{n}\n");
    for e in s {
        out.push_str(&format!("{} {}\n", e.u, e.v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedGraph {
        parse_graph("3\n0 1 1\n1 2 1\n0 2 1").unwrap()
    }

    fn es(pairs: &[(usize, usize)]) -> EdgeSet {
        pairs.iter().map(|&(a, b)| Edge::new(a, b)).collect()
    }

    #[test]
    fn parses_unit_triangle() {
        let g = triangle();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), &[Edge::new(0, 1), Edge::new(0, 2), Edge::new(1, 2)]);
        assert_eq!(g.weights(), &[1, 1, 1]);
    }

    #[test]
    fn parses_single_edge() {
        let g = parse_graph("2\n0 1 5").unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.weight(&Edge::new(0, 1)), Some(5));
    }

    #[test]
    fn rejects_bad_input_with_line_numbers() {
        assert_eq!(parse_graph("3\n0 0 1").unwrap_err(), GraphError::SelfLoop { line: 2, vertex: 0 });
        assert_eq!(parse_graph("3\n0 1 0").unwrap_err(), GraphError::NonPositiveWeight { line: 2, weight: 0 });
        assert_eq!(
            parse_graph("3\n# comment\n0 1 2\n\n0 1 3").unwrap_err(),
            GraphError::DuplicateEdge { line: 5, edge: Edge::new(0, 1) }
        );
        assert!(matches!(parse_graph("3\n0 1").unwrap_err(), GraphError::Malformed { line: 2, .. }));
        assert!(matches!(parse_graph("3\n0 3 1").unwrap_err(), GraphError::Malformed { line: 2, .. }));
        assert!(matches!(parse_graph("3\n0 1 -4").unwrap_err(), GraphError::NonPositiveWeight { line: 2, weight: -4 }));
        assert_eq!(parse_graph("# only\n").unwrap_err(), GraphError::MissingHeader);
    }

    #[test]
    fn remove_edges_cases() {
        let g = triangle();
        let path = g.remove_edges(&es(&[(0, 2)])).unwrap();
        assert_eq!(path.edges(), &[Edge::new(0, 1), Edge::new(1, 2)]);
        assert_eq!(path.vertex_count(), 3);
        assert_eq!(g.remove_edges(&EdgeSet::new()).unwrap(), g);
        let bare = g.remove_edges(&g.edge_set()).unwrap();
        assert_eq!(bare.edge_count(), 0);
        assert_eq!(bare.vertex_count(), 3);
        assert_eq!(g.remove_edges(&es(&[(0, 5)])).unwrap_err(), GraphError::UnknownEdge(Edge::new(0, 5)));
    }

    #[test]
    fn edge_induced_subgraph_cases() {
        let k4 = WeightedGraph::complete(4);
        let tri = k4.edge_induced_subgraph(&es(&[(0, 1), (1, 3), (0, 3)])).unwrap();
        assert_eq!(tri.vertices().iter().copied().collect::<Vec<_>>(), vec![0, 1, 3]);
        assert_eq!(tri.edge_count(), 3);

        let empty = k4.edge_induced_subgraph(&EdgeSet::new()).unwrap();
        assert_eq!(empty.vertex_count(), 0);
        assert_eq!(empty.edge_count(), 0);

        let matching = k4.edge_induced_subgraph(&es(&[(0, 1), (2, 3)])).unwrap();
        assert_eq!(matching.vertex_count(), 4);
        assert_eq!(matching.edge_count(), 2);
    }

    #[test]
    fn total_weight_cases() {
        assert_eq!(triangle().total_weight(&triangle().edge_set()).unwrap(), 3);
        assert_eq!(triangle().total_weight(&EdgeSet::new()).unwrap(), 0);
        let g = parse_graph("3\n0 1 2\n0 2 3\n1 2 7\n").unwrap();
        assert_eq!(g.total_weight(&g.edge_set()).unwrap(), 12);
        assert!(g.total_weight(&es(&[(0, 9)])).is_err());
    }

    #[test]
    fn two_coloring_detects_odd_cycles() {
        assert!(triangle().two_coloring().is_none());
        let c4 = parse_graph("4\n0 1 1\n1 2 1\n2 3 1\n0 3 1").unwrap();
        let colors = c4.two_coloring().unwrap();
        assert!(c4.edges().iter().all(|e| colors[&e.u()] != colors[&e.v()]));
    }

    #[test]
    fn serializes_sorted() {
        let g = parse_graph("4\n2 3 4\n0 1 1\n1 3 2\n").unwrap();
        assert_eq!(g.to_edge_list(), "4\n0 1 1\n1 3 2\n2 3 4\n");
    }

    #[test]
    fn edge_set_text_round_trip() {
        let s = es(&[(2, 3), (0, 1)]);
        let text = edge_set_to_text(4, &s);
        assert_eq!(text, "4\n0 1\n2 3\n");
        assert_eq!(parse_edge_set(&text).unwrap(), s);
        assert!(matches!(parse_edge_set("4\n0 1 1").unwrap_err(), GraphError::Malformed { .. }));
    }
}
