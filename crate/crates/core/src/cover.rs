//! LP-rounding approximation algorithms for k-cycle and k-clique covers.
//!
//! With `t` the number of edges in one structure (`k` for a cycle,
//! `k(k-1)/2` for a clique):
//!
//! * the basic algorithms keep every edge whose LP value is at least `1/t`,
//!   which costs at most `t` times the LP optimum;
//! * the improved algorithms keep edges at or above `2/(2t-1)`, then take the
//!   edges `E'` of the structures that survive, split `E'` by a cut of at least
//!   half its weight, and remove the uncut side. The remaining cut edges form
//!   a bipartite graph, which has no odd cycle and no triangle, so the result
//!   costs at most `t - 1/2` times the LP optimum.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::graph::{Edge, EdgeSet, GraphError, Vertex, Weight, WeightedGraph};
use crate::lp::{integer, rational, solve_covering_lp_with, FractionalSolution, LpError, Rational, DEFAULT_MAX_PIVOTS};
use crate::structures::{
    build_incidence, enumerate, union_structure_edges, verify_cover, EnumConfig, EnumError, StructureKind,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("the improved cycle cover needs odd k, got {0}")]
    EvenK(usize),
    #[error(transparent)]
    Enumeration(#[from] EnumError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Threshold `1/k` on the cycle LP.
    CycleBasic,
    /// Threshold `2/(2k-1)` plus bipartization, odd `k` only.
    CycleOdd,
    /// Threshold `1/C(k,2)` on the clique LP.
    CliqueBasic,
    /// Threshold `2/(2C(k,2)-1)` plus bipartization.
    CliqueImproved,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] =
        [Algorithm::CycleBasic, Algorithm::CycleOdd, Algorithm::CliqueBasic, Algorithm::CliqueImproved];

    pub fn kind(self) -> StructureKind {
        match self {
            Algorithm::CycleBasic | Algorithm::CycleOdd => StructureKind::Cycle,
            Algorithm::CliqueBasic | Algorithm::CliqueImproved => StructureKind::Clique,
        }
    }

    pub fn is_improved(self) -> bool {
        matches!(self, Algorithm::CycleOdd | Algorithm::CliqueImproved)
    }

    pub fn select(kind: StructureKind, improved: bool) -> Algorithm {
        match (kind, improved) {
            (StructureKind::Cycle, false) => Algorithm::CycleBasic,
            (StructureKind::Cycle, true) => Algorithm::CycleOdd,
            (StructureKind::Clique, false) => Algorithm::CliqueBasic,
            (StructureKind::Clique, true) => Algorithm::CliqueImproved,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::CycleBasic => "cycle-basic",
            Algorithm::CycleOdd => "cycle-improved",
            Algorithm::CliqueBasic => "clique-basic",
            Algorithm::CliqueImproved => "clique-improved",
        }
    }

    /// Rounding threshold for structures of size `k`.
    pub fn threshold(self, k: usize) -> Rational {
        let t = self.kind().edge_count(k) as i64;
        if self.is_improved() {
            rational(2, 2 * t - 1)
        } else {
            rational(1, t)
        }
    }

    /// Guaranteed ratio between cover weight and LP optimum.
    pub fn ratio_bound(self, k: usize) -> Rational {
        let t = self.kind().edge_count(k) as i64;
        if self.is_improved() {
            rational(2 * t - 1, 2)
        } else {
            rational(t, 1)
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CoverConfig {
    pub enumeration: EnumConfig,
    pub max_pivots: usize,
}

impl Default for CoverConfig {
    fn default() -> Self {
        CoverConfig { enumeration: EnumConfig::default(), max_pivots: DEFAULT_MAX_PIVOTS }
    }
}

/// Vertex two-coloring of a subgraph with its cut and uncut edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    pub side1: BTreeSet<Vertex>,
    pub side2: BTreeSet<Vertex>,
    pub cut_edges: EdgeSet,
    pub inner_edges: EdgeSet,
    pub cut_weight: Weight,
    pub total_weight: Weight,
}

impl Bipartition {
    /// `2·W(cut) >= W(all)`.
    pub fn meets_half_weight(&self) -> bool {
        2 * self.cut_weight >= self.total_weight
    }
}

/// Greedy placement followed by single-vertex local search.
///
/// Vertices are placed in ascending order on the side that cuts more weight
/// to already-placed neighbors (ties go to side 1). Then any vertex whose
/// move strictly increases the cut is moved, scanning in ascending order,
/// until no move helps. At that point every vertex has at least half of its
/// incident weight in the cut, which gives the half-weight bound.
pub fn bipartize_half_weight(sub: &WeightedGraph) -> Bipartition {
    let mut side: BTreeMap<Vertex, bool> = BTreeMap::new();
    let weight_to = |v: Vertex, u: Vertex| sub.weight(&Edge::new(v, u)).unwrap_or(0);

    for &v in sub.vertices() {
        let (mut cut_if_side1, mut cut_if_side2) = (0, 0);
        for &u in sub.neighbors(v) {
            match side.get(&u) {
                Some(false) => cut_if_side2 += weight_to(v, u),
                Some(true) => cut_if_side1 += weight_to(v, u),
                None => {}
            }
        }
        side.insert(v, cut_if_side2 > cut_if_side1);
    }

    loop {
        let mut moved = false;
        for &v in sub.vertices() {
            let (mut same, mut across) = (0, 0);
            for &u in sub.neighbors(v) {
                if side[&u] == side[&v] {
                    same += weight_to(v, u);
                } else {
                    across += weight_to(v, u);
                }
            }
            if same > across {
                let s = side.get_mut(&v).unwrap();
                *s = !*s;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }

    let (mut cut_edges, mut inner_edges) = (EdgeSet::new(), EdgeSet::new());
    let mut cut_weight = 0;
    for (e, w) in sub.edges().iter().zip(sub.weights()) {
        if side[&e.u()] != side[&e.v()] {
            cut_edges.insert(*e);
            cut_weight += w;
        } else {
            inner_edges.insert(*e);
        }
    }
    let (mut side1, mut side2) = (BTreeSet::new(), BTreeSet::new());
    for (&v, &on_side2) in &side {
        if on_side2 {
            side2.insert(v);
        } else {
            side1.insert(v);
        }
    }
    Bipartition { side1, side2, cut_edges, inner_edges, cut_weight, total_weight: sub.weight_sum() }
}

/// Edges whose fractional value is at least `theta`.
pub fn round_threshold(x: &FractionalSolution, theta: &Rational) -> EdgeSet {
    x.iter().filter(|(_, v)| *v >= theta).map(|(e, _)| *e).collect()
}

/// Intermediate sets of the improved algorithms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImprovedParts {
    /// Edges rounded up by the `2/(2t-1)` threshold.
    pub rounded: EdgeSet,
    /// Edges of the structures that survive removing `rounded`.
    pub residual: EdgeSet,
    pub bipartition: Bipartition,
    /// Uncut residual edges, removed to make the residual graph bipartite.
    pub bipartized: EdgeSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverResult {
    pub algorithm: Algorithm,
    pub k: usize,
    pub cover: EdgeSet,
    pub cover_weight: Weight,
    pub lp: FractionalSolution,
    pub ratio_bound: Rational,
    pub parts: Option<ImprovedParts>,
}

impl CoverResult {
    pub fn kind(&self) -> StructureKind {
        self.algorithm.kind()
    }

    pub fn lp_objective(&self) -> &Rational {
        self.lp.objective()
    }

    /// `cover_weight <= ratio_bound · lp_objective`, exactly.
    pub fn within_ratio(&self) -> bool {
        integer(self.cover_weight) <= &self.ratio_bound * self.lp.objective()
    }

    /// Feasible on `g` and within the ratio bound.
    pub fn is_certified(&self, g: &WeightedGraph) -> Result<bool, GraphError> {
        Ok(self.within_ratio() && verify_cover(g, self.k, self.kind(), &self.cover)?)
    }
}

/// Exact LP optimum over all structures of the given kind and size.
pub fn solve_relaxation(
    g: &WeightedGraph,
    kind: StructureKind,
    k: usize,
    config: &CoverConfig,
) -> Result<FractionalSolution, CoverError> {
    let structures = enumerate(g, kind, k, &config.enumeration)?;
    let m = build_incidence(g, structures)?;
    Ok(solve_covering_lp_with(&m, g, config.max_pivots)?)
}

fn basic(g: &WeightedGraph, k: usize, algorithm: Algorithm, lp: FractionalSolution) -> Result<CoverResult, CoverError> {
    let cover = round_threshold(&lp, &algorithm.threshold(k));
    let cover_weight = g.total_weight(&cover)?;
    Ok(CoverResult { algorithm, k, cover, cover_weight, lp, ratio_bound: algorithm.ratio_bound(k), parts: None })
}

fn improved(
    g: &WeightedGraph,
    k: usize,
    algorithm: Algorithm,
    lp: FractionalSolution,
    config: &CoverConfig,
) -> Result<CoverResult, CoverError> {
    let kind = algorithm.kind();
    let rounded = round_threshold(&lp, &algorithm.threshold(k));
    let rest = g.remove_edges(&rounded)?;
    let survivors = enumerate(&rest, kind, k, &config.enumeration)?;
    let residual = union_structure_edges(&survivors);
    let sub = g.edge_induced_subgraph(&residual)?;
    let bipartition = bipartize_half_weight(&sub);
    let bipartized = bipartition.inner_edges.clone();
    let cover = rounded.union(&bipartized);
    let cover_weight = g.total_weight(&cover)?;
    Ok(CoverResult {
        algorithm,
        k,
        cover,
        cover_weight,
        lp,
        ratio_bound: algorithm.ratio_bound(k),
        parts: Some(ImprovedParts { rounded, residual, bipartition, bipartized }),
    })
}

/// Rounds an already solved relaxation. `lp` must be the optimum of the
/// system matching `algorithm`'s structure kind and `k` on `g`.
pub fn from_relaxation(
    algorithm: Algorithm,
    g: &WeightedGraph,
    k: usize,
    lp: FractionalSolution,
    config: &CoverConfig,
) -> Result<CoverResult, CoverError> {
    match algorithm {
        Algorithm::CycleOdd if k.is_multiple_of(2) => Err(CoverError::EvenK(k)),
        a if a.is_improved() => improved(g, k, a, lp, config),
        a => basic(g, k, a, lp),
    }
}

/// Solves the relaxation and rounds it with `algorithm`.
pub fn run(algorithm: Algorithm, g: &WeightedGraph, k: usize, config: &CoverConfig) -> Result<CoverResult, CoverError> {
    if algorithm == Algorithm::CycleOdd && k.is_multiple_of(2) {
        return Err(CoverError::EvenK(k));
    }
    let lp = solve_relaxation(g, algorithm.kind(), k, config)?;
    from_relaxation(algorithm, g, k, lp, config)
}

pub fn cover_k_cycles_basic(g: &WeightedGraph, k: usize, config: &CoverConfig) -> Result<CoverResult, CoverError> {
    run(Algorithm::CycleBasic, g, k, config)
}

pub fn cover_k_cliques_basic(g: &WeightedGraph, k: usize, config: &CoverConfig) -> Result<CoverResult, CoverError> {
    run(Algorithm::CliqueBasic, g, k, config)
}

/// Improved cycle cover; `k` must be odd.
pub fn cover_k_cycles_odd(g: &WeightedGraph, k: usize, config: &CoverConfig) -> Result<CoverResult, CoverError> {
    run(Algorithm::CycleOdd, g, k, config)
}

pub fn cover_k_cliques_improved(g: &WeightedGraph, k: usize, config: &CoverConfig) -> Result<CoverResult, CoverError> {
    run(Algorithm::CliqueImproved, g, k, config)
}

/// Per-run checks of the improved pipeline, returned as violation messages.
///
/// Covers the value window of residual edges, the half-weight cut, the
/// bipartiteness of the kept residual edges, and the set relations between
/// the parts. Basic results have nothing to check and yield no messages.
pub fn improved_invariant_violations(g: &WeightedGraph, result: &CoverResult) -> Vec<String> {
    let Some(parts) = &result.parts else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let t = result.kind().edge_count(result.k) as i64;
    let low = rational(1, 2 * t - 1);
    let high = rational(2, 2 * t - 1);
    for e in &parts.residual {
        match result.lp.value(e) {
            Some(x) if *x >= low && *x < high => {}
            Some(x) => out.push(format!("residual edge {e} has value {x} outside [{low}, {high})")),
            None => out.push(format!("residual edge {e} missing from LP solution")),
        }
    }
    let b = &parts.bipartition;
    if !b.meets_half_weight() {
        out.push(format!("cut weight {} below half of {}", b.cut_weight, b.total_weight));
    }
    if b.cut_edges.union(&b.inner_edges) != parts.residual || !b.cut_edges.is_disjoint(&b.inner_edges) {
        out.push("cut and inner edges do not partition the residual edges".into());
    }
    match g.edge_induced_subgraph(&parts.residual) {
        Ok(sub) => match sub.remove_edges(&parts.bipartized) {
            Ok(kept) if kept.two_coloring().is_some() => {}
            Ok(_) => out.push("residual graph minus removed edges is not bipartite".into()),
            Err(err) => out.push(err.to_string()),
        },
        Err(err) => out.push(err.to_string()),
    }
    if !parts.rounded.is_disjoint(&parts.bipartized) {
        out.push("rounded and bipartized edges overlap".into());
    }
    if !parts.bipartized.is_subset(&parts.residual) {
        out.push("bipartized edges escape the residual set".into());
    }
    if !parts.residual.is_disjoint(&parts.rounded) {
        out.push("residual set meets the rounded edges".into());
    }
    if result.cover != parts.rounded.union(&parts.bipartized) {
        out.push("cover is not the union of its parts".into());
    }
    out
}

/// Whether the LP objective is zero (no structure to cover).
pub fn is_vacuous(result: &CoverResult) -> bool {
    result.lp_objective().is_zero()
}
