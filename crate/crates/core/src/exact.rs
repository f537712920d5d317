//! Exact small-instance oracles: minimum-weight cover and maximum
//! edge-disjoint clique packing by branch and bound, and closed-form
//! covering numbers of complete graphs.
//!
//! A search that runs out of nodes reports [`ExactError::Unsolved`]; it
//! never returns an unproven optimum.

use num_integer::Integer;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::graph::{EdgeSet, Weight, WeightedGraph};
use crate::lp::{solve_rows, LpError, Rational, DEFAULT_MAX_PIVOTS};
use crate::structures::{build_incidence, enumerate, EdgeStructure, EnumConfig, EnumError, StructureKind};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Residual systems up to this many rows are bounded by their LP optimum.
pub const LP_BOUND_MAX_ROWS: usize = 500;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("unsolved: node budget of {budget} exhausted")]
    Unsolved { budget: u64 },
    #[error(transparent)]
    Enumeration(#[from] EnumError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Clone, Copy, Debug)]
pub struct ExactConfig {
    pub enumeration: EnumConfig,
    pub node_budget: u64,
    pub max_pivots: usize,
    /// Residual systems with at most this many rows are bounded by their LP
    /// optimum; larger ones use a cheaper disjoint-rows bound.
    pub lp_bound_max_rows: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            enumeration: EnumConfig::default(),
            node_budget: DEFAULT_NODE_BUDGET,
            max_pivots: DEFAULT_MAX_PIVOTS,
            lp_bound_max_rows: LP_BOUND_MAX_ROWS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactCover {
    pub cover: EdgeSet,
    pub weight: Weight,
    pub node_count: u64,
    /// LP optimum of the full system, when it was small enough to solve.
    pub lp_bound: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPacking {
    pub cliques: Vec<EdgeStructure>,
    pub count: usize,
    pub node_count: u64,
}

impl ExactPacking {
    /// Every edge of `g` lies in some chosen clique.
    pub fn is_perfect(&self, g: &WeightedGraph) -> bool {
        let used: EdgeSet = self.cliques.iter().flat_map(|c| c.edges().iter().copied()).collect();
        used.len() == g.edge_count()
    }
}

fn ceil_to_u64(r: &Rational) -> u64 {
    r.ceil().to_integer().to_u64().expect("nonnegative bound fits u64")
}

struct CoverSearch<'a> {
    rows: &'a [Vec<usize>],
    col_rows: Vec<Vec<usize>>,
    weights: &'a [Weight],
    hits: Vec<u32>,
    chosen: Vec<bool>,
    excluded: Vec<bool>,
    current: Vec<usize>,
    current_weight: Weight,
    best: Vec<usize>,
    best_weight: Weight,
    nodes: u64,
    config: ExactConfig,
}

impl<'a> CoverSearch<'a> {
    fn new(rows: &'a [Vec<usize>], weights: &'a [Weight], config: ExactConfig) -> Self {
        let mut col_rows = vec![Vec::new(); weights.len()];
        for (r, row) in rows.iter().enumerate() {
            for &c in row {
                col_rows[c].push(r);
            }
        }
        let (best, best_weight) = greedy_cover(rows, &col_rows, weights);
        CoverSearch {
            rows,
            col_rows,
            weights,
            hits: vec![0; rows.len()],
            chosen: vec![false; weights.len()],
            excluded: vec![false; weights.len()],
            current: Vec::new(),
            current_weight: 0,
            best,
            best_weight,
            nodes: 0,
            config,
        }
    }

    fn available(&self, row: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[row].iter().copied().filter(|&c| !self.excluded[c])
    }

    fn choose(&mut self, c: usize, on: bool) {
        self.chosen[c] = on;
        for &r in &self.col_rows[c] {
            if on {
                self.hits[r] += 1;
            } else {
                self.hits[r] -= 1;
            }
        }
        if on {
            self.current.push(c);
            self.current_weight += self.weights[c];
        } else {
            self.current.pop();
            self.current_weight -= self.weights[c];
        }
    }

    /// Lower bound on the extra weight needed to cover `open` rows.
    fn residual_bound(&self, open: &[usize]) -> Result<Weight, ExactError> {
        if open.len() <= self.config.lp_bound_max_rows {
            let mut remap = vec![usize::MAX; self.weights.len()];
            let mut weights = Vec::new();
            let rows: Vec<Vec<usize>> = open
                .iter()
                .map(|&r| {
                    self.available(r)
                        .map(|c| {
                            if remap[c] == usize::MAX {
                                remap[c] = weights.len();
                                weights.push(self.weights[c]);
                            }
                            remap[c]
                        })
                        .collect()
                })
                .collect();
            let lp = solve_rows(&rows, &weights, self.config.max_pivots)?;
            return Ok(ceil_to_u64(&lp.objective));
        }
        let mut used = vec![false; self.weights.len()];
        let mut bound = 0;
        for &r in open {
            if self.available(r).all(|c| !used[c]) {
                bound += self.available(r).map(|c| self.weights[c]).min().unwrap_or(0);
                for c in self.available(r).collect::<Vec<_>>() {
                    used[c] = true;
                }
            }
        }
        Ok(bound)
    }

    fn search(&mut self) -> Result<(), ExactError> {
        self.nodes += 1;
        if self.nodes > self.config.node_budget {
            return Err(ExactError::Unsolved { budget: self.config.node_budget });
        }
        let open: Vec<usize> = (0..self.rows.len()).filter(|&r| self.hits[r] == 0).collect();
        if open.is_empty() {
            if self.current_weight < self.best_weight {
                self.best_weight = self.current_weight;
                self.best = self.current.clone();
            }
            return Ok(());
        }
        let Some(branch_row) = open.iter().copied().min_by_key(|&r| (self.available(r).count(), r)) else {
            return Ok(());
        };
        if self.available(branch_row).next().is_none() {
            return Ok(());
        }
        if self.current_weight + self.residual_bound(&open)? >= self.best_weight {
            return Ok(());
        }
        let mut edges: Vec<usize> = self.available(branch_row).collect();
        edges.sort_by_key(|&c| (std::cmp::Reverse(self.weights[c]), c));
        for &c in &edges {
            self.choose(c, true);
            let outcome = self.search();
            self.choose(c, false);
            if outcome.is_err() {
                for &d in &edges {
                    self.excluded[d] = false;
                }
                return outcome;
            }
            self.excluded[c] = true;
        }
        for &c in &edges {
            self.excluded[c] = false;
        }
        Ok(())
    }
}

/// Repeatedly takes the column with the most open rows per unit weight,
/// then drops columns that became redundant.
fn greedy_cover(rows: &[Vec<usize>], col_rows: &[Vec<usize>], weights: &[Weight]) -> (Vec<usize>, Weight) {
    let mut hits = vec![0u32; rows.len()];
    let mut picked = Vec::new();
    let mut open = rows.len();
    while open > 0 {
        let gain = |c: usize| col_rows[c].iter().filter(|&&r| hits[r] == 0).count() as u64;
        let best = (0..weights.len())
            .filter(|&c| gain(c) > 0)
            .max_by(|&a, &b| (gain(a) * weights[b]).cmp(&(gain(b) * weights[a])).then(b.cmp(&a)))
            .expect("every row has a column");
        for &r in &col_rows[best] {
            if hits[r] == 0 {
                open -= 1;
            }
            hits[r] += 1;
        }
        picked.push(best);
    }
    let mut order = picked.clone();
    order.sort_by_key(|&c| std::cmp::Reverse(weights[c]));
    for c in order {
        if col_rows[c].iter().all(|&r| hits[r] > 1) {
            col_rows[c].iter().for_each(|&r| hits[r] -= 1);
            picked.retain(|&p| p != c);
        }
    }
    let weight = picked.iter().map(|&c| weights[c]).sum();
    (picked, weight)
}

/// Minimum-weight edge set meeting every structure of the given kind.
pub fn exact_min_cover(
    g: &WeightedGraph,
    k: usize,
    kind: StructureKind,
    config: &ExactConfig,
) -> Result<ExactCover, ExactError> {
    let structures = enumerate(g, kind, k, &config.enumeration)?;
    let m = build_incidence(g, structures).map_err(EnumError::from)?;
    let lp_bound = if m.row_count() <= config.lp_bound_max_rows {
        Some(solve_rows(m.rows(), g.weights(), config.max_pivots)?.objective)
    } else {
        None
    };
    let mut search = CoverSearch::new(m.rows(), g.weights(), *config);
    if m.row_count() > 0 {
        search.search()?;
    }
    let mut cover: Vec<usize> = search.best;
    cover.sort_unstable();
    if let Some(lp) = &lp_bound {
        assert!(*lp <= Rational::from_integer(search.best_weight.into()), "LP bound {lp} above optimum");
    }
    Ok(ExactCover {
        cover: cover.into_iter().map(|c| g.edges()[c]).collect(),
        weight: search.best_weight,
        node_count: search.nodes,
        lp_bound,
    })
}

struct PackSearch {
    cliques: Vec<Vec<usize>>,
    members: Vec<Vec<usize>>,
    k: usize,
    used: Vec<bool>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    vertex_slots: usize,
}

impl PackSearch {
    fn is_free(&self, clique: usize) -> bool {
        self.cliques[clique].iter().all(|&c| !self.used[c])
    }

    /// Smallest of: available clique count, free edges over clique size, and
    /// the per-vertex degree bound (each clique spends `k - 1` edges at each
    /// of its `k` vertices).
    fn upper_bound(&self, available: &[usize]) -> usize {
        let edges_per = self.k * (self.k - 1) / 2;
        let mut edge_seen = vec![false; self.used.len()];
        let mut degree = vec![0usize; self.vertex_slots];
        let mut free_edges = 0;
        for &q in available {
            for (&c, pair) in self.cliques[q].iter().zip(pairs(&self.members[q])) {
                if !edge_seen[c] {
                    edge_seen[c] = true;
                    free_edges += 1;
                    degree[pair.0] += 1;
                    degree[pair.1] += 1;
                }
            }
        }
        let vertex_bound = degree.iter().map(|d| d / (self.k - 1)).sum::<usize>() / self.k;
        available.len().min(free_edges / edges_per).min(vertex_bound)
    }

    fn search(&mut self, start: usize) -> Result<(), ExactError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(ExactError::Unsolved { budget: self.budget });
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        let available: Vec<usize> = (start..self.cliques.len()).filter(|&q| self.is_free(q)).collect();
        let Some(&first) = available.first() else {
            return Ok(());
        };
        if self.chosen.len() + self.upper_bound(&available) <= self.best.len() {
            return Ok(());
        }
        for i in 0..self.cliques[first].len() {
            let c = self.cliques[first][i];
            self.used[c] = true;
        }
        self.chosen.push(first);
        let included = self.search(first + 1);
        self.chosen.pop();
        for i in 0..self.cliques[first].len() {
            let c = self.cliques[first][i];
            self.used[c] = false;
        }
        included?;
        self.search(first + 1)
    }
}

/// Vertex pairs of a sorted clique, in the same order as its sorted edges.
fn pairs(members: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    members.iter().enumerate().flat_map(move |(i, &a)| members[i + 1..].iter().map(move |&b| (a, b)))
}

/// Maximum number of pairwise edge-disjoint k-cliques.
pub fn exact_max_packing(g: &WeightedGraph, k: usize, config: &ExactConfig) -> Result<ExactPacking, ExactError> {
    let structures = enumerate(g, StructureKind::Clique, k, &config.enumeration)?;
    let m = build_incidence(g, structures).map_err(EnumError::from)?;
    // Lexicographic pair order of a sorted vertex set matches the sorted edge
    // order, so row entries line up with `pairs`.
    let members: Vec<Vec<usize>> = m.structures().iter().map(|s| s.canonical_key().to_vec()).collect();
    let vertex_slots = g.vertices().iter().next_back().map_or(0, |v| v + 1);
    let mut search = PackSearch {
        cliques: m.rows().to_vec(),
        members,
        k,
        used: vec![false; g.edge_count()],
        chosen: Vec::new(),
        best: Vec::new(),
        nodes: 0,
        budget: config.node_budget,
        vertex_slots,
    };
    search.search(0)?;
    let cliques: Vec<EdgeStructure> = search.best.iter().map(|&q| m.structures()[q].clone()).collect();
    Ok(ExactPacking { count: cliques.len(), cliques, node_count: search.nodes })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sandwich {
    pub nu: usize,
    pub tau: Weight,
    pub ok: bool,
}

/// Packing number, unweighted clique covering number, and whether
/// `nu <= tau <= C(k,2) * nu` holds.
pub fn sandwich_check(g: &WeightedGraph, k: usize, config: &ExactConfig) -> Result<Sandwich, ExactError> {
    let nu = exact_max_packing(g, k, config)?.count;
    let tau = exact_min_cover(&g.unit_weighted(), k, StructureKind::Clique, config)?.weight;
    let edges_per = (k * (k - 1) / 2) as Weight;
    Ok(Sandwich { nu, tau, ok: nu as Weight <= tau && tau <= edges_per * nu as Weight })
}

fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Minimum number of edges meeting every k-clique of `K_n`: the edges
/// inside the parts of the balanced complete `(k-1)`-partite graph.
pub fn turan_tau_complete(n: usize, k: usize) -> u64 {
    assert!(k >= 3, "k must be at least 3");
    if n < k {
        return 0;
    }
    let parts = (k - 1) as u64;
    let (q, r) = (n as u64).div_rem(&parts);
    r * choose2(q + 1) + (parts - r) * choose2(q)
}
