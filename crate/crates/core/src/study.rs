//! Covering/packing ratio tables for complete graphs.

use std::ops::RangeInclusive;

use num_traits::Zero;

use crate::exact::{exact_max_packing, exact_min_cover, ExactConfig, ExactError};
use crate::graph::WeightedGraph;
use crate::lp::{integer, Rational};
use crate::parallel::Execution;
use crate::structures::{EnumError, StructureKind};

/// One row of the study. `None` marks a quantity whose oracle ran out of
/// budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioRow {
    pub n: usize,
    pub tau: Option<u64>,
    pub nu: Option<usize>,
}

impl RatioRow {
    /// `tau / nu`, undefined when either is unknown or `nu` is zero.
    pub fn tau_over_nu(&self) -> Option<Rational> {
        match (self.tau, self.nu) {
            (Some(t), Some(v)) if v > 0 => Some(integer(t) / integer(v as u64)),
            _ => None,
        }
    }

    /// `tau / C(n,2)`.
    pub fn tau_over_edges(&self) -> Option<Rational> {
        let edges = (self.n * self.n.saturating_sub(1) / 2) as u64;
        self.tau.filter(|_| edges > 0).map(|t| integer(t) / integer(edges))
    }

    pub fn is_solved(&self) -> bool {
        self.tau.is_some() && self.nu.is_some()
    }
}

fn budgeted<T>(outcome: Result<T, ExactError>) -> Result<Option<T>, ExactError> {
    match outcome {
        Ok(v) => Ok(Some(v)),
        Err(ExactError::Unsolved { .. }) | Err(ExactError::Enumeration(EnumError::CapExceeded { .. })) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Exact covering number (of the given kind) and clique packing number of
/// `K_n` for every `n` in `ns`.
pub fn ratio_study(
    ns: RangeInclusive<usize>,
    k: usize,
    kind: StructureKind,
    config: &ExactConfig,
    execution: Execution,
) -> Result<Vec<RatioRow>, ExactError> {
    let ns: Vec<usize> = ns.collect();
    execution
        .map(&ns, |&n| {
            let g = WeightedGraph::complete(n);
            let tau = budgeted(exact_min_cover(&g, k, kind, config))?.map(|c| c.weight);
            let nu = budgeted(exact_max_packing(&g, k, config))?.map(|p| p.count);
            Ok(RatioRow { n, tau, nu })
        })
        .into_iter()
        .collect()
}

/// Formats a rational exactly, `-` when absent.
pub fn fraction(r: &Option<Rational>) -> String {
    match r {
        Some(r) if r.is_zero() => "0".into(),
        Some(r) => r.to_string(),
        None => "-".into(),
    }
}
