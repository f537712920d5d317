//! Exact-rational solver for the covering relaxation
//! `min { w·x : Ax >= 1, 0 <= x <= 1 }`.
//!
//! The solver runs the revised primal simplex on the dual packing program
//! `max { 1·y : Aᵀy <= w, y >= 0 }`, whose all-slack basis is feasible
//! because every weight is positive. The simplex multipliers of the final
//! basis are an optimal covering solution. Both vectors are checked for
//! feasibility and equal objective before anything is returned.
//!
//! The `x <= 1` bounds are never active at an optimum: lowering any
//! coordinate above one to exactly one keeps every row satisfied and
//! strictly lowers the cost. They are still asserted on the output.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::graph::{Edge, Weight, WeightedGraph};
use crate::structures::IncidenceMatrix;

pub type Rational = BigRational;

pub const DEFAULT_MAX_PIVOTS: usize = 1_000_000;

/// `num / den` as an exact rational.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("simplex pivot limit of {0} exceeded")]
    PivotLimit(usize),
    #[error("incidence columns do not match the graph's edge order")]
    ColumnMismatch,
    #[error("row {row} references column {col} outside 0..{columns}")]
    BadColumn { row: usize, col: usize, columns: usize },
    #[error("optimality certificate failed: {0}")]
    Certificate(String),
}

/// Optimal primal/dual pair for a covering system given as row lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    /// Covering variables, one per column.
    pub primal: Vec<Rational>,
    /// Packing variables, one per row.
    pub dual: Vec<Rational>,
    pub objective: Rational,
    pub pivots: usize,
}

/// Solves the covering relaxation for `rows` (column-index lists) and
/// per-column `weights`.
pub fn solve_rows(rows: &[Vec<usize>], weights: &[Weight], max_pivots: usize) -> Result<LpSolution, LpError> {
    let m = weights.len();
    for (r, row) in rows.iter().enumerate() {
        if let Some(&col) = row.iter().find(|&&c| c >= m) {
            return Err(LpError::BadColumn { row: r, col, columns: m });
        }
    }
    // Machine integers first; the same pivot sequence is replayed with big
    // integers if any intermediate value overflows.
    let outcome = match run_simplex::<i128>(rows, weights, max_pivots) {
        Err(Stop::Overflow) => run_simplex::<BigInt>(rows, weights, max_pivots),
        other => other,
    };
    let (primal, dual, pivots) = match outcome {
        Ok(v) => v,
        Err(Stop::Failed(e)) => return Err(e),
        Err(Stop::Overflow) => unreachable!("big integers do not overflow"),
    };
    let objective = dual.iter().fold(Rational::zero(), |acc, y| acc + y);
    let solution = LpSolution { primal, dual, objective, pivots };
    certify(rows, weights, &solution)?;
    Ok(solution)
}

/// Integer arithmetic used by the fraction-free simplex. Operations return
/// `None` on overflow.
trait Exact: Clone + Ord + Sized {
    fn from_u64(v: u64) -> Self;
    fn zero() -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    /// Division known to be exact.
    fn div_exact(&self, o: &Self) -> Self;
    fn to_bigint(&self) -> BigInt;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

impl Exact for i128 {
    fn from_u64(v: u64) -> Self {
        v as i128
    }
    fn zero() -> Self {
        0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Exact for BigInt {
    fn from_u64(v: u64) -> Self {
        BigInt::from(v)
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

enum Stop {
    Overflow,
    Failed(LpError),
}

impl From<LpError> for Stop {
    fn from(e: LpError) -> Self {
        Stop::Failed(e)
    }
}

/// Revised primal simplex on the packing program, Bland's rule.
///
/// Variables `0..rows` are packing variables and `rows + e` is the slack of
/// edge constraint `e`. The basis inverse is held fraction-free as
/// `scaled / det` with `det = |det B|`, so every entry of `scaled` and of
/// `scaled_values` (`det` times the basic values) stays integral and each
/// pivot's division is exact.
struct PackingSimplex<'a, T> {
    rows: &'a [Vec<usize>],
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    scaled: Vec<Vec<T>>,
    scaled_values: Vec<T>,
    det: T,
    pivots: usize,
}

impl<'a, T: Exact> PackingSimplex<'a, T> {
    fn new(rows: &'a [Vec<usize>], weights: &[Weight]) -> Self {
        let m = weights.len();
        let n = rows.len();
        let scaled = (0..m).map(|i| (0..m).map(|j| T::from_u64(u64::from(i == j))).collect()).collect();
        let mut is_basic = vec![false; n + m];
        is_basic[n..].iter_mut().for_each(|b| *b = true);
        PackingSimplex {
            rows,
            basis: (n..n + m).collect(),
            is_basic,
            scaled,
            scaled_values: weights.iter().map(|&w| T::from_u64(w)).collect(),
            det: T::from_u64(1),
            pivots: 0,
        }
    }

    fn structure_count(&self) -> usize {
        self.rows.len()
    }

    /// `det` times the simplex multipliers `c_B B⁻¹`; the packing cost is 1
    /// on structure variables and 0 on slacks.
    fn multipliers(&self) -> Option<Vec<T>> {
        let mut pi = vec![T::zero(); self.basis.len()];
        for (i, &var) in self.basis.iter().enumerate() {
            if var < self.structure_count() {
                for (p, b) in pi.iter_mut().zip(&self.scaled[i]) {
                    if !b.is_zero() {
                        *p = p.add(b)?;
                    }
                }
            }
        }
        Some(pi)
    }

    /// Smallest-index variable with positive reduced cost.
    fn entering(&self, pi: &[T]) -> Option<Option<usize>> {
        let n = self.structure_count();
        for (j, row) in self.rows.iter().enumerate() {
            if self.is_basic[j] {
                continue;
            }
            let mut sum = T::zero();
            for &e in row {
                sum = sum.add(&pi[e])?;
            }
            if sum < self.det {
                return Some(Some(j));
            }
        }
        let zero = T::zero();
        Some(pi.iter().enumerate().find(|(e, p)| !self.is_basic[n + e] && **p < zero).map(|(e, _)| n + e))
    }

    fn column(&self, var: usize) -> Option<Vec<T>> {
        let n = self.structure_count();
        self.scaled
            .iter()
            .map(|row| {
                if var < n {
                    self.rows[var].iter().try_fold(T::zero(), |acc, &e| acc.add(&row[e]))
                } else {
                    Some(row[var - n].clone())
                }
            })
            .collect()
    }

    /// Minimum-ratio row, ties to the smallest basic variable index.
    fn leaving(&self, alpha: &[T]) -> Option<Option<usize>> {
        let zero = T::zero();
        let mut best: Option<usize> = None;
        for (i, a) in alpha.iter().enumerate() {
            if *a <= zero {
                continue;
            }
            best = match best {
                None => Some(i),
                Some(b) => {
                    let lhs = self.scaled_values[i].mul(&alpha[b])?;
                    let rhs = self.scaled_values[b].mul(a)?;
                    if lhs < rhs || (lhs == rhs && self.basis[i] < self.basis[b]) {
                        Some(i)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        Some(best)
    }

    fn pivot(&mut self, r: usize, var: usize, alpha: &[T]) -> Option<()> {
        let pivot = &alpha[r];
        for (i, a) in alpha.iter().enumerate() {
            if i == r {
                continue;
            }
            let (head, tail) = self.scaled.split_at_mut(i.max(r));
            let (row, pivot_row) = if i < r { (&mut head[i], &tail[0]) } else { (&mut tail[0], &head[r]) };
            for (x, p) in row.iter_mut().zip(pivot_row) {
                if x.is_zero() && (a.is_zero() || p.is_zero()) {
                    continue;
                }
                *x = x.mul(pivot)?.sub(&a.mul(p)?)?.div_exact(&self.det);
            }
            let v = self.scaled_values[i].mul(pivot)?.sub(&a.mul(&self.scaled_values[r])?)?;
            self.scaled_values[i] = v.div_exact(&self.det);
        }
        self.det = pivot.clone();
        self.is_basic[self.basis[r]] = false;
        self.is_basic[var] = true;
        self.basis[r] = var;
        Some(())
    }

    fn run(&mut self, max_pivots: usize) -> Result<(), Stop> {
        loop {
            let pi = self.multipliers().ok_or(Stop::Overflow)?;
            let Some(var) = self.entering(&pi).ok_or(Stop::Overflow)? else {
                return Ok(());
            };
            if self.pivots == max_pivots {
                return Err(LpError::PivotLimit(max_pivots).into());
            }
            let alpha = self.column(var).ok_or(Stop::Overflow)?;
            // Every packing column has a positive entry in some bounded row,
            // so the program is bounded and a leaving row always exists.
            let r = self
                .leaving(&alpha)
                .ok_or(Stop::Overflow)?
                .ok_or_else(|| LpError::Certificate("packing program reported unbounded".into()))?;
            self.pivot(r, var, &alpha).ok_or(Stop::Overflow)?;
            self.pivots += 1;
        }
    }

    /// Covering values and packing values as exact rationals.
    fn solution(&self) -> Option<(Vec<Rational>, Vec<Rational>)> {
        let det = self.det.to_bigint();
        let frac = |x: &T| Rational::new(x.to_bigint(), det.clone());
        let mut dual = vec![Rational::zero(); self.structure_count()];
        for (i, &var) in self.basis.iter().enumerate() {
            if var < self.structure_count() {
                dual[var] = frac(&self.scaled_values[i]);
            }
        }
        let primal = self.multipliers()?.iter().map(frac).collect();
        Some((primal, dual))
    }
}

fn run_simplex<T: Exact>(
    rows: &[Vec<usize>],
    weights: &[Weight],
    max_pivots: usize,
) -> Result<(Vec<Rational>, Vec<Rational>, usize), Stop> {
    let mut simplex = PackingSimplex::<T>::new(rows, weights);
    simplex.run(max_pivots)?;
    let (primal, dual) = simplex.solution().ok_or(Stop::Overflow)?;
    Ok((primal, dual, simplex.pivots))
}

/// Checks primal and dual feasibility and strong duality in exact arithmetic.
fn certify(rows: &[Vec<usize>], weights: &[Weight], s: &LpSolution) -> Result<(), LpError> {
    let fail = |msg: String| Err(LpError::Certificate(msg));
    let one = Rational::one();
    for (e, x) in s.primal.iter().enumerate() {
        if x.is_negative() || *x > one {
            return fail(format!("x[{e}] = {x} outside [0,1]"));
        }
    }
    for (r, row) in rows.iter().enumerate() {
        let sum = row.iter().fold(Rational::zero(), |acc, &e| acc + &s.primal[e]);
        if sum < one {
            return fail(format!("row {r} covered only {sum}"));
        }
    }
    let mut load = vec![Rational::zero(); weights.len()];
    for (r, (row, y)) in rows.iter().zip(&s.dual).enumerate() {
        if y.is_negative() {
            return fail(format!("y[{r}] = {y} negative"));
        }
        for &e in row {
            load[e] += y;
        }
    }
    for (e, (l, &w)) in load.iter().zip(weights).enumerate() {
        if *l > integer(w) {
            return fail(format!("edge {e} packed {l} over weight {w}"));
        }
    }
    let primal_obj = s.primal.iter().zip(weights).fold(Rational::zero(), |acc, (x, &w)| acc + x * integer(w));
    if primal_obj != s.objective {
        return fail(format!("primal {primal_obj} != dual {}", s.objective));
    }
    Ok(())
}

/// Optimal fractional cover of a graph's structure system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalSolution {
    edges: Vec<Edge>,
    values: Vec<Rational>,
    dual: Vec<Rational>,
    objective: Rational,
}

impl FractionalSolution {
    /// Builds a solution from raw values aligned with `edges`.
    pub fn from_values(edges: Vec<Edge>, values: Vec<Rational>, objective: Rational) -> Self {
        assert_eq!(edges.len(), values.len());
        FractionalSolution { edges, values, dual: Vec::new(), objective }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Values aligned with [`edges`](Self::edges).
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, e: &Edge) -> Option<&Rational> {
        self.edges.binary_search(e).ok().map(|i| &self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Edge, &Rational)> + '_ {
        self.edges.iter().zip(&self.values)
    }

    /// Packing certificate, one value per structure row.
    pub fn dual(&self) -> &[Rational] {
        &self.dual
    }

    pub fn objective(&self) -> &Rational {
        &self.objective
    }
}

pub fn solve_covering_lp(m: &IncidenceMatrix, g: &WeightedGraph) -> Result<FractionalSolution, LpError> {
    solve_covering_lp_with(m, g, DEFAULT_MAX_PIVOTS)
}

pub fn solve_covering_lp_with(
    m: &IncidenceMatrix,
    g: &WeightedGraph,
    max_pivots: usize,
) -> Result<FractionalSolution, LpError> {
    if m.columns() != g.edges() {
        return Err(LpError::ColumnMismatch);
    }
    let s = solve_rows(m.rows(), g.weights(), max_pivots)?;
    Ok(FractionalSolution { edges: g.edges().to_vec(), values: s.primal, dual: s.dual, objective: s.objective })
}

/// CPLEX-style LP text of the covering relaxation, for cross-checking with
/// external solvers. Variables are `x_u_v`, rows are named by structure key.
pub fn to_lp_text(m: &IncidenceMatrix, g: &WeightedGraph) -> String {
    let var = |e: &Edge| format!("x_{}_{}", e.u(), e.v());
    let mut out = String::from("Minimize\n obj:");
    if g.edge_count() == 0 {
        out.push_str(" 0");
    }
    for (i, (e, w)) in g.edges().iter().zip(g.weights()).enumerate() {
        let sep = if i == 0 { " " } else { " + " };
        let _ = write!(out, "{sep}{w} {}", var(e));
    }
    out.push_str("\nSubject To\n");
    for (s, row) in m.structures().iter().zip(m.rows()) {
        let name: Vec<String> = s.canonical_key().iter().map(|v| v.to_string()).collect();
        let terms: Vec<String> = row.iter().map(|&c| var(&m.columns()[c])).collect();
        let _ = writeln!(out, " {}_{}: {} >= 1", s.kind(), name.join("_"), terms.join(" + "));
    }
    out.push_str("Bounds\n");
    for e in g.edges() {
        let _ = writeln!(out, " 0 <= {} <= 1", var(e));
    }
    out.push_str("End\n");
    out
}
