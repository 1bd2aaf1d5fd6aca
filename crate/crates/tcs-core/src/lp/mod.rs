//! Exact-rational linear programming for total-coefficient-size bounds.
//!
//! [`LpModel`] keeps constraints in `{<=, =, >=}` form with per-variable
//! optional bounds; [`simplex::simplex_solve`] produces exact optima with
//! primal and dual witnesses, certified by [`simplex::verify_optimality`].
//! [`builders`] assemble the refutation-size programs from an axiom system
//! and an assignment stream, and [`congen`] grows the large duals row by row
//! with separation oracles instead of materializing them.

pub mod builders;
pub mod congen;
pub mod oracles;
pub mod simplex;

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{Assignment, Monomial, Polynomial, Rational};

pub use builders::{
    build_dual_resolution_like, build_dual_tcs, build_primal_tcs, weak_duality_check,
    DualTcsModel, PrimalTcsModel, WeakDualityReport,
};
pub use congen::{
    solve_with_constraint_generation, CongenOutcome, Cut, DualCutModel, NoOracle,
    SeparationOracle,
};
pub use oracles::{MonomialNonnegOracle, PhpRestrictedOracle, SubcubeOracle};
pub use simplex::{simplex_solve, verify_optimality, SolveOptions};

#[derive(Debug, Error)]
pub enum LpError {
    #[error("model is malformed: {0}")]
    Malformed(String),
    #[error("pivot limit exceeded after {0} pivots")]
    PivotLimit(u64),
    #[error("deadline exceeded")]
    Deadline,
    #[error("internal solver check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    System(#[from] crate::systems::SystemError),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

/// One constraint row: a sparse combination of columns related to a rational
/// right-hand side.
#[derive(Clone, Debug)]
pub struct LpRow {
    pub coeffs: Vec<(usize, Rational)>,
    pub rel: Rel,
    pub rhs: Rational,
}

/// Optional per-variable bounds; `None` on both sides means a free variable.
#[derive(Clone, Debug, Default)]
pub struct VarBounds {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl VarBounds {
    pub fn free() -> Self {
        VarBounds { lower: None, upper: None }
    }

    pub fn nonnegative() -> Self {
        VarBounds { lower: Some(Rational::zero()), upper: None }
    }
}

/// A linear program with exact rational data.
#[derive(Clone, Debug, Default)]
pub struct LpModel {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub rows: Vec<LpRow>,
    pub bounds: Vec<VarBounds>,
    pub col_labels: Vec<String>,
}

impl Default for Sense {
    fn default() -> Self {
        Sense::Minimize
    }
}

impl LpModel {
    pub fn new(sense: Sense) -> Self {
        LpModel { sense, ..Default::default() }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_var(&mut self, label: impl Into<String>, obj: Rational, bounds: VarBounds) -> usize {
        self.objective.push(obj);
        self.bounds.push(bounds);
        self.col_labels.push(label.into());
        self.objective.len() - 1
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, Rational)>, rel: Rel, rhs: Rational) {
        self.rows.push(LpRow { coeffs, rel, rhs });
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.bounds.len() != n || self.col_labels.len() != n {
            return Err(LpError::Malformed("column arrays out of sync".into()));
        }
        for (i, row) in self.rows.iter().enumerate() {
            for (j, _) in &row.coeffs {
                if *j >= n {
                    return Err(LpError::Malformed(format!(
                        "row {i} references column {j} of {n}"
                    )));
                }
            }
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if let (Some(lo), Some(hi)) = (&b.lower, &b.upper) {
                if lo > hi {
                    return Err(LpError::Malformed(format!("empty bound interval on column {j}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of an exact solve. For `Optimal`, `primal` satisfies every
/// constraint exactly, `value` equals the objective at `primal` exactly, and
/// `dual` carries one multiplier per row with the usual sign conventions
/// (for a minimization: `<=` rows nonpositive, `>=` rows nonnegative,
/// equalities free; reversed for a maximization).
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: Rational,
    pub primal: Vec<Rational>,
    pub dual: Vec<Rational>,
}

impl LpSolution {
    pub fn infeasible() -> Self {
        LpSolution {
            status: LpStatus::Infeasible,
            value: Rational::zero(),
            primal: Vec::new(),
            dual: Vec::new(),
        }
    }

    pub fn unbounded() -> Self {
        LpSolution {
            status: LpStatus::Unbounded,
            value: Rational::zero(),
            primal: Vec::new(),
            dual: Vec::new(),
        }
    }
}

/// A finitely supported weighting of assignments, read as the linear map
/// `p  |->  sum_x p(x) * D(x)` on polynomials over the cube.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualFunctional {
    support: BTreeMap<Assignment, Rational>,
}

impl DualFunctional {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Assignment, Rational)>) -> Self {
        let mut support = BTreeMap::new();
        for (x, v) in pairs {
            if !v.is_zero() {
                support.insert(x, v);
            }
        }
        DualFunctional { support }
    }

    pub fn support(&self) -> impl Iterator<Item = (&Assignment, &Rational)> {
        self.support.iter()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// `D(1)`: the total mass of the functional.
    pub fn value_of_one(&self) -> Rational {
        self.support.values().sum()
    }

    pub fn apply_monomial(&self, m: &Monomial) -> Rational {
        let mut acc = Rational::zero();
        for (x, v) in &self.support {
            if m.eval(x).unwrap_or(false) {
                acc += v;
            }
        }
        acc
    }

    pub fn apply(&self, p: &Polynomial) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in p.terms() {
            acc += c * self.apply_monomial(m);
        }
        acc
    }

    /// Pointwise rescale by a positive factor.
    pub fn scaled(&self, factor: &Rational) -> DualFunctional {
        DualFunctional {
            support: self
                .support
                .iter()
                .map(|(x, v)| (*x, v * factor))
                .collect(),
        }
    }
}

/// Builds the LP dual of a model whose variables are all free or nonnegative.
/// Returns `None` when some variable carries another bound pattern.
///
/// Solving the returned model gives the same optimal value; its dual vector
/// is the original model's primal solution and vice versa.
pub fn dual_model(model: &LpModel) -> Option<LpModel> {
    for b in &model.bounds {
        let nonneg = matches!(&b.lower, Some(l) if l.is_zero()) && b.upper.is_none();
        let free = b.lower.is_none() && b.upper.is_none();
        if !nonneg && !free {
            return None;
        }
    }
    let primal_min = model.sense == Sense::Minimize;
    let mut dual = LpModel::new(if primal_min { Sense::Maximize } else { Sense::Minimize });
    // one dual variable per primal row
    for (i, row) in model.rows.iter().enumerate() {
        let bounds = match (primal_min, row.rel) {
            (_, Rel::Eq) => VarBounds::free(),
            (true, Rel::Le) | (false, Rel::Ge) => VarBounds {
                lower: None,
                upper: Some(Rational::zero()),
            },
            (true, Rel::Ge) | (false, Rel::Le) => VarBounds::nonnegative(),
        };
        dual.add_var(format!("y{i}"), row.rhs.clone(), bounds);
    }
    // one dual row per primal column
    let mut cols: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); model.num_vars()];
    for (i, row) in model.rows.iter().enumerate() {
        for (j, a) in &row.coeffs {
            cols[*j].push((i, a.clone()));
        }
    }
    for (j, col) in cols.into_iter().enumerate() {
        let nonneg = model.bounds[j].lower.is_some();
        let rel = if nonneg {
            if primal_min {
                Rel::Le
            } else {
                Rel::Ge
            }
        } else {
            Rel::Eq
        };
        dual.add_row(col, rel, model.objective[j].clone());
    }
    Some(dual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, ratio};

    #[test]
    fn dual_functional_applies_linearly() {
        let x0 = Assignment::new(2, 0b01).unwrap();
        let x1 = Assignment::new(2, 0b11).unwrap();
        let d = DualFunctional::from_pairs([(x0, int(2)), (x1, ratio(-1, 3))]);
        assert_eq!(d.value_of_one(), ratio(5, 3));
        let m = "x0".parse::<Monomial>().unwrap();
        assert_eq!(d.apply_monomial(&m), ratio(5, 3));
        let m2 = "x1".parse::<Monomial>().unwrap();
        assert_eq!(d.apply_monomial(&m2), ratio(-1, 3));
        let p = Polynomial::from_terms([(m, int(3)), (m2, int(6))]);
        assert_eq!(d.apply(&p), int(5) - int(2));
    }
}
