//! Builders for the refutation-size linear programs.
//!
//! The primal decides coefficients `c_W` on weakenings so that
//! `sum_W c_W W(x) = 1` on every streamed assignment while minimizing
//! `sum |c_W|`; each weakening gets a nonnegative column pair
//! `c_W = plus - minus` whose objective weight is `plus + minus`, so the
//! optimum equals the minimum total coefficient size and a sign-split pair is
//! never simultaneously basic at a vertex. The dual maximizes `sum_x D(x)`
//! under `|D(W)| <= 1`; its rows are the same data transposed.
//!
//! Both builders enumerate every weakening of every axiom and then drop
//! duplicates and terms invisible on the support: distinct axioms can share a
//! weakening product, and products that vanish on every streamed assignment
//! contribute empty columns/rows, neither of which moves the optimum.

use std::collections::BTreeSet;

use num_traits::One;

use super::{DualFunctional, LpError, LpModel, LpSolution, Rel, Sense, VarBounds};
use crate::algebra::{Assignment, Monomial, Rational};
use crate::ord_proofs::{verify_certificate, ProofCertificate};
use crate::systems::{enumerate_weakenings, AxiomSystem, Weakening};

/// The refutation-size primal over a finite support, with column metadata.
pub struct PrimalTcsModel {
    pub sys: AxiomSystem,
    pub model: LpModel,
    /// Column pair `2k` (positive part) and `2k+1` (negative part) belongs to
    /// `weakenings[k]`.
    pub weakenings: Vec<Weakening>,
    /// Row `i` constrains the sum at `assignments[i]`.
    pub assignments: Vec<Assignment>,
}

/// Weakenings of all axioms, deduplicated by product, dropping those that
/// evaluate to 0 on every support point.
fn visible_weakenings(
    sys: &AxiomSystem,
    support: &[Assignment],
) -> Result<Vec<(Weakening, Vec<usize>)>, LpError> {
    let mut seen: BTreeSet<Monomial> = BTreeSet::new();
    let mut out = Vec::new();
    for axiom_index in 0..sys.axioms().len() {
        for w in enumerate_weakenings(sys, axiom_index)? {
            if !seen.insert(w.product.clone()) {
                continue;
            }
            let (pos, neg) = w.product.masks().expect("weakening products are nonzero");
            let hits: Vec<usize> = support
                .iter()
                .enumerate()
                .filter(|(_, x)| x.bits() & pos == pos && x.bits() & neg == 0)
                .map(|(i, _)| i)
                .collect();
            if !hits.is_empty() {
                out.push((w, hits));
            }
        }
    }
    Ok(out)
}

/// Minimize `sum |c_W|` subject to `sum_W c_W W(x) = 1` for each streamed
/// assignment. The solution's row duals are the optimal dual functional.
pub fn build_primal_tcs(
    sys: &AxiomSystem,
    assignments: impl IntoIterator<Item = Assignment>,
) -> Result<PrimalTcsModel, LpError> {
    let support: Vec<Assignment> = assignments.into_iter().collect();
    let visible = visible_weakenings(sys, &support)?;

    let mut model = LpModel::new(Sense::Minimize);
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); support.len()];
    let mut weakenings = Vec::with_capacity(visible.len());
    for (k, (w, hits)) in visible.into_iter().enumerate() {
        let plus = model.add_var(format!("c+{k}"), Rational::one(), VarBounds::nonnegative());
        let minus = model.add_var(format!("c-{k}"), Rational::one(), VarBounds::nonnegative());
        for i in hits {
            rows[i].push((plus, Rational::one()));
            rows[i].push((minus, -Rational::one()));
        }
        weakenings.push(w);
    }
    for coeffs in rows {
        model.add_row(coeffs, Rel::Eq, Rational::one());
    }
    Ok(PrimalTcsModel { sys: sys.clone(), model, weakenings, assignments: support })
}

impl PrimalTcsModel {
    /// Packages an optimal solution as a certificate with coefficients
    /// `c_W = plus - minus`. Valid pointwise on the streamed support; only a
    /// full-cube support makes it a full refutation.
    pub fn witness_certificate(&self, sol: &LpSolution) -> ProofCertificate {
        let mut cert = ProofCertificate::new(self.sys.clone(), Rational::one());
        for (k, w) in self.weakenings.iter().enumerate() {
            let c = &sol.primal[2 * k] - &sol.primal[2 * k + 1];
            cert.add_entry(w.clone(), c);
        }
        cert
    }

    /// The optimal dual functional read off the assignment-row multipliers.
    pub fn dual_functional(&self, sol: &LpSolution) -> DualFunctional {
        DualFunctional::from_pairs(
            self.assignments
                .iter()
                .zip(&sol.dual)
                .map(|(x, v)| (*x, v.clone())),
        )
    }
}

/// The refutation-size dual over a finite support, with row metadata.
pub struct DualTcsModel {
    pub model: LpModel,
    pub support: Vec<Assignment>,
    /// Rows `2k` (`<= 1`) and `2k+1` (`>= -1`) belong to `row_weakenings[k]`.
    pub row_weakenings: Vec<Weakening>,
    /// Monomial nonnegativity rows (`>= -1`), appended after the weakening
    /// rows; populated by the resolution-like variant only.
    pub monomial_rows: Vec<Monomial>,
}

/// Maximize `sum_x D(x)` subject to `|D(W)| <= 1` per weakening, with one
/// free variable per streamed assignment. Weakenings acting identically on
/// the support share one row pair.
pub fn build_dual_tcs(
    sys: &AxiomSystem,
    assignments: impl IntoIterator<Item = Assignment>,
) -> Result<DualTcsModel, LpError> {
    let support: Vec<Assignment> = assignments.into_iter().collect();
    let mut model = LpModel::new(Sense::Maximize);
    for (i, _) in support.iter().enumerate() {
        model.add_var(format!("v{i}"), Rational::one(), VarBounds::free());
    }
    let mut row_weakenings = Vec::new();
    let mut seen_rows: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (w, hits) in visible_weakenings(sys, &support)? {
        if !seen_rows.insert(hits.clone()) {
            continue;
        }
        let coeffs: Vec<(usize, Rational)> =
            hits.into_iter().map(|i| (i, Rational::one())).collect();
        model.add_row(coeffs.clone(), Rel::Le, Rational::one());
        model.add_row(coeffs, Rel::Ge, -Rational::one());
        row_weakenings.push(w);
    }
    Ok(DualTcsModel { model, support, row_weakenings, monomial_rows: Vec::new() })
}

/// The dual of the resolution-like program: everything in [`build_dual_tcs`]
/// plus `D(r) >= -1` for every monomial over the variables, deduplicated by
/// action on the support.
pub fn build_dual_resolution_like(
    sys: &AxiomSystem,
    assignments: impl IntoIterator<Item = Assignment>,
) -> Result<DualTcsModel, LpError> {
    let mut built = build_dual_tcs(sys, assignments)?;
    let mut seen_rows: BTreeSet<Vec<usize>> = BTreeSet::new();
    for mono in crate::algebra::all_monomials(sys.var_count()) {
        let Some((pos, neg)) = mono.masks() else { continue };
        let hits: Vec<usize> = built
            .support
            .iter()
            .enumerate()
            .filter(|(_, x)| x.bits() & pos == pos && x.bits() & neg == 0)
            .map(|(i, _)| i)
            .collect();
        if hits.is_empty() || !seen_rows.insert(hits.clone()) {
            continue;
        }
        let coeffs: Vec<(usize, Rational)> =
            hits.into_iter().map(|i| (i, Rational::one())).collect();
        built.model.add_row(coeffs, Rel::Ge, -Rational::one());
        built.monomial_rows.push(mono);
    }
    Ok(built)
}

impl DualTcsModel {
    /// The functional encoded by an optimal solution.
    pub fn functional(&self, sol: &LpSolution) -> DualFunctional {
        DualFunctional::from_pairs(
            self.support
                .iter()
                .zip(&sol.primal)
                .map(|(x, v)| (*x, v.clone())),
        )
    }
}

/// Report of one weak-duality comparison.
#[derive(Clone, Debug)]
pub struct WeakDualityReport {
    pub dual_value: Rational,
    pub total_coefficient_size: Rational,
    pub holds: bool,
}

/// Verifies the certificate pointwise, then compares `D(1)` against its
/// total coefficient size. The caller guarantees the functional is feasible
/// (`|D(W)| <= 1` over its support closure); under that promise the dual
/// value can never exceed the size of any valid refutation.
pub fn weak_duality_check(
    cert: &ProofCertificate,
    d: &DualFunctional,
) -> Result<WeakDualityReport, LpError> {
    let outcome = verify_certificate(cert)
        .map_err(|e| LpError::Malformed(format!("certificate error: {e}")))?;
    if !outcome.is_valid() {
        return Err(LpError::Malformed("certificate is not a valid refutation".into()));
    }
    let dual_value = d.value_of_one();
    let tcs = cert.total_coefficient_size();
    Ok(WeakDualityReport {
        holds: dual_value <= tcs,
        dual_value,
        total_coefficient_size: tcs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;
    use crate::lp::{simplex_solve, LpStatus, SolveOptions};
    use crate::systems::{assignments_one_hole_per_pigeon, build_ord, build_php};

    fn solve(model: &LpModel) -> LpSolution {
        simplex_solve(model, &SolveOptions::default()).expect("solver error")
    }

    #[test]
    fn ord3_primal_optimum_is_five() {
        let sys = build_ord(3).unwrap();
        let built = build_primal_tcs(&sys, sys.all_assignments()).unwrap();
        let sol = solve(&built.model);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.value, int(5)); // 2^3 - 3

        // the witness is a genuine refutation of matching size
        let cert = built.witness_certificate(&sol);
        assert!(verify_certificate(&cert).unwrap().is_valid());
        assert_eq!(cert.total_coefficient_size(), int(5));

        // and the row duals are a feasible functional of the same value
        let d = built.dual_functional(&sol);
        assert_eq!(d.value_of_one(), int(5));
        let report = weak_duality_check(&cert, &d).unwrap();
        assert!(report.holds);
        assert_eq!(report.dual_value, report.total_coefficient_size);
    }

    #[test]
    fn php3_restricted_primal_and_dual_agree_at_six() {
        let sys = build_php(3).unwrap();
        let support: Vec<Assignment> = assignments_one_hole_per_pigeon(3).collect();
        let primal = build_primal_tcs(&sys, support.clone()).unwrap();
        let psol = solve(&primal.model);
        assert_eq!(psol.value, int(6));

        let dual = build_dual_tcs(&sys, support).unwrap();
        let dsol = solve(&dual.model);
        assert_eq!(dsol.status, LpStatus::Optimal);
        assert_eq!(dsol.value, int(6), "strong duality between the two builds");

        // the dual functional really attains value 6
        assert_eq!(dual.functional(&dsol).value_of_one(), int(6));
    }

    #[test]
    fn resolution_like_dual_is_at_most_plain_dual() {
        // extra rows can only lower the maximum
        let sys = build_php(3).unwrap();
        let support: Vec<Assignment> = assignments_one_hole_per_pigeon(3).collect();
        let plain = solve(&build_dual_tcs(&sys, support.clone()).unwrap().model);
        let reslike_model = build_dual_resolution_like(&sys, support).unwrap();
        assert!(!reslike_model.monomial_rows.is_empty());
        let reslike = solve(&reslike_model.model);
        assert!(reslike.value <= plain.value);
        // the all-zero functional stays feasible, so the optimum is >= 0
        assert!(reslike.value >= int(0));
    }

    #[test]
    fn weak_duality_rejects_invalid_certificates() {
        let sys = build_ord(3).unwrap();
        let cert = ProofCertificate::new(sys, Rational::one());
        let d = DualFunctional::default();
        assert!(weak_duality_check(&cert, &d).is_err());
    }
}
