//! Row generation for the refutation-size duals, run as column generation on
//! the transposed program.
//!
//! The dual we want is `max sum_x D(x)` subject to `|D(W)| <= 1` for every
//! weakening `W` (plus `D(r) >= -1` per monomial in the resolution-like
//! variant). Materializing every weakening row is hopeless beyond toy sizes,
//! so rows are produced on demand by separation oracles. Transposed, each
//! generated row is a *column* of the refutation-size primal restricted to
//! the generated weakenings, which lets the incremental simplex keep its
//! basis across rounds: a new column enters priced and nonbasic, and
//! re-optimization resumes instead of restarting.
//!
//! Both axiom families are symmetric under large variable groups, and a
//! group-averaged optimum always exists, so the solve runs over orbit sums of
//! the support instead of raw assignments. The oracles then only need to
//! separate over one representative axiom per symmetry class, and the
//! aggregated refutation expands to a pointwise one by symmetrization.

use std::time::Instant;

use num_traits::{Signed, Zero};

use super::simplex::{PhaseOutcome, Tableau};
use super::{DualFunctional, LpError};
use crate::algebra::{Assignment, Monomial, Rational, VarId};
use crate::ord_proofs::ProofCertificate;
use crate::systems::{
    assignments_no_minimum, build_ord, build_php, ord_symmetries, php_collision_axiom_index,
    php_symmetries, AxiomSystem, BitAction, Orbits, Weakening,
};

/// A violated dual constraint reported by a separation oracle.
#[derive(Clone, Debug)]
pub enum Cut {
    /// `sum_x W(x) D(x)` exceeded `+1` (sign `+1`) or fell below `-1`
    /// (sign `-1`).
    Weakening(Weakening, i8),
    /// `sum_x r(x) D(x)` fell below `-1`.
    Monomial(Monomial),
}

/// Finds dual constraints violated by a candidate functional. `values` is
/// aligned with `model.orbits.support`.
pub trait SeparationOracle {
    fn violated(&mut self, model: &DualCutModel, values: &[Rational]) -> Vec<Cut>;
}

/// An oracle that certifies everything as feasible; the solve then returns
/// the relaxation optimum of the seed rows untouched.
pub struct NoOracle;

impl SeparationOracle for NoOracle {
    fn violated(&mut self, _model: &DualCutModel, _values: &[Rational]) -> Vec<Cut> {
        Vec::new()
    }
}

/// The support, symmetry quotient, and representative axioms of one dual.
pub struct DualCutModel {
    pub sys: AxiomSystem,
    pub orbits: Orbits,
    /// One axiom per symmetry class; oracles separate over these only.
    pub rep_axioms: Vec<usize>,
    /// Group used to expand aggregated refutations to pointwise ones; empty
    /// for the trivial quotient.
    pub group: Vec<BitAction>,
}

impl DualCutModel {
    /// Full-cube dual of the pigeonhole system, quotiented by pigeon and
    /// hole relabelings.
    pub fn php_full(n: u32) -> Result<Self, LpError> {
        let sys = build_php(n)?;
        let group = php_symmetries(n);
        let support: Vec<Assignment> = sys.all_assignments().collect();
        let orbits = Orbits::from_group(support, &group);
        let rep_axioms = vec![0, php_collision_axiom_index(n, 0, 1, 0)];
        Ok(DualCutModel { sys, orbits, rep_axioms, group })
    }

    /// Dual restricted to one-hole-per-pigeon assignments. Weakenings of the
    /// pigeon axioms vanish identically there, so only the collision class
    /// needs separating.
    pub fn php_restricted(n: u32) -> Result<Self, LpError> {
        let sys = build_php(n)?;
        let orbits = Orbits::php_restricted(n);
        let rep_axioms = vec![php_collision_axiom_index(n, 0, 1, 0)];
        Ok(DualCutModel { sys, orbits, rep_axioms, group: php_symmetries(n) })
    }

    /// Full-cube dual of the ordering system, quotiented by element
    /// relabelings.
    pub fn ord_full(n: u32) -> Result<Self, LpError> {
        let sys = build_ord(n)?;
        let group = ord_symmetries(n);
        let support: Vec<Assignment> = sys.all_assignments().collect();
        let orbits = Orbits::from_group(support, &group);
        let rep_axioms = vec![0, n as usize];
        Ok(DualCutModel { sys, orbits, rep_axioms, group })
    }

    /// Ordering dual restricted to no-minimum assignments. Weakenings of the
    /// precedence axioms vanish identically there.
    pub fn ord_no_min(n: u32) -> Result<Self, LpError> {
        let sys = build_ord(n)?;
        let group = ord_symmetries(n);
        let support: Vec<Assignment> = assignments_no_minimum(n).collect();
        let orbits = Orbits::from_group(support, &group);
        let rep_axioms = vec![n as usize];
        Ok(DualCutModel { sys, orbits, rep_axioms, group })
    }

    /// No symmetry quotient: every support point its own orbit, every axiom
    /// separated.
    pub fn discrete(sys: AxiomSystem, support: Vec<Assignment>) -> Self {
        let rep_axioms = (0..sys.axioms().len()).collect();
        DualCutModel { sys, orbits: Orbits::discrete(support), rep_axioms, group: Vec::new() }
    }

    /// Orbit-sum row of a monomial: coefficient on orbit `o` is the number of
    /// support points of `o` where the monomial is 1.
    fn orbit_row(&self, m: &Monomial) -> Vec<(usize, Rational)> {
        let Some((pos, neg)) = m.masks() else {
            return Vec::new();
        };
        let mut counts = vec![0u64; self.orbits.orbit_count()];
        for (x, &o) in self.orbits.support.iter().zip(&self.orbits.orbit_of) {
            let bits = x.bits();
            if bits & pos == pos && bits & neg == 0 {
                counts[o] += 1;
            }
        }
        counts
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c > 0)
            .map(|(o, c)| (o, Rational::from_integer(c.into())))
            .collect()
    }
}

/// The weakening whose product is the full literal monomial of `x` (the
/// indicator of `{x}` on the cube), attributed to some axiom that `x`
/// violates. One exists for every point because the systems are infeasible.
fn pin_weakening(sys: &AxiomSystem, x: &Assignment) -> Result<Weakening, LpError> {
    let n = sys.var_count();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for v in (0..n).map(VarId) {
        if x.get(v).map_err(LpError::Algebra)? {
            pos.push(v);
        } else {
            neg.push(v);
        }
    }
    let full = Monomial::from_literals(&pos, &neg);
    for (i, axiom) in sys.axioms().iter().enumerate() {
        if full.is_multiple_of(&axiom.monomial) {
            return Ok(Weakening::from_product(sys, i, &full)?);
        }
    }
    Err(LpError::Malformed("support point satisfies every axiom".into()))
}

enum ColumnKind {
    Weakening(Weakening, i8),
    Monomial(Monomial),
}

struct Column {
    kind: ColumnKind,
    row: Vec<(usize, Rational)>,
}

/// Result of a converged generation run.
pub struct CongenOutcome {
    /// Optimal dual value `sum_x D(x)`, which equals the refutation-size
    /// optimum over the same support.
    pub value: Rational,
    /// Optimal dual functional on the support.
    pub functional: DualFunctional,
    /// Orbit-aggregated refutation: signed coefficient per generated
    /// weakening.
    pub weakening_coefficients: Vec<(Weakening, Rational)>,
    /// Nonnegative coefficients on generated monomials (resolution-like runs
    /// only).
    pub monomial_coefficients: Vec<(Monomial, Rational)>,
    pub rounds: usize,
    pub columns: usize,
}

impl CongenOutcome {
    /// Expands the orbit-aggregated refutation into a pointwise certificate
    /// by distributing each generated weakening over its symmetry orbit.
    /// The caller still verifies the result pointwise.
    pub fn symmetrized_certificate(
        &self,
        model: &DualCutModel,
    ) -> Result<ProofCertificate, LpError> {
        let sys = &model.sys;
        let mut cert = ProofCertificate::new(sys.clone(), Rational::from_integer(1.into()));
        if model.group.is_empty() {
            for (w, c) in &self.weakening_coefficients {
                cert.add_entry(w.clone(), c.clone());
            }
            for (m, c) in &self.monomial_coefficients {
                cert.add_monomial_term(m.clone(), c.clone());
            }
            return Ok(cert);
        }
        let axiom_index_of: std::collections::BTreeMap<Monomial, usize> = sys
            .axioms()
            .iter()
            .enumerate()
            .map(|(i, a)| (a.monomial.clone(), i))
            .collect();
        let group_size = Rational::from_integer((model.group.len() as u64).into());
        for (w, c) in &self.weakening_coefficients {
            let share = c / &group_size;
            let axiom = &sys.axioms()[w.axiom_index].monomial;
            for g in &model.group {
                let image_axiom = g.apply_to_monomial(axiom);
                let image_product = g.apply_to_monomial(&w.product);
                let index = *axiom_index_of.get(&image_axiom).ok_or_else(|| {
                    LpError::Malformed("symmetry does not preserve axioms".into())
                })?;
                let image = Weakening::from_product(sys, index, &image_product)?;
                cert.add_entry(image, share.clone());
            }
        }
        for (m, c) in &self.monomial_coefficients {
            let share = c / &group_size;
            for g in &model.group {
                cert.add_monomial_term(g.apply_to_monomial(m), share.clone());
            }
        }
        Ok(cert)
    }
}

/// Grows the dual row set until the oracles certify feasibility; returns the
/// exact optimum with both-side witnesses.
///
/// Seed rows pin `|D(x)| <= 1` per orbit (each pin is itself a weakening
/// row, so the seeded model is a genuine relaxation), which keeps every
/// intermediate LP bounded. A strictly violated row returned by an oracle is
/// always new — the incumbent satisfies all generated rows — so the loop
/// terminates after at most one round per distinct row.
pub fn solve_with_constraint_generation(
    model: &DualCutModel,
    oracles: &mut [&mut dyn SeparationOracle],
    deadline: Option<Instant>,
) -> Result<CongenOutcome, LpError> {
    let orbits = &model.orbits;
    let m = orbits.orbit_count();
    if m == 0 {
        return Err(LpError::Malformed("empty support".into()));
    }
    let b: Vec<Rational> = orbits
        .orbit_sizes
        .iter()
        .map(|&s| Rational::from_integer(s.into()))
        .collect();

    // seed pin columns, one per orbit, forming the initial identity basis
    let mut columns: Vec<Column> = Vec::with_capacity(m);
    for rep in orbits.representatives.iter() {
        let w = pin_weakening(&model.sys, rep)?;
        let row = model.orbit_row(&w.product);
        debug_assert_eq!(row.len(), 1, "a pin fires on exactly one point");
        columns.push(Column { kind: ColumnKind::Weakening(w, 1), row });
    }
    let mut tableau = Tableau::new(
        columns.iter().map(|c| c.row.clone()).collect(),
        vec![Rational::from_integer(1.into()); m],
        b.clone(),
        (0..m).collect(),
    );

    let log = std::env::var_os("TCS_CONGEN_LOG").is_some();
    let max_pivots = 5_000_000;
    let mut rounds = 0usize;
    loop {
        rounds += 1;
        if rounds > 100_000 {
            return Err(LpError::Internal("cut loop failed to converge".into()));
        }
        match tableau.optimize(max_pivots, deadline)? {
            PhaseOutcome::Optimal => {}
            PhaseOutcome::Unbounded => {
                return Err(LpError::Internal("transposed cut model unbounded".into()));
            }
        }
        if log {
            eprintln!(
                "[congen] round {rounds}: objective {} columns {} pivots {}",
                tableau.objective(),
                columns.len(),
                tableau.pivots
            );
        }
        let y = tableau.multipliers();
        let values: Vec<Rational> = orbits.orbit_of.iter().map(|&o| y[o].clone()).collect();
        let mut cuts = Vec::new();
        for oracle in oracles.iter_mut() {
            if let Some(t) = deadline {
                if Instant::now() > t {
                    return Err(LpError::Deadline);
                }
            }
            cuts.extend(oracle.violated(model, &values));
        }
        if cuts.is_empty() {
            return finish(model, &b, tableau, columns, rounds);
        }
        for cut in cuts {
            let (kind, row) = match cut {
                Cut::Weakening(w, sign) => {
                    let base = model.orbit_row(&w.product);
                    let row: Vec<(usize, Rational)> = if sign >= 0 {
                        base
                    } else {
                        base.into_iter().map(|(o, v)| (o, -v)).collect()
                    };
                    (ColumnKind::Weakening(w, if sign >= 0 { 1 } else { -1 }), row)
                }
                Cut::Monomial(mono) => {
                    let row: Vec<(usize, Rational)> = model
                        .orbit_row(&mono)
                        .into_iter()
                        .map(|(o, v)| (o, -v))
                        .collect();
                    (ColumnKind::Monomial(mono), row)
                }
            };
            tableau.add_column(&row, Rational::from_integer(1.into()));
            columns.push(Column { kind, row });
        }
    }
}

fn finish(
    model: &DualCutModel,
    b: &[Rational],
    tableau: Tableau,
    columns: Vec<Column>,
    rounds: usize,
) -> Result<CongenOutcome, LpError> {
    let lambda = tableau.solution_values();
    let y = tableau.multipliers();
    let value = tableau.objective();

    // exact consistency of the finished solve: nonnegative column weights
    // meeting every orbit equality, and matching objective values
    let m = model.orbits.orbit_count();
    let mut lhs = vec![Rational::zero(); m];
    let mut total = Rational::zero();
    for (col, l) in columns.iter().zip(&lambda) {
        if l.is_negative() {
            return Err(LpError::Internal("negative column weight".into()));
        }
        total += l;
        for (o, v) in &col.row {
            lhs[*o] += v * l;
        }
    }
    if lhs != b {
        return Err(LpError::Internal("aggregated refutation equalities violated".into()));
    }
    if total != value {
        return Err(LpError::Internal("objective mismatch in cut model".into()));
    }
    let mut dual_total = Rational::zero();
    for (yo, bo) in y.iter().zip(b) {
        dual_total += yo * bo;
    }
    if dual_total != value {
        return Err(LpError::Internal("strong duality gap in cut model".into()));
    }

    let functional = DualFunctional::from_pairs(
        model
            .orbits
            .support
            .iter()
            .zip(&model.orbits.orbit_of)
            .map(|(x, &o)| (*x, y[o].clone())),
    );
    let mut weakening_coefficients: std::collections::BTreeMap<Weakening, Rational> =
        std::collections::BTreeMap::new();
    let mut monomial_coefficients: Vec<(Monomial, Rational)> = Vec::new();
    let col_count = columns.len();
    for (col, l) in columns.into_iter().zip(&lambda) {
        if l.is_zero() {
            continue;
        }
        match col.kind {
            ColumnKind::Weakening(w, sign) => {
                let signed = if sign >= 0 { l.clone() } else { -l.clone() };
                *weakening_coefficients.entry(w).or_insert_with(Rational::zero) += signed;
            }
            ColumnKind::Monomial(mono) => monomial_coefficients.push((mono, l.clone())),
        }
    }
    weakening_coefficients.retain(|_, c| !c.is_zero());
    Ok(CongenOutcome {
        value,
        functional,
        weakening_coefficients: weakening_coefficients.into_iter().collect(),
        monomial_coefficients,
        rounds,
        columns: col_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;
    use crate::lp::oracles::{MonomialNonnegOracle, PhpRestrictedOracle, SubcubeOracle};
    use crate::ord_proofs::verify_certificate;

    fn run(model: &DualCutModel, oracle: &mut dyn SeparationOracle) -> CongenOutcome {
        solve_with_constraint_generation(model, &mut [oracle], None).expect("congen failed")
    }

    #[test]
    fn null_oracle_keeps_relaxation_optimum() {
        let model = DualCutModel::php_restricted(3).unwrap();
        let out = run(&model, &mut NoOracle);
        // pins only: every point gets weight 1
        assert_eq!(out.value, int(8));
    }

    #[test]
    fn php3_restricted_value_six() {
        let model = DualCutModel::php_restricted(3).unwrap();
        let out = run(&model, &mut PhpRestrictedOracle::default());
        assert_eq!(out.value, int(6));
    }

    #[test]
    fn php3_full_value_eleven() {
        let model = DualCutModel::php_full(3).unwrap();
        let out = run(&model, &mut SubcubeOracle::default());
        assert_eq!(out.value, int(11));
        // the aggregated refutation symmetrizes to a pointwise one
        let cert = out.symmetrized_certificate(&model).unwrap();
        assert!(verify_certificate(&cert).unwrap().is_valid());
        assert_eq!(cert.total_coefficient_size(), int(11));
    }

    #[test]
    fn php4_restricted_value_twenty_seven() {
        let model = DualCutModel::php_restricted(4).unwrap();
        let out = run(&model, &mut PhpRestrictedOracle::default());
        assert_eq!(out.value, int(27));
    }

    #[test]
    fn ord_full_values() {
        let model3 = DualCutModel::ord_full(3).unwrap();
        assert_eq!(run(&model3, &mut SubcubeOracle::default()).value, int(5));

        let model4 = DualCutModel::ord_full(4).unwrap();
        let out4 = run(&model4, &mut SubcubeOracle::default());
        assert_eq!(out4.value, int(12));
        let cert = out4.symmetrized_certificate(&model4).unwrap();
        assert!(verify_certificate(&cert).unwrap().is_valid());
        assert_eq!(cert.total_coefficient_size(), int(12));
    }

    #[test]
    fn ord_no_min_values_match_transitivity_count() {
        for n in [3u32, 4] {
            let model = DualCutModel::ord_no_min(n).unwrap();
            let out = run(&model, &mut SubcubeOracle::default());
            let transitivity_axioms = 2 * (n * (n - 1) * (n - 2) / 6) as i64;
            assert_eq!(out.value, int(transitivity_axioms), "n={n}");
        }
    }

    #[test]
    fn resolution_like_php3_not_above_plain() {
        let model = DualCutModel::php_full(3).unwrap();
        let plain = run(&model, &mut SubcubeOracle::default());
        let mut weakenings = SubcubeOracle::default();
        let mut monomials = MonomialNonnegOracle::default();
        let reslike = solve_with_constraint_generation(
            &model,
            &mut [&mut weakenings, &mut monomials],
            None,
        )
        .expect("congen failed");
        assert!(reslike.value <= plain.value);
        assert!(reslike.value >= int(0));
        assert!(!reslike.monomial_coefficients.is_empty() || reslike.value == plain.value);
    }

    #[test]
    fn discrete_model_matches_quotient_model() {
        // no-symmetry path must agree with the quotiented one
        let sys = crate::systems::build_php(3).unwrap();
        let support: Vec<Assignment> =
            crate::systems::assignments_one_hole_per_pigeon(3).collect();
        let model = DualCutModel::discrete(sys, support);
        let out = run(&model, &mut PhpRestrictedOracle { cuts: 6 });
        assert_eq!(out.value, int(6));
    }
}
