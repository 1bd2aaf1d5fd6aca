//! Exact primal simplex over arbitrary-precision rationals.
//!
//! Dense-tableau implementation with Bland's smallest-index rule for both the
//! entering and the leaving choice, which rules out cycling on degenerate
//! models. Two phases: artificials are priced out first, then the real
//! objective runs with artificial columns barred from re-entering. Every
//! `Optimal` answer is re-checked against the model by [`verify_optimality`]
//! (exact feasibility, exact dual feasibility, matching objectives) before it
//! is returned, so a wrong pivot can not silently produce a wrong optimum.
//!
//! The tableau keeps its initial identity block, which makes `B^{-1}` visible
//! throughout; [`Tableau::add_column`] uses it to price columns generated
//! after the initial solve, resuming from the current basis.

use std::time::Instant;

use num_traits::{One, Signed, Zero};

use super::{LpError, LpModel, LpSolution, LpStatus, Rel, Sense};
use crate::algebra::Rational;

/// Knobs for [`simplex_solve`].
#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Hard cap on pivot count; exceeded means an internal error.
    pub max_pivots: u64,
    /// Optional wall-clock cutoff, checked once per pivot.
    pub deadline: Option<Instant>,
    /// Solve the LP dual instead when the model has many more rows than
    /// columns and is dualizable; the answer is mapped back exactly.
    pub allow_transpose: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { max_pivots: 2_000_000, deadline: None, allow_transpose: true }
    }
}

/// Solves the model exactly. Infeasible and unbounded outcomes are reported
/// as statuses, not errors.
pub fn simplex_solve(model: &LpModel, opts: &SolveOptions) -> Result<LpSolution, LpError> {
    model.validate()?;
    if opts.allow_transpose && model.rows.len() >= 4 * model.num_vars().max(1) {
        if let Some(dual) = super::dual_model(model) {
            let inner = SolveOptions { allow_transpose: false, ..opts.clone() };
            let sol = simplex_solve(&dual, &inner)?;
            match sol.status {
                LpStatus::Optimal => {
                    let mapped = LpSolution {
                        status: LpStatus::Optimal,
                        value: sol.value.clone(),
                        primal: sol.dual,
                        dual: sol.primal,
                    };
                    verify_optimality(model, &mapped).map_err(LpError::Internal)?;
                    return Ok(mapped);
                }
                // An unbounded dual certifies an infeasible primal. An
                // infeasible dual leaves primal infeasible/unbounded
                // ambiguous, so fall through to the direct solve.
                LpStatus::Unbounded => return Ok(LpSolution::infeasible()),
                LpStatus::Infeasible => {}
            }
        }
    }
    let sol = solve_direct(model, opts)?;
    if sol.status == LpStatus::Optimal {
        verify_optimality(model, &sol).map_err(LpError::Internal)?;
    }
    Ok(sol)
}

// ---------------------------------------------------------------------------
// Standard-form conversion
// ---------------------------------------------------------------------------

/// How an original variable maps into standard-form columns:
/// `x = offset + scale * z[col]` or `x = z[pos] - z[neg]` for free variables.
#[derive(Clone, Debug)]
enum VarMap {
    Shifted { col: usize, scale: i8, offset: Rational },
    Split { pos: usize, neg: usize },
}

struct StandardForm {
    /// Sparse columns of the standard-form matrix, by extended row.
    cols: Vec<Vec<(usize, Rational)>>,
    cost: Vec<Rational>,
    rhs: Vec<Rational>,
    var_map: Vec<VarMap>,
    /// Objective constant from bound shifts (in minimize orientation).
    obj_offset: Rational,
    /// -1 where an extended row was negated to make its rhs nonnegative.
    row_sign: Vec<i8>,
    /// Extended-row relations after sign normalization.
    rels: Vec<Rel>,
    /// Number of user rows (extended rows beyond that enforce upper bounds).
    user_rows: usize,
    /// True when the model was a maximization and the cost vector negated.
    negated_objective: bool,
}

fn to_standard_form(model: &LpModel) -> StandardForm {
    let negate = model.sense == Sense::Maximize;
    let mut cols: Vec<Vec<(usize, Rational)>> = Vec::new();
    let mut cost: Vec<Rational> = Vec::new();
    let mut var_map = Vec::with_capacity(model.num_vars());
    let mut obj_offset = Rational::zero();
    // extended rows: user rows first, then one `x <= upper` row per bounded-
    // above variable (expressed over the shifted column)
    let mut extra_rows: Vec<(usize, Rational, Rel, Rational)> = Vec::new(); // (col, coef, rel, rhs)

    for j in 0..model.num_vars() {
        let c = if negate { -&model.objective[j] } else { model.objective[j].clone() };
        let b = &model.bounds[j];
        match (&b.lower, &b.upper) {
            (None, None) => {
                let pos = cols.len();
                cols.push(Vec::new());
                cost.push(c.clone());
                let neg = cols.len();
                cols.push(Vec::new());
                cost.push(-c);
                var_map.push(VarMap::Split { pos, neg });
            }
            (Some(lo), upper) => {
                // x = lo + z
                let col = cols.len();
                cols.push(Vec::new());
                obj_offset += &c * lo;
                cost.push(c);
                var_map.push(VarMap::Shifted { col, scale: 1, offset: lo.clone() });
                if let Some(hi) = upper {
                    extra_rows.push((col, Rational::one(), Rel::Le, hi - lo));
                }
            }
            (None, Some(hi)) => {
                // x = hi - z
                let col = cols.len();
                cols.push(Vec::new());
                obj_offset += &c * hi;
                cost.push(-c);
                var_map.push(VarMap::Shifted { col, scale: -1, offset: hi.clone() });
            }
        }
    }

    let user_rows = model.rows.len();
    let total_rows = user_rows + extra_rows.len();
    let mut rhs = vec![Rational::zero(); total_rows];
    let mut rels = vec![Rel::Eq; total_rows];
    let mut row_sign = vec![1i8; total_rows];

    // scatter user rows through the variable maps
    let mut dense_rhs: Vec<Rational> = Vec::with_capacity(user_rows);
    for row in &model.rows {
        let mut r = row.rhs.clone();
        for (j, a) in &row.coeffs {
            if let VarMap::Shifted { offset, .. } = &var_map[*j] {
                r -= a * offset;
            }
        }
        dense_rhs.push(r);
    }
    for (i, row) in model.rows.iter().enumerate() {
        let mut rel = row.rel;
        let mut sign = 1i8;
        if dense_rhs[i].is_negative() {
            sign = -1;
            rel = match rel {
                Rel::Le => Rel::Ge,
                Rel::Ge => Rel::Le,
                Rel::Eq => Rel::Eq,
            };
        }
        rhs[i] = if sign < 0 { -&dense_rhs[i] } else { dense_rhs[i].clone() };
        rels[i] = rel;
        row_sign[i] = sign;
        for (j, a) in &row.coeffs {
            let signed = if sign < 0 { -a } else { a.clone() };
            match &var_map[*j] {
                VarMap::Shifted { col, scale, .. } => {
                    let v = if *scale < 0 { -&signed } else { signed };
                    if !v.is_zero() {
                        cols[*col].push((i, v));
                    }
                }
                VarMap::Split { pos, neg } => {
                    if !signed.is_zero() {
                        cols[*pos].push((i, signed.clone()));
                        cols[*neg].push((i, -signed));
                    }
                }
            }
        }
    }
    for (k, (col, coef, rel, bound)) in extra_rows.into_iter().enumerate() {
        let i = user_rows + k;
        debug_assert!(!bound.is_negative(), "validated bound interval");
        rhs[i] = bound;
        rels[i] = rel;
        cols[col].push((i, coef));
    }

    StandardForm {
        cols,
        cost,
        rhs,
        var_map,
        obj_offset,
        row_sign,
        rels,
        user_rows,
        negated_objective: negate,
    }
}

// ---------------------------------------------------------------------------
// Tableau
// ---------------------------------------------------------------------------

pub(crate) enum PhaseOutcome {
    Optimal,
    Unbounded,
}

/// Dense simplex tableau in standard form `min c z, A z = b, z >= 0`.
pub(crate) struct Tableau {
    m: usize,
    /// Row-major coefficient matrix, `m x n_cols`.
    a: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    /// Reduced-cost row for the current phase, plus its negated objective.
    cost: Vec<Rational>,
    neg_obj: Rational,
    basis: Vec<usize>,
    /// Columns barred from entering (artificials in phase 2).
    barred: Vec<bool>,
    /// Rows found linearly dependent at the end of phase 1.
    row_active: Vec<bool>,
    /// Column holding the initial `e_i` for each row, so `B^{-1}` stays
    /// readable for pricing generated columns.
    identity_col: Vec<usize>,
    /// Raw (un-reduced) cost of each identity column under the current phase
    /// objective; needed to read simplex multipliers off the identity block.
    identity_raw_cost: Vec<Rational>,
    pub pivots: u64,
}

impl Tableau {
    fn n_cols(&self) -> usize {
        self.cost.len()
    }

    /// Builds a tableau whose initial basis is the given identity columns.
    /// `columns[identity_col[i]]` must be the unit vector `e_i` and `rhs`
    /// must be nonnegative.
    pub(crate) fn new(
        columns: Vec<Vec<(usize, Rational)>>,
        cost: Vec<Rational>,
        rhs: Vec<Rational>,
        identity_col: Vec<usize>,
    ) -> Tableau {
        let m = rhs.len();
        let n = columns.len();
        let mut a = vec![vec![Rational::zero(); n]; m];
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col {
                a[*i][j] = v.clone();
            }
        }
        let basis = identity_col.clone();
        let identity_raw_cost = identity_col.iter().map(|&j| cost[j].clone()).collect();
        let mut t = Tableau {
            m,
            a,
            rhs,
            cost,
            neg_obj: Rational::zero(),
            basis,
            barred: vec![false; n],
            row_active: vec![true; m],
            identity_col,
            identity_raw_cost,
            pivots: 0,
        };
        t.reprice();
        t
    }

    /// Replaces the raw objective (phase switch) and reprices.
    fn set_raw_costs(&mut self, raw: Vec<Rational>) {
        self.identity_raw_cost = self.identity_col.iter().map(|&j| raw[j].clone()).collect();
        self.cost = raw;
        self.reprice();
    }

    /// Recomputes the reduced-cost row from the raw cost of each column and
    /// the current basis.
    fn reprice(&mut self) {
        // reduced = cost - sum_i cost[basis_i] * row_i
        let mut reduced = self.cost.clone();
        let mut neg_obj = Rational::zero();
        for i in 0..self.m {
            if !self.row_active[i] {
                continue;
            }
            let cb = reduced[self.basis[i]].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..reduced.len() {
                if !self.a[i][j].is_zero() {
                    let delta = &cb * &self.a[i][j];
                    reduced[j] -= delta;
                }
            }
            neg_obj -= &cb * &self.rhs[i];
        }
        self.cost = reduced;
        self.neg_obj = neg_obj;
    }

    pub(crate) fn objective(&self) -> Rational {
        -self.neg_obj.clone()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        self.pivots += 1;
        let mut prow = std::mem::take(&mut self.a[r]);
        let mut prhs = std::mem::replace(&mut self.rhs[r], Rational::zero());
        let piv = prow[c].clone();
        debug_assert!(!piv.is_zero());
        if !piv.is_one() {
            for v in prow.iter_mut() {
                if !v.is_zero() {
                    *v /= &piv;
                }
            }
            prhs /= &piv;
        }
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.a[i][c].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in self.a[i].iter_mut().zip(prow.iter()) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            debug_assert!(self.a[i][c].is_zero());
            self.rhs[i] -= &f * &prhs;
        }
        let f = self.cost[c].clone();
        if !f.is_zero() {
            for (v, pv) in self.cost.iter_mut().zip(prow.iter()) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.neg_obj -= &f * &prhs;
        }
        self.a[r] = prow;
        self.rhs[r] = prhs;
        self.basis[r] = c;
    }

    /// Bland's rule: entering column is the smallest-index non-barred column
    /// with negative reduced cost.
    fn entering_bland(&self) -> Option<usize> {
        (0..self.n_cols()).find(|&j| !self.barred[j] && self.cost[j].is_negative())
    }

    /// Dantzig's rule: most negative reduced cost. Fast in practice but can
    /// cycle on degenerate bases, so [`Tableau::optimize`] falls back to
    /// Bland's rule after a degenerate streak.
    fn entering_dantzig(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for j in 0..self.n_cols() {
            if self.barred[j] || !self.cost[j].is_negative() {
                continue;
            }
            match best {
                None => best = Some(j),
                Some(b) => {
                    if self.cost[j] < self.cost[b] {
                        best = Some(j);
                    }
                }
            }
        }
        best
    }

    /// Ratio test with Bland's tie-break: among rows attaining the minimum
    /// ratio, pick the one whose basic variable has the smallest index.
    fn leaving(&self, c: usize) -> Option<usize> {
        let mut best: Option<(usize, &Rational, &Rational)> = None; // (row, rhs, pivot)
        for i in 0..self.m {
            if !self.row_active[i] || !self.a[i][c].is_positive() {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bi, brhs, bpiv)) => {
                    // compare rhs_i / a_ic against brhs / bpiv exactly
                    let lhs = &self.rhs[i] * *bpiv;
                    let rhs = *brhs * &self.a[i][c];
                    match lhs.cmp(&rhs) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Greater => false,
                        std::cmp::Ordering::Equal => self.basis[i] < self.basis[*bi],
                    }
                }
            };
            if better {
                best = Some((i, &self.rhs[i], &self.a[i][c]));
            }
        }
        best.map(|(i, _, _)| i)
    }

    /// Runs pivots to optimality. Dantzig pricing by default; after a streak
    /// of pivots without objective improvement the rule switches to Bland's,
    /// whose smallest-index choices cannot cycle, and switches back once the
    /// objective moves again.
    pub(crate) fn optimize(
        &mut self,
        max_pivots: u64,
        deadline: Option<Instant>,
    ) -> Result<PhaseOutcome, LpError> {
        let stall_threshold = 2 * self.m as u64 + 16;
        let mut stalled: u64 = 0;
        loop {
            if self.pivots > max_pivots {
                return Err(LpError::PivotLimit(self.pivots));
            }
            if let Some(t) = deadline {
                if Instant::now() > t {
                    return Err(LpError::Deadline);
                }
            }
            let c = if stalled > stall_threshold {
                self.entering_bland()
            } else {
                self.entering_dantzig()
            };
            let Some(c) = c else {
                return Ok(PhaseOutcome::Optimal);
            };
            let Some(r) = self.leaving(c) else {
                return Ok(PhaseOutcome::Unbounded);
            };
            let before = self.neg_obj.clone();
            self.pivot(r, c);
            if self.neg_obj == before {
                stalled += 1;
            } else {
                stalled = 0;
            }
        }
    }

    /// Values of all standard-form columns in the current basic solution.
    pub(crate) fn solution_values(&self) -> Vec<Rational> {
        let mut values = vec![Rational::zero(); self.n_cols()];
        for i in 0..self.m {
            if self.row_active[i] {
                values[self.basis[i]] = self.rhs[i].clone();
            }
        }
        values
    }

    /// Simplex multipliers `y = c_B B^{-1}`, read off the identity block:
    /// `y_i = rawcost(identity_col_i) - reduced(identity_col_i)`.
    pub(crate) fn multipliers(&self) -> Vec<Rational> {
        (0..self.m)
            .map(|i| &self.identity_raw_cost[i] - &self.cost[self.identity_col[i]])
            .collect()
    }

    /// Appends a generated column (given in original row space), pricing it
    /// through `B^{-1}` so the current basis and factorization stay valid.
    /// The new column enters nonbasic at zero, which keeps the current basic
    /// solution feasible; a subsequent [`Tableau::optimize`] resumes from it.
    pub(crate) fn add_column(&mut self, col: &[(usize, Rational)], raw_cost: Rational) {
        let y = self.multipliers();
        // transformed column: B^{-1} a = sum_k a_k * T[:, identity_col[k]]
        let mut transformed = vec![Rational::zero(); self.m];
        let mut reduced = raw_cost;
        for (k, v) in col {
            let idc = self.identity_col[*k];
            for i in 0..self.m {
                if !self.a[i][idc].is_zero() {
                    let delta = v * &self.a[i][idc];
                    transformed[i] += delta;
                }
            }
            reduced -= v * &y[*k];
        }
        for i in 0..self.m {
            let v = std::mem::replace(&mut transformed[i], Rational::zero());
            self.a[i].push(v);
        }
        self.cost.push(reduced);
        self.barred.push(false);
    }
}

// ---------------------------------------------------------------------------
// Direct solve
// ---------------------------------------------------------------------------

fn solve_direct(model: &LpModel, opts: &SolveOptions) -> Result<LpSolution, LpError> {
    let sf = to_standard_form(model);
    let m = sf.rhs.len();
    let n_struct = sf.cols.len();

    // append slack / surplus / artificial columns
    let mut columns = sf.cols.clone();
    let mut raw_cost = sf.cost.clone();
    let mut phase1_cost = vec![Rational::zero(); n_struct];
    let mut identity_col = vec![usize::MAX; m];
    let mut artificial = vec![false; n_struct];
    for i in 0..m {
        match sf.rels[i] {
            Rel::Le => {
                columns.push(vec![(i, Rational::one())]);
                raw_cost.push(Rational::zero());
                phase1_cost.push(Rational::zero());
                artificial.push(false);
                identity_col[i] = columns.len() - 1;
            }
            Rel::Ge => {
                columns.push(vec![(i, -Rational::one())]);
                raw_cost.push(Rational::zero());
                phase1_cost.push(Rational::zero());
                artificial.push(false);
                columns.push(vec![(i, Rational::one())]);
                raw_cost.push(Rational::zero());
                phase1_cost.push(Rational::one());
                artificial.push(true);
                identity_col[i] = columns.len() - 1;
            }
            Rel::Eq => {
                columns.push(vec![(i, Rational::one())]);
                raw_cost.push(Rational::zero());
                phase1_cost.push(Rational::one());
                artificial.push(true);
                identity_col[i] = columns.len() - 1;
            }
        }
    }

    let mut t = Tableau::new(columns, phase1_cost.clone(), sf.rhs.clone(), identity_col);

    // Phase 1: art columns have unit cost; optimum zero means feasible.
    match t.optimize(opts.max_pivots, opts.deadline)? {
        PhaseOutcome::Optimal => {}
        PhaseOutcome::Unbounded => {
            return Err(LpError::Internal("phase 1 unbounded".into()));
        }
    }
    if t.objective().is_positive() {
        return Ok(LpSolution::infeasible());
    }
    // Drive basic artificials out or deactivate dependent rows.
    for i in 0..m {
        if !artificial[t.basis[i]] {
            continue;
        }
        debug_assert!(t.rhs[i].is_zero());
        let pivot_col = (0..t.n_cols()).find(|&j| !artificial[j] && !t.a[i][j].is_zero());
        match pivot_col {
            Some(c) => t.pivot(i, c),
            None => t.row_active[i] = false,
        }
    }
    // Phase 2: real costs, artificials barred.
    for (j, is_art) in artificial.iter().enumerate() {
        if *is_art {
            t.barred[j] = true;
        }
    }
    t.set_raw_costs(raw_cost);
    let outcome = t.optimize(opts.max_pivots, opts.deadline)?;
    if let PhaseOutcome::Unbounded = outcome {
        return Ok(LpSolution::unbounded());
    }

    extract_solution(model, &sf, &t)
}

fn extract_solution(model: &LpModel, sf: &StandardForm, t: &Tableau) -> Result<LpSolution, LpError> {
    let z = t.solution_values();
    let mut primal = Vec::with_capacity(model.num_vars());
    for vm in &sf.var_map {
        let x = match vm {
            VarMap::Shifted { col, scale, offset } => {
                if *scale < 0 {
                    offset - &z[*col]
                } else {
                    offset + &z[*col]
                }
            }
            VarMap::Split { pos, neg } => &z[*pos] - &z[*neg],
        };
        primal.push(x);
    }
    let value_min = t.objective() + &sf.obj_offset;
    let value = if sf.negated_objective { -value_min } else { value_min };

    let y = t.multipliers();
    let mut dual = Vec::with_capacity(sf.user_rows);
    for i in 0..sf.user_rows {
        let mut yi = y[i].clone();
        if sf.row_sign[i] < 0 {
            yi = -yi;
        }
        if sf.negated_objective {
            yi = -yi;
        }
        dual.push(yi);
    }

    Ok(LpSolution { status: LpStatus::Optimal, value, primal, dual })
}

// ---------------------------------------------------------------------------
// Certification
// ---------------------------------------------------------------------------

/// Exact optimality check for an `Optimal` solution: primal feasibility,
/// bound feasibility, dual sign conventions, dual feasibility of every
/// column, complementary slackness, and equality of primal and dual
/// objective values. Any failure message names the violated condition.
pub fn verify_optimality(model: &LpModel, sol: &LpSolution) -> Result<(), String> {
    if sol.status != LpStatus::Optimal {
        return Err("verify_optimality wants an Optimal solution".into());
    }
    if sol.primal.len() != model.num_vars() || sol.dual.len() != model.rows.len() {
        return Err("witness lengths do not match the model".into());
    }
    let minimize = model.sense == Sense::Minimize;

    let mut objective = Rational::zero();
    for (c, x) in model.objective.iter().zip(&sol.primal) {
        objective += c * x;
    }
    if objective != sol.value {
        return Err(format!("objective mismatch: {} vs {}", objective, sol.value));
    }

    for (j, b) in model.bounds.iter().enumerate() {
        if let Some(lo) = &b.lower {
            if &sol.primal[j] < lo {
                return Err(format!("column {j} below lower bound"));
            }
        }
        if let Some(hi) = &b.upper {
            if &sol.primal[j] > hi {
                return Err(format!("column {j} above upper bound"));
            }
        }
    }

    let mut dual_value = Rational::zero();
    for (i, row) in model.rows.iter().enumerate() {
        let mut lhs = Rational::zero();
        for (j, a) in &row.coeffs {
            lhs += a * &sol.primal[*j];
        }
        let ok = match row.rel {
            Rel::Le => lhs <= row.rhs,
            Rel::Eq => lhs == row.rhs,
            Rel::Ge => lhs >= row.rhs,
        };
        if !ok {
            return Err(format!("row {i} violated"));
        }
        let y = &sol.dual[i];
        // sign conventions, flipped for maximization
        let sign_ok = match (minimize, row.rel) {
            (_, Rel::Eq) => true,
            (true, Rel::Le) | (false, Rel::Ge) => !y.is_positive(),
            (true, Rel::Ge) | (false, Rel::Le) => !y.is_negative(),
        };
        if !sign_ok {
            return Err(format!("dual sign convention violated on row {i}"));
        }
        if !y.is_zero() && lhs != row.rhs {
            return Err(format!("complementary slackness violated on row {i}"));
        }
        dual_value += y * &row.rhs;
    }

    // reduced costs per column
    let mut reduced: Vec<Rational> = model.objective.to_vec();
    for (i, row) in model.rows.iter().enumerate() {
        if sol.dual[i].is_zero() {
            continue;
        }
        for (j, a) in &row.coeffs {
            reduced[*j] -= &sol.dual[i] * a;
        }
    }
    for (j, d) in reduced.iter().enumerate() {
        let b = &model.bounds[j];
        let at_lower = b.lower.as_ref().is_some_and(|lo| &sol.primal[j] == lo);
        let at_upper = b.upper.as_ref().is_some_and(|hi| &sol.primal[j] == hi);
        let ok = if at_lower && at_upper {
            true
        } else if at_lower {
            if minimize { !d.is_negative() } else { !d.is_positive() }
        } else if at_upper {
            if minimize { !d.is_positive() } else { !d.is_negative() }
        } else {
            d.is_zero()
        };
        if !ok {
            return Err(format!("dual feasibility violated at column {j}: reduced cost {d}"));
        }
        // complementary slackness for columns strictly inside their bounds is
        // exactly the d == 0 case above; contribution to the dual objective:
        if at_lower && !d.is_zero() {
            if let Some(lo) = &b.lower {
                dual_value += d * lo;
            }
        } else if at_upper && !d.is_zero() {
            if let Some(hi) = &b.upper {
                dual_value += d * hi;
            }
        }
    }

    if dual_value != sol.value {
        return Err(format!("strong duality gap: dual {} vs primal {}", dual_value, sol.value));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::VarBounds;
    use crate::{int, ratio};
    use rand::{Rng, SeedableRng};

    fn solve(model: &LpModel) -> LpSolution {
        simplex_solve(model, &SolveOptions::default()).expect("solver error")
    }

    #[test]
    fn minimize_single_variable() {
        // min x s.t. x >= 3
        let mut m = LpModel::new(Sense::Minimize);
        let x = m.add_var("x", int(1), VarBounds::free());
        m.add_row(vec![(x, int(1))], Rel::Ge, int(3));
        let s = solve(&m);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, int(3));
        assert_eq!(s.primal[x], int(3));
    }

    #[test]
    fn two_variable_max() {
        // max x + 2y s.t. x + y <= 4, 2x + y >= 2, 0 <= y <= 3, x >= 0
        let mut m = LpModel::new(Sense::Maximize);
        let x = m.add_var("x", int(1), VarBounds::nonnegative());
        let y = m.add_var(
            "y",
            int(2),
            VarBounds { lower: Some(int(0)), upper: Some(int(3)) },
        );
        m.add_row(vec![(x, int(1)), (y, int(1))], Rel::Le, int(4));
        m.add_row(vec![(x, int(2)), (y, int(1))], Rel::Ge, int(2));
        let s = solve(&m);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, int(7));
        assert_eq!(s.primal, vec![int(1), int(3)]);
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut m = LpModel::new(Sense::Minimize);
        let x = m.add_var("x", int(1), VarBounds::nonnegative());
        m.add_row(vec![(x, int(1))], Rel::Le, int(-1));
        assert_eq!(solve(&m).status, LpStatus::Infeasible);

        let mut m = LpModel::new(Sense::Maximize);
        let x = m.add_var("x", int(1), VarBounds::nonnegative());
        m.add_row(vec![(x, int(-1))], Rel::Le, int(5));
        assert_eq!(solve(&m).status, LpStatus::Unbounded);
    }

    #[test]
    fn fractional_optimum_is_exact() {
        // min 3x + 5y s.t. 3x + y >= 1, x + 4y >= 1  -> vertex (3/11, 2/11)
        let mut m = LpModel::new(Sense::Minimize);
        let x = m.add_var("x", int(3), VarBounds::nonnegative());
        let y = m.add_var("y", int(5), VarBounds::nonnegative());
        m.add_row(vec![(x, int(3)), (y, int(1))], Rel::Ge, int(1));
        m.add_row(vec![(x, int(1)), (y, int(4))], Rel::Ge, int(1));
        let s = solve(&m);
        assert_eq!(s.value, ratio(19, 11));
        assert_eq!(s.primal, vec![ratio(3, 11), ratio(2, 11)]);
    }

    #[test]
    fn degenerate_cycling_instance_terminates() {
        // Beale's classic degenerate instance; Dantzig's largest-coefficient
        // rule cycles on it, Bland's rule must terminate at value -1/20.
        let mut m = LpModel::new(Sense::Minimize);
        let x1 = m.add_var("x1", ratio(-3, 4), VarBounds::nonnegative());
        let x2 = m.add_var("x2", int(150), VarBounds::nonnegative());
        let x3 = m.add_var("x3", ratio(-1, 50), VarBounds::nonnegative());
        let x4 = m.add_var("x4", int(6), VarBounds::nonnegative());
        m.add_row(
            vec![(x1, ratio(1, 4)), (x2, int(-60)), (x3, ratio(-1, 25)), (x4, int(9))],
            Rel::Le,
            int(0),
        );
        m.add_row(
            vec![(x1, ratio(1, 2)), (x2, int(-90)), (x3, ratio(-1, 50)), (x4, int(3))],
            Rel::Le,
            int(0),
        );
        m.add_row(vec![(x3, int(1))], Rel::Le, int(1));
        let s = solve(&m);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, ratio(-1, 20));
    }

    #[test]
    fn equality_rows_and_duals() {
        // min x + y s.t. x + 2y = 3, x - y = 0 -> x = y = 1
        let mut m = LpModel::new(Sense::Minimize);
        let x = m.add_var("x", int(1), VarBounds::free());
        let y = m.add_var("y", int(1), VarBounds::free());
        m.add_row(vec![(x, int(1)), (y, int(2))], Rel::Eq, int(3));
        m.add_row(vec![(x, int(1)), (y, int(-1))], Rel::Eq, int(0));
        let s = solve(&m);
        assert_eq!(s.value, int(2));
        assert_eq!(s.primal, vec![int(1), int(1)]);
        // duals must reproduce the value: 3*y0 + 0*y1 = 2
        assert_eq!(&s.dual[0] * int(3), int(2));
    }

    #[test]
    fn random_lps_pass_certification_and_strong_duality() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20240811);
        let mut optimal_seen = 0;
        for _ in 0..60 {
            let nv = rng.gen_range(1..=4);
            let nr = rng.gen_range(1..=4);
            let mut m = LpModel::new(if rng.gen_bool(0.5) {
                Sense::Minimize
            } else {
                Sense::Maximize
            });
            for j in 0..nv {
                let bounds = if rng.gen_bool(0.3) {
                    VarBounds::free()
                } else {
                    VarBounds::nonnegative()
                };
                m.add_var(format!("v{j}"), int(rng.gen_range(-4..=4)), bounds);
            }
            for _ in 0..nr {
                let coeffs: Vec<(usize, Rational)> = (0..nv)
                    .filter_map(|j| {
                        let c = rng.gen_range(-3..=3);
                        (c != 0).then(|| (j, int(c)))
                    })
                    .collect();
                let rel = match rng.gen_range(0..3) {
                    0 => Rel::Le,
                    1 => Rel::Ge,
                    _ => Rel::Eq,
                };
                m.add_row(coeffs, rel, int(rng.gen_range(-4..=4)));
            }
            // keep the region bounded so Optimal is common
            let box_row: Vec<(usize, Rational)> = (0..nv).map(|j| (j, int(1))).collect();
            m.add_row(box_row.clone(), Rel::Le, int(10));
            let neg_box: Vec<(usize, Rational)> = (0..nv).map(|j| (j, int(-1))).collect();
            m.add_row(neg_box, Rel::Le, int(10));

            let s = solve(&m); // verify_optimality runs inside on Optimal
            if s.status == LpStatus::Optimal {
                optimal_seen += 1;
                // strong duality against the explicitly dualized model
                if let Some(d) = super::super::dual_model(&m) {
                    let sd = solve(&d);
                    assert_eq!(sd.status, LpStatus::Optimal, "dual of optimal must be optimal");
                    assert_eq!(sd.value, s.value, "strong duality");
                }
            }
        }
        assert!(optimal_seen > 15, "want a healthy share of optimal instances");
    }

    #[test]
    fn transposed_solve_matches_direct() {
        // many rows, few columns: exercises the auto-transpose path
        let mut m = LpModel::new(Sense::Maximize);
        let x = m.add_var("x", int(1), VarBounds::free());
        let y = m.add_var("y", int(1), VarBounds::free());
        for k in 1..=12i64 {
            m.add_row(vec![(x, int(1)), (y, int(k))], Rel::Le, int(k + 1));
            m.add_row(vec![(x, int(-1)), (y, int(-k))], Rel::Le, int(k + 1));
        }
        let auto = solve(&m);
        let direct = simplex_solve(
            &m,
            &SolveOptions { allow_transpose: false, ..Default::default() },
        )
        .unwrap();
        assert_eq!(auto.status, LpStatus::Optimal);
        assert_eq!(auto.value, direct.value);
    }
}
