//! The explicit dual witness for the pigeonhole family and its closed-form
//! analytics.
//!
//! The witness lives on the `(n-1)^n` assignments sending each pigeon to
//! exactly one hole. Writing `J_S` for the indicator that the pigeons of a
//! proper subset `S` occupy pairwise distinct holes, the witness is
//! `D = sum_{S} c_{|S|} J_S` with level coefficients chosen so that `D`
//! behaves, against any polynomial ignoring some pigeon `i`, exactly like
//! `J_{everyone but i}`. That single cancellation law drives every closed
//! form here: the mean of `D`, the vanishing/flip/sign-splitting laws for
//! weakening correlations, the squared norm, the resulting lower bound on
//! refutation size, and the failure value that rules the witness out for the
//! resolution-like program. Each closed form is paired with a brute-force
//! summation over the support so the two routes check each other.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{Monomial, Polynomial, Rational};
use crate::decimal::{decimal_string, sqrt_decimal_string};
use crate::lp::DualFunctional;
use crate::systems::{assignment_from_holes, HoleSets};
use crate::zeta::{decode_masks, per_pigeon_subset_sums};

fn big_factorial(k: u32) -> BigInt {
    let mut f = BigInt::one();
    for i in 2..=k as u64 {
        f *= i;
    }
    f
}

fn big_pow(base: u32, exp: u32) -> BigInt {
    BigInt::from(base).pow(exp)
}

/// The explicit dual witness at a fixed `n >= 2`, with a lazily built table
/// of its values over the one-hole-per-pigeon support.
pub struct PhpDual {
    pub n: u32,
    table: OnceLock<Vec<Rational>>,
}

impl PhpDual {
    pub fn new(n: u32) -> Self {
        assert!(n >= 2, "the pigeonhole family starts at n = 2");
        PhpDual { n, table: OnceLock::new() }
    }

    fn holes(&self) -> u32 {
        self.n - 1
    }

    /// Level coefficient for subsets of size `s`:
    /// `(-1)^(n-1-s) (n-1-s)! / (n-1)^(n-1-s)`. Depends only on `s`, and
    /// equals 1 at `s = n - 1`.
    pub fn level_coefficient(&self, s: u32) -> Rational {
        assert!(s < self.n);
        let k = self.n - 1 - s;
        let mut num = big_factorial(k);
        if k % 2 == 1 {
            num = -num;
        }
        Rational::new(num, big_pow(self.holes(), k))
    }

    /// Indicator that the pigeons selected by `subset` (a bitmask over the
    /// `n` pigeons, which must be a proper subset) occupy pairwise distinct
    /// holes.
    pub fn distinct_holes(&self, subset: u32, holes: &[u8]) -> bool {
        assert!(subset != (1 << self.n) - 1, "indicator defined for proper subsets");
        let mut used = 0u32;
        for (i, &h) in holes.iter().enumerate() {
            if subset >> i & 1 == 1 {
                if used >> h & 1 == 1 {
                    return false;
                }
                used |= 1 << h;
            }
        }
        true
    }

    /// Mean of the distinct-holes indicator over the uniform support, for a
    /// subset of size `s`: `prod_{k=1..s}(n-k) / (n-1)^s`.
    pub fn distinct_holes_mean(&self, s: u32) -> Rational {
        let mut num = BigInt::one();
        for k in 1..=s {
            num *= self.n as i64 - k as i64;
        }
        Rational::new(num, big_pow(self.holes(), s))
    }

    /// Value of the witness at a one-hole-per-pigeon assignment, grouped by
    /// subset size: the number of distinct-hole subsets of each size is an
    /// elementary symmetric function of the hole occupancy counts.
    pub fn eval_holes(&self, holes: &[u8]) -> Rational {
        debug_assert_eq!(holes.len(), self.n as usize);
        let counts = self.occupancy(holes);
        // e[s] = number of s-subsets hitting each hole at most once
        let mut e = vec![BigInt::zero(); self.n as usize + 1];
        e[0] = BigInt::one();
        let mut degree = 0usize;
        for &c in &counts {
            if c == 0 {
                continue;
            }
            degree += 1;
            for s in (1..=degree).rev() {
                let add = &e[s - 1] * c;
                e[s] += add;
            }
        }
        let mut total = Rational::zero();
        for s in 0..self.n {
            if !e[s as usize].is_zero() {
                total += self.level_coefficient(s)
                    * Rational::from_integer(e[s as usize].clone());
            }
        }
        total
    }

    /// Same value by direct summation over all `2^n - 1` proper subsets;
    /// the independent route for cross-checking `eval_holes`.
    pub fn eval_holes_by_subsets(&self, holes: &[u8]) -> Rational {
        assert!(self.n <= 12, "subset summation route is for small n");
        let mut total = Rational::zero();
        for subset in 0..(1u32 << self.n) - 1 {
            if self.distinct_holes(subset, holes) {
                total += self.level_coefficient(subset.count_ones());
            }
        }
        total
    }

    fn occupancy(&self, holes: &[u8]) -> Vec<i64> {
        let mut counts = vec![0i64; self.holes() as usize];
        for &h in holes {
            counts[h as usize] += 1;
        }
        counts
    }

    /// Witness values over the whole support, indexed in the mixed-radix
    /// order of hole vectors (pigeon 0 least significant). Built once.
    pub fn table(&self) -> &[Rational] {
        self.table.get_or_init(|| {
            let mut out = Vec::with_capacity((self.holes() as usize).pow(self.n));
            let mut holes = vec![0u8; self.n as usize];
            loop {
                out.push(self.eval_holes(&holes));
                let mut i = 0;
                loop {
                    if i == holes.len() {
                        return out;
                    }
                    holes[i] += 1;
                    if (holes[i] as u32) < self.holes() {
                        break;
                    }
                    holes[i] = 0;
                    i += 1;
                }
            }
        })
    }

    /// Witness values scaled by `(n-1)^(n-1)`, which clears every level
    /// coefficient's denominator; integer form used by the subset sweeps.
    fn scaled_table(&self) -> Vec<BigInt> {
        let scale = Rational::from_integer(big_pow(self.holes(), self.n - 1));
        self.table()
            .iter()
            .map(|v| {
                let s = v * &scale;
                debug_assert!(s.denom().is_one());
                s.numer().clone()
            })
            .collect()
    }

    /// Mean of the witness over the support, in closed form:
    /// `(n-2)! / (n-1)^(n-2)`.
    pub fn mean_closed(&self) -> Rational {
        Rational::new(big_factorial(self.n - 2), big_pow(self.holes(), self.n - 2))
    }

    /// Mean by direct summation; `n <= 8`.
    pub fn mean_brute(&self) -> Rational {
        assert!(self.n <= 8, "brute-force mean is for n <= 8");
        let sum: Rational = self.table().iter().sum();
        sum / Rational::from_integer(big_pow(self.holes(), self.n))
    }

    /// Squared norm `E(D^2)` in closed form:
    /// `(n-2)!/(n-1)^(n-2) * n! * sum_{c=0}^{n-1} (-1)^(n-1-c) /
    /// ((n-c) (n-1)^(n-1-c) c!)`.
    pub fn norm_squared_closed(&self) -> Rational {
        let mut series = Rational::zero();
        for t in self.norm_series_terms() {
            series += t;
        }
        self.mean_closed() * Rational::from_integer(big_factorial(self.n)) * series
    }

    /// The alternating series terms of the squared-norm formula, indexed by
    /// `c = 0..n-1`; magnitudes grow with `c`.
    pub fn norm_series_terms(&self) -> Vec<Rational> {
        (0..self.n)
            .map(|c| {
                let mut den = BigInt::from(self.n - c)
                    * big_pow(self.holes(), self.n - 1 - c)
                    * big_factorial(c);
                if (self.n - 1 - c) % 2 == 1 {
                    den = -den;
                }
                Rational::new(BigInt::one(), den)
            })
            .collect()
    }

    /// Squared norm by direct summation; `n <= 7`.
    pub fn norm_squared_brute(&self) -> Rational {
        assert!(self.n <= 7, "brute-force norm is for n <= 7");
        let mut sum = Rational::zero();
        for v in self.table() {
            sum += v * v;
        }
        sum / Rational::from_integer(big_pow(self.holes(), self.n))
    }

    /// Upper bound `n!/(n-1)^(n-1)` on the squared norm.
    pub fn norm_squared_rough_bound(&self) -> Rational {
        Rational::new(big_factorial(self.n), big_pow(self.holes(), self.n - 1))
    }

    /// Correlation `E(D * W)` of the witness with the weakening encoded by a
    /// hole-set tuple, by summation over the tuple's box. Tuples with a
    /// majority-size set are first complemented (flipping the sign per the
    /// flip law), which at most halves the box.
    pub fn weakening_expectation(&self, h: &HoleSets) -> Rational {
        assert_eq!(h.n, self.n);
        let full = h.hole_mask_all();
        let mut sign = 1i64;
        let mut masks: Vec<(u32, u32)> = Vec::new(); // (pigeon, mask)
        for (&pigeon, &mask) in &h.sets {
            let mut m = mask & full;
            if m.count_ones() > self.holes() / 2 {
                m = !m & full;
                sign = -sign;
            }
            masks.push((pigeon, m));
        }
        let mut holes = vec![0u8; self.n as usize];
        holes[h.pigeon_pair.0 as usize] = h.hole as u8;
        holes[h.pigeon_pair.1 as usize] = h.hole as u8;
        let total = self.box_sum(&mut holes, &masks, 0);
        Rational::from_integer(sign.into()) * total
            / Rational::from_integer(big_pow(self.holes(), self.n))
    }

    fn box_sum(&self, holes: &mut Vec<u8>, masks: &[(u32, u32)], depth: usize) -> Rational {
        if depth == masks.len() {
            return self.eval_holes(holes);
        }
        let (pigeon, mask) = masks[depth];
        let mut total = Rational::zero();
        for hole in 0..self.holes() {
            if mask >> hole & 1 == 1 {
                holes[pigeon as usize] = hole as u8;
                total += self.box_sum(holes, masks, depth + 1);
            }
        }
        total
    }

    /// Correlation with the sign-splitting variant of a weakening: on
    /// assignments where the axiom pair shares the axiom hole, the value is
    /// `(-1)^(number of other pigeons outside their sets)`.
    pub fn signed_weakening_expectation(&self, h: &HoleSets) -> Rational {
        assert_eq!(h.n, self.n);
        let others: Vec<u32> =
            (0..self.n).filter(|&p| p != h.pigeon_pair.0 && p != h.pigeon_pair.1).collect();
        let mut holes = vec![0u8; self.n as usize];
        holes[h.pigeon_pair.0 as usize] = h.hole as u8;
        holes[h.pigeon_pair.1 as usize] = h.hole as u8;
        let mut total = Rational::zero();
        let mut stack = vec![0u8; others.len()];
        loop {
            let mut sign = 1i64;
            for (i, &p) in others.iter().enumerate() {
                holes[p as usize] = stack[i];
                let mask = h.sets[&p];
                if mask >> stack[i] & 1 == 0 {
                    sign = -sign;
                }
            }
            total += Rational::from_integer(sign.into()) * self.eval_holes(&holes);
            let mut i = 0;
            loop {
                if i == stack.len() {
                    return total / Rational::from_integer(big_pow(self.holes(), self.n));
                }
                stack[i] += 1;
                if (stack[i] as u32) < self.holes() {
                    break;
                }
                stack[i] = 0;
                i += 1;
            }
        }
    }

    /// Exact maximum of `|E(D * W)|` over all collision-axiom weakenings,
    /// with one maximizing hole-set tuple. By pigeon and hole symmetry of the
    /// witness the search fixes the axiom to the first pigeon pair and hole;
    /// all subset tuples are then swept at once. Feasible for `3 <= n <= 6`.
    pub fn max_weakening_expectation(&self) -> (Rational, HoleSets) {
        let n = self.n;
        assert!((3..=6).contains(&n), "tuple sweep is sized for 3 <= n <= 6");
        let holes = self.holes() as usize;
        let others = (n - 2) as usize;
        let scaled = self.scaled_table();

        // box values with pigeons 0 and 1 pinned to hole 0
        let mut base = vec![BigInt::zero(); holes.pow(others as u32)];
        for (idx, slot) in base.iter_mut().enumerate() {
            let mut full = 0usize;
            let mut rest = idx;
            let mut radix = 1usize;
            // pigeons 0,1 at hole 0 contribute nothing to the index
            radix *= holes * holes;
            for _ in 0..others {
                full += (rest % holes) * radix;
                rest /= holes;
                radix *= holes;
            }
            *slot = scaled[full].clone();
        }
        let sums = per_pigeon_subset_sums(holes, others, base);
        let (mut best_idx, mut best) = (0usize, BigInt::zero());
        for (idx, s) in sums.iter().enumerate() {
            let mag = s.abs();
            if mag > best {
                best = mag;
                best_idx = idx;
            }
        }
        let masks = decode_masks(holes, others, best_idx);
        let sets = masks.into_iter().enumerate().map(|(i, m)| (i as u32 + 2, m)).collect();
        let witness = HoleSets::new(n, (0, 1), 0, sets);
        let value = Rational::new(best, big_pow(self.holes(), 2 * n - 1));
        debug_assert_eq!(value, self.weakening_expectation(&witness).abs());
        (value, witness)
    }

    /// The tuple pattern observed to maximize `|E(D * W)|` for `3 <= n <= 6`
    /// (up to symmetry): odd `n` gives every remaining pigeon the window
    /// {2..(n+1)/2} of holes (1-based); even `n` splits the remaining
    /// pigeons into two blocks with windows {2..n/2} and {n/2+1..n-1}.
    pub fn conjectured_extremal(&self) -> HoleSets {
        let n = self.n;
        assert!(n >= 3);
        let window = |lo_1b: u32, hi_1b: u32| -> u32 {
            // inclusive 1-based hole range -> 0-based mask
            let mut m = 0u32;
            for h in lo_1b..=hi_1b {
                m |= 1 << (h - 1);
            }
            m
        };
        let mut sets = std::collections::BTreeMap::new();
        if n % 2 == 1 {
            for i in 2..n {
                sets.insert(i, window(2, (n + 1) / 2));
            }
        } else {
            for i in 2..n / 2 + 1 {
                sets.insert(i, window(2, n / 2));
            }
            for i in n / 2 + 1..n {
                sets.insert(i, window(n / 2 + 1, n - 1));
            }
        }
        HoleSets::new(n, (0, 1), 0, sets)
    }

    /// The witness's dual objective `E(D) / max_W |E(D W)|`.
    pub fn dual_value(&self) -> Rational {
        self.mean_closed() / self.max_weakening_expectation().0
    }

    /// The proven lower bound on refutation size,
    /// `2^(n-2) (n-1) / sqrt(n) * sqrt((n-1)!/(n-1)^(n-1))`, kept symbolic
    /// as `coefficient * sqrt(radicand)`.
    pub fn lower_bound(&self) -> RootExpression {
        let coefficient = Rational::from_integer(
            BigInt::from(2).pow(self.n - 2) * BigInt::from(self.holes()),
        );
        let radicand = Rational::new(
            big_factorial(self.n - 1),
            BigInt::from(self.n) * big_pow(self.holes(), self.n - 1),
        );
        RootExpression { coefficient, radicand }
    }

    /// Mean of `D` against an arbitrary monomial, by direct summation over
    /// the support; the brute-force side of every correlation identity.
    pub fn monomial_expectation(&self, m: &Monomial) -> Rational {
        assert!(self.n <= 8, "direct summation is for n <= 8");
        let (pos, neg) = match m.masks() {
            Some(masks) => masks,
            None => return Rational::zero(),
        };
        let table = self.table();
        let mut total = Rational::zero();
        let mut holes = vec![0u8; self.n as usize];
        let mut idx = 0usize;
        loop {
            let bits = assignment_from_holes(self.n, &holes).bits();
            if bits & pos == pos && bits & neg == 0 {
                total += &table[idx];
            }
            idx += 1;
            let mut i = 0;
            loop {
                if i == holes.len() {
                    return total / Rational::from_integer(big_pow(self.holes(), self.n));
                }
                holes[i] += 1;
                if (holes[i] as u32) < self.holes() {
                    break;
                }
                holes[i] = 0;
                i += 1;
            }
        }
    }

    /// Mean of `D` against an arbitrary polynomial over the support.
    pub fn polynomial_expectation(&self, p: &Polynomial) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in p.terms() {
            total += c * self.monomial_expectation(m);
        }
        total
    }

    /// Mean of the distinct-holes indicator of "everyone but `pigeon`"
    /// against a polynomial; the comparison side of the cancellation law.
    pub fn leave_one_out_expectation(&self, pigeon: u32, p: &Polynomial) -> Rational {
        let subset = ((1u32 << self.n) - 1) & !(1 << pigeon);
        let mut total = Rational::zero();
        let mut holes = vec![0u8; self.n as usize];
        loop {
            if self.distinct_holes(subset, &holes) {
                let x = assignment_from_holes(self.n, &holes);
                total += p.eval(&x).expect("polynomial over system variables");
            }
            let mut i = 0;
            loop {
                if i == holes.len() {
                    return total / Rational::from_integer(big_pow(self.holes(), self.n));
                }
                holes[i] += 1;
                if (holes[i] as u32) < self.holes() {
                    break;
                }
                holes[i] = 0;
                i += 1;
            }
        }
    }

    /// Closed form of the witness's value on the all-pigeons-miss-the-first-
    /// hole monomial: `-(n-2)!/(n-1)^(n-1) * (1 - 1/(n-1)^(n-2))`. Strictly
    /// negative, which is what disqualifies the witness as a resolution-like
    /// dual after rescaling.
    pub fn resolution_failure_closed(&self) -> Rational {
        let lead = Rational::new(big_factorial(self.n - 2), big_pow(self.holes(), self.n - 1));
        let inner = Rational::one()
            - Rational::new(BigInt::one(), big_pow(self.holes(), self.n - 2));
        -lead * inner
    }

    /// The monomial `prod_i (1 - x_{i,1})`: every pigeon avoids the first
    /// hole.
    pub fn all_avoid_first_hole_monomial(&self) -> Monomial {
        let negs: Vec<crate::algebra::VarId> = (0..self.n)
            .map(|i| crate::systems::php_var(self.n, i, 0))
            .collect();
        Monomial::from_literals(&[], &negs)
    }

    /// The three intermediate values behind the failure value, as exact
    /// expectations: dropping pigeon 1's literal gives 0; pinning pigeon 1
    /// to the hole instead gives `(n-2)!/(n-1)^(n-1)`; pinning both axiom
    /// pigeons gives `(n-2)!/(n-1)^(2n-3)`.
    pub fn resolution_failure_observations(&self) -> [Rational; 3] {
        [
            Rational::zero(),
            Rational::new(big_factorial(self.n - 2), big_pow(self.holes(), self.n - 1)),
            Rational::new(big_factorial(self.n - 2), big_pow(self.holes(), 2 * self.n - 3)),
        ]
    }

    /// The observation monomials matching [`resolution_failure_observations`].
    pub fn resolution_failure_observation_monomials(&self) -> [Monomial; 3] {
        let var = |i: u32| crate::systems::php_var(self.n, i, 0);
        let tail: Vec<crate::algebra::VarId> = (2..self.n).map(var).collect();
        let m1 = Monomial::from_literals(
            &[],
            &(1..self.n).map(var).collect::<Vec<_>>(),
        );
        let m2 = Monomial::from_literals(&[var(0)], &tail);
        let m3 = Monomial::from_literals(&[var(0), var(1)], &tail);
        [m1, m2, m3]
    }

    /// The witness as a raw dual functional (values on the support).
    pub fn functional(&self) -> DualFunctional {
        let mut pairs = Vec::new();
        let mut holes = vec![0u8; self.n as usize];
        for v in self.table() {
            pairs.push((assignment_from_holes(self.n, &holes), v.clone()));
            let mut i = 0;
            while i < holes.len() {
                holes[i] += 1;
                if (holes[i] as u32) < self.holes() {
                    break;
                }
                holes[i] = 0;
                i += 1;
            }
        }
        DualFunctional::from_pairs(pairs)
    }

    /// The witness normalized to dual feasibility: divided by
    /// `(n-1)^n * max_W |E(D W)|`, so `|D(W)| <= 1` for every weakening and
    /// `D(1)` equals [`PhpDual::dual_value`].
    pub fn normalized_functional(&self) -> DualFunctional {
        let (max_corr, _) = self.max_weakening_expectation();
        let scale =
            (Rational::from_integer(big_pow(self.holes(), self.n)) * max_corr).recip();
        self.functional().scaled(&scale)
    }
}

/// A value `coefficient * sqrt(radicand)` kept symbolic; comparisons go
/// through [`RootExpression::squared`] and decimals through exact integer
/// square roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootExpression {
    pub coefficient: Rational,
    pub radicand: Rational,
}

impl RootExpression {
    pub fn squared(&self) -> Rational {
        &self.coefficient * &self.coefficient * &self.radicand
    }

    /// Decimal of the (nonnegative) value rounded to `places`.
    pub fn decimal(&self, places: usize) -> String {
        assert!(!self.coefficient.is_negative() && !self.radicand.is_negative());
        sqrt_decimal_string(&self.squared(), places)
    }

    /// Exact comparison against a nonnegative rational: `self <= r`.
    pub fn le_rational(&self, r: &Rational) -> bool {
        if r.is_negative() {
            return false;
        }
        self.squared() <= r * r
    }
}

/// Flips the listed pigeons' hole sets to their complements; the correlation
/// law says this multiplies `E(D W)` by `(-1)^(pigeons flipped)`.
pub fn flip_hole_sets(h: &HoleSets, pigeons: &[u32]) -> HoleSets {
    let full = h.hole_mask_all();
    let mut sets = h.sets.clone();
    for p in pigeons {
        let m = sets.get_mut(p).expect("flip targets a non-axiom pigeon");
        *m = !*m & full;
    }
    HoleSets::new(h.n, h.pigeon_pair, h.hole, sets)
}

/// Report pairing a closed form with its brute-force check.
#[derive(Clone, Debug)]
pub struct ExpectationReport {
    pub closed_form: Rational,
    pub brute_force: Rational,
    pub agree: bool,
}

impl ExpectationReport {
    pub fn new(closed_form: Rational, brute_force: Rational) -> Self {
        let agree = closed_form == brute_force;
        ExpectationReport { closed_form, brute_force, agree }
    }
}

/// Everything the per-`n` report carries; `None` fields are the ones whose
/// exhaustive search is out of range (`n > 6`).
#[derive(Clone, Debug)]
pub struct DualReport {
    pub n: u32,
    pub mean: ExpectationReport,
    pub norm_squared: ExpectationReport,
    pub max_weakening_expectation: Option<Rational>,
    pub dual_value: Option<Rational>,
    pub dual_value_decimal: Option<String>,
    pub lower_bound_decimal: String,
    pub conjecture_match: Option<bool>,
    pub resolution_failure: ExpectationReport,
}

/// Builds the full report for one `n` (brute-force sides need `n <= 7`).
pub fn dual_report(n: u32) -> DualReport {
    let d = PhpDual::new(n);
    let mean = ExpectationReport::new(d.mean_closed(), d.mean_brute());
    let norm_squared =
        ExpectationReport::new(d.norm_squared_closed(), d.norm_squared_brute());
    let resolution_failure = ExpectationReport::new(
        d.resolution_failure_closed(),
        d.monomial_expectation(&d.all_avoid_first_hole_monomial()),
    );
    let (max_corr, dual_value, conjecture_match) = if (3..=6).contains(&n) {
        let (max_corr, _) = d.max_weakening_expectation();
        let conj = d.weakening_expectation(&d.conjectured_extremal()).abs() == max_corr;
        (Some(max_corr.clone()), Some(d.mean_closed() / max_corr), Some(conj))
    } else {
        (None, None, None)
    };
    DualReport {
        n,
        mean,
        norm_squared,
        max_weakening_expectation: max_corr,
        dual_value_decimal: dual_value.as_ref().map(|v| decimal_string(v, 3)),
        dual_value,
        lower_bound_decimal: d.lower_bound().decimal(3),
        conjecture_match,
        resolution_failure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::build_php;
    use crate::{int, ratio};
    use std::collections::BTreeMap;

    #[test]
    fn level_coefficients_small_n() {
        let d = PhpDual::new(3);
        assert_eq!(d.level_coefficient(0), ratio(1, 2)); // 2!/2^2
        assert_eq!(d.level_coefficient(1), ratio(-1, 2));
        assert_eq!(d.level_coefficient(2), int(1));
        let d4 = PhpDual::new(4);
        assert_eq!(d4.level_coefficient(0), ratio(-2, 9));
        assert_eq!(d4.level_coefficient(3), int(1));
    }

    #[test]
    fn witness_values_n3() {
        let d = PhpDual::new(3);
        // one collision: value 1; all three pigeons in one hole: value -1
        assert_eq!(d.eval_holes(&[0, 0, 1]), int(1));
        assert_eq!(d.eval_holes(&[0, 0, 0]), int(-1));
        assert_eq!(d.eval_holes(&[1, 1, 1]), int(-1));
    }

    #[test]
    fn grouped_and_subset_evaluations_agree() {
        for n in [3u32, 4, 5] {
            let d = PhpDual::new(n);
            let mut holes = vec![0u8; n as usize];
            // walk all hole vectors
            loop {
                assert_eq!(
                    d.eval_holes(&holes),
                    d.eval_holes_by_subsets(&holes),
                    "n={n} holes={holes:?}"
                );
                let mut i = 0;
                loop {
                    if i == holes.len() {
                        return;
                    }
                    holes[i] += 1;
                    if (holes[i] as u32) < n - 1 {
                        break;
                    }
                    holes[i] = 0;
                    i += 1;
                }
            }
        }
    }

    #[test]
    fn means_match_closed_forms() {
        for n in [2u32, 3, 4, 5, 6] {
            let d = PhpDual::new(n);
            assert_eq!(d.mean_closed(), d.mean_brute(), "n={n}");
        }
        assert_eq!(PhpDual::new(2).mean_closed(), int(1));
        assert_eq!(PhpDual::new(3).mean_closed(), ratio(1, 2));
        assert_eq!(PhpDual::new(4).mean_closed(), ratio(2, 9));
        assert_eq!(PhpDual::new(6).mean_closed(), ratio(24, 625));
    }

    #[test]
    fn norms_match_closed_forms() {
        for n in [3u32, 4, 5] {
            let d = PhpDual::new(n);
            assert_eq!(d.norm_squared_closed(), d.norm_squared_brute(), "n={n}");
            assert!(d.norm_squared_closed() <= d.norm_squared_rough_bound(), "n={n}");
        }
        assert_eq!(PhpDual::new(3).norm_squared_closed(), int(1));
    }

    #[test]
    fn norm_series_brackets_its_total() {
        // summing from the largest-magnitude term down (c = n-1 first),
        // the partial sums alternate around the total: the first is above,
        // the second below, and so on — magnitudes shrink as c decreases
        for n in [3u32, 4, 5, 6, 7] {
            let d = PhpDual::new(n);
            let terms = d.norm_series_terms();
            let total: Rational = terms.iter().sum();
            let mut partial = Rational::zero();
            for (k, t) in terms.iter().rev().enumerate() {
                partial += t;
                if k % 2 == 0 {
                    assert!(partial >= total, "n={n} partial #{k} should overshoot");
                } else {
                    assert!(partial <= total, "n={n} partial #{k} should undershoot");
                }
            }
            assert_eq!(partial, total);
        }
    }

    #[test]
    fn dual_value_n3_is_four() {
        let d = PhpDual::new(3);
        let (max_corr, witness) = d.max_weakening_expectation();
        assert_eq!(max_corr, ratio(1, 8));
        assert_eq!(d.weakening_expectation(&witness).abs(), ratio(1, 8));
        assert_eq!(d.dual_value(), int(4));
    }

    #[test]
    fn conjectured_extremal_attains_maximum_n3_n4() {
        for n in [3u32, 4] {
            let d = PhpDual::new(n);
            let (max_corr, _) = d.max_weakening_expectation();
            let conj = d.conjectured_extremal();
            assert_eq!(d.weakening_expectation(&conj).abs(), max_corr, "n={n}");
        }
    }

    #[test]
    fn zero_law_full_window() {
        // any tuple granting some pigeon every hole has zero correlation
        let d = PhpDual::new(4);
        let mut sets = BTreeMap::new();
        sets.insert(2u32, 0b111u32);
        sets.insert(3u32, 0b011u32);
        let h = HoleSets::new(4, (0, 1), 0, sets);
        assert_eq!(d.weakening_expectation(&h), int(0));
    }

    #[test]
    fn flip_law_and_sign_splitting() {
        let d = PhpDual::new(4);
        let mut sets = BTreeMap::new();
        sets.insert(2u32, 0b010u32);
        sets.insert(3u32, 0b101u32);
        let h = HoleSets::new(4, (0, 1), 0, sets);
        let base = d.weakening_expectation(&h);

        let flipped = flip_hole_sets(&h, &[2]);
        assert_eq!(d.weakening_expectation(&flipped), -base.clone());
        let double_flipped = flip_hole_sets(&h, &[2, 3]);
        assert_eq!(d.weakening_expectation(&double_flipped), base);

        // sign-splitting sums all flips: 2^(n-2) times the base correlation
        let signed = d.signed_weakening_expectation(&h);
        assert_eq!(signed, int(4) * d.weakening_expectation(&h));
    }

    #[test]
    fn lower_bound_decimals() {
        assert_eq!(PhpDual::new(3).lower_bound().decimal(3), "1.633");
        assert_eq!(PhpDual::new(4).lower_bound().decimal(3), "2.828");
        assert_eq!(PhpDual::new(5).lower_bound().decimal(3), "4.382");
        assert_eq!(PhpDual::new(6).lower_bound().decimal(3), "6.400");
    }

    #[test]
    fn resolution_failure_closed_equals_brute() {
        // n=3: the only contributing point is all-pigeons-in-hole-2
        let d3 = PhpDual::new(3);
        assert_eq!(d3.resolution_failure_closed(), ratio(-1, 8));
        assert_eq!(
            d3.monomial_expectation(&d3.all_avoid_first_hole_monomial()),
            ratio(-1, 8)
        );
        // n=4 separates this closed form from the sign-alternating variant:
        // the true value is -16/243
        let d4 = PhpDual::new(4);
        assert_eq!(d4.resolution_failure_closed(), ratio(-16, 243));
        assert_eq!(
            d4.monomial_expectation(&d4.all_avoid_first_hole_monomial()),
            ratio(-16, 243)
        );
    }

    #[test]
    fn resolution_failure_observations_match() {
        for n in [3u32, 4, 5] {
            let d = PhpDual::new(n);
            let monos = d.resolution_failure_observation_monomials();
            let expected = d.resolution_failure_observations();
            for (m, e) in monos.iter().zip(&expected) {
                assert_eq!(&d.monomial_expectation(m), e, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn normalized_functional_is_feasible_and_attains_dual_value() {
        let n = 3;
        let d = PhpDual::new(n);
        let f = d.normalized_functional();
        assert_eq!(f.value_of_one(), int(4));
        // spot-check feasibility on every collision weakening of PHP(3)
        let sys = build_php(n).unwrap();
        for axiom_index in 3..sys.axioms().len() {
            for w in crate::systems::enumerate_weakenings(&sys, axiom_index).unwrap() {
                let v = f.apply_monomial(&w.product);
                assert!(v.abs() <= int(1), "weakening {} gives {v}", w.product);
            }
        }
    }

    #[test]
    fn cancellation_law_leave_one_out() {
        // against polynomials ignoring one pigeon, the witness acts like the
        // distinct-holes indicator of the others
        let n = 4;
        let d = PhpDual::new(n);
        let var = |i: u32, j: u32| crate::systems::php_var(n, i, j);
        // a polynomial over pigeons 1,2,3 only (ignores pigeon 0)
        let p = Polynomial::from_terms([
            (Monomial::from_literals(&[var(1, 0)], &[var(2, 1)]), int(3)),
            (Monomial::from_literals(&[var(3, 2)], &[]), ratio(-7, 2)),
            (Monomial::one(), int(1)),
        ]);
        assert_eq!(d.polynomial_expectation(&p), d.leave_one_out_expectation(0, &p));
    }

    #[test]
    fn report_fields_populate() {
        let r = dual_report(3);
        assert!(r.mean.agree && r.norm_squared.agree && r.resolution_failure.agree);
        assert_eq!(r.dual_value, Some(int(4)));
        assert_eq!(r.conjecture_match, Some(true));
        assert_eq!(r.lower_bound_decimal, "1.633");
    }
}
