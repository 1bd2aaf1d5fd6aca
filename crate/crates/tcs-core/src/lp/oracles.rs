//! Separation oracles for the generated duals.
//!
//! Each oracle receives the candidate functional scaled to big-integer
//! numerators over a common denominator `L`, so a weakening row is violated
//! exactly when an integer subcube sum exceeds `L` in magnitude (or falls
//! below `-L` for monomial nonnegativity rows).

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::congen::{Cut, DualCutModel, SeparationOracle};
use crate::algebra::{Monomial, Rational, VarId};
use crate::systems::{hole_vector, php_collision_params, FamilyTag, HoleSets, Weakening};
use crate::zeta::{
    decode_masks, decode_ternary, per_pigeon_subset_sums, scale_to_integers,
    ternary_subcube_sums,
};

/// Keeps the strongest few violations, largest magnitude first.
struct TopViolations {
    keep: usize,
    entries: Vec<(BigInt, usize)>, // (|sum|, flat index)
}

impl TopViolations {
    fn new(keep: usize) -> Self {
        TopViolations { keep, entries: Vec::new() }
    }

    fn offer(&mut self, magnitude: BigInt, index: usize) {
        self.entries.push((magnitude, index));
        if self.entries.len() > 16 * self.keep {
            self.prune(8 * self.keep);
        }
    }

    fn prune(&mut self, to: usize) {
        self.entries.sort_by(|a, b| b.0.cmp(&a.0));
        self.entries.truncate(to);
    }

    /// Selects up to `keep` indices in descending violation order, skipping
    /// candidates too close to an already-selected one under `distance`.
    /// Batches of near-duplicate cuts make the generation loop crawl, so a
    /// little spread per round buys a lot of rounds.
    fn into_spread_indices(mut self, distance: impl Fn(usize, usize) -> u32) -> Vec<usize> {
        self.prune(8 * self.keep);
        let mut chosen: Vec<usize> = Vec::new();
        for (_, idx) in &self.entries {
            if chosen.len() >= self.keep {
                break;
            }
            if chosen.iter().all(|&c| distance(c, *idx) >= 2) {
                chosen.push(*idx);
            }
        }
        // backfill with the strongest skipped candidates if spread was scarce
        for (_, idx) in &self.entries {
            if chosen.len() >= self.keep {
                break;
            }
            if !chosen.contains(idx) {
                chosen.push(*idx);
            }
        }
        chosen
    }
}

/// Digit distance of two base-3 pattern indices.
fn ternary_distance(f: usize, mut a: usize, mut b: usize) -> u32 {
    let mut d = 0;
    for _ in 0..f {
        if a % 3 != b % 3 {
            d += 1;
        }
        a /= 3;
        b /= 3;
    }
    d
}

/// Digit distance of two mask-tuple indices (radix `2^holes`).
fn mask_tuple_distance(holes: usize, pigeons: usize, mut a: usize, mut b: usize) -> u32 {
    let masks = 1usize << holes;
    let mut d = 0;
    for _ in 0..pigeons {
        if a % masks != b % masks {
            d += 1;
        }
        a /= masks;
        b /= masks;
    }
    d
}

/// Separates weakening rows over the whole cube: for each representative
/// axiom, every multiplier over its free variables is a subcube, and all
/// `3^f` subcube sums come out of one sweep. Needs the support to live on a
/// cube small enough to densify.
pub struct SubcubeOracle {
    /// Violated rows to return per axiom per round.
    pub cuts_per_axiom: usize,
}

impl Default for SubcubeOracle {
    fn default() -> Self {
        SubcubeOracle { cuts_per_axiom: 4 }
    }
}

impl SeparationOracle for SubcubeOracle {
    fn violated(&mut self, model: &DualCutModel, values: &[Rational]) -> Vec<Cut> {
        let n_vars = model.sys.var_count();
        assert!(n_vars <= 26, "dense cube oracle limited to small systems");
        let (scaled, denom) = scale_to_integers(values);
        let mut cube = vec![BigInt::zero(); 1usize << n_vars];
        for (x, v) in model.orbits.support.iter().zip(scaled) {
            cube[x.bits() as usize] = v;
        }

        let mut cuts = Vec::new();
        for &axiom_index in &model.rep_axioms {
            let axiom = &model.sys.axioms()[axiom_index].monomial;
            let (pos, neg) = axiom.masks().expect("axioms are nonzero");
            let fixed = pos | neg;
            let free: Vec<u32> = (0..n_vars).filter(|b| fixed >> b & 1 == 0).collect();
            let f = free.len();

            // base layer: the axiom's literals pinned, free vars enumerated
            let mut base = vec![BigInt::zero(); 1 << f];
            for (z, slot) in base.iter_mut().enumerate() {
                let mut bits = pos;
                for (i, b) in free.iter().enumerate() {
                    if z >> i & 1 == 1 {
                        bits |= 1 << b;
                    }
                }
                *slot = cube[bits as usize].clone();
            }
            let sums = ternary_subcube_sums(f, &base);

            let mut top = TopViolations::new(self.cuts_per_axiom);
            for (p, s) in sums.iter().enumerate() {
                let mag = s.abs();
                if mag > denom {
                    top.offer(mag, p);
                }
            }
            for p in top.into_spread_indices(|a, b| ternary_distance(f, a, b)) {
                let sign: i8 = if sums[p].is_positive() { 1 } else { -1 };
                let (ones, zeros) = decode_ternary(f, p);
                let multiplier = Monomial::from_literals(
                    &ones.iter().map(|&i| VarId(free[i])).collect::<Vec<_>>(),
                    &zeros.iter().map(|&i| VarId(free[i])).collect::<Vec<_>>(),
                );
                let w = Weakening::new(&model.sys, axiom_index, &multiplier)
                    .expect("axiom index from model");
                cuts.push(Cut::Weakening(w, sign));
            }
        }
        cuts
    }
}

/// Separates weakening rows of the one-hole-per-pigeon dual. On that support
/// a collision-axiom weakening acts as a product of per-pigeon hole subsets,
/// so the exact row sums over all subset tuples come out of one per-pigeon
/// subset-sum sweep; pigeon-axiom weakenings vanish identically and need no
/// separation.
pub struct PhpRestrictedOracle {
    pub cuts: usize,
}

impl Default for PhpRestrictedOracle {
    fn default() -> Self {
        PhpRestrictedOracle { cuts: 6 }
    }
}

impl SeparationOracle for PhpRestrictedOracle {
    fn violated(&mut self, model: &DualCutModel, values: &[Rational]) -> Vec<Cut> {
        let FamilyTag::Php(n) = model.sys.family() else {
            panic!("restricted oracle wants a pigeonhole system");
        };
        let holes = (n - 1) as usize;
        let others = (n - 2) as usize;
        let (scaled, denom) = scale_to_integers(values);
        let hole_vectors: Vec<Vec<u8>> = model
            .orbits
            .support
            .iter()
            .map(|x| hole_vector(n, x).expect("restricted support"))
            .collect();

        let mut cuts = Vec::new();
        for &axiom_index in &model.rep_axioms {
            let label = &model.sys.axioms()[axiom_index].label;
            // pigeon-axiom weakenings vanish on this support
            let Some((i1, i2, j)) = php_collision_params(label) else {
                continue;
            };
            let other_pigeons: Vec<u32> =
                (0..n).filter(|&p| p != i1 && p != i2).collect();

            // functional values on the box f(i1)=f(i2)=j, indexed by the
            // hole vector of the remaining pigeons (first least significant)
            let mut base = vec![BigInt::zero(); holes.pow(others as u32)];
            for (hv, v) in hole_vectors.iter().zip(&scaled) {
                if hv[i1 as usize] != j as u8 || hv[i2 as usize] != j as u8 {
                    continue;
                }
                let mut idx = 0usize;
                for (i, &p) in other_pigeons.iter().enumerate() {
                    idx += (hv[p as usize] as usize) * holes.pow(i as u32);
                }
                base[idx] = v.clone();
            }
            let sums = per_pigeon_subset_sums(holes, others, base);

            let mut top = TopViolations::new(self.cuts);
            for (idx, s) in sums.iter().enumerate() {
                let mag = s.abs();
                if mag > denom {
                    top.offer(mag, idx);
                }
            }
            for idx in top.into_spread_indices(|a, b| mask_tuple_distance(holes, others, a, b)) {
                let sign: i8 = if sums[idx].is_positive() { 1 } else { -1 };
                let masks = decode_masks(holes, others, idx);
                let sets = masks
                    .into_iter()
                    .enumerate()
                    .map(|(i, m)| (other_pigeons[i], m))
                    .collect();
                let hs = HoleSets::new(n, (i1, i2), j, sets);
                let w = hs.to_weakening(&model.sys).expect("collision axiom exists");
                debug_assert_eq!(w.axiom_index, axiom_index);
                cuts.push(Cut::Weakening(w, sign));
            }
        }
        cuts
    }
}

/// Separates the monomial-nonnegativity rows `D(r) >= -1` of the
/// resolution-like dual: every monomial is a subcube of the whole cube, so
/// one unconstrained sweep yields every `D(r)`.
pub struct MonomialNonnegOracle {
    pub cuts: usize,
}

impl Default for MonomialNonnegOracle {
    fn default() -> Self {
        MonomialNonnegOracle { cuts: 4 }
    }
}

impl SeparationOracle for MonomialNonnegOracle {
    fn violated(&mut self, model: &DualCutModel, values: &[Rational]) -> Vec<Cut> {
        let n_vars = model.sys.var_count();
        assert!(n_vars <= 26, "dense cube oracle limited to small systems");
        let (scaled, denom) = scale_to_integers(values);
        let mut cube = vec![BigInt::zero(); 1usize << n_vars];
        for (x, v) in model.orbits.support.iter().zip(scaled) {
            cube[x.bits() as usize] = v;
        }
        let sums = ternary_subcube_sums(n_vars as usize, &cube);
        let minus_denom = -denom;

        let mut top = TopViolations::new(self.cuts);
        for (p, s) in sums.iter().enumerate() {
            if *s < minus_denom {
                top.offer(s.abs(), p);
            }
        }
        top.into_spread_indices(|a, b| ternary_distance(n_vars as usize, a, b))
            .into_iter()
            .map(|p| {
                let (ones, zeros) = decode_ternary(n_vars as usize, p);
                Cut::Monomial(Monomial::from_literals(
                    &ones.into_iter().map(|i| VarId(i as u32)).collect::<Vec<_>>(),
                    &zeros.into_iter().map(|i| VarId(i as u32)).collect::<Vec<_>>(),
                ))
            })
            .collect()
    }
}
