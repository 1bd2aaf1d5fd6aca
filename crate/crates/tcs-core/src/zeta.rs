//! Subset-sum style sweeps used by the separation oracles and the extremal
//! weakening search. Everything works on big-integer numerators after the
//! caller scales a rational vector to a common denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::Rational;

/// Scales rationals to integers over their least common denominator.
pub(crate) fn scale_to_integers(values: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let mut denom = BigInt::one();
    for v in values {
        denom = denom.lcm(v.denom());
    }
    let scaled = values
        .iter()
        .map(|v| v.numer() * (&denom / v.denom()))
        .collect();
    (scaled, denom)
}

/// All `3^f` subcube sums of a vector indexed by `{0,1}^f`.
///
/// A pattern assigns each of the `f` positions one of: 0 = unconstrained,
/// 1 = forced to bit 1, 2 = forced to bit 0; patterns are indexed in base 3
/// with position 0 least significant. The value at a pattern is the sum of
/// `base[z]` over all `z` matching its constraints.
pub(crate) fn ternary_subcube_sums(f: usize, base: &[BigInt]) -> Vec<BigInt> {
    debug_assert_eq!(base.len(), 1 << f);
    let pow3: Vec<usize> = {
        let mut p = vec![1usize];
        for _ in 0..f {
            p.push(p.last().unwrap() * 3);
        }
        p
    };
    let mut table = vec![BigInt::zero(); pow3[f]];
    for (z, v) in base.iter().enumerate() {
        let mut idx = 0usize;
        for i in 0..f {
            let digit = if z >> i & 1 == 1 { 1 } else { 2 };
            idx += digit * pow3[i];
        }
        table[idx] = v.clone();
    }
    for i in 0..f {
        let step = pow3[i];
        for p in 0..pow3[f] {
            if (p / step) % 3 == 0 {
                table[p] = &table[p + step] + &table[p + 2 * step];
            }
        }
    }
    table
}

/// Decodes a ternary pattern into (forced-one, forced-zero) position lists.
pub(crate) fn decode_ternary(f: usize, mut pattern: usize) -> (Vec<usize>, Vec<usize>) {
    let mut ones = Vec::new();
    let mut zeros = Vec::new();
    for i in 0..f {
        match pattern % 3 {
            1 => ones.push(i),
            2 => zeros.push(i),
            _ => {}
        }
        pattern /= 3;
    }
    (ones, zeros)
}

/// Per-pigeon hole-subset sums. Input is indexed by hole vectors over
/// `pigeons` digits of radix `holes` (pigeon 0 least significant); output is
/// indexed by tuples of hole subsets, radix `2^holes` per pigeon, and holds
/// for each tuple the sum of the input over all hole vectors lying inside it
/// coordinate-wise.
pub(crate) fn per_pigeon_subset_sums(holes: usize, pigeons: usize, u: Vec<BigInt>) -> Vec<BigInt> {
    debug_assert_eq!(u.len(), holes.pow(pigeons as u32));
    let masks = 1usize << holes;
    let mut current = u;
    for t in 0..pigeons {
        // layout before: [masks^t][holes][holes^(pigeons-1-t)]
        let low = masks.pow(t as u32);
        let rest = holes.pow((pigeons - 1 - t) as u32);
        let mut next = vec![BigInt::zero(); low * masks * rest];
        for r in 0..rest {
            for m in 1..masks {
                let j = m.trailing_zeros() as usize;
                let prev = m & (m - 1);
                for l in 0..low {
                    let src = l + low * (j + holes * r);
                    let acc = l + low * (prev + masks * r);
                    let dst = l + low * (m + masks * r);
                    next[dst] = &next[acc] + &current[src];
                }
            }
        }
        current = next;
    }
    current
}

/// Decodes a subset-tuple index into per-pigeon hole masks.
pub(crate) fn decode_masks(holes: usize, pigeons: usize, mut index: usize) -> Vec<u32> {
    let masks = 1usize << holes;
    (0..pigeons)
        .map(|_| {
            let m = (index % masks) as u32;
            index /= masks;
            m
        })
        .collect()
}
