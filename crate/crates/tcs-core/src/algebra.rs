//! Multilinear Boolean algebra with exact rational coefficients.
//!
//! A monomial is a product of literals `x_i` and `(1 - x_j)` over disjoint
//! variable sets; multiplication is idempotent (`x^2 = x`) and a product
//! containing both `x` and `(1 - x)` collapses to the distinguished
//! [`Monomial::Zero`]. Polynomials are sparse maps from canonical monomials to
//! nonzero rationals. All values are immutable after construction and all
//! operations are pure, so they can be shared freely across evaluation loops.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use thiserror::Error;

/// Exact arbitrary-precision rational; no floating point is used anywhere in
/// the core algebra.
pub type Rational = num_rational::BigRational;

/// Index of a Boolean variable. Axiom systems attach human-readable names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Errors from malformed algebra inputs.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("variable x{var} out of range for assignment of length {len}")]
    VarOutOfRange { var: u32, len: u32 },
    #[error("operation requires a nonzero monomial")]
    ZeroMonomial,
    #[error("could not parse monomial from {0:?}")]
    MonomialParse(String),
    #[error("assignments support at most 64 variables, got {0}")]
    TooManyVariables(u32),
}

/// A point of the Boolean cube `{0,1}^N` with `N <= 64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    len: u32,
    bits: u64,
}

impl Assignment {
    pub fn new(len: u32, bits: u64) -> Result<Self, AlgebraError> {
        if len > 64 {
            return Err(AlgebraError::TooManyVariables(len));
        }
        let mask = if len == 64 { !0 } else { (1u64 << len) - 1 };
        Ok(Assignment { len, bits: bits & mask })
    }

    pub fn from_bools(bits: &[bool]) -> Result<Self, AlgebraError> {
        if bits.len() > 64 {
            return Err(AlgebraError::TooManyVariables(bits.len() as u32));
        }
        let mut word = 0u64;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                word |= 1 << i;
            }
        }
        Ok(Assignment { len: bits.len() as u32, bits: word })
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, v: VarId) -> Result<bool, AlgebraError> {
        if v.0 >= self.len {
            return Err(AlgebraError::VarOutOfRange { var: v.0, len: self.len });
        }
        Ok(self.bits >> v.0 & 1 == 1)
    }

    /// All `2^len` assignments in increasing bit order.
    pub fn all(len: u32) -> impl Iterator<Item = Assignment> {
        assert!(len < 64, "exhaustive enumeration needs len < 64");
        (0u64..1 << len).map(move |bits| Assignment { len, bits })
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.bits >> i & 1)?;
        }
        Ok(())
    }
}

/// A product of positive and negated literals over disjoint variable sets, or
/// the identically-zero product.
///
/// Canonical form: both literal lists sorted and duplicate-free; any product
/// that would contain `x` and `(1 - x)` simultaneously is represented as
/// [`Monomial::Zero`]. Structural equality therefore coincides with equality
/// as functions `{0,1}^N -> {0,1}` for monomials over the same variable set,
/// which makes monomials usable as sparse-polynomial keys.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Monomial {
    /// Contradictory product, identically 0 on the cube.
    Zero,
    /// `prod_{i in positives} x_i * prod_{j in negatives} (1 - x_j)`.
    Term {
        positives: Vec<VarId>,
        negatives: Vec<VarId>,
    },
}

impl Monomial {
    /// The empty product, the constant function 1.
    pub fn one() -> Self {
        Monomial::Term { positives: Vec::new(), negatives: Vec::new() }
    }

    pub fn var(v: VarId) -> Self {
        Monomial::Term { positives: vec![v], negatives: Vec::new() }
    }

    pub fn negated_var(v: VarId) -> Self {
        Monomial::Term { positives: Vec::new(), negatives: vec![v] }
    }

    /// Builds a monomial from literal lists, normalizing to canonical form.
    /// Returns [`Monomial::Zero`] when a variable occurs both ways.
    pub fn from_literals(positives: &[VarId], negatives: &[VarId]) -> Self {
        let mut pos: Vec<VarId> = positives.to_vec();
        let mut neg: Vec<VarId> = negatives.to_vec();
        pos.sort_unstable();
        pos.dedup();
        neg.sort_unstable();
        neg.dedup();
        if sorted_intersects(&pos, &neg) {
            return Monomial::Zero;
        }
        Monomial::Term { positives: pos, negatives: neg }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Monomial::Zero)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Monomial::Term { positives, negatives }
                 if positives.is_empty() && negatives.is_empty())
    }

    pub fn positives(&self) -> &[VarId] {
        match self {
            Monomial::Zero => &[],
            Monomial::Term { positives, .. } => positives,
        }
    }

    pub fn negatives(&self) -> &[VarId] {
        match self {
            Monomial::Zero => &[],
            Monomial::Term { negatives, .. } => negatives,
        }
    }

    /// Number of literals; 0 for both the constant 1 and the zero monomial.
    pub fn degree(&self) -> usize {
        self.positives().len() + self.negatives().len()
    }

    /// Largest variable index mentioned, if any.
    pub fn max_var(&self) -> Option<u32> {
        self.positives()
            .iter()
            .chain(self.negatives())
            .map(|v| v.0)
            .max()
    }

    /// Bitmasks `(positive, negative)` for fast evaluation; the zero monomial
    /// has no mask form.
    pub fn masks(&self) -> Option<(u64, u64)> {
        match self {
            Monomial::Zero => None,
            Monomial::Term { positives, negatives } => {
                let mut p = 0u64;
                let mut n = 0u64;
                for v in positives {
                    debug_assert!(v.0 < 64);
                    p |= 1 << v.0;
                }
                for v in negatives {
                    debug_assert!(v.0 < 64);
                    n |= 1 << v.0;
                }
                Some((p, n))
            }
        }
    }

    /// Evaluates at a point of the cube: 1 iff every positive literal is set
    /// and every negated literal is clear. The zero monomial is 0 everywhere.
    pub fn eval(&self, x: &Assignment) -> Result<bool, AlgebraError> {
        match self {
            Monomial::Zero => Ok(false),
            Monomial::Term { positives, negatives } => {
                for v in positives {
                    if !x.get(*v)? {
                        return Ok(false);
                    }
                }
                for v in negatives {
                    if x.get(*v)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Product of two monomials under `x^2 = x` and `x * (1 - x) = 0`.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        match (self, other) {
            (Monomial::Zero, _) | (_, Monomial::Zero) => Monomial::Zero,
            (
                Monomial::Term { positives: p1, negatives: n1 },
                Monomial::Term { positives: p2, negatives: n2 },
            ) => {
                let pos = merge_sorted(p1, p2);
                let neg = merge_sorted(n1, n2);
                if sorted_intersects(&pos, &neg) {
                    Monomial::Zero
                } else {
                    Monomial::Term { positives: pos, negatives: neg }
                }
            }
        }
    }

    /// Whether `other` divides this monomial, i.e. this is a weakening of it.
    pub fn is_multiple_of(&self, other: &Monomial) -> bool {
        match (self, other) {
            (Monomial::Zero, _) => true,
            (_, Monomial::Zero) => false,
            _ => {
                sorted_contains(self.positives(), other.positives())
                    && sorted_contains(self.negatives(), other.negatives())
            }
        }
    }

    /// Monomials summing to `1 - m` pointwise, by peeling one literal at a
    /// time: `1 - l_1...l_k = sum_j (1 - l_j) * l_1...l_{j-1}` where the
    /// complement of a literal is the opposite literal on the same variable.
    /// Literals are peeled in increasing variable order.
    pub fn expand_one_minus(&self) -> Result<Vec<Monomial>, AlgebraError> {
        let (pos, neg) = match self {
            Monomial::Zero => return Err(AlgebraError::ZeroMonomial),
            Monomial::Term { positives, negatives } => (positives, negatives),
        };
        let mut literals: Vec<(VarId, bool)> = pos
            .iter()
            .map(|&v| (v, true))
            .chain(neg.iter().map(|&v| (v, false)))
            .collect();
        literals.sort_unstable_by_key(|&(v, _)| v);

        let mut out = Vec::with_capacity(literals.len());
        for j in 0..literals.len() {
            let mut p = Vec::new();
            let mut n = Vec::new();
            // literals before position j keep their polarity, the j-th flips
            for (i, &(v, positive)) in literals.iter().take(j + 1).enumerate() {
                let polarity = if i == j { !positive } else { positive };
                if polarity {
                    p.push(v);
                } else {
                    n.push(v);
                }
            }
            out.push(Monomial::from_literals(&p, &n));
        }
        Ok(out)
    }
}

impl fmt::Display for Monomial {
    /// Text syntax used in JSON and on the command line: space-separated
    /// literals `x3 !x7 x12`, `1` for the empty product, `0` for the zero
    /// monomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Monomial::Zero => write!(f, "0"),
            Monomial::Term { positives, negatives } => {
                if positives.is_empty() && negatives.is_empty() {
                    return write!(f, "1");
                }
                let mut literals: Vec<(VarId, bool)> = positives
                    .iter()
                    .map(|&v| (v, true))
                    .chain(negatives.iter().map(|&v| (v, false)))
                    .collect();
                literals.sort_unstable_by_key(|&(v, _)| v);
                let mut first = true;
                for (v, positive) in literals {
                    if !first {
                        write!(f, " ")?;
                    }
                    first = false;
                    if positive {
                        write!(f, "x{}", v.0)?;
                    } else {
                        write!(f, "!x{}", v.0)?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Monomial {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Monomial::Zero);
        }
        if s.is_empty() || s == "1" {
            return Ok(Monomial::one());
        }
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for token in s.split_whitespace() {
            let (negated, rest) = match token.strip_prefix('!') {
                Some(rest) => (true, rest),
                None => (false, token),
            };
            let idx = rest
                .strip_prefix('x')
                .and_then(|d| d.parse::<u32>().ok())
                .ok_or_else(|| AlgebraError::MonomialParse(s.to_string()))?;
            if negated {
                neg.push(VarId(idx));
            } else {
                pos.push(VarId(idx));
            }
        }
        let m = Monomial::from_literals(&pos, &neg);
        // A token list that collapses to zero (e.g. "x1 !x1") is treated as a
        // parse error: the canonical spelling of the zero monomial is "0".
        if m.is_zero() {
            return Err(AlgebraError::MonomialParse(s.to_string()));
        }
        Ok(m)
    }
}

fn merge_sorted(a: &[VarId], b: &[VarId]) -> Vec<VarId> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn sorted_intersects(a: &[VarId], b: &[VarId]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Whether sorted list `a` contains every element of sorted list `b`.
fn sorted_contains(a: &[VarId], b: &[VarId]) -> bool {
    let mut i = 0;
    for needle in b {
        while i < a.len() && a[i] < *needle {
            i += 1;
        }
        if i >= a.len() || a[i] != *needle {
            return false;
        }
    }
    true
}

/// All `3^n` monomials over `n` variables (each variable absent, positive,
/// or negated), in lexicographic state order with variable 0 least
/// significant. Only sensible for small `n`.
pub fn all_monomials(n_vars: u32) -> impl Iterator<Item = Monomial> {
    let total = 3u64.pow(n_vars);
    (0..total).map(move |mut code| {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for v in 0..n_vars {
            match code % 3 {
                1 => pos.push(VarId(v)),
                2 => neg.push(VarId(v)),
                _ => {}
            }
            code /= 3;
        }
        Monomial::from_literals(&pos, &neg)
    })
}

/// Sparse polynomial: canonical monomials mapped to nonzero rationals.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c * m`, dropping the term if the coefficient cancels to zero.
    /// Zero monomials contribute nothing.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || m.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn eval(&self, x: &Assignment) -> Result<Rational, AlgebraError> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            if m.eval(x)? {
                acc += c;
            }
        }
        Ok(acc)
    }

    /// Sum of the magnitudes of the coefficients.
    pub fn total_coefficient_size(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Largest variable index mentioned by any term.
    pub fn max_var(&self) -> Option<u32> {
        self.terms.keys().filter_map(|m| m.max_var()).max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, ratio};

    fn m(pos: &[u32], neg: &[u32]) -> Monomial {
        Monomial::from_literals(
            &pos.iter().map(|&v| VarId(v)).collect::<Vec<_>>(),
            &neg.iter().map(|&v| VarId(v)).collect::<Vec<_>>(),
        )
    }

    fn point(bits: &[u8]) -> Assignment {
        Assignment::from_bools(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn monomial_eval_matches_literal_semantics() {
        // x0 * (1 - x1)
        let mono = m(&[0], &[1]);
        assert!(mono.eval(&point(&[1, 0])).unwrap());
        assert!(!mono.eval(&point(&[1, 1])).unwrap());
        assert!(!mono.eval(&point(&[0, 0])).unwrap());
        assert!(!Monomial::Zero.eval(&point(&[1, 1])).unwrap());
    }

    #[test]
    fn monomial_eval_rejects_out_of_range() {
        let mono = m(&[3], &[]);
        assert_eq!(
            mono.eval(&point(&[1, 0])),
            Err(AlgebraError::VarOutOfRange { var: 3, len: 2 })
        );
    }

    #[test]
    fn monomial_mul_is_idempotent_and_kills_contradictions() {
        let x0 = m(&[0], &[]);
        assert_eq!(x0.mul(&x0), x0);
        assert_eq!(x0.mul(&m(&[], &[0])), Monomial::Zero);
        assert_eq!(x0.mul(&m(&[], &[1])), m(&[0], &[1]));
    }

    #[test]
    fn mul_agrees_with_pointwise_product() {
        // Product law checked exhaustively over a small cube for a spread of
        // literal patterns.
        let monos = [
            Monomial::one(),
            m(&[0], &[]),
            m(&[], &[2]),
            m(&[0, 3], &[1]),
            m(&[2], &[0, 3]),
            Monomial::Zero,
        ];
        for a in &monos {
            for b in &monos {
                let ab = a.mul(b);
                for x in Assignment::all(4) {
                    let lhs = ab.eval(&x).unwrap();
                    let rhs = a.eval(&x).unwrap() && b.eval(&x).unwrap();
                    assert_eq!(lhs, rhs, "a={a} b={b} x={x}");
                }
            }
        }
    }

    #[test]
    fn poly_eval_and_tcs() {
        // 2*x0 - 3*x0*x1 at (1,1) is -1.
        let p = Polynomial::from_terms([
            (m(&[0], &[]), int(2)),
            (m(&[0, 1], &[]), int(-3)),
        ]);
        assert_eq!(p.eval(&point(&[1, 1])).unwrap(), int(-1));
        assert_eq!(p.total_coefficient_size(), int(5));

        assert_eq!(Polynomial::zero().eval(&point(&[0, 0])).unwrap(), int(0));
        let one = Polynomial::constant(int(1));
        assert_eq!(one.eval(&point(&[1, 0])).unwrap(), int(1));
        assert_eq!(
            Polynomial::from_terms([(m(&[2], &[]), int(-7))]).total_coefficient_size(),
            int(7)
        );
    }

    #[test]
    fn tcs_counts_magnitudes() {
        // Three terms with coefficients 2, -3, 5 give total size 10.
        let p = Polynomial::from_terms([
            (m(&[0, 1], &[]), int(2)),
            (m(&[0, 1, 2], &[]), int(-3)),
            (m(&[2], &[]), int(5)),
        ]);
        assert_eq!(p.total_coefficient_size(), int(10));
        assert_eq!(p.eval(&point(&[1, 1, 1])).unwrap(), int(4));
    }

    #[test]
    fn polynomial_add_sub_roundtrip() {
        let p = Polynomial::from_terms([
            (m(&[0], &[]), ratio(2, 3)),
            (m(&[1], &[0]), int(-5)),
        ]);
        let q = Polynomial::from_terms([
            (m(&[0], &[]), ratio(-2, 3)),
            (m(&[2], &[]), ratio(7, 11)),
        ]);
        assert_eq!(p.add(&q).sub(&q), p);
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn expand_one_minus_telescopes() {
        // 1 - x0*x1 = (1 - x0) + x0*(1 - x1)
        let x01 = m(&[0, 1], &[]);
        assert_eq!(
            x01.expand_one_minus().unwrap(),
            vec![m(&[], &[0]), m(&[0], &[1])]
        );
        assert_eq!(m(&[0], &[]).expand_one_minus().unwrap(), vec![m(&[], &[0])]);
        assert_eq!(Monomial::Zero.expand_one_minus(), Err(AlgebraError::ZeroMonomial));
    }

    #[test]
    fn expand_one_minus_is_pointwise_complement() {
        // For every nonzero monomial over up to 4 variables, the expansion
        // plus the monomial itself sums to the constant 1 on the whole cube.
        for x_pattern in 0u32..81 {
            // ternary encode: 0 = absent, 1 = positive, 2 = negative
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            let mut code = x_pattern;
            for v in 0..4 {
                match code % 3 {
                    1 => pos.push(VarId(v)),
                    2 => neg.push(VarId(v)),
                    _ => {}
                }
                code /= 3;
            }
            if pos.is_empty() && neg.is_empty() {
                continue;
            }
            let mono = Monomial::from_literals(&pos, &neg);
            let expansion = mono.expand_one_minus().unwrap();
            for x in Assignment::all(4) {
                let total = expansion
                    .iter()
                    .map(|t| t.eval(&x).unwrap() as u32)
                    .sum::<u32>()
                    + mono.eval(&x).unwrap() as u32;
                assert_eq!(total, 1, "mono={mono} x={x}");
            }
        }
    }

    #[test]
    fn monomial_text_roundtrip() {
        let cases = [
            (m(&[3, 12], &[7]), "x3 !x7 x12"),
            (Monomial::one(), "1"),
            (Monomial::Zero, "0"),
        ];
        for (mono, text) in cases {
            assert_eq!(mono.to_string(), text);
            assert_eq!(text.parse::<Monomial>().unwrap(), mono);
        }
        assert!("x1 !x1".parse::<Monomial>().is_err());
        assert!("y3".parse::<Monomial>().is_err());
    }

    #[test]
    fn is_multiple_of_detects_weakenings() {
        let axiom = m(&[0, 1], &[]);
        assert!(m(&[0, 1, 2], &[3]).is_multiple_of(&axiom));
        assert!(axiom.is_multiple_of(&axiom));
        assert!(!m(&[0], &[]).is_multiple_of(&axiom));
        assert!(Monomial::Zero.is_multiple_of(&axiom));
    }
}
