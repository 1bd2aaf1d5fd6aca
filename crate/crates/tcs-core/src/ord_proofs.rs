//! Explicit refutations of the ordering family and a pointwise certificate
//! verifier.
//!
//! A certificate asserts `sum_W c_W * W (+ sum_j c_j * g_j + sum_j s_j^2) =
//! target` as a function on the whole cube, where each `W` is a weakening of
//! an axiom. Validity is checked pointwise: Boolean identities (`x^2 = x`,
//! `x * (1-x) = 0`) hold for free at the function level, so pointwise
//! equality is exactly the proof condition. The scan uses bitmask monomial
//! evaluation with an integer fast path, which keeps exhaustive verification
//! over 2^21 points in the seconds range.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Assignment, Monomial, Polynomial, Rational};
use crate::systems::{
    build_ord, build_php, ord_edges_monomial, ord_monomial_edges,
    ord_transitivity_axiom_index, AxiomSystem, FamilyTag, Weakening,
};

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("certificate references unknown axiom label {0:?}")]
    UnknownAxiom(String),
    #[error("certificate entry {label:?} * {multiplier} is not a weakening of its axiom")]
    NotAWeakening { label: String, multiplier: String },
    #[error("unsupported target {0:?} (expected \"+1\" or \"-1\")")]
    BadTarget(String),
    #[error("operation requires a {expected:?} system, got {got:?}")]
    WrongFamily { expected: &'static str, got: FamilyTag },
    #[error("cannot parse {what}: {text:?}")]
    Parse { what: &'static str, text: String },
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
    #[error(transparent)]
    System(#[from] crate::systems::SystemError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Outcome of a pointwise verification scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyOutcome {
    Valid,
    /// First assignment (in increasing bit order) where the identity fails.
    CounterExample(Assignment),
}

impl VerifyOutcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, VerifyOutcome::Valid)
    }
}

/// A refutation certificate over an axiom system.
///
/// `entries` are weakening coefficients; `squares` and `monomial_terms` are
/// only populated by the stronger proof shapes (`-1 = sum q_i p_i + sum c_j
/// g_j + sum s_j^2` with nonnegative `c_j`); plain refutations use target `+1`
/// and entries only.
#[derive(Clone, Debug, PartialEq)]
pub struct ProofCertificate {
    system: AxiomSystem,
    target: Rational,
    entries: BTreeMap<Weakening, Rational>,
    squares: Vec<Polynomial>,
    monomial_terms: Vec<(Monomial, Rational)>,
}

impl ProofCertificate {
    pub fn new(system: AxiomSystem, target: Rational) -> Self {
        ProofCertificate {
            system,
            target,
            entries: BTreeMap::new(),
            squares: Vec::new(),
            monomial_terms: Vec::new(),
        }
    }

    pub fn system(&self) -> &AxiomSystem {
        &self.system
    }

    pub fn target(&self) -> &Rational {
        &self.target
    }

    /// Accumulates a coefficient on a weakening, dropping canceled entries.
    pub fn add_entry(&mut self, w: Weakening, coeff: Rational) {
        if coeff.is_zero() || w.product.is_zero() {
            return;
        }
        match self.entries.entry(w) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn remove_entry(&mut self, w: &Weakening) -> Option<Rational> {
        self.entries.remove(w)
    }

    pub fn add_square(&mut self, g: Polynomial) {
        self.squares.push(g);
    }

    pub fn add_monomial_term(&mut self, g: Monomial, coeff: Rational) {
        if !coeff.is_zero() && !g.is_zero() {
            self.monomial_terms.push((g, coeff));
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Weakening, &Rational)> {
        self.entries.iter()
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    pub fn squares(&self) -> &[Polynomial] {
        &self.squares
    }

    pub fn monomial_terms(&self) -> &[(Monomial, Rational)] {
        &self.monomial_terms
    }

    /// `sum |c_W| + sum c_j + sum T(g_j)^2`: weakening coefficients by
    /// magnitude, monomial terms by (nonnegative) coefficient, squares by
    /// squared total coefficient size.
    pub fn total_coefficient_size(&self) -> Rational {
        let mut total: Rational = self.entries.values().map(|c| c.abs()).sum();
        for (_, c) in &self.monomial_terms {
            total += c.abs();
        }
        for g in &self.squares {
            let t = g.total_coefficient_size();
            total += &t * &t;
        }
        total
    }

    /// Whether every weakening coefficient is exactly 1.
    pub fn has_unit_coefficients(&self) -> bool {
        self.entries.values().all(|c| c.is_one())
    }
}

// ---------------------------------------------------------------------------
// Pointwise verification
// ---------------------------------------------------------------------------

struct MaskTerm<C> {
    pos: u64,
    neg: u64,
    coeff: C,
}

fn mask_terms_rational(
    terms: impl Iterator<Item = (Monomial, Rational)>,
) -> Vec<MaskTerm<Rational>> {
    terms
        .filter_map(|(m, c)| m.masks().map(|(pos, neg)| MaskTerm { pos, neg, coeff: c }))
        .collect()
}

fn fires(t_pos: u64, t_neg: u64, x: u64) -> bool {
    x & t_pos == t_pos && x & t_neg == 0
}

fn as_i64(r: &Rational) -> Option<i64> {
    if r.denom().is_one() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Checks `sum entries + sum monomial terms + sum squares^2 == target` on
/// every point of the cube, stopping at the first failure.
pub fn verify_certificate(cert: &ProofCertificate) -> Result<VerifyOutcome, CertificateError> {
    let n_vars = cert.system.var_count();

    // integer fast path when every coefficient and the target are small ints
    let int_target = as_i64(&cert.target);
    let int_entries: Option<Vec<MaskTerm<i64>>> = cert
        .entries
        .iter()
        .map(|(w, c)| {
            let (pos, neg) = w.product.masks()?;
            as_i64(c).map(|coeff| MaskTerm { pos, neg, coeff })
        })
        .collect();
    let int_monoms: Option<Vec<MaskTerm<i64>>> = cert
        .monomial_terms
        .iter()
        .map(|(m, c)| {
            let (pos, neg) = m.masks()?;
            as_i64(c).map(|coeff| MaskTerm { pos, neg, coeff })
        })
        .collect();
    let int_squares: Option<Vec<Vec<MaskTerm<i64>>>> = cert
        .squares
        .iter()
        .map(|g| {
            g.terms()
                .map(|(m, c)| {
                    let (pos, neg) = m.masks()?;
                    as_i64(c).map(|coeff| MaskTerm { pos, neg, coeff })
                })
                .collect()
        })
        .collect();

    if let (Some(target), Some(entries), Some(monoms), Some(squares)) =
        (int_target, int_entries, int_monoms, int_squares)
    {
        for bits in 0u64..1 << n_vars {
            let mut acc: i128 = 0;
            for t in &entries {
                if fires(t.pos, t.neg, bits) {
                    acc += t.coeff as i128;
                }
            }
            for t in &monoms {
                if fires(t.pos, t.neg, bits) {
                    acc += t.coeff as i128;
                }
            }
            for g in &squares {
                let mut v: i128 = 0;
                for t in g {
                    if fires(t.pos, t.neg, bits) {
                        v += t.coeff as i128;
                    }
                }
                acc += v * v;
            }
            if acc != target as i128 {
                return Ok(VerifyOutcome::CounterExample(
                    Assignment::new(n_vars, bits).expect("in range"),
                ));
            }
        }
        return Ok(VerifyOutcome::Valid);
    }

    // exact rational path
    let entries = mask_terms_rational(
        cert.entries.iter().map(|(w, c)| (w.product.clone(), c.clone())),
    );
    let monoms = mask_terms_rational(cert.monomial_terms.iter().cloned());
    let squares: Vec<Vec<MaskTerm<Rational>>> = cert
        .squares
        .iter()
        .map(|g| mask_terms_rational(g.terms().map(|(m, c)| (m.clone(), c.clone()))))
        .collect();
    for bits in 0u64..1 << n_vars {
        let mut acc = Rational::zero();
        for t in entries.iter().chain(&monoms) {
            if fires(t.pos, t.neg, bits) {
                acc += &t.coeff;
            }
        }
        for g in &squares {
            let mut v = Rational::zero();
            for t in g {
                if fires(t.pos, t.neg, bits) {
                    v += &t.coeff;
                }
            }
            acc += &v * &v;
        }
        if acc != cert.target {
            return Ok(VerifyOutcome::CounterExample(
                Assignment::new(n_vars, bits).expect("in range"),
            ));
        }
    }
    Ok(VerifyOutcome::Valid)
}

/// For certificates with unit coefficients and no squares: checks that on
/// every assignment exactly one entry fires.
pub fn check_exactly_one_cover(cert: &ProofCertificate) -> Result<VerifyOutcome, CertificateError> {
    let n_vars = cert.system.var_count();
    let terms: Vec<(u64, u64)> = cert
        .entries
        .keys()
        .filter_map(|w| w.product.masks())
        .collect();
    for bits in 0u64..1 << n_vars {
        let firing = terms.iter().filter(|(p, n)| fires(*p, *n, bits)).count();
        if firing != 1 {
            return Ok(VerifyOutcome::CounterExample(
                Assignment::new(n_vars, bits).expect("in range"),
            ));
        }
    }
    Ok(VerifyOutcome::Valid)
}

// ---------------------------------------------------------------------------
// The 2^n - n refutation of the ordering family
// ---------------------------------------------------------------------------

/// A cyclic-axiom weakening tracked as a directed edge set during the
/// inductive construction; `triple` is the sorted axiom triple and `reverse`
/// picks its orientation.
#[derive(Clone, Debug)]
struct CyclicWeakening {
    triple: (u32, u32, u32),
    reverse: bool,
    edges: Vec<(u32, u32)>,
}

fn base_cyclic_set() -> Vec<CyclicWeakening> {
    vec![
        CyclicWeakening {
            triple: (0, 1, 2),
            reverse: false,
            edges: vec![(0, 1), (1, 2), (2, 0)],
        },
        CyclicWeakening {
            triple: (0, 1, 2),
            reverse: true,
            edges: vec![(2, 1), (1, 0), (0, 2)],
        },
    ]
}

/// One induction step: grows the cyclic-weakening set from `m` elements to
/// `m + 1` (elements are 0-based, the new element is `m`).
fn grow_cyclic_set(set: &[CyclicWeakening], m: u32) -> Vec<CyclicWeakening> {
    let mut next = Vec::with_capacity(2 * set.len() + 2 * (m as usize - 1));
    // copy on the old elements, pinned via 0 -> m
    for w in set {
        let mut edges = w.edges.clone();
        edges.push((0, m));
        next.push(CyclicWeakening { triple: w.triple, reverse: w.reverse, edges });
    }
    // shifted copy on elements {1..m}, pinned via m -> 0
    for w in set {
        let mut edges: Vec<(u32, u32)> =
            w.edges.iter().map(|&(a, b)| (a + 1, b + 1)).collect();
        edges.push((m, 0));
        next.push(CyclicWeakening {
            triple: (w.triple.0 + 1, w.triple.1 + 1, w.triple.2 + 1),
            reverse: w.reverse,
            edges,
        });
    }
    // bridge weakenings on the triple (0, i, m): the cycle through the old
    // least element and the new one, times "i precedes all of 1..m-1"
    for i in 1..m {
        let multiplier: Vec<(u32, u32)> =
            (1..m).filter(|&j| j != i).map(|j| (i, j)).collect();
        let mut fwd = vec![(0, i), (i, m), (m, 0)];
        fwd.extend_from_slice(&multiplier);
        next.push(CyclicWeakening { triple: (0, i, m), reverse: false, edges: fwd });
        let mut rev = vec![(m, i), (i, 0), (0, m)];
        rev.extend_from_slice(&multiplier);
        next.push(CyclicWeakening { triple: (0, i, m), reverse: true, edges: rev });
    }
    next
}

/// The explicit refutation of `ORD(n)` with `2^n - n` unit entries: every
/// precedence axiom bare, plus an inductively built family of cyclic-axiom
/// weakenings that covers each no-minimum tournament exactly once.
pub fn build_ord_proof(n: u32) -> Result<ProofCertificate, CertificateError> {
    let sys = build_ord(n)?;
    let mut set = base_cyclic_set();
    for m in 3..n {
        set = grow_cyclic_set(&set, m);
    }
    let mut cert = ProofCertificate::new(sys.clone(), Rational::one());
    for i in 0..n as usize {
        let bare = Weakening::new(&sys, i, &Monomial::one())?;
        cert.add_entry(bare, Rational::one());
    }
    for w in &set {
        let axiom_index =
            ord_transitivity_axiom_index(n, w.triple.0, w.triple.1, w.triple.2, w.reverse);
        let product = ord_edges_monomial(n, &w.edges);
        debug_assert!(!product.is_zero(), "construction never builds conflicting edges");
        let weakening = Weakening::from_product(&sys, axiom_index, &product)?;
        cert.add_entry(weakening, Rational::one());
    }
    Ok(cert)
}

// ---------------------------------------------------------------------------
// Nice transitivity weakenings
// ---------------------------------------------------------------------------

/// The orientation graph of a cyclic-axiom weakening: one directed edge per
/// literal of the product, "from precedes to".
#[derive(Clone, Debug)]
pub struct TransitivityGraph {
    pub n: u32,
    pub edges: Vec<(u32, u32)>,
}

impl TransitivityGraph {
    pub fn from_monomial(n: u32, product: &Monomial) -> Self {
        TransitivityGraph { n, edges: ord_monomial_edges(n, product) }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of vertices reachable from `root` along directed edges.
    pub fn reachable_from(&self, root: u32) -> u32 {
        let mut seen = vec![false; self.n as usize];
        let mut stack = vec![root];
        seen[root as usize] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                if a == v && !seen[b as usize] {
                    seen[b as usize] = true;
                    count += 1;
                    stack.push(b);
                }
            }
        }
        count
    }
}

/// Sorted triple and orientation of a cyclic axiom, read from its label.
/// `None` for precedence axioms.
pub fn ord_axiom_triple(sys: &AxiomSystem, index: usize) -> Option<(u32, u32, u32, bool)> {
    let label = &sys.axioms().get(index)?.label;
    let rest = label.strip_prefix("T[")?;
    let reverse = rest.ends_with('-');
    let body = rest.strip_suffix("]+").or_else(|| rest.strip_suffix("]-"))?;
    let mut it = body.split(',');
    let i = it.next()?.parse::<u32>().ok()? - 1;
    let j = it.next()?.parse::<u32>().ok()? - 1;
    let k = it.next()?.parse::<u32>().ok()? - 1;
    Some((i, j, k, reverse))
}

/// A cyclic-axiom weakening is *nice* when its orientation graph has exactly
/// `n` edges and every vertex is reachable from the axiom triple's least
/// element. Nice weakenings vanish on every assignment with a minimum.
/// `None` when the weakening is not a cyclic-axiom weakening.
pub fn is_nice_transitivity(sys: &AxiomSystem, w: &Weakening) -> Option<bool> {
    let FamilyTag::Ord(n) = sys.family() else {
        return None;
    };
    let (i, _, _, _) = ord_axiom_triple(sys, w.axiom_index)?;
    let g = TransitivityGraph::from_monomial(n, &w.product);
    Some(g.edge_count() == n as usize && g.reachable_from(i) == n)
}

/// True when every cyclic-axiom entry of the certificate is nice.
pub fn check_nice_transitivity(cert: &ProofCertificate) -> bool {
    cert.entries.keys().all(|w| {
        match is_nice_transitivity(&cert.system, w) {
            Some(nice) => nice,
            // precedence-axiom entries are not transitivity weakenings
            None => ord_axiom_triple(&cert.system, w.axiom_index).is_none(),
        }
    })
}

// ---------------------------------------------------------------------------
// Restriction to no-minimum assignments
// ---------------------------------------------------------------------------

/// Upgrades a certificate that is only valid on no-minimum assignments into
/// one valid everywhere: for each element `i`, the partial sum is replayed
/// multiplied by the precedence axiom of `i` (the indicator of "i is
/// minimal") with opposite sign, and the bare axiom is added. The output
/// size is at most `(n + 1) * size_in + n`.
///
/// Products that collapse to zero contribute nothing; distinct weakenings
/// that merge under the multiplication accumulate into one coefficient.
/// Returns `Err(witness)` in the inner result when the input is not valid on
/// some no-minimum assignment.
pub fn restrict_to_no_min(
    partial: &ProofCertificate,
) -> Result<Result<ProofCertificate, Assignment>, CertificateError> {
    let sys = partial.system.clone();
    let FamilyTag::Ord(n) = sys.family() else {
        return Err(CertificateError::WrongFamily { expected: "ord", got: sys.family() });
    };
    if !partial.squares.is_empty() || !partial.monomial_terms.is_empty() {
        return Err(CertificateError::BadTarget(
            "restriction transform wants a plain weakening certificate".into(),
        ));
    }

    // precondition: the partial certificate sums to target on every
    // no-minimum assignment
    let terms = mask_terms_rational(
        partial.entries.iter().map(|(w, c)| (w.product.clone(), c.clone())),
    );
    for x in crate::systems::assignments_no_minimum(n) {
        let mut acc = Rational::zero();
        for t in &terms {
            if fires(t.pos, t.neg, x.bits()) {
                acc += &t.coeff;
            }
        }
        if acc != partial.target {
            return Ok(Err(x));
        }
    }

    let mut out = partial.clone();
    for i in 0..n as usize {
        let axiom = sys.axioms()[i].monomial.clone();
        // replay of the partial sum under "i is minimal"
        let mut replay: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (w, c) in &partial.entries {
            let product = axiom.mul(&w.product);
            if product.is_zero() {
                continue;
            }
            let slot = replay.entry(product).or_insert_with(Rational::zero);
            *slot += c;
        }
        for (product, c) in replay {
            if c.is_zero() {
                continue;
            }
            let w = Weakening::from_product(&sys, i, &product)?;
            out.add_entry(w, -c);
        }
        let bare = Weakening::new(&sys, i, &Monomial::one())?;
        out.add_entry(bare, Rational::one());
    }
    Ok(Ok(out))
}

// ---------------------------------------------------------------------------
// Sum-of-squares refutation of the ordering family
// ---------------------------------------------------------------------------

/// The monomial asserting that element `j` precedes every other element of
/// the prefix `{1..m}` (1-based parameters, `1 <= j <= m <= n`). For
/// `j = m = 1` this is the empty product.
pub fn first_of_prefix_monomial(n: u32, j: u32, m: u32) -> Monomial {
    debug_assert!(1 <= j && j <= m && m <= n);
    let edges: Vec<(u32, u32)> =
        (1..=m).filter(|&i| i != j).map(|i| (j - 1, i - 1)).collect();
    ord_edges_monomial(n, &edges)
}

/// The cyclic-axiom weakening that transfers prefix leadership: `j` leads
/// `{1..m}`, element `m+1` precedes `j`, and `k` is the first element of
/// `{1..m}` that precedes `m+1` (1-based parameters, distinct `j, k <= m`).
pub fn prefix_step_weakening_monomial(n: u32, j: u32, m: u32, k: u32) -> Monomial {
    debug_assert!(m < n && j <= m && k <= m && j != k);
    let mono = first_of_prefix_monomial(n, j, m);
    let mut edges: Vec<(u32, u32)> = vec![(m, j - 1), (k - 1, m)];
    edges.extend((1..k).filter(|&i| i != j).map(|i| (m, i - 1)));
    mono.mul(&ord_edges_monomial(n, &edges))
}

/// The one-line sum-of-squares refutation: target `-1`, all prefix-step
/// weakenings and all bare precedence axioms with coefficient `-1`, and one
/// square polynomial per prefix length.
pub fn build_sos_ord_proof(n: u32) -> Result<ProofCertificate, CertificateError> {
    let sys = build_ord(n)?;
    let mut cert = ProofCertificate::new(sys.clone(), -Rational::one());

    for m in 1..n {
        for j in 1..=m {
            for k in 1..=m {
                if k == j {
                    continue;
                }
                let product = prefix_step_weakening_monomial(n, j, m, k);
                debug_assert!(!product.is_zero());
                // multiple of the cyclic axiom on {j, k, m+1} oriented
                // m+1 -> j -> k -> m+1
                let (a, b) = (j.min(k), j.max(k));
                let axiom_index =
                    ord_transitivity_axiom_index(n, a - 1, b - 1, m, k < j);
                let w = Weakening::from_product(&sys, axiom_index, &product)?;
                cert.add_entry(w, -Rational::one());
            }
        }
    }
    for j in 1..=n {
        // the precedence axiom of j is exactly the j-leads-everything monomial
        debug_assert_eq!(
            sys.axioms()[(j - 1) as usize].monomial,
            first_of_prefix_monomial(n, j, n)
        );
        let bare = Weakening::new(&sys, (j - 1) as usize, &Monomial::one())?;
        cert.add_entry(bare, -Rational::one());
    }
    for m in 1..n {
        let mut g = Polynomial::zero();
        let lead_next = first_of_prefix_monomial(n, m + 1, m + 1);
        g.add_term(lead_next.clone(), Rational::one());
        for j in 1..=m {
            let overlap = first_of_prefix_monomial(n, j, m).mul(&lead_next);
            g.add_term(overlap, -Rational::one());
        }
        cert.add_square(g);
    }
    Ok(cert)
}

/// Total coefficient size in the sum-of-squares sense; same accounting as
/// [`ProofCertificate::total_coefficient_size`], exposed under the name the
/// reports use.
pub fn sos_total_coefficient_size(cert: &ProofCertificate) -> Rational {
    cert.total_coefficient_size()
}

// ---------------------------------------------------------------------------
// JSON round-trip
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct SystemDoc {
    family: String,
    n: u32,
}

#[derive(Serialize, Deserialize)]
struct EntryDoc {
    axiom_label: String,
    multiplier: String,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    monomial: String,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct CertificateDoc {
    system: SystemDoc,
    target: String,
    entries: Vec<EntryDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    squares: Vec<Vec<TermDoc>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    monomials: Vec<TermDoc>,
}

pub(crate) fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn rational_from_string(s: &str) -> Result<Rational, CertificateError> {
    let parse_int = |t: &str| {
        BigInt::from_str(t.trim()).map_err(|_| CertificateError::Parse {
            what: "rational",
            text: s.to_string(),
        })
    };
    match s.split_once('/') {
        Some((num, den)) => Ok(Rational::new(parse_int(num)?, parse_int(den)?)),
        None => Ok(Rational::from(parse_int(s)?)),
    }
}

impl ProofCertificate {
    pub fn to_json(&self) -> Result<String, CertificateError> {
        let (family, n) = match self.system.family() {
            FamilyTag::Php(n) => ("php", n),
            FamilyTag::Ord(n) => ("ord", n),
            FamilyTag::Custom => {
                return Err(CertificateError::Parse {
                    what: "family",
                    text: "custom systems have no canonical JSON form".into(),
                })
            }
        };
        let target = if self.target.is_one() { "+1" } else { "-1" };
        let doc = CertificateDoc {
            system: SystemDoc { family: family.to_string(), n },
            target: target.to_string(),
            entries: self
                .entries
                .iter()
                .map(|(w, c)| EntryDoc {
                    axiom_label: self.system.axioms()[w.axiom_index].label.clone(),
                    multiplier: w.multiplier.to_string(),
                    coeff: rational_to_string(c),
                })
                .collect(),
            squares: self
                .squares
                .iter()
                .map(|g| {
                    g.terms()
                        .map(|(m, c)| TermDoc {
                            monomial: m.to_string(),
                            coeff: rational_to_string(c),
                        })
                        .collect()
                })
                .collect(),
            monomials: self
                .monomial_terms
                .iter()
                .map(|(m, c)| TermDoc { monomial: m.to_string(), coeff: rational_to_string(c) })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<ProofCertificate, CertificateError> {
        let doc: CertificateDoc = serde_json::from_str(text)?;
        let sys = match doc.system.family.as_str() {
            "php" => build_php(doc.system.n)?,
            "ord" => build_ord(doc.system.n)?,
            other => {
                return Err(CertificateError::Parse { what: "family", text: other.to_string() })
            }
        };
        let target = match doc.target.as_str() {
            "+1" | "1" => Rational::one(),
            "-1" => -Rational::one(),
            other => return Err(CertificateError::BadTarget(other.to_string())),
        };
        let mut cert = ProofCertificate::new(sys.clone(), target);
        for e in doc.entries {
            let index = sys
                .axioms()
                .iter()
                .position(|a| a.label == e.axiom_label)
                .ok_or_else(|| CertificateError::UnknownAxiom(e.axiom_label.clone()))?;
            let multiplier =
                e.multiplier.parse::<Monomial>().map_err(CertificateError::Algebra)?;
            let w = Weakening::new(&sys, index, &multiplier)?;
            if w.product.is_zero() {
                return Err(CertificateError::NotAWeakening {
                    label: e.axiom_label,
                    multiplier: e.multiplier,
                });
            }
            cert.add_entry(w, rational_from_string(&e.coeff)?);
        }
        for g in doc.squares {
            let mut poly = Polynomial::zero();
            for t in g {
                poly.add_term(
                    t.monomial.parse::<Monomial>().map_err(CertificateError::Algebra)?,
                    rational_from_string(&t.coeff)?,
                );
            }
            cert.add_square(poly);
        }
        for t in doc.monomials {
            cert.add_monomial_term(
                t.monomial.parse::<Monomial>().map_err(CertificateError::Algebra)?,
                rational_from_string(&t.coeff)?,
            );
        }
        Ok(cert)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;
    use crate::systems::assignments_no_minimum;

    #[test]
    fn ord3_proof_is_all_five_axioms() {
        let cert = build_ord_proof(3).unwrap();
        assert_eq!(cert.entry_count(), 5);
        assert!(cert.entries().all(|(w, c)| w.multiplier.is_one() && c.is_one()));
        assert!(verify_certificate(&cert).unwrap().is_valid());
        assert!(check_exactly_one_cover(&cert).unwrap().is_valid());
        assert_eq!(cert.total_coefficient_size(), int(5)); // 2^3 - 3
    }

    #[test]
    fn ord4_proof_counts_and_validity() {
        let cert = build_ord_proof(4).unwrap();
        assert_eq!(cert.entry_count(), 12); // 2^4 - 4
        let transitivity = cert
            .entries()
            .filter(|(w, _)| ord_axiom_triple(cert.system(), w.axiom_index).is_some())
            .count();
        assert_eq!(transitivity, 8); // 2^4 - 2*4
        assert_eq!(cert.total_coefficient_size(), int(12));
        assert!(verify_certificate(&cert).unwrap().is_valid());
        assert!(check_exactly_one_cover(&cert).unwrap().is_valid());
        assert!(check_nice_transitivity(&cert));
    }

    #[test]
    fn ord5_proof_verifies() {
        let cert = build_ord_proof(5).unwrap();
        assert_eq!(cert.entry_count(), 27);
        assert!(verify_certificate(&cert).unwrap().is_valid());
        assert!(check_nice_transitivity(&cert));
    }

    #[test]
    fn deleting_an_entry_breaks_the_cover() {
        let mut cert = build_ord_proof(4).unwrap();
        let some_transitivity = cert
            .entries()
            .find(|(w, _)| ord_axiom_triple(cert.system(), w.axiom_index).is_some())
            .map(|(w, _)| w.clone())
            .unwrap();
        cert.remove_entry(&some_transitivity);
        let outcome = verify_certificate(&cert).unwrap();
        let VerifyOutcome::CounterExample(x) = outcome else {
            panic!("deletion must break some point");
        };
        // the witness really fails
        let firing = cert
            .entries()
            .filter(|(w, _)| w.product.eval(&x).unwrap())
            .count();
        assert_ne!(firing, 1);
    }

    #[test]
    fn empty_certificate_fails_immediately() {
        let sys = build_ord(3).unwrap();
        let cert = ProofCertificate::new(sys, Rational::one());
        let outcome = verify_certificate(&cert).unwrap();
        assert_eq!(
            outcome,
            VerifyOutcome::CounterExample(Assignment::new(3, 0).unwrap())
        );
    }

    #[test]
    fn bare_transitivity_axiom_is_not_nice_in_ord4() {
        let sys = build_ord(4).unwrap();
        let idx = ord_transitivity_axiom_index(4, 0, 1, 2, false);
        let bare = Weakening::new(&sys, idx, &Monomial::one()).unwrap();
        assert_eq!(is_nice_transitivity(&sys, &bare), Some(false)); // 3 edges != 4
    }

    #[test]
    fn nice_weakenings_vanish_on_assignments_with_minimum() {
        for n in [4u32, 5] {
            let cert = build_ord_proof(n).unwrap();
            let no_min: std::collections::BTreeSet<u64> =
                assignments_no_minimum(n).map(|x| x.bits()).collect();
            let minimum_points: Vec<Assignment> = Assignment::all(n * (n - 1) / 2)
                .filter(|x| !no_min.contains(&x.bits()))
                .collect();
            for (w, _) in cert.entries() {
                if ord_axiom_triple(cert.system(), w.axiom_index).is_none() {
                    continue;
                }
                for x in &minimum_points {
                    assert!(!w.product.eval(x).unwrap());
                }
            }
        }
    }

    #[test]
    fn restriction_transform_on_already_valid_certificate() {
        let cert = build_ord_proof(4).unwrap();
        let out = restrict_to_no_min(&cert).unwrap().expect("precondition holds");
        assert!(verify_certificate(&out).unwrap().is_valid());
        let bound = int(5) * cert.total_coefficient_size() + int(4);
        assert!(out.total_coefficient_size() <= bound);
    }

    #[test]
    fn restriction_transform_rejects_bad_partial() {
        let sys = build_ord(4).unwrap();
        let partial = ProofCertificate::new(sys, Rational::one());
        let out = restrict_to_no_min(&partial).unwrap();
        assert!(out.is_err(), "empty certificate cannot cover no-minimum points");
    }

    #[test]
    fn sos_proof_small_n() {
        for n in [3u32, 4, 5] {
            let cert = build_sos_ord_proof(n).unwrap();
            assert!(
                verify_certificate(&cert).unwrap().is_valid(),
                "sos identity must hold pointwise at n={n}"
            );
            // squares take values in {0,1} pointwise
            for g in cert.squares() {
                for x in Assignment::all(cert.system().var_count()) {
                    let v = g.eval(&x).unwrap();
                    assert!(v.is_zero() || v.is_one());
                }
            }
        }
    }

    #[test]
    fn sos_tcs_accounting() {
        // n=3: two cyclic entries + three precedence entries; the first
        // square cancels structurally, the second has three terms
        let cert = build_sos_ord_proof(3).unwrap();
        assert_eq!(cert.entry_count(), 5);
        let sizes: Vec<Rational> = cert
            .squares()
            .iter()
            .map(|g| g.total_coefficient_size())
            .collect();
        assert_eq!(sizes, vec![int(0), int(3)]);
        assert_eq!(sos_total_coefficient_size(&cert), int(5 + 9));

        // squares contribute quadratically: doubling a square's coefficients
        // quadruples its contribution
        let mut doubled = cert.clone();
        let g = doubled.squares[1].clone();
        doubled.squares[1] = g.add(&g);
        assert_eq!(sos_total_coefficient_size(&doubled), int(5) + int(4 * 9));
    }

    #[test]
    fn buildingblock_identity_pointwise() {
        for n in [3u32, 4, 5] {
            for m in 1..n {
                for j in 1..=m {
                    let lhs = first_of_prefix_monomial(n, j, m);
                    let next = first_of_prefix_monomial(n, j, m + 1);
                    let lead = first_of_prefix_monomial(n, m + 1, m + 1);
                    let overlap = lhs.mul(&lead);
                    let steps: Vec<Monomial> = (1..=m)
                        .filter(|&k| k != j)
                        .map(|k| prefix_step_weakening_monomial(n, j, m, k))
                        .collect();
                    for x in Assignment::all(n * (n - 1) / 2) {
                        let left = lhs.eval(&x).unwrap() as i64;
                        let mut right = next.eval(&x).unwrap() as i64
                            + overlap.eval(&x).unwrap() as i64;
                        for s in &steps {
                            right += s.eval(&x).unwrap() as i64;
                        }
                        assert_eq!(left, right, "n={n} m={m} j={j} x={x}");
                    }
                }
            }
        }
    }

    #[test]
    fn prefix_step_divisibility() {
        // every prefix-step weakening is a multiple of its cyclic axiom
        let n = 5;
        for m in 1..n {
            for j in 1..=m {
                for k in 1..=m {
                    if j == k {
                        continue;
                    }
                    let t = prefix_step_weakening_monomial(n, j, m, k);
                    let axiom =
                        ord_edges_monomial(n, &[(m, j - 1), (j - 1, k - 1), (k - 1, m)]);
                    assert!(t.is_multiple_of(&axiom), "m={m} j={j} k={k}");
                }
            }
        }
    }

    #[test]
    fn certificate_json_roundtrip() {
        let cert = build_ord_proof(4).unwrap();
        let text = cert.to_json().unwrap();
        let back = ProofCertificate::from_json(&text).unwrap();
        assert_eq!(cert, back);

        let sos = build_sos_ord_proof(4).unwrap();
        let text = sos.to_json().unwrap();
        let back = ProofCertificate::from_json(&text).unwrap();
        assert_eq!(sos, back);
    }
}
