//! Operator symbols, exchange statistics, permutation parity and the
//! normal-ordering operator.
//!
//! A product is a list of [`OperatorSymbol`]s. Positions in that list are the
//! identity of each factor: contractions and normal-ordered residues refer to
//! positions, never to symbol equality, so repeated symbols are unambiguous.
//!
//! Inside `N[...]` the factors (anti)commute freely, so any stored order is a
//! valid representation as long as the coefficient carries the matching sign.
//! The canonical order used everywhere is:
//!
//! 1. `+`-class symbols, sorted by (mode, time, position);
//! 2. field symbols (which carry both classes), sorted by position;
//! 3. `-`-class symbols, sorted by (mode, time, position).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::models::ModelDictionary;

/// Exchange statistics. The upper sign of `[A, B]_∓` belongs to bosons, the
/// lower one to fermions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Bose,
    Fermi,
}

impl Statistics {
    /// Sign picked up by swapping two neighbouring operators.
    pub fn swap_sign(self) -> i8 {
        match self {
            Statistics::Bose => 1,
            Statistics::Fermi => -1,
        }
    }

    /// `(±1)^n`.
    pub fn sign_pow(self, n: usize) -> i8 {
        if self == Statistics::Fermi && n % 2 == 1 {
            -1
        } else {
            1
        }
    }

    /// Maps a permutation parity to the sign it carries for these statistics.
    pub fn signed(self, parity: i8) -> i8 {
        match self {
            Statistics::Bose => 1,
            Statistics::Fermi => parity,
        }
    }

    pub fn is_fermi(self) -> bool {
        self == Statistics::Fermi
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Statistics::Bose => "bose",
            Statistics::Fermi => "fermi",
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bose" | "boson" | "bosons" | "bosonic" => Ok(Statistics::Bose),
            "fermi" | "fermion" | "fermions" | "fermionic" => Ok(Statistics::Fermi),
            other => Err(Error::BadModel(format!("unknown statistics `{other}`"))),
        }
    }
}

/// What kind of ladder operator a symbol stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    /// `ψ_i`
    FieldAnnihilate,
    /// `ψ_i†`
    FieldCreate,
    /// `α_a⁻`, annihilates the reference state from the right.
    QuasiAnnihilate,
    /// `α_a⁺`, annihilates the reference state from the left.
    QuasiCreate,
}

/// The `+`/`-` label of a pure symbol, i.e. its action on the reference state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Class {
    Plus,
    Minus,
}

/// One creation or annihilation factor.
///
/// `mode` is 0-based. `time` is only present for time-ordered problems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorSymbol {
    pub base: Base,
    pub mode: usize,
    pub time: Option<f64>,
}

impl OperatorSymbol {
    pub const fn new(base: Base, mode: usize) -> Self {
        OperatorSymbol { base, mode, time: None }
    }

    pub const fn psi(mode: usize) -> Self {
        Self::new(Base::FieldAnnihilate, mode)
    }

    pub const fn psi_dag(mode: usize) -> Self {
        Self::new(Base::FieldCreate, mode)
    }

    pub const fn alpha_minus(mode: usize) -> Self {
        Self::new(Base::QuasiAnnihilate, mode)
    }

    pub const fn alpha_plus(mode: usize) -> Self {
        Self::new(Base::QuasiCreate, mode)
    }

    /// Same symbol with a time label.
    pub fn at(self, t: f64) -> Self {
        OperatorSymbol { time: Some(t), ..self }
    }

    pub fn without_time(self) -> Self {
        OperatorSymbol { time: None, ..self }
    }

    /// `Some` for pure quasi-particle symbols, `None` for fields.
    pub fn class(&self) -> Option<Class> {
        match self.base {
            Base::QuasiCreate => Some(Class::Plus),
            Base::QuasiAnnihilate => Some(Class::Minus),
            Base::FieldAnnihilate | Base::FieldCreate => None,
        }
    }

    pub fn is_pure(&self) -> bool {
        self.class().is_some()
    }

    pub fn is_field(&self) -> bool {
        !self.is_pure()
    }

    /// `ψ†` and `α⁺`. Used to break equal-time ties in time ordering.
    pub fn is_creation_type(&self) -> bool {
        matches!(self.base, Base::FieldCreate | Base::QuasiCreate)
    }

    pub fn adjoint(&self) -> Self {
        let base = match self.base {
            Base::FieldAnnihilate => Base::FieldCreate,
            Base::FieldCreate => Base::FieldAnnihilate,
            Base::QuasiAnnihilate => Base::QuasiCreate,
            Base::QuasiCreate => Base::QuasiAnnihilate,
        };
        OperatorSymbol { base, ..*self }
    }
}

impl fmt::Display for OperatorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, dagger) = match self.base {
            Base::FieldAnnihilate => ("psi", ""),
            Base::FieldCreate => ("psi", "+"),
            Base::QuasiAnnihilate => ("alpha", ""),
            Base::QuasiCreate => ("alpha", "+"),
        };
        write!(f, "{name}{dagger}({})", self.mode + 1)?;
        if let Some(t) = self.time {
            write!(f, "@{t}")?;
        }
        Ok(())
    }
}

/// A symbol together with its position in the original product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factor {
    pub position: usize,
    pub symbol: OperatorSymbol,
}

impl Factor {
    pub fn new(position: usize, symbol: OperatorSymbol) -> Self {
        Factor { position, symbol }
    }
}

/// Labels each symbol with its index in the slice.
pub fn factors_of(product: &[OperatorSymbol]) -> Vec<Factor> {
    product
        .iter()
        .enumerate()
        .map(|(position, &symbol)| Factor { position, symbol })
        .collect()
}

fn block_rank(symbol: &OperatorSymbol) -> u8 {
    match symbol.class() {
        Some(Class::Plus) => 0,
        None => 1,
        Some(Class::Minus) => 2,
    }
}

fn time_cmp(a: Option<f64>, b: Option<f64>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(x), Some(y)) => x.total_cmp(&y),
    }
}

/// Total order defining the canonical arrangement inside `N[...]`.
pub fn canonical_cmp(a: &Factor, b: &Factor) -> Ordering {
    let (ra, rb) = (block_rank(&a.symbol), block_rank(&b.symbol));
    ra.cmp(&rb).then_with(|| {
        if ra == 1 {
            a.position.cmp(&b.position)
        } else {
            a.symbol
                .mode
                .cmp(&b.symbol.mode)
                .then_with(|| time_cmp(a.symbol.time, b.symbol.time))
                .then_with(|| a.position.cmp(&b.position))
        }
    })
}

/// Parity of a permutation of `0..n`, as `(-1)^(inversions)`.
pub fn parity(permutation: &[usize]) -> Result<i8> {
    let n = permutation.len();
    let mut seen = vec![false; n];
    for &p in permutation {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation {
                len: n,
                values: permutation.to_vec(),
            });
        }
        seen[p] = true;
    }
    Ok(permutation_sign(permutation))
}

/// Parity via cycle decomposition. The input must already be a bijection.
pub(crate) fn permutation_sign(permutation: &[usize]) -> i8 {
    let n = permutation.len();
    let mut visited = vec![false; n];
    let mut transpositions = 0usize;
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut len = 0usize;
        let mut i = start;
        while !visited[i] {
            visited[i] = true;
            i = permutation[i];
            len += 1;
        }
        transpositions += len - 1;
    }
    if transpositions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sorts `items` stably and returns the parity of the permutation performed.
pub(crate) fn sort_with_parity<T: Copy>(items: &mut [T], cmp: impl Fn(&T, &T) -> Ordering) -> i8 {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&i, &j| cmp(&items[i], &items[j]));
    let sign = permutation_sign(&order);
    let sorted: Vec<T> = order.iter().map(|&i| items[i]).collect();
    items.copy_from_slice(&sorted);
    sign
}

/// One summand: `coefficient × Π⟨ij⟩ × N[normal_factors]`.
///
/// When the term comes out of an expansion, `contractions` are formal
/// (symbolic mode) or already multiplied into `coefficient` (evaluated
/// mode); the pairs are kept in both cases so the term stays traceable.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedTerm {
    pub coefficient: Complex64,
    pub contractions: Vec<(usize, usize)>,
    pub normal_factors: Vec<Factor>,
}

impl SignedTerm {
    pub fn new(coefficient: Complex64, contractions: Vec<(usize, usize)>, normal_factors: Vec<Factor>) -> Self {
        SignedTerm {
            coefficient,
            contractions,
            normal_factors,
        }
    }

    /// `N[f]` with unit coefficient.
    pub fn single(factor: Factor) -> Self {
        SignedTerm::new(Complex64::new(1.0, 0.0), Vec::new(), vec![factor])
    }

    /// Number of contractions.
    pub fn order(&self) -> usize {
        self.contractions.len()
    }

    /// A fully contracted term is a c-number.
    pub fn is_scalar(&self) -> bool {
        self.normal_factors.is_empty()
    }

    pub fn positions(&self) -> Vec<usize> {
        self.normal_factors.iter().map(|f| f.position).collect()
    }

    /// Brings factors to canonical order (absorbing the sign) and sorts the
    /// contraction pairs.
    pub fn canonicalize(&mut self, statistics: Statistics) {
        for pair in &mut self.contractions {
            if pair.0 > pair.1 {
                *pair = (pair.1, pair.0);
            }
        }
        self.contractions.sort_unstable();
        let parity = sort_with_parity(&mut self.normal_factors, canonical_cmp);
        if statistics.signed(parity) < 0 {
            self.coefficient = -self.coefficient;
        }
    }

    fn sort_key(&self) -> (usize, &[(usize, usize)]) {
        (self.contractions.len(), &self.contractions)
    }
}

/// A sum of normal-ordered terms, one product's image under Wick's theorem.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub terms: Vec<SignedTerm>,
    pub statistics: Statistics,
    pub original_length: usize,
    /// Contraction values have been multiplied into the coefficients.
    pub evaluated: bool,
    /// Contractions are time-ordered contractions.
    pub time_ordered: bool,
}

impl Expansion {
    /// Canonicalizes every term, sorts them and merges duplicate keys.
    pub fn from_terms(
        terms: Vec<SignedTerm>,
        statistics: Statistics,
        original_length: usize,
        evaluated: bool,
        time_ordered: bool,
    ) -> Self {
        let mut terms = terms;
        for t in &mut terms {
            t.canonicalize(statistics);
        }
        terms.sort_by(|a, b| {
            a.sort_key()
                .cmp(&b.sort_key())
                .then_with(|| a.normal_factors.len().cmp(&b.normal_factors.len()))
                .then_with(|| {
                    let pa = a.normal_factors.iter().map(|f| f.position);
                    let pb = b.normal_factors.iter().map(|f| f.position);
                    pa.cmp(pb)
                })
        });
        let mut merged: Vec<SignedTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last)
                    if last.contractions == t.contractions
                        && last.normal_factors.len() == t.normal_factors.len()
                        && last
                            .normal_factors
                            .iter()
                            .zip(&t.normal_factors)
                            .all(|(x, y)| x.position == y.position) =>
                {
                    last.coefficient += t.coefficient;
                }
                _ => merged.push(t),
            }
        }
        Expansion {
            terms: merged,
            statistics,
            original_length,
            evaluated,
            time_ordered,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SignedTerm> {
        self.terms.iter()
    }

    /// Entry `k` is the number of terms with exactly `k` contractions.
    pub fn counts_by_order(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.original_length / 2 + 1];
        for t in &self.terms {
            counts[t.order()] += 1;
        }
        counts
    }

    /// Sum of coefficients of the fully contracted terms. In evaluated mode
    /// this is the reference-state expectation value of the product.
    pub fn scalar_part(&self) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| t.is_scalar())
            .map(|t| t.coefficient)
            .sum()
    }

    /// Drops terms whose coefficient is exactly zero.
    pub fn pruned(mut self) -> Self {
        self.terms.retain(|t| t.coefficient != Complex64::new(0.0, 0.0));
        self
    }

    /// Optional simplification: a fermionic normal product containing the
    /// same pure symbol twice vanishes. Field symbols are left alone since
    /// their components differ.
    pub fn without_nilpotent(mut self) -> Self {
        if self.statistics == Statistics::Fermi {
            self.terms.retain(|t| {
                let pure: Vec<_> = t
                    .normal_factors
                    .iter()
                    .filter(|f| f.symbol.is_pure())
                    .map(|f| (f.symbol.base, f.symbol.mode))
                    .collect();
                !pure.iter().enumerate().any(|(i, a)| pure[i + 1..].contains(a))
            });
        }
        self
    }
}

impl<'a> IntoIterator for &'a Expansion {
    type Item = &'a SignedTerm;
    type IntoIter = std::slice::Iter<'a, SignedTerm>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

/// `N[...]` of a product of pure symbols, positions taken from the slice.
pub fn normal_order(product: &[OperatorSymbol], statistics: Statistics) -> Result<SignedTerm> {
    normal_order_factors(factors_of(product), statistics)
}

/// `N[...]` of labelled pure factors: stable sort into canonical order,
/// coefficient `(±1)^P`.
pub fn normal_order_factors(factors: Vec<Factor>, statistics: Statistics) -> Result<SignedTerm> {
    normal_order_term(
        &SignedTerm::new(Complex64::new(1.0, 0.0), Vec::new(), factors),
        statistics,
    )
}

/// Normal-orders the residual factors of a term, keeping its coefficient and
/// contractions. Idempotent.
pub fn normal_order_term(term: &SignedTerm, statistics: Statistics) -> Result<SignedTerm> {
    if let Some(bad) = term.normal_factors.iter().find(|f| !f.symbol.is_pure()) {
        return Err(Error::NotPureClass {
            position: bad.position,
        });
    }
    let mut out = term.clone();
    let parity = sort_with_parity(&mut out.normal_factors, canonical_cmp);
    if statistics.signed(parity) < 0 {
        out.coefficient = -out.coefficient;
    }
    Ok(out)
}

/// Expands a symbol over the model's `α⁺`/`α⁻` basis.
pub fn decompose(symbol: &OperatorSymbol, model: &dyn ModelDictionary) -> Result<Vec<(Complex64, OperatorSymbol)>> {
    model.check_symbol(symbol)?;
    model.decompose(symbol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inversions(p: &[usize]) -> usize {
        let mut n = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity(&[0, 1, 2]).unwrap(), 1);
        assert_eq!(parity(&[1, 0]).unwrap(), -1);
        assert_eq!(inversions(&[1, 2, 0]), 2);
        assert_eq!(parity(&[1, 2, 0]).unwrap(), 1);
        assert_eq!(parity(&[]).unwrap(), 1);
    }

    #[test]
    fn parity_rejects_non_bijections() {
        assert!(matches!(parity(&[0, 0]), Err(Error::InvalidPermutation { .. })));
        assert!(matches!(parity(&[0, 2]), Err(Error::InvalidPermutation { .. })));
    }

    #[test]
    fn swap_sign() {
        assert_eq!(Statistics::Bose.swap_sign(), 1);
        assert_eq!(Statistics::Fermi.swap_sign(), -1);
        assert_eq!(Statistics::Fermi.sign_pow(3), -1);
        assert_eq!(Statistics::Fermi.sign_pow(0), 1);
        assert_eq!(Statistics::Bose.sign_pow(7), 1);
    }

    #[test]
    fn normal_order_examples() {
        let a1p = OperatorSymbol::alpha_plus(0);
        let a2p = OperatorSymbol::alpha_plus(1);
        let a1m = OperatorSymbol::alpha_minus(0);
        let a3m = OperatorSymbol::alpha_minus(2);

        let t = normal_order(&[a1p, a2p], Statistics::Fermi).unwrap();
        assert_eq!(t.coefficient, Complex64::new(1.0, 0.0));
        assert_eq!(t.positions(), vec![0, 1]);

        let t = normal_order(&[a1m, a2p], Statistics::Fermi).unwrap();
        assert_eq!(t.coefficient, Complex64::new(-1.0, 0.0));
        assert_eq!(t.normal_factors[0].symbol, a2p);
        assert_eq!(t.normal_factors[1].symbol, a1m);

        let t = normal_order(&[a1m, a2p, a3m], Statistics::Bose).unwrap();
        assert_eq!(t.coefficient, Complex64::new(1.0, 0.0));
        assert_eq!(t.positions(), vec![1, 0, 2]);
    }

    #[test]
    fn normal_order_rejects_fields() {
        let err = normal_order(&[OperatorSymbol::alpha_plus(0), OperatorSymbol::psi(1)], Statistics::Fermi);
        assert_eq!(err, Err(Error::NotPureClass { position: 1 }));
    }

    #[test]
    fn normal_order_is_idempotent() {
        let p = [
            OperatorSymbol::alpha_minus(2),
            OperatorSymbol::alpha_plus(1),
            OperatorSymbol::alpha_minus(0),
            OperatorSymbol::alpha_plus(3),
        ];
        let once = normal_order(&p, Statistics::Fermi).unwrap();
        let twice = normal_order_term(&once, Statistics::Fermi).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn canonical_order_puts_fields_between_blocks() {
        let fs = factors_of(&[
            OperatorSymbol::alpha_minus(0),
            OperatorSymbol::psi(4),
            OperatorSymbol::alpha_plus(2),
            OperatorSymbol::psi_dag(1),
        ]);
        let mut sorted = fs.clone();
        sorted.sort_by(canonical_cmp);
        let pos: Vec<_> = sorted.iter().map(|f| f.position).collect();
        assert_eq!(pos, vec![2, 1, 3, 0]);
    }

    #[test]
    fn nilpotent_pass_only_touches_pure_repeats() {
        let a = OperatorSymbol::alpha_minus(0);
        let term = SignedTerm::new(Complex64::new(1.0, 0.0), vec![], factors_of(&[a, a]));
        let e = Expansion::from_terms(vec![term], Statistics::Fermi, 2, false, false);
        assert_eq!(e.len(), 1);
        assert!(e.without_nilpotent().is_empty());

        let p = OperatorSymbol::psi(0);
        let term = SignedTerm::new(Complex64::new(1.0, 0.0), vec![], factors_of(&[p, p]));
        let e = Expansion::from_terms(vec![term], Statistics::Fermi, 2, false, false);
        assert_eq!(e.without_nilpotent().len(), 1);
    }

    #[test]
    fn statistics_parse() {
        assert_eq!("fermi".parse::<Statistics>().unwrap(), Statistics::Fermi);
        assert_eq!("Bose".parse::<Statistics>().unwrap(), Statistics::Bose);
        assert!("anyon".parse::<Statistics>().is_err());
    }
}
