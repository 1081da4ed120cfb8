//! Contractions, the inductive expansion step and the full static theorem.
//!
//! [`wick_expand`] folds the product from the right with [`lemma3_step`]:
//!
//! ```text
//! A₀ N[B₁…B_m] = N[A₀B₁…B_m] + Σ_i (±1)^(i−1) ⟨A₀B_i⟩ N[B₁…B̸_i…B_m]
//! ```
//!
//! [`vev`] takes the other route and sums signed products of contractions
//! over all pair partitions; the two must agree on the scalar part.

use num_complex::Complex64;

use crate::algebra::{factors_of, Expansion, Factor, OperatorSymbol, SignedTerm, Statistics};
use crate::error::{Error, Result};
use crate::models::ModelDictionary;
use crate::partitions::{signed_pairing_sum, signed_pairing_sum_par, PairPartitions};

/// How contractions appear in the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContractionMode {
    /// Contractions stay formal `⟨ij⟩`; coefficients are signs only.
    #[default]
    Symbolic,
    /// Contraction values are multiplied into the coefficients.
    Evaluated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExpandOptions {
    pub mode: ContractionMode,
    /// Drop terms whose coefficient is exactly zero.
    pub prune_zeros: bool,
}

impl ExpandOptions {
    pub fn symbolic() -> Self {
        ExpandOptions::default()
    }

    pub fn evaluated() -> Self {
        ExpandOptions {
            mode: ContractionMode::Evaluated,
            prune_zeros: false,
        }
    }

    pub fn pruned(self) -> Self {
        ExpandOptions {
            prune_zeros: true,
            ..self
        }
    }
}

/// `⟨gs|a b|gs⟩` in the given operator order.
pub fn contract(a: &OperatorSymbol, b: &OperatorSymbol, model: &dyn ModelDictionary) -> Result<Complex64> {
    model.contract(a, b)
}

/// `(±1)^n`: the sign of pulling a contraction out across `n` operators.
pub fn extended_contraction_sign(n_between: usize, statistics: Statistics) -> i8 {
    statistics.sign_pow(n_between)
}

/// Ordered contraction values `⟨A_i A_j⟩` for `i < j`, computed once per
/// product.
#[derive(Debug, Clone)]
pub(crate) struct ContractionTable {
    n: usize,
    values: Vec<Complex64>,
}

impl ContractionTable {
    pub(crate) fn build(n: usize, f: impl Fn(usize, usize) -> Result<Complex64>) -> Result<Self> {
        let mut values = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in i + 1..n {
                values[i * n + j] = f(i, j)?;
            }
        }
        Ok(ContractionTable { n, values })
    }

    pub(crate) fn get(&self, i: usize, j: usize) -> Complex64 {
        debug_assert!(i < j);
        self.values[i * self.n + j]
    }
}

fn with_sign(c: Complex64, sign: i8) -> Complex64 {
    if sign < 0 {
        -c
    } else {
        c
    }
}

/// One application of the inductive step, without canonicalization.
/// `value(head, b)` returns `None` for a formal contraction.
fn step_terms(
    head: Factor,
    tail: &SignedTerm,
    statistics: Statistics,
    prune: bool,
    value: &dyn Fn(&Factor, &Factor) -> Option<Complex64>,
    out: &mut Vec<SignedTerm>,
) {
    let mut factors = Vec::with_capacity(tail.normal_factors.len() + 1);
    factors.push(head);
    factors.extend_from_slice(&tail.normal_factors);
    out.push(SignedTerm::new(tail.coefficient, tail.contractions.clone(), factors));

    for (idx, b) in tail.normal_factors.iter().enumerate() {
        let coefficient = match value(&head, b) {
            None => tail.coefficient,
            Some(v) => {
                if prune && v == Complex64::new(0.0, 0.0) {
                    continue;
                }
                tail.coefficient * v
            }
        };
        let coefficient = with_sign(coefficient, extended_contraction_sign(idx, statistics));
        let mut contractions = Vec::with_capacity(tail.contractions.len() + 1);
        contractions.push((head.position.min(b.position), head.position.max(b.position)));
        contractions.extend_from_slice(&tail.contractions);
        let mut rest = Vec::with_capacity(tail.normal_factors.len() - 1);
        rest.extend_from_slice(&tail.normal_factors[..idx]);
        rest.extend_from_slice(&tail.normal_factors[idx + 1..]);
        out.push(SignedTerm::new(coefficient, contractions, rest));
    }
}

/// `head · tail` for a normal-ordered `tail`, as the sum of `N[head tail]`
/// and every single contraction of `head` with a factor of `tail`.
///
/// Signs follow the stored order of `tail.normal_factors`. Contraction
/// values, in evaluated mode, are `⟨head b⟩` in that operator order.
pub fn lemma3_step(
    head: &Factor,
    tail: &SignedTerm,
    model: &dyn ModelDictionary,
    mode: ContractionMode,
) -> Result<Expansion> {
    let statistics = model.statistics();
    model.check_symbol(&head.symbol)?;
    let mut values = Vec::with_capacity(tail.normal_factors.len());
    for b in &tail.normal_factors {
        model.check_symbol(&b.symbol)?;
        values.push(match mode {
            ContractionMode::Symbolic => None,
            ContractionMode::Evaluated => Some(model.contract(&head.symbol, &b.symbol)?),
        });
    }
    let lookup = |_: &Factor, b: &Factor| {
        let idx = tail.normal_factors.iter().position(|f| f.position == b.position)?;
        values[idx]
    };
    let mut out = Vec::new();
    step_terms(*head, tail, statistics, false, &lookup, &mut out);
    let n = tail.normal_factors.len() + 1 + 2 * tail.contractions.len();
    Ok(Expansion::from_terms(
        out,
        statistics,
        n,
        mode == ContractionMode::Evaluated,
        false,
    ))
}

/// Right fold of the inductive step over a product. `table` is `None` in
/// symbolic mode.
pub(crate) fn fold_terms(
    factors: &[Factor],
    statistics: Statistics,
    table: Option<&ContractionTable>,
    prune: bool,
) -> Vec<SignedTerm> {
    let Some((last, rest)) = factors.split_last() else {
        return Vec::new();
    };
    let value = |a: &Factor, b: &Factor| table.map(|t| t.get(a.position, b.position));
    let mut terms = vec![SignedTerm::single(*last)];
    for head in rest.iter().rev() {
        let mut next = Vec::with_capacity(terms.len() * (terms[0].normal_factors.len() + 1));
        for tail in &terms {
            step_terms(*head, tail, statistics, prune, &value, &mut next);
        }
        terms = next;
    }
    terms
}

pub(crate) fn check_product(product: &[OperatorSymbol], model: &dyn ModelDictionary) -> Result<()> {
    if product.is_empty() {
        return Err(Error::EmptyProduct);
    }
    product.iter().try_for_each(|s| model.check_symbol(s))
}

/// Full static expansion: `N[…]` plus all single, double, … contractions.
///
/// Time labels, if present, only enter through the free-evolution phases of
/// the contraction values; use [`crate::time_ordered::wick_expand_t`] for
/// time-ordered products.
pub fn wick_expand(product: &[OperatorSymbol], model: &dyn ModelDictionary, options: ExpandOptions) -> Result<Expansion> {
    check_product(product, model)?;
    if model.has_condensate() {
        return Err(Error::Unsupported(format!(
            "the {} model has a c-number part; only expectation values are available",
            model.name()
        )));
    }
    let statistics = model.statistics();
    let table = match options.mode {
        ContractionMode::Symbolic => None,
        ContractionMode::Evaluated => Some(ContractionTable::build(product.len(), |i, j| {
            model.contract(&product[i], &product[j])
        })?),
    };
    let terms = fold_terms(&factors_of(product), statistics, table.as_ref(), options.prune_zeros);
    let expansion = Expansion::from_terms(
        terms,
        statistics,
        product.len(),
        options.mode == ContractionMode::Evaluated,
        false,
    );
    Ok(if options.prune_zeros {
        expansion.pruned()
    } else {
        expansion
    })
}

/// `⟨gs|A₁…A_n|gs⟩` as a signed sum over pair partitions.
///
/// Odd products give exactly zero unless the model has a condensate, in which
/// case each field's c-number part is distributed over subsets first.
pub fn vev(product: &[OperatorSymbol], model: &dyn ModelDictionary) -> Result<Complex64> {
    vev_with(product, model, false)
}

/// [`vev`] with the partition stream split across threads. Results are bit
/// identical to the serial version.
pub fn vev_par(product: &[OperatorSymbol], model: &dyn ModelDictionary) -> Result<Complex64> {
    vev_with(product, model, true)
}

fn vev_with(product: &[OperatorSymbol], model: &dyn ModelDictionary, parallel: bool) -> Result<Complex64> {
    check_product(product, model)?;
    pairing_vev(product, model, parallel, |a, b| model.contract(a, b))
}

/// Shared by the static and time-ordered expectation values: `pair(a, b)`
/// is the ordered two-point value for `a` left of `b` in the product.
pub(crate) fn pairing_vev(
    product: &[OperatorSymbol],
    model: &dyn ModelDictionary,
    parallel: bool,
    pair: impl Fn(&OperatorSymbol, &OperatorSymbol) -> Result<Complex64>,
) -> Result<Complex64> {
    let n = product.len();
    if !model.has_condensate() && n % 2 == 1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let table = ContractionTable::build(n, |i, j| pair(&product[i], &product[j]))?;
    let fermionic = model.statistics().is_fermi();
    let pairing_sum = |positions: &[usize]| -> Result<Complex64> {
        if positions.len() % 2 == 1 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let value = |i: usize, j: usize| table.get(positions[i], positions[j]);
        if parallel {
            signed_pairing_sum_par(positions.len(), fermionic, value)
        } else {
            signed_pairing_sum(positions.len(), fermionic, value)
        }
    };
    if !model.has_condensate() {
        let all: Vec<usize> = (0..n).collect();
        return pairing_sum(&all);
    }
    if n >= 31 {
        return Err(Error::ShapeError(format!("condensate expansion of {n} fields is too large")));
    }
    let scalars: Vec<Complex64> = product.iter().map(|s| model.condensate(s)).collect::<Result<_>>()?;
    // bosonic: c-numbers commute out without signs
    let mut acc = Complex64::new(0.0, 0.0);
    for mask in 0u32..(1u32 << n) {
        let mut weight = Complex64::new(1.0, 0.0);
        let mut rest = Vec::with_capacity(n);
        for (k, scalar) in scalars.iter().enumerate() {
            if mask & (1 << k) != 0 {
                weight *= scalar;
            } else {
                rest.push(k);
            }
        }
        if weight == Complex64::new(0.0, 0.0) {
            continue;
        }
        acc += weight * pairing_sum(&rest)?;
    }
    Ok(acc)
}

/// The corollary written out: one scalar term per pair partition with its
/// sign and formal contractions. Odd products give an empty expansion.
pub fn vev_symbolic(product: &[OperatorSymbol], model: &dyn ModelDictionary) -> Result<Expansion> {
    check_product(product, model)?;
    let statistics = model.statistics();
    let n = product.len();
    let mut terms = Vec::new();
    if n % 2 == 0 {
        for p in PairPartitions::new(n)? {
            let sign = statistics.signed(p.sign);
            terms.push(SignedTerm::new(
                with_sign(Complex64::new(1.0, 0.0), sign),
                p.pairs,
                Vec::new(),
            ));
        }
    }
    Ok(Expansion::from_terms(terms, statistics, n, false, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{AbstractModel, FermiSeaModel};

    fn a(i: usize) -> OperatorSymbol {
        OperatorSymbol::psi(i)
    }

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn extended_sign() {
        assert_eq!(extended_contraction_sign(0, Statistics::Fermi), 1);
        assert_eq!(extended_contraction_sign(3, Statistics::Fermi), -1);
        assert_eq!(extended_contraction_sign(7, Statistics::Bose), 1);
    }

    #[test]
    fn step_with_plus_head_has_no_contractions() {
        let m = AbstractModel::new(Statistics::Fermi, 4);
        let head = Factor::new(0, OperatorSymbol::alpha_plus(0));
        let tail = SignedTerm::new(one(), vec![], vec![Factor::new(1, a(1)), Factor::new(2, a(2))]);
        let e = lemma3_step(&head, &tail, &m, ContractionMode::Evaluated).unwrap();
        let nonzero: Vec<_> = e.iter().filter(|t| t.coefficient != Complex64::new(0.0, 0.0)).collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0].order(), 0);
    }

    #[test]
    fn step_with_two_creators() {
        let m = AbstractModel::new(Statistics::Fermi, 3);
        let head = Factor::new(0, OperatorSymbol::alpha_minus(0));
        let tail = SignedTerm::new(
            one(),
            vec![],
            vec![
                Factor::new(1, OperatorSymbol::alpha_plus(1)),
                Factor::new(2, OperatorSymbol::alpha_plus(2)),
            ],
        );
        let e = lemma3_step(&head, &tail, &m, ContractionMode::Symbolic).unwrap();
        let by_pair: Vec<_> = e
            .iter()
            .map(|t| (t.contractions.clone(), t.coefficient.re, t.positions()))
            .collect();
        assert_eq!(
            by_pair,
            vec![
                // N[α₀⁻α₁⁺α₂⁺] = +α₁⁺α₂⁺α₀⁻ after two swaps
                (vec![], 1.0, vec![1, 2, 0]),
                (vec![(0, 1)], 1.0, vec![2]),
                (vec![(0, 2)], -1.0, vec![1]),
            ]
        );
    }

    #[test]
    fn two_operators() {
        let m = AbstractModel::new(Statistics::Fermi, 2);
        let e = wick_expand(&[a(0), a(1)], &m, ExpandOptions::symbolic()).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.terms[0].positions(), vec![0, 1]);
        assert_eq!(e.terms[1].contractions, vec![(0, 1)]);
        assert!(e.terms[1].is_scalar());
    }

    #[test]
    fn empty_product() {
        let m = AbstractModel::new(Statistics::Fermi, 1);
        assert_eq!(wick_expand(&[], &m, ExpandOptions::symbolic()), Err(Error::EmptyProduct));
    }

    #[test]
    fn fermi_sea_contractions() {
        let m = FermiSeaModel::new(2, 1).unwrap();
        assert_eq!(contract(&a(1), &OperatorSymbol::psi_dag(1), &m).unwrap(), one());
        assert_eq!(contract(&a(0), &OperatorSymbol::psi_dag(0), &m).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn leftmost_plus_kills_vev() {
        let m = FermiSeaModel::new(3, 1).unwrap();
        let p = [OperatorSymbol::alpha_plus(2), a(2), OperatorSymbol::psi_dag(1), a(1)];
        assert_eq!(vev(&p, &m).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn odd_vev_is_exact_zero() {
        let m = FermiSeaModel::new(3, 1).unwrap();
        let v = vev(&[a(0), OperatorSymbol::psi_dag(0), a(1)], &m).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn serial_and_parallel_agree_bitwise() {
        let m = FermiSeaModel::new(4, 2)
            .unwrap()
            .with_overlaps(nalgebra::DMatrix::from_fn(4, 4, |i, j| {
                Complex64::new(((i * 7 + j * 3) % 5) as f64 * 0.1, (i + j) as f64 * 0.05)
            }))
            .unwrap();
        let p: Vec<_> = (0..10)
            .map(|k| if k % 2 == 0 { a(k % 4) } else { OperatorSymbol::psi_dag((k + 1) % 4) })
            .collect();
        let s = vev(&p, &m).unwrap();
        let q = vev_par(&p, &m).unwrap();
        assert_eq!(s.re.to_bits(), q.re.to_bits());
        assert_eq!(s.im.to_bits(), q.im.to_bits());
    }

    #[test]
    fn symbolic_vev_lists_partitions() {
        let m = AbstractModel::new(Statistics::Fermi, 4);
        let e = vev_symbolic(&[a(0), a(1), a(2), a(3)], &m).unwrap();
        let signs: Vec<_> = e.iter().map(|t| t.coefficient.re).collect();
        assert_eq!(signs, vec![1.0, -1.0, 1.0]);
        assert!(vev_symbolic(&[a(0), a(1), a(2)], &m).unwrap().is_empty());
    }
}
