//! Time ordering, T-contractions, the time-ordered theorem and free
//! n-particle Green functions.
//!
//! Equal-time convention: operators with the same time label are ordered with
//! creation-type symbols (`ψ†`, `α⁺`) to the left, otherwise by position.
//! So `T[ψ(t)ψ†(t)] = ∓ψ†(t)ψ(t)`, the usual `G(t, t⁺)` reading.
//!
//! Green functions use `iⁿ G(x₁…xₙ, y₁…yₙ) = ⟨gs|T ψ(x₁)…ψ(xₙ) ψ†(yₙ)…ψ†(y₁)|gs⟩`,
//! so `G⁰(x, y) = −i ⟨T ψ(x) ψ†(y)⟩`.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{factors_of, sort_with_parity, Expansion, Factor, OperatorSymbol, SignedTerm, Statistics};
use crate::error::{Error, Result};
use crate::models::ModelDictionary;
use crate::wick::{check_product, fold_terms, pairing_vev, ContractionMode, ContractionTable, ExpandOptions};

/// Largest matrix accepted by [`permanent`].
pub const MAX_PERMANENT: usize = 20;

fn require_times(product: &[OperatorSymbol]) -> Result<Vec<f64>> {
    product
        .iter()
        .enumerate()
        .map(|(position, s)| s.time.ok_or(Error::MissingTime { position }))
        .collect()
}

/// Later times first; equal times put creation-type symbols first; then
/// position.
fn chronological_cmp(a: &Factor, b: &Factor) -> Ordering {
    let (ta, tb) = (a.symbol.time.unwrap_or(0.0), b.symbol.time.unwrap_or(0.0));
    tb.total_cmp(&ta)
        .then_with(|| b.symbol.is_creation_type().cmp(&a.symbol.is_creation_type()))
        .then_with(|| a.position.cmp(&b.position))
}

/// `T[A₁…Aₙ]` as a sign times the chronologically sorted product. The
/// returned `normal_factors` hold the sorted factors.
pub fn time_order(product: &[OperatorSymbol], statistics: Statistics) -> Result<SignedTerm> {
    require_times(product)?;
    let mut factors = factors_of(product);
    let parity = sort_with_parity(&mut factors, chronological_cmp);
    let sign = if statistics.signed(parity) < 0 { -1.0 } else { 1.0 };
    Ok(SignedTerm::new(Complex64::new(sign, 0.0), Vec::new(), factors))
}

/// `⟨gs|T a b|gs⟩ = θ(t_a − t_b)⟨ab⟩ ± θ(t_b − t_a)⟨ba⟩`, with free-evolution
/// phases on both contractions and the equal-time convention above.
pub fn t_contract(a: &OperatorSymbol, b: &OperatorSymbol, model: &dyn ModelDictionary) -> Result<Complex64> {
    let pair = [*a, *b];
    let ordered = time_order(&pair, model.statistics())?;
    if ordered.normal_factors[0].position == 0 {
        model.contract(a, b)
    } else {
        Ok(ordered.coefficient * model.contract(b, a)?)
    }
}

/// The time-ordered theorem: the structure of [`crate::wick::wick_expand`]
/// with T-contractions in place of ordinary ones.
pub fn wick_expand_t(product: &[OperatorSymbol], model: &dyn ModelDictionary, options: ExpandOptions) -> Result<Expansion> {
    check_product(product, model)?;
    require_times(product)?;
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
            t_contract(&product[i], &product[j], model)
        })?),
    };
    let terms = fold_terms(&factors_of(product), statistics, table.as_ref(), options.prune_zeros);
    let expansion = Expansion::from_terms(
        terms,
        statistics,
        product.len(),
        options.mode == ContractionMode::Evaluated,
        true,
    );
    Ok(if options.prune_zeros {
        expansion.pruned()
    } else {
        expansion
    })
}

/// `⟨gs|T A₁…Aₙ|gs⟩` as a pair-partition sum of T-contractions.
pub fn vev_t(product: &[OperatorSymbol], model: &dyn ModelDictionary) -> Result<Complex64> {
    check_product(product, model)?;
    require_times(product)?;
    pairing_vev(product, model, false, |a, b| t_contract(a, b, model))
}

/// A spacetime label `(mode, time)`, mode 0-based.
pub type Point = (usize, f64);

/// `G⁰(x_i, y_j)` for all row and column labels.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorMatrix {
    pub entries: DMatrix<Complex64>,
    pub rows: Vec<Point>,
    pub cols: Vec<Point>,
}

impl PropagatorMatrix {
    pub fn build(xs: &[Point], ys: &[Point], model: &dyn ModelDictionary) -> Result<Self> {
        let minus_i = Complex64::new(0.0, -1.0);
        let mut entries = DMatrix::zeros(xs.len(), ys.len());
        for (i, &(mx, tx)) in xs.iter().enumerate() {
            for (j, &(my, ty)) in ys.iter().enumerate() {
                let psi = OperatorSymbol::psi(mx).at(tx);
                let psi_dag = OperatorSymbol::psi_dag(my).at(ty);
                model.check_symbol(&psi)?;
                model.check_symbol(&psi_dag)?;
                entries[(i, j)] = minus_i * t_contract(&psi, &psi_dag, model)?;
            }
        }
        Ok(PropagatorMatrix {
            entries,
            rows: xs.to_vec(),
            cols: ys.to_vec(),
        })
    }
}

fn check_points(xs: &[Point], ys: &[Point]) -> Result<()> {
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(Error::ShapeError(format!(
            "need n >= 1 creation and annihilation points, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    Ok(())
}

/// `ψ(x₁)…ψ(xₙ) ψ†(yₙ)…ψ†(y₁)`.
pub fn green_product(xs: &[Point], ys: &[Point]) -> Vec<OperatorSymbol> {
    xs.iter()
        .map(|&(m, t)| OperatorSymbol::psi(m).at(t))
        .chain(ys.iter().rev().map(|&(m, t)| OperatorSymbol::psi_dag(m).at(t)))
        .collect()
}

/// Free n-particle Green function. Fermions give `det G⁰`, bosons `perm G⁰`;
/// models with anomalous contractions or a condensate always go through
/// [`green_by_partitions`].
pub fn n_particle_green(xs: &[Point], ys: &[Point], model: &dyn ModelDictionary) -> Result<Complex64> {
    check_points(xs, ys)?;
    if model.has_anomalous() || model.has_condensate() {
        return green_by_partitions(xs, ys, model);
    }
    let g0 = PropagatorMatrix::build(xs, ys, model)?;
    match model.statistics() {
        Statistics::Fermi => determinant(&g0.entries),
        Statistics::Bose => permanent(&g0.entries),
    }
}

/// `(−i)ⁿ ⟨T ψ(x₁)…ψ†(y₁)⟩` summed over all pair partitions directly.
pub fn green_by_partitions(xs: &[Point], ys: &[Point], model: &dyn ModelDictionary) -> Result<Complex64> {
    check_points(xs, ys)?;
    let product = green_product(xs, ys);
    let phase = Complex64::new(0.0, -1.0).powu(xs.len() as u32);
    Ok(phase * vev_t(&product, model)?)
}

fn require_square(m: &DMatrix<Complex64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::ShapeError(format!("matrix is {}x{}, not square", m.nrows(), m.ncols())));
    }
    Ok(m.nrows())
}

pub fn determinant(m: &DMatrix<Complex64>) -> Result<Complex64> {
    require_square(m)?;
    Ok(m.clone().determinant())
}

/// Ryser's formula with Gray-code column updates, `O(2ⁿ n)`.
pub fn permanent(m: &DMatrix<Complex64>) -> Result<Complex64> {
    let n = require_square(m)?;
    if n > MAX_PERMANENT {
        return Err(Error::ShapeError(format!("permanent limited to {MAX_PERMANENT}x{MAX_PERMANENT}, got {n}x{n}")));
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut gray = 0u32;
    for k in 1u32..(1u32 << n) {
        let next = k ^ (k >> 1);
        let col = (gray ^ next).trailing_zeros() as usize;
        let added = next & (1 << col) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if added {
                *s += m[(i, col)];
            } else {
                *s -= m[(i, col)];
            }
        }
        gray = next;
        let prod: Complex64 = row_sums.iter().product();
        if next.count_ones() % 2 == n as u32 % 2 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::FermiSeaModel;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn later_time_moves_left() {
        let p = [OperatorSymbol::psi(0).at(1.0), OperatorSymbol::psi(1).at(2.0)];
        let t = time_order(&p, Statistics::Fermi).unwrap();
        assert_eq!(t.coefficient, c(-1.0, 0.0));
        assert_eq!(t.positions(), vec![1, 0]);

        let t = time_order(&[p[1], p[0]], Statistics::Fermi).unwrap();
        assert_eq!(t.coefficient, c(1.0, 0.0));
        assert_eq!(t.positions(), vec![0, 1]);
    }

    #[test]
    fn equal_times_put_creation_left() {
        let p = [OperatorSymbol::psi(0).at(0.0), OperatorSymbol::psi_dag(0).at(0.0)];
        let t = time_order(&p, Statistics::Fermi).unwrap();
        assert_eq!(t.coefficient, c(-1.0, 0.0));
        assert_eq!(t.normal_factors[0].symbol, p[1]);
    }

    #[test]
    fn missing_time() {
        let p = [OperatorSymbol::psi(0).at(0.0), OperatorSymbol::psi(0)];
        assert_eq!(time_order(&p, Statistics::Bose), Err(Error::MissingTime { position: 1 }));
    }

    #[test]
    fn twist_property() {
        let m = FermiSeaModel::new(3, 1).unwrap();
        let a = OperatorSymbol::psi(1).at(0.4);
        let b = OperatorSymbol::psi_dag(1).at(-0.3);
        assert_eq!(t_contract(&a, &b, &m).unwrap(), -t_contract(&b, &a, &m).unwrap());
    }

    #[test]
    fn single_particle_propagator() {
        let m = FermiSeaModel::new(2, 1).unwrap().with_frequencies(vec![0.3, 0.7]).unwrap();
        let g = n_particle_green(&[(1, 0.5)], &[(1, 0.0)], &m).unwrap();
        let expect = c(0.0, -1.0) * Complex64::from_polar(1.0, -0.35);
        assert!((g - expect).norm() < 1e-15);
        // empty level, backward in time: no hole propagation
        let g = n_particle_green(&[(1, 0.0)], &[(1, 0.5)], &m).unwrap();
        assert_eq!(g, c(0.0, 0.0));
    }

    #[test]
    fn shape_errors() {
        let m = FermiSeaModel::new(2, 1).unwrap();
        assert!(matches!(n_particle_green(&[(0, 0.0)], &[], &m), Err(Error::ShapeError(_))));
        assert!(matches!(permanent(&DMatrix::zeros(2, 3)), Err(Error::ShapeError(_))));
        assert!(matches!(determinant(&DMatrix::zeros(3, 2)), Err(Error::ShapeError(_))));
    }

    #[test]
    fn small_permanents() {
        let ones = DMatrix::from_element(2, 2, c(1.0, 0.0));
        assert_eq!(permanent(&ones).unwrap(), c(2.0, 0.0));
        for n in 1..6 {
            assert_eq!(permanent(&DMatrix::identity(n, n)).unwrap(), c(1.0, 0.0));
        }
        let m = DMatrix::from_row_slice(3, 3, &[1., 2., 3., 4., 5., 6., 7., 8., 9.].map(|x| c(x, 0.0)));
        // 1(5·9+6·8) + 2(4·9+6·7) + 3(4·8+5·7)
        assert_eq!(permanent(&m).unwrap(), c(450.0, 0.0));
    }
}
