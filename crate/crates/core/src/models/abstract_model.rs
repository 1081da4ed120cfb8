use std::collections::HashMap;

use num_complex::Complex64;

use super::{Components, ModelDictionary};
use crate::algebra::{Base, OperatorSymbol, Statistics};
use crate::error::{Error, Result};

/// Key of one declared contraction: the ordered pair of (base, mode).
pub type ContractionKey = ((Base, usize), (Base, usize));

/// Formal operators `A_i = A_i⁺ + A_i⁻` with no concrete reference state.
///
/// `A_i` is stored as a field annihilator at mode `i` (and `A_i†` as a field
/// creator); the split into `A_i⁺`, `A_i⁻` is formal, with unit weights.
/// Contractions are whatever the caller declares; asking for an undeclared
/// one is an error rather than a silent zero.
#[derive(Debug, Clone, PartialEq)]
pub struct AbstractModel {
    statistics: Statistics,
    n_modes: usize,
    table: HashMap<ContractionKey, Complex64>,
}

impl AbstractModel {
    pub fn new(statistics: Statistics, n_modes: usize) -> Self {
        AbstractModel {
            statistics,
            n_modes,
            table: HashMap::new(),
        }
    }

    /// Declares `⟨left right⟩ = value`. Time labels are ignored.
    pub fn with_contraction(mut self, left: OperatorSymbol, right: OperatorSymbol, value: Complex64) -> Self {
        self.insert(left, right, value);
        self
    }

    pub fn insert(&mut self, left: OperatorSymbol, right: OperatorSymbol, value: Complex64) {
        self.table.insert(((left.base, left.mode), (right.base, right.mode)), value);
    }

    pub fn contraction_table(&self) -> &HashMap<ContractionKey, Complex64> {
        &self.table
    }

    /// True if no contraction values were declared: only symbolic output is
    /// possible.
    pub fn is_formal(&self) -> bool {
        self.table.is_empty()
    }
}

impl ModelDictionary for AbstractModel {
    fn name(&self) -> &'static str {
        "abstract"
    }

    fn statistics(&self) -> Statistics {
        self.statistics
    }

    fn n_modes(&self) -> usize {
        self.n_modes
    }

    fn n_quasi_modes(&self) -> usize {
        self.n_modes
    }

    fn decompose(&self, symbol: &OperatorSymbol) -> Result<Components> {
        let one = Complex64::new(1.0, 0.0);
        Ok(match symbol.base {
            Base::FieldAnnihilate | Base::FieldCreate => vec![
                (one, OperatorSymbol::alpha_plus(symbol.mode)),
                (one, OperatorSymbol::alpha_minus(symbol.mode)),
            ],
            Base::QuasiAnnihilate | Base::QuasiCreate => vec![(one, *symbol)],
        })
    }

    fn contract(&self, a: &OperatorSymbol, b: &OperatorSymbol) -> Result<Complex64> {
        self.check_symbol(a)?;
        self.check_symbol(b)?;
        match (a.class(), b.class()) {
            // ⟨gs|α⁺ = 0 and α⁻|gs⟩ = 0
            (Some(crate::algebra::Class::Plus), _) | (_, Some(crate::algebra::Class::Minus)) => {
                return Ok(Complex64::new(0.0, 0.0))
            }
            _ => {}
        }
        self.table
            .get(&((a.base, a.mode), (b.base, b.mode)))
            .copied()
            .ok_or_else(|| Error::UndeclaredContraction {
                left: a.without_time().to_string(),
                right: b.without_time().to_string(),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formal_split() {
        let m = AbstractModel::new(Statistics::Fermi, 3);
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(
            m.decompose(&OperatorSymbol::psi(0)).unwrap(),
            vec![(one, OperatorSymbol::alpha_plus(0)), (one, OperatorSymbol::alpha_minus(0))]
        );
    }

    #[test]
    fn table_lookup() {
        let g = Complex64::new(0.25, -1.0);
        let m = AbstractModel::new(Statistics::Fermi, 2).with_contraction(
            OperatorSymbol::psi(0),
            OperatorSymbol::psi(1),
            g,
        );
        assert_eq!(m.contract(&OperatorSymbol::psi(0), &OperatorSymbol::psi(1)).unwrap(), g);
        assert!(matches!(
            m.contract(&OperatorSymbol::psi(1), &OperatorSymbol::psi(0)),
            Err(Error::UndeclaredContraction { .. })
        ));
        assert_eq!(
            m.contract(&OperatorSymbol::alpha_plus(0), &OperatorSymbol::psi(1)).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }
}
