use num_complex::Complex64;

use super::{push_nonzero, BareOp, Components, ModelDictionary};
use crate::algebra::{Base, OperatorSymbol, Statistics};
use crate::error::{Error, Result};
use crate::fock::StateSpec;

/// Tolerance on `|u|² + |v|² = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

/// Amplitudes of one Cooper pair `(k↑, −k↓)` and the quasi-particle energy
/// `E_k` shared by its two Bogoliubov operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcsPair {
    pub u: Complex64,
    pub v: Complex64,
    pub energy: f64,
}

impl BcsPair {
    pub fn new(u: Complex64, v: Complex64) -> Self {
        BcsPair { u, v, energy: 1.0 }
    }

    pub fn real(u: f64, v: f64) -> Self {
        Self::new(Complex64::new(u, 0.0), Complex64::new(v, 0.0))
    }

    pub fn with_energy(self, energy: f64) -> Self {
        BcsPair { energy, ..self }
    }
}

/// Paired reference state `Π_k (u_k + v_k a†_{k↑} a†_{−k↓}) |vac⟩`.
///
/// Spin-momentum modes are flattened as `(pair p, ↑) ↦ 2p` and
/// `(pair p, ↓) ↦ 2p + 1`, where the down mode of pair `p` stands for `−k`.
/// Quasi-particle labels follow the same layout: `2p` is `α_k`, `2p + 1` is
/// `β_{−k}`, with
///
/// ```text
/// α_k    = u a_{k↑}  − v a†_{−k↓}
/// β_{−k} = u a_{−k↓} + v a†_{k↑}
/// ```
///
/// Both annihilate the paired state and obey CAR. Inverting:
///
/// ```text
/// a_{k↑}   = u* α_k + v β†_{−k}        a†_{k↑}  = u α†_k  + v* β_{−k}
/// a_{−k↓}  = u* β_{−k} − v α†_k        a†_{−k↓} = u β†_{−k} − v* α_k
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct BcsModel {
    pairs: Vec<BcsPair>,
}

impl BcsModel {
    pub fn new(pairs: Vec<BcsPair>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::BadModel("a BCS state needs at least one pair".into()));
        }
        for (p, pair) in pairs.iter().enumerate() {
            let norm = pair.u.norm_sqr() + pair.v.norm_sqr();
            if (norm - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::BadModel(format!(
                    "pair {}: |u|^2 + |v|^2 = {norm}, expected 1",
                    p + 1
                )));
            }
        }
        Ok(BcsModel { pairs })
    }

    pub fn pairs(&self) -> &[BcsPair] {
        &self.pairs
    }

    /// Flattened mode index of `(pair, spin)`.
    pub fn mode(pair: usize, spin: Spin) -> usize {
        2 * pair
            + match spin {
                Spin::Up => 0,
                Spin::Down => 1,
            }
    }

    fn pair_of(&self, mode: usize) -> Result<(&BcsPair, Spin)> {
        self.pairs
            .get(mode / 2)
            .map(|p| (p, if mode % 2 == 0 { Spin::Up } else { Spin::Down }))
            .ok_or(Error::UnknownPair {
                mode,
                n_pairs: self.pairs.len(),
            })
    }

    /// Contraction `⟨BCS|x y|BCS⟩` of two spin-momentum field operators.
    pub fn bcs_contraction(&self, left: &OperatorSymbol, right: &OperatorSymbol) -> Result<Complex64> {
        for s in [left, right] {
            if !s.is_field() {
                return Err(Error::BadModel(format!("{s} is not a field operator")));
            }
        }
        self.contract(left, right)
    }
}

impl ModelDictionary for BcsModel {
    fn name(&self) -> &'static str {
        "bcs"
    }

    fn statistics(&self) -> Statistics {
        Statistics::Fermi
    }

    fn n_modes(&self) -> usize {
        2 * self.pairs.len()
    }

    fn n_quasi_modes(&self) -> usize {
        2 * self.pairs.len()
    }

    fn check_symbol(&self, symbol: &OperatorSymbol) -> Result<()> {
        self.pair_of(symbol.mode).map(|_| ())
    }

    fn decompose(&self, symbol: &OperatorSymbol) -> Result<Components> {
        let (pair, spin) = self.pair_of(symbol.mode)?;
        let (u, v) = (pair.u, pair.v);
        let alpha = symbol.mode - symbol.mode % 2;
        let beta = alpha + 1;
        let mut out = Vec::with_capacity(2);
        match (symbol.base, spin) {
            (Base::FieldAnnihilate, Spin::Up) => {
                push_nonzero(&mut out, u.conj(), OperatorSymbol::alpha_minus(alpha));
                push_nonzero(&mut out, v, OperatorSymbol::alpha_plus(beta));
            }
            (Base::FieldCreate, Spin::Up) => {
                push_nonzero(&mut out, u, OperatorSymbol::alpha_plus(alpha));
                push_nonzero(&mut out, v.conj(), OperatorSymbol::alpha_minus(beta));
            }
            (Base::FieldAnnihilate, Spin::Down) => {
                push_nonzero(&mut out, u.conj(), OperatorSymbol::alpha_minus(beta));
                push_nonzero(&mut out, -v, OperatorSymbol::alpha_plus(alpha));
            }
            (Base::FieldCreate, Spin::Down) => {
                push_nonzero(&mut out, u, OperatorSymbol::alpha_plus(beta));
                push_nonzero(&mut out, -v.conj(), OperatorSymbol::alpha_minus(alpha));
            }
            (Base::QuasiAnnihilate | Base::QuasiCreate, _) => out.push((Complex64::new(1.0, 0.0), *symbol)),
        }
        Ok(out)
    }

    fn quasi_energy(&self, quasi_mode: usize) -> f64 {
        self.pairs[quasi_mode / 2].energy
    }

    fn has_anomalous(&self) -> bool {
        self.pairs
            .iter()
            .any(|p| p.u != Complex64::new(0.0, 0.0) && p.v != Complex64::new(0.0, 0.0))
    }

    fn realize(&self, symbol: &OperatorSymbol) -> Result<Vec<(Complex64, BareOp)>> {
        let (pair, spin) = self.pair_of(symbol.mode)?;
        let (u, v) = (pair.u, pair.v);
        let up = symbol.mode - symbol.mode % 2;
        let down = up + 1;
        Ok(match (symbol.base, spin) {
            (Base::FieldAnnihilate, _) => vec![(Complex64::new(1.0, 0.0), BareOp::annihilate(symbol.mode))],
            (Base::FieldCreate, _) => vec![(Complex64::new(1.0, 0.0), BareOp::create(symbol.mode))],
            // α_k and α_k†
            (Base::QuasiAnnihilate, Spin::Up) => vec![(u, BareOp::annihilate(up)), (-v, BareOp::create(down))],
            (Base::QuasiCreate, Spin::Up) => vec![(u.conj(), BareOp::create(up)), (-v.conj(), BareOp::annihilate(down))],
            // β_{−k} and β_{−k}†
            (Base::QuasiAnnihilate, Spin::Down) => vec![(u, BareOp::annihilate(down)), (v, BareOp::create(up))],
            (Base::QuasiCreate, Spin::Down) => vec![(u.conj(), BareOp::create(down)), (v.conj(), BareOp::annihilate(up))],
        })
    }

    fn reference_state(&self) -> Result<StateSpec> {
        Ok(StateSpec::Bcs {
            pairs: self.pairs.iter().map(|p| (p.u, p.v)).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_enforced() {
        assert!(BcsModel::new(vec![BcsPair::real(0.6, 0.7)]).is_err());
        assert!(BcsModel::new(vec![BcsPair::real(0.6, 0.8)]).is_ok());
        assert!(BcsModel::new(vec![]).is_err());
    }

    #[test]
    fn unknown_pair() {
        let m = BcsModel::new(vec![BcsPair::real(0.6, 0.8)]).unwrap();
        assert_eq!(
            m.components(&OperatorSymbol::psi(2)),
            Err(Error::UnknownPair { mode: 2, n_pairs: 1 })
        );
    }

    #[test]
    fn vacuum_limit_has_no_anomalous_part() {
        let m = BcsModel::new(vec![BcsPair::real(1.0, 0.0)]).unwrap();
        assert!(!m.has_anomalous());
        let up = OperatorSymbol::psi(BcsModel::mode(0, Spin::Up));
        let down = OperatorSymbol::psi(BcsModel::mode(0, Spin::Down));
        assert_eq!(m.bcs_contraction(&up, &down).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn single_operator_expectation_vanishes() {
        // every field has one + and one - component on different labels, so
        // no c-number part survives
        let m = BcsModel::new(vec![BcsPair::real(0.6, 0.8)]).unwrap();
        for mode in 0..2 {
            for s in [OperatorSymbol::psi(mode), OperatorSymbol::psi_dag(mode)] {
                assert_eq!(m.condensate(&s).unwrap(), Complex64::new(0.0, 0.0));
                assert_eq!(m.decompose(&s).unwrap().len(), 2);
            }
        }
    }
}
