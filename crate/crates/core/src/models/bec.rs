use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{push_nonzero, BareOp, Components, ModelDictionary};
use crate::algebra::{Base, OperatorSymbol, Statistics};
use crate::error::{Error, Result};
use crate::fock::StateSpec;

/// Condensate of independent bosons in the lowest level (eigenmode 0).
///
/// The condensate operator `c_0 = √V b` is replaced by the c-number
/// `√V·√(N/V)` (phase fixed real positive), so
///
/// ```text
/// ψ_i = ⟨i|0⟩ √V b + φ_i,    φ_i = Σ_{a≥1} ⟨i|a⟩ c_a,    φ_i |BEC⟩ = 0
/// ```
///
/// Quasi-particle labels `a ≥ 1` are the excited eigenmodes; label 0 is not
/// an operator in this model.
#[derive(Debug, Clone, PartialEq)]
pub struct BecModel {
    density: f64,
    volume: f64,
    overlaps: DMatrix<Complex64>,
    frequencies: Vec<f64>,
}

impl BecModel {
    /// Identity overlaps, `V = 1`, `ω_a = a`.
    pub fn new(n_modes: usize, density: f64) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::BadModel("a condensate needs at least one mode".into()));
        }
        if !(density >= 0.0 && density.is_finite()) {
            return Err(Error::BadModel(format!("density must be finite and >= 0, got {density}")));
        }
        Ok(BecModel {
            density,
            volume: 1.0,
            overlaps: DMatrix::identity(n_modes, n_modes),
            frequencies: (0..n_modes).map(|a| a as f64).collect(),
        })
    }

    pub fn with_volume(mut self, volume: f64) -> Result<Self> {
        if !(volume > 0.0 && volume.is_finite()) {
            return Err(Error::BadModel(format!("volume must be positive, got {volume}")));
        }
        self.volume = volume;
        Ok(self)
    }

    pub fn with_overlaps(mut self, overlaps: DMatrix<Complex64>) -> Result<Self> {
        let n = self.frequencies.len();
        if overlaps.nrows() != n || overlaps.ncols() != n {
            return Err(Error::ShapeError(format!("overlap matrix must be {n}x{n}")));
        }
        self.overlaps = overlaps;
        Ok(self)
    }

    pub fn with_frequencies(mut self, frequencies: Vec<f64>) -> Result<Self> {
        if frequencies.len() != self.frequencies.len() {
            return Err(Error::ShapeError(format!("expected {} frequencies", self.frequencies.len())));
        }
        self.frequencies = frequencies;
        Ok(self)
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// `N = (N/V)·V`.
    pub fn particle_number(&self) -> f64 {
        self.density * self.volume
    }

    /// The c-number `b = √(N/V)`.
    pub fn b(&self) -> f64 {
        self.density.sqrt()
    }

    /// Splits a field symbol into its condensate scalar and its excitation
    /// part; the excitation `φ_i` is returned as the same symbol, which this
    /// model decomposes over the excited modes only.
    pub fn bec_decompose(&self, symbol: &OperatorSymbol) -> Result<(Complex64, OperatorSymbol)> {
        Ok((self.condensate(symbol)?, *symbol))
    }
}

impl ModelDictionary for BecModel {
    fn name(&self) -> &'static str {
        "bec"
    }

    fn statistics(&self) -> Statistics {
        Statistics::Bose
    }

    fn n_modes(&self) -> usize {
        self.overlaps.nrows()
    }

    fn n_quasi_modes(&self) -> usize {
        self.overlaps.ncols()
    }

    fn check_symbol(&self, symbol: &OperatorSymbol) -> Result<()> {
        let n = if symbol.is_field() {
            self.n_modes()
        } else {
            self.n_quasi_modes()
        };
        if symbol.mode >= n || (symbol.is_pure() && symbol.mode == 0) {
            return Err(Error::UnknownMode {
                mode: symbol.mode,
                n_modes: n,
            });
        }
        Ok(())
    }

    fn decompose(&self, symbol: &OperatorSymbol) -> Result<Components> {
        let i = symbol.mode;
        let mut out = Vec::new();
        match symbol.base {
            Base::FieldAnnihilate => {
                for a in 1..self.overlaps.ncols() {
                    push_nonzero(&mut out, self.overlaps[(i, a)], OperatorSymbol::alpha_minus(a));
                }
            }
            Base::FieldCreate => {
                for a in 1..self.overlaps.ncols() {
                    push_nonzero(&mut out, self.overlaps[(i, a)].conj(), OperatorSymbol::alpha_plus(a));
                }
            }
            Base::QuasiAnnihilate | Base::QuasiCreate => out.push((Complex64::new(1.0, 0.0), *symbol)),
        }
        Ok(out)
    }

    fn quasi_energy(&self, a: usize) -> f64 {
        self.frequencies[a]
    }

    fn condensate(&self, symbol: &OperatorSymbol) -> Result<Complex64> {
        self.check_symbol(symbol)?;
        let amplitude = self.volume.sqrt() * self.b();
        let overlap = self.overlaps[(symbol.mode, 0)];
        let phase = |sign: f64| match symbol.time {
            Some(t) => Complex64::from_polar(1.0, sign * self.frequencies[0] * t),
            None => Complex64::new(1.0, 0.0),
        };
        Ok(match symbol.base {
            Base::FieldAnnihilate => overlap * amplitude * phase(-1.0),
            Base::FieldCreate => overlap.conj() * amplitude * phase(1.0),
            Base::QuasiAnnihilate | Base::QuasiCreate => Complex64::new(0.0, 0.0),
        })
    }

    fn has_condensate(&self) -> bool {
        true
    }

    /// The oracle realizes the full field, condensate mode included (label 0
    /// is realized too, so the free evolution covers it); only identities
    /// insensitive to the c-number replacement can be checked.
    fn realize(&self, symbol: &OperatorSymbol) -> Result<Vec<(Complex64, BareOp)>> {
        let i = symbol.mode;
        let n = self.overlaps.ncols();
        if i >= n {
            return Err(Error::UnknownMode { mode: i, n_modes: n });
        }
        Ok(match symbol.base {
            Base::FieldAnnihilate => (0..n).map(|a| (self.overlaps[(i, a)], BareOp::annihilate(a))).collect(),
            Base::FieldCreate => (0..n).map(|a| (self.overlaps[(i, a)].conj(), BareOp::create(a))).collect(),
            Base::QuasiAnnihilate => vec![(Complex64::new(1.0, 0.0), BareOp::annihilate(i))],
            Base::QuasiCreate => vec![(Complex64::new(1.0, 0.0), BareOp::create(i))],
        })
    }

    fn reference_state(&self) -> Result<StateSpec> {
        let n = self.particle_number();
        if (n - n.round()).abs() > 1e-9 {
            return Err(Error::BadStateSpec(format!(
                "N = density * volume = {n} is not an integer"
            )));
        }
        Ok(StateSpec::Bec { n: n.round() as usize })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_excitation_when_orthogonal_to_condensate() {
        let m = BecModel::new(3, 4.0).unwrap();
        let (scalar, phi) = m.bec_decompose(&OperatorSymbol::psi(1)).unwrap();
        assert_eq!(scalar, Complex64::new(0.0, 0.0));
        assert_eq!(phi, OperatorSymbol::psi(1));
        assert_eq!(
            m.decompose(&phi).unwrap(),
            vec![(Complex64::new(1.0, 0.0), OperatorSymbol::alpha_minus(1))]
        );
    }

    #[test]
    fn zero_density_has_no_condensate_term() {
        let m = BecModel::new(2, 0.0).unwrap();
        assert_eq!(m.condensate(&OperatorSymbol::psi(0)).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn condensate_amplitude() {
        let m = BecModel::new(2, 2.5).unwrap().with_volume(4.0).unwrap();
        let c = m.condensate(&OperatorSymbol::psi(0)).unwrap();
        assert!((c.re - 10f64.sqrt()).abs() < 1e-14);
        assert!(m.decompose(&OperatorSymbol::psi(0)).unwrap().is_empty());
    }

    #[test]
    fn condensate_label_is_not_a_quasi_particle() {
        let m = BecModel::new(2, 1.0).unwrap();
        assert!(m.check_symbol(&OperatorSymbol::alpha_minus(0)).is_err());
        assert!(m.check_symbol(&OperatorSymbol::alpha_minus(1)).is_ok());
    }
}
